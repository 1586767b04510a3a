"""The inequality family for n-qubit complete-graph states.

T_n (temporal flavor) weighs four families of order-averaged correlators:

    (n-2) * <A_i A_j B_rest N_ij>     one per pair i<j
    alpha * <A_i B_rest>              one per vertex, alpha = C(n-1, 2)
     (-1) * <A_i A_j A_k B_rest>      one per triple
     (+1) * <N_ij N_jk>               three shared-vertex pairs per triple

with classical bound 2*alpha*n + 2*C(n,3) and quantum (= algebraic) bound
2*alpha*n + 4*C(n,3).  I_n (noncontextual flavor) is the same functional
over plain expectation values; its evaluation is only meaningful when the
operators inside each term commute, so the evaluator reports an ordering
spread as a commutativity diagnostic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb

import numpy as np

from .correlators import PiCorrelator, induced_orderings, pi_correlation, pi_correlator
from .errors import SchemaError
from .labels import Label, a, b, n as n_label, parse_label
from .model import Realization

MAX_BRUTEFORCE_LABELS = 24

VIOLATION_MARGIN = 1e-9


@dataclass(frozen=True)
class Term:
    coeff: int
    correlator: PiCorrelator


@dataclass(frozen=True)
class Inequality:
    n: int
    flavor: str  # "temporal" | "noncontextual"
    terms: tuple[Term, ...]
    classical_bound: int
    quantum_bound: int
    alpha: int

    def labels(self) -> tuple[Label, ...]:
        seen = sorted({lab for t in self.terms for lab in t.correlator.labels})
        return tuple(seen)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "flavor": self.flavor,
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
            "alpha": self.alpha,
            "terms": [
                {
                    "coeff": t.coeff,
                    "labels": [str(lab) for lab in t.correlator.labels],
                    "cover": [[str(lab) for lab in seq] for seq in t.correlator.cover],
                }
                for t in self.terms
            ],
        }


def bound_formulas(n: int) -> tuple[int, int, int]:
    """(classical bound, quantum bound, alpha) in exact integers."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    alpha = comb(n - 1, 2)
    return (
        2 * alpha * n + 2 * comb(n, 3),
        2 * alpha * n + 4 * comb(n, 3),
        alpha,
    )


def _term_multisets(n: int) -> list[tuple[int, list[Label]]]:
    """Coefficient and label multiset per term, in report order: the N-type
    terms in lexicographic (i, j), then single-A, then triple-A, then the
    shared-vertex N pairs grouped by triple."""
    alpha = comb(n - 1, 2)
    out: list[tuple[int, list[Label]]] = []
    for i, j in combinations(range(1, n + 1), 2):
        labs = [a(i), a(j)] + [b(m) for m in range(1, n + 1) if m not in (i, j)]
        out.append((n - 2, labs + [n_label(i, j)]))
    for i in range(1, n + 1):
        out.append((alpha, [a(i)] + [b(m) for m in range(1, n + 1) if m != i]))
    for i, j, k in combinations(range(1, n + 1), 3):
        labs = [a(i), a(j), a(k)] + [b(m) for m in range(1, n + 1) if m not in (i, j, k)]
        out.append((-1, labs))
    for i, j, k in combinations(range(1, n + 1), 3):
        out.append((1, [n_label(i, j), n_label(j, k)]))
        out.append((1, [n_label(j, k), n_label(i, k)]))
        out.append((1, [n_label(i, k), n_label(i, j)]))
    return out


def _build(n: int, flavor: str) -> Inequality:
    from .pauli import dense_limit

    if not 3 <= n <= dense_limit():
        raise ValueError(f"n must be in 3..{dense_limit()}, got {n}")
    eta_c, eta_q, alpha = bound_formulas(n)
    terms = []
    for coeff, labs in _term_multisets(n):
        if flavor == "temporal":
            pc = pi_correlator(labs)
        else:
            ordered = tuple(sorted(labs))
            pc = PiCorrelator(ordered, (ordered,))
        terms.append(Term(coeff, pc))
    return Inequality(n, flavor, tuple(terms), eta_c, eta_q, alpha)


def build_tn(n: int) -> Inequality:
    return _build(n, "temporal")


def build_t3() -> Inequality:
    return build_tn(3)


def build_in(n: int) -> Inequality:
    return _build(n, "noncontextual")


def build_i3() -> Inequality:
    return build_in(3)


def inequality_from_dict(data: dict) -> Inequality:
    try:
        n = int(data["n"])
        flavor = data["flavor"]
        eta_c = int(data["classical_bound"])
        eta_q = int(data["quantum_bound"])
        alpha = int(data["alpha"])
        raw_terms = data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"inequality payload missing field: {exc}") from None
    if flavor not in ("temporal", "noncontextual"):
        raise SchemaError(f"unknown flavor {flavor!r}")
    terms = []
    for entry in raw_terms:
        try:
            coeff = int(entry["coeff"])
            labs = tuple(parse_label(t) for t in entry["labels"])
            cover = tuple(tuple(parse_label(t) for t in seq) for seq in entry["cover"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed term: {exc}") from None
        for seq in cover:
            if sorted(seq) != sorted(labs):
                raise SchemaError(f"cover sequence {seq} is not over the term multiset")
        covered = set()
        for seq in cover:
            covered |= induced_orderings(seq)
        if covered != set(permutations(labs)):
            raise SchemaError(f"cover for term {entry['labels']} does not reach all orderings")
        terms.append(Term(coeff, PiCorrelator(tuple(sorted(labs)), cover)))
    return Inequality(n, flavor, tuple(terms), eta_c, eta_q, alpha)


def classical_bound_bruteforce(ineq: Inequality, workers: int = 1) -> int:
    value, _ = classical_argmax(ineq, workers=workers)
    return value


def classical_argmax(ineq: Inequality, workers: int = 1) -> tuple[int, dict[Label, int]]:
    """Exhaustive maximum over deterministic +-1 assignments, in exact
    integer arithmetic, plus one attaining assignment.

    A term's value under an assignment is the product over its multiset,
    so only labels of odd multiplicity matter: the term is a parity of the
    assignment bits against a mask.
    """
    labels = list(ineq.labels())
    count = len(labels)
    if count > MAX_BRUTEFORCE_LABELS:
        raise ValueError(f"{count} labels exceed the brute-force guard {MAX_BRUTEFORCE_LABELS}")
    index = {lab: pos for pos, lab in enumerate(labels)}
    masks = []
    coeffs = []
    for t in ineq.terms:
        mask = 0
        for lab in set(t.correlator.labels):
            if t.correlator.labels.count(lab) % 2 == 1:
                mask |= 1 << index[lab]
        masks.append(mask)
        coeffs.append(t.coeff)
    masks = np.array(masks, dtype=np.uint32)
    coeffs = np.array(coeffs, dtype=np.int64)
    coeff_sum = int(coeffs.sum())
    total = 1 << count
    chunk = 1 << 16

    def scan(start: int) -> tuple[int, int]:
        stop = min(start + chunk, total)
        assigns = np.arange(start, stop, dtype=np.uint32)
        parity = (np.bitwise_count(assigns[:, None] & masks[None, :]) & 1).astype(np.int64)
        # bit set -> value -1, so total = sum(c) - 2 * parity @ c
        values = coeff_sum - 2 * (parity @ coeffs)
        at = int(np.argmax(values))
        return int(values[at]), start + at

    starts = range(0, total, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, starts))
    else:
        results = [scan(s) for s in starts]
    best, arg = max(results, key=lambda r: (r[0], -r[1]))
    assignment = {lab: 1 - 2 * ((arg >> index[lab]) & 1) for lab in labels}
    return best, assignment


@dataclass(frozen=True)
class TermValue:
    coeff: int
    labels: tuple[Label, ...]
    value: float
    cover_size: int

    def to_dict(self) -> dict:
        return {
            "coeff": self.coeff,
            "labels": [str(lab) for lab in self.labels],
            "value": self.value,
            "cover_size": self.cover_size,
        }


@dataclass(frozen=True)
class EvaluationReport:
    n: int
    flavor: str
    classical_bound: int
    quantum_bound: int
    total: float
    terms: tuple[TermValue, ...]
    ordering_spread: float | None = None

    @property
    def deficit(self) -> float:
        return self.quantum_bound - self.total

    @property
    def violated(self) -> bool:
        return self.total > self.classical_bound + VIOLATION_MARGIN

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "flavor": self.flavor,
            "eta_C": self.classical_bound,
            "eta_Q": self.quantum_bound,
            "total": self.total,
            "deficit": self.deficit,
            "violated": self.violated,
            "ordering_spread": self.ordering_spread,
            "terms": [t.to_dict() for t in self.terms],
        }


def _ordering_spread(real: Realization, labels: tuple[Label, ...]) -> float:
    """Diameter of the per-ordering expectations <psi| M_o1 ... M_ok |psi>
    over the orderings induced by the identity sequence; zero when the
    term's operators commute."""
    values = []
    for ordering in sorted(induced_orderings(labels)):
        v = real.state
        for lab in reversed(ordering):
            v = real.observables[lab] @ v
        values.append(complex(np.vdot(real.state, v)))
    spread = 0.0
    for p in range(len(values)):
        for q in range(p + 1, len(values)):
            spread = max(spread, abs(values[p] - values[q]))
    return spread


def evaluate(ineq: Inequality, real: Realization, workers: int = 1) -> EvaluationReport:
    """Total and per-term values of the inequality on a realization."""

    def one(term: Term) -> TermValue:
        value = pi_correlation(real, term.correlator)
        return TermValue(term.coeff, term.correlator.labels, value, len(term.correlator.cover))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(one, ineq.terms))
    else:
        values = tuple(one(t) for t in ineq.terms)
    total = float(sum(tv.coeff * tv.value for tv in values))
    spread = None
    if ineq.flavor == "noncontextual":
        spread = max(_ordering_spread(real, t.correlator.labels) for t in ineq.terms)
    return EvaluationReport(
        n=ineq.n,
        flavor=ineq.flavor,
        classical_bound=ineq.classical_bound,
        quantum_bound=ineq.quantum_bound,
        total=total,
        terms=values,
        ordering_spread=spread,
    )
