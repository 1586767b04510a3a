"""Self-testing certification pipeline.

Maximal violation of the temporal inequality forces a web of operator
relations on the state; this module measures how far a given realization is
from that web and, when close enough, reconstructs the canonical picture:

    relation residuals  ->  (anti)commutator residuals on the state
    ->  invariant subspace spanned by B-products of the state
    ->  operators compressed onto it  ->  canonical unitary
    ->  fidelity with the complete-graph state.

Each stage only consumes quantities the previous stages produced, and the
pipeline short-circuits to a fail verdict as soon as a stage exceeds its
tolerance.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import pauli
from .errors import ExtractionError
from .inequalities import build_tn, evaluate
from .labels import Label, a, b, n as n_label
from .model import Realization, canonical_pauli, graph_state, required_labels
from .numerics import (
    SubspaceBasis,
    frobenius,
    hermiticity_residual,
    involution_residual,
    max_principal_angle_sin,
    orthonormal_basis,
    project_operator,
    project_state,
)


@dataclass(frozen=True)
class CertifyTolerances:
    relation: float = 1e-8
    algebra: float = 1e-8
    rank: float = 1e-7
    invariance: float = 1e-8
    hatted: float = 1e-8
    unitary: float = 1e-7
    equivalence: float = 1e-7
    fidelity: float = 1e-7
    observable: float = 1e-8

    @classmethod
    def for_provenance(cls, provenance: str) -> "CertifyTolerances":
        # measured/float inputs get looser residual targets
        if provenance == "float":
            return cls(relation=1e-6, algebra=1e-6)
        return cls()


def _apply_word(word, psi: np.ndarray) -> np.ndarray:
    """Operator product in written order, acting rightmost-first."""
    v = psi
    for m in reversed(word):
        v = m @ v
    return v


def _stabilizing_words(n: int):
    """(id, label word, target sign) per relation instance; word order is
    fixed (B-positions ascending, the N factor last) so that residuals at
    non-ideal points are reproducible."""
    out = []
    for i, j in combinations(range(1, n + 1), 2):
        word = [a(m) if m in (i, j) else b(m) for m in range(1, n + 1)] + [n_label(i, j)]
        out.append((word, +1))
    for i in range(1, n + 1):
        word = [a(m) if m == i else b(m) for m in range(1, n + 1)]
        out.append((word, +1))
    for i, j, k in combinations(range(1, n + 1), 3):
        word = [a(m) if m in (i, j, k) else b(m) for m in range(1, n + 1)]
        out.append((word, -1))
    for i, j, k in combinations(range(1, n + 1), 3):
        for p, q in ((n_label(i, j), n_label(j, k)),
                     (n_label(j, k), n_label(i, k)),
                     (n_label(i, k), n_label(i, j))):
            out.append(([p, q], +1))
    return [(" ".join(map(str, word)) + (" = +1" if sign > 0 else " = -1"), word, sign)
            for word, sign in out]


def relation_residuals(real: Realization) -> dict[str, float]:
    """||(product -+ 1)|psi>|| per stabilizing relation, plus the pairwise
    identities (A_i B_i |psi> = N_pq |psi> and friends) that the invariant
    subspace construction leans on; surfacing them separately helps debug
    failed certifications."""
    psi = real.state
    out: dict[str, float] = {}
    for rid, word, sign in _stabilizing_words(real.n):
        mats = real.require(word)
        out[rid] = float(np.linalg.norm(_apply_word(mats, psi) - sign * psi))

    pairs = list(combinations(range(1, real.n + 1), 2))
    for i in range(1, real.n + 1):
        ai, bi = real.require([a(i), b(i)])
        ab = ai @ (bi @ psi)
        out[f"A{i} B{i} = -B{i} A{i}"] = float(np.linalg.norm(ab + bi @ (ai @ psi)))
        for p, q in pairs:
            (npq,) = real.require([n_label(p, q)])
            out[f"A{i} B{i} = {n_label(p, q)}"] = float(np.linalg.norm(ab - npq @ psi))
    for p, q in pairs:
        (npq,) = real.require([n_label(p, q)])
        for i in range(1, real.n + 1):
            if i in (p, q):
                (bi,) = real.require([b(i)])
                (ai,) = real.require([a(i)])
                out[f"B{i} {n_label(p, q)} = -A{i}"] = float(
                    np.linalg.norm(bi @ (npq @ psi) + ai @ psi)
                )
            else:
                (ai,) = real.require([a(i)])
                (bi,) = real.require([b(i)])
                out[f"A{i} {n_label(p, q)} = B{i}"] = float(
                    np.linalg.norm(ai @ (npq @ psi) - bi @ psi)
                )
    return out


def _commuting_pairs(n: int) -> list[tuple[Label, Label]]:
    out = []
    for i, j in combinations(range(1, n + 1), 2):
        out.append((a(i), a(j)))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out.append((a(i), b(j)))
    for i, j in combinations(range(1, n + 1), 2):
        out.append((b(i), b(j)))
    for i, j in combinations(range(1, n + 1), 2):
        out.append((a(i), n_label(i, j)))
        out.append((a(j), n_label(i, j)))
        for k in range(1, n + 1):
            if k not in (i, j):
                out.append((b(k), n_label(i, j)))
    for i, j, k in combinations(range(1, n + 1), 3):
        out.append((n_label(i, j), n_label(j, k)))
        out.append((n_label(j, k), n_label(i, k)))
        out.append((n_label(i, k), n_label(i, j)))
    return out


def _anticommuting_pairs(n: int) -> list[tuple[Label, Label]]:
    out = []
    for i in range(1, n + 1):
        out.append((a(i), b(i)))
    for j, k in combinations(range(1, n + 1), 2):
        for i in range(1, n + 1):
            if i not in (j, k):
                out.append((a(i), n_label(j, k)))
        out.append((b(j), n_label(j, k)))
        out.append((b(k), n_label(j, k)))
    return out


def algebra_residuals(real: Realization) -> dict[str, float]:
    """||[M, M']|psi>|| and ||{M, M'}|psi>|| for the certified pair lists."""
    psi = real.state
    out: dict[str, float] = {}
    for x, y in _commuting_pairs(real.n):
        mx, my = real.require([x, y])
        out[f"[{x},{y}]"] = float(np.linalg.norm(mx @ (my @ psi) - my @ (mx @ psi)))
    for x, y in _anticommuting_pairs(real.n):
        mx, my = real.require([x, y])
        out[f"{{{x},{y}}}"] = float(np.linalg.norm(mx @ (my @ psi) + my @ (mx @ psi)))
    return out


def _bproduct_vectors(real: Realization) -> list[np.ndarray]:
    """prod_{i in S} B_i |psi> for every subset S, enumerated by binary
    counting, indices ascending inside each product."""
    vectors = []
    for m in range(1 << real.n):
        subset = [i for i in range(1, real.n + 1) if (m >> (i - 1)) & 1]
        mats = real.require([b(i) for i in subset])
        vectors.append(_apply_word(mats, real.state))
    return vectors


def invariant_subspace(real: Realization, rank_tolerance: float = 1e-7) -> SubspaceBasis:
    return orthonormal_basis(_bproduct_vectors(real), rank_tolerance)


def subspace_singular_values(real: Realization) -> np.ndarray:
    """Singular values of the stacked generating vectors; shows how sharp
    the rank cut is when the dimension witness is ambiguous."""
    return np.linalg.svd(np.column_stack(_bproduct_vectors(real)), compute_uv=False)


def invariance_residual(real: Realization, basis: SubspaceBasis) -> float:
    """max ||(1 - P P+) M b|| over observables M and basis vectors b."""
    q = basis.vectors
    worst = 0.0
    for m in real.observables.values():
        image = m @ q
        worst = max(worst, frobenius(image - q @ (q.conj().T @ image)))
    return worst


def hatted_operators(
    real: Realization, basis: SubspaceBasis
) -> tuple[dict[Label, np.ndarray], dict[str, float]]:
    """Compress every observable onto the subspace and check, now as full
    operator norms, the structure the state-level residuals certified:
    Hermiticity, involution, tracelessness, and the pair relations."""
    hatted = {lab: project_operator(m, basis) for lab, m in real.observables.items()}
    checks: dict[str, float] = {}
    for lab in sorted(hatted):
        m = hatted[lab]
        checks[f"herm {lab}"] = hermiticity_residual(m)
        checks[f"invol {lab}"] = involution_residual(m)
        checks[f"trace {lab}"] = float(abs(np.trace(m)))
    for x, y in _commuting_pairs(real.n):
        checks[f"comm [{x},{y}]"] = frobenius(hatted[x] @ hatted[y] - hatted[y] @ hatted[x])
    for x, y in _anticommuting_pairs(real.n):
        checks[f"anti {{{x},{y}}}"] = frobenius(hatted[x] @ hatted[y] + hatted[y] @ hatted[x])
    return hatted, checks


def aproduct_span_angle(real: Realization, basis: SubspaceBasis) -> float:
    """n=3 only: sin of the largest principal angle between the B-product
    span and the A-product span {psi, A_i psi, B_i psi, A_1 B_1 psi}."""
    if real.n != 3:
        raise ValueError("A-product span comparison is defined for n = 3")
    psi = real.state
    vecs = [psi]
    for i in (1, 2, 3):
        (ai,) = real.require([a(i)])
        vecs.append(ai @ psi)
    for i in (1, 2, 3):
        (bi,) = real.require([b(i)])
        vecs.append(bi @ psi)
    a1, b1 = real.require([a(1), b(1)])
    vecs.append(a1 @ (b1 @ psi))
    other = orthonormal_basis(vecs, basis.rank_tolerance)
    return max_principal_angle_sin(basis.vectors, other.vectors)


@dataclass(frozen=True)
class UnitaryExtraction:
    unitary: np.ndarray
    nij_signs: dict[Label, int]
    nij_residuals: dict[Label, float]
    a_residual: float
    b_residual: float
    loop_residual: float
    unitarity_residual: float
    projected_norm: float
    fidelity: float


def extract_unitary(
    hatted: dict[Label, np.ndarray], basis: SubspaceBasis, psi: np.ndarray, n: int
) -> UnitaryExtraction:
    """Build the canonical unitary on the subspace by joint diagonalization
    of the commuting involutions B-hat (sequential eigenspace refinement),
    indexing each common eigenvector by its sign pattern and propagating
    phases along the A-hat bit-flip actions."""
    k = basis.rank
    if k != 1 << n:
        raise ExtractionError(f"subspace dimension {k} is not 2**{n}")

    blocks: list[tuple[int, np.ndarray]] = [(0, np.eye(k, dtype=complex))]
    for i in range(1, n + 1):
        bh = hatted[b(i)]
        refined = []
        for pattern, q in blocks:
            s = q.conj().T @ bh @ q
            s = (s + s.conj().T) / 2
            w, v = np.linalg.eigh(s)
            if np.any(np.abs(np.abs(w) - 1.0) > 0.5):
                raise ExtractionError(
                    f"projected B{i} has eigenvalue {w[np.argmax(np.abs(np.abs(w) - 1.0))]:.3f} away from +-1"
                )
            plus, minus = v[:, w > 0], v[:, w < 0]
            if plus.shape[1]:
                refined.append((pattern, q @ plus))
            if minus.shape[1]:
                refined.append((pattern | (1 << (i - 1)), q @ minus))
        blocks = refined
    if any(q.shape[1] != 1 for _, q in blocks) or len(blocks) != k:
        raise ExtractionError(
            "subspace not of product form: a common eigenspace of the B operators has dimension != 1"
        )
    eig = {pattern: q[:, 0] for pattern, q in blocks}

    coords = project_state(psi, basis)
    overlap = np.vdot(eig[0], coords)
    if abs(overlap) < 1e-12:
        raise ExtractionError("state has vanishing overlap with the all-plus eigenvector")
    eig[0] = eig[0] * (overlap / abs(overlap))
    for m in range(1, k):
        low = (m & -m).bit_length()  # 1-based qubit of the lowest set bit
        prev = m & (m - 1)
        w = hatted[a(low)] @ eig[prev]
        ph = np.vdot(eig[m], w)
        if abs(ph) < 0.5:
            raise ExtractionError(f"A{low} does not map eigenspace {prev:b} onto {m:b}")
        eig[m] = eig[m] * (ph / abs(ph))

    unitary = np.zeros((k, k), dtype=complex)
    for pattern, e in eig.items():
        row = sum(((pattern >> (i - 1)) & 1) << (n - i) for i in range(1, n + 1))
        unitary[row, :] = e.conj()

    a_res = b_res = 0.0
    for i in range(1, n + 1):
        xi = pauli.to_dense(canonical_pauli(a(i), n))
        zi = pauli.to_dense(canonical_pauli(b(i), n))
        a_res = max(a_res, frobenius(unitary @ hatted[a(i)] @ unitary.conj().T - xi))
        b_res = max(b_res, frobenius(unitary @ hatted[b(i)] @ unitary.conj().T - zi))

    loop = 0.0
    for i in range(1, n + 1):
        ah = hatted[a(i)]
        for m in range(k):
            loop = max(loop, float(np.linalg.norm(ah @ eig[m] - eig[m ^ (1 << (i - 1))])))

    signs: dict[Label, int] = {}
    sign_res: dict[Label, float] = {}
    for lab in sorted(hatted):
        if lab.kind != "N":
            continue
        rotated = unitary @ hatted[lab] @ unitary.conj().T
        target = pauli.to_dense(canonical_pauli(lab, n))
        s = 1 if float(np.trace(target @ rotated).real) >= 0.0 else -1
        signs[lab] = s
        sign_res[lab] = frobenius(rotated - s * target)

    mapped = unitary @ coords
    fid = float(abs(np.vdot(graph_state(n), mapped)) ** 2)
    return UnitaryExtraction(
        unitary=unitary,
        nij_signs=signs,
        nij_residuals=sign_res,
        a_residual=a_res,
        b_residual=b_res,
        loop_residual=loop,
        unitarity_residual=frobenius(unitary @ unitary.conj().T - np.eye(k)),
        projected_norm=float(np.linalg.norm(coords)),
        fidelity=fid,
    )


@dataclass
class CertificationReport:
    n: int
    tn_value: float
    classical_bound: int
    quantum_bound: int
    tolerances: dict[str, float]
    relation_residuals: dict[str, float] | None = None
    algebra_residuals: dict[str, float] | None = None
    subspace_dim: int | None = None
    subspace_singular_values: list[float] | None = None
    invariance_residual: float | None = None
    hatted_residuals: dict[str, float] | None = None
    aproduct_angle: float | None = None
    nij_signs: dict[Label, int] | None = None
    nij_residuals: dict[Label, float] | None = None
    unitary_residuals: dict[str, float] | None = None
    fidelity: float | None = None
    verdict: str = "fail"
    failed_checks: list[str] = field(default_factory=list)
    unitary: np.ndarray | None = None  # not serialized

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "Tn_value": self.tn_value,
            "eta_C": self.classical_bound,
            "eta_Q": self.quantum_bound,
            "relation_residuals": self.relation_residuals,
            "algebra_residuals": self.algebra_residuals,
            "subspace_dim": self.subspace_dim,
            "subspace_singular_values": self.subspace_singular_values,
            "invariance_residual": self.invariance_residual,
            "hatted_residuals": self.hatted_residuals,
            "aproduct_angle": self.aproduct_angle,
            "nij_signs": None
            if self.nij_signs is None
            else {str(lab): s for lab, s in self.nij_signs.items()},
            "nij_residuals": None
            if self.nij_residuals is None
            else {str(lab): v for lab, v in self.nij_residuals.items()},
            "unitary_residuals": self.unitary_residuals,
            "fidelity": self.fidelity,
            "verdict": self.verdict,
            "failed_checks": self.failed_checks,
            "tolerances": self.tolerances,
        }


def _worst(residuals: dict[str, float]) -> tuple[str, float]:
    key = max(residuals, key=residuals.get)
    return key, residuals[key]


def certify(
    real: Realization,
    tolerances: CertifyTolerances | None = None,
    workers: int = 1,
) -> CertificationReport:
    """Run the full pipeline.  Structural problems (missing labels, bad
    dimensions, non-involution observables) raise; everything else lands in
    the report."""
    tol = tolerances if tolerances is not None else CertifyTolerances.for_provenance(real.provenance)
    real.validate(tol.observable)
    real.require(required_labels(real.n))

    header = evaluate(build_tn(real.n), real, workers=workers)
    report = CertificationReport(
        n=real.n,
        tn_value=header.total,
        classical_bound=header.classical_bound,
        quantum_bound=header.quantum_bound,
        tolerances=asdict(tol),
    )

    report.relation_residuals = relation_residuals(real)
    rid, worst = _worst(report.relation_residuals)
    if worst > tol.relation:
        report.failed_checks.append(f"relations: residual {worst:.3e} at '{rid}'")
        return report

    report.algebra_residuals = algebra_residuals(real)
    rid, worst = _worst(report.algebra_residuals)
    if worst > tol.algebra:
        report.failed_checks.append(f"algebra: residual {worst:.3e} at '{rid}'")
        return report

    basis = invariant_subspace(real, tol.rank)
    report.subspace_dim = basis.rank
    report.subspace_singular_values = [float(s) for s in subspace_singular_values(real)]
    report.invariance_residual = invariance_residual(real, basis)
    if basis.rank != 1 << real.n:
        report.failed_checks.append(
            f"subspace: dimension {basis.rank} != 2**{real.n}; singular values near the cut: "
            f"{report.subspace_singular_values[max(0, basis.rank - 2): basis.rank + 2]}"
        )
        return report
    if report.invariance_residual > tol.invariance:
        report.failed_checks.append(f"invariance: residual {report.invariance_residual:.3e}")
        return report

    hatted, checks = hatted_operators(real, basis)
    report.hatted_residuals = checks
    rid, worst = _worst(checks)
    if worst > tol.hatted:
        report.failed_checks.append(f"hatted: residual {worst:.3e} at '{rid}'")
        return report
    if real.n == 3:
        report.aproduct_angle = aproduct_span_angle(real, basis)
        if report.aproduct_angle > tol.equivalence:
            report.failed_checks.append(
                f"aproduct_span: principal angle sin {report.aproduct_angle:.3e}"
            )
            return report

    try:
        ext = extract_unitary(hatted, basis, real.state, real.n)
    except ExtractionError as exc:
        report.failed_checks.append(f"unitary_extraction: {exc}")
        return report
    report.nij_signs = ext.nij_signs
    report.nij_residuals = ext.nij_residuals
    report.unitary_residuals = {
        "A": ext.a_residual,
        "B": ext.b_residual,
        "loop": ext.loop_residual,
        "unitarity": ext.unitarity_residual,
        "N_worst": max(ext.nij_residuals.values()),
        "projected_norm_deficit": abs(1.0 - ext.projected_norm),
    }
    report.fidelity = ext.fidelity
    report.unitary = ext.unitary

    for name, value in (("A", ext.a_residual), ("B", ext.b_residual),
                        ("loop", ext.loop_residual), ("unitarity", ext.unitarity_residual)):
        if value > tol.unitary:
            report.failed_checks.append(f"unitary: {name} residual {value:.3e}")
    bad_signs = [str(lab) for lab, s in ext.nij_signs.items() if s != 1]
    if bad_signs:
        report.failed_checks.append(f"nij_signs: -1 at {', '.join(bad_signs)}")
    if ext.fidelity < 1.0 - tol.fidelity:
        report.failed_checks.append(f"fidelity: {ext.fidelity:.12f} < 1 - {tol.fidelity:.1e}")
    if not report.failed_checks:
        report.verdict = "pass"
    return report
