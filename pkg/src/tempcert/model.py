"""Canonical objects of the complete-graph construction: stabilizer
generators, graph states |G_n>, the canonical observable assignment
(A_i = X_i, B_j = Z_j, N_ij = X_i X_j (x) Z on the rest), and synthetic
realizations for testing (embedded in a larger space, perturbed, relabeled).

Also owns the realization JSON layout shared with the CLI and service:

    {"n": int, "dim": int, "state": [[re, im], ...],
     "observables": {"A1": [[[re, im], ...], ...], ...},
     "provenance": "exact" | "float"}
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import pauli
from .errors import MissingObservableError, SchemaError
from .labels import Label, a, b, n as n_label, parse_label
from .numerics import validate_observable, validate_state


@dataclass(frozen=True)
class StabilizerSet:
    n: int
    generators: tuple[pauli.PauliString, ...]

    def __post_init__(self):
        for g in self.generators:
            if not (g.is_hermitian() and g.phase_exp in (0,)):
                raise ValueError(f"generator {g} is not a +1-phase Hermitian string")
        for g, h in combinations(self.generators, 2):
            if not pauli.commutes(g, h):
                raise ValueError(f"generators {g} and {h} do not commute")


def stabilizer_generators(n: int) -> StabilizerSet:
    """Complete-graph stabilizers: X on vertex i, Z on every other vertex."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    gens = []
    for i in range(1, n + 1):
        letters = "".join("X" if q == i else "Z" for q in range(1, n + 1))
        gens.append(pauli.from_string(letters))
    return StabilizerSet(n, tuple(gens))


def graph_state(n: int) -> np.ndarray:
    """|G_n> built by applying CZ on every vertex pair to the uniform
    superposition; the amplitude of |0...0> is real positive.  The basis
    index carries qubit 1 in its most significant bit."""
    limit = pauli.dense_limit()
    if not 3 <= n <= limit:
        raise ValueError(f"n must be in 3..{limit}, got {n}")
    dim = 1 << n
    amps = np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    idx = np.arange(dim)
    for i, j in combinations(range(1, n + 1), 2):
        both = ((idx >> (n - i)) & 1) & ((idx >> (n - j)) & 1)
        amps[both == 1] *= -1.0
    for g in stabilizer_generators(n).generators:
        if np.linalg.norm(pauli.to_dense(g) @ amps - amps) > 1e-12:
            raise AssertionError(f"graph state not stabilized by {g}")
    return amps


def required_labels(n: int) -> tuple[Label, ...]:
    out = [a(i) for i in range(1, n + 1)]
    out += [b(i) for i in range(1, n + 1)]
    out += [n_label(i, j) for i, j in combinations(range(1, n + 1), 2)]
    return tuple(out)


def canonical_pauli(label: Label, n: int) -> pauli.PauliString:
    """The canonical assignment as a Pauli string (sign +1 throughout)."""
    if label.kind == "A":
        letters = "".join("X" if q == label.i else "I" for q in range(1, n + 1))
    elif label.kind == "B":
        letters = "".join("Z" if q == label.i else "I" for q in range(1, n + 1))
    else:
        letters = "".join(
            "X" if q in (label.i, label.j) else "Z" for q in range(1, n + 1)
        )
    return pauli.from_string(letters)


@dataclass(frozen=True)
class Realization:
    """A state plus labeled Hermitian involutions; the object certification
    runs on.  dim is the ambient Hilbert dimension, not necessarily 2**n."""

    n: int
    dim: int
    state: np.ndarray
    observables: dict[Label, np.ndarray]
    provenance: str = "exact"

    def require(self, labels) -> list[np.ndarray]:
        mats = []
        for lab in labels:
            try:
                mats.append(self.observables[lab])
            except KeyError:
                raise MissingObservableError(str(lab)) from None
        return mats

    def validate(self, tol: float = 1e-8) -> None:
        validate_state(self.state)
        if len(self.state) != self.dim:
            raise ValueError("state length disagrees with dim")
        for lab, m in self.observables.items():
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"observable {lab} has shape {m.shape}, expected {(self.dim,) * 2}")
            validate_observable(m, tol, str(lab))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "provenance": self.provenance,
            "state": [[float(z.real), float(z.imag)] for z in self.state],
            "observables": {
                str(lab): [
                    [[float(z.real), float(z.imag)] for z in row] for row in mat
                ]
                for lab, mat in self.observables.items()
            },
        }


def realization_from_dict(data: dict) -> Realization:
    try:
        n = int(data["n"])
        dim = int(data["dim"])
        state_raw = data["state"]
        obs_raw = data["observables"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"realization payload missing field: {exc}") from None
    provenance = data.get("provenance", "exact")
    if provenance not in ("exact", "float"):
        raise SchemaError(f"unknown provenance {provenance!r}")
    if n < 3:
        raise SchemaError(f"n must be >= 3, got {n}")
    if len(state_raw) != dim:
        raise SchemaError(f"state has {len(state_raw)} entries, dim says {dim}")
    try:
        state = np.array([complex(re, im) for re, im in state_raw], dtype=complex)
        observables: dict[Label, np.ndarray] = {}
        for key, rows in obs_raw.items():
            lab = parse_label(key)
            mat = np.array(
                [[complex(re, im) for re, im in row] for row in rows], dtype=complex
            )
            if mat.shape != (dim, dim):
                raise SchemaError(f"observable {key} has shape {mat.shape}, expected {(dim, dim)}")
            observables[lab] = mat
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed complex entries: {exc}") from None
    return Realization(n=n, dim=dim, state=state, observables=observables, provenance=provenance)


def canonical_observables(n: int) -> Realization:
    """The maximally violating realization on 2**n dimensions."""
    state = graph_state(n)
    obs = {
        lab: pauli.to_dense(canonical_pauli(lab, n)) for lab in required_labels(n)
    }
    return Realization(n=n, dim=1 << n, state=state, observables=obs)


def _random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (m + m.conj().T) / 2.0


def _random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    # fix the QR gauge so the draw is haar-like and reproducible
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _random_involution(rng: np.random.Generator, d: int) -> np.ndarray:
    q = _random_unitary(rng, d)
    signs = rng.integers(0, 2, size=d) * 2 - 1
    m = (q * signs) @ q.conj().T
    return (m + m.conj().T) / 2.0


def embed_realization(base: Realization, extra_dim: int, junk_seed: int) -> Realization:
    """Direct-sum embedding: the state gains a zero block, each observable a
    seeded random Hermitian involution acting on it."""
    if extra_dim < 0:
        raise ValueError("extra_dim must be >= 0")
    if extra_dim == 0:
        return base
    rng = np.random.default_rng(junk_seed)
    dim = base.dim + extra_dim
    state = np.concatenate([base.state, np.zeros(extra_dim, dtype=complex)])
    obs = {}
    for lab in sorted(base.observables):
        block = np.zeros((dim, dim), dtype=complex)
        block[: base.dim, : base.dim] = base.observables[lab]
        block[base.dim :, base.dim :] = _random_involution(rng, extra_dim)
        obs[lab] = block
    return Realization(n=base.n, dim=dim, state=state, observables=obs, provenance=base.provenance)


def perturb_realization(base: Realization, epsilon: float, seed: int) -> Realization:
    """Conjugate each observable by exp(i*epsilon*H) with an independent
    seeded random Hermitian H of unit Frobenius norm; the state is left
    alone, so relations break while every spectrum stays exactly {+-1}."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if epsilon == 0.0:
        return base
    rng = np.random.default_rng(seed)
    obs = {}
    for lab in sorted(base.observables):
        h = _random_hermitian(rng, base.dim)
        h /= np.linalg.norm(h)
        w, v = np.linalg.eigh(h)
        u = (v * np.exp(1j * epsilon * w)) @ v.conj().T
        m = u @ base.observables[lab] @ u.conj().T
        obs[lab] = (m + m.conj().T) / 2.0
    return Realization(n=base.n, dim=base.dim, state=base.state.copy(), observables=obs, provenance=base.provenance)


def conjugate_realization(base: Realization, unitary: np.ndarray) -> Realization:
    """Rotate the whole realization by one global unitary (a gauge change
    certification must be blind to)."""
    if unitary.shape != (base.dim, base.dim):
        raise ValueError("unitary dimension mismatch")
    obs = {
        lab: unitary @ m @ unitary.conj().T for lab, m in base.observables.items()
    }
    return Realization(
        n=base.n,
        dim=base.dim,
        state=unitary @ base.state,
        observables=obs,
        provenance=base.provenance,
    )


def relabel_realization(base: Realization, perm: dict[int, int]) -> Realization:
    """Apply a permutation of qubit indices to every observable label."""
    if sorted(perm) != sorted(perm.values()) or sorted(perm) != list(range(1, base.n + 1)):
        raise ValueError(f"not a permutation of 1..{base.n}: {perm}")

    def mapped(lab: Label) -> Label:
        if lab.kind == "N":
            return n_label(perm[lab.i], perm[lab.j])
        return Label(lab.kind, perm[lab.i])

    obs = {mapped(lab): m for lab, m in base.observables.items()}
    return Realization(n=base.n, dim=base.dim, state=base.state, observables=obs, provenance=base.provenance)
