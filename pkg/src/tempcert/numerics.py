"""Dense complex linear algebra shared by evaluation and certification:
anticommutators, rank-revealing orthonormalization, subspace projection,
fidelity.  Everything is float64-per-component and pure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ObservableValidationError


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_dim(a, b)
    return a @ b + b @ a


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_dim(a, b)
    return a @ b - b @ a


def nested_anticommutator(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Right-nested {M1,{M2,...,{M_{k-1},M_k}}}; a single operator is itself."""
    if len(ops) == 0:
        raise ValueError("nested anticommutator of an empty list")
    acc = np.asarray(ops[-1], dtype=complex)
    for m in reversed(ops[:-1]):
        acc = anticommutator(np.asarray(m, dtype=complex), acc)
    return acc


def nested_apply(ops: Sequence[np.ndarray], vec: np.ndarray) -> np.ndarray:
    """Apply the right-nested anticommutator to a vector without forming
    the full operator: {M1,T} v = M1 (T v) + T (M1 v)."""
    if len(ops) == 0:
        raise ValueError("nested anticommutator of an empty list")
    if len(ops) == 1:
        return ops[0] @ vec
    head, tail = ops[0], ops[1:]
    return head @ nested_apply(tail, vec) + nested_apply(tail, head @ vec)


def hermiticity_residual(m: np.ndarray) -> float:
    return frobenius(m - m.conj().T)


def involution_residual(m: np.ndarray) -> float:
    return frobenius(m @ m - np.eye(m.shape[0]))


def validate_observable(m: np.ndarray, tol: float, name: str = "?") -> None:
    """Measurement operators must be Hermitian involutions (M**2 = 1)."""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ObservableValidationError(name, f"not square: shape {m.shape}")
    herm = hermiticity_residual(m)
    if herm > tol:
        raise ObservableValidationError(name, f"Hermiticity residual {herm:.3e} > {tol:.1e}")
    inv = involution_residual(m)
    if inv > tol:
        raise ObservableValidationError(name, f"involution residual {inv:.3e} > {tol:.1e}")


def validate_state(psi: np.ndarray, tol: float = 1e-10) -> None:
    err = abs(np.linalg.norm(psi) - 1.0)
    if err > tol:
        raise ValueError(f"state norm deviates from 1 by {err:.3e}")


@dataclass(frozen=True)
class SubspaceBasis:
    """Ordered orthonormal set, stored as the columns of `vectors`."""

    vectors: np.ndarray  # shape (ambient_dim, rank)
    rank_tolerance: float

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    def gram_residual(self) -> float:
        q = self.vectors
        return frobenius(q.conj().T @ q - np.eye(self.rank))


def orthonormal_basis(vectors: Sequence[np.ndarray], rank_tolerance: float = 1e-7) -> SubspaceBasis:
    """Gram-Schmidt with a second reorthogonalization pass.  Input order is
    preserved; a vector is dropped when its residual after projection is
    <= rank_tolerance times the largest input norm."""
    if len(vectors) == 0:
        raise ValueError("no vectors given")
    dim = len(vectors[0])
    for v in vectors:
        if len(v) != dim:
            raise ValueError("ambient dimensions differ")
    scale = max(float(np.linalg.norm(v)) for v in vectors)
    if scale == 0.0:
        raise ValueError("all input vectors are zero")
    kept: list[np.ndarray] = []
    for v in vectors:
        w = np.asarray(v, dtype=complex).copy()
        for _ in range(2):
            for q in kept:
                w -= q * np.vdot(q, w)
        r = float(np.linalg.norm(w))
        if r > rank_tolerance * scale:
            kept.append(w / r)
    return SubspaceBasis(np.column_stack(kept), rank_tolerance)


def project_operator(m: np.ndarray, basis: SubspaceBasis) -> np.ndarray:
    """Compress M to the basis: entries <b_p| M |b_q>."""
    if m.shape[0] != basis.ambient_dim:
        raise ValueError(f"dimension mismatch: {m.shape[0]} vs {basis.ambient_dim}")
    q = basis.vectors
    return q.conj().T @ m @ q


def project_state(psi: np.ndarray, basis: SubspaceBasis) -> np.ndarray:
    if len(psi) != basis.ambient_dim:
        raise ValueError("dimension mismatch")
    return basis.vectors.conj().T @ psi


def fidelity(v: np.ndarray, w: np.ndarray) -> float:
    if len(v) != len(w):
        raise ValueError("dimension mismatch")
    return float(abs(np.vdot(v, w)) ** 2)


def max_principal_angle_sin(qa: np.ndarray, qb: np.ndarray) -> float:
    """sin of the largest principal angle between two orthonormal column
    spans; 1.0 when the ranks differ."""
    if qa.shape != qb.shape:
        return 1.0
    s = np.linalg.svd(qa.conj().T @ qb, compute_uv=False)
    c = min(1.0, float(s.min()))
    return float(np.sqrt(max(0.0, 1.0 - c * c)))
