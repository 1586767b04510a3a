"""Signed Pauli strings in symplectic (x-bits, z-bits, phase) form.

A width-n string represents i**phase_exp * prod_q X_q**x_q Z_q**z_q with
the x and z patterns bit-packed into Python ints (bit q-1 <-> qubit q, so
word-level popcounts drive multiplication and the commutation predicate).
The Hermitian letter Y is i*X*Z, i.e. carries one factor of i in the
phase; strings built from letter text therefore always have phase +1 or -1
times the letters as written.

Qubit 1 is the leftmost letter and the most significant factor of the
dense Kronecker product, so to_dense(+XZZ) == kron(X, Z, Z).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DenseLimitError

DEFAULT_DENSE_LIMIT = 12
DENSE_LIMIT_ENV = "TEMPCERT_DENSE_LIMIT"

PHASES = (1, 1j, -1, -1j)

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}

# X**x Z**z on one qubit; (1,1) is X@Z = -iY
_XZ_DENSE = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1], [1, 0]], dtype=complex),
}

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


def dense_limit() -> int:
    """Qubit cap for dense exports; TEMPCERT_DENSE_LIMIT overrides."""
    raw = os.environ.get(DENSE_LIMIT_ENV)
    return DEFAULT_DENSE_LIMIT if raw is None else int(raw)


@dataclass(frozen=True)
class PauliString:
    width: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0  # exponent of i, 0..3

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be >= 1")
        full = (1 << self.width) - 1
        if not 0 <= self.x_bits <= full or not 0 <= self.z_bits <= full:
            raise ValueError("bit patterns exceed width")
        if not 0 <= self.phase_exp <= 3:
            raise ValueError("phase_exp must be in 0..3")

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def phase(self) -> complex:
        """Coefficient in the letter form: operator = phase * (tensor of
        I/X/Y/Z letters).  Hermitian strings carry +1 or -1."""
        return PHASES[(self.phase_exp - self.y_count) % 4]

    def is_hermitian(self) -> bool:
        # i**k XZ-form is Hermitian iff k and the Y count share parity
        return (self.phase_exp - self.y_count) % 2 == 0

    def letter(self, q: int) -> str:
        if not 1 <= q <= self.width:
            raise ValueError(f"qubit {q} out of range")
        bit = q - 1
        return _BITS_LETTER[((self.x_bits >> bit) & 1, (self.z_bits >> bit) & 1)]

    def __str__(self) -> str:
        sign_exp = (self.phase_exp - self.y_count) % 4
        letters = "".join(self.letter(q) for q in range(1, self.width + 1))
        return _PHASE_PREFIX[sign_exp] + letters

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)


def identity(width: int) -> PauliString:
    return PauliString(width, 0, 0, 0)


def from_string(text: str) -> PauliString:
    """Parse "+XZZ" / "-IXY" / "XZZ"; also accepts +i/-i prefixes."""
    body = text
    prefix = ""
    for cand in ("+i", "-i", "i", "+", "-"):
        if text.startswith(cand) and len(text) > len(cand):
            prefix, body = cand, text[len(cand):]
            break
    if not body or any(c not in _LETTER_BITS for c in body):
        raise ValueError(f"cannot parse Pauli string {text!r}")
    x = z = 0
    for pos, c in enumerate(body):
        xb, zb = _LETTER_BITS[c]
        x |= xb << pos
        z |= zb << pos
    y_count = (x & z).bit_count()
    return PauliString(len(body), x, z, (y_count + _PREFIX_PHASE[prefix]) % 4)


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    """Exact product; phase tracked by counting Z-past-X transpositions."""
    if p.width != q.width:
        raise ValueError(f"width mismatch: {p.width} != {q.width}")
    flips = (p.z_bits & q.x_bits).bit_count()
    return PauliString(
        p.width,
        p.x_bits ^ q.x_bits,
        p.z_bits ^ q.z_bits,
        (p.phase_exp + q.phase_exp + 2 * flips) % 4,
    )


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form x1.z2 + z1.x2 is even."""
    if p.width != q.width:
        raise ValueError(f"width mismatch: {p.width} != {q.width}")
    sym = (p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()
    return sym % 2 == 0


def tensor(p: PauliString, q: PauliString) -> PauliString:
    return PauliString(
        p.width + q.width,
        p.x_bits | (q.x_bits << p.width),
        p.z_bits | (q.z_bits << p.width),
        (p.phase_exp + q.phase_exp) % 4,
    )


def to_dense(p: PauliString, limit: int | None = None) -> np.ndarray:
    """2**n x 2**n matrix; qubit 1 is the outermost Kronecker factor."""
    cap = dense_limit() if limit is None else limit
    if p.width > cap:
        raise DenseLimitError(f"width {p.width} exceeds dense limit {cap}")
    factors = [
        _XZ_DENSE[((p.x_bits >> (q - 1)) & 1, (p.z_bits >> (q - 1)) & 1)]
        for q in range(1, p.width + 1)
    ]
    return PHASES[p.phase_exp] * reduce(np.kron, factors)
