"""Independent oracles shared by the test modules: dense Pauli matrices by
direct Kronecker products, symbolic anticommutator expansion, and seeded
random Hermitian involutions.  Nothing here calls the code paths it checks."""

from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)

LETTERS = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def kron_letters(text: str) -> np.ndarray:
    sign = 1.0
    if text[0] in "+-":
        sign = -1.0 if text[0] == "-" else 1.0
        text = text[1:]
    return sign * reduce(np.kron, [LETTERS[c] for c in text])


def expand_orderings(ops: list) -> list[list]:
    """All orderings of the plain product the right-nested anticommutator
    of `ops` expands into: {M1, T} = M1 T + T M1."""
    if len(ops) == 1:
        return [list(ops)]
    tails = expand_orderings(ops[1:])
    return [[ops[0]] + t for t in tails] + [t + [ops[0]] for t in tails]


def ordering_sum(mats: list[np.ndarray]) -> np.ndarray:
    total = np.zeros_like(mats[0])
    for ordering in expand_orderings(mats):
        prod = np.eye(mats[0].shape[0], dtype=complex)
        for m in ordering:
            prod = prod @ m
        total = total + prod
    return total


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_involution(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, _ = np.linalg.qr(m)
    signs = np.where(rng.standard_normal(d) > 0, 1.0, -1.0)
    out = (q * signs) @ q.conj().T
    return (out + out.conj().T) / 2


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
