"""Sequential correlations and permutation-averaged correlators.

A sequence of k measurements M_1 -> ... -> M_k has the order-averaged value
(1/2**(k-1)) <psi| {M_1,{M_2,...,{M_{k-1},M_k}}} |psi>.  Expanding the
nested anticommutator turns one sequence into 2**(k-1) plain orderings, so
covering all k! orderings needs at least ceil(k!/2**(k-1)) sequences; the
covers built here are deterministic and complete, and within twice that
minimum (checked at construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Hashable, Sequence

import numpy as np

from .errors import NonRealCorrelationError
from .labels import Label
from .model import Realization
from .numerics import nested_apply

MAX_COVER_LENGTH = 8

IMAG_TOLERANCE = 1e-9


def induced_orderings(seq: Sequence[Hashable]) -> frozenset[tuple]:
    """The 2**(k-1) orderings the nested anticommutator of `seq` expands
    into: {M1, T} contributes M1 before and after each ordering of T."""
    items = tuple(seq)
    if len(items) == 0:
        raise ValueError("empty sequence")
    if len(items) == 1:
        return frozenset({items})
    head, tail = items[0], items[1:]
    out = set()
    for o in induced_orderings(tail):
        out.add((head,) + o)
        out.add(o + (head,))
    return frozenset(out)


def _ordering_table(k: int) -> tuple[np.ndarray, np.ndarray]:
    """For every length-k sequence (rows, lexicographic) the indices of the
    2**(k-1) orderings its anticommutator expansion induces.

    An induced ordering is the word built by inserting the sequence back to
    front, each element at the left or right end; the table simulates that
    two-pointer process for all sequences and choice vectors at once.
    """
    seqs = np.array(sorted(permutations(range(k))), dtype=np.int8)
    nseq, nch = seqs.shape[0], 1 << (k - 1)
    choices = ((np.arange(nch, dtype=np.int32)[:, None] >> np.arange(k - 1)[None, :]) & 1).astype(np.int8)
    pos = np.zeros((nseq, nch, k), dtype=np.int8)
    left = np.zeros((1, nch), dtype=np.int8)
    right = np.full((1, nch), k - 1, dtype=np.int8)
    left, right = np.broadcast_to(left, (nseq, nch)).copy(), np.broadcast_to(right, (nseq, nch)).copy()
    for m in range(k - 1):
        front = choices[None, :, m] == 0
        pos[:, :, m] = np.where(front, left, right)
        left = left + front
        right = right - ~front
    pos[:, :, k - 1] = left
    code = np.zeros((nseq, nch), dtype=np.int32)
    for m in range(k):
        code += seqs[:, None, m].astype(np.int32) * (k ** pos[:, :, m].astype(np.int32))
    perm_codes = np.array(
        [sum(p[i] * k**i for i in range(k)) for p in sorted(permutations(range(k)))],
        dtype=np.int32,
    )
    order = np.argsort(perm_codes, kind="stable").astype(np.int32)
    ids = order[np.searchsorted(perm_codes[order], code)]
    return seqs, ids


@lru_cache(maxsize=None)
def permutation_cover(k: int) -> tuple[tuple[int, ...], ...]:
    """Deterministic list of sequences over positions 1..k whose induced
    orderings union to all k! permutations.

    Greedy set cover over all sequences in lexicographic order: each step
    keeps the sequence covering the most still-uncovered orderings, ties
    going to the lexicographically smallest, so the first pick is always
    the identity order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > MAX_COVER_LENGTH:
        raise ValueError(f"cover length {k} exceeds the factorial guard {MAX_COVER_LENGTH}")
    if k == 1:
        return ((1,),)
    seqs, ids = _ordering_table(k)
    uncovered = np.ones(seqs.shape[0], dtype=bool)
    picks = []
    while uncovered.any():
        gains = uncovered[ids].sum(axis=1)
        s = int(np.argmax(gains))
        picks.append(s)
        uncovered[ids[s]] = False
    bound = 2 * -(-factorial(k) // (1 << (k - 1)))
    if len(picks) > bound:
        raise AssertionError(f"greedy cover for k={k} has {len(picks)} > {bound} sequences")
    return tuple(tuple(int(x) + 1 for x in seqs[s]) for s in picks)


@dataclass(frozen=True)
class PiCorrelator:
    """A multiset of labels plus a sequence cover realizing every ordering."""

    labels: tuple[Label, ...]
    cover: tuple[tuple[Label, ...], ...]

    @property
    def length(self) -> int:
        return len(self.labels)


def pi_correlator(labels: Sequence[Label]) -> PiCorrelator:
    """Canonical correlator for a multiset: labels sorted, cover induced by
    the position cover of the sorted tuple."""
    ordered = tuple(sorted(labels))
    cover = tuple(
        tuple(ordered[p - 1] for p in seq) for seq in permutation_cover(len(ordered))
    )
    return PiCorrelator(ordered, cover)


def seq_correlation(real: Realization, seq: Sequence[Label]) -> float:
    """Order-averaged value of one measurement sequence on a realization."""
    labels = tuple(seq)
    if len(labels) == 0:
        raise ValueError("empty sequence")
    mats = real.require(labels)
    value = np.vdot(real.state, nested_apply(mats, real.state)) / (1 << (len(labels) - 1))
    if abs(value.imag) > IMAG_TOLERANCE:
        raise NonRealCorrelationError(
            f"sequence {' '.join(map(str, labels))} gave imaginary part {value.imag:.3e}"
        )
    return float(value.real)


def pi_correlation(real: Realization, pc: PiCorrelator) -> float:
    """Arithmetic mean of the sequential correlations over the cover."""
    return sum(seq_correlation(real, s) for s in pc.cover) / len(pc.cover)
