"""Observable labels: A<i> and B<i> carry one qubit index, N<i><j> an
unordered pair of distinct indices (N12 and N21 are the same label).

Text form is "A3", "B1", "N12".  "M12" is accepted on input as an alias
for "N12".  Indices above 9 would make the concatenated pair ambiguous,
so a comma form "N10,12" is used (and accepted) in that regime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SchemaError

KIND_ORDER = {"A": 0, "B": 1, "N": 2}

_SINGLE_RE = re.compile(r"^([AB])([1-9]\d*)$")
_PAIR_RE = re.compile(r"^[MN]([1-9]\d*),([1-9]\d*)$")
_PAIR_COMPACT_RE = re.compile(r"^[MN](\d+)$")


@dataclass(frozen=True)
class Label:
    kind: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.kind in ("A", "B"):
            if self.j is not None or self.i < 1:
                raise ValueError(f"bad {self.kind} label: i={self.i}, j={self.j}")
        elif self.kind == "N":
            if self.j is None or self.i < 1 or self.i == self.j:
                raise ValueError(f"bad N label: i={self.i}, j={self.j}")
            if self.i > self.j:
                # canonical key is the sorted pair
                lo, hi = self.j, self.i
                object.__setattr__(self, "i", lo)
                object.__setattr__(self, "j", hi)
        else:
            raise ValueError(f"unknown label kind {self.kind!r}")

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.i,) if self.j is None else (self.i, self.j)

    def sort_key(self) -> tuple[int, int, int]:
        return (KIND_ORDER[self.kind], self.i, self.j or 0)

    def __lt__(self, other: "Label") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.j is None:
            return f"{self.kind}{self.i}"
        if self.j > 9:
            return f"N{self.i},{self.j}"
        return f"N{self.i}{self.j}"


def a(i: int) -> Label:
    return Label("A", i)


def b(i: int) -> Label:
    return Label("B", i)


def n(i: int, j: int) -> Label:
    return Label("N", i, j)


def parse_label(text: str) -> Label:
    m = _SINGLE_RE.match(text)
    if m:
        return Label(m.group(1), int(m.group(2)))
    m = _PAIR_RE.match(text)
    if m:
        return Label("N", int(m.group(1)), int(m.group(2)))
    m = _PAIR_COMPACT_RE.match(text)
    if m:
        digits = m.group(1)
        splits = []
        for cut in range(1, len(digits)):
            left, right = digits[:cut], digits[cut:]
            if left.startswith("0") or right.startswith("0"):
                continue
            i, j = int(left), int(right)
            if i != j:
                splits.append((min(i, j), max(i, j)))
        splits = sorted(set(splits))
        if len(splits) == 1:
            return Label("N", *splits[0])
        if len(splits) > 1:
            raise SchemaError(
                f"ambiguous pair label {text!r}; use the comma form, e.g. N{splits[0][0]},{splits[0][1]}"
            )
    raise SchemaError(f"cannot parse observable label {text!r}")
