"""Sparse integer chains over generator tuples.

A degree-n chain is a finite integer combination of generators <a_0..a_n>
indexed by strictly increasing (n+1)-tuples of ordinals.  Chains are the
elements of the free abelian groups underlying the boundary systems; all
arithmetic is exact.
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Sequence, Tuple

from higherwalks.ordinals import Ordinal, as_ordinal, parse

OrdTuple = Tuple[Ordinal, ...]


def check_generator(tup: Sequence) -> OrdTuple:
    tup = tuple(as_ordinal(t) for t in tup)
    for a, b in zip(tup, tup[1:]):
        if not a < b:
            raise ValueError(f"generator coordinates must strictly increase: {tuple(map(str, tup))}")
    return tup


def faces(tup: OrdTuple) -> Iterator[Tuple[int, OrdTuple]]:
    """(i, tup with coordinate i removed) for each i; the empty face for 1-tuples."""
    for i in range(len(tup)):
        yield i, tup[:i] + tup[i + 1 :]


def add_to(acc: Dict[OrdTuple, int], key: OrdTuple, coeff: int) -> None:
    """acc[key] += coeff, dropping zeros."""
    new = acc.get(key, 0) + coeff
    if new:
        acc[key] = new
    else:
        acc.pop(key, None)


def merge_into(acc: Dict[OrdTuple, int], other: Dict[OrdTuple, int], scale: int = 1) -> None:
    if scale == 0:
        return
    for key, coeff in other.items():
        add_to(acc, key, scale * coeff)


class Chain:
    """An exact integer combination of same-length generator tuples."""

    __slots__ = ("degree", "entries")

    def __init__(self, degree: int, entries: Dict[OrdTuple, int] = None):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.degree = degree
        self.entries: Dict[OrdTuple, int] = {}
        if entries:
            for tup, coeff in entries.items():
                if len(tup) != degree + 1:
                    raise ValueError(f"generator {tuple(map(str, tup))} has wrong length for degree {degree}")
                if coeff:
                    self.entries[check_generator(tup)] = coeff

    @classmethod
    def _make(cls, degree: int, entries: Dict[OrdTuple, int]) -> "Chain":
        # internal constructor for entries already known to be canonical
        self = object.__new__(cls)
        self.degree = degree
        self.entries = entries
        return self

    @staticmethod
    def generator(tup: Sequence) -> "Chain":
        tup = check_generator(tup)
        return Chain(len(tup) - 1, {tup: 1})

    @staticmethod
    def zero(degree: int) -> "Chain":
        return Chain(degree)

    def is_zero(self) -> bool:
        return not self.entries

    def coefficient(self, tup: Sequence) -> int:
        return self.entries.get(check_generator(tup), 0)

    def support(self) -> List[OrdTuple]:
        return sorted(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self.entries == other.entries

    def __hash__(self):
        raise TypeError("chains are not hashable")

    def combine(self, scale: int, other: "Chain") -> "Chain":
        """self + scale * other."""
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        acc = dict(self.entries)
        merge_into(acc, other.entries, scale)
        return Chain(self.degree, acc)

    def __add__(self, other: "Chain") -> "Chain":
        return self.combine(1, other)

    def __sub__(self, other: "Chain") -> "Chain":
        return self.combine(-1, other)

    def scaled(self, scale: int) -> "Chain":
        if scale == 0:
            return Chain(self.degree)
        return Chain(self.degree, {t: scale * c for t, c in self.entries.items()})

    def boundary(self) -> "Chain":
        """Alternating face sum; degree drops by one."""
        if self.degree == 0:
            raise ValueError("degree-0 chains have no boundary; use augment")
        acc: Dict[OrdTuple, int] = {}
        for tup, coeff in self.entries.items():
            for i, face in faces(tup):
                add_to(acc, face, coeff * (-1) ** i)
        return Chain(self.degree - 1, acc)

    def augment(self) -> int:
        """Sum of coefficients; the degree-0 boundary into the integers."""
        if self.degree != 0:
            raise ValueError("augment applies to degree-0 chains")
        return sum(self.entries.values())

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for tup in sorted(self.entries):
            coeff = self.entries[tup]
            gen = "<" + ",".join(str(t) for t in tup) + ">"
            if coeff == 1:
                parts.append(f"+{gen}")
            elif coeff == -1:
                parts.append(f"-{gen}")
            else:
                parts.append(f"{coeff:+d}*{gen}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self) -> str:
        return f"Chain({self})"

    # -- JSON interchange ---------------------------------------------------

    def to_json(self) -> List[dict]:
        return [
            {"coeff": self.entries[tup], "gen": [str(t) for t in tup]}
            for tup in sorted(self.entries)
        ]

    @staticmethod
    def from_json(data: Sequence[dict], degree: int = None) -> "Chain":
        acc: Dict[OrdTuple, int] = {}
        for item in data:
            tup = check_generator(tuple(parse(s) for s in item["gen"]))
            add_to(acc, tup, int(item["coeff"]))
        if degree is None:
            if not acc:
                raise ValueError("cannot infer the degree of an empty chain")
            degree = len(next(iter(acc))) - 1
        return Chain(degree, acc)


def boundary_of_generator(tup: OrdTuple) -> Dict[OrdTuple, int]:
    acc: Dict[OrdTuple, int] = {}
    for i, face in faces(tup):
        add_to(acc, face, (-1) ** i)
    return acc
