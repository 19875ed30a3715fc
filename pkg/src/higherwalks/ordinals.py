"""Exact ordinals below epsilon_0 in Cantor normal form.

An ordinal is a finite sum  w^e1*c1 + ... + w^ek*ck  with ordinal exponents
e1 > e2 > ... > ek and positive integer coefficients.  The empty sum is 0.
Values are immutable and hashable, so they can serve as dict keys in sparse
chains and memo tables.

>>> a = parse("w^2*3+w+5")
>>> str(a)
'w^2*3+w+5'
>>> str(parse("w") + parse("1"))
'w+1'
>>> str(parse("1") + parse("w"))
'w'
"""

from __future__ import annotations

import enum
from typing import Iterator, Optional, Tuple, Union


class OrdinalSyntaxError(ValueError):
    """Raised on malformed or non-canonical ordinal notation."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CofRank(enum.IntEnum):
    """Cofinality of a countable ordinal: 0, has-a-maximum, or omega."""

    ZERO = 0
    SUCC = 1
    OMEGA = 2


class Ordinal:
    """A Cantor-normal-form ordinal below epsilon_0.

    ``terms`` is a tuple of (exponent, coefficient) pairs with strictly
    decreasing exponents and coefficients >= 1; the representation is unique.
    """

    __slots__ = ("terms", "_hash", "_key")

    def __init__(self, terms: Tuple[Tuple["Ordinal", int], ...] = ()):
        for exp, coeff in terms:
            if coeff < 1:
                raise ValueError("coefficients must be positive")
        for (e1, _), (e2, _) in zip(terms, terms[1:]):
            if not e1 > e2:
                raise ValueError("exponents must strictly decrease")
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)

    @classmethod
    def _make(cls, terms) -> "Ordinal":
        # internal constructor for terms already known to be canonical
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)
        return self

    @property
    def key(self):
        """Nested integer tuple whose lexicographic order is the ordinal order."""
        k = self._key
        if k is None:
            k = tuple((e.key, c) for e, c in self.terms)
            object.__setattr__(self, "_key", k)
        return k

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        if n < len(_NATURALS):
            return _NATURALS[n]
        return Ordinal._make(((ZERO, n),))

    @staticmethod
    def omega_power(exponent: "Ordinal", coeff: int = 1) -> "Ordinal":
        if coeff == 0:
            return ZERO
        if coeff < 0:
            raise ValueError("coefficients must be positive")
        return Ordinal._make(((exponent, coeff),))

    # -- ordering ----------------------------------------------------------

    def _cmp(self, other: "Ordinal") -> int:
        a, b = self.key, other.key
        if a < b:
            return -1
        return 1 if a > b else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other) -> bool:
        return self.key < other.key

    def __le__(self, other) -> bool:
        return self.key <= other.key

    def __gt__(self, other) -> bool:
        return self.key > other.key

    def __ge__(self, other) -> bool:
        return self.key >= other.key

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Union["Ordinal", int]) -> "Ordinal":
        if isinstance(other, int):
            other = Ordinal.from_int(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        e0 = other.terms[0][0]
        i = 0
        while i < len(self.terms) and self.terms[i][0] > e0:
            i += 1
        if i < len(self.terms) and self.terms[i][0] == e0:
            terms = self.terms[:i] + ((e0, self.terms[i][1] + other.terms[0][1]),) + other.terms[1:]
        else:
            terms = self.terms[:i] + other.terms
        if len(terms) == 1 and not terms[0][0].terms:
            return Ordinal.from_int(terms[0][1])
        return Ordinal._make(terms)

    @property
    def successor(self) -> "Ordinal":
        return self + 1

    @property
    def predecessor(self) -> "Ordinal":
        """The alpha with alpha+1 = self; defined only for successors."""
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor ordinal")
        exp, coeff = self.terms[-1]
        if coeff == 1:
            return Ordinal._make(self.terms[:-1])
        return Ordinal._make(self.terms[:-1] + ((exp, coeff - 1),))

    # -- classification ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def classify(self) -> str:
        """One of ``"zero"``, ``"successor"``, ``"limit"``."""
        if self.is_zero:
            return "zero"
        return "successor" if self.is_successor else "limit"

    @property
    def cof_rank(self) -> CofRank:
        if self.is_zero:
            return CofRank.ZERO
        return CofRank.SUCC if self.is_successor else CofRank.OMEGA

    @property
    def is_natural(self) -> bool:
        return self.is_zero or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def to_int(self) -> int:
        if not self.is_natural:
            raise ValueError(f"{self} is not a natural number")
        return 0 if self.is_zero else self.terms[0][1]

    # -- fundamental sequences -----------------------------------------------

    def fundamental(self, k: int) -> "Ordinal":
        """The k-th member of the standard fundamental sequence of a limit.

        For lam = mu + w^(e'+1) this is mu + w^e'*k; for lam = mu + w^e with
        e a limit it is mu + w^(e[k]).  Strictly increasing with supremum lam.
        """
        if not self.is_limit:
            raise ValueError(f"{self} is not a limit ordinal")
        exp, coeff = self.terms[-1]
        mu_terms = self.terms[:-1] if coeff == 1 else self.terms[:-1] + ((exp, coeff - 1),)
        mu = Ordinal._make(mu_terms)
        if exp.is_successor:
            if k == 0:
                return mu
            return mu + Ordinal.omega_power(exp.predecessor, k)
        return mu + Ordinal.omega_power(exp.fundamental(k))

    # -- printing / parsing ---------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            if exp.is_zero:
                parts.append(str(coeff))
                continue
            if exp == ONE:
                s = "w"
            elif exp.is_natural:
                s = f"w^{exp.to_int()}"
            else:
                s = f"w^({exp})"
            if coeff > 1:
                s += f"*{coeff}"
            parts.append(s)
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Ordinal({self})"


ZERO = Ordinal()
_NATURALS = [ZERO] + [Ordinal._make(((ZERO, n),)) for n in range(1, 1025)]
ONE = Ordinal.from_int(1)
OMEGA = Ordinal.omega_power(ONE)


def as_ordinal(x: Union[Ordinal, int]) -> Ordinal:
    return Ordinal.from_int(x) if isinstance(x, int) else x


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise OrdinalSyntaxError(message, self.pos)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a natural number")
        if self.text[start] == "0" and self.pos - start > 1:
            self.error("leading zero")
        return int(self.text[start : self.pos])

    def term(self) -> Tuple[Ordinal, int]:
        if self.peek() == "w":
            self.pos += 1
            exp = ONE
            if self.peek() == "^":
                self.pos += 1
                if self.peek() == "(":
                    self.pos += 1
                    exp = self.ordinal()
                    self.eat(")")
                    if exp.is_natural:
                        self.error("natural exponents must omit parentheses")
                else:
                    n = self.nat()
                    if n < 2:
                        self.error("exponent 0 or 1 is not canonical")
                    exp = Ordinal.from_int(n)
            coeff = 1
            if self.peek() == "*":
                self.pos += 1
                coeff = self.nat()
                if coeff == 0:
                    self.error("coefficient 0")
                if coeff == 1:
                    self.error("coefficient 1 must be omitted")
            return exp, coeff
        n = self.nat()
        if n == 0:
            self.error("0 cannot appear as a term")
        return ZERO, n

    def ordinal(self) -> Ordinal:
        if self.peek() == "0":
            mark = self.pos
            self.pos += 1
            nxt = self.peek()
            if nxt.isdigit():
                self.error("leading zero")
            if nxt in ("", ")"):
                return ZERO
            self.pos = mark
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        for (e1, _), (e2, _) in zip(terms, terms[1:]):
            if not e1 > e2:
                self.error("exponents must strictly decrease (non-canonical sum)")
        return Ordinal(tuple(terms))


def parse(text: str) -> Ordinal:
    """Parse ordinal notation such as ``"w^(w)*2+w^3+4"``; canonical form only."""
    p = _Parser(text.strip())
    result = p.ordinal()
    if p.pos != len(p.text):
        p.error("trailing input")
    return result


def random_below(bound: Ordinal, rng) -> Ordinal:
    """A random ordinal strictly below ``bound`` (uniform over CNF shapes, not order)."""
    if bound.is_zero:
        raise ValueError("no ordinal below 0")
    if rng.random() < 0.1:
        return ZERO
    j = rng.randrange(len(bound.terms))
    prefix = bound.terms[:j]
    exp, coeff = bound.terms[j]
    smaller = rng.randrange(coeff)
    if smaller:
        prefix = prefix + ((exp, smaller),)
    tail = _random_below_omega_power(exp, rng)
    return Ordinal(prefix + tail.terms)


def _random_coefficient(rng) -> int:
    roll = rng.random()
    if roll < 0.7:
        return rng.randrange(8)
    if roll < 0.95:
        return rng.randrange(32)
    return rng.randrange(256)


def _random_below_omega_power(exp: Ordinal, rng) -> Ordinal:
    """A random ordinal strictly below w^exp."""
    if exp.is_zero:
        return ZERO
    if exp.is_successor:
        k = _random_coefficient(rng)
        rest = _random_below_omega_power(exp.predecessor, rng)
        if k == 0:
            return rest
        return Ordinal.omega_power(exp.predecessor, k) + rest
    return _random_below_omega_power(random_below(exp, rng) + 1, rng)


def iter_interval(lo: Ordinal, count: int) -> Iterator[Ordinal]:
    """lo, lo+1, ..., lo+(count-1)."""
    cur = lo
    for _ in range(count):
        yield cur
        cur = cur + 1
