"""C-sequences and compounded ladders.

A ladder system fixes, for every ordinal beta below a bound, a closed cofinal
subset C_beta of order type cf(beta): the empty set at 0, the singleton
{beta-1} at successors, and an increasing omega-sequence at limits.  Limit
ladders consist of 0 followed by successor ordinals, so that the i-th element
has cofinality cf(i).

Compounding pulls a ladder back through the order isomorphism onto an initial
segment: for beta in C_gamma with index k, the view C_(beta,gamma) is the
image of C_k under that isomorphism, and the operation iterates along tuples.
"""

from __future__ import annotations

import zlib
from typing import Dict, Optional, Sequence, Tuple

from higherwalks.ordinals import CofRank, Ordinal, ZERO, as_ordinal

OrdTuple = Tuple[Ordinal, ...]


class LadderView:
    """An increasing sequence of ordinals, finite or of order type omega."""

    def order_type(self) -> Optional[int]:
        """Number of elements, or None for order type omega."""
        raise NotImplementedError

    def element(self, i: int) -> Ordinal:
        raise NotImplementedError

    def prefix(self, n: int) -> list:
        ot = self.order_type()
        if ot is not None:
            n = min(n, ot)
        return [self.element(i) for i in range(n)]

    def first_geq(self, x: Ordinal) -> Optional[Ordinal]:
        """The least element >= x, or None."""
        i = self.index_geq(x)
        return None if i is None else self.element(i)

    def first_gt(self, x: Ordinal) -> Optional[Ordinal]:
        return self.first_geq(x + 1)

    def index_geq(self, x: Ordinal) -> Optional[int]:
        raise NotImplementedError

    def contains(self, x: Ordinal) -> bool:
        i = self.index_geq(x)
        return i is not None and self.element(i) == x

    def index_of(self, x: Ordinal) -> Optional[int]:
        i = self.index_geq(x)
        if i is not None and self.element(i) == x:
            return i
        return None

    def count_below(self, x: Ordinal) -> int:
        """|{e in view : e < x}|; finite since the view increases cofinally."""
        i = self.index_geq(x)
        if i is not None:
            return i
        ot = self.order_type()
        assert ot is not None
        return ot

    def max_below(self, x: Ordinal) -> Optional[Ordinal]:
        i = self.count_below(x)
        return self.element(i - 1) if i > 0 else None

    def is_empty(self) -> bool:
        return self.order_type() == 0


class _FiniteView(LadderView):
    def __init__(self, elems: OrdTuple):
        self.elems = elems

    def order_type(self) -> Optional[int]:
        return len(self.elems)

    def element(self, i: int) -> Ordinal:
        return self.elems[i]

    def index_geq(self, x: Ordinal) -> Optional[int]:
        for i, e in enumerate(self.elems):
            if e >= x:
                return i
        return None


class _CofinalView(LadderView):
    """Order-type-omega view with a monotone element function, cached."""

    _cache: list

    def order_type(self) -> Optional[int]:
        return None

    def element(self, i: int) -> Ordinal:
        cache = self._cache
        while len(cache) <= i:
            cache.append(self._element(len(cache)))
        return cache[i]

    def _element(self, i: int) -> Ordinal:
        raise NotImplementedError

    def index_geq(self, x: Ordinal) -> Optional[int]:
        if self.element(0) >= x:
            return 0
        hi = 1
        while self.element(hi) < x:
            hi *= 2
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.element(mid) < x:
                lo = mid
            else:
                hi = mid
        return hi


class _OmegaView(LadderView):
    """The identity ladder on omega: element i is the natural i."""

    def order_type(self) -> Optional[int]:
        return None

    def element(self, i: int) -> Ordinal:
        return Ordinal.from_int(i)

    def index_geq(self, x: Ordinal) -> Optional[int]:
        return x.to_int()

    def contains(self, x: Ordinal) -> bool:
        return x.is_natural


class _CanonicalLimitView(_CofinalView):
    """C_lam = {0} union {lam[k]+1 : k < omega} for limit lam."""

    def __init__(self, lam: Ordinal):
        self.lam = lam
        self._cache = []

    def _element(self, i: int) -> Ordinal:
        if i == 0:
            return ZERO
        return self.lam.fundamental(i - 1) + 1


class _SeededLimitView(_CofinalView):
    """A jittered cofinal omega-sequence of successors through a limit.

    Skips within the fundamental sequence and a bounded finite offset keep the
    view strictly increasing and cofinal while varying with the seed; elements
    stay 0-or-successor so the cofinality convention is preserved.
    """

    def __init__(self, lam: Ordinal, seed: int):
        self.lam = lam
        self.seed = seed
        self._cache = []
        exp = lam.terms[-1][0]
        self.jitter_ok = exp.is_limit or exp > Ordinal.from_int(1)

    def _bits(self, i: int, tag: str, mod: int) -> int:
        key = f"{self.seed}|{self.lam}|{i}|{tag}".encode()
        return zlib.crc32(key) % mod

    def _element(self, i: int) -> Ordinal:
        if i == 0:
            return ZERO
        k = i - 1
        h = 2 * k + self._bits(k, "h", 2)
        jitter = self._bits(k, "j", 4) if self.jitter_ok else 0
        return self.lam.fundamental(h) + (1 + jitter)


_EMPTY = _FiniteView(())


class LadderSystem:
    """Deterministic assignment beta -> C_beta, plus compounded views.

    ``kind`` is "canonical" or "seeded"; seeded systems jitter every limit
    ladder except C_omega, which is the identity on the naturals (omega is
    regular, and its ladder is fixed by convention).
    """

    def __init__(self, bound: Ordinal, kind: str = "canonical", seed: int = 0):
        if kind not in ("canonical", "seeded"):
            raise ValueError(f"unknown ladder kind {kind!r}")
        self.bound = as_ordinal(bound)
        self.kind = kind
        self.seed = seed
        self._ladders: Dict[Ordinal, LadderView] = {}
        self._compounds: Dict[OrdTuple, Optional[LadderView]] = {}

    def __repr__(self) -> str:
        tag = self.kind if self.kind == "canonical" else f"seeded:{self.seed}"
        return f"LadderSystem({tag}, bound={self.bound})"

    def ladder(self, beta) -> LadderView:
        beta = as_ordinal(beta)
        if not beta < self.bound:
            raise ValueError(f"{beta} is not below the universe bound {self.bound}")
        view = self._ladders.get(beta)
        if view is None:
            view = self._build(beta)
            self._ladders[beta] = view
        return view

    def _build(self, beta: Ordinal) -> LadderView:
        if beta.is_zero:
            return _EMPTY
        if beta.is_successor:
            return _FiniteView((beta.predecessor,))
        from higherwalks.ordinals import OMEGA

        if beta == OMEGA:
            return _OmegaView()
        if self.kind == "seeded":
            return _SeededLimitView(beta, self.seed)
        return _CanonicalLimitView(beta)

    # -- compounding -------------------------------------------------------

    def compound(self, ctx: Sequence) -> Optional[LadderView]:
        """The compounded ladder C_ctx, or None when undefined.

        ctx = (beta,) is C_beta; longer tuples require each coordinate to lie
        in the compounded ladder of its tail suffix.
        """
        if ctx.__class__ is tuple and ctx in self._compounds:
            return self._compounds[ctx]
        ctx = tuple(as_ordinal(c) for c in ctx)
        if not ctx:
            raise ValueError("empty compounding context")
        if ctx in self._compounds:
            return self._compounds[ctx]
        if len(ctx) == 1:
            view: Optional[LadderView] = self.ladder(ctx[0])
        else:
            base = self.compound(ctx[1:])
            if base is None:
                view = None
            else:
                k = base.index_of(ctx[0])
                if k is None:
                    view = None
                else:
                    # order type of C_ctx[1:] cut at ctx[0] is the finite k,
                    # whose own ladder is empty or the singleton {k-1}
                    if k == 0:
                        view = _EMPTY
                    else:
                        view = _FiniteView((base.element(k - 1),))
        self._compounds[ctx] = view
        return view

    def step(self, ctx: Sequence, alpha) -> Optional[Ordinal]:
        """min(C_ctx \\ (alpha+1)): the least compounded-ladder element above alpha."""
        alpha = as_ordinal(alpha)
        view = self.compound(ctx)
        if view is None:
            return None
        return view.first_gt(alpha)

    def walk_step(self, beta, alpha) -> Optional[Ordinal]:
        """min(C_beta \\ alpha): the least ladder element >= alpha."""
        return self.ladder(beta).first_geq(as_ordinal(alpha))

    # -- internality ---------------------------------------------------------

    def is_internal(self, vec: Sequence, ctx: Sequence = ()) -> bool:
        """Whether vec threads the compounded ladders over ctx with rising ranks.

        ctx = () reads the universe as a regular top: the membership clause at
        the last coordinate and the top rank bound are vacuous.  For a tuple
        (a_0..a_n) the rank chain (rank a_1, ..., rank a_n, rank ctx[0]) must
        strictly increase, with rank a_0 <= rank a_1; singletons carry no rank
        constraint.
        """
        if vec.__class__ is not tuple or any(v.__class__ is not Ordinal for v in vec):
            vec = tuple(as_ordinal(v) for v in vec)
        if ctx.__class__ is not tuple or any(c.__class__ is not Ordinal for c in ctx):
            ctx = tuple(as_ordinal(c) for c in ctx)
        n = len(vec) - 1
        if n < 0:
            return True
        if ctx:
            view = self.compound(ctx)
            if view is None or not view.contains(vec[-1]):
                return False
        for i in range(n):
            view = self.compound(vec[i + 1 :] + ctx)
            if view is None or not view.contains(vec[i]):
                return False
        chain = [v.cof_rank for v in vec[1:]]
        if ctx:
            chain.append(ctx[0].cof_rank)
        for r1, r2 in zip(chain, chain[1:]):
            if not r1 < r2:
                return False
        if n >= 1 and not vec[0].cof_rank <= vec[1].cof_rank:
            return False
        return True

    def max_proper_internal_tail(self, vec: Sequence, ctx: Sequence = ()) -> Tuple[OrdTuple, OrdTuple]:
        """Split vec = head + tail with tail the longest proper internal tail."""
        vec = tuple(as_ordinal(v) for v in vec)
        if not vec:
            raise ValueError("empty tuple has no proper tail")
        for length in range(len(vec) - 1, -1, -1):
            tail = vec[len(vec) - length :]
            if self.is_internal(tail, ctx):
                return vec[: len(vec) - length], tail
        raise AssertionError("the empty tail is always internal")


def canonical(bound) -> LadderSystem:
    return LadderSystem(as_ordinal(bound), "canonical")


def seeded(bound, seed: int) -> LadderSystem:
    return LadderSystem(as_ordinal(bound), "seeded", seed)
