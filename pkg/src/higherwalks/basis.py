"""Distinguished generator sets and exact basis decomposition.

For a degree n >= 1 and an ordinal eps carrying a ladder, the distinguished
set B_n(eps) consists of the (n+1)-tuples that split as a head followed by an
internal tail whose first coordinate is exactly the compounded-ladder step
above the last head coordinate.  Images of these generators under the
boundary map form a basis of the boundary system; this module computes the
unique basis decomposition of any certified boundary chain, the induced
section, and the nearest-generator map that inserts a single ladder step in
front of the maximal proper internal tail.

``eps=None`` reads the whole universe as a regular top: every ordinal counts
as a ladder element of the top and the step above alpha is alpha+1.  That
ambient reading is what the coefficient systems extend.
"""

from __future__ import annotations

import sys as _sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from higherwalks.chains import Chain, add_to, boundary_of_generator, check_generator, faces
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, ZERO, as_ordinal, random_below

OrdTuple = Tuple[Ordinal, ...]
Decomposition = Dict[OrdTuple, int]


class NotABoundary(ValueError):
    """The chain fails its cycle/augmentation certificate or spans no basis."""


def _trim_memos(sys: LadderSystem) -> None:
    """Bound cache growth; only safe between top-level decompositions."""
    memos = getattr(sys, "_decomp_memos", None)
    if memos is not None:
        for memo in memos.values():
            if len(memo) > 150_000:
                memo.clear()
    if _sys.getrecursionlimit() < 100_000:
        _sys.setrecursionlimit(100_000)


class BasisSpec:
    """Degree, top ordinal (None for the ambient reading), and ladder system."""

    def __init__(self, n: int, eps: Optional[Ordinal], sys: LadderSystem):
        if n < 1:
            raise ValueError("basis degree must be >= 1")
        self.n = n
        self.eps = None if eps is None else as_ordinal(eps)
        if self.eps is not None and not self.eps < sys.bound:
            raise ValueError("eps must lie below the universe bound")
        self.sys = sys
        self.ctx: OrdTuple = () if self.eps is None else (self.eps,)

    def __repr__(self):
        top = "ambient" if self.eps is None else str(self.eps)
        return f"BasisSpec(n={self.n}, eps={top}, {self.sys!r})"


def _step_over(sys: LadderSystem, ctx: OrdTuple, alpha: Ordinal) -> Optional[Ordinal]:
    """min(C_ctx \\ (alpha+1)); ctx=() is the ambient top, stepping to alpha+1."""
    if not ctx:
        return alpha + 1
    return sys.step(ctx, alpha)


def is_basis_member(spec: BasisSpec, tup: Sequence) -> bool:
    """Whether the (n+1)-tuple splits as head + internal tail with exact step."""
    tup = check_generator(tup)
    if len(tup) != spec.n + 1:
        return False
    return _is_member(spec.sys, tup, spec.ctx)


def _member_memo_for(sys: LadderSystem, ctx: OrdTuple) -> dict:
    memos = getattr(sys, "_member_memos", None)
    if memos is None:
        memos = sys._member_memos = {}
    memo = memos.get(ctx)
    if memo is None:
        memo = memos[ctx] = {}
    elif len(memo) > 400_000:
        memo.clear()
    return memo


def _is_member(sys: LadderSystem, tup: OrdTuple, ctx: OrdTuple) -> bool:
    memo = _member_memo_for(sys, ctx)
    hit = memo.get(tup)
    if hit is not None:
        return hit
    result = False
    n = len(tup) - 1
    for i in range(n):
        head, tail = tup[: i + 1], tup[i + 1 :]
        if not sys.is_internal(tail, ctx):
            continue
        if _step_over(sys, tail[1:] + ctx, head[-1]) == tail[0]:
            result = True
            break
    memo[tup] = result
    return result


def b_nearest(spec: BasisSpec, vec: Sequence) -> Optional[Tuple[OrdTuple, int]]:
    """The nearest generator above an n-tuple, with the inserted index, or None.

    One compounded-ladder step above the last head coordinate is inserted in
    front of the maximal proper internal tail; the result is a basis member
    and recovers the input as its face at the returned index.
    """
    vec = check_generator(vec)
    return _b_nearest(spec.sys, vec, spec.ctx)


def _b_nearest(sys: LadderSystem, vec: OrdTuple, ctx: OrdTuple) -> Optional[Tuple[OrdTuple, int]]:
    head, tail = sys.max_proper_internal_tail(vec, ctx)
    step = _step_over(sys, tail + ctx, head[-1])
    if step is None:
        return None
    return head + (step,) + tail, len(head)


def _pred_in_top(sys: LadderSystem, ctx: OrdTuple, m: Ordinal) -> Optional[Ordinal]:
    """The element of C_ctx immediately below a member m (ambient: m-1)."""
    if not ctx:
        return m.predecessor if m.is_successor else None
    view = sys.compound(ctx)
    idx = view.index_of(m)
    assert idx is not None
    return view.element(idx - 1) if idx > 0 else None


def _decompose_generator(sys: LadderSystem, vec: OrdTuple, ctx: OrdTuple) -> Decomposition:
    """Basis decomposition of the boundary of a single generator.

    Recursion on the last coordinate m: generators already in the basis stand
    alone; for m a ladder member of the top the limit case descends one degree
    through the compounded ladder on m and the successor case trades m for its
    predecessor via the two-step boundary identity; coordinates outside the
    top ladder are lifted to the next ladder element above.
    """
    memos = getattr(sys, "_decomp_memos", None)
    if memos is None:
        memos = sys._decomp_memos = {}
    memo = memos.get(ctx)
    if memo is None:
        memo = memos[ctx] = {}
    hit = memo.get(vec)
    if hit is not None:
        return hit
    n = len(vec) - 1
    out: Decomposition
    if _is_member(sys, vec, ctx):
        out = {vec: 1}
    else:
        m = vec[-1]
        in_top = True if not ctx else sys.compound(ctx).contains(m)
        if in_top:
            if m.is_limit:
                if n == 1:
                    raise NotABoundary(
                        f"degree-1 boundaries through the limit {m} admit no finite decomposition "
                        "over the ambient top"
                    )
                sub = _decompose_generator_at(sys, vec[:-1], (m,) + ctx)
                out = {g + (m,): z for g, z in sub.items()}
                residual: Decomposition = {vec[:-1]: 1}
                for g, z in sub.items():
                    add_to(residual, g, -z)
                rest = _decompose_chain(sys, residual, n, ctx)
                sign = (-1) ** n
                for g, z in rest.items():
                    add_to(out, g, sign * z)
            else:
                eta = _pred_in_top(sys, ctx, m)
                assert eta is not None, "the least top element is absorbed by membership"
                beta = vec[:-1]
                assert beta[-1] < eta
                # copy the bulk recursive piece wholesale, then fold in the
                # handful of face terms
                out = dict(_decompose_generator(sys, beta + (eta,), ctx))
                sign = (-1) ** (n - 1)
                if n == 1:
                    # the degree-0 boundary of a single vertex is the unit
                    add_to(out, (eta, m), sign)
                else:
                    for k, face in faces(beta):
                        g = face + (eta, m)
                        assert _is_member(sys, g, ctx)
                        add_to(out, g, sign * (-1) ** k)
        else:
            view = sys.compound(ctx)
            delta = view.first_geq(m)
            assert delta is not None
            out = {}
            for j in range(n + 1):
                lifted = vec[:j] + vec[j + 1 :] + (delta,)
                sub = _decompose_generator(sys, lifted, ctx)
                sign = (-1) ** (n + j)
                for g, z in sub.items():
                    add_to(out, g, sign * z)
    memo[vec] = out
    return out


def _decompose_generator_at(sys: LadderSystem, vec: OrdTuple, ctx: OrdTuple) -> Decomposition:
    if len(vec) < 2:
        raise NotABoundary("cannot decompose boundaries of single vertices")
    return _decompose_generator(sys, vec, ctx)


def _decompose_chain(sys: LadderSystem, entries: Decomposition, n: int, ctx: OrdTuple) -> Decomposition:
    """Decomposition of a certified cycle chain of n-tuples.

    A preimage under the boundary map is produced by coning at the vertex 0;
    generators already containing 0 drop out, which is exact on cycles.
    """
    if not entries:
        return {}
    if n >= 2:
        bnd: Decomposition = {}
        for tup, coeff in entries.items():
            for i, face in faces(tup):
                add_to(bnd, face, coeff * (-1) ** i)
        if bnd:
            raise NotABoundary("chain is not a cycle")
    else:
        if sum(entries.values()) != 0:
            raise NotABoundary("degree-0 chain has nonzero augmentation")
    out: Decomposition = {}
    for tup, coeff in entries.items():
        if tup[0] == ZERO:
            continue
        sub = _decompose_generator(sys, (ZERO,) + tup, ctx)
        for g, z in sub.items():
            add_to(out, g, coeff * z)
    return out


def decompose(spec: BasisSpec, x: Chain) -> List[Tuple[int, OrdTuple]]:
    """The unique basis decomposition of a boundary chain.

    ``x`` must carry its certificate: vanishing boundary at degree >= 1 and
    vanishing augmentation at degree 0.  Returns (coefficient, generator)
    pairs with sum coeff * d(generator) = x exactly.
    """
    if x.degree != spec.n - 1:
        raise ValueError(f"decompose at basis degree {spec.n} expects a degree-{spec.n - 1} chain")
    if spec.n == 1:
        if x.augment() != 0:
            raise NotABoundary("degree-0 chain has nonzero augmentation")
    else:
        if not x.boundary().is_zero():
            raise NotABoundary("chain is not a cycle")
    if spec.eps is not None:
        for tup in x.entries:
            for c in tup:
                if not c < spec.eps:
                    raise ValueError(f"coordinate {c} is not below eps={spec.eps}")
    _trim_memos(spec.sys)
    result = _decompose_chain(spec.sys, dict(x.entries), spec.n, spec.ctx)
    return [(z, g) for g, z in sorted(result.items())]


def section_s(spec: BasisSpec, x: Chain) -> Chain:
    """The section applied to a boundary chain: its decomposition as a chain."""
    return Chain._make(spec.n, {g: z for z, g in decompose(spec, x)})


def section_of_boundary(spec: BasisSpec, tup: Sequence) -> Chain:
    """section_s(d <tup>) for a single generator of degree n."""
    tup = check_generator(tup)
    if len(tup) != spec.n + 1:
        raise ValueError(f"expected a {spec.n + 1}-tuple")
    _trim_memos(spec.sys)
    result = _decompose_generator(spec.sys, tup, spec.ctx)
    # shares the memoized dict: treat the returned chain as read-only
    return Chain._make(spec.n, result)


def sample_members(spec: BasisSpec, rng, count: int, tries: int = 4000) -> List[OrdTuple]:
    """Distinct basis members obtained as nearest generators of random tuples."""
    top = spec.eps if spec.eps is not None else spec.sys.bound
    seen = {}
    for _ in range(tries):
        if len(seen) >= count:
            break
        coords = set()
        while len(coords) < spec.n:
            coords.add(random_below(top, rng))
        vec = tuple(sorted(coords))
        hit = b_nearest(spec, vec)
        if hit is not None:
            seen.setdefault(hit[0], True)
    return sorted(seen)


def members_in_window(spec: BasisSpec, vertices: Sequence) -> List[OrdTuple]:
    """All basis members whose coordinates lie in the given finite vertex set."""
    import itertools

    verts = sorted({as_ordinal(v) for v in vertices})
    out = []
    for tup in itertools.combinations(verts, spec.n + 1):
        if is_basis_member(spec, tup):
            out.append(tup)
    return out


def decompose_bruteforce(spec: BasisSpec, x: Chain, vertices: Sequence) -> Optional[List[Tuple[int, OrdTuple]]]:
    """Integer linear solve of x against basis boundaries over a vertex window.

    Returns None when no integral combination over the window reproduces x.
    Shipped as the slow reference for the recursive decomposition.
    """
    candidates = members_in_window(spec, vertices)
    if not candidates and not x.is_zero():
        return None
    cols = [boundary_of_generator(g) for g in candidates]
    rows = sorted({t for col in cols for t in col} | set(x.entries))
    row_index = {t: i for i, t in enumerate(rows)}
    matrix = [[Fraction(0)] * (len(candidates) + 1) for _ in rows]
    for j, col in enumerate(cols):
        for t, z in col.items():
            matrix[row_index[t]][j] = Fraction(z)
    for t, z in x.entries.items():
        matrix[row_index[t]][-1] = Fraction(z)
    ncols = len(candidates)
    pivot_rows: List[int] = []
    pivot_cols: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = 1 / matrix[r][c]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivot_rows.append(r)
        pivot_cols.append(c)
        r += 1
    for i in range(r, len(matrix)):
        if matrix[i][-1] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for row, col in zip(pivot_rows, pivot_cols):
        solution[col] = matrix[row][-1]
    if any(v.denominator != 1 for v in solution):
        return None
    return [(int(v), candidates[j]) for j, v in enumerate(solution) if v != 0]
