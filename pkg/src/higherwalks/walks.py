"""Walks: classical traces, internal walks, and two-dimensional walk trees.

The classical walk from beta down to alpha steps through minima of ladders,
Tr(a,b) = {b} + Tr(a, min(C_b \\ a)) with Tr(a,a) = {a}.  The number-of-steps
and maximal-weight statistics rho2/rho1 and the ascending lower trace L are
read off the same descent.  Internal walks conduct the recursion inside a
fixed club C_delta via compounded ladders.  The two-dimensional walk tr2
sends a triple to a finite binary tree of (input, output) nodes; its signed
variant Tr2 adds orientation data, whose negative-minus-positive charge is
the degree-2 step count rho2^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, ZERO, as_ordinal

OrdTuple = Tuple[Ordinal, ...]


@dataclass
class Trace:
    """Upper (descending) and lower (ascending) traces of one walk."""

    steps: List[Ordinal]
    lower: List[Ordinal]

    @property
    def rho2(self) -> int:
        return len(self.steps) - 1


def upper_trace(sys: LadderSystem, alpha, beta) -> Trace:
    """The walk from beta down to alpha, alpha <= beta."""
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if not alpha <= beta:
        raise ValueError("upper_trace requires alpha <= beta")
    steps = [beta]
    cur = beta
    while cur != alpha:
        nxt = sys.walk_step(cur, alpha)
        assert nxt is not None and nxt < cur
        steps.append(nxt)
        cur = nxt
    lower: List[Ordinal] = []
    best = ZERO  # max of the empty set is 0
    for i in range(len(steps) - 1):
        m = sys.ladder(steps[i]).max_below(alpha)
        if m is not None and m > best:
            best = m
        lower.append(best)
    return Trace(steps, lower)


def rho2(sys: LadderSystem, alpha, beta) -> int:
    return upper_trace(sys, alpha, beta).rho2


def rho1(sys: LadderSystem, alpha, beta) -> int:
    """max over walk steps of |alpha intersect C_step|; 0 for the trivial walk."""
    alpha = as_ordinal(alpha)
    trace = upper_trace(sys, alpha, beta)
    best = 0
    for step in trace.steps[: trace.rho2]:
        best = max(best, sys.ladder(step).count_below(alpha))
    return best


def internal_trace(sys: LadderSystem, delta, alpha, beta) -> Trace:
    """The C_delta-internal walk from beta down toward alpha, alpha <= beta < delta.

    When beta is outside C_delta the walk takes a first step up into the club;
    in particular the internal walk from beta to itself then has one step.
    """
    delta, alpha, beta = as_ordinal(delta), as_ordinal(alpha), as_ordinal(beta)
    if not delta.is_limit:
        raise ValueError("internal walks require a limit pivot")
    if not (alpha <= beta and beta < delta):
        raise ValueError("internal_trace requires alpha <= beta < delta")
    club = sys.ladder(delta)
    ground = club.first_geq(alpha)
    steps = [beta]
    if club.contains(beta):
        cur = beta
    else:
        cur = club.first_geq(beta)
        steps.append(cur)
    while cur != ground:
        view = sys.compound((cur, delta))
        nxt = view.first_geq(alpha)
        assert nxt is not None and nxt < cur
        steps.append(nxt)
        cur = nxt
    lower: List[Ordinal] = []
    best = ZERO
    for i in range(len(steps) - 1):
        src = steps[i]
        view = sys.compound((src, delta)) if club.contains(src) else club
        m = view.max_below(alpha)
        if m is not None and m > best:
            best = m
        lower.append(best)
    return Trace(steps, lower)


def rho2_internal(sys: LadderSystem, delta, alpha, beta) -> int:
    return internal_trace(sys, delta, alpha, beta).rho2


@dataclass
class WalkNode:
    """One node of a walk tree: an input tuple, its output step, and branches."""

    input: OrdTuple
    output: Optional[Ordinal] = None
    sign: Optional[int] = None
    children: List["WalkNode"] = field(default_factory=list)

    def nodes(self) -> List["WalkNode"]:
        out, stack = [], [self]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    def node_count(self) -> int:
        return sum(1 for n in self.nodes() if n.output is not None)

    def outputs(self) -> List[Tuple[Optional[int], Ordinal]]:
        return [(n.sign, n.output) for n in self.nodes() if n.output is not None]

    def to_dict(self) -> dict:
        return {
            "input": [str(x) for x in self.input],
            "output": None if self.output is None else str(self.output),
            "sign": None if self.sign is None else ("+" if self.sign > 0 else "-"),
            "children": [c.to_dict() for c in self.children],
        }


def _build_tr2(sys: LadderSystem, sign: Optional[int], alpha, beta, gamma) -> WalkNode:
    alpha, beta, gamma = as_ordinal(alpha), as_ordinal(beta), as_ordinal(gamma)
    if not (alpha <= beta and beta <= gamma):
        raise ValueError("tr2 requires alpha <= beta <= gamma")
    root = WalkNode(input=(alpha, beta, gamma))
    stack = [(root, sign)]
    while stack:
        node, s = stack.pop()
        a, b, c = node.input
        if b == c:
            continue
        if sys.ladder(c).contains(b):
            view = sys.compound((b, c))
            m = view.first_geq(a)
            if m is None:
                continue
            node.output = m
            node.sign = None if s is None else -s
            left = WalkNode(input=(a, m, c))
            right = WalkNode(input=(a, m, b))
            node.children = [left, right]
            stack.append((left, s))
            stack.append((right, None if s is None else -s))
        else:
            m = sys.ladder(c).first_geq(b)
            assert m is not None
            node.output = m
            node.sign = s
            left = WalkNode(input=(a, m, c))
            right = WalkNode(input=(a, b, m))
            node.children = [left, right]
            stack.append((left, s))
            stack.append((right, s))
    return root


def tr2(sys: LadderSystem, alpha, beta, gamma) -> WalkNode:
    """The two-dimensional walk tree on (alpha, beta, gamma); finite."""
    return _build_tr2(sys, None, alpha, beta, gamma)


def tr2_signed(sys: LadderSystem, sign: int, alpha, beta, gamma) -> WalkNode:
    """tr2 with orientation: outputs flip sign on internal steps only."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return _build_tr2(sys, sign, alpha, beta, gamma)


def leftmost_outputs(root: WalkNode) -> List[Ordinal]:
    """Outputs along leftmost descent; the internal walk below the root's pivot."""
    out, node = [], root
    while node is not None and node.output is not None:
        out.append(node.output)
        node = node.children[0] if node.children else None
    return out


def rightmost_third_coords(root: WalkNode) -> List[Ordinal]:
    """Third coordinates along the rightmost branch while the walk stays external.

    These reproduce the classical trace from the root's third coordinate down
    to its second, minus the final arrival.
    """
    pivot = root.input[1]
    out, node = [], root
    while node is not None and node.input[1] == pivot:
        out.append(node.input[2])
        node = node.children[1] if node.children else None
    return out


def _tr2_charge(sys: LadderSystem, vec: Tuple[Ordinal, Ordinal, Ordinal]) -> int:
    """Negative-minus-positive charge of the positively signed tree at vec.

    Flipping the input sign negates every output, so one sign suffices; the
    evaluation collapses repeated subtrees, unlike the materialized tree.
    """
    memo = getattr(sys, "_charge_memo", None)
    if memo is None:
        memo = sys._charge_memo = {}
    elif len(memo) > 1_500_000:
        memo.clear()
    stack = [vec]
    while stack:
        node = stack[-1]
        if node in memo:
            stack.pop()
            continue
        a, b, c = node
        if b == c:
            memo[node] = 0
            stack.pop()
            continue
        if sys.ladder(c).contains(b):
            m = sys.compound((b, c)).first_geq(a)
            if m is None:
                memo[node] = 0
                stack.pop()
                continue
            left, right = (a, m, c), (a, m, b)
            missing = [x for x in (left, right) if x not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[node] = 1 + memo[left] - memo[right]
        else:
            m = sys.ladder(c).first_geq(b)
            left, right = (a, m, c), (a, b, m)
            missing = [x for x in (left, right) if x not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[node] = -1 + memo[left] + memo[right]
        stack.pop()
    return memo[vec]


def rho2_n(sys: LadderSystem, n: int, vec) -> int:
    """Negative-minus-positive output charge of the signed degree-n walk."""
    vec = tuple(as_ordinal(v) for v in vec)
    if len(vec) != n + 1:
        raise ValueError(f"rho2_n at degree {n} needs a {n + 1}-tuple")
    for x, y in zip(vec, vec[1:]):
        if not x <= y:
            raise ValueError("rho2_n requires a nondecreasing tuple")
    if n == 1:
        alpha, beta = vec
        neg = 0
        cur = beta
        while cur != alpha:
            neg += 1
            cur = sys.walk_step(cur, alpha)
        return neg
    if n == 2:
        return _tr2_charge(sys, vec)
    raise ValueError("rho2_n is defined for n in {1, 2}")
