"""Coefficient oracles extending the section over the ambient universe.

For an increasing (n+1)-tuple the coefficient system assigns an integer to
every (n+2)-tuple by formally expanding the nearest-generator identity: the
value at a tuple is the signed sum, over the expansion tree, of occurrences
of the queried generator.  Alternating sums over the faces of an (n+2)-tuple
collapse to the section of its boundary, which is the coherence this module
verifies exactly.

Expansions may have infinite support (already at degree 0 the value climbs a
club unboundedly), so queries are evaluated under two pruning rules: a branch
dies once the queried tuple leaves the support interval of the node, and once
the target's first coordinate reaches the node's second coordinate.  Both are
sound for every branch and together cut each stabilized climb.

Degrees 0..2 are exposed.  Higher degrees run the same recursion but carry no
finite-scale identities to test them against; ``allow_experimental`` unlocks
them without any guarantee.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from higherwalks.basis import BasisSpec, _b_nearest, section_of_boundary
from higherwalks.chains import Chain, add_to, check_generator
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, ZERO, as_ordinal, random_below
from higherwalks.walks import upper_trace

OrdTuple = Tuple[Ordinal, ...]
Support = Dict[OrdTuple, int]

_NODE_BUDGET = 2_000_000


class ExpansionBudgetExceeded(RuntimeError):
    """The formal expansion outgrew the configured node budget."""


def _check_degree(vec: OrdTuple, allow_experimental: bool) -> int:
    n = len(vec) - 1
    if n > 2 and not allow_experimental:
        raise ValueError("coefficient systems are exposed for degrees 0..2")
    return n


def _capped_cache(sys: LadderSystem, name: str, cap: int) -> dict:
    cache = getattr(sys, name, None)
    if cache is None:
        cache = {}
        setattr(sys, name, cache)
    elif len(cache) > cap:
        cache.clear()
    return cache


def f_coeff_many(sys: LadderSystem, vec: Sequence, targets: Sequence[Sequence], allow_experimental: bool = False) -> List[int]:
    """Coefficients of many (n+2)-tuples in one pruned traversal.

    Pruning is per target: a subtree contributes zero to a target once the
    target leaves the node's support interval or its first coordinate reaches
    the node's second.  The node itself dies when every target is pruned,
    which cuts each stabilized climb.
    """
    vec = check_generator(vec)
    targets = [check_generator(t) for t in targets]
    _check_degree(vec, allow_experimental)
    for t in targets:
        if len(t) != len(vec) + 1:
            raise ValueError("target length must exceed the input length by one")
    if not targets:
        return []
    bmemo = _capped_cache(sys, "_bnearest_memo", 500_000)

    def b_of(nu: OrdTuple):
        if nu not in bmemo:
            bmemo[nu] = _b_nearest(sys, nu, ())
        return bmemo[nu]

    tkeys = [(t[0].key, t[-1].key) for t in targets]
    indices = range(len(targets))
    mask_cache: dict = {}

    def node_mask(nu: OrdTuple) -> int:
        m = mask_cache.get(nu)
        if m is not None:
            return m
        n0k = nu[0].key
        m = 0
        if len(nu) >= 2:
            n1k = nu[1].key
            nlk = nu[-1].key
            for j in indices:
                t0k, tlk = tkeys[j]
                if n0k <= t0k < n1k and tlk <= nlk:
                    m |= 1 << j
        else:
            for j in indices:
                if n0k <= tkeys[j][0]:
                    m |= 1 << j
        mask_cache[nu] = m
        return m

    zeros = (0,) * len(targets)
    memo: dict = {}
    stack = [vec]
    steps = 0
    while stack:
        steps += 1
        if steps > _NODE_BUDGET:
            raise ExpansionBudgetExceeded("coefficient query exceeded the node budget")
        nu = stack[-1]
        if nu in memo:
            stack.pop()
            continue
        if not node_mask(nu):
            memo[nu] = zeros
            stack.pop()
            continue
        hit = b_of(nu)
        if hit is None:
            memo[nu] = zeros
            stack.pop()
            continue
        gen, p = hit
        children = [gen[:i] + gen[i + 1 :] for i in range(len(gen)) if i != p]
        missing = [c for c in children if c not in memo and node_mask(c)]
        if missing:
            stack.extend(missing)
            continue
        acc = [1 if gen == t else 0 for t in targets]
        sign_p = (-1) ** p
        idx = 0
        for i in range(len(gen)):
            if i == p:
                continue
            child = children[idx]
            idx += 1
            vals = memo.get(child)
            if vals is None or vals is zeros:
                continue
            sign = (-1) ** i
            for j, v in enumerate(vals):
                if v:
                    acc[j] -= sign * v
        # pruned targets carry coefficient zero at this node by the support
        # and climb cuts; store that, not the partial accumulation
        mask = node_mask(nu)
        memo[nu] = tuple(sign_p * a if (mask >> j) & 1 else 0 for j, a in enumerate(acc))
        stack.pop()
    return list(memo[vec])


def f_coeff(sys: LadderSystem, vec: Sequence, target: Sequence, allow_experimental: bool = False) -> int:
    """Coefficient of the target (n+2)-tuple in the expansion of the n-degree input."""
    results = _capped_cache(sys, "_fcoeff_results", 400_000)
    vec = check_generator(vec)
    target = check_generator(target)
    key = (vec, target)
    if key in results:
        return results[key]
    value = f_coeff_many(sys, vec, [target], allow_experimental)[0]
    results[key] = value
    return value


def full_support(sys: LadderSystem, vec: Sequence, allow_experimental: bool = False) -> Support:
    """The complete support of a terminating expansion, as a coefficient dict.

    Below the countable bound every degree-2 expansion terminates (ladders
    contain no limit elements, so no branch stabilizes into a climb); degrees
    0 and 1 terminate only when the input sits below a finite-type region.
    The node budget converts a non-terminating call into an error.
    """
    vec = check_generator(vec)
    _check_degree(vec, allow_experimental)
    results = _capped_cache(sys, "_fsupport_results", 40_000)
    if vec in results:
        return dict(results[vec])
    bmemo = _capped_cache(sys, "_bnearest_memo", 500_000)

    def b_of(nu: OrdTuple):
        if nu not in bmemo:
            bmemo[nu] = _b_nearest(sys, nu, ())
        return bmemo[nu]

    memo: dict = {}
    stack = [vec]
    steps = 0
    while stack:
        steps += 1
        if steps > _NODE_BUDGET:
            raise ExpansionBudgetExceeded("full expansion exceeded the node budget")
        nu = stack[-1]
        if nu in memo:
            stack.pop()
            continue
        hit = b_of(nu)
        if hit is None:
            memo[nu] = {}
            stack.pop()
            continue
        gen, p = hit
        children = [gen[:i] + gen[i + 1 :] for i in range(len(gen)) if i != p]
        missing = [c for c in children if c not in memo]
        if missing:
            stack.extend(missing)
            continue
        acc: Support = {gen: (-1) ** p}
        idx = 0
        for i in range(len(gen)):
            if i == p:
                continue
            child = children[idx]
            idx += 1
            sign = (-1) ** (p + i + 1)
            for t, z in memo[child].items():
                add_to(acc, t, sign * z)
        memo[nu] = acc
        stack.pop()
    results[vec] = memo[vec]
    return dict(memo[vec])


def x_slice(sys: LadderSystem, vec: Sequence, allow_experimental: bool = False) -> Support:
    """Support with first coordinate pinned to the input's first coordinate.

    Children dropping the first coordinate leave the slice for good, so the
    in-slice expansion mirrors a walk tree and is finite.
    """
    vec = check_generator(vec)
    _check_degree(vec, allow_experimental)
    pin = vec[0]
    out: Support = {}
    stack: List[Tuple[OrdTuple, int]] = [(vec, 1)]
    steps = 0
    while stack:
        steps += 1
        if steps > _NODE_BUDGET:
            raise ExpansionBudgetExceeded("x-slice expansion exceeded the node budget")
        nu, sign = stack.pop()
        hit = _b_nearest(sys, nu, ())
        if hit is None:
            continue
        gen, p = hit
        assert gen[0] == pin
        add_to(out, gen, sign * (-1) ** p)
        for i in range(1, len(gen)):
            if i == p:
                continue
            stack.append((gen[:i] + gen[i + 1 :], sign * (-1) ** (p + i + 1)))
    return out


def support_slice(sys: LadderSystem, vec: Sequence, pivot, allow_experimental: bool = False) -> Support:
    """Support restricted to first coordinate < pivot <= all later coordinates."""
    vec = check_generator(vec)
    pivot = as_ordinal(pivot)
    n = _check_degree(vec, allow_experimental)
    if not vec[0] <= pivot:
        raise ValueError("the pivot must not precede the input's first coordinate")
    if n >= 1 and not pivot <= vec[-1]:
        raise ValueError("the pivot must not exceed the input's last coordinate")

    def in_region(t: OrdTuple) -> bool:
        return t[0] < pivot and t[1] >= pivot

    if n >= 2:
        return {t: z for t, z in full_support(sys, vec, allow_experimental).items() if in_region(t)}
    if n == 0:
        # the degree-0 expansion climbs consecutive steps above its input, so
        # the unique candidate straddling the pivot ends exactly at it
        if pivot.is_successor and pivot.predecessor >= vec[0]:
            return {(pivot.predecessor, pivot): -1}
        return {}
    out: Support = {}
    stack: List[Tuple[OrdTuple, int]] = [(vec, 1)]
    steps = 0
    while stack:
        steps += 1
        if steps > _NODE_BUDGET:
            raise ExpansionBudgetExceeded("slice expansion exceeded the node budget")
        nu, sign = stack.pop()
        if nu[0] >= pivot:
            continue
        # a region tuple needs two coordinates at or above the pivot, and the
        # subtree of a node never exceeds the node's own maximum
        if nu[-1] <= pivot:
            continue
        hit = _b_nearest(sys, nu, ())
        if hit is None:
            continue
        gen, p = hit
        if in_region(gen):
            add_to(out, gen, sign * (-1) ** p)
        for i in range(len(gen)):
            if i == p:
                continue
            stack.append((gen[:i] + gen[i + 1 :], sign * (-1) ** (p + i + 1)))
    return out


def section_defect(sys: LadderSystem, vec: Sequence) -> Chain:
    """The section of the boundary of an (n+2)-tuple over the ambient top.

    This chain is exactly the alternating sum of the coefficient systems of
    the tuple's faces.
    """
    vec = check_generator(vec)
    spec = BasisSpec(len(vec) - 1, None, sys)
    return section_of_boundary(spec, vec)


def verify_coherence(sys: LadderSystem, vec: Sequence, extra_samples: int = 20, rng=None) -> dict:
    """Check the face-alternating sum against the section of the boundary.

    Every tuple in the support of the section must carry the matching
    coefficient, and sampled tuples outside it must sum to zero.  Returns a
    report with any witnesses of failure.
    """
    vec = check_generator(vec)
    n = len(vec) - 2
    if n < 0:
        raise ValueError("coherence tuples have length n+2 >= 2")
    _check_degree(vec[:-1], False)
    defect = section_defect(sys, vec)

    targets = defect.support()
    outside: List[OrdTuple] = []
    if rng is not None and extra_samples > 0:
        seen = set(defect.entries)
        hi = vec[-1] + (len(vec) + 3)
        attempts = 0
        while len(outside) < extra_samples and attempts < 50 * extra_samples:
            attempts += 1
            coords = set()
            while len(coords) < len(vec):
                coords.add(random_below(hi, rng))
            t = tuple(sorted(coords))
            if t in seen or t in outside:
                continue
            outside.append(t)
    all_targets = targets + outside
    totals = [0] * len(all_targets)
    for i in range(len(vec)):
        face = vec[:i] + vec[i + 1 :]
        sign = (-1) ** i
        for j, v in enumerate(f_coeff_many(sys, face, all_targets)):
            totals[j] += sign * v
    mismatches = []
    for j, t in enumerate(all_targets):
        want = defect.entries.get(t, 0)
        if totals[j] != want:
            mismatches.append({"target": [str(x) for x in t], "got": totals[j], "want": want})
    return {
        "tuple": [str(x) for x in vec],
        "support_size": len(defect.entries),
        "outside_checked": len(outside),
        "mismatches": mismatches,
        "pass": not mismatches,
    }


def m_value(sys: LadderSystem, beta, gamma) -> Ordinal:
    """The least ladder element of beta from which the club tail stays in support.

    Computed as the first element of C_beta at or above the maximum of the
    lower trace of the walk from gamma down to beta.
    """
    beta, gamma = as_ordinal(beta), as_ordinal(gamma)
    if not beta.is_limit:
        raise ValueError("m_value requires a limit first argument")
    if not beta <= gamma:
        raise ValueError("m_value requires beta <= gamma")
    trace = upper_trace(sys, beta, gamma)
    xi = max(trace.lower) if trace.lower else ZERO
    result = sys.ladder(beta).first_geq(xi)
    assert result is not None
    return result


def relativize_check(sys: LadderSystem, pair: Sequence, gamma, samples: int = 100, rng=None) -> dict:
    """Compare degree-2 coefficients on the top hyperplane with translated degree-1 ones.

    For a pair inside the club of a limit gamma, coefficients at targets
    ending in gamma agree with the degree-1 coefficients of the index tuples
    under the club's increasing enumeration, and vanish whenever the target's
    other coordinates leave the club.
    """
    gamma = as_ordinal(gamma)
    if not gamma.is_limit:
        raise ValueError("relativization needs a limit top")
    pair = check_generator(pair)
    if len(pair) != 2:
        raise ValueError("relativize_check compares degree 2 against degree 1")
    club = sys.ladder(gamma)
    idx = [club.index_of(p) for p in pair]
    if None in idx:
        raise ValueError("the pair must lie inside the club of gamma")
    support = full_support(sys, pair + (gamma,))
    plane = {t: z for t, z in support.items() if t[-1] == gamma}
    mismatches = []
    checked = 0

    def f1_value(t3: OrdTuple) -> int:
        indices = [club.index_of(c) for c in t3]
        if None in indices:
            return 0
        lifted = tuple(Ordinal.from_int(i) for i in indices)
        return f_coeff(sys, tuple(Ordinal.from_int(i) for i in idx), lifted)

    for t, z in sorted(plane.items()):
        want = f1_value(t[:-1])
        if z != want:
            mismatches.append({"target": [str(x) for x in t], "got": z, "want": want})
        checked += 1
    if rng is not None:
        while checked < samples:
            k = rng.randrange(3)
            coords = set()
            while len(coords) < 3 - k:
                coords.add(club.element(rng.randrange(40)))
            while len(coords) < 3:
                coords.add(random_below(gamma, rng))
            t3 = tuple(sorted(coords))
            if len(t3) < 3 or not t3[-1] < gamma:
                continue
            got = plane.get(t3 + (gamma,), 0)
            want = f1_value(t3)
            if got != want:
                mismatches.append({"target": [str(x) for x in t3 + (gamma,)], "got": got, "want": want})
            checked += 1
    return {
        "pair": [str(p) for p in pair],
        "gamma": str(gamma),
        "checked": checked,
        "plane_support": len(plane),
        "mismatches": mismatches,
        "pass": not mismatches,
    }


def f_tilde_x_slice(sys: LadderSystem, alpha, beta) -> Dict[Tuple[Ordinal, Ordinal, Ordinal], int]:
    """Pinned slice of the weight-collapsed variant of the degree-1 system.

    Middle coordinates record |alpha intersect C_step| instead of the step's
    ladder element, collapsing the club axis to the naturals.
    """
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if not alpha < beta:
        raise ValueError("requires alpha < beta")
    out: Dict[Tuple[Ordinal, Ordinal, Ordinal], int] = {}
    cur = beta
    while True:
        step = sys.step((cur,), alpha)
        if step is None:
            break
        weight = Ordinal.from_int(sys.ladder(cur).count_below(alpha))
        key = (alpha, weight, cur)
        out[key] = out.get(key, 0) - 1
        cur = step
    return out


class FOracle:
    """Queryable coefficient system for one input tuple."""

    def __init__(self, sys: LadderSystem, vec: Sequence, variant: str = "standard"):
        self.sys = sys
        self.vec = check_generator(vec)
        self.degree = _check_degree(self.vec, False)
        if variant not in ("standard", "tilde"):
            raise ValueError("variant must be standard or tilde")
        if variant == "tilde" and self.degree != 1:
            raise ValueError("the tilde variant exists at degree 1 only")
        self.variant = variant

    def coefficient(self, target: Sequence) -> int:
        if self.variant == "tilde":
            raise ValueError("tilde oracles expose the pinned slice, not pointwise queries")
        return f_coeff(self.sys, self.vec, target)

    def x_slice(self) -> Support:
        if self.variant == "tilde":
            return f_tilde_x_slice(self.sys, *self.vec)  # type: ignore[arg-type]
        return x_slice(self.sys, self.vec)

    def support_slice(self, pivot) -> Support:
        return support_slice(self.sys, self.vec, pivot)
