from __future__ import annotations

import random

import pytest

from higherwalks import fsystem, walks
from higherwalks.basis import BasisSpec
from higherwalks.chains import Chain
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import OMEGA, ZERO, Ordinal, random_below
from tests.conftest import BOUND, O, sample_increasing


def test_degree_zero_climb(sys_c):
    # the value at <j> charges every consecutive pair from j on with -1
    for j in (0, 2, 5):
        for i in range(9):
            want = -1 if i >= j else 0
            assert fsystem.f_coeff(sys_c, (O(j),), (O(i), O(i + 1))) == want
    assert fsystem.f_coeff(sys_c, (O(2),), (O(3), O(5))) == 0


def test_degree_one_zero_at_successor_pairs(sys_c, rng):
    for _ in range(40):
        alpha = random_below(O("w^3"), rng)
        target = sample_increasing(rng, O("w^3") + 10, 3)
        assert fsystem.f_coeff(sys_c, (alpha, alpha + 1), target) == 0


def test_degree_one_closed_form_at_omega(sys_c):
    vec = (ZERO, OMEGA)
    assert fsystem.f_coeff(sys_c, vec, (O(3), O(4), OMEGA)) == -1
    assert fsystem.f_coeff(sys_c, vec, (ZERO, O(2), OMEGA)) == 0
    sliced = fsystem.x_slice(sys_c, vec)
    assert sliced == {(ZERO, O(1), OMEGA): -1}
    full = fsystem.full_support(sys_c, (O(2), O(9)))
    assert full == {(O(2), O(i), O(i + 1)): -1 for i in range(3, 9)}


def test_support_containment(sys_c, rng):
    for _ in range(60):
        n = rng.choice([1, 2])
        vec = sample_increasing(rng, O("w^3"), n + 1)
        lo, hi = vec[0], vec[-1]
        coords = set()
        while len(coords) < n + 2:
            coords.add(random_below(O("w^3") + 20, rng))
        target = tuple(sorted(coords))
        if target[0] >= lo and target[-1] <= hi:
            continue
        assert fsystem.f_coeff(sys_c, vec, target) == 0


def test_degree_one_range(sys_c, rng):
    for _ in range(50):
        vec = sample_increasing(rng, O("w^3"), 2)
        coords = set()
        while len(coords) < 3:
            coords.add(random_below(vec[-1] + 1, rng))
        target = tuple(sorted(coords))
        assert fsystem.f_coeff(sys_c, vec, target) in (-1, 0)


def test_branch_nonrepetition(sys_c, rng):
    # descend random branches of the formal expansion; no node may recur
    from higherwalks.basis import _b_nearest

    for _ in range(60):
        vec = sample_increasing(rng, O("w^3"), rng.choice([2, 3]))
        seen = {vec}
        cur = vec
        for _ in range(60):
            hit = _b_nearest(sys_c, cur, ())
            if hit is None:
                break
            gen, p = hit
            assert gen not in seen
            seen.add(gen)
            choices = [i for i in range(len(gen)) if i != p]
            cur = gen[: (i := rng.choice(choices))] + gen[i + 1 :]
            if cur in seen:
                break
            seen.add(cur)


def test_x_slice_walk_image(sys_c, rng):
    # pinned slices list consecutive steps of the walk shifted one above
    for _ in range(80):
        alpha, beta = sample_increasing(rng, O("w^3"), 2)
        sliced = fsystem.x_slice(sys_c, (alpha, beta))
        steps = walks.upper_trace(sys_c, alpha + 1, beta).steps
        want = {(alpha, steps[i + 1], steps[i]): -1 for i in range(len(steps) - 1)}
        assert sliced == want


def test_x_slice_degree_two_matches_signed_tree(sys_c, rng):
    # dual route: the pinned slice coincides with the signed walk tree started
    # one step above the pinned coordinate
    for _ in range(80):
        alpha, beta, gamma = sample_increasing(rng, O("w^3"), 3)
        sliced = fsystem.x_slice(sys_c, (alpha, beta, gamma))
        tree = walks.tr2_signed(sys_c, 1, alpha + 1, beta, gamma)
        want = {}
        stack = [tree]
        while stack:
            node = stack.pop()
            stack.extend(node.children)
            if node.output is None:
                continue
            a, b, c = node.input
            if sys_c.ladder(c).contains(b):
                key = (alpha, node.output, b, c)
            else:
                key = (alpha, b, node.output, c)
            want[key] = want.get(key, 0) + node.sign
        want = {k: v for k, v in want.items() if v}
        assert sliced == want


def test_x_slice_empty_at_consecutive_pair(sys_c):
    alpha = O("w^2+4")
    assert fsystem.x_slice(sys_c, (alpha, alpha + 1)) == {}


def test_support_slice_examples(sys_c):
    sliced = fsystem.support_slice(sys_c, (ZERO, O("w*2")), OMEGA)
    assert sliced == {(ZERO, O("w+1"), O("w*2")): -1, (ZERO, OMEGA, O("w+1")): -1}
    gamma = O("w^2+w")
    assert fsystem.support_slice(sys_c, (ZERO, gamma), gamma) == {}
    assert fsystem.support_slice(sys_c, (O(2),), OMEGA) == {}
    assert fsystem.support_slice(sys_c, (O(2),), O(7)) == {(O(6), O(7)): -1}


def test_support_slice_walk_embedding(sys_c, rng):
    for _ in range(80):
        beta, gamma = sample_increasing(rng, O("w^3"), 2, nonzero_min=True)
        sliced = fsystem.support_slice(sys_c, (ZERO, gamma), beta)
        trace = walks.upper_trace(sys_c, beta, gamma)
        assert len(sliced) == trace.rho2
        rows = sorted(sliced, key=lambda t: t[-1], reverse=True)
        assert [r[2] for r in rows] == trace.steps[:-1]
        assert [r[1] for r in rows] == trace.steps[1:]
        assert sorted(r[0] for r in rows) == sorted(trace.lower)


def test_verify_coherence_examples(sys_c, rng):
    rep = fsystem.verify_coherence(sys_c, (ZERO, O(1), O(2)), 10, rng)
    assert rep["pass"] and rep["support_size"] == 1
    rep = fsystem.verify_coherence(sys_c, (O(3), OMEGA, O("w*2+5")), 15, rng)
    assert rep["pass"]
    rep = fsystem.verify_coherence(sys_c, (O(2), O("w+3"), O("w^2"), O("w^2+w")), 10, rng)
    assert rep["pass"]


def test_mod_finite_difference_enumerated(sys_c, rng):
    # the difference of two degree-1 values below the smaller index is exactly
    # the restricted section defect, so its support is finite and bounded
    for _ in range(25):
        alpha, beta, gamma = sample_increasing(rng, O("w^2"), 3)
        defect = fsystem.section_defect(sys_c, (alpha, beta, gamma))
        restricted = {t: z for t, z in defect.entries.items() if t[0] < beta}
        for t, z in restricted.items():
            got = fsystem.f_coeff(sys_c, (alpha, beta), t) - fsystem.f_coeff(sys_c, (alpha, gamma), t)
            assert got == z
        assert len(restricted) <= len(defect.entries)


def test_m_value_examples(sys_c):
    assert fsystem.m_value(sys_c, OMEGA, O("w*2")) == ZERO
    beta = O("w^2+w")
    assert fsystem.m_value(sys_c, beta, beta + 1) == sys_c.ladder(beta).element(0)


def test_m_value_against_coefficient_oracle(sys_c, rng):
    # referee: consecutive club pairs lie in the support from the index of m
    # onward, and the pair just below it does not
    checked = 0
    while checked < 25:
        beta = random_below(O("w^2"), rng)
        gamma = random_below(O("w^2"), rng)
        if not (beta.is_limit and beta < gamma):
            continue
        m = fsystem.m_value(sys_c, beta, gamma)
        club = sys_c.ladder(beta)
        i0 = club.index_of(m)
        assert i0 is not None
        for j in range(i0, i0 + 12):
            t = (club.element(j), club.element(j + 1), beta)
            assert fsystem.f_coeff(sys_c, (ZERO, gamma), t) == -1
        if i0 > 0:
            t = (club.element(i0 - 1), club.element(i0), beta)
            assert fsystem.f_coeff(sys_c, (ZERO, gamma), t) == 0
        checked += 1


def test_relativize_examples(sys_c, rng):
    rep = fsystem.relativize_check(sys_c, (O(2), O(6)), OMEGA, 50, rng)
    assert rep["pass"]
    rep = fsystem.relativize_check(sys_c, (O("w+1"), O("w+4")), O("w*2"), 50, rng)
    assert rep["pass"]
    with pytest.raises(ValueError):
        fsystem.relativize_check(sys_c, (O(3), OMEGA), O("w*2"), 5, rng)


def test_f_tilde_weights(sys_c, rng):
    for _ in range(60):
        alpha, beta = sample_increasing(rng, O("w^3"), 2)
        sliced = fsystem.f_tilde_x_slice(sys_c, alpha, beta)
        steps = walks.upper_trace(sys_c, alpha + 1, beta).steps
        want = {}
        for i in range(len(steps) - 1):
            weight = Ordinal.from_int(sys_c.ladder(steps[i]).count_below(alpha))
            key = (alpha, weight, steps[i])
            want[key] = want.get(key, 0) - 1
        assert sliced == want
        if sliced and all(
            not sys_c.ladder(s).contains(alpha) for s in walks.upper_trace(sys_c, alpha, beta).steps[:-1]
        ):
            top = max(w.to_int() for _, w, _ in sliced)
            assert top == walks.rho1(sys_c, alpha, beta)


def test_oracle_class_surface(sys_c):
    oracle = fsystem.FOracle(sys_c, (ZERO, OMEGA))
    assert oracle.coefficient((O(3), O(4), OMEGA)) == -1
    assert oracle.support_slice(O(4)) == {(O(3), O(4), OMEGA): -1}
    tilde = fsystem.FOracle(sys_c, (O(2), O(6)), variant="tilde")
    assert tilde.x_slice()
    with pytest.raises(ValueError):
        fsystem.FOracle(sys_c, (ZERO, O(1), O(2), O(3)))
    with pytest.raises(ValueError):
        fsystem.f_coeff(sys_c, (ZERO, O(1), O(2), O(3)), (ZERO, O(1), O(2), O(3), O(4)))


def test_concurrent_queries_match_sequential(rng):
    import concurrent.futures

    from higherwalks.ladders import LadderSystem

    queries = []
    for _ in range(40):
        vec = sample_increasing(rng, O("w^2"), 2)
        target = sample_increasing(rng, O("w^2") + 5, 3)
        queries.append((vec, target))
    expected = [fsystem.f_coeff(LadderSystem(BOUND), v, t) for v, t in queries]
    shared = LadderSystem(BOUND)
    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
        got = list(pool.map(lambda q: fsystem.f_coeff(shared, q[0], q[1]), queries))
    assert got == expected


def test_seeded_systems_share_identities(rng):
    for seed in (1, 2):
        sys_s = LadderSystem(BOUND, "seeded", seed)
        for _ in range(15):
            beta, gamma = sample_increasing(rng, O("w^3"), 2, nonzero_min=True)
            sliced = fsystem.support_slice(sys_s, (ZERO, gamma), beta)
            assert len(sliced) == walks.rho2(sys_s, beta, gamma)
        rep = fsystem.verify_coherence(sys_s, (O(1), O("w+2"), O("w^2+3")), 5, rng)
        assert rep["pass"]
