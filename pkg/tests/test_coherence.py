from __future__ import annotations

import itertools
import random

import pytest

from higherwalks import coherence as coh
from higherwalks import fsystem
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import OMEGA, ZERO, Ordinal, random_below
from tests.conftest import BOUND, O, sample_increasing


def test_theta_roundtrip_and_shape():
    th = coh.Theta()
    for q in range(4):
        for r in range(60):
            alpha = th._join(q, r)
            t = th.apply(alpha)
            assert t[0] < t[1] < t[2]
            assert th.invert(t) == alpha


def test_theta_certified_closure_points():
    th = coh.Theta()
    points = th.closure_points(3)
    assert [str(p) for p in points] == ["w", "w*2", "w*3"]
    # image of a closure point covers exactly the triples below it: spot-check
    # both directions through the inverse
    below_w = [Ordinal.from_int(i) for i in range(8)]
    for t in itertools.combinations(below_w, 3):
        assert th.invert(t) < OMEGA
    for k in range(0, 200, 7):
        t = th.apply(Ordinal.from_int(k))
        assert all(x < OMEGA for x in t)
    w2 = O("w*2")
    for t in [(O(2), O(5), O("w+3")), (O("w+1"), O("w+2"), O("w+9"))]:
        inv = th.invert(t)
        assert OMEGA <= inv < w2
        assert th.apply(inv) == t


def test_phi_theta_values(sys_c):
    th = coh.Theta()
    # triples coded outside the support interval give 0
    assert coh.phi_theta(sys_c, th, O(1), ZERO) == 0
    # a coded triple realizing a consecutive pair below a closure point
    beta = O("w*2")
    alpha = th.invert((O(3), O(4), OMEGA))
    assert alpha < beta
    assert coh.phi_theta(sys_c, th, beta, alpha) == 1
    assert coh.phi_theta(sys_c, th, beta, th.invert((O(2), O(4), OMEGA))) == 0


def test_phi_theta_family_coherent(sys_c):
    fam = coh.PhiThetaFamily(sys_c)
    window = [Ordinal.from_int(i) for i in range(30)]
    pairs = [(OMEGA, O("w*2")), (O("w*2"), O("w*3"))]
    reports = coh.check_coherent_I(fam, pairs, window, certify=True)
    assert all(r["pass"] for r in reports)


def test_is_0_trivial_modes():
    window = [O(i) for i in range(10)]
    zero = lambda a: 0
    assert coh.is_0_trivial(zero, window, (coh.EXACT, []))["pass"] is True
    tail = lambda a: 1
    verdict = coh.is_0_trivial(tail, window, (coh.INFINITE,))
    assert verdict["pass"] is False
    with pytest.raises(coh.CertificationError):
        coh.is_0_trivial(zero, window, None, certify=True)
    assert coh.is_0_trivial(zero, window, None, certify=False)["pass"] is None
    with pytest.raises(coh.CertificationError):
        coh.is_0_trivial(tail, window, (coh.EXACT, []))


def test_slice_family_coherent_with_exact_defects(sys_c, rng):
    fam = coh.SliceFamily(sys_c, 1)
    window = [Ordinal.from_int(i) for i in range(10)] + [O("w+1"), O("w*2"), O("w^2+1")]
    tuples = []
    while len(tuples) < 8:
        pair = sample_increasing(rng, O("w^3"), 2, nonzero_min=True)
        tuples.append(pair)
    reports = coh.check_coherent_I(fam, tuples, window, certify=True)
    assert all(r["pass"] for r in reports)


def test_slice_family_degree_two(sys_c, rng):
    fam = coh.SliceFamily(sys_c, 2)
    window = [Ordinal.from_int(i) for i in range(8)]
    tuples = []
    while len(tuples) < 4:
        trip = sample_increasing(rng, O("w^2"), 3, nonzero_min=True)
        tuples.append(trip)
    reports = coh.check_coherent_I(fam, tuples, window, certify=True)
    assert all(r["pass"] for r in reports)


def test_rho2_family_reported_not_certified(sys_c):
    fam = coh.Rho2Family(sys_c)
    window = [Ordinal.from_int(i) for i in range(12)]
    reports = coh.check_coherent_I(fam, [(O(4), O(9)), (OMEGA, O("w*2"))], window)
    assert all(r["pass"] is None for r in reports)
    with pytest.raises(coh.CertificationError):
        coh.check_coherent_I(fam, [(O(4), O(9))], window, certify=True)


def test_constant_zero_family(sys_c):
    fam = coh.ConstantZeroFamily(1)
    window = [O(i) for i in range(6)]
    reports = coh.check_coherent_I(fam, [(O(3), O(7))], window, certify=True)
    assert reports[0]["pass"] is True


def test_a1_round_trip(sys_c):
    fam = coh.SliceFamily(sys_c, 1)
    assert coh.reverse_a_1(coh.a_n_convert(fam, 1)) is fam


def test_conversion_preserves_pointwise_addition(sys_c):
    class SumFamily:
        def __init__(self, a, b):
            self.a, self.b, self.n = a, b, a.n

        def value(self, index, alpha):
            va, vb = self.a.value(index, alpha), self.b.value(index, alpha)
            if isinstance(va, int) and isinstance(vb, int):
                return va + vb
            acc = dict(va) if va != 0 else {}
            for t, z in (vb if vb != 0 else frozenset()):
                acc[t] = acc.get(t, 0) + z
                if not acc[t]:
                    del acc[t]
            return frozenset(acc.items()) if acc else 0

        def defect_support(self, tup):
            return None

    fam = coh.SliceFamily(sys_c, 1)
    zero = coh.ConstantZeroFamily(1)
    summed = SumFamily(fam, zero)
    fam_II = coh.a_n_convert(fam, 1)
    sum_II = coh.a_n_convert(summed, 1)
    for beta in (O(5), O("w+2")):
        for alpha in (O(1), O(3)):
            assert fam_II.value(beta, alpha) == sum_II.value(beta, alpha)


def test_check_II_follows_check_I(sys_c, rng):
    fam = coh.SliceFamily(sys_c, 2)
    window = [Ordinal.from_int(i) for i in range(8)]
    fam_II = coh.a_n_convert(fam, 2)
    pairs = []
    while len(pairs) < 3:
        pairs.append(sample_increasing(rng, O("w^2"), 2, nonzero_min=True))
    betas = [O(2), O(4)]
    reports = coh.check_coherent_II(fam_II, pairs, window, betas=betas, certify=True)
    assert all(r["pass"] for r in reports)


def test_check_II_rejects_perturbed_witness(sys_c):
    fam = coh.SliceFamily(sys_c, 2)
    fam_II = coh.a_n_convert(fam, 2)
    window = [Ordinal.from_int(i) for i in range(8)]
    pair = (O("w+5"), O("w*2"))

    def bad_witness(pr):
        natural = fam_II.natural_witness(pr)

        def witness(alpha):
            val = natural(alpha)
            acc = dict(val) if val != 0 else {}
            key = (alpha, alpha + 1, alpha + 2, alpha + 3)
            acc[key] = acc.get(key, 0) + 1
            return frozenset(acc.items())

        return witness

    reports = coh.check_coherent_II(
        fam_II, [pair], window, witnesses=bad_witness, betas=[O(4)], certify=False
    )
    assert reports[0]["slices"][0]["pass"] is None  # no certificate for a foreign witness
    # with the club-tail perturbation declared infinite the verdict is failure
    verdict = coh.is_0_trivial(lambda a: 1, window, (coh.INFINITE,))
    assert verdict["pass"] is False


def test_s1_cases(sys_c):
    gamma = O("w*2")
    assert coh.s1(sys_c, gamma, O(3), O(4)) == 1
    assert coh.s1(sys_c, gamma, O(3), O(5)) == 0
    # m(w, w*2) = 0, so every ladder element of w at or above 0 scores 1
    assert coh.s1(sys_c, gamma, O(3), OMEGA) == 1
    assert coh.s1(sys_c, O("w^2"), O("w+1"), O("w*2")) in (0, 1)


def test_s2_matches_direct_filter(sys_c, rng):
    delta = O("w^2")
    for _ in range(10):
        gamma = random_below(delta, rng)
        if gamma.is_zero:
            continue
        beta = random_below(delta, rng)
        if beta.is_zero:
            continue
        sliced = coh.s2(sys_c, delta, beta, gamma)
        full = fsystem.full_support(sys_c, (ZERO, gamma, delta))
        cut = beta if beta < gamma else gamma
        want = {
            t: z
            for t, z in full.items()
            if t[-1] == beta and t[0] < cut and all(c < beta for c in t[1:-1])
        }
        assert sliced == want
