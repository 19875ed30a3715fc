from __future__ import annotations

import random

import pytest

from higherwalks.chains import Chain
from higherwalks.ordinals import OMEGA, random_below
from tests.conftest import O, sample_increasing


def test_boundary_examples():
    assert str(Chain.generator((O(0), O(1))).boundary()) == "-<0>+<1>"
    b = Chain.generator((O(1), O(2), O(5))).boundary()
    assert b == Chain(1, {(O(2), O(5)): 1, (O(1), O(5)): -1, (O(1), O(2)): 1})


def test_boundary_squared_vanishes(rng):
    for _ in range(10_000):
        degree = rng.randrange(1, 5)
        chain = Chain(degree)
        for _ in range(rng.randrange(1, 4)):
            tup = sample_increasing(rng, O("w^3"), degree + 1)
            chain = chain.combine(rng.choice([-2, -1, 1, 3]), Chain.generator(tup))
        if degree >= 2:
            assert chain.boundary().boundary().is_zero()
        else:
            assert chain.boundary().augment() == 0


def test_augment_examples():
    assert Chain(0, {(O(5),): 1, (O(3),): -1}).augment() == 0
    assert Chain.generator((O("w+1"),)).augment() == 1
    assert Chain(0, {(O(1),): 3, (OMEGA,): 2}).augment() == 5


def test_combine_examples():
    e = Chain.generator((O(0), O(1)))
    assert e.combine(-1, e).is_zero()
    assert Chain.zero(1).combine(3, Chain.generator((O(2), O(4)))) == Chain(1, {(O(2), O(4)): 3})
    a = Chain(1, {(O(1), O(2)): 1, (O(0), O(2)): -1})
    b = Chain(1, {(O(0), O(2)): 1, (O(0), O(1)): -1})
    assert a.combine(1, b) == Chain(1, {(O(1), O(2)): 1, (O(0), O(1)): -1})


def test_combine_support_containment(rng):
    for _ in range(200):
        a = Chain(1, {sample_increasing(rng, O("w^2"), 2): rng.choice([-1, 1, 2])})
        b = Chain(1, {sample_increasing(rng, O("w^2"), 2): rng.choice([-1, 1, 2])})
        c = a.combine(rng.choice([-3, 2]), b)
        assert set(c.support()) <= set(a.support()) | set(b.support())


def test_degree_mismatch_and_bad_generators():
    with pytest.raises(ValueError):
        Chain.generator((O(2), O(2)))
    with pytest.raises(ValueError):
        Chain.generator((O(5), O(3)))
    with pytest.raises(ValueError):
        Chain.generator((O(1), O(2))).combine(1, Chain.generator((O(1), O(2), O(3))))
    with pytest.raises(ValueError):
        Chain.generator((O(1),)).boundary()


def test_json_roundtrip():
    chain = Chain(1, {(O("w+1"), O("w*2")): -2, (O(0), O(3)): 1})
    data = chain.to_json()
    assert Chain.from_json(data) == chain
    assert data == sorted(data, key=lambda item: item["gen"])
