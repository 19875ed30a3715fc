from __future__ import annotations

import random

import pytest

from higherwalks.ordinals import (
    CofRank,
    Ordinal,
    OrdinalSyntaxError,
    OMEGA,
    ZERO,
    parse,
    random_below,
)
from tests.conftest import O


def test_parse_examples():
    assert parse("0") == ZERO
    assert str(parse("w^2*3+w+5")) == "w^2*3+w+5"
    assert str(parse("w^(w)*2+w^3+4")) == "w^(w)*2+w^3+4"


@pytest.mark.parametrize(
    "bad",
    ["w+w", "w*0", "w^1", "w^0", "w^(3)", "w*1", "1+w", "w+0", "", "07", "w^", "w^2+w^2"],
)
def test_parse_rejects_noncanonical(bad):
    with pytest.raises(OrdinalSyntaxError) as err:
        parse(bad)
    assert err.value.position >= 0


def test_roundtrip_random():
    rng = random.Random(99)
    for _ in range(10_000):
        x = random_below(O("w^4"), rng)
        assert parse(str(x)) == x


def test_compare_examples():
    assert O(5) < OMEGA
    assert O("w*2") > O("w+7")
    x = O("w^2+3")
    assert not x < x and not x > x


def test_total_order_sampled():
    rng = random.Random(5)
    xs = [random_below(O("w^4"), rng) for _ in range(120)]
    for a in xs[:40]:
        for b in xs[:40]:
            assert (a < b) + (a == b) + (b < a) == 1
    xs.sort()
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        assert a <= b <= c and a <= c


def test_add_examples():
    assert O(1) + OMEGA == OMEGA
    assert str(OMEGA + 1) == "w+1"
    assert O("w^2+w") + O("w*3") == O("w^2+w*4")


def test_add_associative_and_identities():
    rng = random.Random(6)
    xs = [random_below(O("w^4"), rng) for _ in range(60)]
    for a, b, c in zip(xs, xs[20:], xs[40:]):
        assert (a + b) + c == a + (b + c)
    for a in xs:
        assert a + ZERO == a and ZERO + a == a


def test_classify():
    assert ZERO.classify() == "zero"
    x = O("w+3")
    assert x.classify() == "successor" and x.predecessor == O("w+2")
    assert O("w^2").classify() == "limit"
    assert (O("w+2").predecessor + 1) == O("w+2")


def test_cof_rank():
    assert ZERO.cof_rank == CofRank.ZERO
    assert O("w*5+1").cof_rank == CofRank.SUCC
    assert O("w^(w)").cof_rank == CofRank.OMEGA
    assert CofRank.ZERO < CofRank.SUCC < CofRank.OMEGA


def test_classify_cof_rank_consistent():
    rng = random.Random(7)
    for _ in range(300):
        x = random_below(O("w^4"), rng)
        assert x.is_limit == (x.cof_rank == CofRank.OMEGA)
        if x.is_successor:
            assert x.predecessor + 1 == x


def test_fundamental_sequences():
    w2 = O("w*2")
    assert [str(w2.fundamental(k)) for k in range(4)] == ["w", "w+1", "w+2", "w+3"]
    assert [str(O("w^2").fundamental(k)) for k in range(4)] == ["0", "w", "w*2", "w*3"]
    assert str(O("w^(w)").fundamental(2)) == "w^2"
    rng = random.Random(8)
    for _ in range(100):
        lam = random_below(O("w^4"), rng)
        if not lam.is_limit:
            continue
        vals = [lam.fundamental(k) for k in range(6)]
        for a, b in zip(vals, vals[1:]):
            assert a < b < lam


def test_to_int_and_naturals():
    assert O(17).to_int() == 17
    assert O(17).is_natural and not OMEGA.is_natural
    with pytest.raises(ValueError):
        OMEGA.to_int()
