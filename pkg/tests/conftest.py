from __future__ import annotations

import random

import pytest

from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, parse

BOUND = parse("w^4")


def O(text) -> Ordinal:
    if isinstance(text, int):
        return Ordinal.from_int(text)
    return parse(text)


@pytest.fixture(scope="session")
def sys_c() -> LadderSystem:
    return LadderSystem(BOUND, "canonical")


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(20260811)


def sample_increasing(rng, bound, k, nonzero_min=False):
    from higherwalks.ordinals import random_below

    coords = set()
    while len(coords) < k:
        x = random_below(bound, rng)
        if nonzero_min and x.is_zero:
            continue
        coords.add(x)
    return tuple(sorted(coords))
