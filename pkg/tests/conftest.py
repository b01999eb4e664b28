import random
from fractions import Fraction

import pytest

from sdet.transforms import ScalarSeq


def rand_fraction(rng: random.Random, span: int = 6) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def random_even_seq(rng: random.Random, support: int = 6) -> ScalarSeq:
    entries = {n: rand_fraction(rng) for n in range(0, support + 1)}
    return ScalarSeq(entries, "even")


def random_odd_seq(rng: random.Random, support: int = 6) -> ScalarSeq:
    entries = {n: rand_fraction(rng) for n in range(1, support + 1)}
    return ScalarSeq(entries, "odd")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260818)
