import random

import pytest

from convspec import ConvolutionSpec, HadamardTriple, SelectionWord

JP_TRIPLE = HadamardTriple(4, (0, 2), (0, 1))
E14_TRIPLES = (HadamardTriple(2, (0, 1), (0, 1)), HadamardTriple(2, (0, 3), (0, 1)))
MIXED_TRIPLES = (HadamardTriple(2, (0, 1), (0, 1)), HadamardTriple(3, (0, 1, 2), (0, 1, 2)))


@pytest.fixture
def jp_spec():
    """Single triple (4,{0,2},{0,1}), constant word, unit exponents."""
    return ConvolutionSpec((JP_TRIPLE,), SelectionWord())


@pytest.fixture
def e14_spec():
    """Two dyadic triples, word 1 then 2 forever."""
    return ConvolutionSpec(E14_TRIPLES, SelectionWord(prefix=(1,), period=(2,)))


@pytest.fixture
def e14_tail_spec():
    """Same family, purely periodic word 2: the limit is uniform on [0,3]."""
    return ConvolutionSpec(E14_TRIPLES, SelectionWord(period=(2,)))


@pytest.fixture
def mixed_spec():
    """gcd-1 family {(2,{0,1}),(3,{0,1,2})} with alternating word 1212..."""
    return ConvolutionSpec(MIXED_TRIPLES, SelectionWord(period=(1, 2)))


def random_triple(rng: random.Random, max_abs_scale: int = 8) -> HadamardTriple:
    """Random valid Hadamard triple built from base-N residue ladders.

    With N = sign*p*q, digits q*(permutation of 0..p-1) perturbed by
    multiples of N and a global translate stay a Hadamard system whenever
    the frequencies are a permutation of 0..p-1 perturbed by multiples of p
    plus a translate: the exponential matrix only sees b*l mod p.
    """
    p = rng.choice([2, 2, 2, 3, 3, 4])
    qmax = max_abs_scale // p
    q = rng.randint(1, qmax)
    n = p * q * rng.choice([1, -1])
    digits = [q * j + n * rng.randint(-2, 2) for j in rng.sample(range(p), p)]
    freqs = [j + p * rng.randint(-2, 2) for j in rng.sample(range(p), p)]
    b0 = rng.randint(-5, 5)
    l0 = rng.randint(-5, 5)
    return HadamardTriple(n, tuple(b + b0 for b in digits), tuple(l + l0 for l in freqs))


def random_spec(rng: random.Random, max_family: int = 3) -> ConvolutionSpec:
    """Random family + eventually periodic word/exponents (small sizes)."""
    m = rng.randint(1, max_family)
    family = tuple(random_triple(rng, max_abs_scale=6) for _ in range(m))
    prefix = tuple(rng.randint(1, m) for _ in range(rng.randint(0, 2)))
    period = tuple(rng.randint(1, m) for _ in range(rng.randint(1, 3)))
    exp_prefix = tuple(rng.randint(1, 2) for _ in range(rng.randint(0, 2)))
    exp_period = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 2)))
    word = SelectionWord(prefix, period, exp_prefix, exp_period)
    return ConvolutionSpec(family, word)
