"""Inductive spectrum construction: blocks, levels, shifts, gcd certificate."""

import math
import warnings
from itertools import product

import pytest

from convspec import (
    BuildParams,
    ConvolutionSpec,
    EquiPositivityViolation,
    GcdNotCertifiedWarning,
    HadamardTriple,
    HorizonExhaustedError,
    SelectionWord,
    SpectrumLevels,
    block_frequencies,
    build_spectrum,
    certify_gcd_condition,
    finite_level,
    next_level,
    orthonormality_gram,
    verify_triple,
)


def eq11_truncation(n):
    """Canonical spectrum of the quarter-scale measure, truncated at n digits."""
    return sorted(
        sum(l * 4**j for j, l in enumerate(combo))
        for combo in product((0, 1), repeat=n)
    )


def build_quiet(spec, depth_i, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GcdNotCertifiedWarning)
        return build_spectrum(spec, depth_i, **kw)


def test_block_frequencies_jp(jp_spec):
    b = block_frequencies(jp_spec, 0, 2)
    assert b.bigN == 16
    assert sorted(b.bigL) == [0, 1, 4, 5]
    assert sorted(b.bigB) == [0, 2, 8, 10]
    assert verify_triple(b.bigN, b.bigB, b.bigL).ok
    single = block_frequencies(jp_spec, 0, 1)
    assert single.bigN == 4 and sorted(single.bigL) == [0, 1]


def test_block_frequencies_mixed_word():
    spec = ConvolutionSpec(
        (HadamardTriple(2, (0, 1), (0, 1)), HadamardTriple(3, (0, 1, 2), (0, 1, 2))),
        SelectionWord(period=(1, 2)),
    )
    b = block_frequencies(spec, 0, 2)
    assert b.bigN == 6
    assert sorted(b.bigL) == [0, 1, 2, 3, 4, 5]
    assert verify_triple(b.bigN, b.bigB, b.bigL).ok


def test_block_frequencies_with_exponents(jp_spec):
    spec = ConvolutionSpec(jp_spec.family, SelectionWord(period=(1,), exp_period=(2,)))
    b = block_frequencies(spec, 0, 1)
    # effective triple (16, {0,2}, 4*{0,1})
    assert b.bigN == 16
    assert sorted(b.bigL) == [0, 4]
    assert verify_triple(b.bigN, b.bigB, b.bigL).ok


def test_block_frequencies_invalid_range(jp_spec):
    with pytest.raises(ValueError, match="invalid range"):
        block_frequencies(jp_spec, 2, 2)
    with pytest.raises(ValueError, match="invalid range"):
        block_frequencies(jp_spec, -1, 1)


def test_jp_levels_match_canonical_truncations(jp_spec):
    levels = build_quiet(jp_spec, 3, params=BuildParams(delta=0.2))
    assert levels.indices == (1, 2, 3)
    assert list(levels.level(1)) == eq11_truncation(1)
    assert list(levels.level(2)) == eq11_truncation(2)
    assert list(levels.level(3)) == eq11_truncation(3)
    assert all(k == 0 for sh in levels.shifts for _, k in sh)


def test_first_level_is_block_frequencies(mixed_spec):
    levels = build_quiet(mixed_spec, 1)
    m1 = levels.indices[0]
    b = block_frequencies(mixed_spec, 0, m1)
    assert sorted(levels.level(1)) == sorted(b.bigL)  # all shifts zero or folded in


def test_nesting_membership_cardinality(mixed_spec, jp_spec):
    for spec, depth in ((mixed_spec, 4), (jp_spec, 4)):
        levels = build_quiet(spec, depth)
        for i in range(1, depth + 1):
            cur = set(levels.level(i))
            assert 0 in cur
            assert set(levels.level(i - 1)) <= cur
            m_i = levels.m(i)
            want = math.prod(len(spec.triple_at(k).L) for k in range(1, m_i + 1))
            assert len(cur) == want


def test_levels_are_exact_spectra_of_finite_levels(mixed_spec, jp_spec):
    for spec, depth in ((mixed_spec, 3), (jp_spec, 3)):
        levels = build_quiet(spec, depth)
        for i in range(1, depth + 1):
            mu = finite_level(spec, levels.m(i))
            assert orthonormality_gram(mu, levels.level(i)) <= 1e-10


def test_delta_guard_holds_post_hoc(mixed_spec):
    params = BuildParams(delta=0.2)
    levels = build_quiet(mixed_spec, 4, params=params)
    for i in range(2, levels.level_count + 1):
        prev = levels.level(i - 1)
        scale = abs(mixed_spec.scale_product(levels.m(i)))
        assert max(abs(l) for l in prev) / scale < params.delta / 2


def test_smaller_delta_pushes_indices_up(jp_spec):
    wide = build_quiet(jp_spec, 2, params=BuildParams(delta=0.2))
    tight = build_quiet(jp_spec, 2, params=BuildParams(delta=0.002))
    assert tight.indices[1] > wide.indices[1]
    # still an exact spectrum of its finite level
    mu = finite_level(jp_spec, tight.m(2))
    assert orthonormality_gram(mu, tight.level(2)) <= 1e-10


def test_custom_subsequence_and_horizon(jp_spec):
    levels = build_quiet(jp_spec, 2, subsequence=[2, 4])
    assert levels.indices == (2, 4)
    with pytest.raises(HorizonExhaustedError):
        build_quiet(jp_spec, 3, subsequence=[2, 4])


def test_gcd_certificates():
    ok = certify_gcd_condition(
        (HadamardTriple(2, (0, 1), (0, 1)), HadamardTriple(3, (0, 1, 2), (0, 1, 2)))
    )
    assert ok.certified and ok.offending == ()
    bad = certify_gcd_condition(
        (HadamardTriple(2, (0, 1), (0, 1)), HadamardTriple(2, (0, 3), (0, 1)))
    )
    assert not bad.certified
    assert bad.offending == (2,)
    assert bad.gcds == (1, 3)
    single = certify_gcd_condition((HadamardTriple(4, (0, 2), (0, 1)),))
    assert not single.certified
    assert single.offending == (1,)
    assert single.gcds == (2,)
    assert single.note is not None and "single-triple" in single.note


def test_gcd_warning_emitted_and_construction_proceeds(jp_spec):
    with pytest.warns(GcdNotCertifiedWarning):
        levels = build_spectrum(jp_spec, 2)
    assert levels.level_count == 2


def test_mixed_family_no_warning(mixed_spec):
    with warnings.catch_warnings():
        warnings.simplefilter("error", GcdNotCertifiedWarning)
        build_spectrum(mixed_spec, 2)


def test_e14_uniform_word_violates_equipositivity(e14_tail_spec):
    with pytest.raises(EquiPositivityViolation) as err:
        build_quiet(e14_tail_spec, 3)
    exc = err.value
    assert exc.achieved < BuildParams().epsilon
    assert exc.m >= 2
    assert exc.lam != 0


def test_next_level_from_initial_state(jp_spec):
    state = SpectrumLevels.initial(BuildParams())
    state = next_level(jp_spec, state)
    assert state.levels == ((0,), (0, 1))
    assert state.indices == (1,)


def test_levels_json_round_trip(mixed_spec):
    levels = build_quiet(mixed_spec, 3)
    again = SpectrumLevels.from_json(levels.to_json())
    assert again == levels


def test_build_rejects_zero_depth(jp_spec):
    with pytest.raises(ValueError):
        build_quiet(jp_spec, 0)
