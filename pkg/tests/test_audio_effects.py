import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from refocus.audio import AudioChunk, PerturbationPattern, apply_gain


def chunk(values):
    return AudioChunk(np.asarray(values, dtype=float))


def test_exactly_four_patterns_with_pinned_factors():
    assert len(PerturbationPattern) == 4
    assert PerturbationPattern.VOLUME_HALVE.gain_factor == 0.5
    assert PerturbationPattern.VOLUME_DOUBLE.gain_factor == 2.0
    assert PerturbationPattern.PITCH_DOWN.pitch_ratio == pytest.approx(2 ** (-2 / 12))
    assert PerturbationPattern.PITCH_UP.pitch_ratio == pytest.approx(2 ** (2 / 12))


def test_parse_accepts_hyphenated_names():
    assert PerturbationPattern.parse("volume-halve") is PerturbationPattern.VOLUME_HALVE
    assert PerturbationPattern.parse("PITCH_UP") is PerturbationPattern.PITCH_UP


def test_gain_doubles_waveform():
    out = apply_gain(chunk([0.1, -0.2]), 2.0)
    np.testing.assert_allclose(out.samples, [0.2, -0.4])


def test_gain_identity():
    values = np.linspace(-1, 1, 101)
    out = apply_gain(AudioChunk(values), 1.0)
    np.testing.assert_array_equal(out.samples, values)


def test_gain_clamps_at_full_scale():
    out = apply_gain(chunk([0.8]), 2.0)
    np.testing.assert_array_equal(out.samples, [1.0])


@pytest.mark.parametrize("factor", [0.0, -1.0, math.nan, math.inf])
def test_gain_rejects_bad_factors(factor):
    with pytest.raises(ValueError):
        apply_gain(chunk([0.0]), factor)


@given(
    st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=64),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_gain_linear_before_clamp_and_always_bounded(values, factor):
    out = apply_gain(chunk(values), factor)
    arr = np.asarray(values)
    exact = np.abs(arr * factor) <= 1.0
    np.testing.assert_allclose(out.samples[exact], (arr * factor)[exact], rtol=0, atol=0)
    assert np.all(out.samples <= 1.0) and np.all(out.samples >= -1.0)
    assert len(out) == len(values)
