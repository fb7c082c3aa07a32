import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from focalqed.mirror1d import (gamma_1d, mode_intensity_1d,
                               phase_from_wavelengths, shift_1d)

phases = st.floats(0.0, 1e4)


def test_node_and_antinode():
    n = np.arange(0, 200)
    np.testing.assert_allclose(gamma_1d(n * math.pi), 0.0, atol=1e-12)
    assert gamma_1d(math.pi / 2) == 2.0
    np.testing.assert_allclose(shift_1d(n * math.pi / 2), 0.0, atol=1e-12)
    assert shift_1d(math.pi / 4) == pytest.approx(1.0)


def test_quarter_wave_mirror():
    # R = lambda / 4 puts the atom on an antinode
    assert gamma_1d(phase_from_wavelengths(0.25)) == pytest.approx(2.0)


def test_intensity_vanishes_on_mirror_and_averages_to_one():
    a = 7.3
    assert mode_intensity_1d(1.0, -a / (2 * math.pi), a) == pytest.approx(0.0, abs=1e-12)
    z = np.linspace(0, 50, 200001)
    assert np.mean(mode_intensity_1d(1.3, z, a)) == pytest.approx(1.0, abs=1e-4)


def test_rejects_points_behind_mirror():
    with pytest.raises(ValueError):
        mode_intensity_1d(1.0, -2.0, 2 * math.pi)
    with pytest.raises(ValueError):
        gamma_1d(-1.0)


@given(a=phases)
def test_gamma_is_intensity_at_focus(a):
    assert gamma_1d(a) == pytest.approx(mode_intensity_1d(1.0, 0.0, a), abs=1e-12)


@given(a=phases)
def test_bounds_and_period(a):
    g = gamma_1d(a)
    assert 0.0 <= g <= 2.0
    assert gamma_1d(a + math.pi) == pytest.approx(g, abs=1e-9)


@given(a=st.floats(0.0, 100.0))
def test_shift_is_half_the_slope(a):
    h = 1e-6
    slope = (gamma_1d(a + h) - gamma_1d(max(a - h, 0.0))) / (a + h - max(a - h, 0.0))
    assert shift_1d(a) == pytest.approx(slope / 2, abs=1e-6)
