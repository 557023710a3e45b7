"""
Unit tests for the Ermakov scale functions.
Tests the closed form, its hyperbolic continuation and the RK4 integrator.
"""

import math
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ermakov import (
    ErmakovState,
    central_second_difference,
    ermakov_residual,
    integrate_ermakov,
    mode_scale,
    oscillation_floor,
    quench_h,
    quench_profile
)
from exceptions import (
    DegenerateContinuationError,
    ErmakovSingularityError,
    InvalidArgumentError,
    InvalidQuenchError
)


class TestClosedForm:
    """Tests for the sudden-quench closed form."""

    def test_initial_conditions(self):
        state = quench_h(0.36, 1.2, 0.3, 0.0)
        assert state.h == 1.0
        assert state.hdot == 0.0
        assert state.sigma0_sq == pytest.approx(0.45)

    def test_no_quench_is_static(self):
        for t in (0.5, 3.0, 17.0):
            state = quench_h(1.2, 1.2, 0.4, t)
            assert state.h == pytest.approx(1.0, abs=1e-14)
            assert state.hdot == pytest.approx(0.0, abs=1e-14)

    def test_matches_rk4_oscillatory(self):
        grid = np.linspace(0.0, 5.0, 51)
        si, sf, wc = 1.0, 2.0, 0.3
        numeric = integrate_ermakov(quench_profile(si, sf, wc), si + wc * wc, grid, max_step=1e-3)
        for t, state in zip(grid, numeric):
            closed = quench_h(si, sf, wc, float(t))
            assert state.h == pytest.approx(closed.h, abs=1e-8)
            assert state.hdot == pytest.approx(closed.hdot, abs=1e-7)

    def test_matches_rk4_hyperbolic(self):
        grid = np.linspace(0.0, 3.0, 31)
        si, sf, wc = 0.36, -0.5, 0.2
        numeric = integrate_ermakov(quench_profile(si, sf, wc), si + wc * wc, grid, max_step=1e-3)
        for t, state in zip(grid, numeric):
            closed = quench_h(si, sf, wc, float(t))
            assert state.h == pytest.approx(closed.h, rel=1e-8)

    def test_hyperbolic_grows(self):
        early = quench_h(0.36, -0.5, 0.2, 1.0).h
        late = quench_h(0.36, -0.5, 0.2, 10.0).h
        assert late > early > 1.0

    @given(
        st.floats(min_value=0.05, max_value=4.0),
        st.floats(min_value=0.05, max_value=4.0),
        st.floats(min_value=0.0, max_value=2.0),
        st.floats(min_value=0.0, max_value=30.0),
    )
    @hyp_settings(max_examples=200)
    def test_oscillation_stays_in_band(self, si, sf, wc, t):
        h_sq = quench_h(si, sf, wc, t).h ** 2
        floor = oscillation_floor(si, sf, wc)
        ceiling = (max(si, sf) + wc * wc) / (sf + wc * wc)
        assert floor - 1e-12 <= h_sq <= ceiling + 1e-12

    def test_invalid_initial_mode(self):
        with pytest.raises(InvalidQuenchError):
            quench_h(-1.0, 1.0, 0.5, 1.0)

    def test_hyperbolic_past_cosh_overflow(self):
        s = math.sqrt(0.02)
        below = quench_h(0.36, -0.06, 0.2, 700.0 / (2.0 * s))
        above = quench_h(0.36, -0.06, 0.2, 710.0 / (2.0 * s))
        assert math.isfinite(above.h)
        assert above.h / below.h == pytest.approx(math.exp(5.0), rel=1e-9)
        assert above.hdot / above.h == pytest.approx(s, rel=1e-9)
        assert below.hdot / below.h == pytest.approx(s, rel=1e-9)

    def test_hyperbolic_beyond_float_range(self):
        state = quench_h(0.36, -0.06, 0.2, 1e6)
        assert state.h == math.inf

    def test_degenerate_continuation(self):
        with pytest.raises(DegenerateContinuationError):
            quench_h(0.5, -0.04, 0.2, 1.0)

    def test_residual_small(self):
        step = 2.5e-4
        grid = np.arange(0.0, 2.0 + step / 2, step)
        si, sf, wc = 0.36, 1.5, 0.3
        states = [quench_h(si, sf, wc, float(t)) for t in grid]
        hddot = central_second_difference([s.h for s in states], step)
        worst = max(
            ermakov_residual(s, float(a), sf + wc * wc) for s, a in zip(states[1:-1], hddot)
        )
        assert worst < 1e-6


class TestModeScale:
    """Tests for widths and chirps."""

    def test_static_scale(self):
        scale = mode_scale(ErmakovState(h=1.0, hdot=0.0, sigma0_sq=2.25))
        assert scale.sigma_tilde == pytest.approx(1.5)
        assert scale.hdot_over_h == 0.0
        assert scale.rho == complex(1.5, 0.0)

    def test_chirp_sign(self):
        scale = mode_scale(ErmakovState(h=2.0, hdot=1.0, sigma0_sq=1.0))
        assert scale.sigma_tilde == pytest.approx(0.25)
        assert scale.rho == complex(0.25, -0.5)


class TestIntegrator:
    """Tests for the RK4 integrator."""

    def test_grid_must_start_at_zero(self):
        with pytest.raises(InvalidArgumentError):
            integrate_ermakov(lambda t: 1.0, 1.0, [0.5, 1.0])

    def test_grid_must_increase(self):
        with pytest.raises(InvalidArgumentError):
            integrate_ermakov(lambda t: 1.0, 1.0, [0.0, 1.0, 1.0])

    def test_nonpositive_initial_frequency(self):
        with pytest.raises(InvalidQuenchError):
            integrate_ermakov(lambda t: 1.0, 0.0, [0.0, 1.0])

    def test_singularity_detected(self):
        with pytest.raises(ErmakovSingularityError):
            integrate_ermakov(lambda t: 1.0, 1.0, [0.0, 0.1], h_floor=2.0)

    def test_one_state_per_sample(self):
        grid = np.linspace(0.0, 1.0, 7)
        states = integrate_ermakov(lambda t: 2.0, 1.0, grid)
        assert len(states) == 7
        assert states[0].h == 1.0 and states[0].hdot == 0.0

    def test_time_dependent_profile(self):
        """A smooth ramp keeps h positive and finite."""
        grid = np.linspace(0.0, 10.0, 101)
        states = integrate_ermakov(lambda t: 1.0 + 0.5 * math.tanh(t - 3.0), 1.0, grid)
        assert all(s.h > 0.0 and math.isfinite(s.h) for s in states)


class TestSecondDifference:
    """Tests for the finite-difference helper."""

    def test_parabola(self):
        step = 0.01
        t = np.arange(0.0, 1.0, step)
        np.testing.assert_allclose(central_second_difference(t * t, step), 2.0, atol=1e-8)
