"""
Unit tests for the figure presets.
"""

import dataclasses
import os
import sys
from unittest.mock import patch

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from evolver import QuenchEvolver
from exceptions import InvalidArgumentError
from figures import FIGURE_PRESETS, parse_which, run_figures
from models import SweepAxis
from param_model import critical_coupling


class TestPresets:
    """Tests for preset definitions."""

    def test_nine_figures(self):
        assert sorted(FIGURE_PRESETS) == list(range(1, 10))

    @pytest.mark.parametrize("number", range(1, 10))
    def test_config_valid(self, number):
        preset = FIGURE_PRESETS[number]
        config = preset.config()
        assert config.t_max == 30.0
        assert config.label == f"fig{number}"
        for value in preset.values:
            config.with_axis_value(preset.axis, value)

    def test_field_figures_share_base_quench(self):
        for number in (1, 4, 7):
            preset = FIGURE_PRESETS[number]
            assert preset.axis == SweepAxis.OMEGA_C
            assert preset.final == (1.3, 1.8, 0.9)

    def test_coupling_sweep_crosses_threshold(self):
        values = FIGURE_PRESETS[2].values
        assert max(values) > critical_coupling(1.3, 1.8) > min(values)


class TestParseWhich:
    """Tests for figure selection."""

    def test_all(self):
        assert parse_which("all") == list(range(1, 10))

    def test_list(self):
        assert parse_which("1,4,7") == [1, 4, 7]
        assert parse_which("3") == [3]

    @pytest.mark.parametrize("which", ["10", "0", "x", "", "1,,99"])
    def test_invalid(self, which):
        with pytest.raises(InvalidArgumentError):
            parse_which(which)


class TestRunFigures:
    """Tests for dataset generation."""

    def test_writes_one_csv_per_value(self, tmp_path):
        small = dataclasses.replace(FIGURE_PRESETS[1], n_samples=11)
        evolver = QuenchEvolver(max_workers=2)
        try:
            with patch.dict(FIGURE_PRESETS, {1: small}):
                paths = run_figures([1], tmp_path, plot=True, evolver=evolver)
        finally:
            evolver.close()
        names = sorted(p.name for p in paths)
        assert "fig1_omega_c_0.csv" in names
        assert "fig1_omega_c_1.5.csv" in names
        assert "fig1_S_L.svg" in names
        assert len([n for n in names if n.endswith(".csv")]) == 4
        lines = (tmp_path / "fig1_omega_c_0.3.csv").read_text().splitlines()
        assert len(lines) == 12

    def test_identical_files_for_any_worker_count(self, tmp_path):
        small = {n: dataclasses.replace(p, n_samples=41) for n, p in FIGURE_PRESETS.items()}
        outputs = {}
        for workers in (1, 4):
            evolver = QuenchEvolver(max_workers=workers)
            out_dir = tmp_path / f"workers{workers}"
            try:
                with patch.dict(FIGURE_PRESETS, small):
                    paths = run_figures(sorted(small), out_dir, evolver=evolver)
            finally:
                evolver.close()
            outputs[workers] = {p.name: p.read_bytes() for p in paths}
        assert outputs[1].keys() == outputs[4].keys()
        assert outputs[1] == outputs[4]


class TestFigureBehaviour:
    """Tests for the qualitative behaviour behind individual figures."""

    @pytest.fixture
    def evolver(self):
        ev = QuenchEvolver(max_workers=4)
        yield ev
        ev.close()

    def test_stiffer_quenched_frequency_mixes_less(self, evolver):
        preset = dataclasses.replace(FIGURE_PRESETS[3], n_samples=601)
        result = evolver.run_sweep(preset.config(), preset.axis, preset.values)
        by_value = {e.value: e for e in result.entries}
        assert all(e.ok for e in result.entries)
        # omega_f2 = 0.5 and 2.0 leave the soft mode hyperbolic at omega_c = 0.1
        assert by_value[0.5].hyperbolic == [True, False]
        assert by_value[2.0].hyperbolic == [True, False]
        late_max = {
            v: max(r.S_L for r in by_value[v].records if r.t >= 15.0)
            for v in (2.5, 3.0)
        }
        assert late_max[3.0] < late_max[2.5]

    def test_coupling_just_below_threshold_stays_bounded(self, evolver):
        preset = dataclasses.replace(FIGURE_PRESETS[5], n_samples=601)
        result = evolver.run_sweep(preset.config(), preset.axis, preset.values)
        entry = result.entries[preset.values.index(2.33)]
        assert entry.ok
        assert entry.hyperbolic == [False, False]
        assert not entry.diverged
        u1 = [r.U1 for r in entry.records]
        assert max(u1) > 3.0 * u1[0]
