"""Scales, cross-scale mapping, the Monte-Carlo harness, and the
counterexample search."""

import numpy as np
import pytest

import pcx
from pcx.oracle import grid_local_minima
from pcx.scales import (
    MonteCarloConfig,
    Scale,
    builtin_scales,
    map_scale,
    run_monte_carlo,
    scale_by_name,
    search_counterexample,
    snap_matrix,
    snap_to_scale,
)
from pcx.solvers import SolveOptions, census_local_minima


class TestBuiltinScales:
    def test_names_and_tops(self):
        scales = {s.name: s for s in builtin_scales()}
        assert scales["1-3"].top == 3.0
        assert scales["1-9"].top == 9.0
        assert scales["1-5"].values == (1.0, 2.0, 3.0, 4.0, 5.0)
        assert scales["1-3-half"].values == (1.0, 1.5, 2.0, 2.5, 3.0)

    def test_admissible_values_include_reciprocals(self):
        s = scale_by_name("1-3")
        assert s.admissible_values() == (1 / 3, 1 / 2, 1.0, 2.0, 3.0)

    def test_unknown_scale_lists_valid_names(self):
        with pytest.raises(pcx.ConfigError, match="1-3.*1-3-half.*1-5.*1-9"):
            scale_by_name("1-7")

    def test_scale_validation(self):
        with pytest.raises(pcx.ConfigError):
            Scale("bad", (2.0, 3.0))  # must start at 1
        with pytest.raises(pcx.ConfigError):
            Scale("bad", (1.0, 3.0, 2.0))  # must ascend


class TestMapScale:
    def test_reference_table(self):
        frm, to = scale_by_name("1-5"), scale_by_name("1-3")
        assert [map_scale(v, frm, to) for v in (1, 2, 3, 4, 5)] == [1.0, 1.5, 2.0, 2.5, 3.0]

    def test_fixed_point_one(self):
        for frm in builtin_scales():
            for to in builtin_scales():
                assert map_scale(1.0, frm, to) == 1.0

    def test_reciprocals_map_to_reciprocals(self):
        frm, to = scale_by_name("1-5"), scale_by_name("1-3")
        for v in (2.0, 3.0, 4.5):
            assert map_scale(1 / v, frm, to) == 1 / map_scale(v, frm, to)

    def test_monotone_and_endpoint_preserving(self):
        frm, to = scale_by_name("1-9"), scale_by_name("1-3")
        grid = np.linspace(1.0, 9.0, 200)
        mapped = [map_scale(v, frm, to) for v in grid]
        assert all(b > a for a, b in zip(mapped, mapped[1:]))
        assert mapped[0] == 1.0
        assert mapped[-1] == 3.0

    def test_round_trip(self):
        frm, to = scale_by_name("1-5"), scale_by_name("1-3")
        for v in np.linspace(1.0, 5.0, 50):
            back = map_scale(map_scale(v, frm, to), to, frm)
            assert abs(back - v) <= 1e-12

    def test_out_of_scale(self):
        frm, to = scale_by_name("1-3"), scale_by_name("1-5")
        with pytest.raises(pcx.OutOfScale):
            map_scale(4.0, frm, to)
        with pytest.raises(pcx.NonPositiveEntry):
            map_scale(-2.0, frm, to)


class TestSnapping:
    def test_nearest_value(self):
        s = scale_by_name("1-3")
        assert snap_to_scale(2.4, s) == 2.0
        assert snap_to_scale(2.6, s) == 3.0

    def test_ties_resolve_to_smaller(self):
        s = scale_by_name("1-3")
        assert snap_to_scale(1.5, s) == 1.0
        assert snap_to_scale(2.5, s) == 2.0

    def test_reciprocal_domain(self):
        s = scale_by_name("1-3")
        assert snap_to_scale(1 / 2.6, s) == 1 / 3
        assert snap_to_scale(0.9, s) == 1.0

    def test_snapped_matrix_on_scale_only(self, rng):
        s = scale_by_name("1-3-half")
        admissible = set(s.admissible_values())
        for _ in range(10):
            upper = np.exp(rng.uniform(-1.5, 1.5, size=6))
            snapped = snap_matrix(pcx.build_matrix(4, upper), s)
            assert set(snapped.upper) <= admissible


class TestMonteCarlo:
    def test_config_validation(self):
        s = scale_by_name("1-3")
        with pytest.raises(pcx.ConfigError):
            MonteCarloConfig(scale=s, trials=0)
        with pytest.raises(pcx.ConfigError):
            MonteCarloConfig(scale=s, n=9)
        with pytest.raises(pcx.ConfigError):
            MonteCarloConfig(scale=s, perturb_delta=-0.1)

    def test_zero_perturbation_keeps_consistency(self):
        cfg = MonteCarloConfig(scale=scale_by_name("1-3"), n=4, trials=20, perturb_delta=0.0, snap=False, seed=3)
        report = run_monte_carlo(cfg)
        assert all(r.inconsistency <= 1e-12 for r in report.records)
        assert all(r.lsm_objective <= 1e-16 for r in report.records)
        assert report.fraction_acceptable == 1.0

    def test_scale_1_3_always_certified_unique(self):
        cfg = MonteCarloConfig(scale=scale_by_name("1-3"), n=4, trials=50, snap=True, seed=11)
        report = run_monte_carlo(cfg)
        assert all(r.certified_unique for r in report.records)
        assert report.fraction_unique == 1.0
        assert all(r.max_entry <= 3.0 for r in report.records)

    def test_bit_reproducible(self):
        cfg = MonteCarloConfig(scale=scale_by_name("1-5"), n=4, trials=15, seed=42)
        a, b = run_monte_carlo(cfg), run_monte_carlo(cfg)
        assert a.csv_lines() == b.csv_lines()
        assert a.aggregate_dict() == b.aggregate_dict()

    def test_aggregates_recomputable_from_records(self):
        cfg = MonteCarloConfig(scale=scale_by_name("1-5"), n=3, trials=30, seed=5)
        rep = run_monte_carlo(cfg)
        vals = [r.inconsistency for r in rep.records]
        assert rep.mean_inconsistency == pytest.approx(sum(vals) / len(vals), abs=0)
        assert rep.max_inconsistency == max(vals)
        assert 0.0 <= rep.fraction_acceptable <= 1.0
        assert 0.0 <= rep.fraction_unique <= 1.0

    def test_larger_scale_is_more_inconsistent_under_paired_seeds(self):
        # same seeds, same delta, same n; only the scale changes
        common = dict(n=4, trials=1000, perturb_delta=0.5, snap=True, seed=7)
        small = run_monte_carlo(MonteCarloConfig(scale=scale_by_name("1-3"), **common))
        large = run_monte_carlo(MonteCarloConfig(scale=scale_by_name("1-9"), **common))
        assert large.mean_inconsistency > small.mean_inconsistency


class TestSearchCounterexample:
    def test_finds_matrix_with_multiple_minima(self):
        A = search_counterexample(4.0, budget=500, seed=0)
        assert A is not None
        assert 4.0 <= A.max_entry() <= 8.0
        assert len(grid_local_minima(A)) >= 2
        census = census_local_minima(A, SolveOptions(starts=24, start_seed=99))
        assert len(census) >= 2
        assert pcx.certify(A).verdict is pcx.Verdict.UNKNOWN

    def test_absent_inside_certified_band(self):
        # max element window [1.2, 2.4] keeps every entry within [1/3, 3]
        assert search_counterexample(1.2, budget=40, seed=1) is None

    def test_budget_validation(self):
        with pytest.raises(pcx.ConfigError):
            search_counterexample(4.0, budget=0)

    def test_impossible_window(self):
        assert search_counterexample(0.2, budget=10) is None
