import math

import numpy as np
import pytest

from nullprop import simlab
from nullprop.errors import ConfigurationError, DomainError, NullPropError
from nullprop.estimators import induced_null_proportion
from nullprop.kernels import FunctionalSpec
from nullprop.simlab import (
    AGG_HEADER,
    CSV_HEADER,
    DENSE,
    MODERATE,
    THETA_A,
    THETA_B,
    Aggregate,
    ExperimentResult,
    RepRow,
    ScenarioSpec,
    generate_scenario,
    read_results,
    result_filename,
    run_experiment,
    scenario_problem,
    write_results,
)

LNLN1000 = math.log(math.log(1000))


class TestSpec:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            ScenarioSpec("S9", 1000)
        with pytest.raises(ConfigurationError):
            ScenarioSpec("S1", 99)
        with pytest.raises(ConfigurationError):
            ScenarioSpec("S1", 1000, "sparse")
        with pytest.raises(ConfigurationError):
            ScenarioSpec("S1", 1000, reps=0)

    def test_defaults(self):
        s4 = ScenarioSpec("S4", 1000)
        assert (s4.resolved_sigma, s4.resolved_gamma, s4.with_baselines) == (4.0, 1.0, False)
        s2 = ScenarioSpec("S2", 1000)
        assert (s2.resolved_sigma, s2.resolved_gamma, s2.with_baselines) == (1.0, 0.495, True)
        assert result_filename(ScenarioSpec("S2", 1000, MODERATE, seed=7)) == "S2_1000_moderate_7.csv"


class TestGenerate:
    def test_scenario_one_counts(self):
        pv, truth = generate_scenario(ScenarioSpec("S1", 1000, DENSE, seed=1), 0)
        mu = pv.values
        u = 1 / LNLN1000
        m0 = np.count_nonzero((mu > -1 + u - 1e-12) & (mu < 2 - u + 1e-12))
        assert m0 == 800 and pv.m == 1000
        assert truth == 0.2
        m11 = np.count_nonzero(mu > 2)
        assert m11 == np.count_nonzero(mu < -1)
        boundary = np.count_nonzero((mu == -1) | (mu == 2))
        assert m0 + 2 * m11 + boundary == 1000
        # odd remainders put the extra one at a
        assert np.count_nonzero(mu == -1) - np.count_nonzero(mu == 2) in (0, 1)

    def test_scenario_two_moderate(self):
        pv, truth = generate_scenario(ScenarioSpec("S2", 1000, MODERATE, seed=2), 0)
        mu = pv.values
        m1 = round(1000 / LNLN1000)
        assert 1 / LNLN1000 == pytest.approx(0.51743, abs=1e-5)
        u = 1 / LNLN1000
        assert np.count_nonzero(mu > 0) == math.floor(0.9 * m1)
        assert np.all(mu[mu > 0] >= u) and np.all(mu <= 6)
        assert np.count_nonzero(mu == 0) == m1 - math.floor(0.9 * m1)
        assert truth == m1 / 1000

    def test_scenario_three_truth(self):
        spec = ScenarioSpec("S3", 1000, DENSE, seed=3)
        pv, truth = generate_scenario(spec, 4)
        total = 0.0
        for mu in pv.values:
            if -2 < mu < 2:
                total += mu * mu
            elif mu in (-2.0, 2.0):
                total += 0.5 * mu * mu
        assert truth == pytest.approx(total / pv.m, abs=1e-12)
        spec_phi = FunctionalSpec.truncated_square(2.0)
        assert truth == induced_null_proportion(pv.values, spec_phi, boundary_weight=0.5)

    def test_gamma_scenarios(self):
        pv, truth = generate_scenario(ScenarioSpec("S4", 1000, DENSE, seed=4), 0)
        th = pv.values
        assert np.all(th < 1) and truth == pytest.approx(np.mean((th <= THETA_A) | (th >= THETA_B)))
        pv, truth = generate_scenario(ScenarioSpec("S5", 1000, DENSE, seed=4), 0)
        assert truth == pytest.approx(np.mean(pv.values >= THETA_B))

    def test_reproducible_streams(self):
        spec = ScenarioSpec("S1", 500, seed=9)
        a, _ = generate_scenario(spec, 3)
        b, _ = generate_scenario(spec, 3)
        c, _ = generate_scenario(spec, 4)
        assert np.array_equal(a.values, b.values) and not np.array_equal(a.values, c.values)

    def test_negative_counts(self):
        with pytest.raises(DomainError, match="boundary"):
            simlab._check_counts(boundary=-1)

    def test_problem_nulls(self):
        fam, null, cfg = scenario_problem(ScenarioSpec("S4", 1000))
        assert (null.a, null.b) == (4.0, pytest.approx(4 / 0.65))
        assert cfg.omega.name == "uniform"
        _, null, _ = scenario_problem(ScenarioSpec("S3", 1000))
        assert (null.a, null.b) == (-2.0, 2.0)


class TestRun:
    def test_single_rep(self):
        res = run_experiment(ScenarioSpec("S1", 200, reps=1))
        agg = res.aggregate("proposed")
        assert agg.n == 1 and agg.sd_excess == 0.0 and agg.single_row

    def test_scenario_two_envelope(self):
        res = run_experiment(ScenarioSpec("S2", 1000, DENSE, seed=7, reps=50))
        assert len(res.rows) == 150
        agg = res.aggregate("proposed")
        assert math.isfinite(agg.mean_excess) and abs(agg.mean_excess) < 1
        ex = res.excesses("proposed")
        assert agg.mean_excess == pytest.approx(ex.mean()) and agg.sd_excess == pytest.approx(ex.std(ddof=1))

    def test_deterministic_with_workers(self):
        spec = ScenarioSpec("S5", 300, seed=5, reps=4)
        a = run_experiment(spec)
        b = run_experiment(spec, workers=2)
        assert a.rows == b.rows and a.aggregates == b.aggregates

    def test_rep_errors_recorded(self, monkeypatch):
        real = simlab.estimate_pi1
        calls = {"n": 0}

        def flaky(*args, **kw):
            calls["n"] += 1
            if calls["n"] == 1:
                raise DomainError("injected")
            return real(*args, **kw)

        monkeypatch.setattr(simlab, "estimate_pi1", flaky)
        res = run_experiment(ScenarioSpec("S1", 200, reps=3))
        errs = [r for r in res.rows if r.error]
        assert len(errs) == 1 and "injected" in errs[0].error
        assert res.aggregate("proposed").n == 2

    def test_all_reps_failing(self, monkeypatch):
        def broken(*args, **kw):
            raise DomainError("always")

        monkeypatch.setattr(simlab, "estimate_pi1", broken)
        with pytest.raises(NullPropError):
            run_experiment(ScenarioSpec("S1", 200, reps=2))


class TestPersistence:
    def _result(self):
        spec = ScenarioSpec("S2", 1000, reps=3)
        rows = [RepRow(name, r, 0.2 + 0.01 * r, 0.2, 0.05 * r) for r in range(3) for name in ("proposed", "MR")]
        return ExperimentResult(spec, rows, simlab._aggregate(rows))

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_results(None, path)
        assert path.read_bytes() == (",".join(CSV_HEADER) + "\n").encode()

    def test_row_counts_and_format(self, tmp_path):
        path = tmp_path / "r.csv"
        write_results(self._result(), path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode("utf-8").splitlines()
        agg_at = lines.index(AGG_HEADER)
        assert agg_at - 1 == 6 and len(lines) - agg_at - 1 == 2
        assert lines[2] == "S2,1000,dense,MR,0,0.2,0.2,0"

    def test_round_trip(self, tmp_path):
        res = self._result()
        path = tmp_path / "r.csv"
        write_results(res, path)
        rows, aggs = read_results(path)
        assert len(rows) == 6 and rows[1]["estimator"] == "MR" and rows[1]["m"] == 1000
        for agg in res.aggregates:
            assert aggs[agg.estimator]["mean_excess"] == pytest.approx(agg.mean_excess, abs=1e-9)
            assert aggs[agg.estimator]["n"] == agg.n

    def test_io_error_names_path(self, tmp_path):
        bad = tmp_path / "missing" / "x.csv"
        with pytest.raises(OSError, match="missing"):
            write_results(self._result(), bad)


def test_aggregate_type_is_plain():
    assert Aggregate("x", 0, math.nan, 0.0, math.nan, False).n == 0
