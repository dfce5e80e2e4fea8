"""Run a small S2 experiment and compare the proposed estimator with the baselines.

Null means below b give conservative p-values, so both p-value baselines
underestimate heavily here.
"""
from nullprop.simlab import DENSE, ScenarioSpec, run_experiment

for m in (1000, 4000):
    res = run_experiment(ScenarioSpec("S2", m, DENSE, seed=3, reps=20))
    print(f"m={m} nominal pi1={res.nominal_pi1:.3f} ({res.runtime:.1f}s)")
    for agg in res.aggregates:
        print(f"  {agg.estimator:<9} mean_excess={agg.mean_excess:+.3f} mean_abs_excess={agg.mean_abs_excess:.3f}")
