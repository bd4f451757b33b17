"""Acceptance suite: every primary criterion at its stated tolerance.

Each test prints one ``ACCEPTANCE PASS`` line on success (pytest -s shows them;
failures surface through the assertions). Monte Carlo criteria run at fixed
seeds, so outcomes are reproducible bit for bit on a pinned numpy.

The figure criterion writes the desk-scale runs and summary CSVs into
``artifacts/`` at the repo root; the plotting frontend consumes those files.
"""

import math
import os
import pathlib
import time

import numpy as np
import pytest

import preftest as pt
from preftest.distances import (
    check_lemma_subsample,
    pref_distance_by_maximal_sets,
    pref_distance_by_subsets,
)
from preftest.domains import max_distinct_accepted
from preftest.expharness import (
    crossing_fraction,
    emit_csv,
    emit_summary_csv,
    preset_config,
    run_experiment,
)
from preftest.mc import mc_bucket_trials, mc_triple_trials, mc_worst_worst_trials

from oracles import brute_alt_distance, brute_sc_ok, brute_sp_axis

SP = pt.single_peaked_domain()
SC = pt.single_crossing_domain()
ARTIFACTS = pathlib.Path(__file__).resolve().parent.parent / "artifacts"


def report(name: str, detail: str = "") -> None:
    print(f"ACCEPTANCE PASS: {name}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# Criterion 1: recognizer census (runtime < 10 s)
# ---------------------------------------------------------------------------


def test_recognizer_census():
    t0 = time.time()
    assert max_distinct_accepted(SP, 3) == 4
    assert pt.con_value(SP, 3) * math.factorial(3) == 4
    assert max_distinct_accepted(SP, 4) == 8
    assert 2 ** (4 - 1) == 8
    elapsed = time.time() - t0
    assert elapsed < 10
    report("recognizer census", f"max distinct = 4 (m=3), 8 (m=4) in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 2: distance-oracle exactness (runtime < 2 min)
# ---------------------------------------------------------------------------


def test_distance_oracle_exactness():
    t0 = time.time()
    worked1 = pt.Profile.from_orders(
        [(0, 1, 2)] * 5 + [(0, 2, 1)] * 4 + [(2, 1, 0)]
    )
    worked2 = pt.Profile.from_orders(
        [(0, 1, 2)] * 5 + [(0, 2, 1)] * 3 + [(2, 1, 0)] * 2
    )
    assert pt.pref_distance(worked1, SP).value == 1
    assert pt.pref_distance(worked2, SP).value == 2

    rng = np.random.default_rng(20_250)
    mismatches = 0
    for _ in range(5_000):
        m = int(rng.integers(2, 5))
        n = int(rng.integers(1, 9))
        prof, _ = pt.gen_uniform_profile(m, n, rng)
        a = pref_distance_by_maximal_sets(prof, SP).value
        b = pref_distance_by_subsets(prof, SP).value
        mismatches += a != b
    elapsed = time.time() - t0
    assert mismatches == 0
    assert elapsed < 120
    report("distance-oracle exactness", f"5000 profiles, 0 mismatches in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 3 + 5: tester error bounds and query budgets
# ---------------------------------------------------------------------------

SEED_BASE = 1
ERROR_TRIALS = 500

# (label, algo, m, n, eps_v, eps_a, kind-one generation)
ERROR_SCENARIOS = [
    ("alg1 eps=0.1", "alg1", 3, 60_000, 0.1, 0.0, "random"),
    ("alg1 eps=0.3", "alg1", 3, 60_000, 0.3, 0.0, "random"),
    ("worst eps=0.1", "worst", 3, 60_000, 0.1, 0.0, "adversarial"),
    ("worst eps=0.3", "worst", 3, 60_000, 0.3, 0.0, "adversarial"),
    ("any-eps eps=0.4", "any-eps", 4, 60_000, 0.4, 0.0, "adversarial"),
    ("alt eps_a=0.1", "alt", 9, 20_000, 0.0, 0.1, "random"),
    ("alt eps_a=0.3", "alt", 9, 20_000, 0.0, 0.3, "random"),
    ("combined", "combined", 10, 20_000, 0.2, 0.2, "random"),
]
DELTAS = (0.05, 0.01)


def _scenario_trials(label, algo, m, n, eps_v, eps_a, mode, delta, kind):
    """(error count, budget violations) over ERROR_TRIALS fresh profiles."""
    errors = 0
    budget_violations = 0
    tag = abs(hash((label, delta, kind))) % (2**31)
    for i in range(ERROR_TRIALS):
        gen_seed = np.random.default_rng(np.random.SeedSequence([SEED_BASE, tag, i, 0]))
        if kind == 0:
            prof, _ = pt.gen_uniform_profile(m, n, gen_seed)
        else:
            prof, _ = pt.gen_type1_profile(
                SP, m, n, eps_v, eps_a, outlier_mode=mode, seed=gen_seed
            )
        trial_seed = np.random.SeedSequence([SEED_BASE, tag, i, 1])
        if algo in ("alg1", "worst", "any-eps"):
            mc = mc_bucket_trials(prof, SP, algo, eps_v, delta, trials=1, seed=trial_seed)
        elif algo == "alt":
            mc = mc_triple_trials(prof, SP, eps_a, delta, trials=1, seed=trial_seed)
        else:
            mc = mc_triple_trials(
                prof, SP, eps_a, delta, trials=1, seed=trial_seed, eps_v=eps_v
            )
        errors += int(mc.decisions[0] != kind)
        budget_violations += int(mc.queries[0] > mc.budget)
    return errors, budget_violations


@pytest.fixture(scope="module")
def error_bound_results():
    t0 = time.time()
    results = {}
    for label, algo, m, n, eps_v, eps_a, mode in ERROR_SCENARIOS:
        for delta in DELTAS:
            rates = {}
            violations = 0
            for kind in (0, 1):
                errs, viol = _scenario_trials(
                    label, algo, m, n, eps_v, eps_a, mode, delta, kind
                )
                rates[kind] = errs / ERROR_TRIALS
                violations += viol
            results[(label, delta)] = (rates, violations)
    results["elapsed"] = time.time() - t0
    return results


def test_tester_error_bounds(error_bound_results):
    elapsed = error_bound_results["elapsed"]
    worst_margin = None
    for (label, delta), (rates, _v) in sorted(
        (k, v) for k, v in error_bound_results.items() if isinstance(k, tuple)
    ):
        for kind in (0, 1):
            assert rates[kind] <= 2 * delta, (
                f"{label} at delta={delta}: kind-{kind} error {rates[kind]:.4f} > {2 * delta}"
            )
            margin = 2 * delta - rates[kind]
            if worst_margin is None or margin < worst_margin:
                worst_margin = margin
    assert elapsed < 600
    report(
        "tester error bounds",
        f"{len(ERROR_SCENARIOS) * len(DELTAS)} scenario/delta combos x "
        f"{ERROR_TRIALS} trials/kind, worst margin {worst_margin:.4f}, {elapsed:.0f}s",
    )


def test_query_budgets(error_bound_results):
    total = 0
    for key, value in error_bound_results.items():
        if isinstance(key, tuple):
            _rates, violations = value
            assert violations == 0, f"budget exceeded in scenario {key}"
            total += 2 * ERROR_TRIALS
    report("query budgets", f"0 violations across {total} accounted trials")


# ---------------------------------------------------------------------------
# Criterion 4: worst-worst tester + subsample concentration (runtime < 5 min)
# ---------------------------------------------------------------------------


def test_worst_worst_and_subsample_concentration():
    t0 = time.time()
    delta = 0.05
    trials = 200
    far = pt.gen_prop3_profile(SP, 3, 600)  # max-distance flood: distance n/3
    errors = {0: 0, 1: 0}
    budget_violations = 0
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([41, i]))
        axis = pt.LinearOrder(tuple(int(a) for a in rng.permutation(3)))
        from preftest.domains import sp_orders_batch

        rows = sp_orders_batch(axis.ranking, 600, rng)
        near = pt.Profile(rows)
        mc1 = mc_worst_worst_trials(near, SP, 0.0, 0.5, delta, trials=1,
                                    seed=np.random.SeedSequence([42, i]))
        mc0 = mc_worst_worst_trials(far, SP, 0.0, 0.5, delta, trials=1,
                                    seed=np.random.SeedSequence([43, i]))
        errors[1] += int(mc1.decisions[0] != 1)
        errors[0] += int(mc0.decisions[0] != 0)
        budget_violations += int(mc1.queries[0] > mc1.budget) + int(mc0.queries[0] > mc0.budget)
    assert errors[0] / trials <= 2 * delta
    assert errors[1] / trials <= 2 * delta
    assert budget_violations == 0

    rate = check_lemma_subsample(far, SP, delta_gap=0.15, delta=0.1, trials=400, seed=44)
    assert rate >= 0.9
    elapsed = time.time() - t0
    assert elapsed < 300
    report(
        "worst-worst tester + subsample concentration",
        f"errors {errors[0]}/{errors[1]} of {trials} per side, "
        f"concentration rate {rate:.3f}, {elapsed:.0f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 6: figure reproduction at desk scale (runtime < 15 min)
# ---------------------------------------------------------------------------

FIGURE_BOUNDS = {"fig1": 0.65, "fig2": 0.55, "fig3": 0.40}
FIGURE_SEEDS = {"fig1": 0, "fig2": 0, "fig3": 0}


def test_figure_reproduction_desk_scale():
    t0 = time.time()
    ARTIFACTS.mkdir(exist_ok=True)
    details = []
    for name, bound in FIGURE_BOUNDS.items():
        config = preset_config(name, seed=FIGURE_SEEDS[name])
        records, summary = run_experiment(config)
        emit_csv(records, ARTIFACTS / f"{name}_runs.csv")
        emit_summary_csv(summary, ARTIFACTS / f"{name}_summary.csv")
        target = 1 - config.delta
        n_point = 2 * config.profiles_per_point * config.samples_per_profile
        slack = 2 * math.sqrt(config.delta * (1 - config.delta) / n_point)
        for eps in config.eps_list:
            cross = crossing_fraction(summary, eps, target)
            assert cross is not None and cross <= bound, (
                f"{name} eps={eps}: curve reaches {target} at {cross}, bound {bound}"
            )
            full = [r for r in summary if abs(r.eps - eps) < 1e-12 and r.fraction == 1.0]
            assert full[0].rho >= target - slack
        details.append(f"{name}<= {bound}")
    elapsed = time.time() - t0
    assert elapsed < 900
    report("figure reproduction", f"{'; '.join(details)}; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# Criterion 7: adversarial lower-bound fixtures
# ---------------------------------------------------------------------------


def test_adversarial_fixtures():
    for blocks in (1, 2):
        p, p_prime = pt.gen_lb_sp_profile(blocks, 4)
        assert pt.recognize_sp(p) is None
        assert pt.recognize_sp(p_prime) is not None
        rows = [tuple(int(a) for a in r) for r in p.order_array()]
        brute = brute_alt_distance(
            rows, p.m,
            lambda rs, kept: brute_sp_axis(rs, len(kept)) is not None,
        )
        assert brute == blocks
        assert pt.alt_distance(p, SP).value == blocks

    q, q_prime = pt.gen_lb_sc_profile(1, 8)
    assert pt.recognize_sc(q) is None
    assert pt.recognize_sc(q_prime) is not None
    rows = [tuple(int(a) for a in r) for r in q.order_array()]
    assert brute_alt_distance(rows, 3, lambda rs, kept: brute_sc_ok(rs, len(kept))) == 1
    assert pt.alt_distance(q, SC).value == 1
    report("adversarial fixtures", "P' recognized, P rejected, alt-distance = blocks")


# ---------------------------------------------------------------------------
# Criterion 8: flood-profile samples indistinguishable from uniform
# ---------------------------------------------------------------------------


def test_prop3_indistinguishability():
    from scipy.stats import chi2_contingency

    from preftest.mc import restriction_bucket_ids

    prop3 = pt.gen_prop3_profile(SP, 3, 600)
    bucket_of = restriction_bucket_ids(prop3, range(3))
    min_p = 1.0
    for s in range(20):
        rng = np.random.default_rng(np.random.SeedSequence([1, s]))
        sampled = np.bincount(bucket_of[rng.integers(0, 600, size=3000)], minlength=6)
        uniform_rows = rng.permuted(np.tile(np.arange(3), (3000, 1)), axis=1)
        uniform = np.bincount(
            restriction_bucket_ids(pt.Profile(uniform_rows), range(3)), minlength=6
        )
        p = chi2_contingency(np.array([sampled, uniform]))[1]
        min_p = min(min_p, p)
        assert p > 0.01, f"seed {s}: chi-squared rejected (p = {p:.5f})"
    report("flood-profile indistinguishability", f"20 seeds, min p = {min_p:.3f}")
