"""Tester tests: sample-size arithmetic, verdict contracts, error surfaces,
query budgets, and oracle-path vs vectorized-batch equivalence."""

import math
from fractions import Fraction

import numpy as np
import pytest

import preftest as pt
from preftest.errors import (
    ConfigurationError,
    DegenerateSampleError,
    EpsilonOutOfRangeError,
    TooFewAlternativesError,
)
from preftest.mc import mc_bucket_trials, mc_triple_trials, mc_worst_worst_trials
from preftest.oracle import QueryOracle
from preftest.testers import (
    alt_sample_sizes,
    budget_bucket,
    budget_full_learn,
    budget_triples,
    combined_sample_size_t,
    sample_size_alg1,
    sample_size_any_eps,
    sample_size_worst,
    sample_size_worst_worst,
)

SP = pt.single_peaked_domain()
SC = pt.single_crossing_domain()


class TestSampleSizes:
    def test_alg1_log_identity(self):
        # at delta = 6/e the log term is exactly 1
        assert sample_size_alg1(0, 6 / math.e) == 72

    def test_alg1_paper_scale(self):
        assert sample_size_alg1(0.5, 0.001) == 2506

    def test_worst_is_alg1_at_zero(self):
        assert sample_size_worst(SP, 0, 0.01) == sample_size_alg1(0, 0.01)

    def test_worst_triples_epsilon(self):
        # res(m0) = 1/3 for single-peaked: factor 72/(1-3 eps)^2
        assert sample_size_worst(SP, 0.3, 0.01) == math.ceil(7200 * math.log(600))

    def test_worst_rejects_residue(self):
        with pytest.raises(EpsilonOutOfRangeError):
            sample_size_worst(SP, 1 / 3, 0.01)
        assert sample_size_worst(SP, 0.3, 0.01) > 0  # just below is fine

    def test_any_eps_m_of_eps(self):
        ell, me = sample_size_any_eps(SP, 0.5, 0.05)
        assert me == 4
        assert ell == 102_064

    def test_worst_worst_example(self):
        assert sample_size_worst_worst(SP, 3, 0.0, 0.5, 0.1) == 3965

    def test_alt_sizes(self):
        ell, t = alt_sample_sizes(100, 0.1, 0.001)
        assert ell == 6 and t == 157
        ell9, _ = alt_sample_sizes(9, 0.3, 0.001)
        assert ell9 == 7  # ceil(0.7 * 9), the kept-count branch

    def test_alt_kept_count_is_exact(self):
        # float noise must not bump ceil((1-0.1)*100) to 91
        ell, _ = alt_sample_sizes(100, 0.1, 0.5 - 1e-9)
        assert ell <= 90

    def test_combined_t(self):
        assert combined_sample_size_t(SP, 0.2, 0.01, 6) == 1440

    def test_combined_worst_variant(self):
        t_plain = combined_sample_size_t(SP, 0.2, 0.01, 6)
        t_worst = combined_sample_size_t(SP, 0.2, 0.01, 6, worst_pref=True)
        assert t_worst > t_plain
        with pytest.raises(EpsilonOutOfRangeError):
            combined_sample_size_t(SP, 0.4, 0.01, 6, worst_pref=True)


class TestPreconditionErrors:
    def test_two_alternatives_untestable(self):
        prof, _ = pt.gen_uniform_profile(2, 20, 0)
        with pytest.raises(TooFewAlternativesError):
            pt.test_random_outliers(QueryOracle(prof, 0), SP, 0.1, 0.05)

    def test_worst_epsilon_boundary(self):
        prof, _ = pt.gen_uniform_profile(3, 20, 0)
        pt.test_worst_outliers_small_eps(QueryOracle(prof, 0), SP, 0.3, 0.05, sample_override=5)
        with pytest.raises(EpsilonOutOfRangeError):
            pt.test_worst_outliers_small_eps(QueryOracle(prof, 0), SP, 1 / 3, 0.05)

    def test_alt_prop11_regime(self):
        prof, _ = pt.gen_uniform_profile(3, 20, 0)
        # kept count ceil(0.5*3) = 2 and con(2) = 1: provably untestable
        with pytest.raises(EpsilonOutOfRangeError):
            pt.test_alt_outliers(QueryOracle(prof, 0), SP, 0.5, 0.05)

    def test_alt_degenerate_sample(self):
        prof, _ = pt.gen_uniform_profile(5, 20, 0)
        with pytest.raises(DegenerateSampleError):
            pt.test_alt_outliers(QueryOracle(prof, 0), SP, 0.4, 0.45)

    def test_delta_range(self):
        prof, _ = pt.gen_uniform_profile(3, 20, 0)
        with pytest.raises(ConfigurationError):
            pt.test_random_outliers(QueryOracle(prof, 0), SP, 0.1, 0.6)

    def test_worst_worst_eps_order(self):
        prof, _ = pt.gen_uniform_profile(3, 20, 0)
        with pytest.raises(ConfigurationError):
            pt.test_worst_worst_pref(QueryOracle(prof, 0), SP, 0.5, 0.5, 0.1)


class TestVerdictContracts:
    def test_worst_worst_trivial_accept(self):
        prof, _ = pt.gen_type1_profile(SP, 3, 50, 0, 0, seed=1)
        v = pt.test_worst_worst_pref(QueryOracle(prof, 0), SP, 0.0, 1.0, 0.49)
        assert v.decision == 1 and v.statistic == 0.0

    def test_any_eps_threshold_factor(self):
        prof, _ = pt.gen_uniform_profile(4, 100, 3)
        v = pt.test_worst_outliers_any_eps(QueryOracle(prof, 0), SP, 0.5, 0.05,
                                           sample_override=480)
        assert v.threshold == float(Fraction(480, 48) * Fraction(7, 4))

    def test_alg1_threshold_at_override(self):
        prof, _ = pt.gen_uniform_profile(3, 100, 3)
        v = pt.test_random_outliers(QueryOracle(prof, 0), SP, 0.2, 0.05, sample_override=120)
        assert v.sample_size == 120
        assert v.threshold == float(Fraction(120, 12) * Fraction(6, 5))

    def test_determinism(self):
        prof, _ = pt.gen_uniform_profile(3, 200, 5)
        a = pt.test_random_outliers(QueryOracle(prof, 9), SP, 0.2, 0.05)
        b = pt.test_random_outliers(QueryOracle(prof, 9), SP, 0.2, 0.05)
        assert a == b


GOLDEN_PROFILE_SEED = 2025
GOLDEN = {
    # tester key: (m, kwargs, decision, statistic, threshold, queries, sample_size)
    "alg1": (5, dict(eps=0.2, delta=0.05), 0, 61.0, 53.9, 1434, 539),
    "worst": (5, dict(eps=0.2, delta=0.05), 1, 276.0, 287.3333333333333, 5725, 2155),
    "any-eps": (5, dict(eps=0.5, delta=0.05, override=480), 1, 11.0, 17.5, 2225, 480),
    "ww": (5, dict(delta=0.1, override=400), 0, 315.0, 100.0, 2856, 400),
    "alt": (9, dict(eps=0.1, delta=0.01), 0, 12.0, 1.0, 502, 108),
    "combined": (10, dict(eps=0.2, delta=0.01, override=300), 0, 30.0, 30.0, 2949, 300),
}


class TestGoldenVerdicts:
    """Statistic/threshold/query values frozen from a fixed seed; the combined
    case sits exactly on the threshold (30 < 30 is false)."""

    @pytest.mark.parametrize("key", sorted(GOLDEN))
    def test_golden(self, key):
        m, kw, *expected = GOLDEN[key]
        prof, _ = pt.gen_uniform_profile(m, 400, GOLDEN_PROFILE_SEED)
        oracle = QueryOracle(prof, seed=1)
        if key == "alg1":
            v = pt.test_random_outliers(oracle, SP, kw["eps"], kw["delta"])
        elif key == "worst":
            v = pt.test_worst_outliers_small_eps(oracle, SP, kw["eps"], kw["delta"])
        elif key == "any-eps":
            v = pt.test_worst_outliers_any_eps(
                oracle, SP, kw["eps"], kw["delta"], sample_override=kw["override"]
            )
        elif key == "ww":
            v = pt.test_worst_worst_pref(
                oracle, SP, 0.0, 0.5, kw["delta"], sample_override=kw["override"]
            )
        elif key == "alt":
            v = pt.test_alt_outliers(oracle, SP, kw["eps"], kw["delta"])
        else:
            v = pt.test_combined_outliers(
                oracle, SP, kw["eps"], 0.2, kw["delta"], sample_override=kw["override"]
            )
        assert (v.decision, v.statistic, v.threshold, v.queries, v.sample_size) == tuple(expected)


class TestBudgets:
    def test_bucket_budget_within_paper_bound(self):
        prof, _ = pt.gen_uniform_profile(3, 300, 8)
        for _ in range(5):
            oracle = QueryOracle(prof, seed=_)
            v = pt.test_random_outliers(oracle, SP, 0.3, 0.05)
            assert v.queries <= budget_bucket(v.sample_size, 3) == 6 * v.sample_size

    def test_full_learn_budget(self):
        prof, _ = pt.gen_uniform_profile(5, 300, 8)
        v = pt.test_worst_worst_pref(QueryOracle(prof, 3), SP, 0.0, 0.5, 0.1,
                                     sample_override=200)
        assert v.queries <= budget_full_learn(200, 5)

    def test_triple_budget(self):
        prof, _ = pt.gen_uniform_profile(9, 300, 8)
        v = pt.test_alt_outliers(QueryOracle(prof, 3), SP, 0.1, 0.01)
        assert v.queries <= budget_triples(v.sample_size, v.alt_sample_size)


class TestMCEquivalence:
    """The vectorized batches replay the oracle path exactly, per trial."""

    TRIALS = 6

    def _children(self, seed):
        return np.random.SeedSequence(seed).spawn(self.TRIALS)

    def _assert_match(self, mc, verdicts):
        for i, v in enumerate(verdicts):
            assert v.statistic == mc.statistics[i]
            assert v.queries == mc.queries[i]
            assert v.decision == mc.decisions[i]
            assert v.threshold == mc.threshold
            assert v.queries <= mc.budget

    @pytest.mark.parametrize("algo,eps", [("alg1", 0.2), ("worst", 0.25), ("any-eps", 0.4)])
    def test_bucket_testers(self, algo, eps):
        m = 4 if algo == "any-eps" else 5
        prof, _ = pt.gen_uniform_profile(m, 250, 31)
        mc = mc_bucket_trials(prof, SP, algo, eps, 0.05, self.TRIALS, seed=77,
                              sample_override=300)
        fns = {
            "alg1": pt.test_random_outliers,
            "worst": pt.test_worst_outliers_small_eps,
            "any-eps": pt.test_worst_outliers_any_eps,
        }
        verdicts = [
            fns[algo](QueryOracle(prof, seed=np.random.default_rng(c)), SP, eps, 0.05,
                      sample_override=300)
            for c in self._children(77)
        ]
        self._assert_match(mc, verdicts)

    def test_worst_worst(self):
        prof = pt.gen_prop3_profile(SP, 3, 120)
        mc = mc_worst_worst_trials(prof, SP, 0.0, 0.5, 0.1, self.TRIALS, seed=5,
                                   sample_override=250)
        verdicts = [
            pt.test_worst_worst_pref(QueryOracle(prof, seed=np.random.default_rng(c)),
                                     SP, 0.0, 0.5, 0.1, sample_override=250)
            for c in self._children(5)
        ]
        self._assert_match(mc, verdicts)

    def test_alt(self):
        prof, _ = pt.gen_uniform_profile(9, 300, 13)
        mc = mc_triple_trials(prof, SP, 0.1, 0.01, self.TRIALS, seed=3)
        verdicts = [
            pt.test_alt_outliers(QueryOracle(prof, seed=np.random.default_rng(c)), SP, 0.1, 0.01)
            for c in self._children(3)
        ]
        self._assert_match(mc, verdicts)

    def test_combined(self):
        prof, _ = pt.gen_uniform_profile(10, 300, 19)
        mc = mc_triple_trials(prof, SP, 0.2, 0.01, self.TRIALS, seed=11, eps_v=0.2,
                              sample_override=200)
        verdicts = [
            pt.test_combined_outliers(QueryOracle(prof, seed=np.random.default_rng(c)),
                                      SP, 0.2, 0.2, 0.01, sample_override=200)
            for c in self._children(11)
        ]
        self._assert_match(mc, verdicts)

    def test_vector_scalar_stream_equivalence(self):
        # the equivalence above relies on this numpy property; pin it
        r1, r2 = np.random.default_rng(4), np.random.default_rng(4)
        vec = r1.integers(0, 37, size=100)
        scal = np.array([r2.integers(0, 37) for _ in range(100)])
        assert np.array_equal(vec, scal)


class TestProp3Regime:
    def test_precondition_rejection_at_residue(self):
        prof = pt.gen_prop3_profile(SP, 3, 60)
        with pytest.raises(EpsilonOutOfRangeError):
            pt.test_worst_outliers_small_eps(QueryOracle(prof, 0), SP, 1 / 3, 0.05)

    def test_tester_params_validation(self):
        pt.TesterParams(eps_v=0.1, eps_v_prime=0.5, delta=0.01).validate()
        with pytest.raises(ConfigurationError):
            pt.TesterParams(eps_v=0.5, eps_v_prime=0.5).validate()
        with pytest.raises(ConfigurationError):
            pt.TesterParams(delta=0.7).validate()
        with pytest.raises(ConfigurationError):
            pt.TesterParams(sample_override=0).validate()
