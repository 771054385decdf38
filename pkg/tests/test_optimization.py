import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from telesample import (
    CompensationConfig,
    CostModel,
    IntervalNotPositive,
    NoFeasibleRate,
    SyntheticSpec,
    battery_life,
    cost,
    energy_per_hour,
    generate,
    optimize_rate,
    transmission_ratio,
    transmissions_per_hour,
)
from telesample.errors import ConfigError
from telesample.optimization import evaluate_table, select_best

from corpora import aliased_sine, band_limited_corpus, spike_train_corpus, well2_like
from oracles import brute_force_best

NO_STANDBY = CostModel(E_b=0.0, E_t=1.0)
STUDY_FACTORS = [1, 5, 10, 15, 20]


class TestTransmissions:
    def test_reference_values(self):
        assert transmissions_per_hour(1) == 3600
        assert transmissions_per_hour(5) == 720
        assert transmissions_per_hour(7) == pytest.approx(514.2857142857143)

    def test_ratio(self):
        assert transmission_ratio(1, 5) == 5
        assert transmission_ratio(3.5, 3.5) == 1
        assert transmission_ratio(2, 10) == 5

    @pytest.mark.parametrize("bad", [0, -1])
    def test_non_positive(self, bad):
        with pytest.raises(IntervalNotPositive):
            transmissions_per_hour(bad)
        with pytest.raises(IntervalNotPositive):
            transmission_ratio(1, bad)

    @given(st.fractions(min_value=Fraction(1, 100), max_value=1000),
           st.fractions(min_value=Fraction(1, 100), max_value=1000))
    def test_ratio_is_interval_quotient(self, a, b):
        ratio = transmissions_per_hour(a) / transmissions_per_hour(b)
        assert ratio == pytest.approx(float(b / a), rel=1e-15)


class TestEnergy:
    def test_one_second(self):
        assert energy_per_hour(1.0, NO_STANDBY) == 3600.0

    def test_standby_limit(self):
        m = CostModel(E_b=12.5, E_t=1.0)
        assert energy_per_hour(math.inf, m) == 12.5

    def test_five_times(self):
        assert energy_per_hour(1, NO_STANDBY) / energy_per_hour(5, NO_STANDBY) == 5.0


class TestBattery:
    def test_five_second_example(self):
        life = battery_life(5, 1, 1440, NO_STANDBY)
        assert life == 7200
        assert life / 24 == 300

    def test_identity(self):
        assert battery_life(3, 3, 1000, CostModel(E_b=4.0)) == 1000

    def test_with_standby(self):
        m = CostModel(E_t=1.0, E_b=3600.0)
        # 1000 * (3600 + 3600) / (3600 + 720)
        assert battery_life(5, 1, 1000, m) == pytest.approx(1666.6666666666667, rel=1e-12)

    @given(st.floats(0.01, 1e4), st.floats(0.01, 1e4), st.floats(1, 1e5))
    def test_linear_without_standby(self, new, ref, life):
        assert battery_life(2 * new, ref, life, NO_STANDBY) == pytest.approx(
            2 * battery_life(new, ref, life, NO_STANDBY), rel=1e-12)

    def test_bad_life(self):
        with pytest.raises(IntervalNotPositive):
            battery_life(5, 1, 0, NO_STANDBY)


class TestCost:
    def test_zero(self):
        m = CostModel(k_a=0, k_t=0, lam=0)
        assert cost(1.0, 0.5, m) == 0.0

    def test_storage_only(self):
        assert cost(0.2, 0.3, CostModel(k_a=1, k_t=0, lam=0)) == 0.2

    def test_hand_substitution(self):
        m = CostModel(k_a=1, k_t=2, E_unit=0.5, lam=10)
        assert cost(1.0, 0.01, m) == pytest.approx(2.1, rel=1e-15)

    def test_model_validation(self):
        with pytest.raises(ConfigError):
            CostModel(k_a=-1)
        with pytest.raises(ConfigError):
            CostModel(E_target=1.0)
        with pytest.raises(ConfigError):
            CostModel.from_dict({"k_z": 1})

    def test_from_dict_lambda(self):
        m = CostModel.from_dict({"lambda": 3, "E_target": 0.05})
        assert m.lam == 3.0 and m.E_target == 0.05
        assert CostModel.from_dict(m.to_dict()) == m


class TestOptimizeRate:
    def test_baseline_only(self):
        s = well2_like()
        best, table = optimize_rate(s, [1])
        assert best.factor == 1 and len(table) == 1

    def test_table_has_exact_baseline(self):
        _, table = optimize_rate(well2_like(), [5, 10], model=CostModel(E_target=0.5))
        base = table[0]
        assert base.factor == 1
        for rep in (base.compensated, base.uncompensated):
            assert rep.l2_relative == 0.0 and rep.mean_relative == 0.0 and rep.aliasing == 0.0

    def test_band_limited_reaches_factor_five(self):
        for s in band_limited_corpus(duration=7200.0):
            best, table = optimize_rate(s, STUDY_FACTORS)
            assert best.factor >= 5
            assert best.compensated.l2_relative <= 0.02

    def test_aliased_tone_stays_at_full_rate(self):
        best, table = optimize_rate(aliased_sine(offset=1.0), STUDY_FACTORS)
        assert best.factor == 1
        assert all(not r.feasible for r in table if r.factor >= 5)

    def test_no_feasible_rate(self):
        s = generate(SyntheticSpec(duration=2000, components=((0.01, 1, 0),), offset=2,
                                   noise_std=0.1, seed=1))
        with pytest.raises(NoFeasibleRate) as info:
            optimize_rate(s, [5, 10], model=CostModel(E_target=1e-9))
        assert [r.factor for r in info.value.table] == [1, 5, 10]

    def test_parallel_matches_serial(self):
        s = spike_train_corpus()[0]
        serial = evaluate_table(s, STUDY_FACTORS)
        parallel = evaluate_table(s, STUDY_FACTORS, max_workers=4)
        assert serial == parallel

    def test_flag_matches_metric(self):
        for s in band_limited_corpus(duration=3600.0) + spike_train_corpus() + [well2_like()]:
            for r in evaluate_table(s, STUDY_FACTORS):
                assert r.feasible == (r.compensated.l2_relative <= 0.02)
                assert r.transmissions_per_hour * r.interval == pytest.approx(3600, rel=1e-15)

    def test_zero_lambda_picks_largest_feasible(self):
        for s in band_limited_corpus(duration=3600.0) + spike_train_corpus():
            best, table = optimize_rate(s, STUDY_FACTORS)
            assert best.factor == max(r.factor for r in table if r.feasible)

    def test_error_weight_can_pull_rate_up(self):
        s = band_limited_corpus(duration=3600.0)[0]
        cheap, _ = optimize_rate(s, STUDY_FACTORS, model=CostModel(k_a=1, k_t=0, lam=0))
        heavy, _ = optimize_rate(s, STUDY_FACTORS, model=CostModel(k_a=1e-6, k_t=0, lam=1e3))
        assert heavy.factor < cheap.factor

    def test_tie_goes_to_larger_factor(self):
        s = band_limited_corpus(duration=3600.0)[4]
        free = CostModel(k_a=0, k_t=0, lam=0)
        best, table = optimize_rate(s, STUDY_FACTORS, model=free)
        assert best.factor == max(r.factor for r in table if r.feasible)

    def test_uncompensated_switch(self):
        s = band_limited_corpus(duration=3600.0)[0]
        best, table = optimize_rate(s, STUDY_FACTORS, error_source="uncompensated")
        assert best.factor == 1
        with pytest.raises(ValueError):
            optimize_rate(s, STUDY_FACTORS, error_source="both")

    def test_rejects_bad_factors(self):
        s = well2_like()
        with pytest.raises(ValueError):
            optimize_rate(s, [])
        with pytest.raises(ValueError):
            optimize_rate(s, [0, 5])


@pytest.mark.parametrize("seed", range(20))
def test_best_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    comps = tuple((float(rng.uniform(0.001, 0.04)), float(rng.uniform(0.2, 2)),
                   float(rng.uniform(0, 6.28))) for _ in range(rng.integers(1, 4)))
    spec = SyntheticSpec(duration=float(rng.integers(600, 3000)), components=comps,
                         offset=float(rng.uniform(0, 5)), noise_std=float(rng.uniform(0, 0.05)),
                         seed=seed)
    model = CostModel(k_a=float(rng.uniform(0, 2)), k_t=float(rng.uniform(0, 2)),
                      lam=float(rng.choice([0.0, rng.uniform(0, 50)])),
                      E_target=float(rng.uniform(0.005, 0.1)))
    factors = sorted(set(int(f) for f in rng.choice([1, 2, 3, 5, 10, 15, 20], size=4)))
    s = generate(spec)
    table = evaluate_table(s, factors, CompensationConfig(), model)
    expected = brute_force_best(table, factors)
    assert select_best(table, factors) == expected
    if expected is None:
        with pytest.raises(NoFeasibleRate):
            optimize_rate(s, factors, model=model)
    else:
        best, _ = optimize_rate(s, factors, model=model)
        assert best == expected
