import math

import numpy as np
import pytest

from limited_attention.api import inference
from limited_attention.api.attention import sample_dataset
from limited_attention.api.constraints import build_R
from limited_attention.api.estimation import estimate_choice_rule, population_estimate
from limited_attention.doctype.choice_rule.choice_rule import ChoiceRule
from limited_attention.doctype.constraint_matrix.constraint_matrix import MONOTONICITY, ConstraintMatrix
from limited_attention.doctype.grand_set.grand_set import GrandSet
from limited_attention.doctype.inference_settings.inference_settings import (
	GMS,
	LEAST_FAVORABLE,
	METHODS,
	PLUG_IN,
	TWO_STEP_MS,
	TWO_STEP_UB,
	InferenceSettings,
)
from limited_attention.doctype.menu_index.menu_index import COMPLETE, build_menu_index
from limited_attention.doctype.preference.preference import Preference
from limited_attention.exceptions import ConfigError, NumericalError, ValidationError
from limited_attention.tests.conftest import A, B, C


def single_row_problem(n_per_menu):
	"""One inequality pi(a|{a,b}) <= 0 at pi_hat(a|{a,b}) = 1/2"""
	index = build_menu_index(GrandSet(("a", "b")), COMPLETE)
	estimate = population_estimate(ChoiceRule(index, [0.5, 0.5]), n_per_menu)
	matrix = ConstraintMatrix.from_rows([(0, 1.0, 1, 0.0, MONOTONICITY, 0b11, 1, 0, 0b01)], index.n_choice)
	return matrix, estimate


class TestSettings:
	def test_defaults_from_json(self):
		settings = InferenceSettings.from_defaults()
		assert settings == InferenceSettings()
		assert settings.method == GMS
		assert settings.beta_value == pytest.approx(0.005)

	def test_from_dict(self):
		settings = InferenceSettings.from_dict({"method": "least-favorable", "alpha": "0.1", "draws": "500"})
		assert (settings.method, settings.alpha, settings.draws) == (LEAST_FAVORABLE, 0.1, 500)

	def test_unknown_key(self):
		with pytest.raises(ConfigError):
			InferenceSettings.from_dict({"level": 0.05})

	def test_bad_cast(self):
		with pytest.raises(ConfigError):
			InferenceSettings.from_dict({"draws": "many"})

	@pytest.mark.parametrize("values", [
		{"method": "bootstrap"},
		{"alpha": 1.0},
		{"draws": 0},
		{"kappa": 0.0},
		{"method": TWO_STEP_MS, "beta": 0.02},
		{"method": TWO_STEP_UB, "beta": 0.05},
		{"two_step_scope": "everything"},
	])
	def test_invalid(self, values):
		with pytest.raises(ValidationError):
			InferenceSettings(**values)

	def test_kappa(self):
		assert InferenceSettings().kappa_for(1) == 1.0
		assert InferenceSettings().kappa_for(400) == pytest.approx(math.sqrt(math.log(400)))
		assert InferenceSettings(kappa=2.0).kappa_for(400) == 2.0


class TestStatistic:
	def test_max_statistic(self):
		statistic, sigma_tilde, studentized = inference.max_statistic([0.02, -0.5], [0.1, 0.1], 400, 1e-6)
		assert statistic == pytest.approx(4.0)
		np.testing.assert_allclose(studentized, [0.2, -5.0])
		np.testing.assert_allclose(sigma_tilde, [0.1, 0.1])

	def test_negative_moments_give_zero(self):
		statistic, _, _ = inference.max_statistic([-0.1, -0.2], [0.1, 0.1], 400, 1e-6)
		assert statistic == 0.0

	def test_sigma_floor(self):
		statistic, sigma_tilde, _ = inference.max_statistic([0.001], [0.0], 100, 0.01)
		assert sigma_tilde[0] == 0.01
		assert statistic == pytest.approx(1.0)

	def test_zero_sigma_without_floor(self):
		with pytest.raises(NumericalError):
			inference.max_statistic([0.1], [0.0], 100, 0.0)
		statistic, _, _ = inference.max_statistic([0.0], [0.0], 100, 0.0)
		assert statistic == 0.0

	def test_statistic_of_a_matrix(self):
		matrix, estimate = single_row_problem(100)
		statistic, sigma = inference.test_statistic(matrix, estimate)
		assert sigma[0] == pytest.approx(0.5)
		assert statistic == pytest.approx(10.0 * 0.5 / 0.5)


class TestSimulation:
	def test_quantile(self):
		assert inference.empirical_quantile([4, 1, 3, 2], 0.5) == 2.0
		assert inference.empirical_quantile(np.arange(1, 21), 0.95) == 19.0
		assert inference.empirical_quantile([3.0], 0.99) == 3.0

	def test_draws_repeat_with_seed(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 100)
		z = inference.simulate_gaussian_draws(estimate, 50, 3)
		assert z.shape == (50, 9)
		np.testing.assert_array_equal(z, inference.simulate_gaussian_draws(estimate, 50, 3))
		# every menu block sums to zero
		np.testing.assert_allclose(z[:, :3].sum(axis=1), 0.0, atol=1e-6)

	def test_degenerate_menu_has_no_noise(self, index3):
		rule = ChoiceRule(index3, [1, 0, 0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5])
		z = inference.simulate_gaussian_draws(population_estimate(rule, 10), 20, 1)
		assert np.abs(z[:, :3]).max() < 1e-12

	def test_psd_root(self):
		block = np.array([[0.25, -0.25], [-0.25, 0.25]])
		root = inference.psd_root(block)
		np.testing.assert_allclose(root @ root.T, block, atol=1e-12)
		with pytest.raises(NumericalError):
			inference.psd_root(np.array([[1.0, 0.0], [0.0, -1.0]]))

	@pytest.mark.slow
	def test_least_favorable_normal_quantile(self):
		matrix, estimate = single_row_problem(400)
		settings = InferenceSettings(method=LEAST_FAVORABLE, draws=100000, seed=1)
		critical, simulated = inference.simulate_critical_value(matrix, estimate, settings)
		assert critical == pytest.approx(1.645, abs=0.03)
		assert simulated.shape == (100000,)

	def test_unit_kappa_gms_is_plug_in(self, regularity_pi):
		index = regularity_pi.index
		estimate = estimate_choice_rule(sample_dataset(regularity_pi, n_per_menu=150, seed=5), index)
		matrix = build_R(Preference((0, 2, 1)), index)
		z = inference.simulate_gaussian_draws(estimate, 1000, 2)
		plug_in = inference.simulate_critical_value(matrix, estimate, InferenceSettings(method=PLUG_IN), z)
		gms = inference.simulate_critical_value(matrix, estimate, InferenceSettings(method=GMS, kappa=1.0), z)
		np.testing.assert_array_equal(gms[1], plug_in[1])
		assert gms[0] == plug_in[0]

	@pytest.mark.parametrize("ranking", [(0, 1, 2), (0, 2, 1), (1, 0, 2)])
	def test_method_ordering(self, regularity_pi, ranking):
		estimate = population_estimate(regularity_pi, 200)
		matrix = build_R(Preference(ranking), regularity_pi.index)
		z = inference.simulate_gaussian_draws(estimate, 2000, 9)
		critical = {
			method: inference.simulate_critical_value(matrix, estimate, InferenceSettings(method=method), z)[0]
			for method in (PLUG_IN, GMS, LEAST_FAVORABLE)
		}
		assert critical[PLUG_IN] <= critical[GMS] <= critical[LEAST_FAVORABLE]

	def test_method_ordering_across_datasets(self, regularity_pi):
		index = regularity_pi.index
		matrix = build_R(Preference((0, 2, 1)), index)
		for seed in range(20):
			estimate = estimate_choice_rule(sample_dataset(regularity_pi, n_per_menu=200, seed=seed), index)
			z = inference.simulate_gaussian_draws(estimate, 1000, seed)
			critical = {
				method: inference.simulate_critical_value(matrix, estimate, InferenceSettings(method=method), z)[0]
				for method in (PLUG_IN, GMS, LEAST_FAVORABLE)
			}
			assert critical[PLUG_IN] <= critical[GMS] <= critical[LEAST_FAVORABLE], seed


class TestPreferenceTest:
	def test_true_preference_not_rejected(self, regularity_pi):
		data = sample_dataset(regularity_pi, n_per_menu=500, seed=1)
		result = inference.test_preference(data, Preference.identity(3), index=regularity_pi.index)
		assert result.statistic == 0.0
		assert not result.reject
		assert 0.0 <= result.p_value <= 1.0

	def test_wrong_preference_rejected(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 1000)
		result = inference.test_preference(estimate, Preference((1, 0, 2)))
		assert result.reject
		assert result.p_value == 0.0
		worst = result.diagnostics["worst_rows"][0]
		assert worst["constraint"] == "pi(a|{a,b,c}) <= pi(a|{a,c})"
		assert len(result.diagnostics["studentized_moments"]) == result.diagnostics["n_rows"]

	@pytest.mark.parametrize("method", METHODS)
	def test_every_method_runs(self, regularity_pi, method):
		estimate = population_estimate(regularity_pi, 300)
		settings = InferenceSettings(method=method, draws=500)
		result = inference.test_preference(estimate, Preference.identity(3), settings=settings)
		assert result.method == method
		assert not result.reject
		assert result.critical_value >= 0.0

	def test_two_step_diagnostics(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 300)
		settings = InferenceSettings(method=TWO_STEP_MS, draws=500)
		result = inference.test_preference(estimate, Preference((0, 2, 1)), settings=settings)
		assert result.diagnostics["level"] == pytest.approx(0.96)
		assert result.diagnostics["beta_critical_value"] >= 0.0
		assert "active_rows" in result.diagnostics

	@pytest.mark.parametrize("ranking, reject", [((0, 1, 2), False), ((2, 1, 0), True)])
	def test_two_step_decisions_match_least_favorable(self, regularity_pi, ranking, reject):
		estimate = population_estimate(regularity_pi, 1000)
		z = inference.simulate_gaussian_draws(estimate, 1000, 4)
		results = {
			method: inference.test_preference(estimate, Preference(ranking), settings=InferenceSettings(method=method), draws=z)
			for method in (LEAST_FAVORABLE, TWO_STEP_MS, TWO_STEP_UB)
		}
		largest = max(results[LEAST_FAVORABLE].diagnostics["studentized_moments"])
		# clear cases: nothing positive, or a moment beyond five standard deviations
		assert largest >= 5.0 if reject else largest <= 1e-9
		assert {method: r.reject for method, r in results.items()} == dict.fromkeys(results, reject)

	def test_binary_attentiveness(self, regularity_pi):
		# every binary menu sits exactly on the phi = 1/2 boundary
		estimate = population_estimate(regularity_pi, 300)
		result = inference.test_preference(estimate, Preference.identity(3), phi=0.5)
		assert result.diagnostics["n_rows"] == 6
		assert not result.reject

	def test_result_payload(self, grand3, regularity_pi):
		estimate = population_estimate(regularity_pi, 300)
		payload = inference.test_preference(estimate, Preference.identity(3)).as_dict(grand3)
		assert payload["preference"] == "a>b>c"
		assert set(payload) == {"statistic", "critical_value", "p_value", "reject", "method", "preference"}


class TestConfidenceSet:
	def test_population_confidence_set(self, grand3, regularity_pi):
		confidence = inference.confidence_set(population_estimate(regularity_pi, 1000))
		assert confidence.accepted.labels(grand3) == ["a>b>c", "a>c>b"]
		assert len(confidence.results) == 6
		assert not inference.specification_test(population_estimate(regularity_pi, 1000))

	def test_cyclic_choices_reject_the_model(self, cyclic_pi):
		estimate = population_estimate(cyclic_pi, 1000)
		assert inference.confidence_set(estimate).is_empty()
		assert inference.specification_test(estimate)

	def test_confidence_sets_nest_by_method(self, regularity_pi):
		for seed in range(20):
			estimate = estimate_choice_rule(sample_dataset(regularity_pi, n_per_menu=200, seed=seed), regularity_pi.index)
			accepted = {
				method: set(inference.confidence_set(
					estimate, settings=InferenceSettings(method=method, draws=500, seed=seed)
				).accepted.preferences)
				for method in (PLUG_IN, GMS, LEAST_FAVORABLE)
			}
			assert accepted[PLUG_IN] <= accepted[GMS] <= accepted[LEAST_FAVORABLE], seed

	def test_collection_scope(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 1000)
		settings = InferenceSettings(method=TWO_STEP_UB, draws=500, two_step_scope="collection")
		confidence = inference.confidence_set(estimate, settings=settings)
		values = {r.diagnostics["beta_critical_value"] for r in confidence.results.values()}
		assert len(values) == 1
		assert Preference.identity(3) in confidence

	def test_restricted_preferences(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 1000)
		confidence = inference.confidence_set(estimate, preferences=[Preference((1, 0, 2))])
		assert confidence.is_empty()
		with pytest.raises(ValidationError):
			inference.confidence_set(estimate, preferences=[])

	def test_collection_test(self, regularity_pi):
		estimate = population_estimate(regularity_pi, 1000)
		assert inference.collection_test(estimate, inference.prefers(B, A))
		assert not inference.collection_test(estimate, inference.prefers(A, C))
		assert not inference.collection_test(estimate, [Preference.identity(3), Preference((1, 0, 2))])
		with pytest.raises(ValidationError):
			inference.collection_test(estimate, inference.prefers(A, A))
