"""Timing of constraint construction and critical-value simulation."""

import time
from itertools import islice

import pandas as pd

from limited_attention import hooks
from limited_attention.api.attention import build_attention, sample_dataset, synthesize_choice_rule
from limited_attention.api.constraints import build_R, permute_R
from limited_attention.api.estimation import estimate_choice_rule
from limited_attention.api.inference import evaluate_matrix, simulate_gaussian_draws
from limited_attention.doctype.attention_model_spec.attention_model_spec import LogitWeights
from limited_attention.doctype.grand_set.grand_set import GrandSet
from limited_attention.doctype.inference_settings.inference_settings import InferenceSettings
from limited_attention.doctype.menu_index.menu_index import COMPLETE, build_menu_index
from limited_attention.doctype.preference.preference import Preference, all_preferences
from limited_attention.exceptions import AttentionModelError
from limited_attention.utils.logger import log_error, logger

DEFAULT_COUNTS = (1, 5, 10, 20, 50, 100, 400, 720)


def synthetic_estimate(size, n_per_menu, seed):
	"""Estimate from complete data drawn under logit attention with varsigma = 2"""
	index = build_menu_index(GrandSet.numbered(size), COMPLETE)
	rule = synthesize_choice_rule(Preference.identity(size), build_attention(LogitWeights(varsigma=2.0), index))
	return estimate_choice_rule(sample_dataset(rule, n_per_menu=n_per_menu, seed=seed), index)


def time_preferences(estimate, count, settings):
	"""(constraint seconds, simulation seconds) for the first `count` preferences"""
	index = estimate.index
	preferences = list(islice(all_preferences(index.grand.size), count))

	started = time.perf_counter()
	base = build_R(preferences[0], index)
	matrices = [permute_R(base, pref, index) for pref in preferences]
	constraint_seconds = time.perf_counter() - started

	started = time.perf_counter()
	z = simulate_gaussian_draws(estimate, settings.draws, settings.seed)
	for pref, matrix in zip(preferences, matrices):
		evaluate_matrix(matrix, estimate, settings, z, pref, describe=False)
	simulation_seconds = time.perf_counter() - started
	return constraint_seconds, simulation_seconds


def run_benchmark(size=6, counts=DEFAULT_COUNTS, draws=2000, seed=20170101, n_per_menu=221):
	"""Seconds per preference count as a DataFrame with the bench columns"""
	settings = InferenceSettings(draws=draws, seed=seed)
	estimate = synthetic_estimate(size, n_per_menu, seed)
	logger("benchmark").info(f"Benchmark on K={size}, N={estimate.n_total}, M={draws}")

	records = []
	for count in counts:
		try:
			constraint_seconds, simulation_seconds = time_preferences(estimate, int(count), settings)
		except AttentionModelError as e:
			log_error(f"Benchmark with {count} preferences failed: {str(e)}", "Benchmark")
			continue
		records.append({
			"preferences": int(count),
			"constraint_seconds": constraint_seconds,
			"simulation_seconds": simulation_seconds,
			"total_seconds": constraint_seconds + simulation_seconds,
		})
		logger("benchmark").info(f"{count} preferences: {constraint_seconds + simulation_seconds:.2f}s")

	return pd.DataFrame.from_records(records, columns=hooks.bench_columns)
