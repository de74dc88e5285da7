"""Monte Carlo rejection frequencies over an experiment grid.

Replication r at sample-size position i draws its data from seed
derive_seed(grid seed, i, r, 0) and its Gaussian draws from
derive_seed(grid seed, i, r, 1); every hypothesis and phi of the
replication shares both. Parallel runs reproduce sequential ones exactly.
"""

import time

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from limited_attention import hooks
from limited_attention.api.attention import build_attention, sample_dataset, synthesize_choice_rule
from limited_attention.api.constraints import constraint_matrix_for
from limited_attention.api.estimation import estimate_choice_rule
from limited_attention.api.inference import evaluate_matrix, simulate_gaussian_draws
from limited_attention.api.revelation import identified_set
from limited_attention.doctype.experiment_grid.experiment_grid import RunReport
from limited_attention.doctype.menu_index.menu_index import COMPLETE, build_menu_index
from limited_attention.exceptions import AttentionModelError
from limited_attention.utils.config import config_hash
from limited_attention.utils.logger import log_error, logger
from limited_attention.utils.seeds import derive_seed

MC_TITLE = "Monte Carlo"


def population_rule(grid):
	"""Exact choice rule of the grid's data generating process on complete data"""
	index = build_menu_index(grid.grand, COMPLETE)
	return synthesize_choice_rule(grid.dgp_preference, build_attention(grid.spec, index))


def grid_matrices(grid, index):
	"""matrices[phi position][hypothesis position]"""
	return [[constraint_matrix_for(pref, index, phi) for pref in grid.hypotheses] for phi in grid.phis]


def run_replication(rule, matrices, settings, n_idx, n, rep):
	"""(rejections, p-values) arrays of shape (phis, hypotheses); (None, None) on failure"""
	try:
		data = sample_dataset(rule, n_per_menu=n, seed=derive_seed(settings.seed, n_idx, rep, 0))
		estimate = estimate_choice_rule(data, rule.index)
		z = simulate_gaussian_draws(estimate, settings.draws, derive_seed(settings.seed, n_idx, rep, 1))

		shape = (len(matrices), len(matrices[0]))
		rejects = np.zeros(shape, dtype=bool)
		p_values = np.zeros(shape)
		for i, row in enumerate(matrices):
			for j, matrix in enumerate(row):
				result = evaluate_matrix(matrix, estimate, settings, z, matrix.pref, describe=False)
				rejects[i, j] = result.reject
				p_values[i, j] = result.p_value
		return rejects, p_values

	except AttentionModelError as e:
		log_error(f"Replication {rep} at n={n} failed: {str(e)}", MC_TITLE)
		return None, None


def run_experiment_grid(grid, n_jobs=1):
	"""Rejection frequency per (hypothesis, phi, n) cell as a RunReport"""
	started = time.perf_counter()
	rule = population_rule(grid)
	matrices = grid_matrices(grid, rule.index)
	membership = [identified_set(rule, phi=phi) for phi in grid.phis]

	logger("monte_carlo").info(
		f"Starting grid: {grid.n_cells} cells, {grid.replications} replications, n_jobs={n_jobs}"
	)
	jobs = [(n_idx, n, rep) for n_idx, n in enumerate(grid.effective_ns) for rep in range(grid.replications)]
	outcomes = Parallel(n_jobs=n_jobs)(
		delayed(run_replication)(rule, matrices, grid.settings, n_idx, n, rep) for n_idx, n, rep in jobs
	)

	names = grid.hypothesis_names()
	records = []
	failures = 0
	for n_idx, n in enumerate(grid.effective_ns):
		done = [outcomes[k] for k, job in enumerate(jobs) if job[0] == n_idx and outcomes[k][0] is not None]
		failures += grid.replications - len(done)
		if not done:
			log_error(f"Every replication at n={n} failed", MC_TITLE)
			continue
		rejects = np.mean([r for r, _ in done], axis=0)
		p_means = np.mean([p for _, p in done], axis=0)

		for i, phi in enumerate(grid.phis):
			for j, pref in enumerate(grid.hypotheses):
				rate = float(rejects[i, j])
				records.append({
					"hypothesis": names[j],
					"phi": phi,
					"n": n,
					"rejection_rate": rate,
					"mc_se": float(np.sqrt(rate * (1.0 - rate) / len(done))),
					"replications": len(done),
					"mean_p_value": float(p_means[i, j]),
					"in_identified_set": pref in membership[i],
				})

	table = pd.DataFrame.from_records(records, columns=hooks.mc_columns)
	elapsed = time.perf_counter() - started
	logger("monte_carlo").info(f"Grid finished in {elapsed:.1f}s with {failures} failed replications")
	return RunReport(table, grid.seed, config_hash(grid.as_dict()), elapsed, failures)
