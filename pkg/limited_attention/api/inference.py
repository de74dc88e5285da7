"""Moment-inequality inference for candidate preferences.

For a preference with constraint matrix R and estimate pi_hat, the test
statistic is sqrt(N) * max((R pi_hat) / sigma, 0). Critical values come
from Gaussian draws z* with covariance Omega/N, shared by every preference
tested on the same data, recentred according to the chosen method.
"""

import math

import numpy as np
from scipy.linalg import eigh

from limited_attention.api.constraints import augment_R_binary, build_R, check_phi, constraint_matrix_for, permute_R
from limited_attention.api.estimation import estimate_choice_rule, studentize_sd
from limited_attention.api.revelation import MAX_IDENTIFIED_SET_ALTERNATIVES, check_enumeration
from limited_attention.doctype.estimated_choice.estimated_choice import EstimatedChoice
from limited_attention.doctype.identified_set.identified_set import IdentifiedSet
from limited_attention.doctype.inference_settings.inference_settings import (
	GMS,
	LEAST_FAVORABLE,
	PLUG_IN,
	TWO_STEP_MS,
	TWO_STEP_UB,
	InferenceSettings,
)
from limited_attention.doctype.preference.preference import all_preferences
from limited_attention.doctype.test_result.test_result import ConfidenceSet, TestResult
from limited_attention.exceptions import NumericalError, ValidationError, throw
from limited_attention.utils.logger import logger
from limited_attention.utils.seeds import make_rng

PSD_TOLERANCE = 1e-10
QUANTILE_SLACK = 1e-9
WORST_ROWS = 5


def as_estimate(data, index=None):
	"""EstimatedChoice from a dataset, or the estimate itself"""
	if isinstance(data, EstimatedChoice):
		return data
	return estimate_choice_rule(data, index)


def max_statistic(moments, sigma, n_total, sigma_floor):
	"""(statistic, floored sigma, studentized moments) for moments R @ pi_hat"""
	moments = np.asarray(moments, dtype=np.float64)
	sigma = np.asarray(sigma, dtype=np.float64)
	if sigma_floor == 0:
		hazard = (sigma == 0) & (moments > 0)
		if hazard.any():
			throw(f"Row {int(np.flatnonzero(hazard)[0])} has zero sigma and a positive moment", NumericalError)

	sigma_tilde = np.maximum(sigma, sigma_floor)
	with np.errstate(divide="ignore", invalid="ignore"):
		studentized = np.where(sigma_tilde > 0, moments / sigma_tilde, 0.0)
	statistic = math.sqrt(n_total) * max(float(studentized.max(initial=0.0)), 0.0)
	return statistic, sigma_tilde, studentized


def test_statistic(matrix, estimate, sigma_floor=1e-6):
	"""(T, sigma_hat) with T = sqrt(N) * max((R pi_hat) / max(sigma_hat, floor), 0)"""
	sigma_hat = studentize_sd(matrix, estimate)
	statistic, _, _ = max_statistic(matrix.dot(estimate.pi_hat.values), sigma_hat, estimate.n_total, sigma_floor)
	return statistic, sigma_hat


def psd_root(block):
	"""Symmetric square root of a PSD block, negative eigenvalues clipped at 0"""
	values, vectors = eigh(block)
	scale = max(1.0, float(np.abs(values).max(initial=0.0)))
	if values.size and values.min() < -PSD_TOLERANCE * scale:
		throw(f"Covariance block has eigenvalue {values.min():.3g}", NumericalError)
	return vectors * np.sqrt(np.clip(values, 0.0, None))


def simulate_gaussian_draws(estimate, draws, seed):
	"""M x n matrix of z* ~ N(0, Omega/N), drawn menu by menu

	The stream of menu position p is seeded by (seed, 2, p) so draws do not
	depend on evaluation order.
	"""
	if int(draws) < 1:
		throw(f"Need at least one simulation draw, got {draws}")
	index = estimate.index
	z = np.zeros((int(draws), index.n_choice))
	for pos in range(len(index.menus)):
		lo, hi = int(index.choice_offsets[pos]), int(index.choice_offsets[pos + 1])
		root = psd_root(estimate.omega_block(pos) / estimate.n_total)
		rng = make_rng(seed, 2, pos)
		z[:, lo:hi] = rng.standard_normal((int(draws), hi - lo)) @ root.T
	return z


def empirical_quantile(values, level):
	"""Smallest draw t with a share of draws <= t of at least `level`"""
	ordered = np.sort(np.asarray(values, dtype=np.float64))
	rank = math.ceil(level * ordered.size - QUANTILE_SLACK)
	rank = min(max(rank, 1), ordered.size)
	return float(ordered[rank - 1])


def _max_draws(shifted, root_n):
	"""sqrt(N) * max(max over rows, 0) for each draw"""
	if shifted.shape[1] == 0:
		return np.zeros(shifted.shape[0])
	return root_n * np.maximum(shifted.max(axis=1), 0.0)


def _studentized_draws(matrix, z, sigma_tilde):
	with np.errstate(divide="ignore", invalid="ignore"):
		return np.where(sigma_tilde > 0, matrix.dot(z) / sigma_tilde, 0.0)


def first_step_critical_value(z_student, settings, root_n):
	"""Least-favorable critical value at level 1 - beta"""
	return empirical_quantile(_max_draws(z_student, root_n), 1.0 - settings.beta_value)


def _critical_value(studentized, z_student, settings, n_total, beta_critical=None):
	"""(c_alpha, draws, info) for studentized moments and studentized draws"""
	root_n = math.sqrt(n_total)
	method = settings.method
	level = 1.0 - settings.alpha
	info = {"method": method}

	if method == LEAST_FAVORABLE:
		draws = _max_draws(z_student, root_n)
	elif method == PLUG_IN:
		draws = _max_draws(z_student + np.minimum(studentized, 0.0), root_n)
	elif method == GMS:
		kappa = settings.kappa_for(n_total)
		info["kappa"] = kappa
		draws = _max_draws(z_student + np.minimum(studentized, 0.0) / kappa, root_n)
	else:
		if beta_critical is None:
			beta_critical = first_step_critical_value(z_student, settings, root_n)
		info["beta"] = settings.beta_value
		info["beta_critical_value"] = beta_critical
		if method == TWO_STEP_MS:
			active = root_n * studentized >= -2.0 * beta_critical
			info["active_rows"] = np.flatnonzero(active).tolist()
			draws = _max_draws(z_student[:, active], root_n)
			level = 1.0 - settings.alpha + 2.0 * settings.beta_value
		elif method == TWO_STEP_UB:
			draws = _max_draws(z_student + np.minimum(studentized + beta_critical / root_n, 0.0), root_n)
			level = 1.0 - settings.alpha + settings.beta_value
		else:
			raise ValidationError(f"Unknown method '{method}'")

	info["level"] = level
	return empirical_quantile(draws, level), draws, info


def simulate_critical_value(matrix, estimate, settings=None, draws=None):
	"""(c_alpha, simulated statistics) for a constraint matrix"""
	settings = settings or InferenceSettings()
	z = draws if draws is not None else simulate_gaussian_draws(estimate, settings.draws, settings.seed)
	sigma_hat = studentize_sd(matrix, estimate)
	_, sigma_tilde, studentized = max_statistic(
		matrix.dot(estimate.pi_hat.values), sigma_hat, estimate.n_total, settings.sigma_floor
	)
	critical, simulated, _ = _critical_value(
		studentized, _studentized_draws(matrix, z, sigma_tilde), settings, estimate.n_total
	)
	return critical, simulated


def evaluate_matrix(matrix, estimate, settings, z, pref=None, beta_critical=None, describe=True):
	"""TestResult of one constraint matrix against shared draws

	With `describe`, diagnostics carry the sqrt(N)-scaled studentized
	moments and a readable form of the largest ones.
	"""
	sigma_hat = studentize_sd(matrix, estimate)
	statistic, sigma_tilde, studentized = max_statistic(
		matrix.dot(estimate.pi_hat.values), sigma_hat, estimate.n_total, settings.sigma_floor
	)
	z_student = _studentized_draws(matrix, z, sigma_tilde)
	critical, simulated, info = _critical_value(studentized, z_student, settings, estimate.n_total, beta_critical)
	info.update({"n_total": estimate.n_total, "n_rows": matrix.n_rows})

	if describe:
		root_moments = math.sqrt(estimate.n_total) * studentized
		grand = estimate.index.grand
		worst = np.argsort(-root_moments, kind="stable")[:WORST_ROWS]
		info["studentized_moments"] = root_moments.tolist()
		info["worst_rows"] = [
			{"row": int(i), "moment": float(root_moments[i]), "constraint": matrix.describe_row(int(i), grand)}
			for i in worst
		]

	return TestResult(
		statistic=statistic,
		critical_value=critical,
		p_value=float(np.mean(simulated > statistic)),
		reject=bool(statistic > critical),
		method=settings.method,
		preference=pref,
		diagnostics=info,
	)


def test_preference(data, pref, index=None, phi=None, settings=None, draws=None):
	"""Test H0: the data come from a RAM with preference `pref`"""
	settings = settings or InferenceSettings()
	estimate = as_estimate(data, index)
	matrix = constraint_matrix_for(pref, estimate.index, phi)
	z = draws if draws is not None else simulate_gaussian_draws(estimate, settings.draws, settings.seed)
	return evaluate_matrix(matrix, estimate, settings, z, pref)


def _matrices(preferences, index, phi):
	"""Constraint matrix per preference, relabelling one complete-data matrix"""
	phi = check_phi(phi)
	augment = phi is not None and phi < 1.0
	base = None
	for pref in preferences:
		if index.is_complete:
			if base is None:
				base = build_R(pref, index)
			matrix = permute_R(base, pref, index)
			if augment:
				matrix = augment_R_binary(matrix, pref, phi, index)
		else:
			matrix = constraint_matrix_for(pref, index, phi)
		yield pref, matrix


def _collection_beta_critical(matrices, estimate, settings, z):
	"""Largest first-step critical value over a collection"""
	root_n = math.sqrt(estimate.n_total)
	largest = 0.0
	for _, matrix in matrices:
		sigma_tilde = np.maximum(studentize_sd(matrix, estimate), settings.sigma_floor)
		largest = max(largest, first_step_critical_value(_studentized_draws(matrix, z, sigma_tilde), settings, root_n))
	return largest


def confidence_set(data, index=None, phi=None, settings=None, preferences=None):
	"""Preferences not rejected, with every TestResult

	All preferences share one set of Gaussian draws.
	"""
	settings = settings or InferenceSettings()
	estimate = as_estimate(data, index)
	size = estimate.index.grand.size
	check_enumeration(size, MAX_IDENTIFIED_SET_ALTERNATIVES, "confidence_set")

	preferences = list(preferences) if preferences is not None else list(all_preferences(size))
	if not preferences:
		throw("No preferences to test")

	z = simulate_gaussian_draws(estimate, settings.draws, settings.seed)
	matrices = list(_matrices(preferences, estimate.index, phi))

	beta_critical = None
	if settings.method in (TWO_STEP_MS, TWO_STEP_UB) and settings.two_step_scope == "collection":
		beta_critical = _collection_beta_critical(matrices, estimate, settings, z)

	results = {}
	for pref, matrix in matrices:
		results[pref] = evaluate_matrix(matrix, estimate, settings, z, pref, beta_critical)

	accepted = IdentifiedSet(tuple(p for p, r in results.items() if not r.reject), check_phi(phi))
	logger("inference").info(f"Confidence set keeps {len(accepted)} of {len(results)} preferences")
	return ConfidenceSet(accepted, results)


def specification_test(data, index=None, phi=None, settings=None):
	"""Reject the model iff the confidence set is empty"""
	return confidence_set(data, index, phi, settings).is_empty()


def prefers(a, b):
	"""Predicate selecting preferences that rank a above b"""
	return lambda pref: pref.prefers(a, b)


def collection_test(data, collection, index=None, phi=None, settings=None):
	"""Reject iff no preference of the collection is in the confidence set

	`collection` is a list of preferences or a predicate on preferences.
	"""
	estimate = as_estimate(data, index)
	size = estimate.index.grand.size
	if callable(collection):
		check_enumeration(size, MAX_IDENTIFIED_SET_ALTERNATIVES, "collection_test")
		members = [pref for pref in all_preferences(size) if collection(pref)]
	else:
		members = list(collection)
	if not members:
		throw("The collection of preferences is empty")
	return confidence_set(estimate, phi=phi, settings=settings, preferences=members).is_empty()
