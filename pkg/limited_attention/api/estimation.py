import numpy as np
from scipy.linalg import block_diag

from limited_attention.doctype.choice_rule.choice_rule import ChoiceRule
from limited_attention.doctype.estimated_choice.estimated_choice import EstimatedChoice
from limited_attention.doctype.menu_index.menu_index import LIMITED, build_menu_index
from limited_attention.exceptions import EstimationError, NumericalError, throw
from limited_attention.utils.logger import logger

VARIANCE_TOLERANCE = 1e-12


def estimate_choice_rule(data, index=None, min_count=1):
	"""Count-ratio estimate pi_hat(a|S) = #(a chosen from S) / N_S

	Without an index, a limited index over the observed menus is used.
	Complete mode needs every menu observed. In limited mode, menus with
	fewer than `min_count` observations are dropped with a warning.
	"""
	counts = data.menu_counts()
	if index is None:
		index = build_menu_index(data.grand, LIMITED, list(counts))

	if index.is_complete:
		missing = [mask for mask in index.menus if counts.get(mask, 0) == 0]
		if missing:
			throw(f"Menu {index.grand.format_menu(missing[0])} has no observations: "
				"switch to limited mode or supply data", EstimationError)
	else:
		kept = [mask for mask in index.menus if counts.get(mask, 0) >= max(min_count, 1)]
		dropped = len(index.menus) - len(kept)
		if dropped:
			logger("estimation").warning(f"Dropped {dropped} menus with fewer than {min_count} observations")
		if not kept:
			throw("No menu has enough observations to estimate", EstimationError)
		if dropped:
			index = build_menu_index(index.grand, LIMITED, kept)

	# Observations on menus outside the index are not used
	in_index = index.mask_position[data.menus] >= 0
	unused = int((~in_index).sum())
	if unused:
		logger("estimation").warning(f"Ignoring {unused} observations on menus outside the index")

	cols = index.choice_cols(data.choices[in_index], data.menus[in_index])
	chosen = np.bincount(cols, minlength=index.n_choice).astype(np.float64)
	n_per_menu = np.array([counts[mask] for mask in index.menus], dtype=np.int64)
	pi_hat = chosen / n_per_menu[index.choice_menu]

	return EstimatedChoice(ChoiceRule(index, pi_hat), n_per_menu)


def population_estimate(rule, n_per_menu):
	"""EstimatedChoice carrying a known choice rule and design counts"""
	counts = np.broadcast_to(np.asarray(n_per_menu, dtype=np.int64), (len(rule.index.menus),))
	return EstimatedChoice(rule, counts)


def studentize_sd(matrix, estimate):
	"""Per-row sd sqrt(diag(R Omega R')) from the two stored entries of each row"""
	if matrix.n_cols != estimate.index.n_choice:
		throw("Constraint matrix and estimate use different layouts")
	if matrix.n_rows == 0:
		return np.zeros(0)

	c1, c2 = matrix.cols[:, 0], matrix.cols[:, 1]
	v1, v2 = matrix.coefs[:, 0], matrix.coefs[:, 1]
	variance = (
		v1 ** 2 * estimate.covariance(c1, c1)
		+ v2 ** 2 * estimate.covariance(c2, c2)
		+ 2.0 * v1 * v2 * estimate.covariance(c1, c2)
	)
	if (variance < -VARIANCE_TOLERANCE).any():
		row = int(np.argmin(variance))
		throw(f"Row {row} has negative variance {variance[row]:.3g}", NumericalError)
	return np.sqrt(np.clip(variance, 0.0, None))


def omega_dense(estimate):
	"""Full block-diagonal covariance matrix (for checks and small problems)"""
	return block_diag(*estimate.omega_blocks())
