"""Consistency of choice data observed on a sub-collection of menus.

For each candidate preference the observed menus get the triangular rule
of the data. Every unobserved menu S then takes, for each T strictly inside
S, the largest weight mu(T|S') over observed supersets S', with the
residual on S itself, or full attention when no observed superset exists.
The data are consistent when some preference yields a valid, monotone
extension.
"""

import numpy as np

from limited_attention.api.attention import check_monotonicity
from limited_attention.api.revelation import check_enumeration, reveal_P
from limited_attention.doctype.attention_rule.attention_rule import AttentionRule
from limited_attention.doctype.grand_set.grand_set import members
from limited_attention.doctype.menu_index.menu_index import build_menu_index
from limited_attention.doctype.preference.preference import all_preferences
from limited_attention.utils.logger import logger

MAX_CONSISTENCY_ALTERNATIVES = 6
RESIDUAL_TOLERANCE = 1e-12


def _observed_triangular(pref, rule, index):
	"""{observed menu: {lower contour set: weight}}"""
	return {
		mask: {mask & pref.lower_contour(a): rule.prob(a, mask) for a in members(mask)}
		for mask in index.menus
	}


def extend_attention(pref, rule, index, complete=None):
	"""Extension of the triangular rule of `pref` to every menu, or None if a residual is negative"""
	complete = complete or build_menu_index(index.grand)
	observed = _observed_triangular(pref, rule, index)
	values = np.zeros(complete.n_attention)

	for mask in complete.menus:
		if mask in observed:
			weights = observed[mask]
		else:
			supersets = [big for big in observed if big != mask and mask & ~big == 0]
			if not supersets:
				weights = {mask: 1.0}
			else:
				weights = {}
				for big in supersets:
					for subset, w in observed[big].items():
						if subset != mask and subset & ~mask == 0 and w > weights.get(subset, 0.0):
							weights[subset] = w
				residual = 1.0 - sum(weights.values())
				if residual < -RESIDUAL_TOLERANCE:
					return None
				weights[mask] = max(residual, 0.0)

		for subset, w in weights.items():
			values[complete.attention_col(subset, mask)] = w

	return AttentionRule(complete, values)


def limited_consistency(rule, index=None, max_alternatives=MAX_CONSISTENCY_ALTERNATIVES):
	"""(consistent, witness) with witness = (preference, extended attention rule) or None

	Candidates are taken in lexicographic order; those contradicting the
	relation revealed by nested observed menus are skipped.
	"""
	index = index or rule.index
	size = index.grand.size
	check_enumeration(size, max_alternatives, "limited_consistency")

	complete = build_menu_index(index.grand)
	revealed = reveal_P(rule, index)
	tried = 0

	for pref in all_preferences(size):
		if not pref.contains(revealed):
			continue
		tried += 1
		extension = extend_attention(pref, rule, index, complete)
		if extension is None:
			continue
		if not check_monotonicity(extension, complete):
			logger("limited_data").info(f"Consistent after {tried} candidate preferences")
			return True, (pref, extension)

	logger("limited_data").info(f"No consistent extension among {tried} candidate preferences")
	return False, None
