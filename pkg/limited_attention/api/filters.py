"""Attention filters: enumeration and decomposition of triangular rules.

A filter is a deterministic map Gamma with Gamma(S) a subset of S such that
removing an ignored alternative leaves the consideration set unchanged. A
monotone rule that is triangular for a preference is a mixture of filters
that are triangular for the same preference; the mixing law is found as a
linear feasibility problem over all such filters.
"""

import numpy as np
from scipy.optimize import linprog

from limited_attention.api.attention import check_monotonicity
from limited_attention.doctype.attention_rule.attention_rule import AttentionRule, triangular_violations
from limited_attention.doctype.grand_set.grand_set import members, popcount
from limited_attention.doctype.identified_set.identified_set import FilterMixture
from limited_attention.exceptions import (
	DecompositionError,
	EnumerationLimitError,
	NotMonotoneError,
	NotTriangularError,
	throw,
)
from limited_attention.utils.logger import logger

MAX_FILTER_ALTERNATIVES = 5
MAX_DECOMPOSITION_ALTERNATIVES = 4
RECONSTRUCTION_TOLERANCE = 1e-8
SUPPORT_THRESHOLD = 1e-12

_filter_cache = {}


def is_attention_filter(mapping, index):
	"""a not in Gamma(S) implies Gamma(S - a) = Gamma(S), over menus of the index"""
	for mask in index.menus:
		subset = mapping[mask]
		if subset <= 0 or subset & ~mask:
			return False
		for a in members(mask & ~subset):
			reduced = mask & ~(1 << a)
			if popcount(reduced) >= 2 and index.has(reduced) and mapping[reduced] != subset:
				return False
	return True


def filter_to_attention(mapping, index, pref=None):
	"""Point-mass attention rule of a filter"""
	values = np.zeros(index.n_attention)
	for mask in index.menus:
		values[index.attention_col(mapping[mask], mask)] = 1.0
	return AttentionRule(index, values, triangular_for=pref)


def enumerate_triangular_filters(pref, index):
	"""Every filter with Gamma(S) = L(a) & S for some a in S, canonical order

	Menus are filled from the smallest up so each choice only has to agree
	with the already fixed smaller menus. Results are tuples aligned with
	``index.menus``, sorted lexicographically.
	"""
	index.require_complete("enumerate_triangular_filters")
	if index.grand.size > MAX_FILTER_ALTERNATIVES:
		throw(f"Filter enumeration supports at most {MAX_FILTER_ALTERNATIVES} alternatives", EnumerationLimitError)

	key = (index, pref)
	if key in _filter_cache:
		return _filter_cache[key]

	order = sorted(index.menus, key=popcount)
	candidates = {mask: [mask & pref.lower_contour(a) for a in pref.sorted_members(mask)] for mask in order}
	chosen = {}
	found = []

	def extend(depth):
		if depth == len(order):
			found.append(tuple(chosen[mask] for mask in index.menus))
			return
		mask = order[depth]
		for subset in candidates[mask]:
			consistent = True
			for a in members(mask & ~subset):
				reduced = mask & ~(1 << a)
				if popcount(reduced) >= 2 and chosen[reduced] != subset:
					consistent = False
					break
			if consistent:
				chosen[mask] = subset
				extend(depth + 1)
		chosen.pop(mask, None)

	extend(0)
	found.sort()
	_filter_cache[key] = found
	logger("filters").info(f"Enumerated {len(found)} triangular filters over {len(index.menus)} menus")
	return found


def decompose_random_filter(rule, index=None, pref=None, max_alternatives=MAX_DECOMPOSITION_ALTERNATIVES):
	"""Write a monotone triangular rule as a mixture of triangular filters"""
	index = index or rule.index
	pref = pref or rule.triangular_for
	if pref is None:
		throw("Attention rule is not triangular: no preference given", NotTriangularError)
	if index.grand.size > max_alternatives:
		throw(f"Decomposition supports at most {max_alternatives} alternatives", EnumerationLimitError)

	off = triangular_violations(rule, pref)
	if off:
		throw(f"Attention rule is not triangular: {off[0]}", NotTriangularError)
	violations = check_monotonicity(rule, index)
	if violations:
		throw(f"Attention rule is not monotone: {len(violations)} violations", NotMonotoneError)

	filters = enumerate_triangular_filters(pref, index)

	# One equation per (menu, lower contour set)
	row_of = {}
	for mask in index.menus:
		for a in members(mask):
			row_of[(mask, mask & pref.lower_contour(a))] = len(row_of)
	A = np.zeros((len(row_of), len(filters)))
	for j, gamma in enumerate(filters):
		for mask, subset in zip(index.menus, gamma):
			A[row_of[(mask, subset)], j] = 1.0
	b = np.array([rule.weight(subset, mask) for (mask, subset) in row_of])

	result = linprog(
		np.zeros(len(filters)), A_eq=A, b_eq=b, bounds=(0, None), method="highs",
		options={"primal_feasibility_tolerance": 1e-10},
	)
	if result.status != 0 or result.x is None:
		throw(f"Filter decomposition LP failed: {result.message}", DecompositionError)

	weights = _polish(A, b, result.x)
	support = np.flatnonzero(weights > 0)
	mixture = FilterMixture(index, pref, tuple(filters[j] for j in support), weights[support])

	error = np.abs(mixture.to_attention().values - rule.values).max()
	if error > RECONSTRUCTION_TOLERANCE:
		throw(f"Filter decomposition misses the rule by {error:.3g}", DecompositionError)
	return mixture


def _polish(A, b, x):
	"""Re-solve the equations on the LP support to remove solver slack"""
	support = np.flatnonzero(x > SUPPORT_THRESHOLD)
	refined, *_ = np.linalg.lstsq(A[:, support], b, rcond=None)
	weights = np.zeros_like(x)
	if (refined >= -SUPPORT_THRESHOLD).all():
		weights[support] = np.clip(refined, 0.0, None)
	else:
		weights[support] = x[support]
	weights[weights <= SUPPORT_THRESHOLD] = 0.0
	return weights / weights.sum()


def is_random_attention_filter(rule, pref=None, index=None):
	"""True when the rule is a mixture of filters triangular for `pref`"""
	try:
		decompose_random_filter(rule, index, pref)
	except (NotTriangularError, NotMonotoneError):
		return False
	return True
