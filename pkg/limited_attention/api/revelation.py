import numpy as np

from limited_attention.api.attention import is_monotone
from limited_attention.api.constraints import augment_R_binary, build_R, check_phi, constraint_matrix_for, permute_R
from limited_attention.doctype.attention_rule.attention_rule import AttentionRule
from limited_attention.doctype.binary_relation.binary_relation import BinaryRelation, has_cycle, transitive_closure
from limited_attention.doctype.grand_set.grand_set import members
from limited_attention.doctype.identified_set.identified_set import IdentifiedSet
from limited_attention.doctype.preference.preference import all_preferences, count_preferences
from limited_attention.exceptions import EnumerationLimitError, throw
from limited_attention.utils.logger import logger

POPULATION_TOLERANCE = 1e-10
MAX_IDENTIFIED_SET_ALTERNATIVES = 8


def reveal_P(rule, index=None, tolerance=POPULATION_TOLERANCE):
	"""a P b iff pi(a|S) > pi(a|S-b) + tolerance for some menu S holding a and b

	Limited mode only compares menus S and S-b that are both observed.
	"""
	index = index or rule.index
	edges = np.zeros((index.grand.size, index.grand.size), dtype=bool)
	for mask in index.menus:
		ids = members(mask)
		if len(ids) < 3:
			continue
		for b in ids:
			reduced = mask & ~(1 << b)
			if not index.has(reduced):
				continue
			for a in ids:
				if a != b and rule.prob(a, mask) > rule.prob(a, reduced) + tolerance:
					edges[a, b] = True
	return BinaryRelation(edges)


def reveal_P_phi(rule, phi, tolerance=POPULATION_TOLERANCE, index=None):
	"""a P^phi b iff pi(a|{a,b}) > phi + tolerance"""
	phi = check_phi(phi)
	index = index or rule.index
	edges = np.zeros((index.grand.size, index.grand.size), dtype=bool)
	for mask in index.binary_menus():
		a, b = members(mask)
		if rule.prob(a, mask) > phi + tolerance:
			edges[a, b] = True
		if rule.prob(b, mask) > phi + tolerance:
			edges[b, a] = True
	return BinaryRelation(edges)


def revealed_relation(rule, index=None, phi=None, tolerance=POPULATION_TOLERANCE):
	"""P, or P^phi union P when phi is given"""
	relation = reveal_P(rule, index, tolerance)
	if phi is not None:
		relation = relation | reveal_P_phi(rule, phi, tolerance, index)
	return relation


def is_ram(rule, index=None, phi=None, tolerance=POPULATION_TOLERANCE):
	"""Acyclicity of P (or of P^phi union P)"""
	index = index or rule.index
	index.require_complete("is_ram (use limited_consistency for observed menus)")
	return not has_cycle(revealed_relation(rule, index, phi, tolerance))


def check_enumeration(size, limit, operation):
	if size > limit:
		throw(f"{operation} enumerates {size}! preferences; at most {limit} alternatives supported",
			EnumerationLimitError)


def identified_set(rule, index=None, phi=None, tolerance=POPULATION_TOLERANCE):
	"""Preferences whose constraint matrix satisfies R @ pi <= tolerance"""
	index = index or rule.index
	size = index.grand.size
	check_enumeration(size, MAX_IDENTIFIED_SET_ALTERNATIVES, "identified_set")
	phi = check_phi(phi)
	augment = phi is not None and phi < 1.0

	accepted = []
	base = None
	for pref in all_preferences(size):
		if index.is_complete:
			# Relabel one matrix instead of rebuilding per preference
			if base is None:
				base = build_R(pref, index)
			matrix = permute_R(base, pref, index)
			if augment:
				matrix = augment_R_binary(matrix, pref, phi, index)
		else:
			matrix = constraint_matrix_for(pref, index, phi)
		if (matrix.dot(rule.values) <= tolerance).all():
			accepted.append(pref)

	logger("revelation").info(f"Identified set holds {len(accepted)} of {count_preferences(size)} preferences")
	return IdentifiedSet(tuple(accepted), phi)


def extract_triangular(pref, rule, index=None):
	"""Triangular attention rule mu(L(a) & S | S) = pi(a|S)"""
	index = index or rule.index
	values = np.zeros(index.n_attention)
	for mask in index.menus:
		for a in members(mask):
			values[index.attention_col(mask & pref.lower_contour(a), mask)] = rule.prob(a, mask)
	return AttentionRule(index, values, triangular_for=pref)


def ram_by_triangular_route(rule, index=None, tolerance=POPULATION_TOLERANCE):
	"""Identified set via P_R: preferences extending P_R whose triangular rule is monotone"""
	index = index or rule.index
	index.require_complete("ram_by_triangular_route")
	check_enumeration(index.grand.size, MAX_IDENTIFIED_SET_ALTERNATIVES, "ram_by_triangular_route")

	closure = transitive_closure(reveal_P(rule, index, tolerance))
	if has_cycle(closure):
		return IdentifiedSet((), None)

	accepted = [
		pref for pref in all_preferences(index.grand.size)
		if pref.contains(closure) and is_monotone(extract_triangular(pref, rule, index))
	]
	return IdentifiedSet(tuple(accepted), None)
