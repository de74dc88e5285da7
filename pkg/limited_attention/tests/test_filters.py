import numpy as np
import pytest

from limited_attention.api.attention import build_attention, is_monotone, synthesize_choice_rule
from limited_attention.api.filters import (
	decompose_random_filter,
	enumerate_triangular_filters,
	filter_to_attention,
	is_attention_filter,
	is_random_attention_filter,
)
from limited_attention.api.revelation import extract_triangular
from limited_attention.doctype.attention_rule.attention_rule import AttentionRule, triangular_violations
from limited_attention.doctype.grand_set.grand_set import GrandSet, members
from limited_attention.doctype.menu_index.menu_index import COMPLETE, LIMITED, build_menu_index
from limited_attention.doctype.preference.preference import Preference
from limited_attention.exceptions import EnumerationLimitError, IndexModeError, NotMonotoneError, NotTriangularError
from limited_attention.tests.conftest import AB, ABC, AC, BC, random_monotone_spec, random_preference_ranking


def top_two_singletons(index):
	"""Half the attention on each of the two highest ids of every menu, as singletons"""
	table = {}
	for mask in index.menus:
		top = members(mask)[-2:]
		table[mask] = {1 << a: 0.5 for a in top}
	return AttentionRule.from_table(index, table)


class TestAttentionFilters:
	def test_full_attention_is_a_filter(self, index3):
		assert is_attention_filter({mask: mask for mask in index3.menus}, index3)

	def test_ignored_alternative_leaves_set_unchanged(self, index3):
		mapping = {ABC: AB, AB: AB, AC: AC, BC: BC}
		assert is_attention_filter(mapping, index3)
		mapping[AB] = 0b001
		assert not is_attention_filter(mapping, index3)

	def test_point_mass_rule(self, index3):
		rule = filter_to_attention({ABC: AB, AB: AB, AC: AC, BC: BC}, index3)
		assert rule.support(ABC) == [(AB, 1.0)]
		assert rule.validate().ok

	def test_two_alternatives(self):
		index = build_menu_index(GrandSet.numbered(2), COMPLETE)
		assert enumerate_triangular_filters(Preference.identity(2), index) == [(0b10,), (0b11,)]

	def test_enumerated_filters_are_filters(self, index3):
		pref = Preference.identity(3)
		filters = enumerate_triangular_filters(pref, index3)
		assert filters == sorted(filters)
		for gamma in filters:
			mapping = dict(zip(index3.menus, gamma))
			assert is_attention_filter(mapping, index3)
			filter_to_attention(mapping, index3, pref)

	def test_enumeration_limits(self, grand3):
		with pytest.raises(EnumerationLimitError):
			enumerate_triangular_filters(Preference.identity(6), build_menu_index(GrandSet.numbered(6), COMPLETE))
		with pytest.raises(IndexModeError):
			enumerate_triangular_filters(Preference.identity(3), build_menu_index(grand3, LIMITED, [ABC, AB]))


class TestDecomposition:
	@pytest.mark.parametrize("size", [3, 4])
	def test_monotone_triangular_rules_decompose(self, rng, size):
		index = build_menu_index(GrandSet.numbered(size), COMPLETE)
		for _ in range(25):
			pref = Preference(random_preference_ranking(rng, size))
			pi = synthesize_choice_rule(pref, build_attention(random_monotone_spec(rng, size), index))
			rule = extract_triangular(pref, pi)

			mixture = decompose_random_filter(rule)
			assert abs(mixture.weights.sum() - 1.0) <= 1e-10
			assert (mixture.weights > 0).all()
			assert np.abs(mixture.to_attention().values - rule.values).max() <= 1e-8
			for gamma, _ in mixture.components():
				assert is_attention_filter(gamma, index)
				assert not triangular_violations(filter_to_attention(gamma, index), pref)

	def test_regularity_example(self, index3, regularity_mu_table):
		pref = Preference.identity(3)
		rule = AttentionRule.from_table(index3, regularity_mu_table, triangular_for=pref)
		assert is_random_attention_filter(rule)
		np.testing.assert_allclose(decompose_random_filter(rule).to_attention().values, rule.values, atol=1e-8)

	def test_monotone_rule_off_the_contour_sets(self):
		index = build_menu_index(GrandSet.numbered(4), COMPLETE)
		rule = top_two_singletons(index)
		assert is_monotone(rule)
		with pytest.raises(NotTriangularError):
			decompose_random_filter(rule, pref=Preference.identity(4))
		assert not is_random_attention_filter(rule, Preference.identity(4))

	def test_not_monotone(self, index3):
		table = {ABC: {0b100: 1.0}, AB: {AB: 1.0}, AC: {AC: 1.0}, BC: {BC: 1.0}}
		rule = AttentionRule.from_table(index3, table, triangular_for=Preference.identity(3))
		with pytest.raises(NotMonotoneError):
			decompose_random_filter(rule)
		assert not is_random_attention_filter(rule)

	def test_needs_a_preference(self, index3, regularity_mu_table):
		with pytest.raises(NotTriangularError):
			decompose_random_filter(AttentionRule.from_table(index3, regularity_mu_table))
