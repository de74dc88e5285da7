from dataclasses import dataclass
from typing import Optional

import numpy as np

from limited_attention.doctype.choice_rule.choice_rule import ValidationReport, _frozen_vector, check_blocks
from limited_attention.doctype.grand_set.grand_set import submasks
from limited_attention.exceptions import NotTriangularError, ValidationError, throw

SUPPORT_TOLERANCE = 1e-15


@dataclass(frozen=True, eq=False)
class AttentionRule:
	"""Stacked consideration-set probabilities mu(T|S) over a menu index

	When `triangular_for` is set, weight sits only on lower contour sets
	L(a) & S of that preference.
	"""

	index: object
	values: np.ndarray
	triangular_for: Optional[object] = None

	def __post_init__(self):
		object.__setattr__(self, "values", _frozen_vector(self.values, self.index.n_attention, "Attention vector"))
		if self.triangular_for is not None:
			off = triangular_violations(self, self.triangular_for)
			if off:
				throw(f"Attention rule is not triangular: {off[0]}", NotTriangularError)

	@classmethod
	def from_table(cls, index, table, triangular_for=None):
		"""Build from {menu mask: {subset mask: weight}}; missing entries are 0"""
		values = np.zeros(index.n_attention)
		for mask, weights in table.items():
			for subset, w in weights.items():
				values[index.attention_col(subset, mask)] = w
		return cls(index, values, triangular_for)

	@property
	def mode(self):
		return self.index.mode

	def block(self, mask):
		return self.values[self.index.attention_slice(mask)]

	def weight(self, subset, mask):
		return float(self.values[self.index.attention_col(subset, mask)])

	def support(self, mask):
		"""(subset, weight) pairs with positive weight"""
		return [(t, float(w)) for t, w in zip(submasks(mask), self.block(mask)) if w > SUPPORT_TOLERANCE]

	def to_table(self):
		return {mask: dict(self.support(mask)) for mask in self.index.menus}

	def validate(self):
		return validate_attention_rule(self)

	def __eq__(self, other):
		if not isinstance(other, AttentionRule):
			return NotImplemented
		return self.index == other.index and np.array_equal(self.values, other.values)

	__hash__ = None


def triangular_violations(rule, pref):
	"""Readable list of weights placed off the lower contour sets of `pref`"""
	grand = rule.index.grand
	found = []
	for mask in rule.index.menus:
		allowed = {mask & pref.lower_contour(a) for a in pref.sorted_members(mask)}
		for subset, w in rule.support(mask):
			if subset not in allowed:
				found.append(f"mu({grand.format_menu(subset)}|{grand.format_menu(mask)}) = {w:.6g}")
	return found


def validate_attention_rule(rule):
	"""Report per-menu sum deviations and negative entries of an attention rule"""
	index = rule.index
	if rule.values.shape[0] != index.n_attention:
		raise ValidationError("Attention vector length does not match the index")

	report = ValidationReport()
	sums, bad_sums, negatives = check_blocks(rule.values, index.attention_offsets)
	grand = index.grand

	for pos in bad_sums:
		report.add(f"attention weights in {grand.format_menu(index.menus[pos])} sum to {sums[pos]:.12g}")

	for col in negatives:
		mask = index.menus[index.attention_menu[col]]
		subset = int(index.attention_subset[col])
		report.add(f"mu({grand.format_menu(subset)}|{grand.format_menu(mask)}) = {rule.values[col]:.12g} is negative")

	return report
