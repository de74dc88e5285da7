from dataclasses import dataclass, field

import numpy as np

from limited_attention.doctype.grand_set.grand_set import members
from limited_attention.exceptions import ValidationError, throw

SUM_TOLERANCE = 1e-9


@dataclass
class ValidationReport:
	"""Outcome of a rule validation: ok plus readable violations"""

	violations: list = field(default_factory=list)

	@property
	def ok(self):
		return not self.violations

	def __bool__(self):
		return self.ok

	def add(self, message):
		self.violations.append(message)


def _frozen_vector(values, length, what):
	"""Float copy of `values`, read-only, with a length check"""
	vector = np.array(values, dtype=np.float64)
	if vector.ndim != 1 or vector.shape[0] != length:
		throw(f"{what} has length {vector.size}, the index expects {length}")
	vector.flags.writeable = False
	return vector


def check_blocks(values, offsets, tolerance=SUM_TOLERANCE):
	"""Menu positions whose block sum misses 1, and negative entry positions"""
	sums = np.add.reduceat(values, offsets[:-1]) if values.size else np.zeros(0)
	bad_sums = np.flatnonzero(np.abs(sums - 1.0) > tolerance)
	negatives = np.flatnonzero(values < 0)
	return sums, bad_sums, negatives


@dataclass(frozen=True, eq=False)
class ChoiceRule:
	"""Stacked choice probabilities pi(a|S) over a menu index"""

	index: object
	values: np.ndarray

	def __post_init__(self):
		object.__setattr__(self, "values", _frozen_vector(self.values, self.index.n_choice, "Choice vector"))

	@classmethod
	def from_table(cls, index, table):
		"""Build from {menu mask: {alternative id: probability}}; missing entries are 0"""
		values = np.zeros(index.n_choice)
		for mask, probs in table.items():
			for a, p in probs.items():
				values[index.choice_col(a, mask)] = p
		return cls(index, values)

	@property
	def mode(self):
		return self.index.mode

	def block(self, mask):
		return self.values[self.index.choice_slice(mask)]

	def prob(self, a, mask):
		return float(self.values[self.index.choice_col(a, mask)])

	def to_table(self):
		return {
			mask: {a: float(p) for a, p in zip(members(mask), self.block(mask))}
			for mask in self.index.menus
		}

	def restrict(self, index):
		"""Same probabilities on a sub-collection of menus"""
		values = np.concatenate([self.block(mask) for mask in index.menus])
		return ChoiceRule(index, values)

	def validate(self):
		return validate_choice_rule(self)

	def __eq__(self, other):
		if not isinstance(other, ChoiceRule):
			return NotImplemented
		return self.index == other.index and np.array_equal(self.values, other.values)

	__hash__ = None


def validate_choice_rule(rule):
	"""Report per-menu sum deviations and negative entries of a choice rule"""
	index = rule.index
	if rule.values.shape[0] != index.n_choice:
		raise ValidationError("Choice vector length does not match the index")

	report = ValidationReport()
	sums, bad_sums, negatives = check_blocks(rule.values, index.choice_offsets)
	grand = index.grand

	for pos in bad_sums:
		report.add(f"choice probabilities in {grand.format_menu(index.menus[pos])} sum to {sums[pos]:.12g}")

	for col in negatives:
		a = grand.labels[index.choice_alt[col]]
		report.add(f"pi({a}|{grand.format_menu(int(index.choice_mask[col]))}) = {rule.values[col]:.12g} is negative")

	return report
