from dataclasses import dataclass
from typing import Optional

import numpy as np

from limited_attention.doctype.attention_rule.attention_rule import AttentionRule
from limited_attention.exceptions import throw

WEIGHT_SUM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class IdentifiedSet:
	"""Preferences compatible with a choice rule, in lexicographic ranking order"""

	preferences: tuple
	phi: Optional[float] = None

	def __post_init__(self):
		object.__setattr__(self, "preferences", tuple(sorted(self.preferences, key=lambda p: p.ranking)))
		self.validate()

	def validate(self):
		if len(set(self.preferences)) != len(self.preferences):
			throw("Identified set holds duplicate preferences")

	def __len__(self):
		return len(self.preferences)

	def __iter__(self):
		return iter(self.preferences)

	def __contains__(self, pref):
		return pref in set(self.preferences)

	def is_empty(self):
		return not self.preferences

	def issubset(self, other):
		return set(self.preferences) <= set(other.preferences)

	def labels(self, grand):
		return [pref.label(grand) for pref in self.preferences]


@dataclass(frozen=True, eq=False)
class FilterMixture:
	"""Probability law over deterministic attention filters

	Each component is a tuple of consideration sets aligned with
	``index.menus``.
	"""

	index: object
	pref: object
	filters: tuple
	weights: np.ndarray

	def __post_init__(self):
		weights = np.array(self.weights, dtype=np.float64).reshape(-1)
		weights.flags.writeable = False
		object.__setattr__(self, "weights", weights)
		object.__setattr__(self, "filters", tuple(tuple(int(t) for t in f) for f in self.filters))
		self.validate()

	def validate(self):
		"""Positive weights summing to 1, one consideration set per menu"""
		if len(self.filters) != self.weights.size:
			throw("Filter mixture needs one weight per filter")
		if (self.weights <= 0).any():
			throw("Filter mixture weights must be positive")
		if abs(self.weights.sum() - 1.0) > WEIGHT_SUM_TOLERANCE:
			throw(f"Filter mixture weights sum to {self.weights.sum():.12g}")
		for gamma in self.filters:
			if len(gamma) != len(self.index.menus):
				throw("Filter does not cover every menu of the index")

	def __len__(self):
		return len(self.filters)

	def components(self):
		"""(filter map {menu: set}, weight) pairs"""
		return [(dict(zip(self.index.menus, gamma)), float(w)) for gamma, w in zip(self.filters, self.weights)]

	def to_attention(self):
		"""Attention rule obtained by mixing the filters"""
		values = np.zeros(self.index.n_attention)
		for gamma, w in zip(self.filters, self.weights):
			for mask, subset in zip(self.index.menus, gamma):
				values[self.index.attention_col(subset, mask)] += w
		return AttentionRule(self.index, values)
