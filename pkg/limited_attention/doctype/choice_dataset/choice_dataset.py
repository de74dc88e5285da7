from dataclasses import dataclass

import numpy as np

from limited_attention.doctype.grand_set.grand_set import GrandSet, popcount
from limited_attention.exceptions import throw


@dataclass(frozen=True, eq=False)
class ChoiceDataset:
	"""Observed (menu, choice) pairs, one per decision"""

	grand: GrandSet
	menus: np.ndarray
	choices: np.ndarray

	def __post_init__(self):
		for name in ("menus", "choices"):
			array = np.array(getattr(self, name), dtype=np.int64).reshape(-1)
			array.flags.writeable = False
			object.__setattr__(self, name, array)
		self.validate()

	def validate(self):
		"""Every choice belongs to its menu; no singleton menus"""
		if self.menus.shape != self.choices.shape:
			throw("Menus and choices differ in length")
		if self.menus.size == 0:
			throw("A dataset needs at least one observation")
		if (self.choices < 0).any() or (self.choices >= self.grand.size).any():
			throw("Choice id outside the grand set")

		for mask in np.unique(self.menus):
			mask = int(mask)
			self.grand.check_menu(mask)
			if popcount(mask) < 2:
				throw(f"Singleton menu {self.grand.format_menu(mask)} carries no information")

		outside = np.flatnonzero(((self.menus >> self.choices) & 1) == 0)
		if outside.size:
			i = int(outside[0])
			throw(f"Observation {i}: choice {self.grand.labels[self.choices[i]]} "
				f"is not in menu {self.grand.format_menu(int(self.menus[i]))}")

	@classmethod
	def from_observations(cls, grand, observations):
		"""Build from an iterable of (menu mask, choice id)"""
		pairs = list(observations)
		return cls(grand, [m for m, _ in pairs], [c for _, c in pairs])

	@property
	def n_total(self):
		return int(self.menus.size)

	def menu_counts(self):
		"""{menu mask: N_S}"""
		masks, counts = np.unique(self.menus, return_counts=True)
		return {int(m): int(c) for m, c in zip(masks, counts)}

	def observed_menus(self):
		return sorted(self.menu_counts())

	def observations(self):
		return list(zip(self.menus.tolist(), self.choices.tolist()))

	def __len__(self):
		return self.n_total

	def __eq__(self, other):
		if not isinstance(other, ChoiceDataset):
			return NotImplemented
		return (self.grand == other.grand and np.array_equal(self.menus, other.menus)
			and np.array_equal(self.choices, other.choices))

	__hash__ = None
