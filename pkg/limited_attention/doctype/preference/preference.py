import re
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from math import factorial

from limited_attention.doctype.grand_set.grand_set import members
from limited_attention.exceptions import ValidationError, throw

RANKING_SEPARATOR = re.compile(r"\s*(?:>|≻)\s*")


@dataclass(frozen=True)
class Preference:
	"""Strict total order over alternative ids, best first"""

	ranking: tuple

	def __post_init__(self):
		object.__setattr__(self, "ranking", tuple(int(a) for a in self.ranking))
		self.validate()

	def validate(self):
		"""Ranking must be a permutation of 0..K-1"""
		if sorted(self.ranking) != list(range(len(self.ranking))):
			throw(f"Ranking {self.ranking} is not a permutation of 0..{len(self.ranking) - 1}")

	@classmethod
	def identity(cls, size):
		return cls(tuple(range(size)))

	@classmethod
	def parse(cls, text, grand):
		"""Parse 'b>a>c' (or 'b≻a≻c') against a grand set"""
		labels = [part for part in RANKING_SEPARATOR.split(text.strip()) if part]
		if len(labels) != grand.size:
			throw(f"Preference '{text}' ranks {len(labels)} alternatives, expected {grand.size}")
		return cls(tuple(grand.id_of(label) for label in labels))

	@property
	def size(self):
		return len(self.ranking)

	@cached_property
	def rank(self):
		"""rank[a] = position of a in the ranking (0 is best)"""
		ranks = [0] * self.size
		for position, a in enumerate(self.ranking):
			ranks[a] = position
		return tuple(ranks)

	@cached_property
	def _lower_contours(self):
		contours = [0] * self.size
		mask = 0
		for a in reversed(self.ranking):
			mask |= 1 << a
			contours[a] = mask
		return tuple(contours)

	def prefers(self, a, b):
		"""True when a is strictly better than b"""
		return self.rank[a] < self.rank[b]

	def lower_contour(self, a):
		"""Bitmask of alternatives weakly worse than a"""
		return self._lower_contours[a]

	def best_in(self, mask):
		"""Best alternative of a menu"""
		return min(members(mask), key=self.rank.__getitem__)

	def worst_in(self, mask):
		"""Worst alternative of a menu"""
		return max(members(mask), key=self.rank.__getitem__)

	def sorted_members(self, mask):
		"""Menu members best first"""
		return sorted(members(mask), key=self.rank.__getitem__)

	def contains(self, relation):
		"""True when every edge a->b of the relation has a better than b"""
		return all(self.prefers(a, b) for a, b in relation.pairs())

	def relabel_map(self, target):
		"""sigma with sigma(ranking[k]) = target.ranking[k]"""
		if target.size != self.size:
			throw("Preferences over different grand sets")
		sigma = [0] * self.size
		for a, b in zip(self.ranking, target.ranking):
			sigma[a] = b
		return tuple(sigma)

	def label(self, grand, separator=">"):
		return separator.join(grand.labels[a] for a in self.ranking)


def all_preferences(size):
	"""Every preference over `size` alternatives in lexicographic order of rankings"""
	for ranking in permutations(range(size)):
		yield Preference(ranking)


def count_preferences(size):
	return factorial(size)


def parse_preferences(texts, grand):
	"""Parse a list of preference strings"""
	if isinstance(texts, str):
		texts = [part for part in texts.split(",") if part.strip()]
	if not texts:
		raise ValidationError("No preferences given")
	return [Preference.parse(text, grand) for text in texts]
