"""Grand set of alternatives and menu bitmask helpers.

A menu is an ``int`` bitmask over alternative ids: bit ``a`` is set when
alternative ``a`` belongs to the menu.
"""

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

from limited_attention.exceptions import EnumerationLimitError, ValidationError, throw

MAX_ALTERNATIVES = 16
LABEL_PATTERN = re.compile(r"^[A-Za-z0-9_]+$")


@lru_cache(maxsize=1 << 16)
def members(mask):
	"""Alternative ids of a menu, ascending"""
	return tuple(a for a in range(mask.bit_length()) if mask >> a & 1)


def popcount(mask):
	"""Number of alternatives in a menu"""
	return bin(mask).count("1")


def menu_of(ids):
	"""Bitmask of an iterable of alternative ids"""
	mask = 0
	for a in ids:
		mask |= 1 << int(a)
	return mask


def is_subset(inner, outer):
	"""True when every member of `inner` is in `outer`"""
	return inner & ~outer == 0


@lru_cache(maxsize=4096)
def submasks(mask):
	"""Non-empty subsets of a menu in ascending bitmask order"""
	ids = members(mask)
	subsets = []
	for local in range(1, 1 << len(ids)):
		sub = 0
		for j, a in enumerate(ids):
			if local >> j & 1:
				sub |= 1 << a
		subsets.append(sub)
	return tuple(subsets)


@dataclass(frozen=True)
class GrandSet:
	"""Finite set of K alternatives with display labels mapped to ids 0..K-1"""

	labels: tuple

	def __post_init__(self):
		object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
		self.validate()

	def validate(self):
		"""Validate labels"""
		if len(self.labels) < 2:
			throw("A grand set needs at least 2 alternatives")
		if len(self.labels) > MAX_ALTERNATIVES:
			throw(f"At most {MAX_ALTERNATIVES} alternatives are supported, got {len(self.labels)}", EnumerationLimitError)
		if len(set(self.labels)) != len(self.labels):
			throw(f"Duplicate alternative labels: {self.labels}")
		for label in self.labels:
			if not label:
				throw("Alternative labels must be non-empty")

	@classmethod
	def numbered(cls, size, prefix="a"):
		"""Grand set a1..aK"""
		return cls(tuple(f"{prefix}{i + 1}" for i in range(size)))

	@property
	def size(self):
		return len(self.labels)

	@property
	def full_mask(self):
		return (1 << self.size) - 1

	@cached_property
	def _ids(self):
		return {label: i for i, label in enumerate(self.labels)}

	def id_of(self, label):
		"""Alternative id for a label"""
		try:
			return self._ids[str(label)]
		except KeyError:
			raise ValidationError(f"Unknown alternative '{label}'") from None

	def menu(self, labels):
		"""Bitmask of a menu given by labels"""
		return menu_of(self.id_of(label) for label in labels)

	def check_menu(self, mask):
		"""Validate that a bitmask is a non-empty subset of the grand set"""
		if mask <= 0 or mask & ~self.full_mask:
			throw(f"Menu {mask:#x} is not a non-empty subset of the grand set")

	def menu_labels(self, mask):
		"""Labels of a menu in id order"""
		return [self.labels[a] for a in members(mask)]

	def format_menu(self, mask):
		"""Display form {a,b,c}"""
		return "{" + ",".join(self.menu_labels(mask)) + "}"
