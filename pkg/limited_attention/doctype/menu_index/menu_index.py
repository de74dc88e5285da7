"""Canonical layout of menus and of the stacked choice / attention vectors.

Menus are ordered by decreasing size, then ascending lexicographic order of
their sorted member ids. Inside a menu, choice entries follow ascending
alternative id and attention entries follow ascending subset bitmask.
"""

from functools import cached_property
from itertools import combinations

import numpy as np

from limited_attention.doctype.grand_set.grand_set import members, popcount, submasks
from limited_attention.exceptions import IndexModeError, ValidationError, throw

COMPLETE = "complete"
LIMITED = "limited"


def menu_sort_key(mask):
	"""Canonical ordering key of a menu"""
	return (-popcount(mask), members(mask))


class MenuIndex:
	"""Ordered menus with offsets into the choice and attention vectors"""

	def __init__(self, grand, menus, mode=COMPLETE):
		self.grand = grand
		self.mode = mode
		self.menus = tuple(sorted(menus, key=menu_sort_key))
		self.validate()
		self._build_layout()

	def validate(self):
		"""Validate mode and menus"""
		if self.mode not in (COMPLETE, LIMITED):
			throw(f"Unknown index mode '{self.mode}'")
		if not self.menus:
			throw("A menu index needs at least one menu")
		if len(set(self.menus)) != len(self.menus):
			throw("Duplicate menus in index")
		for mask in self.menus:
			self.grand.check_menu(mask)
			if popcount(mask) < 2:
				throw(f"Menu {self.grand.format_menu(mask)} has fewer than 2 alternatives")

	def _build_layout(self):
		"""Offsets, lookup tables and per-entry arrays"""
		sizes = np.array([popcount(mask) for mask in self.menus], dtype=np.int64)
		self.choice_offsets = np.concatenate([[0], np.cumsum(sizes)])
		self.attention_offsets = np.concatenate([[0], np.cumsum((1 << sizes) - 1)])

		# Lookup tables over all 2^K bitmasks
		n_masks = 1 << self.grand.size
		self.mask_position = np.full(n_masks, -1, dtype=np.int64)
		self.mask_position[np.array(self.menus, dtype=np.int64)] = np.arange(len(self.menus))
		self.popcounts = np.array([popcount(m) for m in range(n_masks)], dtype=np.int64)
		self._position = {mask: pos for pos, mask in enumerate(self.menus)}

		# Per choice entry: menu position, menu mask and alternative
		self.choice_menu = np.repeat(np.arange(len(self.menus)), sizes)
		self.choice_mask = np.array(self.menus, dtype=np.int64)[self.choice_menu]
		self.choice_alt = np.array([a for mask in self.menus for a in members(mask)], dtype=np.int64)

		for array in (self.choice_offsets, self.attention_offsets, self.mask_position, self.popcounts,
				self.choice_menu, self.choice_mask, self.choice_alt):
			array.flags.writeable = False

	def __eq__(self, other):
		if not isinstance(other, MenuIndex):
			return NotImplemented
		return self.grand == other.grand and self.mode == other.mode and self.menus == other.menus

	def __hash__(self):
		return hash((self.grand, self.mode, self.menus))

	def __len__(self):
		return len(self.menus)

	def __repr__(self):
		return f"MenuIndex(K={self.grand.size}, mode={self.mode}, menus={len(self.menus)})"

	@property
	def is_complete(self):
		return self.mode == COMPLETE

	@property
	def n_choice(self):
		return int(self.choice_offsets[-1])

	@property
	def n_attention(self):
		return int(self.attention_offsets[-1])

	def has(self, mask):
		return mask in self._position

	def position(self, mask):
		"""Position of a menu in the index"""
		try:
			return self._position[mask]
		except KeyError:
			raise ValidationError(f"Menu {self.grand.format_menu(mask)} is not in the index") from None

	def choice_slice(self, mask):
		pos = self.position(mask)
		return slice(int(self.choice_offsets[pos]), int(self.choice_offsets[pos + 1]))

	def attention_slice(self, mask):
		pos = self.position(mask)
		return slice(int(self.attention_offsets[pos]), int(self.attention_offsets[pos + 1]))

	def choice_col(self, a, mask):
		"""Column of pi(a|S)"""
		if not mask >> a & 1:
			throw(f"Alternative {self.grand.labels[a]} is not in {self.grand.format_menu(mask)}")
		return int(self.choice_offsets[self.position(mask)]) + popcount(mask & ((1 << a) - 1))

	def choice_cols(self, alts, masks):
		"""Vectorized choice_col over arrays of alternatives and menus"""
		alts = np.asarray(alts, dtype=np.int64)
		masks = np.asarray(masks, dtype=np.int64)
		below = masks & ((np.int64(1) << alts) - 1)
		return self.choice_offsets[self.mask_position[masks]] + self.popcounts[below]

	def attention_col(self, subset, mask):
		"""Column of mu(T|S)"""
		if subset <= 0 or subset & ~mask:
			throw(f"Subset {subset:#x} is not a non-empty subset of {self.grand.format_menu(mask)}")
		local = 0
		for j, a in enumerate(members(mask)):
			if subset >> a & 1:
				local |= 1 << j
		return int(self.attention_offsets[self.position(mask)]) + local - 1

	@cached_property
	def attention_menu(self):
		"""Menu position of every attention entry"""
		sizes = np.diff(self.attention_offsets)
		return np.repeat(np.arange(len(self.menus)), sizes)

	@cached_property
	def attention_subset(self):
		"""Subset bitmask of every attention entry"""
		return np.array([t for mask in self.menus for t in submasks(mask)], dtype=np.int64)

	def binary_menus(self):
		return [mask for mask in self.menus if popcount(mask) == 2]

	@cached_property
	def nested_pairs(self):
		"""Pairs (S, S') of index menus with S' a proper subset of S

		Complete mode keeps single removals only, which is equivalent for
		monotonicity; limited mode keeps every nested pair.
		"""
		pairs = []
		for big in self.menus:
			for small in self.menus:
				if small == big or small & ~big:
					continue
				if self.is_complete and popcount(big) - popcount(small) != 1:
					continue
				pairs.append((big, small))
		return tuple(pairs)

	def embedding(self, big, small):
		"""Columns of mu(T|big) for every T in small, in small's layout order"""
		key = (big, small)
		cache = self.__dict__.setdefault("_embeddings", {})
		if key not in cache:
			cols = np.array([self.attention_col(t, big) for t in submasks(small)], dtype=np.int64)
			cols.flags.writeable = False
			cache[key] = cols
		return cache[key]

	def require_complete(self, operation):
		if not self.is_complete:
			throw(f"{operation} needs a complete-mode index", IndexModeError)

	def require_limited(self, operation):
		if self.is_complete:
			throw(f"{operation} needs a limited-mode index", IndexModeError)


def all_menus(size):
	"""Every menu with at least 2 of `size` alternatives"""
	menus = []
	for k in range(2, size + 1):
		for ids in combinations(range(size), k):
			mask = 0
			for a in ids:
				mask |= 1 << a
			menus.append(mask)
	return menus


def build_menu_index(grand, mode=COMPLETE, menus=None):
	"""Build the canonical index of a grand set

	Complete mode enumerates every menu of size >= 2. Limited mode takes the
	observed collection `menus`.
	"""
	if mode == COMPLETE:
		if menus is not None:
			throw("Complete mode enumerates menus itself; pass menus only in limited mode")
		return MenuIndex(grand, all_menus(grand.size), COMPLETE)

	if mode == LIMITED:
		menus = list(menus or [])
		if not menus:
			throw("Limited mode needs a non-empty menu list")
		return MenuIndex(grand, menus, LIMITED)

	throw(f"Unknown index mode '{mode}'")
