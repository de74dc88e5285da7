from dataclasses import dataclass

import numpy as np

from limited_attention.doctype.choice_rule.choice_rule import ChoiceRule
from limited_attention.exceptions import throw


@dataclass(frozen=True, eq=False)
class EstimatedChoice:
	"""Frequency estimate pi_hat with per-menu counts

	The plug-in covariance is block diagonal: the block of menu S is
	(diag(p_S) - p_S p_S') * N / N_S. Blocks are produced on demand and
	never stacked into the full matrix.
	"""

	pi_hat: ChoiceRule
	n_per_menu: np.ndarray

	def __post_init__(self):
		counts = np.array(self.n_per_menu, dtype=np.int64).reshape(-1)
		counts.flags.writeable = False
		object.__setattr__(self, "n_per_menu", counts)
		self.validate()

	def validate(self):
		if self.n_per_menu.size != len(self.index.menus):
			throw("One count per menu is required")
		if (self.n_per_menu <= 0).any():
			throw("Every estimated menu needs at least one observation")

	@property
	def index(self):
		return self.pi_hat.index

	@property
	def n_total(self):
		return int(self.n_per_menu.sum())

	def menu_scale(self, pos):
		"""N / N_S"""
		return self.n_total / float(self.n_per_menu[pos])

	def omega_block(self, pos):
		"""Covariance block (diag p - p p') * N / N_S of menu position `pos`"""
		p = self.pi_hat.values[self.index.choice_offsets[pos]:self.index.choice_offsets[pos + 1]]
		return (np.diag(p) - np.outer(p, p)) * self.menu_scale(pos)

	def omega_blocks(self):
		return [self.omega_block(pos) for pos in range(len(self.index.menus))]

	def covariance(self, cols_i, cols_j):
		"""Entries Omega[cols_i, cols_j] elementwise, zero across menus"""
		cols_i = np.asarray(cols_i, dtype=np.int64)
		cols_j = np.asarray(cols_j, dtype=np.int64)
		p = self.pi_hat.values
		menu_i = self.index.choice_menu[cols_i]
		menu_j = self.index.choice_menu[cols_j]
		scale = self.n_total / self.n_per_menu[menu_i].astype(np.float64)
		within = np.where(cols_i == cols_j, p[cols_i] * (1.0 - p[cols_i]), -p[cols_i] * p[cols_j]) * scale
		return np.where(menu_i == menu_j, within, 0.0)
