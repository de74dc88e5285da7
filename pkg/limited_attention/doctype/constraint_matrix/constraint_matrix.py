"""Sparse constraint matrices R with R @ pi <= 0.

Every row has exactly two stored entries (column, coefficient). Row kinds:

- monotonicity: pi(b|S) - pi(b|S-a) with a better than b
- binary-trivial: the binary-menu case pi(b|S) - pi(b|{b}) = -pi(a|S)
- binary-attentive: (1-phi)/phi * pi(b|S) - pi(a|S) on a binary menu {a, b}
- limited-monotonicity: pi(a|S) - pi(a|T) for observed T inside S

Row metadata (kind, S, a, b, T) is carried for reports and is ignored by
equality.
"""

from collections import Counter, namedtuple

import numpy as np
import pandas as pd
from scipy import sparse

from limited_attention.exceptions import throw

MONOTONICITY = "monotonicity"
BINARY_TRIVIAL = "binary-trivial"
BINARY_ATTENTIVE = "binary-attentive"
LIMITED_MONOTONICITY = "limited-monotonicity"
ROW_KINDS = (MONOTONICITY, BINARY_TRIVIAL, BINARY_ATTENTIVE, LIMITED_MONOTONICITY)

RowMeta = namedtuple("RowMeta", ["kind", "menu", "a", "b", "other"])


class ConstraintMatrix:
	"""Two-entry sparse rows over the choice layout of an index"""

	def __init__(self, cols, coefs, n_cols, kinds, meta, pref=None, phi=None):
		self.cols = np.array(cols, dtype=np.int64).reshape(-1, 2)
		self.coefs = np.array(coefs, dtype=np.float64).reshape(-1, 2)
		self.n_cols = int(n_cols)
		self.kinds = np.array(kinds, dtype=np.int64).reshape(-1)
		self.meta = np.array(meta, dtype=np.int64).reshape(-1, 4)
		self.pref = pref
		self.phi = phi
		self.validate()
		for array in (self.cols, self.coefs, self.kinds, self.meta):
			array.flags.writeable = False

	def validate(self):
		n = self.cols.shape[0]
		if self.coefs.shape[0] != n or self.kinds.shape[0] != n or self.meta.shape[0] != n:
			throw("Constraint matrix parts differ in row count")
		if n and (self.cols.min() < 0 or self.cols.max() >= self.n_cols):
			throw("Constraint column outside the choice layout")

	@classmethod
	def from_rows(cls, rows, n_cols, pref=None, phi=None):
		"""Build from (col1, coef1, col2, coef2, kind, menu, a, b, other) tuples"""
		rows = list(rows)
		cols = [(r[0], r[2]) for r in rows]
		coefs = [(r[1], r[3]) for r in rows]
		kinds = [ROW_KINDS.index(r[4]) for r in rows]
		meta = [r[5:9] for r in rows]
		return cls(cols, coefs, n_cols, kinds, meta, pref, phi)

	@property
	def n_rows(self):
		return int(self.cols.shape[0])

	@property
	def shape(self):
		return (self.n_rows, self.n_cols)

	def kind_names(self):
		return {ROW_KINDS[k] for k in np.unique(self.kinds)}

	@property
	def is_augmented(self):
		return BINARY_ATTENTIVE in self.kind_names()

	@property
	def is_limited(self):
		return LIMITED_MONOTONICITY in self.kind_names()

	def row_meta(self, i):
		menu, a, b, other = (int(x) for x in self.meta[i])
		return RowMeta(ROW_KINDS[self.kinds[i]], menu, a, b, other)

	def rows(self):
		"""Rows as lists of (column, coefficient)"""
		return [[(int(c), float(v)) for c, v in zip(cols, coefs)] for cols, coefs in zip(self.cols, self.coefs)]

	def dot(self, x):
		"""R @ x for a vector, or R applied to each row of a matrix of draws"""
		x = np.asarray(x, dtype=np.float64)
		if x.ndim == 1:
			return (x[self.cols] * self.coefs).sum(axis=1)
		return x[:, self.cols[:, 0]] * self.coefs[:, 0] + x[:, self.cols[:, 1]] * self.coefs[:, 1]

	def to_sparse(self):
		"""scipy CSR matrix"""
		rows = np.repeat(np.arange(self.n_rows), 2)
		return sparse.csr_matrix(
			(self.coefs.reshape(-1), (rows, self.cols.reshape(-1))), shape=self.shape
		)

	def to_dense(self):
		return self.to_sparse().toarray()

	def to_frame(self):
		"""(row, col, coeff) triples of the nonzero entries"""
		frame = pd.DataFrame({
			"row": np.repeat(np.arange(self.n_rows), 2),
			"col": self.cols.reshape(-1),
			"coeff": self.coefs.reshape(-1),
		})
		return frame[frame["coeff"] != 0].reset_index(drop=True)

	def export_csv(self, path):
		self.to_frame().to_csv(path, index=False)
		return path

	def row_multiset(self):
		"""Rows as a multiset of dense-equivalent signatures, zero entries dropped"""
		signatures = []
		for cols, coefs in zip(self.cols, self.coefs):
			entries = {}
			for c, v in zip(cols, coefs):
				entries[int(c)] = entries.get(int(c), 0.0) + float(v)
			signatures.append(tuple(sorted((c, v) for c, v in entries.items() if v != 0.0)))
		return Counter(signatures)

	def append(self, other):
		"""Rows of self followed by rows of other"""
		if other.n_cols != self.n_cols:
			throw("Cannot stack constraint matrices over different layouts")
		return ConstraintMatrix(
			np.vstack([self.cols, other.cols]),
			np.vstack([self.coefs, other.coefs]),
			self.n_cols,
			np.concatenate([self.kinds, other.kinds]),
			np.vstack([self.meta, other.meta]),
			self.pref,
			other.phi if other.phi is not None else self.phi,
		)

	def __eq__(self, other):
		if not isinstance(other, ConstraintMatrix):
			return NotImplemented
		return (self.n_cols == other.n_cols and np.array_equal(self.cols, other.cols)
			and np.array_equal(self.coefs, other.coefs))

	__hash__ = None

	def __repr__(self):
		return f"ConstraintMatrix({self.n_rows}x{self.n_cols})"

	def describe_row(self, i, grand):
		"""Readable form of row i"""
		meta = self.row_meta(i)
		fmt = grand.format_menu
		label = grand.labels
		if meta.kind == MONOTONICITY:
			return f"pi({label[meta.b]}|{fmt(meta.menu)}) <= pi({label[meta.b]}|{fmt(meta.other)})"
		if meta.kind == BINARY_TRIVIAL:
			return f"pi({label[meta.b]}|{fmt(meta.menu)}) <= 1"
		if meta.kind == BINARY_ATTENTIVE:
			return (f"{self.coefs[i, 0]:.6g}*pi({label[meta.b]}|{fmt(meta.menu)}) "
				f"<= pi({label[meta.a]}|{fmt(meta.menu)})")
		return f"pi({label[meta.a]}|{fmt(meta.menu)}) <= pi({label[meta.a]}|{fmt(meta.other)})"


def empty_matrix(n_cols, pref=None):
	return ConstraintMatrix(np.zeros((0, 2)), np.zeros((0, 2)), n_cols, [], np.zeros((0, 4)), pref)
