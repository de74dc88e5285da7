"""Constraint matrices R with R @ pi <= 0 for a candidate preference.

build_R covers complete data, build_R_limited the observed-menu case and
augment_R_binary adds the binary-menu attentiveness rows for a level phi.
"""

from math import comb

import numpy as np

from limited_attention.doctype.constraint_matrix.constraint_matrix import (
	BINARY_ATTENTIVE,
	BINARY_TRIVIAL,
	LIMITED_MONOTONICITY,
	MONOTONICITY,
	ROW_KINDS,
	ConstraintMatrix,
)
from limited_attention.doctype.grand_set.grand_set import members, popcount
from limited_attention.exceptions import ValidationError, throw

PHI_RANGE = (0.5, 1.0)


def check_phi(phi):
	"""phi must lie in [1/2, 1]"""
	if phi is None:
		return None
	phi = float(phi)
	if not PHI_RANGE[0] <= phi <= PHI_RANGE[1]:
		throw(f"phi must lie in [1/2, 1], got {phi}")
	return phi


def constraint_count(size):
	"""Rows of build_R with trivial binary rows: sum_k C(K,k) C(k,2)"""
	if size < 2:
		throw(f"Need at least 2 alternatives, got {size}")
	return sum(comb(size, k) * comb(k, 2) for k in range(2, size + 1))


def build_R(pref, index, include_trivial=False):
	"""Monotonicity rows pi(b|S) - pi(b|S-a) <= 0 for every a better than b in S

	Rows follow index order of S, then the worse alternative b by id, then
	the removed alternative a by id. Binary menus only give the vacuous
	pi(b|S) <= 1; they are appended in place when `include_trivial` is set,
	stored as -pi(a|S) <= 0.
	"""
	index.require_complete("build_R")
	rows = []
	for mask in index.menus:
		ids = members(mask)
		binary = len(ids) == 2
		if binary and not include_trivial:
			continue
		for b in ids:
			for a in ids:
				if a == b or not pref.prefers(a, b):
					continue
				if binary:
					rows.append((index.choice_col(b, mask), 0.0, index.choice_col(a, mask), -1.0,
						BINARY_TRIVIAL, mask, a, b, -1))
				else:
					reduced = mask & ~(1 << a)
					rows.append((index.choice_col(b, mask), 1.0, index.choice_col(b, reduced), -1.0,
						MONOTONICITY, mask, a, b, reduced))
	return ConstraintMatrix.from_rows(rows, index.n_choice, pref=pref)


def build_R_limited(pref, index):
	"""Rows pi(a|S) - pi(a|T) <= 0 for observed T inside S and a in T worse than all of S-T"""
	index.require_limited("build_R_limited")
	rows = []
	for big in index.menus:
		for small in index.menus:
			if small == big or small & ~big:
				continue
			removed = big & ~small
			worst_removed = pref.worst_in(removed)
			for a in members(small):
				if pref.prefers(worst_removed, a):
					rows.append((index.choice_col(a, big), 1.0, index.choice_col(a, small), -1.0,
						LIMITED_MONOTONICITY, big, a, -1, small))
	return ConstraintMatrix.from_rows(rows, index.n_choice, pref=pref)


def augment_R_binary(matrix, pref, phi, index):
	"""Append (1-phi)/phi * pi(b|S) - pi(a|S) <= 0 for binary menus {a, b}, a better"""
	phi = check_phi(phi)
	if phi is None:
		raise ValidationError("augment_R_binary needs phi")
	ratio = (1.0 - phi) / phi
	rows = []
	for mask in index.binary_menus():
		a, b = pref.sorted_members(mask)
		rows.append((index.choice_col(b, mask), ratio, index.choice_col(a, mask), -1.0,
			BINARY_ATTENTIVE, mask, a, b, -1))
	extra = ConstraintMatrix.from_rows(rows, index.n_choice, pref=pref, phi=phi)
	return matrix.append(extra)


def _relabel_masks(masks, sigma):
	"""Apply an alternative relabelling to an array of bitmasks"""
	masks = np.asarray(masks, dtype=np.int64)
	out = np.zeros_like(masks)
	for a, image in enumerate(sigma):
		out |= ((masks >> a) & 1) << image
	return out


def permute_R(matrix, target, index):
	"""Matrix of `target` obtained by relabelling the alternatives of matrix.pref

	sigma maps the k-th best alternative of matrix.pref to the k-th best of
	target; every column pi(x|S) moves to pi(sigma(x)|sigma(S)). Rows come
	out in the source order, so the result equals build_R(target) up to row
	order.
	"""
	if matrix.pref is None:
		throw("permute_R needs a matrix built for a known preference")
	if matrix.is_augmented or matrix.is_limited:
		throw("permute_R only relabels complete-data monotonicity matrices")
	index.require_complete("permute_R")
	if target == matrix.pref:
		return matrix

	sigma = np.array(matrix.pref.relabel_map(target), dtype=np.int64)

	# Column relabelling over the whole choice layout
	new_masks = _relabel_masks(index.choice_mask, sigma)
	new_alts = sigma[index.choice_alt]
	column_map = index.choice_cols(new_alts, new_masks)

	meta = matrix.meta.copy()
	meta[:, 0] = _relabel_masks(meta[:, 0], sigma)
	for j in (1, 2):
		valid = meta[:, j] >= 0
		meta[valid, j] = sigma[meta[valid, j]]
	valid = meta[:, 3] >= 0
	meta[valid, 3] = _relabel_masks(meta[valid, 3], sigma)

	return ConstraintMatrix(column_map[matrix.cols], matrix.coefs, matrix.n_cols, matrix.kinds, meta, pref=target)


def constraint_matrix_for(pref, index, phi=None, include_trivial=False):
	"""build_R or build_R_limited by index mode, with binary rows when phi < 1"""
	if index.is_complete:
		matrix = build_R(pref, index, include_trivial=include_trivial)
	else:
		matrix = build_R_limited(pref, index)
	phi = check_phi(phi)
	if phi is not None and phi < 1.0:
		matrix = augment_R_binary(matrix, pref, phi, index)
	return matrix


def row_kind_counts(matrix):
	"""{kind: number of rows}"""
	kinds, counts = np.unique(matrix.kinds, return_counts=True)
	return {ROW_KINDS[k]: int(c) for k, c in zip(kinds, counts)}
