from collections import namedtuple

import numpy as np

from limited_attention.doctype.attention_model_spec.attention_model_spec import check_spec
from limited_attention.doctype.attention_rule.attention_rule import AttentionRule
from limited_attention.doctype.choice_dataset.choice_dataset import ChoiceDataset
from limited_attention.doctype.choice_rule.choice_rule import ChoiceRule
from limited_attention.doctype.grand_set.grand_set import members
from limited_attention.exceptions import ValidationError, throw
from limited_attention.utils.logger import logger
from limited_attention.utils.seeds import make_rng

MONOTONICITY_TOLERANCE = 1e-12

MonotonicityViolation = namedtuple(
	"MonotonicityViolation", ["menu", "subset", "removed", "weight", "reduced_weight"]
)


def build_attention(spec, index):
	"""Attention rule of a model spec on every menu of the index"""
	check_spec(spec)
	values = np.zeros(index.n_attention)
	for mask in index.menus:
		for subset, w in spec.menu_weights(mask, index.grand).items():
			if subset <= 0 or subset & ~mask:
				throw(f"{type(spec).__name__} puts weight outside {index.grand.format_menu(mask)}")
			values[index.attention_col(subset, mask)] += w

	rule = AttentionRule(index, values)
	report = rule.validate()
	if not report.ok:
		throw(f"{type(spec).__name__} produced an invalid attention rule: {report.violations[0]}")
	return rule


def check_monotonicity(rule, index=None, tolerance=MONOTONICITY_TOLERANCE):
	"""Violations of mu(T|S) <= mu(T|S-A) over nested index menus

	Complete mode compares single removals; limited mode compares every
	nested pair of observed menus. An empty list means monotone.
	"""
	index = index or rule.index
	violations = []
	for big, small in index.nested_pairs:
		weights = rule.values[index.embedding(big, small)]
		reduced = rule.values[index.attention_slice(small)]
		for j in np.flatnonzero(weights > reduced + tolerance):
			subset = int(index.attention_subset[index.attention_offsets[index.position(small)] + j])
			violations.append(MonotonicityViolation(big, subset, big & ~small, float(weights[j]), float(reduced[j])))
	return violations


def is_monotone(rule, index=None):
	return not check_monotonicity(rule, index)


def synthesize_choice_rule(pref, rule, index=None):
	"""pi(a|S) = sum over T of 1(a is best in T) * mu(T|S)"""
	index = index or rule.index
	best = np.array([pref.best_in(int(t)) for t in index.attention_subset], dtype=np.int64)
	menu_masks = np.array(index.menus, dtype=np.int64)[index.attention_menu]
	cols = index.choice_cols(best, menu_masks)
	values = np.bincount(cols, weights=rule.values, minlength=index.n_choice)
	return ChoiceRule(index, values)


def _inverse_cdf(cumulative, uniforms):
	"""Category of each uniform draw under a cumulative distribution"""
	# rounding can leave the total just under 1
	cumulative = np.asarray(cumulative, dtype=np.float64) / cumulative[-1]
	picks = np.searchsorted(cumulative, uniforms, side="right")
	return np.minimum(picks, cumulative.size - 1)


def sample_dataset(rule, n_per_menu=None, n_total=None, menu_probs=None, seed=None):
	"""Draw a dataset from a choice rule

	Fixed design (`n_per_menu`) draws exactly n choices from every menu in
	index order. Random design (`n_total` with optional `menu_probs`, a
	{menu: weight > 0} map, uniform by default) draws menus first. Both use
	inverse-CDF sampling over the canonical layout.
	"""
	index = rule.index
	menus_arr = np.array(index.menus, dtype=np.int64)

	if n_per_menu is not None:
		n_per_menu = int(n_per_menu)
		if n_per_menu <= 0:
			throw(f"Observations per menu must be positive, got {n_per_menu}")
		menus, choices = [], []
		for pos, mask in enumerate(index.menus):
			rng = make_rng(seed, 0, pos)
			cumulative = np.cumsum(rule.block(mask))
			picks = _inverse_cdf(cumulative, rng.random(n_per_menu))
			menus.append(np.full(n_per_menu, mask, dtype=np.int64))
			choices.append(np.array(members(mask), dtype=np.int64)[picks])
		return ChoiceDataset(index.grand, np.concatenate(menus), np.concatenate(choices))

	if n_total is None or int(n_total) <= 0:
		throw(f"Sample size must be positive, got {n_total}")
	n_total = int(n_total)

	weights = np.ones(len(index.menus))
	if menu_probs is not None:
		weights = np.array([float(menu_probs.get(mask, 0.0)) for mask in index.menus])
		if (weights <= 0).any():
			raise ValidationError("Every menu needs a positive sampling weight")
	menu_cdf = np.cumsum(weights / weights.sum())

	rng = make_rng(seed, 1)
	menu_pos = _inverse_cdf(menu_cdf, rng.random(n_total))
	uniforms = rng.random(n_total)
	choices = np.empty(n_total, dtype=np.int64)
	for pos in np.unique(menu_pos):
		mask = index.menus[pos]
		hits = menu_pos == pos
		picks = _inverse_cdf(np.cumsum(rule.block(mask)), uniforms[hits])
		choices[hits] = np.array(members(mask), dtype=np.int64)[picks]

	return ChoiceDataset(index.grand, menus_arr[menu_pos], choices)


def perturb_choice_rule(rule, mask, source, target, shift):
	"""Move `shift` probability from pi(source|S) to pi(target|S)

	Used to build regularity-violating, non-RAM designs for power studies.
	"""
	values = rule.values.copy()
	src = rule.index.choice_col(source, mask)
	dst = rule.index.choice_col(target, mask)
	if shift < 0 or shift > values[src] + 1e-15:
		throw(f"Cannot move {shift} out of a probability of {values[src]}")
	values[src] -= shift
	values[dst] += shift
	logger("attention").debug(f"Moved {shift} of choice mass inside menu {mask:#x}")
	return ChoiceRule(rule.index, values)
