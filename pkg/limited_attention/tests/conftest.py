import numpy as np
import pytest

from limited_attention.doctype.attention_model_spec.attention_model_spec import (
	AtMostK,
	IndependentConsideration,
	LogitWeights,
	Mixture,
	Uniform,
)
from limited_attention.doctype.choice_rule.choice_rule import ChoiceRule
from limited_attention.doctype.grand_set.grand_set import GrandSet, submasks
from limited_attention.doctype.menu_index.menu_index import COMPLETE, build_menu_index

# Three alternatives a, b, c have ids 0, 1, 2
A, B, C = 0, 1, 2
ABC, AB, AC, BC = 0b111, 0b011, 0b101, 0b110


def choice_table(abc, ab, ac, bc):
	"""{menu: {alternative: probability}} from per-menu (a, b, c) triples"""
	return {
		ABC: {A: abc[0], B: abc[1], C: abc[2]},
		AB: {A: ab[0], B: ab[1]},
		AC: {A: ac[0], C: ac[1]},
		BC: {B: bc[0], C: bc[1]},
	}


@pytest.fixture
def grand3():
	return GrandSet(("a", "b", "c"))


@pytest.fixture
def index3(grand3):
	return build_menu_index(grand3, COMPLETE)


@pytest.fixture
def regularity_mu_table():
	"""Monotone attention under a > b > c whose choices violate regularity"""
	return {
		ABC: {ABC: 2 / 3, BC: 1 / 6, 0b100: 1 / 6},
		AB: {AB: 0.5, 0b010: 0.5},
		AC: {AC: 0.5, 0b100: 0.5},
		BC: {BC: 0.5, 0b100: 0.5},
	}


@pytest.fixture
def regularity_pi(index3):
	return ChoiceRule.from_table(index3, choice_table((2 / 3, 1 / 6, 1 / 6), (0.5, 0.5), (0.5, 0.5), (0.5, 0.5)))


@pytest.fixture
def cyclic_pi(index3):
	"""Cyclic binary choices with every alternative chosen from {a,b,c}"""
	third = 1 / 3
	return ChoiceRule.from_table(index3, choice_table((third, third, third), (1.0, 0.0), (0.0, 1.0), (1.0, 0.0)))


@pytest.fixture
def full_revelation_pi(index3):
	"""1 - lambda_b > lambda > lambda_a, lambda_c with lambda = .5, (.2, .1, .3)"""
	return ChoiceRule.from_table(index3, choice_table((0.5, 0.5, 0.0), (0.9, 0.1), (0.2, 0.8), (0.7, 0.3)))


@pytest.fixture
def regular_pi(index3):
	"""Regular choices that only reveal through binary attentiveness"""
	third = 1 / 3
	return ChoiceRule.from_table(index3, choice_table((third, third, third), (2 / 3, third), (0.5, 0.5), (2 / 3, third)))


def random_monotone_spec(rng, size):
	"""A random attention family instance that satisfies monotonicity"""
	full = (1 << size) - 1
	kind = int(rng.integers(6))
	if kind == 0:
		return LogitWeights(weights={t: float(rng.uniform(0.1, 1.0)) for t in submasks(full)})
	if kind == 1:
		return LogitWeights(varsigma=float(rng.uniform(0.0, 3.0)))
	if kind == 2:
		return IndependentConsideration(tuple(rng.uniform(0.1, 0.9, size)))
	if kind == 3:
		return AtMostK(int(rng.integers(1, size + 1)))
	if kind == 4:
		return Uniform()
	share = float(rng.uniform(0.1, 0.9))
	return Mixture(((LogitWeights(varsigma=float(rng.uniform(0.0, 2.0))), share), (Uniform(), 1.0 - share)))


def random_preference_ranking(rng, size):
	return tuple(int(a) for a in rng.permutation(size))


@pytest.fixture
def rng():
	return np.random.default_rng(20170101)


PHI_LEVELS = (1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55, 0.5)

# Under a1 > ... > a5 with logit attention w_T = |T|^varsigma, hypothesis H0k
# stays identified for the first IDENTIFIED_PHI_LEVELS[varsigma][H0k] levels
IDENTIFIED_PHI_LEVELS = {
	0.0: {"H01": 11, "H02": 7, "H03": 7, "H04": 7, "H05": 7},
	1.0: {"H01": 11, "H02": 6, "H03": 6, "H04": 0, "H05": 0},
	2.0: {"H01": 11, "H02": 4, "H03": 0, "H04": 0, "H05": 0},
}


@pytest.fixture
def membership_table():
	"""{(varsigma, phi, hypothesis): identified} over every level"""
	return {
		(varsigma, phi, name): position < count
		for varsigma, counts in IDENTIFIED_PHI_LEVELS.items()
		for name, count in counts.items()
		for position, phi in enumerate(PHI_LEVELS)
	}
