"""Parameterized attention rule families.

Each spec validates its parameters on construction and returns, for a menu
S, the consideration-set law {T: mu(T|S)} through ``menu_weights``.
"""

from dataclasses import dataclass, field
from math import comb, prod
from typing import Optional

from limited_attention.doctype.grand_set.grand_set import members, popcount, submasks
from limited_attention.exceptions import ValidationError, throw

WEIGHT_TOLERANCE = 1e-9
EBA_FALLBACKS = ("redraw", "uniform", "full")


def _size_power_weights(mask, varsigma):
	"""w_T = |T|^varsigma for every non-empty T in the menu"""
	return {t: float(popcount(t)) ** varsigma for t in submasks(mask)}


def _explicit_weights(mask, table, what):
	weights = {}
	for t in submasks(mask):
		if t not in table:
			throw(f"{what} has no weight for subset {t:#x}")
		weights[t] = float(table[t])
	return weights


def _check_weight_table(table, what, strictly_positive=True):
	for subset, w in table.items():
		if subset <= 0:
			throw(f"{what} keys must be non-empty subsets")
		if strictly_positive and not w > 0:
			throw(f"{what} weights must be positive, got {w} for subset {subset:#x}")
		if not strictly_positive and w < 0:
			throw(f"{what} weights must be nonnegative, got {w} for subset {subset:#x}")


@dataclass(frozen=True)
class FullAttention:
	"""Everything in the menu is considered"""

	def menu_weights(self, mask, grand):
		return {mask: 1.0}


@dataclass(frozen=True)
class TopN:
	"""Deterministic filter keeping the n best alternatives by an ordering"""

	ordering: object
	n: int

	def __post_init__(self):
		if int(self.n) < 1:
			throw(f"TopN cutoff must be at least 1, got {self.n}")

	def menu_weights(self, mask, grand):
		if self.ordering.size != grand.size:
			throw("TopN ordering ranks a different number of alternatives")
		kept = self.ordering.sorted_members(mask)[: int(self.n)]
		subset = 0
		for a in kept:
			subset |= 1 << a
		return {subset: 1.0}


@dataclass(frozen=True)
class AtMostK:
	"""Uniform over k-element subsets; the whole menu when it has at most k"""

	k: int

	def __post_init__(self):
		if int(self.k) < 1:
			throw(f"AtMostK needs k >= 1, got {self.k}")

	def menu_weights(self, mask, grand):
		size = popcount(mask)
		if size <= self.k:
			return {mask: 1.0}
		share = 1.0 / comb(size, self.k)
		return {t: share for t in submasks(mask) if popcount(t) == self.k}


@dataclass(frozen=True)
class Uniform:
	"""Every non-empty subset equally likely"""

	def menu_weights(self, mask, grand):
		share = 1.0 / ((1 << popcount(mask)) - 1)
		return {t: share for t in submasks(mask)}


@dataclass(frozen=True)
class LogitWeights:
	"""mu(T|S) = w_T / sum of w over subsets of S

	Either an explicit table {subset: w > 0} or the size power shorthand
	w_T = |T|^varsigma.
	"""

	weights: Optional[dict] = None
	varsigma: Optional[float] = None

	def __post_init__(self):
		if (self.weights is None) == (self.varsigma is None):
			throw("LogitWeights takes either a weight table or varsigma")
		if self.weights is not None:
			_check_weight_table(self.weights, "LogitWeights")

	def subset_weights(self, mask):
		if self.varsigma is not None:
			return _size_power_weights(mask, float(self.varsigma))
		return _explicit_weights(mask, self.weights, "LogitWeights")

	def menu_weights(self, mask, grand):
		weights = self.subset_weights(mask)
		total = sum(weights.values())
		return {t: w / total for t, w in weights.items()}

	def __hash__(self):
		return hash(("LogitWeights", self.varsigma, None if self.weights is None else tuple(sorted(self.weights.items()))))


@dataclass(frozen=True)
class IndependentConsideration:
	"""Each alternative considered independently with probability gamma(a)

	The empty consideration set is excluded by normalizing with
	beta_S = 1 - prod(1 - gamma(a)).
	"""

	gamma: tuple

	def __post_init__(self):
		object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
		for g in self.gamma:
			if not 0.0 < g < 1.0:
				throw(f"Consideration probabilities must lie in (0,1), got {g}")

	def unnormalized(self, subset, mask):
		inside = prod(self.gamma[a] for a in members(subset))
		outside = prod(1.0 - self.gamma[a] for a in members(mask & ~subset))
		return inside * outside

	def menu_weights(self, mask, grand):
		if len(self.gamma) != grand.size:
			throw(f"IndependentConsideration needs {grand.size} probabilities, got {len(self.gamma)}")
		beta = 1.0 - prod(1.0 - self.gamma[a] for a in members(mask))
		return {t: self.unnormalized(t, mask) / beta for t in submasks(mask)}


@dataclass(frozen=True)
class Dogit:
	"""Logit weights mixed with captive attention theta_T"""

	weights: Optional[dict] = None
	varsigma: Optional[float] = None
	captivity: dict = field(default_factory=dict)

	def __post_init__(self):
		if (self.weights is None) == (self.varsigma is None):
			throw("Dogit takes either a weight table or varsigma")
		if self.weights is not None:
			_check_weight_table(self.weights, "Dogit")
		_check_weight_table(self.captivity, "Dogit captivity", strictly_positive=False)

	def menu_weights(self, mask, grand):
		if self.varsigma is not None:
			weights = _size_power_weights(mask, float(self.varsigma))
		else:
			weights = _explicit_weights(mask, self.weights, "Dogit")
		theta = {t: float(self.captivity.get(t, 0.0)) for t in submasks(mask)}
		total_w = sum(weights.values())
		total_theta = sum(theta.values())
		scale = 1.0 / (1.0 + total_theta)
		return {t: scale * weights[t] / total_w + theta[t] * scale for t in submasks(mask)}

	def __hash__(self):
		return hash(("Dogit", self.varsigma, tuple(sorted(self.captivity.items()))))


@dataclass(frozen=True)
class EliminationByAspects:
	"""Draw aspect B_j with probability omega_j; consider B_j & S

	`fallback` decides the mass of aspects missing the menu: "redraw"
	renormalizes over aspects meeting S, "uniform" spreads it over all
	subsets of S, "full" gives it to S.
	"""

	aspects: tuple
	fallback: str = "redraw"

	def __post_init__(self):
		object.__setattr__(self, "aspects", tuple((int(b), float(w)) for b, w in self.aspects))
		if not self.aspects:
			throw("EliminationByAspects needs at least one aspect")
		for b, w in self.aspects:
			if b <= 0:
				throw("Aspects must be non-empty subsets")
			if not w > 0:
				throw(f"Aspect weights must be positive, got {w}")
		if self.fallback not in EBA_FALLBACKS:
			throw(f"Unknown fallback '{self.fallback}', expected one of {EBA_FALLBACKS}")

	def menu_weights(self, mask, grand):
		covered = 0
		for b, _ in self.aspects:
			covered |= b
		if covered != grand.full_mask:
			throw("Every alternative must belong to some aspect")

		total = sum(w for _, w in self.aspects)
		weights = {t: 0.0 for t in submasks(mask)}
		missing = 0.0
		for b, w in self.aspects:
			if b & mask:
				weights[b & mask] += w / total
			else:
				missing += w / total

		if self.fallback == "redraw":
			hit = 1.0 - missing
			return {t: w / hit for t, w in weights.items()}
		if self.fallback == "uniform":
			share = missing / len(weights)
			return {t: w + share for t, w in weights.items()}
		weights[mask] += missing
		return weights


@dataclass(frozen=True)
class CorrelatedConsideration:
	"""A fixed law omega over subsets of X; consider T' & S, conditioned on meeting S"""

	omega: tuple

	def __post_init__(self):
		object.__setattr__(self, "omega", tuple((int(t), float(w)) for t, w in self.omega))
		if not self.omega:
			throw("CorrelatedConsideration needs a non-empty law")
		for t, w in self.omega:
			if t <= 0 or w < 0:
				throw("CorrelatedConsideration needs non-empty subsets and nonnegative weights")

	def menu_weights(self, mask, grand):
		weights = {t: 0.0 for t in submasks(mask)}
		for t, w in self.omega:
			if t & mask:
				weights[t & mask] += w
		total = sum(weights.values())
		if not total > 0:
			throw(f"No consideration set of the law meets {grand.format_menu(mask)}")
		return {t: w / total for t, w in weights.items()}


@dataclass(frozen=True)
class ExplicitFilter:
	"""Deterministic consideration map Gamma: S -> Gamma(S), a subset of S"""

	mapping: dict

	def __post_init__(self):
		for mask, subset in self.mapping.items():
			if subset <= 0 or subset & ~mask:
				throw(f"Filter image {subset:#x} is not a non-empty subset of {mask:#x}")

	def menu_weights(self, mask, grand):
		if mask not in self.mapping:
			throw(f"Filter map is not defined on {grand.format_menu(mask)}")
		return {self.mapping[mask]: 1.0}

	def __hash__(self):
		return hash(("ExplicitFilter", tuple(sorted(self.mapping.items()))))


@dataclass(frozen=True)
class Mixture:
	"""Convex combination of attention specs"""

	components: tuple

	def __post_init__(self):
		object.__setattr__(self, "components", tuple((spec, float(w)) for spec, w in self.components))
		if not self.components:
			throw("A mixture needs at least one component")
		if any(w < 0 for _, w in self.components):
			throw("Mixture weights must be nonnegative")
		total = sum(w for _, w in self.components)
		if abs(total - 1.0) > WEIGHT_TOLERANCE:
			throw(f"Mixture weights sum to {total}, expected 1")

	def menu_weights(self, mask, grand):
		weights = {}
		for spec, share in self.components:
			if share == 0:
				continue
			for t, w in spec.menu_weights(mask, grand).items():
				weights[t] = weights.get(t, 0.0) + share * w
		return weights


SPEC_TYPES = (
	FullAttention, TopN, AtMostK, Uniform, LogitWeights, IndependentConsideration,
	Dogit, EliminationByAspects, CorrelatedConsideration, ExplicitFilter, Mixture,
)


def check_spec(spec):
	"""Raise unless `spec` is one of the attention families"""
	if not isinstance(spec, SPEC_TYPES):
		raise ValidationError(f"Unknown attention model spec {type(spec).__name__}")
	return spec
