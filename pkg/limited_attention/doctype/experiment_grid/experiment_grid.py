import os
from dataclasses import dataclass, field, replace

import pandas as pd

from limited_attention import hooks
from limited_attention.doctype.attention_model_spec.attention_model_spec import (
	AtMostK,
	FullAttention,
	IndependentConsideration,
	LogitWeights,
	TopN,
	Uniform,
	check_spec,
)
from limited_attention.doctype.grand_set.grand_set import GrandSet
from limited_attention.doctype.inference_settings.inference_settings import (
	InferenceSettings,
	cast_field,
	load_field_definitions,
)
from limited_attention.doctype.preference.preference import Preference
from limited_attention.exceptions import ConfigError, throw

GRID_JSON = os.path.join(os.path.dirname(__file__), "experiment_grid.json")
LIST_SEPARATOR = ","
HYPOTHESIS_SEPARATOR = ";"
FAMILIES = ("logit", "uniform", "full", "topn", "atmostk", "independent")


def _split(text, separator, cast):
	try:
		return tuple(cast(part.strip()) for part in str(text).split(separator) if part.strip())
	except ValueError:
		raise ConfigError(f"Cannot read list '{text}'") from None


def family_spec(doc, dgp):
	"""Attention spec of the data generating process named by `family`"""
	family = str(doc.get("family") or "logit").lower()
	if family == "logit":
		return LogitWeights(varsigma=doc["varsigma"])
	if family == "uniform":
		return Uniform()
	if family == "full":
		return FullAttention()
	if family == "topn":
		return TopN(dgp, doc["k"])
	if family == "atmostk":
		return AtMostK(doc["k"])
	if family == "independent":
		if not doc.get("gamma"):
			raise ConfigError("The independent family needs gamma, one probability per alternative")
		gamma = _split(doc["gamma"], LIST_SEPARATOR, float)
		if len(gamma) != dgp.size:
			throw(f"gamma has {len(gamma)} probabilities for {dgp.size} alternatives")
		return IndependentConsideration(gamma)
	raise ConfigError(f"Unknown attention family '{family}', expected one of {', '.join(FAMILIES)}")


@dataclass(frozen=True)
class ExperimentGrid:
	"""Monte Carlo design: data generating process, phi levels, sample sizes and hypotheses"""

	grand: GrandSet
	dgp_preference: Preference
	spec: object
	phis: tuple
	effective_ns: tuple
	hypotheses: tuple
	replications: int = 500
	settings: InferenceSettings = field(default_factory=InferenceSettings)

	def __post_init__(self):
		object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
		object.__setattr__(self, "effective_ns", tuple(int(n) for n in self.effective_ns))
		object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
		self.validate()

	def validate(self):
		if not self.phis or not self.effective_ns or not self.hypotheses:
			throw("Experiment grid needs phi levels, sample sizes and hypotheses")
		if int(self.replications) < 1:
			throw(f"Need at least one replication, got {self.replications}")
		for phi in self.phis:
			if not 0.5 <= phi <= 1.0:
				throw(f"phi must lie in [1/2, 1], got {phi}")
		for n in self.effective_ns:
			if n < 1:
				throw(f"Observations per menu must be positive, got {n}")
		for pref in (self.dgp_preference,) + self.hypotheses:
			if pref.size != self.grand.size:
				throw(f"Preference {pref.ranking} does not rank the {self.grand.size} alternatives")
		if self.settings.seed is None:
			throw("Experiment grids need a fixed seed")
		check_spec(self.spec)

	@classmethod
	def from_defaults(cls):
		return cls.from_dict({})

	@classmethod
	def from_dict(cls, values):
		"""Grid from JSON defaults overridden by `values`; `family` picks the attention model"""
		fields = load_field_definitions(GRID_JSON)
		unknown = set(values) - set(fields)
		if unknown:
			raise ConfigError(f"Unknown experiment grid settings: {', '.join(sorted(unknown))}")
		raw = {name: values.get(name, f.get("default")) for name, f in fields.items()}
		doc = {name: cast_field(fields[name], value) for name, value in raw.items()}

		grand = GrandSet.numbered(doc["alternatives"])
		if doc["dgp_preference"]:
			dgp = Preference.parse(doc["dgp_preference"], grand)
		else:
			dgp = Preference.identity(grand.size)

		if "hypotheses" in values or grand.size == 5:
			hypotheses = tuple(Preference.parse(text, grand)
				for text in _split(doc["hypotheses"], HYPOTHESIS_SEPARATOR, str))
		else:
			hypotheses = (dgp, Preference(tuple(reversed(dgp.ranking))))

		return cls(
			grand=grand,
			dgp_preference=dgp,
			spec=family_spec(doc, dgp),
			phis=_split(doc["phis"], LIST_SEPARATOR, float),
			effective_ns=_split(doc["effective_ns"], LIST_SEPARATOR, int),
			hypotheses=hypotheses,
			replications=doc["replications"],
			settings=InferenceSettings(method=doc["method"], alpha=doc["alpha"], draws=doc["draws"], seed=doc["seed"]),
		)

	@property
	def seed(self):
		return self.settings.seed

	@property
	def alpha(self):
		return self.settings.alpha

	@property
	def method(self):
		return self.settings.method

	def hypothesis_names(self):
		"""H01, H02, ... in grid order"""
		return [f"H{i + 1:02d}" for i in range(len(self.hypotheses))]

	@property
	def n_cells(self):
		return len(self.hypotheses) * len(self.phis) * len(self.effective_ns)

	def with_values(self, **values):
		return replace(self, **values)

	def as_dict(self):
		return {
			"alternatives": self.grand.size,
			"dgp_preference": self.dgp_preference.label(self.grand),
			"spec": repr(self.spec),
			"phis": list(self.phis),
			"effective_ns": list(self.effective_ns),
			"hypotheses": [p.label(self.grand) for p in self.hypotheses],
			"replications": int(self.replications),
			"settings": self.settings.as_dict(),
		}


@dataclass(frozen=True, eq=False)
class RunReport:
	"""Long-format Monte Carlo table with run metadata"""

	table: pd.DataFrame
	seed: int
	config_hash: str
	wall_seconds: float
	failures: int = 0
	version: str = hooks.app_version

	def __post_init__(self):
		self.validate()

	def validate(self):
		missing = [c for c in hooks.mc_columns if c not in self.table.columns]
		if missing:
			throw(f"Run report misses columns: {', '.join(missing)}")
		rates = self.table["rejection_rate"]
		if ((rates < 0) | (rates > 1)).any():
			throw("Rejection rates must lie in [0, 1]")

	def cell(self, hypothesis, phi, n):
		"""The table row of one (hypothesis, phi, n) cell"""
		rows = self.table[
			(self.table["hypothesis"] == hypothesis)
			& ((self.table["phi"] - phi).abs() < 1e-12)
			& (self.table["n"] == n)
		]
		if rows.empty:
			throw(f"No cell ({hypothesis}, {phi}, {n}) in the run report")
		return rows.iloc[0]

	def to_csv(self, path):
		self.table.to_csv(path, index=False)
		return path

	def metadata(self):
		return {
			"seed": self.seed,
			"version": self.version,
			"config_hash": self.config_hash,
			"wall_seconds": self.wall_seconds,
			"failures": self.failures,
			"cells": int(len(self.table)),
		}
