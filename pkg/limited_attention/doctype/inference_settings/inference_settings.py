import json
import math
import os
from dataclasses import asdict, dataclass, replace
from typing import Optional

from limited_attention.exceptions import ConfigError, ValidationError, throw

SETTINGS_JSON = os.path.join(os.path.dirname(__file__), "inference_settings.json")

GMS = "gms"
PLUG_IN = "pi"
LEAST_FAVORABLE = "lf"
TWO_STEP_MS = "ms2"
TWO_STEP_UB = "ub2"
METHODS = (GMS, PLUG_IN, LEAST_FAVORABLE, TWO_STEP_MS, TWO_STEP_UB)

METHOD_ALIASES = {
	"gms": GMS,
	"generalizedmomentselection": GMS,
	"pi": PLUG_IN,
	"plugin": PLUG_IN,
	"lf": LEAST_FAVORABLE,
	"leastfavorable": LEAST_FAVORABLE,
	"ms2": TWO_STEP_MS,
	"twostepms": TWO_STEP_MS,
	"ub2": TWO_STEP_UB,
	"twostepub": TWO_STEP_UB,
}

FIELD_CASTS = {"Float": float, "Int": int, "Select": str, "Data": str}


def normalize_method(method):
	"""Canonical short code of a critical-value method"""
	key = str(method).lower().replace("-", "").replace("_", "").replace(" ", "")
	if key not in METHOD_ALIASES:
		raise ValidationError(f"Unknown method '{method}', expected one of {', '.join(METHODS)}")
	return METHOD_ALIASES[key]


def load_field_definitions(path=SETTINGS_JSON):
	"""Field definitions {fieldname: field dict} from the settings JSON"""
	with open(path, encoding="utf-8") as handle:
		doc = json.load(handle)
	return {field["fieldname"]: field for field in doc["fields"]}


def cast_field(field, value):
	"""Value cast by the field type; empty means None"""
	if value is None or value == "":
		return None
	try:
		return FIELD_CASTS[field["fieldtype"]](value)
	except (TypeError, ValueError):
		raise ConfigError(f"{field['label']} expects {field['fieldtype']}, got '{value}'") from None


@dataclass(frozen=True)
class InferenceSettings:
	"""Options of the simulated critical values"""

	method: str = GMS
	alpha: float = 0.05
	draws: int = 2000
	kappa: Optional[float] = None
	beta: Optional[float] = None
	sigma_floor: float = 1e-6
	seed: Optional[int] = 20170101
	two_step_scope: str = "preference"

	def __post_init__(self):
		object.__setattr__(self, "method", normalize_method(self.method))
		self.validate()

	@classmethod
	def from_defaults(cls):
		"""Settings built from the JSON field defaults"""
		return cls.from_dict({})

	@classmethod
	def from_dict(cls, values):
		"""Defaults overridden by `values`; unknown keys are an error"""
		fields = load_field_definitions()
		unknown = set(values) - set(fields)
		if unknown:
			raise ConfigError(f"Unknown inference settings: {', '.join(sorted(unknown))}")

		settings = {}
		for name, field in fields.items():
			raw = values.get(name, field.get("default"))
			settings[name] = cast_field(field, raw)
		return cls(**settings)

	def validate(self):
		"""Parameter domains, including the two-step beta ranges"""
		if not 0.0 <= self.alpha < 1.0:
			throw(f"alpha must lie in [0, 1), got {self.alpha}")
		if int(self.draws) < 1:
			throw(f"Need at least one simulation draw, got {self.draws}")
		if self.kappa is not None and not self.kappa > 0:
			throw(f"kappa must be positive, got {self.kappa}")
		if not self.sigma_floor >= 0:
			throw(f"sigma_floor must be nonnegative, got {self.sigma_floor}")
		if self.two_step_scope not in ("preference", "collection"):
			throw(f"Unknown two-step scope '{self.two_step_scope}'")

		beta = self.beta_value
		if self.method == TWO_STEP_MS and not 0.0 < beta < self.alpha / 3.0:
			throw(f"Two-step moment selection needs 0 < beta < alpha/3, got beta={beta}")
		if self.method == TWO_STEP_UB and not 0.0 < beta < self.alpha:
			throw(f"Two-step upper bounding needs 0 < beta < alpha, got beta={beta}")

	@property
	def beta_value(self):
		"""beta, defaulting to alpha / 10"""
		return self.alpha / 10.0 if self.beta is None else float(self.beta)

	def kappa_for(self, n_total):
		"""kappa, defaulting to sqrt(ln N) (at least 1)"""
		if self.kappa is not None:
			return float(self.kappa)
		return math.sqrt(math.log(max(n_total, math.e)))

	def with_values(self, **values):
		return replace(self, **values)

	def as_dict(self):
		return asdict(self)
