from dataclasses import dataclass, field

from limited_attention.exceptions import throw


@dataclass(frozen=True)
class TestResult:
	"""Outcome of testing one preference"""

	__test__ = False

	statistic: float
	critical_value: float
	p_value: float
	reject: bool
	method: str
	preference: object = None
	diagnostics: dict = field(default_factory=dict, compare=False, hash=False)

	def __post_init__(self):
		self.validate()

	def validate(self):
		if self.reject != (self.statistic > self.critical_value):
			throw("reject must equal statistic > critical value")
		if not 0.0 <= self.p_value <= 1.0:
			throw(f"p-value {self.p_value} outside [0, 1]")

	def as_dict(self, grand=None):
		payload = {
			"statistic": float(self.statistic),
			"critical_value": float(self.critical_value),
			"p_value": float(self.p_value),
			"reject": bool(self.reject),
			"method": self.method,
		}
		if self.preference is not None:
			payload["preference"] = self.preference.label(grand) if grand else list(self.preference.ranking)
		return payload


@dataclass(frozen=True, eq=False)
class ConfidenceSet:
	"""Accepted preferences plus the test result of every preference tried"""

	accepted: object
	results: dict

	def __len__(self):
		return len(self.accepted)

	def __contains__(self, pref):
		return pref in self.accepted

	def is_empty(self):
		return self.accepted.is_empty()

	def p_values(self):
		return {pref: result.p_value for pref, result in self.results.items()}
