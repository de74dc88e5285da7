class AttentionModelError(Exception):
	"""Base error for limited_attention"""


class ValidationError(AttentionModelError):
	"""Invalid input or parameter outside its domain"""


class ConfigError(ValidationError):
	"""Unknown or malformed configuration value"""


class IndexModeError(AttentionModelError):
	"""Operation used with a complete/limited index it does not support"""


class EnumerationLimitError(AttentionModelError):
	"""Number of alternatives too large for an enumeration"""


class NotTriangularError(AttentionModelError):
	"""Attention rule puts weight outside the lower contour sets"""


class NotMonotoneError(AttentionModelError):
	"""Attention rule violates monotonicity"""


class DecompositionError(AttentionModelError):
	"""Filter decomposition failed where a solution must exist"""


class EstimationError(AttentionModelError):
	"""Dataset cannot be estimated on the requested index"""


class NumericalError(AttentionModelError):
	"""Numerical defect: negative variance, non-PSD block, zero-sigma division"""


class DatasetFormatError(ValidationError):
	"""Malformed dataset file"""

	def __init__(self, message, line=None):
		self.line = line
		if line is not None:
			message = f"line {line}: {message}"
		super().__init__(message)


def throw(message, exc=ValidationError):
	"""Raise `exc` with the given message"""
	raise exc(message)
