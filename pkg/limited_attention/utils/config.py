import hashlib
import json

from limited_attention.exceptions import ConfigError

# Keys accepted in a key=value config file and as command-line flags
KNOWN_KEYS = {
	# data and hypotheses
	"data", "pref", "phi", "mode", "out", "export_matrix",
	# inference
	"method", "alpha", "draws", "beta", "kappa", "sigma_floor", "seed", "two_step_scope",
	# simulation model
	"alternatives", "model", "varsigma", "n", "n_total", "gamma", "captivity",
	"aspects", "fallback", "k", "topn",
	# monte carlo and benchmark
	"ns", "phis", "hypotheses", "replications", "jobs", "counts",
}


def load_config_file(path):
	"""{key: raw string} from a key=value file; '#' starts a comment"""
	values = {}
	with open(path, encoding="utf-8") as handle:
		for number, raw in enumerate(handle, start=1):
			line = raw.split("#", 1)[0].strip()
			if not line:
				continue
			if "=" not in line:
				raise ConfigError(f"{path}:{number}: expected key=value, got '{line}'")
			key, value = (part.strip() for part in line.split("=", 1))
			key = key.replace("-", "_")
			if key not in KNOWN_KEYS:
				raise ConfigError(f"{path}:{number}: unknown key '{key}'")
			values[key] = value
	return values


def merge_config(file_values, flag_values):
	"""File values overridden by every flag that was actually given"""
	merged = dict(file_values or {})
	for key, value in (flag_values or {}).items():
		if key not in KNOWN_KEYS:
			raise ConfigError(f"Unknown option '{key}'")
		if value is not None:
			merged[key] = value
	return merged


def config_hash(config):
	"""sha256 of the canonical JSON form of a config"""
	canonical = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
	return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
