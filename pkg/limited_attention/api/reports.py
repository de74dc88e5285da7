"""JSON reports written by the command line."""

import json
import sys
from datetime import datetime

from dateutil import tz

from limited_attention import hooks
from limited_attention.utils.config import config_hash


def now():
	"""Timezone-aware timestamp in the report timezone"""
	return datetime.now(tz.gettz(hooks.report_timezone))


def envelope(command, config, result):
	"""Versioned report wrapping a command result"""
	return {
		"schema": hooks.report_schema,
		"app": hooks.app_name,
		"version": hooks.app_version,
		"command": command,
		"generated_at": now().isoformat(),
		"config_hash": config_hash(config),
		"config": config,
		"result": result,
	}


def test_payload(result, grand):
	"""Decision, statistic, critical value, p-value and the worst rows"""
	payload = result.as_dict(grand)
	diagnostics = result.diagnostics
	for key in ("n_total", "n_rows", "kappa", "beta", "beta_critical_value", "level"):
		if key in diagnostics:
			payload[key] = diagnostics[key]
	if "active_rows" in diagnostics:
		payload["active_rows"] = len(diagnostics["active_rows"])
	payload["worst_rows"] = diagnostics.get("worst_rows", [])
	return payload


def confidence_set_payload(confidence, grand):
	"""Accepted preferences plus every tested preference sorted by p-value"""
	tested = sorted(confidence.results.values(), key=lambda r: (-r.p_value, r.preference.ranking))
	return {
		"accepted": list(confidence.accepted.labels(grand)),
		"accepted_count": len(confidence),
		"tested_count": len(confidence.results),
		"preferences": [r.as_dict(grand) for r in tested],
	}


def specification_payload(confidence, grand):
	"""Model rejected iff nothing survives"""
	p_values = confidence.p_values()
	return {
		"reject": confidence.is_empty(),
		"accepted_count": len(confidence),
		"tested_count": len(confidence.results),
		"max_p_value": max(p_values.values()) if p_values else None,
		"accepted": list(confidence.accepted.labels(grand)),
	}


def write_json(report, path=None):
	"""Write a report to `path`, or to stdout when no path is given"""
	text = json.dumps(report, indent=2, default=str)
	if path:
		with open(path, "w", encoding="utf-8") as handle:
			handle.write(text + "\n")
	else:
		sys.stdout.write(text + "\n")
	return text
