"""Command line: ``limited-attention <command> [options]``.

Options come from an optional key=value file (--config) overridden by
flags. Exit codes follow hooks.exit_codes.
"""

import argparse
import sys

from limited_attention import hooks
from limited_attention.api.attention import build_attention, sample_dataset, synthesize_choice_rule
from limited_attention.api.constraints import constraint_matrix_for
from limited_attention.api.dataset_io import ingest_csv, write_csv
from limited_attention.api.estimation import estimate_choice_rule
from limited_attention.api.inference import confidence_set, test_preference
from limited_attention.api.reports import (
	confidence_set_payload,
	envelope,
	specification_payload,
	test_payload,
	write_json,
)
from limited_attention.api.revelation import MAX_IDENTIFIED_SET_ALTERNATIVES, identified_set
from limited_attention.doctype.attention_model_spec.attention_model_spec import (
	AtMostK,
	Dogit,
	EliminationByAspects,
	FullAttention,
	IndependentConsideration,
	LogitWeights,
	TopN,
	Uniform,
)
from limited_attention.doctype.experiment_grid.experiment_grid import ExperimentGrid
from limited_attention.doctype.grand_set.grand_set import GrandSet
from limited_attention.doctype.inference_settings.inference_settings import InferenceSettings, load_field_definitions
from limited_attention.doctype.menu_index.menu_index import COMPLETE, LIMITED, all_menus, build_menu_index
from limited_attention.doctype.preference.preference import Preference
from limited_attention.exceptions import AttentionModelError, ConfigError
from limited_attention.tasks.benchmark import DEFAULT_COUNTS, run_benchmark
from limited_attention.tasks.monte_carlo import run_experiment_grid
from limited_attention.utils.config import KNOWN_KEYS, load_config_file, merge_config
from limited_attention.utils.logger import logger

MODELS = ("logit", "uniform", "full", "topn", "atmostk", "independent", "dogit", "eba")
GRID_KEYS = {
	"alternatives": "alternatives",
	"pref": "dgp_preference",
	"model": "family",
	"varsigma": "varsigma",
	"k": "k",
	"gamma": "gamma",
	"ns": "effective_ns",
	"phis": "phis",
	"hypotheses": "hypotheses",
	"replications": "replications",
	"alpha": "alpha",
	"method": "method",
	"draws": "draws",
	"seed": "seed",
}


# Option parsing

def _number(config, key, cast=float, default=None):
	value = config.get(key)
	if value is None or value == "":
		return default
	try:
		return cast(value)
	except (TypeError, ValueError):
		raise ConfigError(f"Option '{key}' expects a {cast.__name__}, got '{value}'") from None


def _required(config, key):
	if not config.get(key):
		raise ConfigError(f"Option '{key}' is required for this command")
	return config[key]


def _subset_weights(text, grand, what):
	"""{menu mask: weight} from 'a|b:0.5;c:0.5'"""
	table = {}
	for item in str(text).split(";"):
		item = item.strip()
		if not item:
			continue
		if ":" not in item:
			raise ConfigError(f"{what} entries look like 'a|b:0.5', got '{item}'")
		labels, weight = item.rsplit(":", 1)
		try:
			table[grand.menu(labels.split("|"))] = float(weight)
		except ValueError:
			raise ConfigError(f"{what} weight '{weight}' is not a number") from None
	return table


def inference_settings(config):
	"""InferenceSettings from the options that name one of its fields"""
	fields = load_field_definitions()
	return InferenceSettings.from_dict({k: v for k, v in config.items() if k in fields and v is not None})


def model_spec(config, grand, pref):
	"""Attention model named by the `model` option"""
	model = str(config.get("model") or "logit").lower()
	if model == "logit":
		return LogitWeights(varsigma=_number(config, "varsigma", default=2.0))
	if model == "uniform":
		return Uniform()
	if model == "full":
		return FullAttention()
	if model == "topn":
		return TopN(pref, _number(config, "topn", int, default=2))
	if model == "atmostk":
		return AtMostK(_number(config, "k", int, default=2))
	if model == "independent":
		gamma = tuple(float(g) for g in str(_required(config, "gamma")).split(","))
		return IndependentConsideration(gamma)
	if model == "dogit":
		captivity = _subset_weights(config.get("captivity") or "", grand, "captivity")
		return Dogit(varsigma=_number(config, "varsigma", default=2.0), captivity=captivity)
	if model == "eba":
		aspects = _subset_weights(_required(config, "aspects"), grand, "aspects")
		return EliminationByAspects(tuple(aspects.items()), config.get("fallback") or "redraw")
	raise ConfigError(f"Unknown model '{model}', expected one of {', '.join(MODELS)}")


def analysis_index(config, grand, observed):
	"""Complete index when asked for (or when every menu is observed), else the observed one"""
	mode = config.get("mode")
	if mode is None:
		mode = COMPLETE if len(observed.menus) == len(all_menus(grand.size)) else LIMITED
	if mode == COMPLETE:
		return build_menu_index(grand, COMPLETE)
	if mode == LIMITED:
		return observed
	raise ConfigError(f"Unknown mode '{mode}', expected complete or limited")


def _load_estimate(config):
	dataset, grand, observed = ingest_csv(_required(config, "data"))
	index = analysis_index(config, grand, observed)
	return estimate_choice_rule(dataset, index), grand


# Commands

def cmd_simulate(config):
	"""Synthesize a choice rule, sample a dataset and write it as CSV"""
	grand = GrandSet.numbered(_number(config, "alternatives", int, default=5))
	pref = Preference.parse(config["pref"], grand) if config.get("pref") else Preference.identity(grand.size)
	index = build_menu_index(grand, COMPLETE)
	rule = synthesize_choice_rule(pref, build_attention(model_spec(config, grand, pref), index))

	n_total = _number(config, "n_total", int)
	n_per_menu = None if n_total else _number(config, "n", int, default=100)
	dataset = sample_dataset(rule, n_per_menu=n_per_menu, n_total=n_total, seed=_number(config, "seed", int))
	write_csv(dataset, _required(config, "out"))

	result = {"alternatives": list(grand.labels), "preference": pref.label(grand), "observations": dataset.n_total}
	if grand.size <= MAX_IDENTIFIED_SET_ALTERNATIVES:
		phi = _number(config, "phi")
		result["identified_set"] = identified_set(rule, phi=phi).labels(grand)
	write_json(envelope("simulate", config, result))
	return hooks.exit_codes["ok"]


def cmd_ingest(config):
	"""Summarize a dataset file"""
	dataset, grand, index = ingest_csv(_required(config, "data"))
	estimate = estimate_choice_rule(dataset, index)
	table = estimate.pi_hat.to_table()
	menus = []
	for pos, mask in enumerate(index.menus):
		menus.append({
			"menu": grand.format_menu(mask),
			"observations": int(estimate.n_per_menu[pos]),
			"pi_hat": {grand.labels[a]: float(p) for a, p in table[mask].items()},
		})
	result = {"alternatives": list(grand.labels), "observations": dataset.n_total, "menus": menus}
	write_json(envelope("ingest", config, result), config.get("out"))
	return hooks.exit_codes["ok"]


def cmd_test(config):
	"""Test one preference; exit 1 when rejected"""
	estimate, grand = _load_estimate(config)
	pref = Preference.parse(_required(config, "pref"), grand)
	phi = _number(config, "phi")
	result = test_preference(estimate, pref, phi=phi, settings=inference_settings(config))

	if config.get("export_matrix"):
		constraint_matrix_for(pref, estimate.index, phi).export_csv(config["export_matrix"])

	write_json(envelope("test", config, test_payload(result, grand)), config.get("out"))
	return hooks.exit_codes["rejected"] if result.reject else hooks.exit_codes["ok"]


def cmd_confset(config):
	"""Confidence set over all preferences"""
	estimate, grand = _load_estimate(config)
	confidence = confidence_set(estimate, phi=_number(config, "phi"), settings=inference_settings(config))
	write_json(envelope("confset", config, confidence_set_payload(confidence, grand)), config.get("out"))
	return hooks.exit_codes["ok"]


def cmd_spectest(config):
	"""Specification test; exit 1 when the model is rejected"""
	estimate, grand = _load_estimate(config)
	confidence = confidence_set(estimate, phi=_number(config, "phi"), settings=inference_settings(config))
	write_json(envelope("spectest", config, specification_payload(confidence, grand)), config.get("out"))
	return hooks.exit_codes["rejected"] if confidence.is_empty() else hooks.exit_codes["ok"]


def cmd_mc(config):
	"""Monte Carlo grid; long-format CSV to --out or stdout"""
	grid = ExperimentGrid.from_dict({GRID_KEYS[k]: v for k, v in config.items() if k in GRID_KEYS and v is not None})
	report = run_experiment_grid(grid, n_jobs=_number(config, "jobs", int, default=1))
	if config.get("out"):
		report.to_csv(config["out"])
	else:
		report.table.to_csv(sys.stdout, index=False)
	logger("commands").info(f"Monte Carlo report: {report.metadata()}")
	return hooks.exit_codes["ok"]


def cmd_bench(config):
	"""Timing table for K alternatives and a list of preference counts"""
	counts = DEFAULT_COUNTS
	if config.get("counts"):
		counts = tuple(int(c) for c in str(config["counts"]).split(","))
	table = run_benchmark(
		size=_number(config, "alternatives", int, default=6),
		counts=counts,
		draws=_number(config, "draws", int, default=2000),
		seed=_number(config, "seed", int, default=20170101),
		n_per_menu=_number(config, "n", int, default=221),
	)
	if config.get("out"):
		table.to_csv(config["out"], index=False)
	else:
		table.to_csv(sys.stdout, index=False)
	return hooks.exit_codes["ok"]


COMMANDS = {
	"simulate": cmd_simulate,
	"ingest": cmd_ingest,
	"test": cmd_test,
	"confset": cmd_confset,
	"spectest": cmd_spectest,
	"mc": cmd_mc,
	"bench": cmd_bench,
}


def build_parser():
	options = argparse.ArgumentParser(add_help=False)
	options.add_argument("--config", help="key=value options file")
	for key in sorted(KNOWN_KEYS):
		options.add_argument("--" + key.replace("_", "-"), dest=key, default=None)

	parser = argparse.ArgumentParser(prog="limited-attention", description=hooks.app_description)
	sub = parser.add_subparsers(dest="command", required=True)
	for name, handler in COMMANDS.items():
		sub.add_parser(name, parents=[options], help=handler.__doc__.splitlines()[0])
	return parser


def main(argv=None):
	args = build_parser().parse_args(argv)
	flags = {key: getattr(args, key) for key in KNOWN_KEYS}
	try:
		file_values = load_config_file(args.config) if args.config else {}
		config = merge_config(file_values, flags)
		return COMMANDS[args.command](config)
	except (AttentionModelError, OSError, ValueError) as e:
		sys.stderr.write(f"error: {str(e)}\n")
		return hooks.exit_codes["error"]


if __name__ == "__main__":
	sys.exit(main())
