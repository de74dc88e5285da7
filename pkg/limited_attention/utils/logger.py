import logging
import os

from limited_attention import hooks

LOGGER_NAME = hooks.app_name
DEFAULT_TITLE = "Limited Attention"

_configured = False


def logger(module=None):
	"""Get the package logger, or a child logger for `module`"""
	_configure()
	if module:
		return logging.getLogger(f"{LOGGER_NAME}.{module}")
	return logging.getLogger(LOGGER_NAME)


def log_error(message, title=DEFAULT_TITLE):
	"""Record an error entry under a title"""
	logger().error(f"[{title}] {message}")
	return message


def _configure():
	"""Attach a stream handler once, level from the environment"""
	global _configured
	if _configured:
		return

	root = logging.getLogger(LOGGER_NAME)
	level = os.environ.get(hooks.log_level_env, "WARNING").upper()
	if not isinstance(logging.getLevelName(level), int):
		level = "WARNING"
	root.setLevel(level)

	if not root.handlers:
		handler = logging.StreamHandler()
		handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
		root.addHandler(handler)

	_configured = True
