"""Choice dataset files.

One observation per row under the header ``menu,choice``. The menu is its
labels sorted ascending and joined by ``|``, the choice is a single label.
"""

import re

import numpy as np
import pandas as pd

from limited_attention.doctype.choice_dataset.choice_dataset import ChoiceDataset
from limited_attention.doctype.grand_set.grand_set import LABEL_PATTERN, GrandSet
from limited_attention.doctype.menu_index.menu_index import LIMITED, build_menu_index
from limited_attention.exceptions import DatasetFormatError
from limited_attention.utils.logger import logger

HEADER = ["menu", "choice"]
MENU_SEPARATOR = "|"
PARSER_LINE = re.compile(r"line (\d+)")


def _read_frame(path):
	try:
		frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=False)
	except pd.errors.EmptyDataError:
		raise DatasetFormatError("empty file", line=1) from None
	except pd.errors.ParserError as e:
		found = PARSER_LINE.search(str(e))
		line = int(found.group(1)) if found else None
		raise DatasetFormatError(f"malformed row: {str(e)}", line=line) from None
	# short rows come back as NaN
	return frame.fillna("")


def _parse_rows(frame):
	"""(menu labels, choice label) per row, with format checks"""
	rows = []
	for i, (menu_text, choice) in enumerate(zip(frame["menu"], frame["choice"])):
		line = i + 2
		menu_text, choice = menu_text.strip(), choice.strip()
		if not menu_text or not choice:
			raise DatasetFormatError("malformed row: expected 'menu,choice'", line=line)

		labels = menu_text.split(MENU_SEPARATOR)
		for label in labels + [choice]:
			if not LABEL_PATTERN.match(label):
				raise DatasetFormatError(f"invalid label '{label}'", line=line)
		if len(set(labels)) != len(labels):
			raise DatasetFormatError(f"menu '{menu_text}' repeats a label", line=line)
		if len(labels) < 2:
			raise DatasetFormatError(f"singleton menu '{menu_text}' carries no information", line=line)
		if choice not in labels:
			raise DatasetFormatError(f"choice not in menu: '{choice}' is not in '{menu_text}'", line=line)
		rows.append((labels, choice))
	return rows


def ingest_csv(path):
	"""(ChoiceDataset, GrandSet, MenuIndex) from a dataset file

	The grand set is the sorted union of menu labels and the index is a
	limited-mode index over the observed menus.
	"""
	frame = _read_frame(path)
	if list(frame.columns) != HEADER:
		raise DatasetFormatError(f"header must be '{','.join(HEADER)}', got '{','.join(map(str, frame.columns))}'", line=1)
	if frame.empty:
		raise DatasetFormatError("empty file: no observations after the header", line=2)

	rows = _parse_rows(frame)
	grand = GrandSet(tuple(sorted({label for labels, _ in rows for label in labels})))
	menus = np.array([grand.menu(labels) for labels, _ in rows], dtype=np.int64)
	choices = np.array([grand.id_of(choice) for _, choice in rows], dtype=np.int64)

	dataset = ChoiceDataset(grand, menus, choices)
	index = build_menu_index(grand, LIMITED, dataset.observed_menus())
	logger("dataset_io").info(f"Read {dataset.n_total} observations on {len(index.menus)} menus from {path}")
	return dataset, grand, index


def write_csv(dataset, path):
	"""Write a dataset in the ``menu,choice`` format"""
	grand = dataset.grand
	menu_text = {
		mask: MENU_SEPARATOR.join(sorted(grand.menu_labels(mask))) for mask in dataset.observed_menus()
	}
	frame = pd.DataFrame({
		"menu": [menu_text[int(mask)] for mask in dataset.menus],
		"choice": [grand.labels[int(c)] for c in dataset.choices],
	})
	frame.to_csv(path, index=False, encoding="utf-8")
	return path
