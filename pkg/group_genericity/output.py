# coding=utf8
"""Genericity Output

Verbose diagnostics on standard error plus JSON and CSV emission of reports. \
Nothing in here ever writes diagnostics to standard output so that reports \
stay byte-identical between runs
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-12"

# Limit exports
__all__ = [
	'TRIAL_COLUMNS', 'encode', 'print_error', 'print_message', 'plain',
	'read_json', 'trials_csv', 'verbose'
]

# Pip imports
import arrow
import jsonb
import numpy as np

# Python imports
import csv
from decimal import Decimal
import io
import math
import os
import sys

# Verbose mode
__verbose = os.environ.get('GENERICITY_VERBOSE', '') in ('1', 'true', 'yes')

TRIAL_COLUMNS = [
	'trial_index', 'performance', 'ratio_est', 'ratio_truth', 'converged',
	'p_value'
]
"""Trial Columns

The fixed order of the columns in per-trial CSV reports"""

def encode(data: any) -> str:
	"""Encode

	Turns a report into the JSON text written by the CLI. Values are first \
	converted to plain Python types so the text is the same on every platform

	Arguments:
		data (any): The report to encode

	Returns:
		str
	"""
	return jsonb.encode(plain(data), 2) + '\n'

def plain(value: any) -> any:
	"""Plain

	Recursively converts numpy scalars and arrays, and the Decimals of \
	decoded JSON, to Python types, and non-finite floats to None

	Arguments:
		value (any): The value to convert

	Returns:
		any
	"""

	# Dicts keep their insertion order
	if isinstance(value, dict):
		return {str(k): plain(v) for k, v in value.items()}

	# Lists, tuples, and arrays
	if isinstance(value, (list, tuple)):
		return [plain(v) for v in value]
	if isinstance(value, np.ndarray):
		return [plain(v) for v in value.tolist()]

	# Booleans before numbers, bool is an int
	if isinstance(value, (bool, np.bool_)):
		return bool(value)
	if isinstance(value, (int, np.integer)):
		return int(value)
	if isinstance(value, (float, np.floating, Decimal)):
		f = float(value)
		return f if math.isfinite(f) else None

	# Anything else as is
	return value

def read_json(path: str) -> any:
	"""Read JSON

	Loads a JSON file with its numbers as plain ints and floats

	Arguments:
		path (str): The path of the file

	Raises:
		OSError
		ValueError

	Returns:
		any
	"""
	return plain(jsonb.load(path))

def print_error(where: str, e: Exception, **details) -> None:
	"""Print Error

	Prints the details of an unexpected exception to standard error

	Arguments:
		where (str): The name of the function the exception was caught in
		e (Exception): The exception
		details (dict): Any additional named values worth printing

	Returns:
		None
	"""
	print('\n----------------------------------------', file=sys.stderr)
	print('Unknown Error in %s' % where, file=sys.stderr)
	for k, v in details.items():
		print('%s = %s' % (k, str(v)), file=sys.stderr)
	print('exception = %s' % str(e.__class__.__name__), file=sys.stderr)
	print(
		'args = %s' % ', '.join([str(s) for s in e.args]),
		file=sys.stderr
	)

def print_message(title: str, message: str = '') -> None:
	"""Print Message

	Prints a timestamped block to standard error if verbose mode is on

	Arguments:
		title (str): The title of the block
		message (str): Optional, the body of the block

	Returns:
		None
	"""
	if __verbose:
		print('----------------------------------------\n%s - %s\n\n%s\n' % (
			title,
			arrow.get().format('YYYY-MM-DD HH:mm:ss'),
			message
		), file=sys.stderr)

def trials_csv(rows: list[dict]) -> str:
	"""Trials CSV

	Generates the CSV text of a per-trial table, one row per trial, in the \
	fixed column order

	Arguments:
		rows (dict[]): The rows, each with at least the TRIAL_COLUMNS keys

	Returns:
		str
	"""

	# Write into a buffer with unix line endings
	oBuffer = io.StringIO()
	oWriter = csv.writer(oBuffer, lineterminator='\n')
	oWriter.writerow(TRIAL_COLUMNS)

	# Go through each row
	for d in rows:
		l = []
		for k in TRIAL_COLUMNS:
			m = plain(d.get(k))
			if m is None:
				l.append('')
			elif isinstance(m, bool):
				l.append('1' if m else '0')
			elif isinstance(m, float):
				l.append(repr(m))
			else:
				l.append(str(m))
		oWriter.writerow(l)

	# Return the text
	return oBuffer.getvalue()

def verbose(set_: bool = None) -> bool | None:
	"""Verbose

	Sets/Gets the verbose flag

	Arguments:
		set_ (bool | None): Ignore to get the current value

	Returns
		bool | None
	"""
	global __verbose
	if set_ is None:
		return __verbose
	else:
		__verbose = set_
