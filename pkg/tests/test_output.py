# coding=utf8
"""Test Output

Tests the report encoding, the per-trial CSV, and the diagnostics written to \
standard error
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-29"

# Ouroboros imports
import jsonb

# Pip imports
import numpy as np
import pytest

# Python imports
from decimal import Decimal
import math

# Local imports
from group_genericity import output

@pytest.fixture
def loud():
	bBefore = output.verbose()
	output.verbose(True)
	yield
	output.verbose(bBefore)

class TestPlain:

	def test_numpy(self):
		assert output.plain({
			'a': np.float64(0.5), 'b': np.int32(3), 'c': np.bool_(True),
			'd': np.arange(3)
		}) == {'a': 0.5, 'b': 3, 'c': True, 'd': [0, 1, 2]}

	def test_non_finite(self):
		assert output.plain([math.nan, math.inf, 1.0]) == [None, None, 1.0]

	def test_decimal(self):
		assert output.plain(Decimal('0.25')) == 0.25

	def test_keys_keep_order(self):
		d = output.plain({2: 'b', 1: 'a'})
		assert list(d.keys()) == ['2', '1']

class TestEncode:

	def test_same_text(self):
		d = {'command': 'egc-mc', 'values': np.array([0.1, math.nan])}
		assert output.encode(d) == output.encode(d)
		assert output.encode(d).endswith('\n')
		assert output.plain(jsonb.decode(output.encode(d))) == \
			{'command': 'egc-mc', 'values': [0.1, None]}

	def test_read_json(self, tmp_path):
		oPath = tmp_path / 'x.json'
		oPath.write_text('{"a": 1.5, "b": [1, 2]}')
		assert output.read_json(str(oPath)) == {'a': 1.5, 'b': [1, 2]}

class TestTrialsCsv:

	def test_header_only(self):
		assert output.trials_csv([]) == ','.join(output.TRIAL_COLUMNS) + '\n'

	def test_cells(self):
		sCsv = output.trials_csv([{
			'trial_index': 3, 'performance': 1.0, 'ratio_est': None,
			'ratio_truth': 0.1, 'converged': False, 'p_value': math.nan
		}])
		assert sCsv.splitlines()[1] == '3,1.0,,0.1,0,'

class TestMessages:

	def test_quiet(self, capsys):
		bBefore = output.verbose()
		output.verbose(False)
		output.print_message('Title', 'body')
		output.verbose(bBefore)
		assert capsys.readouterr().err == ''

	def test_verbose(self, capsys, loud):
		output.print_message('Trial 4', 'not converged')
		oCaptured = capsys.readouterr()
		assert oCaptured.out == ''
		assert 'Trial 4 - ' in oCaptured.err
		assert 'not converged' in oCaptured.err

	def test_error(self, capsys):
		output.print_error('main', KeyError('seed'), argv = ['egc-mc'])
		sErr = capsys.readouterr().err
		assert 'Unknown Error in main' in sErr
		assert "argv = ['egc-mc']" in sErr
		assert 'exception = KeyError' in sErr
		assert 'args = seed' in sErr
