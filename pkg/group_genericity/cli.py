# coding=utf8
"""Genericity CLI

The command line entry point. Resolves the configuration of a subcommand, \
validates it before any work starts, runs it, and writes the JSON report to \
standard output and any per-trial table to a CSV file
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-23"

# Limit exports
__all__ = ['COMMANDS', 'main', 'resolve']

# Ouroboros imports
import define
from jobject import jobject
from tools import merge, without
import undefined

# Python imports
import argparse
from copy import deepcopy
import os
import sys

# Local imports
from group_genericity import output
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, GenericityException
from group_genericity.genericity import scenario_report
from group_genericity.groups import RngState
from group_genericity.latent import \
	ClusterExperimentConfig, NmfExperimentConfig, run_cluster_experiment, \
	run_nmf_experiment, run_nmf_sweep, summarize_trials
from group_genericity.pairwise import \
	infer_direction_sic, infer_direction_trace, load_pairs_csv, \
	load_series_csv
from group_genericity.scenes import infer_occlusion_order, load_fixture
from group_genericity.workers import default_workers

COMMANDS = {
	'pair-trace': 'pair_trace',
	'pair-sic': 'pair_sic',
	'nmf-experiment': 'nmf_experiment',
	'cluster-experiment': 'cluster_experiment',
	'egc-mc': 'egc_mc',
	'scene-demo': 'scene_demo'
}
"""Commands

The subcommands and the configuration blocks describing them"""

RUNTIME_KEYS = ['command', 'config', 'verbose', 'workers']
"""Runtime Keys

Arguments that change how a command runs but never what it outputs"""

__here = os.path.dirname(os.path.abspath(__file__))

def _definition_path(name: str) -> str:
	return os.path.join(__here, 'definitions', '%s.json' % name)

def resolve(
	block: str,
	flags: dict,
	config_file: str = undefined
) -> jobject:
	"""Resolve

	Builds the configuration of a block from the built-in defaults, then \
	the optional config file, then the flags, and validates the result \
	against the block's definition

	Arguments:
		block (str): The name of the configuration block
		flags (dict): The values given on the command line
		config_file (str): Optional, the path of a JSON config file

	Raises:
		GenericityConfigException

	Returns:
		jobject
	"""

	# Load the definition and the defaults
	dDefinition = output.read_json(_definition_path(block))
	dConf = jobject(deepcopy(output.read_json(_definition_path('defaults'))[block]))

	# Overwrite with the file
	if config_file is not undefined:
		try:
			dFile = output.read_json(config_file)
		except (OSError, ValueError) as e:
			raise GenericityConfigException(
				'invalid-config', '%s: %s' % (config_file, str(e))
			)
		if not isinstance(dFile, dict):
			raise GenericityConfigException(
				'invalid-config', '%s must hold a JSON object' % config_file
			)
		merge(dConf, dFile)

	# Then with the flags
	merge(dConf, flags)

	# Floats may have been written as ints
	for k, d in dDefinition.items():
		if d.get('__type__') == 'float' and isinstance(dConf.get(k), int) and \
			not isinstance(dConf.get(k), bool):
			dConf[k] = float(dConf[k])

	# Validate
	oParent = define.Parent(dDefinition)
	if not oParent.valid(dict(dConf)):
		raise GenericityConfigException(
			'invalid-config', oParent.validation_failures
		)

	# Return the config
	return dConf

def _report(command: str, conf: jobject, **fields) -> dict:
	"""Report

	Starts a report with the command, its resolved config, and its seed

	Returns:
		dict
	"""
	return {
		'command': command,
		'config': dict(conf),
		'seed': conf.seed,
		**fields
	}

def _pair_trace(conf: jobject, workers: int) -> tuple[dict, str | None]:
	aX, aY = load_pairs_csv(conf.input)
	oVerdict = infer_direction_trace(aX, aY, conf.epsilon)
	return _report(
		'pair-trace', conf, samples = aX.shape[0], verdict = oVerdict.to_dict()
	), None

def _pair_sic(conf: jobject, workers: int) -> tuple[dict, str | None]:
	oPair = load_series_csv(conf.input)
	oVerdict = infer_direction_sic(
		oPair, conf.segment, conf.overlap, conf.epsilon
	)
	return _report(
		'pair-sic', conf, samples = oPair.T, verdict = oVerdict.to_dict()
	), None

def _nmf_experiment(conf: jobject, workers: int) -> tuple[dict, str | None]:
	"""NMF Experiment

	Runs the NMF experiment, or the n_est sweep when one is given

	Raises:
		GenericityConfigException

	Returns:
		tuple (report, csv)
	"""
	oCfg = NmfExperimentConfig(
		d = conf.d, s = conf.s, n_true = conf.n_true,
		p_bernoulli = conf.p_bernoulli, noise_amplitude = conf.noise_amplitude,
		n_est = conf.n_est, algorithm = conf.algorithm, n_trials = conf.trials,
		seed = conf.seed, max_iters = conf.max_iters, tol = conf.tol
	).validate()

	# A sweep over the number of components
	if conf.get('sweep'):
		if conf.get('out'):
			raise GenericityConfigException(
				'invalid-config', 'out can not be combined with sweep'
			)
		try:
			lValues = [int(s) for s in conf.sweep.split(',')]
		except ValueError:
			raise GenericityConfigException(
				'invalid-config', 'sweep must be a comma separated list of ints'
			)
		dSweep = run_nmf_sweep(oCfg, lValues, workers)
		return _report('nmf-experiment', conf, sweep = {
			str(k): summarize_trials(l, conf.failure_threshold)
			for k, l in dSweep.items()
		}), None

	# One batch
	lRecords = run_nmf_experiment(oCfg, workers)
	return _report(
		'nmf-experiment', conf,
		summary = summarize_trials(lRecords, conf.failure_threshold)
	), output.trials_csv([o.to_row() for o in lRecords])

def _cluster_experiment(conf: jobject, workers: int) -> tuple[dict, str | None]:
	oCfg = ClusterExperimentConfig(
		K = conf.K, p = conf.p, mean_std = conf.mean_std,
		eigenvalue_range = (conf.eigenvalue_low, conf.eigenvalue_high),
		samples_per_trial = conf.samples_per_trial, algorithm = conf.algorithm,
		n_trials = conf.trials, success_threshold = conf.success_threshold,
		seed = conf.seed, monte_carlo = conf.monte_carlo,
		n_rotations = conf.n_rotations, special = conf.special
	).validate()
	lRecords = run_cluster_experiment(oCfg, workers)
	return _report(
		'cluster-experiment', conf,
		performance_metric = 'accuracy under optimal label matching',
		summary = summarize_trials(lRecords, conf.success_threshold)
	), output.trials_csv([o.to_row() for o in lRecords])

def _egc_mc(conf: jobject, workers: int) -> tuple[dict, str | None]:
	try:
		dScenario = output.read_json(conf.input)
	except (OSError, ValueError) as e:
		raise GenericityDataException(
			'invalid-input', '%s: %s' % (conf.input, str(e))
		)
	if not isinstance(dScenario, dict):
		raise GenericityDataException(
			'invalid-input', '%s must hold a JSON object' % conf.input
		)
	return _report('egc-mc', conf, **scenario_report(
		dScenario, conf.samples, RngState(conf.seed), conf.special,
		conf.get('contrast')
	)), None

def _scene_demo(conf: jobject, workers: int) -> tuple[dict, str | None]:

	# Fall back on the shipped fixtures
	sPath = conf.fixture
	if not os.path.exists(sPath):
		sPath = os.path.join(__here, 'fixtures', os.path.basename(sPath))

	oA, oB = load_fixture(sPath)
	oVerdict = infer_occlusion_order(
		oA, oB, conf.rotations, RngState(conf.seed), conf.angle_tol,
		conf.offset_tol
	)
	return _report(
		'scene-demo', conf,
		hypotheses = [oA.name or 'a', oB.name or 'b'],
		**oVerdict.to_dict()
	), None

__handlers = {
	'pair-trace': _pair_trace,
	'pair-sic': _pair_sic,
	'nmf-experiment': _nmf_experiment,
	'cluster-experiment': _cluster_experiment,
	'egc-mc': _egc_mc,
	'scene-demo': _scene_demo
}

def _parser() -> argparse.ArgumentParser:
	"""Parser

	Builds the argument parser. Flags left out are left out of the parsed \
	namespace, so only the ones given override the config

	Returns:
		argparse.ArgumentParser
	"""
	oParser = argparse.ArgumentParser(
		prog = 'group-genericity',
		description = 'Group invariance diagnostics of cause-mechanism models',
		argument_default = argparse.SUPPRESS
	)
	oSubs = oParser.add_subparsers(dest = 'command', required = True)

	# Flags every subcommand takes
	oCommon = argparse.ArgumentParser(
		add_help = False, argument_default = argparse.SUPPRESS
	)
	oCommon.add_argument('--config', help = 'JSON file of config values')
	oCommon.add_argument('--seed', type = int, help = '64-bit seed')
	oCommon.add_argument('--workers', type = int, help = 'worker processes')
	oCommon.add_argument('--verbose', action = 'store_true')

	def sub(name, help_):
		return oSubs.add_parser(
			name, help = help_, parents = [oCommon],
			argument_default = argparse.SUPPRESS
		)

	# Pairs
	o = sub('pair-trace', 'Trace Method on a CSV of x0.. and y0.. columns')
	o.add_argument('--input', required = True)
	o.add_argument('--epsilon', type = float)
	o = sub('pair-sic', 'Spectral independence on a CSV of x and y series')
	o.add_argument('--input', required = True)
	o.add_argument('--segment', type = int)
	o.add_argument('--overlap', type = float)
	o.add_argument('--epsilon', type = float)

	# NMF
	o = sub('nmf-experiment', 'Seeded NMF trials')
	o.add_argument('--d', type = int)
	o.add_argument('--s', type = int)
	o.add_argument('--n-true', dest = 'n_true', type = int)
	o.add_argument('--p-bernoulli', dest = 'p_bernoulli', type = float)
	o.add_argument('--noise-amplitude', dest = 'noise_amplitude', type = float)
	o.add_argument('--n-est', dest = 'n_est', type = int)
	o.add_argument('--sweep', help = 'comma separated n_est values')
	o.add_argument('--algorithm', choices = ['mult', 'als'])
	o.add_argument('--trials', type = int)
	o.add_argument('--max-iters', dest = 'max_iters', type = int)
	o.add_argument('--tol', type = float)
	o.add_argument('--failure-threshold', dest = 'failure_threshold', type = float)
	o.add_argument('--out', help = 'CSV file of per-trial records')

	# Clusters
	o = sub('cluster-experiment', 'Seeded clustering trials')
	o.add_argument('--K', type = int)
	o.add_argument('--p', type = int)
	o.add_argument('--mean-std', dest = 'mean_std', type = float)
	o.add_argument('--eigenvalue-low', dest = 'eigenvalue_low', type = float)
	o.add_argument('--eigenvalue-high', dest = 'eigenvalue_high', type = float)
	o.add_argument('--samples', dest = 'samples_per_trial', type = int)
	o.add_argument('--algorithm', choices = ['kmeans', 'gm_em'])
	o.add_argument('--trials', type = int)
	o.add_argument('--success-threshold', dest = 'success_threshold', type = float)
	o.add_argument('--monte-carlo', dest = 'monte_carlo', action = 'store_true')
	o.add_argument('--rotations', dest = 'n_rotations', type = int)
	o.add_argument('--special', action = 'store_true')
	o.add_argument('--out', help = 'CSV file of per-trial records')

	# Monte-Carlo EGC
	o = sub('egc-mc', 'Monte-Carlo EGC of a JSON scenario')
	o.add_argument('--input', required = True)
	o.add_argument('--contrast')
	o.add_argument('--samples', type = int)
	o.add_argument('--special', action = 'store_true')

	# Scenes
	o = sub('scene-demo', 'Occlusion order of a scene fixture')
	o.add_argument('--fixture')
	o.add_argument('--rotations', type = int)
	o.add_argument('--angle-tol', dest = 'angle_tol', type = float)
	o.add_argument('--offset-tol', dest = 'offset_tol', type = float)

	# Return the parser
	return oParser

def main(argv: list[str] | None = None) -> int:
	"""Main

	Runs one subcommand. Returns 0 on success, 2 for configuration errors \
	and bad flags, 3 for data errors, 4 for numerical degeneracy, and 1 for \
	anything unexpected

	Arguments:
		argv (str[]): Optional, the arguments, defaults to sys.argv[1:]

	Returns:
		int
	"""

	# Parse, argparse exits 2 with its usage on standard error
	try:
		dArgs = vars(_parser().parse_args(argv))
	except SystemExit as e:
		return int(e.code or 0)

	sCommand = dArgs['command']
	if dArgs.get('verbose'):
		output.verbose(True)

	try:

		# Resolve the config and the worker count
		oConf = resolve(
			COMMANDS[sCommand],
			without(dArgs, RUNTIME_KEYS),
			dArgs.get('config', undefined)
		)
		iWorkers = dArgs['workers'] if 'workers' in dArgs else default_workers()
		if iWorkers < 1:
			raise GenericityConfigException(
				'invalid-config', 'workers must be at least 1'
			)
		output.print_message(
			sCommand, 'workers = %d\n%s' % (iWorkers, output.encode(oConf))
		)

		# Run
		dReport, sCsv = __handlers[sCommand](oConf, iWorkers)

		# Write the table, then the report
		if sCsv is not None and oConf.get('out'):
			with open(oConf.out, 'w', newline = '') as oF:
				oF.write(sCsv)
		sys.stdout.write(output.encode(dReport))
		return 0

	# Known failures
	except GenericityException as e:
		print('%s error (%s): %s' % (
			sCommand, e.kind, e.message
		), file = sys.stderr)
		return e.exit_code

	# Anything else
	except Exception as e:
		output.print_error('%s' % sCommand, e, argv = argv)
		return 1
