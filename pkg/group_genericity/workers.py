# coding=utf8
"""Genericity Workers

Runs independent trials, in this process or across a pool of processes, and \
hands the results back in trial order
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-21"

# Limit exports
__all__ = ['default_workers', 'run_trials']

# Python imports
from concurrent.futures import ProcessPoolExecutor
import os
from typing import Callable, Iterable

# Local imports
from group_genericity.exceptions import GenericityConfigException

def default_workers() -> int:
	"""Default Workers

	Returns the worker count set in the GENERICITY_WORKERS environment \
	variable, or 1

	Raises:
		GenericityConfigException

	Returns:
		uint
	"""
	sWorkers = os.environ.get('GENERICITY_WORKERS', '1')
	try:
		iWorkers = int(sWorkers)
	except ValueError:
		iWorkers = 0
	if iWorkers < 1:
		raise GenericityConfigException(
			'invalid-config',
			'GENERICITY_WORKERS must be a positive integer, got "%s"' % sWorkers
		)
	return iWorkers

def run_trials(
	func: Callable[[any], any],
	tasks: Iterable[any],
	workers: int = 1
) -> list:
	"""Run Trials

	Calls func on each task and returns the results in the order of the \
	tasks. With more than one worker the calls are spread over a process \
	pool, so func and the tasks have to be picklable (module level functions \
	and plain data). Each task carries everything its trial needs, including \
	the trial index its random state derives from, so the results do not \
	depend on the number of workers

	Arguments:
		func (callable): The trial function
		tasks (iterable): The arguments, one per trial
		workers (uint): Optional, the number of processes, defaults to 1

	Raises:
		GenericityConfigException

	Returns:
		list
	"""

	# Check the count
	if workers < 1:
		raise GenericityConfigException(
			'invalid-config', 'workers must be at least 1'
		)

	# Serial
	lTasks = list(tasks)
	if workers == 1 or len(lTasks) < 2:
		return [func(m) for m in lTasks]

	# Pooled, map keeps the order of the tasks
	with ProcessPoolExecutor(max_workers=min(workers, len(lTasks))) as oPool:
		return list(oPool.map(
			func, lTasks, chunksize=max(1, len(lTasks) // (4 * workers))
		))
