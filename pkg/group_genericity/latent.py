# coding=utf8
"""Genericity Latent

Latent variable models: synthetic NMF and gaussian mixture generators, the \
performance metrics of fitted models, their generic ratios, and the \
experiment drivers running many seeded trials of each
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-20"

# Limit exports
__all__ = [
	'CLUSTER_ALGORITHMS', 'ClusterExperimentConfig', 'NMF_ALGORITHMS',
	'NmfExperimentConfig', 'TrialRecord', 'cluster_generic_ratio',
	'cluster_performance', 'generate_gmm_instance', 'generate_nmf_instance',
	'nmf_generic_ratio', 'nmf_performance', 'run_cluster_experiment',
	'run_nmf_experiment', 'run_nmf_sweep', 'summarize_trials'
]

# Pip imports
import numpy as np
from scipy.optimize import linear_sum_assignment

# Python imports
from dataclasses import dataclass, field, replace
import math

# Local imports
from group_genericity import output, solvers
from group_genericity.contrasts import \
	GaussianMixture, NmfFactors, center_mixture, mixture_quartic_contrast, \
	nmf_centered_contrast
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException, GenericityException
from group_genericity.genericity import \
	GenericityReport, assess, egc_mixture, egc_nmf, generic_ratio, \
	mixture_rotation_egc
from group_genericity.groups import RngState, sample_orthogonal
from group_genericity.workers import run_trials

CLUSTER_ALGORITHMS = ['kmeans', 'gm_em']
"""Cluster Algorithms"""

NMF_ALGORITHMS = ['mult', 'als']
"""NMF Algorithms"""

@dataclass
class NmfExperimentConfig(object):
	"""NMF Experiment Config

	The synthetic NMF ensemble and the solver fitted to each of its instances
	"""
	d: int = 20
	s: int = 50
	n_true: int = 5
	p_bernoulli: float = 0.1
	noise_amplitude: float = 0.01
	n_est: int = 5
	algorithm: str = 'mult'
	n_trials: int = 200
	seed: int = 0
	max_iters: int = 500
	tol: float = 1e-6

	def validate(self) -> NmfExperimentConfig:
		"""Validate

		Checks the config and returns it

		Raises:
			GenericityConfigException

		Returns:
			NmfExperimentConfig
		"""

		# Go through each rule
		lErrors = []
		if not 1 <= self.n_true <= min(self.d, self.s):
			lErrors.append(['n_true', 'must be in [1, min(d, s)]'])
		if not 0 < self.p_bernoulli <= 1:
			lErrors.append(['p_bernoulli', 'must be in (0, 1]'])
		if self.noise_amplitude < 0:
			lErrors.append(['noise_amplitude', 'must be >= 0'])
		if self.n_est < 1:
			lErrors.append(['n_est', 'must be >= 1'])
		if self.algorithm not in NMF_ALGORITHMS:
			lErrors.append(['algorithm', 'not one of %s' % NMF_ALGORITHMS])
		if self.n_trials < 1:
			lErrors.append(['n_trials', 'must be >= 1'])
		if self.max_iters < 1 or self.tol <= 0:
			lErrors.append(['max_iters', 'iterations and tolerance must be > 0'])

		# If there's any errors
		if lErrors:
			raise GenericityConfigException('invalid-config', lErrors)
		return self

@dataclass
class ClusterExperimentConfig(object):
	"""Cluster Experiment Config

	The synthetic gaussian mixture ensemble and the clustering algorithm \
	fitted to each of its instances. special switches the Monte-Carlo \
	cross-check from O(p) to SO(p)
	"""
	K: int = 5
	p: int = 20
	mean_std: float = 2.0
	eigenvalue_range: tuple[float, float] = (0.1, 1.0)
	samples_per_trial: int = 1000
	algorithm: str = 'kmeans'
	n_trials: int = 100
	success_threshold: float = 0.99
	seed: int = 0
	monte_carlo: bool = False
	n_rotations: int = 200
	special: bool = False

	def validate(self) -> ClusterExperimentConfig:
		"""Validate

		Checks the config and returns it

		Raises:
			GenericityConfigException

		Returns:
			ClusterExperimentConfig
		"""
		self.eigenvalue_range = tuple(float(f) for f in self.eigenvalue_range)

		# Go through each rule
		lErrors = []
		if self.K < 2:
			lErrors.append(['K', 'must be >= 2'])
		if self.p < 2:
			lErrors.append(['p', 'must be >= 2'])
		if not self.mean_std > 0:
			lErrors.append(['mean_std', 'must be > 0'])
		if len(self.eigenvalue_range) != 2 or \
			not 0 < self.eigenvalue_range[0] <= self.eigenvalue_range[1]:
			lErrors.append(['eigenvalue_range', 'must be [low, high], 0 < low <= high'])
		if self.samples_per_trial < self.K * (self.p + 1):
			lErrors.append(['samples_per_trial', 'must be >= K (p + 1)'])
		if self.algorithm not in CLUSTER_ALGORITHMS:
			lErrors.append(['algorithm', 'not one of %s' % CLUSTER_ALGORITHMS])
		if self.n_trials < 1:
			lErrors.append(['n_trials', 'must be >= 1'])
		if not 0 < self.success_threshold <= 1:
			lErrors.append(['success_threshold', 'must be in (0, 1]'])
		if self.monte_carlo and self.n_rotations < 2:
			lErrors.append(['n_rotations', 'must be >= 2'])

		# If there's any errors
		if lErrors:
			raise GenericityConfigException('invalid-config', lErrors)
		return self

@dataclass
class TrialRecord(object):
	"""Trial Record

	The outcome of one trial. Ratios are NaN when they could not be computed, \
	and converged is false when the solver failed or ran out of iterations
	"""
	trial_index: int
	performance: float
	generic_ratio_estimated: float
	generic_ratio_ground_truth: float
	converged: bool
	p_value: float | None = None
	error: str | None = field(default=None, compare=False)

	def to_row(self) -> dict:
		"""To Row

		Returns the record keyed by the per-trial CSV columns

		Returns:
			dict
		"""
		return {
			'trial_index': self.trial_index,
			'performance': self.performance,
			'ratio_est': self.generic_ratio_estimated,
			'ratio_truth': self.generic_ratio_ground_truth,
			'converged': self.converged,
			'p_value': self.p_value
		}

def generate_nmf_instance(
	cfg: NmfExperimentConfig,
	rng: RngState
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Generate NMF Instance

	W is uniform on [0, 1], V is sparse with Bernoulli selected uniform \
	entries, any column of V left empty is drawn again, and X = W Vᵀ plus \
	uniform noise of the configured amplitude

	Arguments:
		cfg (NmfExperimentConfig): The ensemble
		rng (RngState): The random state

	Returns:
		tuple (W, V, X)
	"""
	oGen = rng.generator

	# The dense factor
	aW = oGen.uniform(size=(cfg.d, cfg.n_true))

	# The sparse one, column by column so empty ones can be redrawn
	aV = np.zeros((cfg.s, cfg.n_true))
	for j in range(cfg.n_true):
		while not np.any(aV[:, j]):
			aMask = oGen.uniform(size=cfg.s) < cfg.p_bernoulli
			aV[:, j] = aMask * oGen.uniform(size=cfg.s)

	# The data
	aX = aW @ aV.T
	if cfg.noise_amplitude > 0:
		aX = aX + cfg.noise_amplitude * oGen.uniform(size=aX.shape)

	# Return the instance
	return aW, aV, aX

def nmf_performance(W_true: np.ndarray, W_est: np.ndarray) -> float:
	"""NMF Performance

	The mean cosine similarity between columns of the true W and their \
	matches in the estimated W, the one to one matching maximising the total

	Arguments:
		W_true (numpy.ndarray): The d x n true factor
		W_est (numpy.ndarray): The d x n' estimated factor

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the shapes
	aT = np.atleast_2d(np.asarray(W_true, dtype=float))
	aE = np.atleast_2d(np.asarray(W_est, dtype=float))
	if aT.shape[0] == 0 or aE.shape[0] == 0 or 0 in aT.shape or 0 in aE.shape:
		raise GenericityDataException('invalid-input', 'factors have no rows')
	if aT.shape[0] != aE.shape[0]:
		raise GenericityDataException(
			'shape', 'factors have %d and %d rows' % (aT.shape[0], aE.shape[0])
		)

	# Unit columns, zero columns stay zero
	def unit(a):
		aNorm = np.linalg.norm(a, axis=0)
		return a / np.where(aNorm > 0, aNorm, 1.0)

	# Match
	aSim = unit(aT).T @ unit(aE)
	aRows, aCols = linear_sum_assignment(aSim, maximize=True)

	# Return the mean similarity
	return float(np.clip(aSim[aRows, aCols].mean(), 0.0, 1.0))

def nmf_generic_ratio(f: NmfFactors) -> float:
	"""NMF Generic Ratio

	The centered NMF contrast over its expectation under permutations of \
	the components, computed on the balanced factors

	Arguments:
		f (NmfFactors): The factors, with at least 3 components

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""

	# Two components always give 1
	if f.n < 3:
		raise GenericityDegenerateException(
			'degenerate-diagnostic',
			'the ratio is identically 1 under %d components' % f.n
		)

	# Return the ratio
	oBalanced = f.balanced()
	return generic_ratio(
		nmf_centered_contrast(oBalanced), egc_nmf(oBalanced)
	)

def generate_gmm_instance(
	cfg: ClusterExperimentConfig,
	rng: RngState
) -> tuple[GaussianMixture, np.ndarray, np.ndarray]:
	"""Generate GMM Instance

	Means from an isotropic gaussian, covariances with Haar random axes and \
	log-uniform eigenvalues, equal weights, then samples with their labels

	Arguments:
		cfg (ClusterExperimentConfig): The ensemble
		rng (RngState): The random state

	Returns:
		tuple (GaussianMixture, samples, labels)
	"""
	oGen = rng.generator
	fLow, fHigh = cfg.eigenvalue_range

	# Means
	aMeans = cfg.mean_std * oGen.standard_normal((cfg.K, cfg.p))

	# Covariances
	aCovs = np.empty((cfg.K, cfg.p, cfg.p))
	for k in range(cfg.K):
		if fLow == fHigh:
			aCovs[k] = fLow * np.eye(cfg.p)
		else:
			aEig = np.exp(oGen.uniform(math.log(fLow), math.log(fHigh), cfg.p))
			aCovs[k] = sample_orthogonal(cfg.p, rng).conjugate(np.diag(aEig))

	# The mixture and its samples
	oTruth = GaussianMixture(np.full(cfg.K, 1.0 / cfg.K), aMeans, aCovs)
	aX, aLabels = oTruth.sample(cfg.samples_per_trial, rng)
	return oTruth, aX, aLabels

def cluster_performance(
	true_labels: np.ndarray,
	est_labels: np.ndarray
) -> float:
	"""Cluster Performance

	Accuracy of the estimated labels once matched to the true ones, the \
	matching maximising the agreements of the confusion matrix

	Arguments:
		true_labels (int[]): The true labels
		est_labels (int[]): The estimated labels

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the lengths
	aT = np.asarray(true_labels).ravel()
	aE = np.asarray(est_labels).ravel()
	if aT.size != aE.size or aT.size == 0:
		raise GenericityDataException(
			'shape', 'label vectors have lengths %d and %d' % (aT.size, aE.size)
		)

	# Confusion matrix over the distinct labels
	_, aTi = np.unique(aT, return_inverse=True)
	_, aEi = np.unique(aE, return_inverse=True)
	aConfusion = np.zeros((aTi.max() + 1, aEi.max() + 1))
	np.add.at(aConfusion, (aTi, aEi), 1)

	# Match and return the accuracy
	aRows, aCols = linear_sum_assignment(aConfusion, maximize=True)
	return float(aConfusion[aRows, aCols].sum() / aT.size)

def _cluster_report(
	fit: GaussianMixture,
	monte_carlo: bool = False,
	rng: RngState | None = None,
	n_rotations: int = 200,
	special: bool = False
) -> GenericityReport:
	"""Cluster Report

	Recenters a mixture and measures its quartic contrast against the closed \
	form EGC, and against a Monte-Carlo null of rotated means when asked

	Raises:
		GenericityConfigException
		GenericityDegenerateException

	Returns:
		GenericityReport
	"""
	oCentered = center_mixture(fit)
	fContrast = mixture_quartic_contrast(oCentered)

	# Closed form only
	if not monte_carlo:
		fEgc = egc_mixture(oCentered)
		return GenericityReport(
			fContrast, fEgc, generic_ratio(fContrast, fEgc)
		)

	# Cross-check with rotations
	if rng is None:
		raise GenericityConfigException(
			'invalid-parameter', 'monte_carlo needs a random state'
		)
	oNull = mixture_rotation_egc(oCentered, n_rotations, rng, special)
	return assess(fContrast, oNull)

def cluster_generic_ratio(
	fit: GaussianMixture,
	monte_carlo: bool = False,
	rng: RngState | None = None,
	n_rotations: int = 200,
	special: bool = False
) -> float:
	"""Cluster Generic Ratio

	The quartic contrast of the recentered mixture over its expectation \
	under rotations of the means. With monte_carlo set, the expectation is \
	the mean over n_rotations sampled rotations instead of the closed form

	Arguments:
		fit (GaussianMixture): The mixture
		monte_carlo (bool): Optional, true to estimate the EGC by sampling
		rng (RngState): Optional, the random state, needed with monte_carlo
		n_rotations (uint): Optional, the number of sampled rotations
		special (bool): Optional, true to sample SO(p) instead of O(p)

	Raises:
		GenericityConfigException
		GenericityDegenerateException

	Returns:
		float
	"""

	return _cluster_report(
		fit, monte_carlo, rng, n_rotations, special
	).generic_ratio

def _nan_ratio(func, *args) -> float:
	"""NaN Ratio

	Calls a ratio function, returning NaN if it can not be computed

	Returns:
		float
	"""
	try:
		return func(*args)
	except GenericityException:
		return math.nan

def _nmf_trial(task: tuple[NmfExperimentConfig, int]) -> TrialRecord:
	"""NMF Trial

	Generates one instance, fits it, and records the outcome

	Arguments:
		task (tuple): The config and the trial index

	Returns:
		TrialRecord
	"""
	oCfg, iTrial = task
	oRng = RngState(oCfg.seed).derive(iTrial)

	# Generate
	aW, aV, aX = generate_nmf_instance(oCfg, oRng)
	fTruth = _nan_ratio(nmf_generic_ratio, NmfFactors(aW, aV))

	# Fit
	fSolver = solvers.nmf_multiplicative \
		if oCfg.algorithm == 'mult' else solvers.nmf_als
	try:
		oFit = fSolver(aX, oCfg.n_est, oRng, oCfg.max_iters, oCfg.tol)
	except (GenericityException, np.linalg.LinAlgError) as e:
		output.print_message('NMF trial %d failed' % iTrial, str(e))
		return TrialRecord(
			iTrial, 0.0, math.nan, fTruth, False, error=str(e)
		)

	# Return the record
	return TrialRecord(
		iTrial,
		nmf_performance(aW, oFit.W),
		_nan_ratio(nmf_generic_ratio, oFit),
		fTruth,
		oFit.converged
	)

def _cluster_trial(task: tuple[ClusterExperimentConfig, int]) -> TrialRecord:
	"""Cluster Trial

	Generates one instance, clusters it, and records the outcome

	Arguments:
		task (tuple): The config and the trial index

	Returns:
		TrialRecord
	"""
	oCfg, iTrial = task
	oRng = RngState(oCfg.seed).derive(iTrial)

	# Generate
	oTruth, aX, aLabels = generate_gmm_instance(oCfg, oRng)
	fTruth = _nan_ratio(cluster_generic_ratio, oTruth)

	# Fit
	try:
		if oCfg.algorithm == 'kmeans':
			aEst, oFit = solvers.kmeans(aX, oCfg.K, oRng)
		else:
			aResp, oFit = solvers.gmm_em(aX, oCfg.K, oRng)
			aEst = aResp.argmax(axis=1)
	except (GenericityException, np.linalg.LinAlgError) as e:
		output.print_message('Cluster trial %d failed' % iTrial, str(e))
		return TrialRecord(
			iTrial, 0.0, math.nan, fTruth, False, error=str(e)
		)

	# Diagnose the fit
	fRatio = math.nan
	fP = None
	try:
		oReport = _cluster_report(
			oFit, oCfg.monte_carlo, oRng.derive(0), oCfg.n_rotations,
			oCfg.special
		)
		fRatio = oReport.generic_ratio
		fP = oReport.p_value
	except GenericityException as e:
		output.print_message('Cluster trial %d ratio' % iTrial, str(e))

	# Return the record
	return TrialRecord(
		iTrial, cluster_performance(aLabels, aEst), fRatio, fTruth,
		oFit.converged, fP
	)

def run_cluster_experiment(
	cfg: ClusterExperimentConfig,
	workers: int = 1
) -> list[TrialRecord]:
	"""Run Cluster Experiment

	Runs every trial of the clustering experiment. A trial whose fit fails \
	is recorded as not converged and the batch carries on

	Arguments:
		cfg (ClusterExperimentConfig): The experiment
		workers (uint): Optional, the number of processes

	Raises:
		GenericityConfigException

	Returns:
		TrialRecord[]
	"""
	cfg.validate()
	output.print_message(
		'Cluster experiment', '%d trials of %s' % (cfg.n_trials, cfg.algorithm)
	)
	return run_trials(
		_cluster_trial, [(cfg, i) for i in range(cfg.n_trials)], workers
	)

def run_nmf_experiment(
	cfg: NmfExperimentConfig,
	workers: int = 1
) -> list[TrialRecord]:
	"""Run NMF Experiment

	Runs every trial of the NMF experiment. A trial whose solver fails is \
	recorded as not converged and the batch carries on

	Arguments:
		cfg (NmfExperimentConfig): The experiment
		workers (uint): Optional, the number of processes

	Raises:
		GenericityConfigException

	Returns:
		TrialRecord[]
	"""
	cfg.validate()
	output.print_message(
		'NMF experiment', '%d trials of %s with %d components' % (
			cfg.n_trials, cfg.algorithm, cfg.n_est
		)
	)
	return run_trials(
		_nmf_trial, [(cfg, i) for i in range(cfg.n_trials)], workers
	)

def run_nmf_sweep(
	cfg: NmfExperimentConfig,
	n_est_values: list[int],
	workers: int = 1
) -> dict[int, list[TrialRecord]]:
	"""Run NMF Sweep

	Runs the NMF experiment once per assumed number of components, on the \
	same seeded instances each time

	Arguments:
		cfg (NmfExperimentConfig): The experiment, n_est is replaced
		n_est_values (uint[]): The assumed numbers of components
		workers (uint): Optional, the number of processes

	Raises:
		GenericityConfigException

	Returns:
		dict
	"""
	return {
		int(i): run_nmf_experiment(replace(cfg, n_est = int(i)), workers)
		for i in n_est_values
	}

def _spread(values: np.ndarray) -> dict | None:
	"""Spread

	Count, median, interquartile range and standard deviation of the finite \
	values, None when there are none

	Returns:
		dict | None
	"""
	aValues = values[np.isfinite(values)]
	if aValues.size == 0:
		return None
	fQ1, fMedian, fQ3 = np.percentile(aValues, [25, 50, 75])
	return {
		'count': int(aValues.size),
		'median': float(fMedian),
		'iqr': float(fQ3 - fQ1),
		'std': float(aValues.std(ddof=1)) if aValues.size > 1 else 0.0,
		'median_distance': float(np.median(np.abs(aValues - 1.0)))
	}

def summarize_trials(records: list[TrialRecord], threshold: float) -> dict:
	"""Summarize Trials

	Splits the trials on performance >= threshold and describes the spread \
	of the estimated ratios on both sides, and of the ground truth ratios

	Arguments:
		records (TrialRecord[]): The trials
		threshold (float): The performance counted as a success

	Returns:
		dict
	"""

	# Nothing to describe
	if not records:
		return {'trials': 0, 'failure_rate': None}

	# Gather the columns
	aPerf = np.array([o.performance for o in records])
	aEst = np.array([o.generic_ratio_estimated for o in records])
	aTruth = np.array([o.generic_ratio_ground_truth for o in records])
	aSuccess = aPerf >= threshold

	# Return the summary
	return {
		'trials': len(records),
		'threshold': float(threshold),
		'failure_rate': float(1.0 - aSuccess.mean()),
		'converged_rate': float(np.mean([o.converged for o in records])),
		'estimated': _spread(aEst),
		'successful': _spread(aEst[aSuccess]),
		'failed': _spread(aEst[~aSuccess]),
		'ground_truth': _spread(aTruth)
	}
