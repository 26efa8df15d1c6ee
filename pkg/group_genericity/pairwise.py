# coding=utf8
"""Genericity Pairwise

Cause-effect direction inference on pairs of observables: the Trace Method \
for multivariate linear pairs, and the Spectral Independence Criterion for \
pairs of time series related by a linear time invariant filter
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-16"

# Limit exports
__all__ = [
	'DEFAULT_EPSILON', 'DIRECTIONS', 'DirectionVerdict', 'LinearPairModel',
	'TimeSeriesPair', 'TransferEstimate', 'estimate_transfer_magnitude',
	'fit_linear_pair', 'infer_direction_sic', 'infer_direction_trace',
	'load_pairs_csv', 'load_series_csv', 'sic_ratio', 'simulate_ar_ma_pair',
	'simulate_linear_pair', 'trace_condition_ratio', 'trace_generic_ratio',
	'welch_psd'
]

# Pip imports
import numpy as np
from scipy import signal

# Python imports
import csv
from dataclasses import asdict, dataclass
import math

# Local imports
from group_genericity.contrasts import \
	SampledPsd, as_covariance, total_power
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException
from group_genericity.genericity import \
	egc_trace, generic_ratio, trace_contrast
from group_genericity.groups import \
	RngState, sample_orthogonal, sample_special_orthogonal

DEFAULT_EPSILON = 0.01
"""Default Epsilon

Half width of the undecided band around a zero margin"""

DIRECTIONS = ['x_causes_y', 'y_causes_x', 'undecided']
"""Directions

The possible verdicts"""

FIT_CONDITION = 1e12
"""Fit Condition

The largest condition number of the cause covariance a regression accepts"""

MECHANISM_CONDITION = 1e10
"""Mechanism Condition

The largest condition number of a fitted square mechanism the Trace Method \
accepts"""

MIN_SERIES = 256
"""Min Series

The shortest series accepted for spectral estimation"""

SPECTRUM_FLOOR = 1e-12
"""Spectrum Floor

Bins of the input spectrum under this share of its maximum are floored"""

@dataclass
class DirectionVerdict(object):
	"""Direction Verdict

	The outcome of a pairwise inference. margin is |log forward_ratio| - \
	|log backward_ratio|, so a negative margin favours x causing y, and \
	margins within epsilon of zero are undecided
	"""
	direction: str
	forward_ratio: float
	backward_ratio: float
	margin: float
	method: str = 'trace'
	estimator: str | None = None
	epsilon: float = DEFAULT_EPSILON

	def to_dict(self) -> dict:
		"""To Dict

		Returns the verdict as a dict in field order

		Returns:
			dict
		"""
		return asdict(self)

@dataclass
class LinearPairModel(object):
	"""Linear Pair Model

	Y := M X + E with M m x n, the cause covariance Σ_X (n x n) and the noise \
	covariance Σ_E (m x m)
	"""
	M: np.ndarray
	sigma_x: np.ndarray
	sigma_e: np.ndarray

	def __post_init__(self):

		# Convert and check the covariances
		self.M = np.atleast_2d(np.asarray(self.M, dtype=float))
		self.sigma_x = as_covariance(self.sigma_x, 'Σ_X')
		self.sigma_e = as_covariance(self.sigma_e, 'Σ_E')

		# Check the shapes are consistent
		iM, iN = self.M.shape
		if self.sigma_x.shape != (iN, iN) or self.sigma_e.shape != (iM, iM):
			raise GenericityDataException(
				'shape', 'M is %s but Σ_X is %s and Σ_E is %s' % (
					self.M.shape, self.sigma_x.shape, self.sigma_e.shape
				)
			)

class TimeSeriesPair(object):
	"""Time Series Pair

	Two real series of the same length, assumed weakly stationary
	"""

	def __init__(self, x: np.ndarray, y: np.ndarray):
		"""Constructor

		Creates a new instance

		Arguments:
			x (float[]): The first series
			y (float[]): The second series

		Raises:
			GenericityDataException

		Returns:
			TimeSeriesPair
		"""

		# Store the series
		self.x: np.ndarray = np.asarray(x, dtype=float).ravel()
		self.y: np.ndarray = np.asarray(y, dtype=float).ravel()

		# Check the lengths
		if self.x.size != self.y.size:
			raise GenericityDataException(
				'shape', 'series have different lengths, %d and %d' % (
					self.x.size, self.y.size
				)
			)
		if self.x.size < MIN_SERIES:
			raise GenericityDataException(
				'invalid-input',
				'series need at least %d samples for spectral estimation' % \
					MIN_SERIES
			)

	@property
	def T(self) -> int:
		"""Length"""
		return self.x.size

	def swapped(self) -> TimeSeriesPair:
		"""Swapped

		Returns the pair with x and y exchanged

		Returns:
			TimeSeriesPair
		"""
		return TimeSeriesPair(self.y, self.x)

class TransferEstimate(SampledPsd):
	"""Transfer Estimate

	The squared magnitude of an estimated transfer function, sampled like a \
	spectrum, along with the bins where the input spectrum had to be floored

	Extends:
		SampledPsd
	"""

	estimator = 'cross-spectral'
	"""Estimator

	The name of the estimator, reported with every SIC verdict"""

	def __init__(self, values: np.ndarray, floored: list[int]):
		"""Constructor

		Creates a new instance

		Arguments:
			values (float[]): The |ĥ(ν)|² values
			floored (uint[]): The bins whose input spectrum was floored

		Returns:
			TransferEstimate
		"""
		super().__init__(values)
		self.floored: list[int] = list(floored)

def _check_spectral_config(length: int, segment: int, overlap: float) -> int:
	"""Check Spectral Config

	Validates Welch parameters and returns the number of overlapping samples

	Arguments:
		length (uint): The length of the series
		segment (uint): The segment length
		overlap (float): The overlap fraction

	Raises:
		GenericityConfigException

	Returns:
		uint
	"""

	# The segment must be a power of two that fits
	if segment < 2 or segment & (segment - 1):
		raise GenericityConfigException(
			'invalid-config', 'segment must be a power of two, got %d' % segment
		)
	if segment > length:
		raise GenericityConfigException(
			'invalid-config', 'segment %d is longer than the series (%d)' % (
				segment, length
			)
		)

	# Overlap is a fraction
	if not 0 <= overlap < 1:
		raise GenericityConfigException(
			'invalid-config', 'overlap must be in [0, 1), got %r' % overlap
		)

	# Return the overlap in samples
	return int(segment * overlap)

def _decide(
	forward: float,
	backward: float,
	epsilon: float,
	method: str,
	estimator: str | None = None
) -> DirectionVerdict:
	"""Decide

	Turns a pair of generic ratios into a verdict, the side whose ratio is \
	closer to one in log scale wins

	Arguments:
		forward (float): The ratio of the x to y model
		backward (float): The ratio of the y to x model
		epsilon (float): The half width of the undecided band
		method (str): The name of the method
		estimator (str): Optional, the name of the transfer estimator

	Raises:
		GenericityDegenerateException

	Returns:
		DirectionVerdict
	"""

	# Logs need positive ratios
	if not forward > 0 or not backward > 0:
		raise GenericityDegenerateException(
			'degenerate-model', 'generic ratios must be positive'
		)

	# Calculate the margin
	fMargin = abs(math.log(forward)) - abs(math.log(backward))

	# Pick the side
	if abs(fMargin) < epsilon:
		sDirection = 'undecided'
	elif fMargin < 0:
		sDirection = 'x_causes_y'
	else:
		sDirection = 'y_causes_x'

	# Return the verdict
	return DirectionVerdict(
		sDirection, float(forward), float(backward), float(fMargin), method,
		estimator, float(epsilon)
	)

def _welch(
	x: np.ndarray,
	y: np.ndarray | None,
	segment: int,
	overlap: float
) -> np.ndarray:
	"""Welch

	Two-sided Welch (cross) spectral density on the positive frequency half, \
	Hann windowed with the mean of each segment removed

	Arguments:
		x (float[]): The first series
		y (float[] | None): The second series, None for the auto spectrum
		segment (uint): The segment length
		overlap (float): The overlap fraction

	Raises:
		GenericityConfigException

	Returns:
		numpy.ndarray
	"""

	# Check the config
	iOverlap = _check_spectral_config(x.size, segment, overlap)
	dArgs = {
		'fs': 1.0, 'window': 'hann', 'nperseg': segment, 'noverlap': iOverlap,
		'detrend': 'constant', 'return_onesided': False, 'scaling': 'density'
	}

	# Auto or cross spectrum, the first half of the bins are 0 to 1/2
	if y is None:
		_, aP = signal.welch(x, **dArgs)
		aP = np.real(aP)
	else:
		_, aP = signal.csd(x, y, **dArgs)
	return aP[:segment // 2]

def estimate_transfer_magnitude(
	x: np.ndarray,
	y: np.ndarray,
	segment: int = 256,
	overlap: float = 0.5
) -> TransferEstimate:
	"""Estimate Transfer Magnitude

	Estimates |ĥ(ν)|² of the filter taking x to y as |S_yx|² / S_xx², using \
	Welch auto and cross spectra with the same windowing. Bins where S_xx \
	falls under 1e-12 of its maximum are floored to that level and reported

	Arguments:
		x (float[]): The input series
		y (float[]): The output series
		segment (uint): Optional, the segment length, defaults to 256
		overlap (float): Optional, the overlap fraction, defaults to 0.5

	Raises:
		GenericityConfigException
		GenericityDegenerateException

	Returns:
		TransferEstimate
	"""

	# The spectra
	aX = np.asarray(x, dtype=float).ravel()
	aY = np.asarray(y, dtype=float).ravel()
	aSxx = _welch(aX, None, segment, overlap)
	aSyx = _welch(aX, aY, segment, overlap)

	# A silent input says nothing about the filter
	fMax = float(np.max(aSxx))
	if not fMax > 0:
		raise GenericityDegenerateException(
			'degenerate-spectrum', 'input spectrum is zero'
		)

	# Floor the weak bins
	fFloor = SPECTRUM_FLOOR * fMax
	aFloored = np.flatnonzero(aSxx < fFloor)
	aSxx = np.maximum(aSxx, fFloor)

	# Return the squared magnitude
	return TransferEstimate(
		np.abs(aSyx) ** 2 / aSxx ** 2, aFloored.tolist()
	)

def fit_linear_pair(
	x_samples: np.ndarray,
	y_samples: np.ndarray
) -> LinearPairModel:
	"""Fit Linear Pair

	Least squares fit of Y = M X + E. Covariances use the 1/(N - 1) \
	normalization after removing the means

	Arguments:
		x_samples (numpy.ndarray): The N x n cause samples
		y_samples (numpy.ndarray): The N x m effect samples

	Raises:
		GenericityDataException

	Returns:
		LinearPairModel
	"""

	# Convert to matrices of samples
	aX = np.asarray(x_samples, dtype=float)
	aY = np.asarray(y_samples, dtype=float)
	if aX.ndim == 1: aX = aX[:, None]
	if aY.ndim == 1: aY = aY[:, None]

	# Check the shapes
	iN, iXd = aX.shape
	if aY.shape[0] != iN:
		raise GenericityDataException(
			'shape', 'x has %d samples but y has %d' % (iN, aY.shape[0])
		)
	if iN <= max(iXd, aY.shape[1]) + 1:
		raise GenericityDataException(
			'ill-conditioned-data',
			'%d samples are not enough for dimensions %d and %d' % (
				iN, iXd, aY.shape[1]
			)
		)

	# Remove the means
	aX = aX - aX.mean(axis=0)
	aY = aY - aY.mean(axis=0)

	# The cause covariance has to be invertible
	aSx = aX.T @ aX / (iN - 1)
	if np.linalg.cond(aSx) >= FIT_CONDITION:
		raise GenericityDataException(
			'ill-conditioned-data', 'cause covariance is singular'
		)

	# Regress, and keep the residual covariance
	aB = np.linalg.lstsq(aX, aY, rcond=None)[0]
	aR = aY - aX @ aB
	aSe = aR.T @ aR / (iN - 1)

	# Return the model
	return LinearPairModel(aB.T, (aSx + aSx.T) / 2.0, (aSe + aSe.T) / 2.0)

def infer_direction_sic(
	pair: TimeSeriesPair,
	segment: int = 256,
	overlap: float = 0.5,
	epsilon: float = DEFAULT_EPSILON
) -> DirectionVerdict:
	"""Infer Direction SIC

	Applies the spectral independence criterion both ways: the forward ratio \
	comes from S_xx and the filter estimated from x to y, the backward one \
	from S_yy and the filter estimated from y to x

	Arguments:
		pair (TimeSeriesPair): The two series
		segment (uint): Optional, the Welch segment length, defaults to 256
		overlap (float): Optional, the Welch overlap, defaults to 0.5
		epsilon (float): Optional, the undecided band, defaults to 0.01

	Raises:
		GenericityConfigException
		GenericityDegenerateException

	Returns:
		DirectionVerdict
	"""

	# Forward
	fForward = sic_ratio(
		welch_psd(pair.x, segment, overlap),
		estimate_transfer_magnitude(pair.x, pair.y, segment, overlap)
	)

	# Backward
	fBackward = sic_ratio(
		welch_psd(pair.y, segment, overlap),
		estimate_transfer_magnitude(pair.y, pair.x, segment, overlap)
	)

	# Decide
	return _decide(
		fForward, fBackward, epsilon, 'sic', TransferEstimate.estimator
	)

def infer_direction_trace(
	x_samples: np.ndarray,
	y_samples: np.ndarray,
	epsilon: float = DEFAULT_EPSILON
) -> DirectionVerdict:
	"""Infer Direction Trace

	Applies the Trace Condition both ways. The backward mechanism is the \
	regression of x on y fitted independently, not the inverse of the \
	forward one

	Arguments:
		x_samples (numpy.ndarray): The N x n samples of x
		y_samples (numpy.ndarray): The N x n samples of y
		epsilon (float): Optional, the undecided band, defaults to 0.01

	Raises:
		GenericityDataException
		GenericityDegenerateException

	Returns:
		DirectionVerdict
	"""

	# Fit both ways
	oForward = fit_linear_pair(x_samples, y_samples)
	oBackward = fit_linear_pair(y_samples, x_samples)

	# The method needs square invertible mechanisms
	for o in (oForward, oBackward):
		if o.M.shape[0] != o.M.shape[1]:
			raise GenericityDataException(
				'not-applicable', 'the Trace Method needs dim(x) == dim(y)'
			)
		if np.linalg.cond(o.M) >= MECHANISM_CONDITION:
			raise GenericityDataException(
				'not-applicable', 'fitted mechanism is singular'
			)

	# Decide
	return _decide(
		trace_condition_ratio(oForward), trace_condition_ratio(oBackward),
		epsilon, 'trace'
	)

def load_pairs_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
	"""Load Pairs CSV

	Reads a CSV of samples whose header names the x columns x0, x1, ... and \
	the y columns y0, y1, ...

	Arguments:
		path (str): The path of the file

	Raises:
		GenericityDataException

	Returns:
		tuple (N x n x samples, N x m y samples)
	"""

	# Read the header and the values
	lHeader, aData = _read_csv(path)

	# Find the columns
	lX = [i for i, s in enumerate(lHeader) if s.startswith('x')]
	lY = [i for i, s in enumerate(lHeader) if s.startswith('y')]
	if not lX or not lY or len(lX) + len(lY) != len(lHeader):
		raise GenericityDataException(
			'invalid-input', '%s: header must name columns x0.. then y0..' % path
		)

	# Return the two blocks
	return aData[:, lX], aData[:, lY]

def load_series_csv(path: str) -> TimeSeriesPair:
	"""Load Series CSV

	Reads a CSV with the two columns x and y

	Arguments:
		path (str): The path of the file

	Raises:
		GenericityDataException

	Returns:
		TimeSeriesPair
	"""

	# Read the header and the values
	lHeader, aData = _read_csv(path)
	if 'x' not in lHeader or 'y' not in lHeader:
		raise GenericityDataException(
			'invalid-input', '%s: header must name the columns x and y' % path
		)

	# Return the pair
	return TimeSeriesPair(
		aData[:, lHeader.index('x')], aData[:, lHeader.index('y')]
	)

def _read_csv(path: str) -> tuple[list[str], np.ndarray]:
	"""Read CSV

	Reads the header row and the float values of a CSV file

	Arguments:
		path (str): The path of the file

	Raises:
		GenericityDataException

	Returns:
		tuple (header, N x columns values)
	"""
	try:
		with open(path, 'r', newline='') as oF:
			lRows = list(csv.reader(oF))
		lHeader = [s.strip() for s in lRows[0]]
		aData = np.array(
			[[float(s) for s in l] for l in lRows[1:] if l], dtype=float
		).reshape(-1, len(lHeader))
	except (IndexError, OSError, ValueError) as e:
		raise GenericityDataException(
			'invalid-input', '%s: %s' % (path, str(e))
		)
	return lHeader, aData

def sic_ratio(s_xx: SampledPsd, h2: SampledPsd) -> float:
	"""SIC Ratio

	Returns the output power over the product of input power and filter \
	power, all three as Riemann sums over the even spectra

	Arguments:
		s_xx (SampledPsd): The input spectrum
		h2 (SampledPsd): The squared transfer magnitude

	Raises:
		GenericityDataException
		GenericityDegenerateException

	Returns:
		float
	"""

	# Check the bins
	if s_xx.B != h2.B:
		raise GenericityDataException(
			'shape', 'spectra have %d and %d bins' % (s_xx.B, h2.B)
		)

	# Neither side can be silent
	fIn = total_power(s_xx)
	fFilter = total_power(h2)
	if not fIn > 0 or not fFilter > 0:
		raise GenericityDegenerateException(
			'degenerate-spectrum', 'zero total power'
		)

	# Return the ratio
	return total_power(SampledPsd(s_xx.values * h2.values)) / (fIn * fFilter)

def simulate_ar_ma_pair(
	T: int,
	rng: RngState,
	phi: float = 0.8,
	taps: int = 3
) -> TimeSeriesPair:
	"""Simulate AR MA Pair

	Generates x as an AR(1) process driven by white noise, and y as x passed \
	through a moving average filter

	Arguments:
		T (uint): The length of the series
		rng (RngState): The random state
		phi (float): Optional, the AR coefficient, defaults to 0.8
		taps (uint): Optional, the length of the moving average, defaults to 3

	Returns:
		TimeSeriesPair
	"""

	# Burn in so the process starts stationary
	iBurn = 1024
	aE = rng.generator.standard_normal(T + iBurn)
	aX = signal.lfilter([1.0], [1.0, -phi], aE)[iBurn:]

	# Filter
	aY = signal.lfilter(np.full(taps, 1.0 / taps), [1.0], aX)
	return TimeSeriesPair(aX, aY)

def simulate_linear_pair(
	n: int,
	N: int,
	rng: RngState,
	noise: float = 0.0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Simulate Linear Pair

	Generates samples of Y := M X + E where M = Q D with Q Haar orthogonal \
	and D a random positive diagonal, and the cause covariance comes from a \
	rotation invariant ensemble

	Arguments:
		n (uint): The dimension of x and y
		N (uint): The number of samples
		rng (RngState): The random state
		noise (float): Optional, the standard deviation of the noise

	Returns:
		tuple (N x n x samples, N x n y samples, M)
	"""
	oGen = rng.generator

	# The mechanism
	aM = sample_orthogonal(n, rng).entries * oGen.uniform(0.1, 2.0, n)

	# The cause, with a Haar rotated random spectrum
	aRoot = sample_special_orthogonal(n, rng).entries * \
		np.sqrt(oGen.uniform(0.1, 2.0, n))
	aX = oGen.standard_normal((N, n)) @ aRoot.T

	# The effect
	aY = aX @ aM.T + noise * oGen.standard_normal((N, n))
	return aX, aY, aM

def trace_condition_ratio(model: LinearPairModel) -> float:
	"""Trace Condition Ratio

	Returns τ_m(M Σ_X Mᵀ) / (τ_n(Σ_X) τ_m(MMᵀ)), the noiseless generic ratio \
	of the Trace Condition

	Arguments:
		model (LinearPairModel): The model

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""
	try:
		return generic_ratio(
			trace_contrast(model.M, model.sigma_x),
			egc_trace(model.M, model.sigma_x)
		)
	except GenericityDegenerateException:
		raise GenericityDegenerateException(
			'degenerate-model', 'M or Σ_X is zero'
		)

def trace_generic_ratio(model: LinearPairModel) -> float:
	"""Trace Generic Ratio

	Returns the generic ratio of the noisy model, the noise covariance \
	adding the same term to the contrast and its expectation

	Arguments:
		model (LinearPairModel): The model

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""
	return generic_ratio(
		trace_contrast(model.M, model.sigma_x, model.sigma_e),
		egc_trace(model.M, model.sigma_x, model.sigma_e)
	)

def welch_psd(
	series: np.ndarray,
	segment: int = 256,
	overlap: float = 0.5
) -> SampledPsd:
	"""Welch PSD

	Welch average of Hann windowed periodograms, mean removed per segment, \
	on the positive frequency grid of segment / 2 bins

	Arguments:
		series (float[]): The series
		segment (uint): Optional, a power of two no longer than the series, \
			defaults to 256
		overlap (float): Optional, the overlap fraction, defaults to 0.5

	Raises:
		GenericityConfigException

	Returns:
		SampledPsd
	"""
	aX = np.asarray(series, dtype=float).ravel()
	return SampledPsd(np.maximum(_welch(aX, None, segment, overlap), 0.0))
