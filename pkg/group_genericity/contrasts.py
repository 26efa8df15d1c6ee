# coding=utf8
"""Genericity Contrasts

The cause-mechanism contrasts, each a pure evaluation on an attribute of the \
effect (a covariance matrix, a pair of factor matrices, a mixture, a sampled \
spectrum), plus the attribute types themselves
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-13"

# Limit exports
__all__ = [
	'Contrast', 'EmpiricalQuartic', 'GaussianMixture', 'MixtureQuartic',
	'NmfCentered', 'NmfFactors', 'NormalizedTrace', 'SampledPsd', 'TotalPower',
	'as_covariance', 'center_columns', 'center_mixture',
	'empirical_quartic_contrast', 'mixture_mean', 'mixture_quartic_contrast',
	'nmf_centered_contrast', 'normalized_trace', 'total_power'
]

# Pip imports
import numpy as np

# Python imports
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

# Local imports
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException

if TYPE_CHECKING:
	from group_genericity.groups import RngState

CENTERED_TOLERANCE = 1e-8
"""Centered Tolerance

The largest norm of the mixture mean for a mixture to count as centered"""

def as_covariance(a: any, name: str = 'covariance') -> np.ndarray:
	"""As Covariance

	Converts a value to a float matrix and checks it is a covariance matrix: \
	square, symmetric within 1e-10, and with no eigenvalue below -1e-10 \
	(both relative to the matrix's scale when it is larger than one)

	Arguments:
		a (array_like): The matrix
		name (str): Optional, the name used in error messages

	Raises:
		GenericityDataException

	Returns:
		numpy.ndarray
	"""

	# Convert
	aCov = np.atleast_2d(np.asarray(a, dtype=float))

	# Must be square
	if aCov.ndim != 2 or aCov.shape[0] != aCov.shape[1]:
		raise GenericityDataException(
			'shape', '%s must be a square matrix, got %s' % (name, aCov.shape)
		)

	# Symmetric and positive semidefinite, relative to the scale
	fScale = max(1.0, float(np.max(np.abs(aCov), initial=0.0)))
	if np.max(np.abs(aCov - aCov.T), initial=0.0) > 1e-10 * fScale:
		raise GenericityDataException(
			'invalid-input', '%s is not symmetric' % name
		)
	if np.linalg.eigvalsh(aCov)[0] < -1e-10 * fScale:
		raise GenericityDataException(
			'invalid-input', '%s is not positive semidefinite' % name
		)

	# Return the matrix
	return aCov

def center_columns(m: np.ndarray) -> np.ndarray:
	"""Center Columns

	Subtracts the mean column from each column

	Arguments:
		m (numpy.ndarray): The matrix

	Returns:
		numpy.ndarray
	"""
	return m - m.mean(axis=1, keepdims=True)

class NmfFactors(object):
	"""NMF Factors

	The nonnegative factors W (d x n) and V (s x n) of X = W Vᵀ
	"""

	def __init__(self, W: np.ndarray, V: np.ndarray):
		"""Constructor

		Creates a new instance

		Arguments:
			W (numpy.ndarray): The d x n factor
			V (numpy.ndarray): The s x n factor

		Raises:
			GenericityDataException

		Returns:
			NmfFactors
		"""

		# Store the factors as float matrices
		self.W: np.ndarray = np.atleast_2d(np.asarray(W, dtype=float))
		self.V: np.ndarray = np.atleast_2d(np.asarray(V, dtype=float))

		# Check the shapes
		if self.W.ndim != 2 or self.V.ndim != 2 or \
			self.W.shape[1] != self.V.shape[1] or \
			min(self.W.shape) < 1 or min(self.V.shape) < 1:
			raise GenericityDataException(
				'shape', 'W and V must be non-empty matrices with the same ' \
					'number of columns, got %s and %s' % (
						self.W.shape, self.V.shape
					)
			)

		# And the signs
		if np.any(self.W < 0) or np.any(self.V < 0):
			raise GenericityDataException(
				'invalid-input', 'NMF factors must be nonnegative'
			)

	def __repr__(self) -> str:
		return 'NmfFactors(d=%d, s=%d, n=%d)' % (
			self.W.shape[0], self.V.shape[0], self.n
		)

	@property
	def n(self) -> int:
		"""Component count"""
		return self.W.shape[1]

	def grams(self) -> tuple[np.ndarray, np.ndarray]:
		"""Grams

		Returns the Gram matrices of the centered factors, W̃ᵀW̃ and ṼᵀṼ

		Raises:
			GenericityDegenerateException

		Returns:
			tuple
		"""
		if self.n < 2:
			raise GenericityDegenerateException(
				'degenerate-factorization',
				'centered contrasts need at least 2 components'
			)
		aW = center_columns(self.W)
		aV = center_columns(self.V)
		return aW.T @ aW, aV.T @ aV

	def balanced(self) -> NmfFactors:
		"""Balanced

		Returns the same product with every column of W scaled to unit norm \
		and V carrying the norms. Zero columns of W are left as they are

		Returns:
			NmfFactors
		"""
		aNorm = np.linalg.norm(self.W, axis=0)
		aNorm = np.where(aNorm > 0, aNorm, 1.0)
		return NmfFactors(self.W / aNorm, self.V * aNorm)

	def product(self) -> np.ndarray:
		"""Product

		Returns W Vᵀ

		Returns:
			numpy.ndarray
		"""
		return self.W @ self.V.T

class GaussianMixture(object):
	"""Gaussian Mixture

	K weighted gaussian components in dimension p. Means are stored as the \
	rows of a K x p matrix, covariances as a K x p x p array
	"""

	def __init__(self,
		weights: np.ndarray,
		means: np.ndarray,
		covariances: np.ndarray
	):
		"""Constructor

		Creates a new instance

		Arguments:
			weights (numpy.ndarray): The K nonnegative weights summing to 1
			means (numpy.ndarray): The K x p means
			covariances (numpy.ndarray): The K x p x p covariances

		Raises:
			GenericityDataException

		Returns:
			GaussianMixture
		"""

		# Store as floats
		self.weights: np.ndarray = np.atleast_1d(np.asarray(weights, dtype=float))
		self.means: np.ndarray = np.atleast_2d(np.asarray(means, dtype=float))
		self.covariances: np.ndarray = np.asarray(covariances, dtype=float)

		# Check the shapes
		iK, iP = self.means.shape
		if self.weights.shape != (iK,) or \
			self.covariances.shape != (iK, iP, iP):
			raise GenericityDataException(
				'shape', 'inconsistent mixture shapes %s, %s, %s' % (
					self.weights.shape, self.means.shape, self.covariances.shape
				)
			)

		# Check the weights
		if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-12:
			raise GenericityDataException(
				'invalid-input', 'mixture weights must be nonnegative and sum to 1'
			)

		# Check each covariance
		for k in range(iK):
			as_covariance(self.covariances[k], 'covariance %d' % k)

	def __repr__(self) -> str:
		return 'GaussianMixture(K=%d, p=%d)' % (self.K, self.p)

	@property
	def K(self) -> int:
		"""Component count"""
		return self.means.shape[0]

	@property
	def p(self) -> int:
		"""Dimension"""
		return self.means.shape[1]

	def sample(self,
		count: int,
		rng: RngState
	) -> tuple[np.ndarray, np.ndarray]:
		"""Sample

		Draws samples and the labels of the components they came from

		Arguments:
			count (uint): The number of samples
			rng (RngState): The random state

		Returns:
			tuple (count x p samples, count labels)
		"""

		# Pick the components
		aLabels = rng.generator.choice(self.K, size=count, p=self.weights)

		# Fill in the samples one component at a time
		aX = np.empty((count, self.p))
		for k in range(self.K):
			aIdx = np.flatnonzero(aLabels == k)
			if aIdx.size:
				aX[aIdx] = rng.generator.multivariate_normal(
					self.means[k], self.covariances[k], size=aIdx.size,
					method='eigh'
				)

		# Return the samples and labels
		return aX, aLabels

	def with_means(self, means: np.ndarray) -> GaussianMixture:
		"""With Means

		Returns a copy of the mixture with other means

		Arguments:
			means (numpy.ndarray): The K x p means

		Returns:
			GaussianMixture
		"""
		return GaussianMixture(self.weights, means, self.covariances)

class SampledPsd(object):
	"""Sampled PSD

	The positive frequency half of an even power spectral density, sampled on \
	B bins at ν_b = b / 2B. The negative half is implied by evenness
	"""

	def __init__(self, values: np.ndarray):
		"""Constructor

		Creates a new instance

		Arguments:
			values (numpy.ndarray): The B nonnegative values

		Raises:
			GenericityDataException

		Returns:
			SampledPsd
		"""

		# Store the values
		self.values: np.ndarray = np.atleast_1d(np.asarray(values, dtype=float))

		# Check them
		if self.values.ndim != 1 or self.values.size < 1:
			raise GenericityDataException(
				'shape', 'spectra are non-empty vectors'
			)
		if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
			raise GenericityDataException(
				'invalid-spectrum', 'spectrum values must be finite and >= 0'
			)

	def __repr__(self) -> str:
		return 'SampledPsd(B=%d)' % self.B

	@property
	def B(self) -> int:
		"""Bin count"""
		return self.values.size

	@property
	def delta(self) -> float:
		"""Bin width Δν"""
		return 0.5 / self.B

	@property
	def frequencies(self) -> np.ndarray:
		"""Bin frequencies"""
		return np.arange(self.B) * self.delta

def mixture_mean(g: GaussianMixture) -> np.ndarray:
	"""Mixture Mean

	Returns Σ π_k μ_k

	Arguments:
		g (GaussianMixture): The mixture

	Returns:
		numpy.ndarray
	"""
	return g.weights @ g.means

def center_mixture(g: GaussianMixture) -> GaussianMixture:
	"""Center Mixture

	Returns the mixture with its mean subtracted from every component mean

	Arguments:
		g (GaussianMixture): The mixture

	Returns:
		GaussianMixture
	"""
	return g.with_means(g.means - mixture_mean(g))

def empirical_quartic_contrast(samples: np.ndarray) -> float:
	"""Empirical Quartic Contrast

	Returns the mean of ‖x‖⁴ over the samples, which callers center first

	Arguments:
		samples (numpy.ndarray): The N x p samples

	Raises:
		GenericityDataException

	Returns:
		float
	"""
	aX = np.atleast_2d(np.asarray(samples, dtype=float))
	if aX.size == 0:
		raise GenericityDataException('empty-data', 'no samples')
	return float(np.mean(np.sum(aX * aX, axis=1) ** 2))

def mixture_quartic_contrast(g: GaussianMixture) -> float:
	"""Mixture Quartic Contrast

	Returns E tr[XXᵀXXᵀ] = E‖X‖⁴ of a centered gaussian mixture in closed form

	Arguments:
		g (GaussianMixture): The mixture, centered

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# The mixture has to be centered
	if np.linalg.norm(mixture_mean(g)) > CENTERED_TOLERANCE:
		raise GenericityDataException(
			'precondition', 'mixture is not centered'
		)

	# Component-wise terms
	aSq = np.sum(g.means * g.means, axis=1)
	aTr = np.trace(g.covariances, axis1=1, axis2=2)
	aTr2 = np.einsum('kij,kji->k', g.covariances, g.covariances)
	aQuad = np.einsum('ki,kij,kj->k', g.means, g.covariances, g.means)

	# Sum them up
	return float(g.weights @ (
		aSq ** 2 + aTr ** 2 + 2.0 * aTr2 + 4.0 * aQuad + 2.0 * aSq * aTr
	))

def nmf_centered_contrast(f: NmfFactors) -> float:
	"""NMF Centered Contrast

	Returns tr[W̃ᵀW̃ ṼᵀṼ], the squared norm of the observation built from the \
	centered factors

	Arguments:
		f (NmfFactors): The factors, with n >= 2

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""
	aGw, aGv = f.grams()
	return float(np.sum(aGw * aGv))

def normalized_trace(sigma: np.ndarray) -> float:
	"""Normalized Trace

	Returns tr(Σ)/p

	Arguments:
		sigma (numpy.ndarray): The p x p covariance

	Raises:
		GenericityDataException

	Returns:
		float
	"""
	aSigma = as_covariance(sigma)
	return float(np.trace(aSigma) / aSigma.shape[0])

def total_power(psd: SampledPsd) -> float:
	"""Total Power

	Returns the Riemann sum of the even spectrum over [-1/2, 1/2), that is \
	2Δν times the sum of the stored half

	Arguments:
		psd (SampledPsd): The spectrum

	Returns:
		float
	"""
	return float(2.0 * psd.delta * np.sum(psd.values))

class Contrast(ABC):
	"""Contrast

	The interface every contrast shares so the Monte-Carlo engine does not \
	need to know which one it is evaluating. Contrasts register themselves \
	under a name so they can be created from configuration
	"""

	__types = {}
	"""Types

	Holds the dictionary of contrast names to the classes that implement them"""

	name = None
	"""Name

	The name the class was registered under"""

	def __call__(self, attribute: any) -> float:
		return self.evaluate(attribute)

	@classmethod
	def add_type(cls, name: str) -> None:
		"""Add Type

		Stores the calling class under the name so that it can be created \
		later on

		Arguments:
			name (str): The name of the contrast

		Raises:
			ValueError

		Returns:
			None
		"""

		# If the name already exists
		if name in cls.__types:
			raise ValueError('"%s" already added' % name)

		# Store the new constructor
		cls.__types[name] = cls
		cls.name = name

	@classmethod
	def create_type(cls, name: str, **kwargs) -> Contrast:
		"""Create Type

		Creates a new instance of a contrast previously added using \
		.add_type()

		Arguments:
			name (str): The name of the contrast
			kwargs (dict): Arguments passed to the constructor

		Raises:
			GenericityConfigException

		Returns:
			Contrast
		"""
		try:
			return cls.__types[name](**kwargs)
		except KeyError:
			raise GenericityConfigException(
				'invalid-config', 'no such contrast "%s"' % name
			)

	@classmethod
	def types(cls) -> list[str]:
		"""Types

		Returns the names of all registered contrasts

		Returns:
			str[]
		"""
		return sorted(cls.__types.keys())

	@abstractmethod
	def evaluate(self, attribute: any) -> float:
		"""Evaluate

		Returns the value of the contrast on the attribute

		Arguments:
			attribute (any): The attribute of the effect

		Returns:
			float
		"""
		pass

class EmpiricalQuartic(Contrast):
	"""Empirical Quartic

	The quartic contrast estimated from centered samples

	Extends:
		Contrast
	"""
	def evaluate(self, attribute: np.ndarray) -> float:
		return empirical_quartic_contrast(attribute)

class MixtureQuartic(Contrast):
	"""Mixture Quartic

	The quartic contrast of a centered gaussian mixture, in closed form

	Extends:
		Contrast
	"""
	def evaluate(self, attribute: GaussianMixture) -> float:
		return mixture_quartic_contrast(attribute)

class NmfCentered(Contrast):
	"""NMF Centered

	The squared norm of the observation built from centered NMF factors

	Extends:
		Contrast
	"""
	def evaluate(self, attribute: NmfFactors) -> float:
		return nmf_centered_contrast(attribute)

class NormalizedTrace(Contrast):
	"""Normalized Trace

	The normalized trace of a covariance matrix

	Extends:
		Contrast
	"""
	def evaluate(self, attribute: np.ndarray) -> float:
		return normalized_trace(attribute)

class TotalPower(Contrast):
	"""Total Power

	The total power of an even sampled spectrum

	Extends:
		Contrast
	"""
	def evaluate(self, attribute: SampledPsd) -> float:
		return total_power(attribute)

# Register the contrasts
EmpiricalQuartic.add_type('empirical_quartic')
MixtureQuartic.add_type('mixture_quartic')
NmfCentered.add_type('nmf_centered')
NormalizedTrace.add_type('normalized_trace')
TotalPower.add_type('total_power')
