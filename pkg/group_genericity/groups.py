# coding=utf8
"""Genericity Groups

Seeded samplers and enumerators for the generic groups: the orthogonal and \
special orthogonal groups, the symmetric group, and circular frequency shifts, \
along with their exact actions
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-12"

# Limit exports
__all__ = [
	'CircularShift', 'MAX_ENUMERATION', 'OrthogonalMatrix', 'Permutation',
	'RngState', 'apply_shift_to_psd', 'circular_shift_sampler',
	'enumerate_circular_shifts', 'enumerate_permutations',
	'orthogonal_sampler', 'permutation_sampler', 'sample_circular_shift',
	'sample_orthogonal', 'sample_permutation', 'sample_special_orthogonal'
]

# Pip imports
import numpy as np

# Python imports
from functools import partial
from itertools import permutations
from typing import Callable

# Local imports
from group_genericity.contrasts import SampledPsd
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException

MAX_ENUMERATION = 8
"""Max Enumeration

The largest n for which all n! permutations will be generated"""

class RngState(object):
	"""RNG State

	A seed and a stream, and the numpy Generator they produce. The generator \
	is Philox (counter based) seeded through a SeedSequence built from the \
	seed with the stream as spawn key, so the same (seed, stream) produces the \
	same samples on any platform. An instance must not be shared between \
	concurrent callers, use derive() to give each its own
	"""

	def __init__(self, seed: int, stream: int | tuple = 0):
		"""Constructor

		Creates a new instance

		Arguments:
			seed (uint): The 64-bit seed
			stream (uint | uint[]): Optional, the stream, or the path of \
				streams for derived states

		Raises:
			GenericityConfigException

		Returns:
			RngState
		"""

		# Seeds have to be unsigned 64-bit values
		if int(seed) < 0 or int(seed) >= 2**64:
			raise GenericityConfigException(
				'invalid-parameter', 'seed must be an unsigned 64-bit integer'
			)

		# Store the seed and stream
		self.seed: int = int(seed)
		self.stream: tuple = tuple(int(i) for i in stream) \
			if isinstance(stream, tuple) else (int(stream),)

		# Create the generator
		self.generator: np.random.Generator = np.random.Generator(
			np.random.Philox(
				np.random.SeedSequence(self.seed, spawn_key=self.stream)
			)
		)

	def __repr__(self) -> str:
		return 'RngState(%d, %r)' % (self.seed, self.stream)

	def derive(self, index: int) -> RngState:
		"""Derive

		Returns the independent child state at the given index, used per trial \
		or per block of samples

		Arguments:
			index (uint): The index of the child

		Returns:
			RngState
		"""
		return RngState(self.seed, self.stream + (int(index),))

class OrthogonalMatrix(object):
	"""Orthogonal Matrix

	An element of O(n) or SO(n)
	"""

	def __init__(self, entries: np.ndarray):
		"""Constructor

		Creates a new instance

		Arguments:
			entries (numpy.ndarray): The n x n orthogonal matrix

		Returns:
			OrthogonalMatrix
		"""
		self.entries: np.ndarray = np.asarray(entries, dtype=float)

	def __repr__(self) -> str:
		return 'OrthogonalMatrix(%s)' % np.array2string(
			self.entries, precision=4
		)

	@property
	def n(self) -> int:
		"""Dimension"""
		return self.entries.shape[0]

	def apply(self, x: np.ndarray) -> np.ndarray:
		"""Apply

		Left multiplies a vector, or the rows of a matrix stored as columns

		Arguments:
			x (numpy.ndarray): The vector or matrix to act on

		Returns:
			numpy.ndarray
		"""
		return self.entries @ x

	def conjugate(self, a: np.ndarray) -> np.ndarray:
		"""Conjugate

		Returns U A Uᵀ

		Arguments:
			a (numpy.ndarray): An n x n matrix

		Returns:
			numpy.ndarray
		"""
		return self.entries @ a @ self.entries.T

	def det(self) -> float:
		"""Determinant"""
		return float(np.linalg.det(self.entries))

class Permutation(object):
	"""Permutation

	An element of the symmetric group stored as an index array, mapping[i] \
	being the image of i. The associated matrix P has P[mapping[i], i] = 1 and \
	is only built on demand
	"""

	def __init__(self, mapping: list[int] | np.ndarray):
		"""Constructor

		Creates a new instance

		Arguments:
			mapping (uint[]): The bijection on 0..n-1

		Raises:
			GenericityDataException

		Returns:
			Permutation
		"""

		# Store the mapping
		self.mapping: np.ndarray = np.asarray(mapping, dtype=np.intp)

		# Make sure it's a bijection
		if not np.array_equal(np.sort(self.mapping), np.arange(self.n)):
			raise GenericityDataException(
				'invalid-input', 'mapping is not a bijection on 0..n-1'
			)

	def __eq__(self, other: object) -> bool:
		return isinstance(other, Permutation) and \
			np.array_equal(self.mapping, other.mapping)

	def __hash__(self) -> int:
		return hash(tuple(self.mapping.tolist()))

	def __repr__(self) -> str:
		return 'Permutation(%s)' % self.mapping.tolist()

	@property
	def n(self) -> int:
		"""Size"""
		return self.mapping.shape[0]

	def apply_columns(self, m: np.ndarray) -> np.ndarray:
		"""Apply Columns

		Moves column i of m to column mapping[i], which is m Pᵀ

		Arguments:
			m (numpy.ndarray): A matrix with n columns

		Returns:
			numpy.ndarray
		"""
		aRet = np.empty_like(m)
		aRet[:, self.mapping] = m
		return aRet

	def compose(self, other: Permutation) -> Permutation:
		"""Compose

		Returns self after other

		Arguments:
			other (Permutation): The permutation applied first

		Returns:
			Permutation
		"""
		return Permutation(self.mapping[other.mapping])

	def conjugate(self, a: np.ndarray) -> np.ndarray:
		"""Conjugate

		Returns P A Pᵀ without building P

		Arguments:
			a (numpy.ndarray): An n x n matrix

		Returns:
			numpy.ndarray
		"""
		aRet = np.empty_like(a)
		aRet[np.ix_(self.mapping, self.mapping)] = a
		return aRet

	def matrix(self) -> np.ndarray:
		"""Matrix

		Materializes the permutation matrix

		Returns:
			numpy.ndarray
		"""
		aRet = np.zeros((self.n, self.n))
		aRet[self.mapping, np.arange(self.n)] = 1.0
		return aRet

class CircularShift(object):
	"""Circular Shift

	A translation modulo a period, acting on the positive frequency half of \
	an even spectrum
	"""

	def __init__(self, period: float, offset: float):
		"""Constructor

		Creates a new instance, reducing the offset modulo the period

		Arguments:
			period (float): The period, must be positive
			offset (float): The translation

		Raises:
			GenericityConfigException

		Returns:
			CircularShift
		"""

		# Check the period
		if not period > 0:
			raise GenericityConfigException(
				'invalid-parameter', 'period must be positive'
			)

		# Store the values
		self.period: float = float(period)
		self.offset: float = float(offset) % self.period

		# Floating point modulo can land exactly on the period
		if self.offset >= self.period:
			self.offset = 0.0

	def __repr__(self) -> str:
		return 'CircularShift(%r, %r)' % (self.period, self.offset)

	def bins(self, delta: float, count: int) -> int:
		"""Bins

		Returns round(offset / delta), the whole number of bins of width \
		delta the shift moves a spectrum sampled on count bins, modulo count

		Arguments:
			delta (float): The bin width
			count (uint): The number of bins

		Returns:
			uint
		"""
		return int(np.rint(self.offset / delta)) % count

	def compose(self, other: CircularShift) -> CircularShift:
		"""Compose

		Returns the shift by both offsets

		Arguments:
			other (CircularShift): The other shift, on the same period

		Raises:
			GenericityConfigException

		Returns:
			CircularShift
		"""
		if other.period != self.period:
			raise GenericityConfigException(
				'invalid-parameter', 'can not compose shifts of different periods'
			)
		return CircularShift(self.period, self.offset + other.offset)

def _check_size(n: int) -> int:
	"""Check Size

	Makes sure a group size is a positive integer

	Arguments:
		n (uint): The size

	Raises:
		GenericityConfigException

	Returns:
		uint
	"""
	if int(n) < 1:
		raise GenericityConfigException(
			'invalid-dimension', 'dimension must be at least 1, got %d' % n
		)
	return int(n)

def apply_shift_to_psd(psd: SampledPsd, shift: CircularShift) -> SampledPsd:
	"""Apply Shift To PSD

	Circularly rotates the positive frequency bins of a sampled spectrum by \
	the whole number of bins closest to the shift's offset. The negative half \
	follows by evenness, so only the stored half changes, and the total power \
	is preserved

	Arguments:
		psd (SampledPsd): The spectrum
		shift (CircularShift): The shift to apply

	Raises:
		GenericityDataException

	Returns:
		SampledPsd
	"""

	# Spectra are nonnegative
	if np.any(psd.values < 0):
		raise GenericityDataException(
			'invalid-spectrum', 'spectrum has negative values'
		)

	# Rotate the bins
	return SampledPsd(np.roll(psd.values, shift.bins(psd.delta, psd.B)))

def enumerate_circular_shifts(count: int) -> list[CircularShift]:
	"""Enumerate Circular Shifts

	Returns the distinct whole-bin shifts modulo 1/2 of a spectrum sampled on \
	count bins covering [0, 1/2), each once. Averaging over them is the exact \
	Haar average of the shift group acting on sampled spectra

	Arguments:
		count (uint): The number of bins

	Returns:
		CircularShift[]
	"""
	iCount = _check_size(count)
	return [CircularShift(0.5, k / (2 * iCount)) for k in range(iCount)]

def enumerate_permutations(n: int) -> list[Permutation]:
	"""Enumerate Permutations

	Returns all n! permutations of 0..n-1, each exactly once

	Arguments:
		n (uint): The size, 1 to MAX_ENUMERATION

	Raises:
		GenericityConfigException

	Returns:
		Permutation[]
	"""

	# Check the size
	n = _check_size(n)
	if n > MAX_ENUMERATION:
		raise GenericityConfigException(
			'size-limit',
			'can not enumerate more than %d! permutations' % MAX_ENUMERATION
		)

	# Generate them
	return [Permutation(t) for t in permutations(range(n))]

def sample_circular_shift(period: float, rng: RngState) -> CircularShift:
	"""Sample Circular Shift

	Returns a shift with offset uniform on [0, period)

	Arguments:
		period (float): The period, must be positive
		rng (RngState): The random state

	Raises:
		GenericityConfigException

	Returns:
		CircularShift
	"""
	if not period > 0:
		raise GenericityConfigException(
			'invalid-parameter', 'period must be positive'
		)
	return CircularShift(period, rng.generator.uniform(0.0, period))

def sample_orthogonal(n: int, rng: RngState) -> OrthogonalMatrix:
	"""Sample Orthogonal

	Returns a Haar distributed element of O(n): the Q factor of a matrix of \
	i.i.d. standard normals, with its columns multiplied by the signs of R's \
	diagonal

	Arguments:
		n (uint): The dimension
		rng (RngState): The random state

	Raises:
		GenericityConfigException

	Returns:
		OrthogonalMatrix
	"""

	# Check the dimension
	n = _check_size(n)

	# Factor a gaussian matrix
	aQ, aR = np.linalg.qr(rng.generator.standard_normal((n, n)))

	# Fix the signs so the distribution doesn't depend on the QR routine
	aSigns = np.sign(np.diag(aR))
	aSigns[aSigns == 0] = 1.0
	return OrthogonalMatrix(aQ * aSigns)

def sample_permutation(n: int, rng: RngState) -> Permutation:
	"""Sample Permutation

	Returns a uniformly distributed permutation of 0..n-1 (Fisher-Yates)

	Arguments:
		n (uint): The size
		rng (RngState): The random state

	Raises:
		GenericityConfigException

	Returns:
		Permutation
	"""
	return Permutation(rng.generator.permutation(_check_size(n)))

def sample_special_orthogonal(n: int, rng: RngState) -> OrthogonalMatrix:
	"""Sample Special Orthogonal

	Returns a Haar distributed element of SO(n). Samples O(n) and negates the \
	first column when the determinant is -1, which maps the Haar measure of \
	one component onto the other

	Arguments:
		n (uint): The dimension
		rng (RngState): The random state

	Raises:
		GenericityConfigException

	Returns:
		OrthogonalMatrix
	"""

	# Sample the full group
	oU = sample_orthogonal(n, rng)

	# Flip the first column if we're in the wrong component
	if oU.det() < 0:
		oU.entries[:, 0] = -oU.entries[:, 0]

	# Return the matrix
	return oU

def circular_shift_sampler(
	period: float = 0.5
) -> Callable[[RngState], CircularShift]:
	"""Circular Shift Sampler

	Returns a sampler of shifts over the given period, in the form the \
	Monte-Carlo engine expects

	Arguments:
		period (float): Optional, the period, defaults to 1/2

	Returns:
		callable
	"""
	return partial(sample_circular_shift, period)

def orthogonal_sampler(
	n: int,
	special: bool = False
) -> Callable[[RngState], OrthogonalMatrix]:
	"""Orthogonal Sampler

	Returns a sampler of O(n), or SO(n), in the form the Monte-Carlo engine \
	expects

	Arguments:
		n (uint): The dimension
		special (bool): Optional, true to sample SO(n)

	Returns:
		callable
	"""
	return partial(
		sample_special_orthogonal if special else sample_orthogonal,
		_check_size(n)
	)

def permutation_sampler(n: int) -> Callable[[RngState], Permutation]:
	"""Permutation Sampler

	Returns a sampler of the symmetric group on n elements

	Arguments:
		n (uint): The size

	Returns:
		callable
	"""
	return partial(sample_permutation, _check_size(n))
