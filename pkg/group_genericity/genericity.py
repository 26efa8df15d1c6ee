# coding=utf8
"""Genericity

Expected generic contrasts, closed form and Monte-Carlo, generic ratios, and \
the randomization test that decides whether an observed contrast looks like \
a draw from its generic null distribution
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-14"

# Limit exports
__all__ = [
	'FAMILIES', 'GenericityReport', 'MIN_NULL_SAMPLES', 'MonteCarloResult',
	'SCENARIOS', 'assess', 'egc_mixture', 'egc_monte_carlo', 'egc_nmf', 'egc_sic',
	'egc_trace', 'expected_permutation_conjugation', 'generic_ratio',
	'generic_ratio_trial', 'mixture_rotation_egc', 'randomization_test',
	'scenario_report', 'trace_contrast'
]

# Pip imports
import numpy as np

# Python imports
from dataclasses import asdict, dataclass, field
import math
from typing import Callable

# Local imports
from group_genericity.contrasts import \
	Contrast, GaussianMixture, MixtureQuartic, NmfFactors, SampledPsd, \
	as_covariance, center_mixture, mixture_mean, \
	mixture_quartic_contrast, nmf_centered_contrast, total_power, \
	CENTERED_TOLERANCE
from group_genericity.exceptions import \
	ContrastEvaluationException, GenericityConfigException, \
	GenericityDataException, GenericityDegenerateException
from group_genericity.groups import \
	RngState, apply_shift_to_psd, circular_shift_sampler, \
	enumerate_circular_shifts, orthogonal_sampler, permutation_sampler, \
	sample_permutation, sample_special_orthogonal

FAMILIES = ['trace', 'nmf', 'mixture']
"""Families

The scenario families of the invariant-cause average ratio experiment"""

MIN_NULL_SAMPLES = 20
"""Min Null Samples

The fewest null samples the randomization test accepts"""

RATIO_TOLERANCE = 1e-12
"""Ratio Tolerance

The relative size under which an expected contrast counts as zero"""

@dataclass
class GenericityReport(object):
	"""Genericity Report

	The observed contrast, its expected generic value, their ratio, and when \
	a Monte-Carlo null was drawn, its standard error and the p-value of the \
	observation under it
	"""
	contrast_value: float
	egc: float
	generic_ratio: float
	mc_stderr: float | None = None
	p_value: float | None = None
	n_group_samples: int = 0

	def to_dict(self) -> dict:
		"""To Dict

		Returns the report as a dict in field order

		Returns:
			dict
		"""
		return asdict(self)

@dataclass
class MonteCarloResult(object):
	"""Monte-Carlo Result

	The mean of the contrast over the sampled group elements, its standard \
	error, and the raw samples kept for the randomization test
	"""
	mean: float
	stderr: float
	samples: np.ndarray = field(repr=False)

def assess(
	contrast_value: float,
	null: MonteCarloResult,
	egc: float | None = None
) -> GenericityReport:
	"""Assess

	Builds the full report of an observed contrast from one Monte-Carlo pass. \
	The ratio uses the closed form EGC when one is given, the Monte-Carlo \
	mean otherwise

	Arguments:
		contrast_value (float): The observed contrast C(mx)
		null (MonteCarloResult): The result of egc_monte_carlo
		egc (float): Optional, the closed form EGC

	Raises:
		GenericityDegenerateException

	Returns:
		GenericityReport
	"""

	# Use the closed form if we have it
	fEgc = null.mean if egc is None else egc

	# Only test if there's enough of a null
	fP = None
	if null.samples.size >= MIN_NULL_SAMPLES:
		fP = randomization_test(contrast_value, null.samples)

	# Return the report
	return GenericityReport(
		contrast_value = float(contrast_value),
		egc = float(fEgc),
		generic_ratio = generic_ratio(contrast_value, fEgc),
		mc_stderr = float(null.stderr),
		p_value = fP,
		n_group_samples = int(null.samples.size)
	)

def _check_centered(g: GaussianMixture) -> None:
	"""Check Centered

	Raises if the mixture mean is not zero

	Arguments:
		g (GaussianMixture): The mixture

	Raises:
		GenericityDataException

	Returns:
		None
	"""
	if np.linalg.norm(mixture_mean(g)) > CENTERED_TOLERANCE:
		raise GenericityDataException(
			'precondition', 'mixture is not centered'
		)

def egc_mixture(g: GaussianMixture) -> float:
	"""EGC Mixture

	Returns the expected quartic contrast when a Haar orthogonal matrix acts \
	on the component means of a centered mixture

	Arguments:
		g (GaussianMixture): The centered mixture

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the precondition
	_check_centered(g)

	# The alignment of each mean with its own covariance
	aSq = np.sum(g.means * g.means, axis=1)
	aTr = np.trace(g.covariances, axis1=1, axis2=2)
	aQuad = np.einsum('ki,kij,kj->k', g.means, g.covariances, g.means)

	# Remove the difference to the generic value
	return mixture_quartic_contrast(g) - 4.0 * float(
		g.weights @ (aQuad - aSq * aTr / g.p)
	)

def egc_monte_carlo(
	contrast: Contrast | Callable[[any], float],
	group_sampler: Callable[[RngState], any],
	mechanism_action: Callable[[any], any],
	n_samples: int,
	rng: RngState
) -> MonteCarloResult:
	"""EGC Monte-Carlo

	Estimates E C(m g x) by drawing i.i.d. Haar group elements, applying the \
	mechanism action to each, and evaluating the contrast

	Arguments:
		contrast (Contrast | callable): The contrast
		group_sampler (callable): Returns one group element given an RngState
		mechanism_action (callable): Maps a group element g to the attribute \
			m g x
		n_samples (uint): The number of group elements, at least 2
		rng (RngState): The random state

	Raises:
		ContrastEvaluationException
		GenericityConfigException

	Returns:
		MonteCarloResult
	"""

	# Check the count
	if n_samples < 2:
		raise GenericityConfigException(
			'invalid-parameter', 'n_samples must be at least 2'
		)

	# Go through each sample
	aSamples = np.empty(n_samples)
	for i in range(n_samples):
		g = group_sampler(rng)
		try:
			aSamples[i] = contrast(mechanism_action(g))
		except Exception as e:
			raise ContrastEvaluationException(g, e) from e

	# Compensated mean, and the standard error around it
	fMean = math.fsum(aSamples) / n_samples
	fStd = math.sqrt(math.fsum((aSamples - fMean) ** 2) / (n_samples - 1))

	# Return the result
	return MonteCarloResult(fMean, fStd / math.sqrt(n_samples), aSamples)

def egc_nmf(f: NmfFactors) -> float:
	"""EGC NMF

	Returns the average of tr[P W̃ᵀW̃ Pᵀ ṼᵀṼ] over all permutations P, which is \
	tr[W̃ᵀW̃] tr[ṼᵀṼ] / (n - 1)

	Arguments:
		f (NmfFactors): The factors, with n >= 2

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""
	aGw, aGv = f.grams()
	return float(np.trace(aGw) * np.trace(aGv) / (f.n - 1))

def egc_sic(s_xx: SampledPsd, h2: SampledPsd) -> float:
	"""EGC SIC

	Returns the exact expected output power when the input spectrum is \
	shifted by every whole-bin circular shift in turn

	Arguments:
		s_xx (SampledPsd): The input spectrum
		h2 (SampledPsd): The squared transfer magnitude, on the same bins

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the bins
	if s_xx.B != h2.B:
		raise GenericityDataException(
			'shape', 'spectra have %d and %d bins' % (s_xx.B, h2.B)
		)

	# Average over the group
	return math.fsum(
		total_power(SampledPsd(apply_shift_to_psd(s_xx, g).values * h2.values))
		for g in enumerate_circular_shifts(s_xx.B)
	) / s_xx.B

def egc_trace(
	M: np.ndarray,
	sigma_x: np.ndarray,
	sigma_e: np.ndarray | None = None
) -> float:
	"""EGC Trace

	Returns τ_n(Σ_X) τ_m(MMᵀ) + τ_m(Σ_E), the expected normalized trace of \
	the effect's covariance when a Haar rotation acts on the cause

	Arguments:
		M (numpy.ndarray): The m x n mechanism
		sigma_x (numpy.ndarray): The n x n cause covariance
		sigma_e (numpy.ndarray): Optional, the m x m noise covariance

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the shapes
	aM, aSx, aSe = _trace_inputs(M, sigma_x, sigma_e)
	iM, iN = aM.shape

	# Closed form
	return float(
		np.trace(aSx) / iN * np.trace(aM @ aM.T) / iM + np.trace(aSe) / iM
	)

def expected_permutation_conjugation(a: np.ndarray) -> np.ndarray:
	"""Expected Permutation Conjugation

	Returns the average of P A Pᵀ over the symmetric group as \
	B diag(αI, λ) Bᵀ, where B is the Householder reflection whose last \
	column is 𝟙/√n, λ = 𝟙ᵀA𝟙/n and α = (tr(A) - λ)/(n - 1)

	Arguments:
		a (numpy.ndarray): An n x n matrix, n >= 2

	Raises:
		GenericityDataException

	Returns:
		numpy.ndarray
	"""

	# Check the shape
	aA = np.asarray(a, dtype=float)
	if aA.ndim != 2 or aA.shape[0] != aA.shape[1]:
		raise GenericityDataException('shape', 'matrix must be square')
	n = aA.shape[0]
	if n < 2:
		raise GenericityDataException(
			'degenerate-dimension', 'the symmetric group needs n >= 2'
		)

	# The eigenvalues
	fLambda = aA.sum() / n
	fAlpha = (np.trace(aA) - fLambda) / (n - 1)

	# Householder reflection sending the last basis vector to 𝟙/√n
	aV = -np.full(n, 1.0 / math.sqrt(n))
	aV[-1] += 1.0
	aB = np.eye(n) - 2.0 * np.outer(aV, aV) / (aV @ aV)

	# Assemble
	aD = np.full(n, fAlpha)
	aD[-1] = fLambda
	return (aB * aD) @ aB.T

def generic_ratio(contrast_value: float, egc: float) -> float:
	"""Generic Ratio

	Returns C(mx) / ⟨C⟩

	Arguments:
		contrast_value (float): The observed contrast
		egc (float): The expected generic contrast

	Raises:
		GenericityDegenerateException

	Returns:
		float
	"""
	if abs(egc) <= RATIO_TOLERANCE * max(1.0, abs(contrast_value)):
		raise GenericityDegenerateException(
			'degenerate-contrast', 'expected generic contrast is zero'
		)
	return float(contrast_value / egc)

def generic_ratio_trial(
	family: str,
	rng: RngState,
	n: int = 10,
	d: int = 20,
	s: int = 50,
	n_components: int = 5,
	p: int = 5,
	K: int = 3
) -> float:
	"""Generic Ratio Trial

	Draws one model whose cause is x = g x̃ with g Haar distributed, and \
	returns its generic ratio. Averaged over trials the ratio is 1 for each \
	family

	Arguments:
		family (str): 'trace' (SO(n) on a covariance), 'nmf' (permutations \
			of the columns of W) or 'mixture' (O(p) on the means)
		rng (RngState): The random state
		n (uint): Optional, the dimension of the trace family
		d (uint): Optional, the rows of W in the nmf family
		s (uint): Optional, the rows of V in the nmf family
		n_components (uint): Optional, the components of the nmf family
		p (uint): Optional, the dimension of the mixture family
		K (uint): Optional, the components of the mixture family

	Raises:
		GenericityConfigException

	Returns:
		float
	"""
	oGen = rng.generator

	# Covariances rotated by SO(n)
	if family == 'trace':
		aM = oGen.standard_normal((n, n))
		aBase = np.diag(oGen.uniform(0.1, 2.0, n))
		aSx = sample_special_orthogonal(n, rng).conjugate(aBase)
		return generic_ratio(trace_contrast(aM, aSx), egc_trace(aM, aSx))

	# Columns of W permuted
	elif family == 'nmf':
		aW = oGen.uniform(size=(d, n_components))
		aV = oGen.uniform(size=(s, n_components))
		oF = NmfFactors(
			sample_permutation(n_components, rng).apply_columns(aW), aV
		)
		return generic_ratio(nmf_centered_contrast(oF), egc_nmf(oF))

	# Means rotated by O(p)
	elif family == 'mixture':
		aCovs = np.empty((K, p, p))
		for k in range(K):
			aCovs[k] = sample_special_orthogonal(p, rng).conjugate(
				np.diag(oGen.uniform(0.1, 1.0, p))
			)
		oG = center_mixture(GaussianMixture(
			np.full(K, 1.0 / K), 2.0 * oGen.standard_normal((K, p)), aCovs
		))
		oU = orthogonal_sampler(p)(rng)
		oG = oG.with_means(oG.means @ oU.entries.T)
		return generic_ratio(mixture_quartic_contrast(oG), egc_mixture(oG))

	# Anything else
	raise GenericityConfigException(
		'invalid-parameter', 'family must be one of %s' % ', '.join(FAMILIES)
	)

def mixture_rotation_egc(
	g: GaussianMixture,
	n_rotations: int,
	rng: RngState,
	special: bool = False
) -> MonteCarloResult:
	"""Mixture Rotation EGC

	Monte-Carlo estimate of the quartic contrast's EGC with O(p), or SO(p), \
	acting on the means of a centered mixture

	Arguments:
		g (GaussianMixture): The centered mixture
		n_rotations (uint): The number of group samples
		rng (RngState): The random state
		special (bool): Optional, true to rotate by SO(p)

	Raises:
		GenericityDataException

	Returns:
		MonteCarloResult
	"""
	_check_centered(g)
	return egc_monte_carlo(
		MixtureQuartic(),
		orthogonal_sampler(g.p, special),
		lambda u: g.with_means(g.means @ u.entries.T),
		n_rotations,
		rng
	)

def randomization_test(observed: float, null_samples: np.ndarray) -> float:
	"""Randomization Test

	Two-sided empirical p-value of an observation under a sampled null: the \
	share of null samples at least as far from the null median as the \
	observation, with add-one correction

	Arguments:
		observed (float): The observed contrast
		null_samples (float[]): The contrast on generic transformations

	Raises:
		GenericityDataException

	Returns:
		float
	"""

	# Check the count
	aNull = np.asarray(null_samples, dtype=float).ravel()
	if aNull.size < MIN_NULL_SAMPLES:
		raise GenericityDataException(
			'insufficient-null-samples',
			'need at least %d null samples, got %d' % (
				MIN_NULL_SAMPLES, aNull.size
			)
		)

	# Count the deviations at least as large
	fMedian = np.median(aNull)
	iCount = int(np.count_nonzero(
		np.abs(aNull - fMedian) >= abs(observed - fMedian)
	))

	# Return the p-value
	return (1.0 + iCount) / (aNull.size + 1.0)

SCENARIOS = {
	'trace': 'normalized_trace',
	'nmf': 'nmf_centered',
	'mixture': 'mixture_quartic',
	'sic': 'total_power'
}
"""Scenarios

The scenario families scenario_report knows, and their default contrasts"""

def scenario_report(
	data: dict,
	n_samples: int,
	rng: RngState,
	special: bool = False,
	contrast: str | None = None
) -> dict:
	"""Scenario Report

	Monte-Carlo EGC of a scenario given as plain data, next to its closed \
	form. The family key picks the attribute and the group:

		trace: M, sigma_x and an optional sigma_e, rotations of the cause \
			covariance
		nmf: W and V, permutations of the columns of W
		mixture: weights, means, covariances, rotations of the centered means
		sic: s_xx and h2, circular shifts of the input spectrum

	Arguments:
		data (dict): The scenario
		n_samples (uint): The number of group samples
		rng (RngState): The random state
		special (bool): Optional, true to rotate by SO(n) instead of O(n)
		contrast (str): Optional, the registered name of another contrast

	Raises:
		ContrastEvaluationException
		GenericityConfigException
		GenericityDataException

	Returns:
		dict
	"""

	# Check the family
	sFamily = data.get('family')
	if sFamily not in SCENARIOS:
		raise GenericityConfigException(
			'invalid-config', 'family must be one of %s' % ', '.join(SCENARIOS)
		)
	oContrast = Contrast.create_type(contrast or SCENARIOS[sFamily])

	try:

		# Rotated cause covariance
		if sFamily == 'trace':
			aM, aSx, aSe = _trace_inputs(
				data['M'], data['sigma_x'], data.get('sigma_e')
			)
			mObserved = aM @ aSx @ aM.T + aSe
			fClosed = egc_trace(aM, aSx, aSe)
			fSampler = orthogonal_sampler(aSx.shape[0], special)
			fAction = lambda u: aM @ u.conjugate(aSx) @ aM.T + aSe

		# Permuted components
		elif sFamily == 'nmf':
			mObserved = NmfFactors(data['W'], data['V'])
			fClosed = egc_nmf(mObserved)
			fSampler = permutation_sampler(mObserved.n)
			fAction = lambda p: NmfFactors(
				p.apply_columns(mObserved.W), mObserved.V
			)

		# Rotated means
		elif sFamily == 'mixture':
			mObserved = center_mixture(GaussianMixture(
				data['weights'], data['means'], data['covariances']
			))
			fClosed = egc_mixture(mObserved)
			fSampler = orthogonal_sampler(mObserved.p, special)
			fAction = lambda u: mObserved.with_means(
				mObserved.means @ u.entries.T
			)

		# Shifted spectrum
		else:
			oS = SampledPsd(data['s_xx'])
			oH = SampledPsd(data['h2'])
			fClosed = egc_sic(oS, oH)
			mObserved = SampledPsd(oS.values * oH.values)
			fSampler = circular_shift_sampler()
			fAction = lambda g: SampledPsd(
				apply_shift_to_psd(oS, g).values * oH.values
			)

	except (KeyError, TypeError, ValueError) as e:
		raise GenericityDataException(
			'invalid-input', 'bad %s scenario: %s' % (sFamily, str(e))
		)

	# Sample, and report against the Monte-Carlo mean
	oNull = egc_monte_carlo(oContrast, fSampler, fAction, n_samples, rng)
	oReport = assess(oContrast(mObserved), oNull)

	# Return the report with the closed form next to it
	return {
		'family': sFamily,
		'contrast': oContrast.name,
		'report': oReport.to_dict(),
		'egc_closed_form': fClosed,
		'closed_form_ratio': generic_ratio(oReport.contrast_value, fClosed)
	}

def _trace_inputs(
	M: np.ndarray,
	sigma_x: np.ndarray,
	sigma_e: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Trace Inputs

	Converts and checks the shapes of the inputs of the trace contrasts

	Arguments:
		M (numpy.ndarray): The m x n mechanism
		sigma_x (numpy.ndarray): The n x n cause covariance
		sigma_e (numpy.ndarray | None): The m x m noise covariance

	Raises:
		GenericityDataException

	Returns:
		tuple
	"""

	# Convert
	aM = np.atleast_2d(np.asarray(M, dtype=float))
	aSx = as_covariance(sigma_x, 'Σ_X')
	iM, iN = aM.shape

	# No noise is zero noise
	aSe = np.zeros((iM, iM)) if sigma_e is None else \
		as_covariance(sigma_e, 'Σ_E')

	# Check the shapes
	if aSx.shape != (iN, iN) or aSe.shape != (iM, iM):
		raise GenericityDataException(
			'shape', 'M is %s but Σ_X is %s and Σ_E is %s' % (
				aM.shape, aSx.shape, aSe.shape
			)
		)

	# Return the inputs
	return aM, aSx, aSe

def trace_contrast(
	M: np.ndarray,
	sigma_x: np.ndarray,
	sigma_e: np.ndarray | None = None
) -> float:
	"""Trace Contrast

	Returns τ_m(M Σ_X Mᵀ + Σ_E), the normalized trace of the effect's \
	covariance

	Arguments:
		M (numpy.ndarray): The m x n mechanism
		sigma_x (numpy.ndarray): The n x n cause covariance
		sigma_e (numpy.ndarray): Optional, the m x m noise covariance

	Raises:
		GenericityDataException

	Returns:
		float
	"""
	aM, aSx, aSe = _trace_inputs(M, sigma_x, sigma_e)
	return float(np.trace(aM @ aSx @ aM.T + aSe) / aM.shape[0])
