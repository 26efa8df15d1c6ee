# coding=utf8
"""Test Genericity

Tests the expected generic contrasts, generic ratios, the Monte-Carlo \
engine, and the randomization test
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-26"

# Pip imports
import numpy as np
from numpy.testing import assert_allclose
import pytest

# Local imports
from group_genericity.contrasts import \
	GaussianMixture, NmfCentered, NmfFactors, NormalizedTrace, SampledPsd, \
	TotalPower, mixture_quartic_contrast, nmf_centered_contrast, total_power
from group_genericity.exceptions import \
	ContrastEvaluationException, GenericityConfigException, \
	GenericityDataException, GenericityDegenerateException
from group_genericity.genericity import \
	assess, egc_mixture, egc_monte_carlo, egc_nmf, egc_sic, egc_trace, \
	expected_permutation_conjugation, generic_ratio, generic_ratio_trial, \
	mixture_rotation_egc, randomization_test, scenario_report, trace_contrast
from group_genericity.groups import \
	RngState, apply_shift_to_psd, circular_shift_sampler, \
	enumerate_circular_shifts, enumerate_permutations, orthogonal_sampler, \
	permutation_sampler

@pytest.fixture
def mixture():
	return GaussianMixture(
		[0.5, 0.5],
		[[1.0, 0.0], [-1.0, 0.0]],
		[np.diag([2.0, 1.0]), np.diag([2.0, 1.0])]
	)

class TestTrace:

	def test_egc(self):
		aM = np.diag([2.0, 1.0])
		aS = np.diag([1.0, 3.0])
		assert egc_trace(aM, aS) == pytest.approx(5.0, abs=1e-12)
		assert trace_contrast(aM, aS) == pytest.approx(3.5, abs=1e-12)
		assert generic_ratio(trace_contrast(aM, aS), egc_trace(aM, aS)) == \
			pytest.approx(0.7, abs=1e-12)

	def test_noise(self):
		aM = np.diag([2.0, 1.0])
		aS = np.diag([1.0, 3.0])
		assert egc_trace(aM, aS, np.eye(2)) == pytest.approx(6.0, abs=1e-12)

	def test_rectangular(self):
		aM = np.array([[1.0, 0.0, 2.0]])
		assert egc_trace(aM, np.eye(3)) == pytest.approx(5.0, abs=1e-12)

	def test_shapes(self):
		with pytest.raises(GenericityDataException) as e:
			egc_trace(np.eye(2), np.eye(3))
		assert e.value.kind == 'shape'

	def test_monte_carlo(self):
		aM = np.array([[1.0, 0.5], [0.0, 2.0]])
		aS = np.diag([1.0, 3.0])
		o = egc_monte_carlo(
			NormalizedTrace(), orthogonal_sampler(2),
			lambda u: aM @ u.conjugate(aS) @ aM.T, 4000, RngState(12)
		)
		assert abs(o.mean - egc_trace(aM, aS)) < 4 * o.stderr

class TestNmf:

	@pytest.mark.parametrize('n', [2, 3, 4, 5])
	def test_enumeration(self, n):
		oRng = RngState(13).derive(n)
		aW = oRng.generator.uniform(size=(6, n))
		aV = oRng.generator.uniform(size=(7, n))
		lValues = [
			nmf_centered_contrast(NmfFactors(p.apply_columns(aW), aV))
			for p in enumerate_permutations(n)
		]
		fMean = sum(lValues) / len(lValues)
		assert abs(egc_nmf(NmfFactors(aW, aV)) - fMean) < \
			1e-12 * max(1.0, abs(fMean))

	def test_permutation_conjugation(self):
		aA = np.array([[1.0, 2.0], [3.0, 4.0]])
		assert_allclose(
			expected_permutation_conjugation(aA), np.full((2, 2), 2.5),
			atol=1e-12
		)

	def test_permutation_conjugation_enumerated(self):
		aA = RngState(14).generator.standard_normal((4, 4))
		aMean = sum(p.conjugate(aA) for p in enumerate_permutations(4)) / 24
		assert_allclose(expected_permutation_conjugation(aA), aMean, atol=1e-12)

	def test_permutation_conjugation_small(self):
		with pytest.raises(GenericityDataException) as e:
			expected_permutation_conjugation(np.eye(1))
		assert e.value.kind == 'degenerate-dimension'

	def test_monte_carlo(self):
		oRng = RngState(15)
		aW = oRng.generator.uniform(size=(6, 4))
		oF = NmfFactors(aW, oRng.generator.uniform(size=(5, 4)))
		o = egc_monte_carlo(
			NmfCentered(), permutation_sampler(4),
			lambda p: NmfFactors(p.apply_columns(oF.W), oF.V), 3000, oRng
		)
		assert abs(o.mean - egc_nmf(oF)) < 4 * o.stderr

class TestMixture:

	def test_closed_form(self, mixture):
		assert egc_mixture(mixture) == pytest.approx(32.0, abs=1e-12)
		assert generic_ratio(
			mixture_quartic_contrast(mixture), egc_mixture(mixture)
		) == pytest.approx(1.0625, abs=1e-12)

	def test_isotropic(self):
		oG = GaussianMixture(
			[0.5, 0.5], [[1.0, 2.0], [-1.0, -2.0]], np.stack([np.eye(2)] * 2)
		)
		assert egc_mixture(oG) == \
			pytest.approx(mixture_quartic_contrast(oG), abs=1e-12)

	def test_not_centered(self):
		oG = GaussianMixture([1.0], [[1.0, 0.0]], np.eye(2)[None])
		with pytest.raises(GenericityDataException) as e:
			egc_mixture(oG)
		assert e.value.kind == 'precondition'

	@pytest.mark.parametrize('special', [False, True])
	def test_monte_carlo(self, mixture, special):
		o = mixture_rotation_egc(mixture, 4000, RngState(16), special)
		assert abs(o.mean - 32.0) < 4 * o.stderr

class TestSic:

	def test_flat(self):
		oS = SampledPsd(np.ones(8))
		oH = SampledPsd(RngState(17).generator.uniform(size=8))
		assert egc_sic(oS, oH) == \
			pytest.approx(total_power(oS) * total_power(oH), abs=1e-12)

	def test_product_of_powers(self):
		oRng = RngState(18)
		oS = SampledPsd(oRng.generator.uniform(size=16))
		oH = SampledPsd(oRng.generator.uniform(size=16))
		assert egc_sic(oS, oH) == \
			pytest.approx(total_power(oS) * total_power(oH), abs=1e-12)

	def test_monte_carlo(self):
		oRng = RngState(19)
		oS = SampledPsd(oRng.generator.uniform(size=32))
		oH = SampledPsd(oRng.generator.uniform(size=32))
		o = egc_monte_carlo(
			TotalPower(), circular_shift_sampler(),
			lambda g: SampledPsd(apply_shift_to_psd(oS, g).values * oH.values),
			3000, oRng
		)
		assert abs(o.mean - egc_sic(oS, oH)) < 4 * o.stderr

	def test_bins(self):
		with pytest.raises(GenericityDataException):
			egc_sic(SampledPsd(np.ones(4)), SampledPsd(np.ones(8)))

	def test_enumeration(self):
		oS = SampledPsd([4.0, 0.0, 0.0, 0.0])
		l = [apply_shift_to_psd(oS, g) for g in enumerate_circular_shifts(4)]
		assert sorted(int(np.argmax(o.values)) for o in l) == [0, 1, 2, 3]

class TestRatio:

	def test_zero_egc(self):
		with pytest.raises(GenericityDegenerateException) as e:
			generic_ratio(1.0, 0.0)
		assert e.value.kind == 'degenerate-contrast'

	def test_forward_backward(self):
		oRng = RngState(20)
		for _ in range(10):
			aM = oRng.generator.standard_normal((4, 4))
			aS = np.diag(oRng.generator.uniform(0.5, 2.0, 4))
			aB = np.linalg.inv(aM)
			aSy = aM @ aS @ aM.T
			fForward = generic_ratio(trace_contrast(aM, aS), egc_trace(aM, aS))
			fBackward = generic_ratio(
				trace_contrast(aB, aSy), egc_trace(aB, aSy)
			)
			fTrMMt = np.trace(aM @ aM.T)
			fTrInv = np.trace(np.linalg.inv(aM @ aM.T))
			assert fForward * fBackward == \
				pytest.approx(16.0 / (fTrMMt * fTrInv), abs=1e-10)
			assert fForward * fBackward <= 1.0 + 1e-12

	@pytest.mark.parametrize('family', ['trace', 'nmf', 'mixture'])
	def test_trials_average_one(self, family):
		oRng = RngState(21)
		aRatios = np.array([
			generic_ratio_trial(family, oRng.derive(i)) for i in range(300)
		])
		fStderr = aRatios.std(ddof=1) / np.sqrt(aRatios.size)
		assert abs(aRatios.mean() - 1.0) < 5 * fStderr + 0.02

	def test_trial_family(self):
		with pytest.raises(GenericityConfigException):
			generic_ratio_trial('nope', RngState(0))

class TestMonteCarlo:

	def test_deterministic(self):
		fAction = lambda u: u.conjugate(np.diag([1.0, 2.0, 3.0]))
		a = egc_monte_carlo(
			NormalizedTrace(), orthogonal_sampler(3), fAction, 50, RngState(22)
		)
		b = egc_monte_carlo(
			NormalizedTrace(), orthogonal_sampler(3), fAction, 50, RngState(22)
		)
		assert a.mean == b.mean
		assert a.mean == pytest.approx(2.0, abs=1e-12)

	def test_too_few(self):
		with pytest.raises(GenericityConfigException):
			egc_monte_carlo(
				NormalizedTrace(), orthogonal_sampler(2), lambda u: np.eye(2),
				1, RngState(0)
			)

	def test_contrast_fails(self):
		def fail(_):
			raise ValueError('boom')
		with pytest.raises(ContrastEvaluationException) as e:
			egc_monte_carlo(
				fail, orthogonal_sampler(2), lambda u: u, 10, RngState(0)
			)
		assert isinstance(e.value.__cause__, ValueError)

	def test_assess(self):
		o = egc_monte_carlo(
			NormalizedTrace(), orthogonal_sampler(2),
			lambda u: u.conjugate(np.diag([1.0, 3.0])), 100, RngState(23)
		)
		oReport = assess(2.0, o)
		assert oReport.generic_ratio == pytest.approx(1.0, abs=1e-12)
		assert oReport.n_group_samples == 100
		assert oReport.p_value is not None
		assert assess(2.0, o, 4.0).generic_ratio == 0.5

class TestRandomization:

	def test_median(self):
		assert randomization_test(10.0, np.arange(21.0)) == 1.0

	def test_extreme(self):
		aNull = np.arange(99.0)
		assert randomization_test(1000.0, aNull) == 1.0 / 100.0
		assert randomization_test(-1000.0, aNull) == 1.0 / 100.0

	def test_too_few(self):
		with pytest.raises(GenericityDataException) as e:
			randomization_test(0.0, np.arange(19.0))
		assert e.value.kind == 'insufficient-null-samples'

class TestScenario:

	def test_trace(self):
		d = scenario_report(
			{'family': 'trace', 'M': [[2, 0], [0, 1]], 'sigma_x': [[1, 0], [0, 3]]},
			500, RngState(24)
		)
		assert d['contrast'] == 'normalized_trace'
		assert d['egc_closed_form'] == pytest.approx(5.0, abs=1e-12)
		assert d['closed_form_ratio'] == pytest.approx(0.7, abs=1e-12)
		assert abs(d['report']['egc'] - 5.0) < 4 * d['report']['mc_stderr']

	def test_trace_noise(self):
		d = scenario_report(
			{
				'family': 'trace', 'M': [[2, 0], [0, 1]], 'sigma_x': [[1, 0], [0, 3]],
				'sigma_e': [[2, 0], [0, 2]]
			},
			500, RngState(26)
		)
		assert d['report']['contrast_value'] == pytest.approx(5.5, abs=1e-12)
		assert d['egc_closed_form'] == pytest.approx(7.0, abs=1e-12)
		assert abs(d['report']['egc'] - 7.0) < 4 * d['report']['mc_stderr']

	def test_sic(self):
		d = scenario_report(
			{'family': 'sic', 's_xx': [2, 0, 0, 0], 'h2': [2, 0, 0, 0]},
			200, RngState(25)
		)
		assert d['report']['contrast_value'] == pytest.approx(1.0, abs=1e-12)
		assert d['egc_closed_form'] == pytest.approx(0.25, abs=1e-12)

	def test_family(self):
		with pytest.raises(GenericityConfigException):
			scenario_report({'family': 'nope'}, 100, RngState(0))

	def test_missing_key(self):
		with pytest.raises(GenericityDataException) as e:
			scenario_report({'family': 'trace', 'M': [[1]]}, 100, RngState(0))
		assert e.value.kind == 'invalid-input'
