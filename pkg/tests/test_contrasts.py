# coding=utf8
"""Test Contrasts

Tests the contrasts, the attribute types, and the contrast registry
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
	Contrast, GaussianMixture, NmfFactors, SampledPsd, as_covariance, \
	center_mixture, empirical_quartic_contrast, mixture_mean, \
	mixture_quartic_contrast, nmf_centered_contrast, normalized_trace, \
	total_power
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException
from group_genericity.genericity import egc_nmf
from group_genericity.groups import RngState, sample_orthogonal

@pytest.fixture
def two_component():
	return GaussianMixture(
		[0.5, 0.5],
		[[1.0, 0.0], [-1.0, 0.0]],
		[np.diag([2.0, 1.0]), np.diag([2.0, 1.0])]
	)

class TestNormalizedTrace:

	def test_values(self):
		assert normalized_trace(np.eye(3)) == 1.0
		assert normalized_trace(np.diag([1.0, 3.0])) == 2.0
		assert normalized_trace(np.diag([2.0, 0.0, 0.0, 0.0])) == 0.5

	def test_orthogonal_invariance(self):
		oRng = RngState(12)
		for n in (2, 4, 7):
			aA = oRng.generator.standard_normal((n, n))
			aSigma = aA @ aA.T
			aQ = sample_orthogonal(n, oRng).entries
			aRotated = aQ @ aSigma @ aQ.T
			assert normalized_trace((aRotated + aRotated.T) / 2) == \
				pytest.approx(normalized_trace(aSigma), abs=1e-10)

	def test_not_symmetric(self):
		with pytest.raises(GenericityDataException) as e:
			normalized_trace(np.array([[1.0, 2.0], [0.0, 1.0]]))
		assert e.value.kind == 'invalid-input'

	def test_not_square(self):
		with pytest.raises(GenericityDataException) as e:
			as_covariance(np.ones((2, 3)))
		assert e.value.kind == 'shape'

	def test_negative(self):
		with pytest.raises(GenericityDataException):
			as_covariance(np.diag([1.0, -1.0]))

class TestTotalPower:

	def test_values(self):
		assert total_power(SampledPsd([4.0, 0.0, 0.0, 0.0])) == 1.0
		assert total_power(SampledPsd(np.ones(64))) == pytest.approx(1.0)

	def test_grid(self):
		o = SampledPsd(np.ones(4))
		assert o.B == 4
		assert o.delta == 0.125
		assert_allclose(o.frequencies, [0.0, 0.125, 0.25, 0.375])

	def test_negative(self):
		with pytest.raises(GenericityDataException) as e:
			SampledPsd([1.0, -0.5])
		assert e.value.kind == 'invalid-spectrum'

class TestQuartic:

	def test_empirical(self):
		assert empirical_quartic_contrast([[3.0, 4.0]]) == 625.0

	def test_empirical_empty(self):
		with pytest.raises(GenericityDataException) as e:
			empirical_quartic_contrast(np.empty((0, 2)))
		assert e.value.kind == 'empty-data'

	def test_mixture(self, two_component):
		assert mixture_quartic_contrast(two_component) == \
			pytest.approx(34.0, abs=1e-12)

	@pytest.mark.parametrize('p', [1, 3, 7])
	def test_single_standard(self, p):
		oG = GaussianMixture([1.0], np.zeros((1, p)), np.eye(p)[None])
		assert mixture_quartic_contrast(oG) == \
			pytest.approx(p * p + 2 * p, abs=1e-10)

	def test_not_centered(self):
		oG = GaussianMixture([1.0], [[1.0, 0.0]], np.eye(2)[None])
		with pytest.raises(GenericityDataException) as e:
			mixture_quartic_contrast(oG)
		assert e.value.kind == 'precondition'
		assert mixture_quartic_contrast(center_mixture(oG)) == \
			pytest.approx(8.0, abs=1e-12)

	def test_samples_agree(self, two_component):
		aX, _ = two_component.sample(200000, RngState(11))
		aX = aX - aX.mean(axis=0)
		assert empirical_quartic_contrast(aX) / 34.0 == \
			pytest.approx(1.0, abs=0.03)

	def test_mixture_mean(self):
		oG = GaussianMixture(
			[0.25, 0.75], [[4.0, 0.0], [0.0, 4.0]], np.stack([np.eye(2)] * 2)
		)
		assert_allclose(mixture_mean(oG), [1.0, 3.0])
		assert_allclose(mixture_mean(center_mixture(oG)), [0.0, 0.0], atol=1e-15)

	def test_weights(self):
		with pytest.raises(GenericityDataException):
			GaussianMixture([0.5, 0.6], np.zeros((2, 2)), np.stack([np.eye(2)] * 2))
		with pytest.raises(GenericityDataException) as e:
			GaussianMixture([1.0], np.zeros((1, 2)), np.eye(3)[None])
		assert e.value.kind == 'shape'

class TestNmf:

	def test_centered(self):
		oF = NmfFactors(np.eye(2), np.eye(2))
		assert nmf_centered_contrast(oF) == pytest.approx(1.0, abs=1e-12)

	def test_two_components(self):
		# w = (1, -1) and v = (1, 0, -2) once centered
		oF = NmfFactors(
			[[3.0, 1.0], [0.0, 2.0]], [[2.0, 0.0], [1.0, 1.0], [0.0, 4.0]]
		)
		assert nmf_centered_contrast(oF) == pytest.approx(40.0, abs=1e-12)
		assert egc_nmf(oF) == pytest.approx(40.0, abs=1e-12)

	def test_identical_columns(self):
		aV = RngState(13).generator.uniform(size=(4, 3))
		oF = NmfFactors(np.ones((3, 3)), aV)
		assert nmf_centered_contrast(oF) == 0.0

	def test_joint_permutation(self):
		oRng = RngState(14)
		aW = oRng.generator.uniform(size=(6, 5))
		aV = oRng.generator.uniform(size=(7, 5))
		lOrder = [3, 0, 4, 1, 2]
		fPermuted = nmf_centered_contrast(NmfFactors(aW[:, lOrder], aV[:, lOrder]))
		assert fPermuted == \
			pytest.approx(nmf_centered_contrast(NmfFactors(aW, aV)), rel=1e-12)

	def test_balanced(self):
		aW = np.array([[3.0, 0.0, 1.0], [4.0, 0.0, 1.0]])
		aV = np.array([[1.0, 2.0, 0.5], [0.0, 1.0, 2.0]])
		oB = NmfFactors(aW, aV).balanced()
		assert_allclose(np.linalg.norm(oB.W, axis=0), [1.0, 0.0, 1.0])
		assert_allclose(oB.V[:, 0], [5.0, 0.0])
		assert_allclose(oB.product(), aW @ aV.T)

	def test_single_component(self):
		with pytest.raises(GenericityDegenerateException) as e:
			nmf_centered_contrast(NmfFactors([[1.0], [2.0]], [[1.0]]))
		assert e.value.kind == 'degenerate-factorization'

	def test_negative(self):
		with pytest.raises(GenericityDataException):
			NmfFactors([[1.0, -1.0]], [[1.0, 1.0]])

	def test_product(self):
		oF = NmfFactors([[1.0, 2.0]], [[3.0, 4.0], [5.0, 6.0]])
		assert_allclose(oF.product(), [[11.0, 17.0]])

class TestRegistry:

	@pytest.mark.parametrize('name', [
		'empirical_quartic', 'mixture_quartic', 'nmf_centered',
		'normalized_trace', 'total_power'
	])
	def test_types(self, name):
		assert name in Contrast.types()
		assert Contrast.create_type(name).name == name

	def test_call(self):
		o = Contrast.create_type('normalized_trace')
		assert o(np.diag([1.0, 3.0])) == 2.0

	def test_unknown(self):
		with pytest.raises(GenericityConfigException) as e:
			Contrast.create_type('nope')
		assert e.value.kind == 'invalid-config'

	def test_duplicate(self):
		with pytest.raises(ValueError):
			Contrast.create_type('total_power').__class__.add_type('total_power')
