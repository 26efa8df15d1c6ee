# coding=utf8
"""Test Solvers

Tests the NMF and clustering algorithms the experiments fit
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-27"

# Pip imports
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest
from scipy.special import logsumexp
from scipy.stats import multivariate_normal

# Local imports
from group_genericity import solvers
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException
from group_genericity.groups import RngState
from group_genericity.latent import cluster_performance

def low_rank(seed, d=12, s=15, n=3):
	oRng = RngState(seed)
	aW = oRng.generator.uniform(size=(d, n))
	aV = oRng.generator.uniform(size=(s, n))
	return aW @ aV.T

def relative_error(x, fit):
	return np.linalg.norm(x - fit.product()) / np.linalg.norm(x)

def blobs(seed, K=3, p=2, per=100):
	oRng = RngState(seed)
	aCenters = 20.0 * np.arange(K)[:, None] * np.ones(p)
	aLabels = np.repeat(np.arange(K), per)
	aX = aCenters[aLabels] + oRng.generator.standard_normal((K * per, p))
	return aX, aLabels

class TestNmf:

	def test_multiplicative_monotone(self):
		aX = low_rank(50)
		oFit = solvers.nmf_multiplicative(aX, 3, RngState(51), 300, 1e-12)
		aLosses = np.array(oFit.losses)
		assert np.all(np.diff(aLosses) <= 1e-10 * aLosses[0])
		assert aLosses[-1] < 0.2 * aLosses[0]

	@pytest.mark.parametrize('solver', [
		solvers.nmf_multiplicative, solvers.nmf_als
	])
	def test_shapes(self, solver):
		oFit = solver(low_rank(52), 4, RngState(53))
		assert oFit.W.shape == (12, 4)
		assert oFit.V.shape == (15, 4)
		assert np.all(oFit.W >= 0)
		assert np.all(oFit.V >= 0)
		assert len(oFit.losses) >= 2

	def test_multiplicative_exact_rank(self):
		iGood = 0
		for i in range(10):
			aX = low_rank(70 + i, d=10, s=12, n=2)
			oFit = solvers.nmf_multiplicative(
				aX, 2, RngState(80 + i), 10000, 1e-12
			)
			if relative_error(aX, oFit) < 1e-3:
				iGood += 1
		assert iGood >= 9

	@pytest.mark.parametrize('solver', [
		solvers.nmf_multiplicative, solvers.nmf_als
	])
	def test_rank_one(self, solver):
		aX = low_rank(57, n=1)
		oFit = solver(aX, 1, RngState(58))
		assert relative_error(aX, oFit) < 1e-6

	def test_seeded(self):
		aX = low_rank(54)
		a = solvers.nmf_als(aX, 3, RngState(55))
		b = solvers.nmf_als(aX, 3, RngState(55))
		assert_array_equal(a.W, b.W)
		assert a.losses == b.losses

	def test_zero(self):
		oFit = solvers.nmf_multiplicative(np.zeros((4, 5)), 2, RngState(56))
		assert oFit.converged
		assert np.abs(oFit.product()).max() < 1e-6

	def test_negative(self):
		with pytest.raises(GenericityDataException) as e:
			solvers.nmf_als(-np.ones((3, 3)), 2, RngState(0))
		assert e.value.kind == 'invalid-input'

	def test_components(self):
		with pytest.raises(GenericityConfigException):
			solvers.nmf_multiplicative(np.ones((3, 3)), 0, RngState(0))

class TestKMeans:

	def test_separated(self):
		aX, aLabels = blobs(60)
		aEst, oFit = solvers.kmeans(aX, 3, RngState(61))
		assert cluster_performance(aLabels, aEst) == 1.0
		assert oFit.converged
		assert_allclose(np.sort(oFit.weights), [1 / 3, 1 / 3, 1 / 3])

	def test_history(self):
		aX, _ = blobs(62, K=4, p=3, per=50)
		_, oFit = solvers.kmeans(aX, 4, RngState(63))
		aHistory = np.array(oFit.history)
		assert np.all(np.diff(aHistory) <= 1e-9 * aHistory[0])

	def test_too_few(self):
		with pytest.raises(GenericityDataException) as e:
			solvers.kmeans(np.ones((5, 2)), 2, RngState(0))
		assert e.value.kind == 'invalid-input'

class TestEm:

	def test_single_component(self):
		aX = RngState(64).generator.standard_normal((400, 3)) @ \
			np.array([[2.0, 0.0, 0.0], [0.5, 1.0, 0.0], [0.0, 0.3, 0.5]])
		aResp, oFit = solvers.gmm_em(aX, 1, RngState(65))
		assert_allclose(aResp, 1.0)
		assert_allclose(oFit.weights, [1.0])
		assert_allclose(oFit.means[0], aX.mean(axis=0), atol=1e-12)
		assert_allclose(
			oFit.covariances[0], np.cov(aX.T, bias=True), rtol=1e-10,
			atol=1e-12
		)
		assert oFit.converged

	def test_separated(self):
		aX, aLabels = blobs(66)
		aResp, oFit = solvers.gmm_em(aX, 3, RngState(67))
		assert cluster_performance(aLabels, aResp.argmax(axis=1)) == 1.0
		assert_allclose(aResp.sum(axis=1), 1.0)
		aHistory = np.array(oFit.history)
		assert np.all(np.diff(aHistory) >= -1e-8 * abs(aHistory[0]))

	def test_iteration_cap(self):
		aX, _ = blobs(68, K=2, p=2, per=40)
		aX = aX / 10.0
		aResp, oFit = solvers.gmm_em(aX, 2, RngState(69), max_iters=1)
		aLog = np.column_stack([
			np.log(oFit.weights[k]) + multivariate_normal.logpdf(
				aX, oFit.means[k], oFit.covariances[k]
			) for k in range(2)
		])
		aExpected = np.exp(aLog - logsumexp(aLog, axis=1)[:, None])
		assert not oFit.converged
		assert_allclose(aResp, aExpected, rtol=1e-10, atol=1e-12)
