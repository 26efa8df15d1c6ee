# coding=utf8
"""Genericity Solvers

The estimation algorithms behind the latent variable experiments: NMF by \
multiplicative updates or by clamped alternating least squares, and \
clustering by k-means or by EM on a full covariance gaussian mixture
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-19"

# Limit exports
__all__ = [
	'ClusterFit', 'DENOMINATOR_FLOOR', 'NmfFit', 'gmm_em', 'kmeans',
	'nmf_als', 'nmf_multiplicative'
]

# Pip imports
import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import logsumexp
from scipy.stats import multivariate_normal

# Local imports
from group_genericity.contrasts import GaussianMixture, NmfFactors
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException
from group_genericity.groups import RngState

DENOMINATOR_FLOOR = 1e-12
"""Denominator Floor

The smallest denominator of a multiplicative update"""

RIDGE = 1e-6
"""Ridge

Covariance eigenvalues under this share of the mean eigenvalue get lifted"""

class NmfFit(NmfFactors):
	"""NMF Fit

	Factors returned by a solver, with the loss at every iteration

	Extends:
		NmfFactors
	"""

	def __init__(self,
		W: np.ndarray,
		V: np.ndarray,
		losses: list[float],
		converged: bool
	):
		super().__init__(W, V)
		self.losses: list[float] = losses
		self.converged: bool = converged

class ClusterFit(GaussianMixture):
	"""Cluster Fit

	A mixture returned by a clustering algorithm, with its objective (the \
	within cluster sum of squares for k-means, the log-likelihood for EM) at \
	every iteration

	Extends:
		GaussianMixture
	"""

	def __init__(self,
		weights: np.ndarray,
		means: np.ndarray,
		covariances: np.ndarray,
		history: list[float],
		converged: bool
	):
		super().__init__(weights, means, covariances)
		self.history: list[float] = history
		self.converged: bool = converged

def _check_nmf(X: np.ndarray, n_est: int, max_iters: int) -> np.ndarray:
	"""Check NMF

	Validates the arguments of an NMF solver and returns X as floats

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		numpy.ndarray
	"""

	# Convert
	aX = np.atleast_2d(np.asarray(X, dtype=float))
	if aX.ndim != 2 or aX.size == 0:
		raise GenericityDataException('shape', 'X must be a non-empty matrix')

	# Signs
	if np.any(aX < 0) or not np.all(np.isfinite(aX)):
		raise GenericityDataException(
			'invalid-input', 'X must be finite and nonnegative'
		)

	# Counts
	if n_est < 1 or max_iters < 1:
		raise GenericityConfigException(
			'invalid-parameter', 'n_est and max_iters must be at least 1'
		)

	# Return the matrix
	return aX

def _nmf_start(
	X: np.ndarray,
	n_est: int,
	rng: RngState
) -> tuple[np.ndarray, np.ndarray]:
	"""NMF Start

	Uniform random factors scaled so their product matches the mean of X

	Returns:
		tuple (W, V)
	"""
	fScale = np.sqrt(max(X.mean(), DENOMINATOR_FLOOR) / n_est)
	aW = fScale * rng.generator.uniform(size=(X.shape[0], n_est))
	aV = fScale * rng.generator.uniform(size=(X.shape[1], n_est))
	return aW, aV

def _loss(X: np.ndarray, W: np.ndarray, V: np.ndarray) -> float:
	"""Loss

	Squared Frobenius norm of X - W Vᵀ

	Returns:
		float
	"""
	return float(np.sum((X - W @ V.T) ** 2))

def _stalled(previous: float, current: float, tol: float, scale: float) -> bool:
	"""Stalled

	Returns true once the loss is zero, or its relative change is under tol

	Returns:
		bool
	"""
	if current <= 1e-30 * scale:
		return True
	return abs(previous - current) < tol * max(previous, DENOMINATOR_FLOOR)

def nmf_multiplicative(
	X: np.ndarray,
	n_est: int,
	rng: RngState,
	max_iters: int = 500,
	tol: float = 1e-6
) -> NmfFit:
	"""NMF Multiplicative

	Frobenius multiplicative updates W ← W ⊙ (X V) ⊘ (W VᵀV) and \
	V ← V ⊙ (XᵀW) ⊘ (V WᵀW), denominators floored. The loss does not \
	increase from one iteration to the next

	Arguments:
		X (numpy.ndarray): The d x s nonnegative data
		n_est (uint): The number of components
		rng (RngState): The random state of the initialization
		max_iters (uint): Optional, the iteration cap, defaults to 500
		tol (float): Optional, the relative loss change that stops the \
			iterations, defaults to 1e-6

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		NmfFit
	"""

	# Check and initialise
	aX = _check_nmf(X, n_est, max_iters)
	aW, aV = _nmf_start(aX, n_est, rng)
	fScale = float(np.sum(aX ** 2))
	lLosses = [_loss(aX, aW, aV)]
	bConverged = False

	# Iterate
	for _ in range(max_iters):
		aW *= (aX @ aV) / np.maximum(aW @ (aV.T @ aV), DENOMINATOR_FLOOR)
		aV *= (aX.T @ aW) / np.maximum(aV @ (aW.T @ aW), DENOMINATOR_FLOOR)
		lLosses.append(_loss(aX, aW, aV))

		# Stop once it stalls
		if _stalled(lLosses[-2], lLosses[-1], tol, fScale):
			bConverged = True
			break

	# Return the fit
	return NmfFit(aW, aV, lLosses, bConverged)

def nmf_als(
	X: np.ndarray,
	n_est: int,
	rng: RngState,
	max_iters: int = 500,
	tol: float = 1e-6
) -> NmfFit:
	"""NMF ALS

	Alternating unconstrained least squares for W then V, negative entries \
	clamped to zero after each solve. The clamping means the loss is not \
	guaranteed to decrease

	Arguments:
		X (numpy.ndarray): The d x s nonnegative data
		n_est (uint): The number of components
		rng (RngState): The random state of the initialization
		max_iters (uint): Optional, the iteration cap, defaults to 500
		tol (float): Optional, the relative loss change that stops the \
			iterations, defaults to 1e-6

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		NmfFit
	"""

	# Check and initialise
	aX = _check_nmf(X, n_est, max_iters)
	aW, aV = _nmf_start(aX, n_est, rng)
	fScale = float(np.sum(aX ** 2))
	lLosses = [_loss(aX, aW, aV)]
	bConverged = False

	# Iterate
	for _ in range(max_iters):
		aW = np.maximum(np.linalg.lstsq(aV, aX.T, rcond=None)[0].T, 0.0)
		aV = np.maximum(np.linalg.lstsq(aW, aX, rcond=None)[0].T, 0.0)
		lLosses.append(_loss(aX, aW, aV))

		# Stop once it stalls
		if _stalled(lLosses[-2], lLosses[-1], tol, fScale):
			bConverged = True
			break

	# Return the fit
	return NmfFit(aW, aV, lLosses, bConverged)

def _check_clusters(samples: np.ndarray, K: int) -> np.ndarray:
	"""Check Clusters

	Validates the arguments of a clustering algorithm and returns the \
	samples as floats

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		numpy.ndarray
	"""

	# Convert
	aX = np.asarray(samples, dtype=float)
	if aX.ndim != 2:
		raise GenericityDataException('shape', 'samples must be N x p')

	# Counts
	if K < 1:
		raise GenericityConfigException(
			'invalid-parameter', 'K must be at least 1'
		)
	iN, iP = aX.shape
	if iN < K * (iP + 1):
		raise GenericityDataException(
			'invalid-input', '%d samples are too few for %d clusters in ' \
				'dimension %d' % (iN, K, iP)
		)

	# Return the samples
	return aX

def _kmeans_plus_plus(X: np.ndarray, K: int, rng: RngState) -> np.ndarray:
	"""K-Means++

	Picks the first center uniformly, and each following one with \
	probability proportional to the squared distance to the nearest center

	Returns:
		numpy.ndarray
	"""
	oGen = rng.generator
	lCenters = [int(oGen.integers(X.shape[0]))]
	aD = cdist(X, X[lCenters], 'sqeuclidean').min(axis=1)
	while len(lCenters) < K:
		fTotal = aD.sum()
		i = int(oGen.choice(X.shape[0], p=aD / fTotal)) \
			if fTotal > 0 else int(oGen.integers(X.shape[0]))
		lCenters.append(i)
		aD = np.minimum(aD, cdist(X, X[[i]], 'sqeuclidean')[:, 0])
	return X[lCenters].copy()

def _moments(
	X: np.ndarray,
	labels: np.ndarray,
	K: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Moments

	Weights, means and maximum likelihood covariances of hard clusters

	Returns:
		tuple (weights, means, covariances)
	"""
	iN, iP = X.shape
	aWeights = np.empty(K)
	aMeans = np.empty((K, iP))
	aCovs = np.empty((K, iP, iP))
	for k in range(K):
		aMember = X[labels == k]
		aWeights[k] = aMember.shape[0]
		aMeans[k] = aMember.mean(axis=0)
		aCentered = aMember - aMeans[k]
		aCovs[k] = aCentered.T @ aCentered / aMember.shape[0]
	return aWeights / aWeights.sum(), aMeans, aCovs

def kmeans(
	samples: np.ndarray,
	K: int,
	rng: RngState,
	max_iters: int = 300
) -> tuple[np.ndarray, ClusterFit]:
	"""K-Means

	k-means++ seeding then Lloyd iterations. A cluster left empty is reseeded \
	at the point farthest from its center. Weights, means and covariances \
	of the mixture are computed from the final clusters

	Arguments:
		samples (numpy.ndarray): The N x p samples, N >= K (p + 1)
		K (uint): The number of clusters
		rng (RngState): The random state of the seeding
		max_iters (uint): Optional, the iteration cap, defaults to 300

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		tuple (labels, ClusterFit)
	"""

	# Check and seed
	aX = _check_clusters(samples, K)
	aCenters = _kmeans_plus_plus(aX, K, rng)
	aLabels = None
	lHistory = []
	bConverged = False

	# Iterate
	for _ in range(max_iters):

		# Assign
		aD = cdist(aX, aCenters, 'sqeuclidean')
		aNew = aD.argmin(axis=1)
		aBest = aD[np.arange(aX.shape[0]), aNew]

		# Reseed empty clusters from the farthest points
		for k in range(K):
			if not np.any(aNew == k):
				i = int(aBest.argmax())
				aCenters[k] = aX[i]
				aNew[i] = k
				aBest[i] = 0.0

		lHistory.append(float(aBest.sum()))

		# Stop once nothing moves
		if aLabels is not None and np.array_equal(aNew, aLabels):
			bConverged = True
			break
		aLabels = aNew

		# Update
		for k in range(K):
			aCenters[k] = aX[aLabels == k].mean(axis=0)

	# Return the labels and the mixture
	aWeights, aMeans, aCovs = _moments(aX, aLabels, K)
	return aLabels, ClusterFit(aWeights, aMeans, aCovs, lHistory, bConverged)

def _ridge(cov: np.ndarray) -> np.ndarray:
	"""Ridge

	Lifts a covariance whose smallest eigenvalue is under the ridge level \
	1e-6 tr(Σ) / p

	Returns:
		numpy.ndarray
	"""
	cov = (cov + cov.T) / 2.0
	fRidge = RIDGE * np.trace(cov) / cov.shape[0]
	if np.linalg.eigvalsh(cov)[0] < fRidge:
		cov = cov + max(fRidge, DENOMINATOR_FLOOR) * np.eye(cov.shape[0])
	return cov

def _expectation(
	samples: np.ndarray,
	weights: np.ndarray,
	means: np.ndarray,
	covariances: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
	"""Expectation

	Returns the responsibilities of each component for each sample, and the \
	log-likelihood of each sample

	Raises:
		GenericityDegenerateException

	Returns:
		tuple (N x K responsibilities, N log-likelihoods)
	"""
	try:
		aLog = np.column_stack([
			np.log(weights[k]) + multivariate_normal.logpdf(
				samples, means[k], covariances[k]
			) for k in range(weights.size)
		])
	except (np.linalg.LinAlgError, ValueError) as e:
		raise GenericityDegenerateException(
			'degenerate-fit', 'covariance collapsed: %s' % str(e)
		)
	aNorm = logsumexp(aLog, axis=1)
	return np.exp(aLog - aNorm[:, None]), aNorm

def gmm_em(
	samples: np.ndarray,
	K: int,
	rng: RngState,
	max_iters: int = 500,
	tol: float = 1e-7
) -> tuple[np.ndarray, ClusterFit]:
	"""GMM EM

	Expectation maximisation of a full covariance gaussian mixture, started \
	from k-means. Stops once the mean log-likelihood per sample improves by \
	less than tol

	Arguments:
		samples (numpy.ndarray): The N x p samples, N >= K (p + 1)
		K (uint): The number of components
		rng (RngState): The random state of the k-means start
		max_iters (uint): Optional, the iteration cap, defaults to 500
		tol (float): Optional, the stopping improvement, defaults to 1e-7

	Raises:
		GenericityConfigException
		GenericityDataException
		GenericityDegenerateException

	Returns:
		tuple (N x K responsibilities, ClusterFit)
	"""

	# Start from k-means
	aX = _check_clusters(samples, K)
	iN = aX.shape[0]
	_, oStart = kmeans(aX, K, rng)
	aWeights = oStart.weights
	aMeans = oStart.means
	aCovs = np.array([_ridge(a) for a in oStart.covariances])
	lHistory = []
	bConverged = False

	for _ in range(max_iters):

		# Expectation
		try:
			aLog = np.column_stack([
				np.log(aWeights[k]) + multivariate_normal.logpdf(
					aX, aMeans[k], aCovs[k]
				) for k in range(K)
			])
		except (np.linalg.LinAlgError, ValueError) as e:
			raise GenericityDegenerateException(
				'degenerate-fit', 'covariance collapsed: %s' % str(e)
			)
		aNorm = logsumexp(aLog, axis=1)
		aResp = np.exp(aLog - aNorm[:, None])
		lHistory.append(float(aNorm.sum()))

		# Stop once it stalls
		if len(lHistory) > 1 and (lHistory[-1] - lHistory[-2]) / iN < tol:
			bConverged = True
			break

		# Maximisation
		aNk = aResp.sum(axis=0)
		if np.any(aNk < 1e-10 * iN):
			raise GenericityDegenerateException(
				'degenerate-fit', 'a component lost all of its samples'
			)
		aWeights = aNk / aNk.sum()
		aMeans = (aResp.T @ aX) / aNk[:, None]
		for k in range(K):
			aCentered = aX - aMeans[k]
			aCovs[k] = _ridge(
				(aResp[:, k, None] * aCentered).T @ aCentered / aNk[k]
			)

	# Out of iterations, the responsibilities are one M-step behind
	if not bConverged:
		aResp, _ = _expectation(aX, aWeights, aMeans, aCovs)

	# Return the responsibilities and the mixture they came from
	return aResp, ClusterFit(aWeights, aMeans, aCovs, lHistory, bConverged)
