# coding=utf8
"""Test Pairwise

Tests the Trace Method and the spectral independence criterion on \
synthetic pairs
"""

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-27"

# Pip imports
import numpy as np
from numpy.testing import assert_allclose
import pytest

# Local imports
from group_genericity.contrasts import SampledPsd, total_power
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException, \
	GenericityDegenerateException
from group_genericity.groups import RngState, sample_orthogonal
from group_genericity.pairwise import \
	LinearPairModel, TimeSeriesPair, estimate_transfer_magnitude, \
	fit_linear_pair, infer_direction_sic, infer_direction_trace, \
	load_pairs_csv, load_series_csv, sic_ratio, simulate_linear_pair, \
	trace_condition_ratio, trace_generic_ratio, welch_psd

class TestFit:

	def test_noiseless(self):
		oRng = RngState(30)
		aM = oRng.generator.standard_normal((3, 4))
		aX = oRng.generator.standard_normal((500, 4))
		oModel = fit_linear_pair(aX, aX @ aM.T)
		assert_allclose(oModel.M, aM, atol=1e-8)
		assert_allclose(oModel.sigma_e, np.zeros((3, 3)), atol=1e-12)

	def test_independent(self):
		oRng = RngState(31)
		iN = 4000
		aX = oRng.generator.standard_normal((iN, 3))
		aY = oRng.generator.standard_normal((iN, 3))
		oModel = fit_linear_pair(aX, aY)
		assert np.max(np.abs(oModel.M)) < 4.0 / np.sqrt(iN)

	def test_too_few(self):
		aX = np.eye(3)
		with pytest.raises(GenericityDataException) as e:
			fit_linear_pair(aX, aX)
		assert e.value.kind == 'ill-conditioned-data'

	def test_singular(self):
		aX = RngState(32).generator.standard_normal((100, 1))
		with pytest.raises(GenericityDataException) as e:
			fit_linear_pair(np.hstack([aX, 2.0 * aX]), aX)
		assert e.value.kind == 'ill-conditioned-data'

	def test_lengths(self):
		with pytest.raises(GenericityDataException) as e:
			fit_linear_pair(np.ones((10, 2)), np.ones((9, 2)))
		assert e.value.kind == 'shape'

class TestTraceRatio:

	def test_orthogonal(self):
		oU = sample_orthogonal(3, RngState(33))
		oModel = LinearPairModel(
			oU.entries, np.diag([1.0, 2.0, 5.0]), np.zeros((3, 3))
		)
		assert trace_condition_ratio(oModel) == pytest.approx(1.0, abs=1e-12)

	def test_value(self):
		oModel = LinearPairModel(
			np.diag([2.0, 1.0]), np.diag([1.0, 3.0]), np.zeros((2, 2))
		)
		assert trace_condition_ratio(oModel) == pytest.approx(0.7, abs=1e-12)

	def test_isotropic(self):
		aM = RngState(34).generator.standard_normal((3, 3))
		oModel = LinearPairModel(aM, np.eye(3), np.zeros((3, 3)))
		assert trace_condition_ratio(oModel) == pytest.approx(1.0, abs=1e-12)

	def test_scale_invariant(self):
		aM = RngState(47).generator.standard_normal((3, 3))
		aS = np.diag([1.0, 2.0, 4.0])
		a = LinearPairModel(aM, aS, np.zeros((3, 3)))
		b = LinearPairModel(aM, 7.5 * aS, np.zeros((3, 3)))
		assert trace_condition_ratio(b) == \
			pytest.approx(trace_condition_ratio(a), rel=1e-12)

	def test_noise(self):
		oModel = LinearPairModel(
			np.diag([2.0, 1.0]), np.diag([1.0, 3.0]), np.eye(2)
		)
		assert trace_generic_ratio(oModel) == pytest.approx(4.5 / 6.0, abs=1e-12)

	def test_zero(self):
		oModel = LinearPairModel(np.zeros((2, 2)), np.eye(2), np.zeros((2, 2)))
		with pytest.raises(GenericityDegenerateException) as e:
			trace_condition_ratio(oModel)
		assert e.value.kind == 'degenerate-model'

	def test_shapes(self):
		with pytest.raises(GenericityDataException):
			LinearPairModel(np.eye(2), np.eye(3), np.zeros((2, 2)))

class TestTraceDirection:

	def test_swap(self):
		aX, aY, _ = simulate_linear_pair(4, 2000, RngState(35), 0.01)
		oForward = infer_direction_trace(aX, aY)
		oBackward = infer_direction_trace(aY, aX)
		assert oForward.forward_ratio == oBackward.backward_ratio
		assert oForward.backward_ratio == oBackward.forward_ratio
		assert oForward.margin == -oBackward.margin
		dFlip = {
			'x_causes_y': 'y_causes_x', 'y_causes_x': 'x_causes_y',
			'undecided': 'undecided'
		}
		assert dFlip[oForward.direction] == oBackward.direction

	def test_orthogonal(self):
		oRng = RngState(36)
		aM = sample_orthogonal(3, oRng).entries
		aX = oRng.generator.standard_normal((1000, 3)) * [1.0, 2.0, 3.0]
		oVerdict = infer_direction_trace(aX, aX @ aM.T)
		assert oVerdict.direction == 'undecided'
		assert oVerdict.forward_ratio == pytest.approx(1.0, abs=1e-8)
		assert oVerdict.backward_ratio == pytest.approx(1.0, abs=1e-8)

	def test_rectangular(self):
		aX = RngState(37).generator.standard_normal((200, 3))
		with pytest.raises(GenericityDataException) as e:
			infer_direction_trace(aX, aX[:, :2])
		assert e.value.kind == 'not-applicable'

	def test_verdict(self):
		aX, aY, _ = simulate_linear_pair(3, 500, RngState(38))
		d = infer_direction_trace(aX, aY, 0.05).to_dict()
		assert list(d.keys()) == [
			'direction', 'forward_ratio', 'backward_ratio', 'margin', 'method',
			'estimator', 'epsilon'
		]
		assert d['method'] == 'trace'
		assert d['estimator'] is None
		assert d['epsilon'] == 0.05

class TestWelch:

	def test_white(self):
		aX = RngState(39).generator.standard_normal(2**16)
		oPsd = welch_psd(aX)
		assert oPsd.B == 128
		assert total_power(oPsd) == pytest.approx(1.0, abs=0.05)

	def test_sinusoid(self):
		iBin = 20
		aT = np.arange(4096)
		oPsd = welch_psd(np.cos(2.0 * np.pi * iBin * aT / 256.0))
		fNear = oPsd.values[iBin - 2:iBin + 3].sum()
		assert fNear / oPsd.values.sum() > 0.95

	def test_constant(self):
		oPsd = welch_psd(np.full(1024, 3.0))
		assert_allclose(oPsd.values, 0.0, atol=1e-20)

	@pytest.mark.parametrize('length, segment, overlap', [
		(100, 256, 0.5),
		(1000, 100, 0.5),
		(1000, 256, 1.0)
	])
	def test_bad_config(self, length, segment, overlap):
		with pytest.raises(GenericityConfigException) as e:
			welch_psd(np.ones(length), segment, overlap)
		assert e.value.kind == 'invalid-config'

class TestTransfer:

	def test_identity(self):
		aX = RngState(40).generator.standard_normal(2**14)
		oH = estimate_transfer_magnitude(aX, aX)
		assert_allclose(oH.values, 1.0, atol=0.05)
		assert oH.estimator == 'cross-spectral'

	def test_delay(self):
		aW = RngState(41).generator.standard_normal(2**16 + 3)
		oH = estimate_transfer_magnitude(aW[3:], aW[:-3])
		assert_allclose(oH.values[1:], 1.0, atol=0.05)

	def test_moving_average(self):
		aW = RngState(42).generator.standard_normal(2**16 + 1)
		aX = aW[1:]
		aY = aW[1:] + aW[:-1]
		oH = estimate_transfer_magnitude(aX, aY)
		aNu = oH.frequencies
		aMask = (aNu >= 0.05) & (aNu <= 0.35)
		aExpected = 4.0 * np.cos(np.pi * aNu[aMask]) ** 2
		assert_allclose(oH.values[aMask], aExpected, rtol=0.1)

	def test_silent(self):
		with pytest.raises(GenericityDegenerateException) as e:
			estimate_transfer_magnitude(np.zeros(1024), np.ones(1024))
		assert e.value.kind == 'degenerate-spectrum'

class TestSicRatio:

	def test_flat_input(self):
		oH = SampledPsd(RngState(43).generator.uniform(size=16))
		assert sic_ratio(SampledPsd(np.ones(16)), oH) == pytest.approx(1.0)

	def test_flat_filter(self):
		oS = SampledPsd(RngState(44).generator.uniform(size=16))
		assert sic_ratio(oS, SampledPsd(np.full(16, 3.0))) == pytest.approx(1.0)

	def test_aligned(self):
		oS = SampledPsd([2.0, 0.0, 0.0, 0.0])
		assert sic_ratio(oS, oS) == pytest.approx(4.0, abs=1e-12)

	def test_silent(self):
		with pytest.raises(GenericityDegenerateException):
			sic_ratio(SampledPsd(np.zeros(4)), SampledPsd(np.ones(4)))

	def test_bins(self):
		with pytest.raises(GenericityDataException):
			sic_ratio(SampledPsd(np.ones(4)), SampledPsd(np.ones(8)))

class TestSicDirection:

	def test_white_input(self):
		aX = RngState(45).generator.standard_normal(2**15)
		aY = np.convolve(aX, np.full(3, 1.0 / 3.0))[:aX.size]
		oVerdict = infer_direction_sic(TimeSeriesPair(aX, aY))
		assert oVerdict.forward_ratio == pytest.approx(1.0, abs=0.05)
		assert oVerdict.method == 'sic'
		assert oVerdict.estimator == 'cross-spectral'

	def test_swap(self):
		aX = RngState(46).generator.standard_normal(4096)
		oPair = TimeSeriesPair(aX, np.convolve(aX, [1.0, 0.5])[:aX.size])
		a = infer_direction_sic(oPair)
		b = infer_direction_sic(oPair.swapped())
		assert a.forward_ratio == b.backward_ratio
		assert a.backward_ratio == b.forward_ratio

	def test_pair(self):
		with pytest.raises(GenericityDataException) as e:
			TimeSeriesPair(np.ones(300), np.ones(301))
		assert e.value.kind == 'shape'
		with pytest.raises(GenericityDataException) as e:
			TimeSeriesPair(np.ones(100), np.ones(100))
		assert e.value.kind == 'invalid-input'

class TestCsv:

	def test_pairs(self, tmp_path):
		oPath = tmp_path / 'pairs.csv'
		oPath.write_text('x0,x1,y0\n1,2,3\n4,5,6\n')
		aX, aY = load_pairs_csv(str(oPath))
		assert_allclose(aX, [[1.0, 2.0], [4.0, 5.0]])
		assert_allclose(aY, [[3.0], [6.0]])

	def test_pairs_header(self, tmp_path):
		oPath = tmp_path / 'bad.csv'
		oPath.write_text('a,b\n1,2\n')
		with pytest.raises(GenericityDataException) as e:
			load_pairs_csv(str(oPath))
		assert e.value.kind == 'invalid-input'

	def test_series(self, tmp_path):
		oPath = tmp_path / 'series.csv'
		oPath.write_text(
			'y,x\n' + ''.join('%d,%d\n' % (i, -i) for i in range(300))
		)
		oPair = load_series_csv(str(oPath))
		assert oPair.T == 300
		assert oPair.x[5] == -5.0
		assert oPair.y[5] == 5.0

	def test_missing(self, tmp_path):
		with pytest.raises(GenericityDataException):
			load_series_csv(str(tmp_path / 'nope.csv'))
