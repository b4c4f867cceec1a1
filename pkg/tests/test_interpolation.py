"""Band-limited interpolation: reconstruction accuracy and identity residuals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bslib import interpolation as ip
from bslib.kernels import fejer_K


def _fejer(x):
    return float(fejer_K(x))


def _fejer_prime(x):
    h = 1e-6
    return (_fejer(x + h) - _fejer(x - h)) / (2 * h)


class TestCardinalSeries:
    def test_reconstructs_band_limited_function(self):
        # K has exponential type 2*pi, i.e. alpha = 1: samples at k/2
        samples = ip.sample_function(_fejer, 1.0, 400, 0.5, decay_const=0.2, decay_exponent=2.0)
        for z in (0.17, -1.3, 2.71, 0.49):
            val, err = ip.cardinal_series(samples, z)
            assert abs(val - _fejer(z)) <= err + 1e-9
            assert abs(val - _fejer(z)) <= 5e-4

    def test_exact_at_nodes(self):
        samples = ip.sample_function(_fejer, 1.0, 50, 0.5)
        for k in (-3, 0, 7):
            val, err = ip.cardinal_series(samples, k * 0.5)
            assert val == samples.value(k)
            assert err == 0.0

    def test_idempotence(self):
        # reconstruct, resample the reconstruction, reconstruct again
        samples = ip.sample_function(_fejer, 1.0, 300, 0.5, decay_const=0.2)

        def recon(z):
            return ip.cardinal_series(samples, z)[0]

        samples2 = ip.sample_function(recon, 1.0, 300, 0.5, decay_const=0.2)
        for z in (0.13, -0.77, 1.9):
            v1, _ = ip.cardinal_series(samples, z)
            v2, _ = ip.cardinal_series(samples2, z)
            assert v1 == pytest.approx(v2, abs=1e-12)

    def test_extended_mode_on_z_times_f(self):
        # extended reconstruction of g(z) = z * f(z) from the same lattice
        # matches basic reconstruction of g
        def g(z):
            return z * _fejer(z)

        def gprime(z):
            return _fejer(z) + z * _fejer_prime(z)

        basic = ip.sample_function(g, 1.0, 400, 0.5, decay_const=0.5, decay_exponent=1.5)
        extended = ip.sample_function(
            g, 1.0, 400, 0.5, fprime=gprime, decay_const=0.5, decay_exponent=1.5
        )
        for z in (0.23, -1.11, 3.4):
            vb, eb = ip.cardinal_series(basic, z, mode="basic")
            ve, ee = ip.cardinal_series(extended, z, mode="extended")
            assert abs(vb - ve) <= eb + ee + 1e-9
            assert abs(ve - g(z)) <= ee + 1e-9
            # the compensated form converges faster than the plain series
            assert abs(ve - g(z)) <= max(abs(vb - g(z)), 1e-9)

    def test_extended_requires_origin_data(self):
        samples = ip.sample_function(_fejer, 1.0, 10, 0.5)
        with pytest.raises(AssertionError):
            ip.cardinal_series(samples, 0.3, mode="extended")


class TestValueDerivativeFormula:
    def test_reconstructs_from_integer_lattice(self):
        samples = ip.sample_function(
            _fejer, 1.0, 400, 1.0, fprime=_fejer_prime, decay_const=0.2, decay_exponent=2.0
        )
        for z in (0.37, -2.2, 5.5):
            val, err = ip.vaaler_interpolation(samples, z)
            assert abs(val - _fejer(z)) <= err + 1e-5

    def test_node_short_circuit(self):
        samples = ip.sample_function(_fejer, 1.0, 20, 1.0, fprime=_fejer_prime)
        val, err = ip.vaaler_interpolation(samples, 3.0)
        assert val == samples.value(3)
        assert err == 0.0


class TestClassicalIdentities:
    @given(st.floats(min_value=0.05, max_value=0.95))
    @settings(max_examples=20, deadline=None)
    def test_cosecant_partial_fractions(self, w):
        rep = ip.classical_identity_residual("csc", w)
        assert rep.ok
        assert rep.residual <= rep.tail_bound + 1e-12

    def test_quadratic_partition_of_unity(self):
        for x in (0.37, -0.2, 1.9, 0.5):
            rep = ip.classical_identity_residual("fejer", x)
            assert rep.ok

    def test_sandwich_bounds(self):
        for omega in (1.0, 2.0, 5.0, 20.0):
            assert ip.classical_identity_residual("sandwich", omega).ok
            assert ip.classical_identity_residual("refined_sandwich", omega).ok

    def test_poisson_summation(self):
        rep = ip.classical_identity_residual("poisson", 2.0)
        assert rep.ok
        assert rep.residual <= 1e-12

    def test_parseval_sampling(self):
        rep = ip.classical_identity_residual("parseval_sampling")
        assert rep.ok
        assert rep.residual <= 1e-8
        assert rep.detail["lhs"] == pytest.approx(2.0 / 3.0, abs=1e-6)

    def test_derivative_bound(self):
        rep = ip.classical_identity_residual("bernstein")
        assert rep.ok

    def test_unknown_identity_rejected(self):
        with pytest.raises(ValueError):
            ip.classical_identity_residual("nope")


class TestSampleSetValidation:
    def test_length_mismatch_rejected(self):
        with pytest.raises(AssertionError):
            ip.SampleSet(1.0, 2, (0.0, 1.0))

    def test_nonfinite_rejected(self):
        with pytest.raises(AssertionError):
            ip.SampleSet(1.0, 1, (0.0, math.nan, 0.0))
