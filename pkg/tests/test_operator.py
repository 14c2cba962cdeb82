import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LATTICES, random_symbol, rel
from periodic_psido.catalog import Exponential, Gaussian, HermiteGaussian
from periodic_psido.exceptions import AliasingError
from periodic_psido.lattice import PeriodMatrix
from periodic_psido.operator import (
    OperatorSpec,
    aliasing_margin,
    apply_adjoint,
    apply_multiplier,
    apply_oracle,
    apply_series,
    apply_series_lattice,
    dense_matrix,
    multiplier_symbol_2d,
    phase_factor,
)
from periodic_psido.signal import GridSignal, modulate, tfs_apply, translate
from periodic_psido.symbol import PeriodicSymbol

TAUS = (0.0, 0.5, 1.0)
L2 = PeriodMatrix.identity(2)


class TestPhase:
    def test_zero_index(self):
        assert phase_factor((0, 0), 0.7, LATTICES["shear"]) == 1

    def test_tau_zero(self):
        assert phase_factor((3, -2), 0.0, LATTICES["diag"]) == 1

    def test_value(self):
        # mu = (1/2, 2) for kappa = (1, 1) on diag(2, 0.5)
        assert phase_factor((1, 1), 0.5, LATTICES["diag"]) == pytest.approx(np.exp(1j * np.pi * 0.5 * 2 * 0.5 * 2))

    def test_spec_validation(self):
        p = PeriodicSymbol(L2, {(2, 0): 1.0})
        with pytest.raises(ValueError):
            OperatorSpec(p, 1.5)
        with pytest.raises(ValueError):
            OperatorSpec(p, 0.0, 1)
        with pytest.raises(ValueError):
            OperatorSpec(PeriodicSymbol.constant(PeriodMatrix.identity(1)))


class TestSeries:
    @pytest.mark.parametrize("tau", TAUS)
    def test_identity(self, tau):
        f = HermiteGaussian(2, 1.0).sample(16, 256)
        out = apply_series(OperatorSpec(PeriodicSymbol.constant(L2), tau), f)
        assert np.abs(out.values - f.values).max() <= 1e-12 * np.abs(f.values).max()

    def test_zero_symbol(self):
        f = Gaussian().sample(16, 256)
        assert apply_series(OperatorSpec(PeriodicSymbol(L2)), f).norm() == 0

    @pytest.mark.parametrize("tau", TAUS)
    def test_single_term(self, tau):
        p = PeriodicSymbol(L2, {(1, 0): 1.0})
        f = Gaussian(0.8).sample(16, 256)
        np.testing.assert_allclose(apply_series(OperatorSpec(p, tau), f).values, modulate(f, 1.0).values, atol=1e-14)

    @pytest.mark.parametrize("tau", TAUS)
    def test_single_term_shift(self, tau):
        # kappa = (1, 1): phase exp(2 pi i tau) times M_1 T_{-1}
        p = PeriodicSymbol(L2, {(1, 1): 2.0})
        f = Gaussian(0.8).sample(16, 256)
        expected = 2 * np.exp(2j * np.pi * tau) * tfs_apply(f, [-1.0, 1.0]).values
        np.testing.assert_allclose(apply_series(OperatorSpec(p, tau), f).values, expected, atol=1e-13)

    @pytest.mark.parametrize("name", list(LATTICES))
    @pytest.mark.parametrize("tau", TAUS)
    def test_lattice_form_bit_identical(self, name, tau, rng):
        p = random_symbol(rng, LATTICES[name], terms=6, K=2, zero=True)
        f = Gaussian(0.7).sample(16, 512)
        spec = OperatorSpec(p, tau)
        np.testing.assert_array_equal(apply_series(spec, f).values, apply_series_lattice(spec, f).values)

    def test_linearity(self, rng):
        p = random_symbol(rng, LATTICES["shear"], terms=5, K=2)
        f, g = Gaussian(0.7).sample(16, 256), HermiteGaussian(1, 1.0).sample(16, 256)
        spec = OperatorSpec(p, 0.5)
        lhs = apply_series(spec, 2 * f + 3j * g)
        rhs = 2 * apply_series(spec, f) + 3j * apply_series(spec, g)
        assert rel(lhs, rhs) <= 1e-13

    def test_symbol_additivity(self, rng):
        L = LATTICES["diag"]
        p, q = random_symbol(rng, L), random_symbol(rng, L)
        f = Gaussian(0.7).sample(16, 256)
        lhs = apply_series(OperatorSpec(p + q, 0.3), f)
        rhs = apply_series(OperatorSpec(p, 0.3), f) + apply_series(OperatorSpec(q, 0.3), f)
        assert rel(lhs, rhs) <= 1e-13

    def test_truncation_radius(self):
        p = PeriodicSymbol(L2, {(0, 0): 1.0, (2, 0): 0.5})
        f = Gaussian().sample(16, 256)
        spec = OperatorSpec(p, 0.0, truncation=4)
        assert spec.truncation == 4
        assert rel(apply_series(spec, f), apply_series(OperatorSpec(p), f)) == 0

    def test_x_independent_is_tau_free(self, rng):
        p = PeriodicSymbol(L2, {(0, k): complex(rng.normal(), rng.normal()) for k in (-2, -1, 0, 1, 3)})
        f = HermiteGaussian(1, 0.8).sample(16, 256)
        base = apply_series(OperatorSpec(p, 0.0), f)
        for tau in (0.3, 0.5, 1.0):
            np.testing.assert_array_equal(apply_series(OperatorSpec(p, tau), f).values, base.values)

    def test_2d_signals(self, rng):
        L = PeriodMatrix.identity(4)
        p = PeriodicSymbol(L, {(1, 0, 0, 0): 1.0, (0, 1, 1, 0): 0.5j})
        g = lambda pts: np.exp(-np.pi * np.sum(pts**2, -1))  # noqa: E731
        f = GridSignal.sample(g, 12, 64, d=2)
        out = apply_series(OperatorSpec(p, 0.5), f)
        expected = modulate(f, [1.0, 0.0]).values + 0.5j * modulate(translate(f, [-1.0, 0.0]), [0.0, 1.0]).values
        np.testing.assert_allclose(out.values, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_series(OperatorSpec(PeriodicSymbol.constant(PeriodMatrix.identity(4))), Gaussian().sample(16, 64))


class TestAliasing:
    def test_raises_near_nyquist(self):
        p = PeriodicSymbol(L2, {(7, 0): 1.0})
        f = Gaussian().sample(16, 128)  # nyquist 4
        with pytest.raises(AliasingError) as info:
            apply_series(OperatorSpec(p), f)
        assert info.value.margin < 0.2

    def test_margin_value(self):
        p = PeriodicSymbol(L2, {(2, 0): 1.0})
        assert aliasing_margin(OperatorSpec(p), Gaussian().sample(16, 128)) == pytest.approx(0.5)

    def test_margin_uses_lattice(self):
        p = PeriodicSymbol(LATTICES["diag"], {(4, 0): 1.0})  # mu1 = 2
        assert aliasing_margin(OperatorSpec(p), Gaussian().sample(16, 128)) == pytest.approx(0.5)


class TestOracle:
    @pytest.mark.parametrize("name", list(LATTICES))
    @pytest.mark.parametrize("tau", TAUS)
    def test_series_matches_quadrature(self, name, tau, rng):
        p = random_symbol(rng, LATTICES[name], terms=4, K=2, zero=True)
        s = HermiteGaussian(1, 0.7)
        f = s.sample(16, 512)
        assert rel(apply_series(OperatorSpec(p, tau), f), apply_oracle(p, tau, s, f)) <= 1e-7

    def test_identity_oracle(self):
        s = Gaussian(1.0)
        f = s.sample(16, 256)
        out = apply_oracle(PeriodicSymbol.constant(L2), 0.5, s, f)
        assert np.abs(out.values - f.values).max() <= 1e-10

    @pytest.mark.parametrize("tau", TAUS)
    def test_exponential_closed_form(self, tau):
        p = PeriodicSymbol(L2, {(1, 1): 1.0, (0, -1): 0.5})
        s = Exponential(0.25)
        f = s.sample(16, 256)
        assert rel(apply_series(OperatorSpec(p, tau), f), apply_oracle(p, tau, s, f)) <= 1e-12

    def test_rejects_2d(self):
        p = PeriodicSymbol.constant(PeriodMatrix.identity(4))
        with pytest.raises(ValueError):
            apply_oracle(p, 0.0, Gaussian(), GridSignal.zeros(8, 16, d=2))


class TestAdjoint:
    @pytest.mark.parametrize("name", list(LATTICES))
    @pytest.mark.parametrize("tau", TAUS)
    def test_inner_product(self, name, tau, rng):
        p = random_symbol(rng, LATTICES[name], terms=5, K=2, zero=True)
        spec = OperatorSpec(p, tau)
        f = HermiteGaussian(1, 0.8).sample(16, 256)
        g = modulate(Gaussian(0.9).sample(16, 256), 0.3)
        lhs = apply_series(spec, f).inner(g)
        rhs = f.inner(apply_adjoint(spec, g))
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs) + 1e-14

    def test_dense_matrix(self, rng):
        p = random_symbol(rng, L2, terms=4, K=2)
        spec = OperatorSpec(p, 0.5)
        f = Gaussian().sample(8, 64)
        A = dense_matrix(spec, f)
        np.testing.assert_allclose(A @ f.values, apply_series(spec, f).values, atol=1e-13)
        adj = np.stack([apply_adjoint(spec, f.with_values(e)).values for e in np.eye(64)], axis=1)
        np.testing.assert_allclose(adj, A.conj().T, atol=1e-13)


class TestMultiplier:
    def sigma(self, P):
        return PeriodicSymbol(PeriodMatrix.diagonal([P]), {(-1,): 0.25, (0,): 1.0, (1,): 0.5j, (2,): -0.3})

    @pytest.mark.parametrize("P", [1.0, 0.5, 2.0])
    def test_two_paths_agree(self, P):
        u = HermiteGaussian(2, 0.9).sample(16, 512)
        s = self.sigma(P)
        assert rel(apply_multiplier(s, u, "series"), apply_multiplier(s, u, "fourier")) <= 1e-10

    def test_embedding_matches(self):
        u = Gaussian(0.8).sample(16, 256)
        s = self.sigma(1.0)
        out = apply_series(OperatorSpec(multiplier_symbol_2d(s), 0.5), u)
        assert rel(out, apply_multiplier(s, u)) <= 1e-13

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            apply_multiplier(self.sigma(1.0), Gaussian().sample(16, 64), "magic")

    @settings(max_examples=15, deadline=None)
    @given(st.floats(0.4, 3.0), st.floats(-1, 1), st.floats(-1, 1))
    def test_paths_agree_random(self, P, a, b):
        s = PeriodicSymbol(PeriodMatrix.diagonal([P]), {(0,): 1.0, (1,): a, (-2,): 1j * b})
        u = Gaussian(0.8).sample(16, 512)
        assert rel(apply_multiplier(s, u, "series"), apply_multiplier(s, u, "fourier")) <= 1e-10
