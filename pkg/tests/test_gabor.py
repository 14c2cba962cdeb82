import numpy as np
import pytest

from conftest import rel
from periodic_psido.catalog import Gaussian, HermiteGaussian
from periodic_psido.exceptions import NotInvertibleError
from periodic_psido.gabor import (
    GaborSystem,
    ScanRow,
    StftGrid,
    dual_window,
    frame_coefficients,
    frame_operator_direct,
    frame_synthesis,
    gabor_operator_symbol,
    gabor_spec,
    modulation_norm,
    scan,
    stft,
)
from periodic_psido.operator import apply_series
from periodic_psido.signal import GridSignal, modulate, tfs_apply, translate
from periodic_psido.weights import ModerateWeight, PolynomialWeight


def random_signal(rng, T=16, N=256, bumps=3):
    """Sum of a few shifted, modulated Gaussians: localised and band-limited."""
    f = GridSignal.zeros(T, N)
    g = Gaussian(rng.uniform(0.6, 1.2)).sample(T, N)
    for _ in range(bumps):
        c = complex(rng.normal(), rng.normal())
        f = f + c * tfs_apply(g, [rng.uniform(-2, 2), rng.uniform(-1.5, 1.5)])
    return f


@pytest.fixture(scope="module")
def half_system():
    return GaborSystem.gaussian(0.5, 0.5, 8, 16, 256)


class TestStft:
    def test_origin(self):
        g = HermiteGaussian(1, 0.9).sample(16, 256)
        V = stft(g, g)
        i = np.argmin(np.abs(g.nodes))
        j = np.argmin(np.abs(g.frequencies))
        assert V[i, j] == pytest.approx(g.norm() ** 2, rel=1e-13)

    @pytest.mark.parametrize("seed", range(3))
    def test_isometry(self, seed):
        rng = np.random.default_rng(seed)
        f = random_signal(rng)
        g = Gaussian(1.0).sample(16, 256)
        grid = StftGrid.native(f)
        total = np.sum(np.abs(stft(f, g, grid)) ** 2) * grid.cell
        assert total == pytest.approx((f.norm() * g.norm()) ** 2, rel=1e-4)

    def test_gaussian_closed_form(self):
        g = Gaussian(1.0).sample(16, 256)
        V = stft(g, g)
        X, W = np.meshgrid(g.nodes, g.frequencies, indexing="ij")
        assert np.abs(np.abs(V) - np.exp(-np.pi * (X**2 + W**2) / 2)).max() <= 1e-8

    def test_off_grid_frequencies(self):
        g = Gaussian(1.0).sample(16, 256)
        grid = StftGrid.uniform(-2, 2, 9, -1.13, 1.07, 7)
        V = stft(g, g, grid)
        X, W = np.meshgrid(grid.x, grid.omega, indexing="ij")
        assert np.abs(np.abs(V) - np.exp(-np.pi * (X**2 + W**2) / 2)).max() <= 1e-8

    def test_zero_window(self):
        with pytest.raises(ValueError):
            stft(Gaussian().sample(16, 64), GridSignal.zeros(16, 64))

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            stft(Gaussian().sample(16, 64), Gaussian().sample(16, 128))


class TestModulationNorm:
    def test_zero(self):
        g = Gaussian().sample(16, 256)
        assert modulation_norm(GridSignal.zeros(16, 256), g) == 0

    def test_l2_case(self):
        rng = np.random.default_rng(11)
        f = random_signal(rng)
        g = Gaussian().sample(16, 256)
        assert modulation_norm(f, g) == pytest.approx(f.norm() * g.norm(), rel=1e-4)

    def test_bad_exponent(self):
        g = Gaussian().sample(16, 64)
        with pytest.raises(ValueError):
            modulation_norm(g, g, p=0.5)

    def test_infinite_exponents(self):
        g = Gaussian().sample(16, 256)
        assert modulation_norm(g, g, np.inf, np.inf) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("pq", [(2, 2), (1, 2), (2, 1), (np.inf, 1)])
    def test_tfs_invariance(self, pq):
        m = ModerateWeight.from_polynomial(PolynomialWeight(2), 2)
        f = Gaussian(0.8).sample(16, 256)
        g = Gaussian(1.0).sample(16, 256)
        p, q = pq
        base = modulation_norm(f, g, p, q, m)
        for z in ([1.0, 0.5], [-2.0, 1.5], [0.25, -2.0]):
            moved = modulation_norm(tfs_apply(f, z), g, p, q, m)
            assert moved <= m.constant * m.reference(np.array(z)) * base


class TestFrameOperator:
    def test_positivity(self, half_system):
        f = random_signal(np.random.default_rng(3))
        q = frame_operator_direct(half_system, f).inner(f)
        coeffs = frame_coefficients(half_system, f)
        assert abs(q.imag) <= 1e-10
        assert q.real == pytest.approx(np.sum(np.abs(coeffs) ** 2), rel=1e-12)

    def test_rank_one(self):
        sys = GaborSystem.gaussian(0.5, 0.5, 0, 16, 256)
        f = random_signal(np.random.default_rng(4))
        out = frame_operator_direct(sys, f)
        assert rel(out, f.inner(sys.g) * sys.g) <= 1e-13

    @pytest.mark.parametrize("seed", range(3))
    def test_self_adjoint(self, half_system, seed):
        rng = np.random.default_rng(seed)
        f1, f2 = random_signal(rng), random_signal(rng)
        a = frame_operator_direct(half_system, f1).inner(f2)
        b = f1.inner(frame_operator_direct(half_system, f2))
        assert abs(a - b) <= 1e-10

    @pytest.mark.parametrize("seed", range(3))
    def test_identification(self, half_system, seed):
        spec = gabor_spec(half_system)
        f = random_signal(np.random.default_rng(seed))
        assert rel(apply_series(spec, f), frame_operator_direct(half_system, f)) <= 1e-4

    def test_lattice_commutation(self, half_system):
        f = Gaussian(0.8).sample(16, 256)
        z = [1.0, -0.5]  # (2 alpha, -beta)
        lhs = frame_operator_direct(half_system, tfs_apply(f, z))
        rhs = tfs_apply(frame_operator_direct(half_system, f), z)
        assert rel(lhs, rhs) <= 1e-6

    def test_symbol_c0_real_positive(self, half_system):
        p = gabor_operator_symbol(half_system)
        c0 = p.coefficient((0, 0))
        assert c0.real > 0 and abs(c0.imag) <= 1e-12 * c0.real
        assert c0.real == pytest.approx(1 / 0.25, rel=1e-10)

    def test_synthesis_of_unit_coefficient(self, half_system):
        c = np.zeros((17, 17), dtype=complex)
        c[8 + 1, 8 - 2] = 1.0
        out = frame_synthesis(half_system, c)
        expected = modulate(translate(half_system.g, 0.5), -1.0)
        assert rel(out, expected) <= 1e-13

    def test_validation(self):
        with pytest.raises(ValueError):
            GaborSystem.gaussian(1.0, 0.5, 9, 16, 256)  # alpha*H beyond T/2
        with pytest.raises(ValueError):
            GaborSystem.gaussian(0.5, 2.0, 8, 16, 256)  # beta*H beyond Nyquist
        with pytest.raises(ValueError):
            GaborSystem(GridSignal.zeros(16, 64), 0.5, 0.5, 1)


class TestDualWindow:
    def test_residual_and_reconstruction(self, half_system):
        gamma = dual_window(half_system)
        spec = gabor_spec(half_system)
        assert rel(apply_series(spec, gamma), half_system.g) <= 1e-6
        for seed in range(3):
            f = random_signal(np.random.default_rng(seed))
            rec = frame_synthesis(half_system, frame_coefficients(half_system, f), window=gamma)
            assert rel(rec, f) <= 1e-5

    @pytest.mark.parametrize("c", [2.0, 0.5 - 0.5j])
    def test_scaling(self, half_system, c):
        gamma = dual_window(half_system)
        gamma_c = dual_window(half_system.scaled(c))
        assert rel(gamma_c, gamma / np.conj(c)) <= 1e-8

    def test_refusal_is_inconclusive(self):
        sys = GaborSystem.gaussian(1.2, 1.2, 4, 16, 256)
        with pytest.raises(NotInvertibleError, match="inconclusive") as info:
            dual_window(sys)
        assert not info.value.report.invertible


class TestScan:
    def test_row_order_and_threads(self):
        a = [0.4, 0.8]
        b = [0.5, 1.0, 1.3]
        one = scan(a, b)
        many = scan(a, b, threads=4)
        assert [(r.alpha, r.beta) for r in one] == [(x, y) for x in a for y in b]
        assert one == many

    def test_monotone_along_diagonal(self):
        vals = np.linspace(0.3, 1.2, 10)
        rows = scan(vals, vals)
        diag = [r for r in rows if r.alpha == r.beta]
        ratio = [r.tail / r.c0 for r in diag]
        assert all(x < y for x, y in zip(ratio, ratio[1:]))
        flags = [r.certified for r in diag]
        assert flags[0] and not flags[-1]
        assert flags == sorted(flags, reverse=True)

    def test_zones(self):
        rows = scan([0.5, 1.2], [0.5, 1.2])
        zones = {(r.alpha, r.beta): r.zone for r in rows}
        assert zones[(0.5, 0.5)] == "certified"
        assert zones[(1.2, 1.2)] != "certified"
        assert all(z in ("certified", "numerically_invertible", "unresolved") for z in zones.values())
        assert len(ScanRow.HEADER) == len(rows[0].as_tuple())
