import numpy as np
import pytest
from scipy import integrate
from scipy.interpolate import CubicSpline

from unival.grassmann import extremal_subspace
from unival.transforms import (AbelTransform, DensityPair, RadialProfile, ReconstructionData, Zero,
                               abel, abel_inverse, abel_m, densities_from_spec, e_function,
                               laplace_radial, radial_fourier, reconstruct_gw, reconstruction_data)
from unival.valuation_engine import (Quadrature, RadialDensity, SmoothValuationSpec, ThetaTerm,
                                     UpsilonTerm, ball_nodes, gw_slice)

PHI = RadialDensity(1.0, [1.0, 0.5])
PSI = RadialDensity(1.0, [0.7, -0.3, 0.2])
WIDE = RadialDensity(2.0, [0.3, 1.0])


class _Parabola:
    """(1 - r^2)_+"""
    support = 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.clip(1.0 - r * r, 0.0, None)


class _Gaussian:
    support = 12.0

    def __call__(self, r):
        return np.exp(-np.asarray(r, dtype=float) ** 2)


class _GaussianAbel:
    support = 12.0

    def __call__(self, r):
        return np.sqrt(np.pi) * np.exp(-np.asarray(r, dtype=float) ** 2)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return -2 * r * np.sqrt(np.pi) * np.exp(-r * r)


def test_abel_of_zero_and_parabola():
    t = np.linspace(0, 1.5, 31)
    assert np.all(abel(Zero(), t, support=1.0) == 0)
    want = np.where(t < 1, 4.0 / 3.0 * np.clip(1 - t * t, 0, None) ** 1.5, 0.0)
    assert np.max(np.abs(abel(_Parabola(), t) - want)) < 1e-13


def test_abel_against_adaptive_quadrature():
    prof = RadialProfile(PHI)
    for t in (0.0, 0.3, 0.7, 0.95):
        ref, _ = integrate.quad(lambda s: prof(np.array([np.hypot(t, s)]))[0], -1, 1, epsabs=1e-14, limit=200)
        assert abel(prof, np.array([t]))[0] == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("density", [PHI, PSI, WIDE])
def test_composition(density):
    prof = RadialProfile(density)
    t = np.linspace(0, prof.support, 60, endpoint=False)
    for m1, m2 in ((1, 1), (1, 2), (2, 1), (1, 3)):
        comp = abel_m(AbelTransform(prof, m1), m2, t)
        assert np.max(np.abs(comp - abel_m(prof, m1 + m2, t))) < 1e-8


@pytest.mark.parametrize("density", [PHI, PSI, WIDE])
def test_round_trips(density):
    prof = RadialProfile(density)
    t = np.linspace(0, prof.support, 200, endpoint=False)
    A = AbelTransform(prof, 1)
    assert np.max(np.abs(abel_inverse(A, t) - prof(t))) < 1e-6

    # abel o abel_inverse: invert psi = A phi on a grid, spline it, transform again
    grid = np.linspace(0, prof.support, 801)
    spline = CubicSpline(grid, abel_inverse(A, grid))

    class Inverted:
        support = prof.support

        def __call__(self, r):
            return spline(np.clip(r, 0, prof.support)) * (r < prof.support)

    assert np.max(np.abs(abel(Inverted(), t) - A(t))) < 1e-6


def test_abel_inverse_of_zero():
    t = np.linspace(0, 1, 5)
    assert np.all(abel_inverse(Zero(), t, support=1.0) == 0)


def test_gaussian_identities():
    t = np.linspace(0, 3, 61)
    assert np.max(np.abs(abel(_Gaussian(), t) - np.sqrt(np.pi) * np.exp(-t * t))) < 1e-5
    assert np.max(np.abs(abel_inverse(_GaussianAbel(), t) - np.exp(-t * t))) < 1e-5


def test_abel_linear_and_positive():
    rng = np.random.default_rng(0)
    a, b = RadialProfile(PHI), RadialProfile(PSI)
    t = np.linspace(0, 1, 40)
    x, y = rng.standard_normal(2)

    class Combo:
        support = 1.0

        def __call__(self, r):
            return x * a(r) + y * b(r)

    for m in (1, 2, 3):
        assert np.allclose(abel_m(Combo(), m, t), x * abel_m(a, m, t) + y * abel_m(b, m, t), atol=1e-14)
        assert np.all(abel_m(a, m, t) >= 0)


def test_e_function():
    assert e_function(0.0) == pytest.approx(1.0)
    assert abs(e_function(np.pi ** 2 / 4)) < 1e-12
    assert e_function(-1.0) == pytest.approx(np.cosh(1.0), rel=1e-14)
    z = np.linspace(-30, 2, 50)
    assert np.allclose(e_function(z), np.where(z < 0, np.cosh(np.sqrt(np.abs(z))), np.cos(np.sqrt(np.abs(z)))), rtol=1e-12)


def test_radial_fourier_at_zero_is_mass():
    prof = RadialProfile(PHI)
    pts, wts = ball_nodes(4, 1.0, 48, 2)
    mass = np.sum(PHI(np.sum(pts * pts, axis=1)) * wts)
    assert np.real(radial_fourier(prof, 4, np.zeros(4))) == pytest.approx(mass, rel=1e-6)


def test_abel_reduction_matches_direct_quadrature():
    prof = RadialProfile(PHI)
    pts, wts = ball_nodes(4, 1.0, 32, 2)
    base = PHI(np.sum(pts * pts, axis=1)) * wts
    rng = np.random.default_rng(1)
    for _ in range(20):
        u = rng.standard_normal(4)
        u *= rng.uniform(0, 4) / np.linalg.norm(u)
        direct = np.sum(base * np.exp(pts @ u))
        assert laplace_radial(prof, 4, u) == pytest.approx(direct, rel=1e-6)


def test_radial_symmetry():
    prof = RadialProfile(PHI)
    rng = np.random.default_rng(2)
    u = rng.standard_normal(4)
    ref = laplace_radial(prof, 4, u)
    for _ in range(5):
        Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert laplace_radial(prof, 4, Q @ u) == pytest.approx(ref, rel=1e-13)


def test_densities_without_upsilon_are_equal():
    mu = SmoothValuationSpec(2, 2, [ThetaTerm(0, PHI), ThetaTerm(1, PSI)])
    s = np.linspace(0, 1, 30)
    for q, dens in ((0, PHI), (1, PSI)):
        pair = densities_from_spec(mu, q)
        ref = abel_m(RadialProfile(dens), 2, s)
        assert np.allclose(pair.a(s), ref) and np.allclose(pair.b(s), ref)


def test_densities_agree_at_origin():
    for k in (2, 3, 4):
        mu = SmoothValuationSpec(3, k, [ThetaTerm(q, PHI) for q in range(max(0, k - 3), k // 2 + 1)]
                                 + [UpsilonTerm(q, PSI) for q in range(max(1, k - 3), (k - 1) // 2 + 1)])
        for q in range(max(0, k - 3), k // 2 + 1):
            pair = densities_from_spec(mu, q, grid=20)
            assert abs(pair.a(np.array([0.0]))[0] - pair.b(np.array([0.0]))[0]) < 1e-8
            assert pair.grid is not None and len(pair.a_values) == 20


def test_reconstruction_of_zero_data():
    pairs = {q: DensityPair(q, 2, 3, Zero(), Zero(), 1.0) for q in (1,)}
    data = ReconstructionData(2, 3, pairs)
    ys = np.random.default_rng(3).standard_normal((3, 4))
    assert reconstruct_gw(data, ys) == 0.0


def test_reconstruction_on_other_extremal_subspace_vanishes():
    # a valuation supported at q0 = 1 seen through tuples spanning E_{2,0}
    quad = Quadrature(24, 2)
    mu = SmoothValuationSpec(2, 2, [ThetaTerm(1, PHI)])
    data = reconstruction_data(mu)
    rng = np.random.default_rng(4)
    E_on, E_off = extremal_subspace(2, 2, 1), extremal_subspace(2, 2, 0)
    scale = abs(gw_slice(mu, rng.uniform(0.5, 2, (2, 2)) @ E_on.projection(), quad))
    for _ in range(3):
        ys = rng.uniform(-2, 2, (2, 2)) @ E_off.projection()
        assert abs(reconstruct_gw(data, ys)) < 1e-6 * scale
        assert abs(gw_slice(mu, ys, quad)) < 1e-6 * scale


def test_reconstruction_matches_direct_for_single_theta():
    quad = Quadrature(24, 2)
    rng = np.random.default_rng(5)
    for q in (0, 1):
        mu = SmoothValuationSpec(2, 2, [ThetaTerm(q, PHI)])
        data = reconstruction_data(mu)
        for _ in range(2):
            ys = rng.standard_normal((2, 4))
            ys *= rng.uniform(0.5, 4.0, (2, 1)) / np.linalg.norm(ys, axis=1, keepdims=True)
            assert reconstruct_gw(data, ys) == pytest.approx(gw_slice(mu, ys, quad), rel=1e-3)
