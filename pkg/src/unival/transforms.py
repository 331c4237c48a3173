"""Abel transforms, radial Fourier-Laplace transforms and reconstruction of the
Goodey-Weil distribution from restriction data.

Radial functions are callables of the radius r >= 0 carrying a ``support``
attribute (they vanish for r >= support). All integrals are Gauss-Legendre
on the exact support interval, so profiles only need to be smooth inside it.
"""
from dataclasses import dataclass, field
from math import factorial, gamma, pi
from typing import Callable, Dict, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .invariant_polynomials import p_kq, symbol_matrix, upsilon_symbol
from .valuation_engine import (RadialDensity, SmoothValuationSpec, ThetaTerm,
                               UpsilonTerm, theta_range, upsilon_range)

DEFAULT_ORDER = 160
SMALL_RADIUS = 1e-4


def sphere_volume(m):
    """Surface measure of the unit sphere S^(m-1) in R^m (2 for m = 1)."""
    return 2.0 * pi ** (m / 2) / gamma(m / 2)


def _support(f, support):
    s = support if support is not None else getattr(f, "support", None)
    if s is None:
        raise ValueError("radial function needs a finite support")
    return float(s)


def _unit_rule(order):
    x, w = leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


class RadialProfile:
    """r -> density(r^2) for a density on [0, R); support sqrt(R)."""

    def __init__(self, density: RadialDensity):
        self.density = density
        self.support = density.spatial_radius

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.density(r * r)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return 2.0 * r * self.density.derivative(r * r)


class Zero:
    support = 0.0

    def __call__(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    derivative = __call__


def abel_m(phi, m, t, support=None, order=DEFAULT_ORDER):
    """A^m phi(t) = vol(S^(m-1)) int_0^inf phi(sqrt(t^2+r^2)) r^(m-1) dr.

    ``m = 0`` is the identity.
    """
    t = np.abs(np.asarray(t, dtype=float))
    if m == 0:
        return phi(t)
    S = _support(phi, support)
    x, w = _unit_rule(order)
    span = np.sqrt(np.clip(S * S - t * t, 0.0, None))
    r = span[..., None] * x
    s = np.sqrt(t[..., None] ** 2 + r * r)
    vals = phi(s) * r ** (m - 1)
    return sphere_volume(m) * span * np.sum(vals * w, axis=-1)


def abel(phi, t, support=None, order=DEFAULT_ORDER):
    """A phi(t) = int_R phi(sqrt(t^2 + s^2)) ds."""
    return abel_m(phi, 1, t, support, order)


class AbelTransform:
    """A^m phi as a radial function, with derivative when phi has one."""

    def __init__(self, phi, m, support=None, order=DEFAULT_ORDER):
        self.phi = phi
        self.m = m
        self.support = _support(phi, support)
        self.order = order

    def __call__(self, t):
        return abel_m(self.phi, self.m, t, self.support, self.order)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.m == 0:
            return self.phi.derivative(t)
        # d/dt phi(sqrt(t^2+r^2)) = phi'(s) t / s
        x, w = _unit_rule(self.order)
        ta = np.abs(t)
        span = np.sqrt(np.clip(self.support ** 2 - ta * ta, 0.0, None))
        r = span[..., None] * x
        s = np.sqrt(ta[..., None] ** 2 + r * r)
        vals = self.phi.derivative(s) * ta[..., None] / s * r ** (self.m - 1)
        return np.sign(t) * sphere_volume(self.m) * span * np.sum(vals * w, axis=-1)


def abel_inverse(psi, t, support=None, dpsi=None, order=DEFAULT_ORDER):
    """-(1/pi) int_t^inf psi'(s) / sqrt(s^2 - t^2) ds.

    With s = sqrt(t^2 + u^2) the kernel becomes du / s and the integrand is
    smooth. ``dpsi`` defaults to ``psi.derivative``.
    """
    d = dpsi if dpsi is not None else getattr(psi, "derivative", None)
    if d is None:
        raise ValueError("abel_inverse needs the derivative of psi")
    S = _support(psi, support)
    t = np.abs(np.asarray(t, dtype=float))
    x, w = _unit_rule(order)
    span = np.sqrt(np.clip(S * S - t * t, 0.0, None))
    u = span[..., None] * x
    s = np.sqrt(t[..., None] ** 2 + u * u)
    return -span * np.sum(d(s) / s * w, axis=-1) / pi


def e_function(z, derivative=0, tol=1e-17, max_terms=400):
    """m-th derivative of e(z) = sum_j (-1)^j z^j / (2j)!.

    e(x^2) = cos x and e(-x^2) = cosh x. The series is summed until the terms
    fall below ``tol`` relative to the running sum.
    """
    z = np.asarray(z)
    m = derivative
    # j-th term for j >= m: (-1)^j j!/(j-m)! z^(j-m) / (2j)!
    term = np.full(z.shape, (-1.0) ** m * factorial(m) / factorial(2 * m), dtype=np.result_type(z, float))
    total = term.copy()
    for j in range(m + 1, m + max_terms):
        term = term * (-z) * j / ((j - m) * (2 * j - 1) * (2 * j))
        total = total + term
        if j > m + 2 and np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def radial_fourier(phi, d, w, support=None, order=DEFAULT_ORDER, derivative=0):
    """Fourier transform of the radial function phi(|x|) on R^d at complex w.

    Evaluated as int_R A^(d-1) phi(|t|) e(t^2 <w, w>) dt, so only <w, w> (the
    complex-bilinear square) matters. With ``derivative = m`` the m-th
    derivative in the variable <w, w> is returned. Real-slice values
    int phi(|x|) exp(<u, x>) dx come from w = -i u.
    """
    w = np.asarray(w)
    zz = np.sum(w * w, axis=-1) if w.ndim else w * w
    return profile_transform(AbelTransform(phi, d - 1, support, order), zz, order, derivative)


def profile_transform(h, z, order=DEFAULT_ORDER, derivative=0):
    """int_R h(|t|) t^(2m) e^(m)(t^2 z) dt for a radial profile h on the line."""
    S = _support(h, None)
    x, w = _unit_rule(order)
    t = S * x
    ht = h(t) * t ** (2 * derivative)
    z = np.asarray(z)
    vals = e_function(np.multiply.outer(z, t * t), derivative)
    return 2.0 * S * np.sum(vals * (ht * w), axis=-1)


def laplace_radial(phi, d, u, support=None, order=DEFAULT_ORDER):
    """int_{R^d} phi(|x|) exp(<u, x>) dx."""
    u = np.asarray(u, dtype=float)
    return float(np.real(radial_fourier(phi, d, -1j * u, support, order)))


def quadratic_moment(h, P, u, order=DEFAULT_ORDER):
    """int phi(|x|) x^T P x exp(<u, x>) dx on R^d from the line profile h = A^(d-1) phi.

    Uses x_a x_b <-> -d_a d_b on the transform Phi(<w, w>) evaluated at w = -i u.
    """
    u = np.asarray(u, dtype=float)
    zz = -float(u @ u)
    d1 = float(np.real(profile_transform(h, zz, order, 1)))
    d2 = float(np.real(profile_transform(h, zz, order, 2)))
    return -2.0 * float(np.trace(P)) * d1 + 4.0 * float(u @ P @ u) * d2


# restriction data

@dataclass
class DensityPair:
    """Radial profiles (a_q, b_q) describing the restriction to E_{k,q}.

    ``grid``/``a_values``/``b_values`` hold samples on a radius grid for reporting.
    """

    q: int
    n: int
    k: int
    a: Callable
    b: Callable
    support: float
    grid: Optional[np.ndarray] = None
    a_values: Optional[np.ndarray] = None
    b_values: Optional[np.ndarray] = None

    def density_on_subspace(self, coords):
        """|z|^2 a(r)/r^2 + |x|^2 b(r)/r^2 at coordinates (z, x) of E_{k,q}."""
        coords = np.asarray(coords, dtype=float)
        q = self.q
        cz = np.sum(coords[..., :2 * q] ** 2, axis=-1)
        cx = np.sum(coords[..., 2 * q:] ** 2, axis=-1)
        r2 = cz + cx
        r = np.sqrt(r2)
        a = self.a(r)
        b = self.b(r)
        small = r2 < SMALL_RADIUS ** 2
        safe = np.where(small, 1.0, r2)
        out = (cz * a + cx * b) / safe
        # a(0) = b(0) so the density is continuous at the origin
        return np.where(small, 0.5 * (a + b), out)


@dataclass
class ReconstructionData:
    n: int
    k: int
    pairs: Dict[int, DensityPair] = field(default_factory=dict)


class _PairProfile:
    def __init__(self, fn, support):
        self.fn = fn
        self.support = support

    def __call__(self, r):
        return self.fn(np.asarray(r, dtype=float))


def _term_density(mu, cls, q):
    out = [t.density for t in mu.terms if isinstance(t, cls) and t.q == q]
    if len(out) > 1:
        raise ValueError(f"several {cls.__name__} terms share q={q}")
    return out[0] if out else None


def densities_from_spec(mu: SmoothValuationSpec, q, grid=None, order=DEFAULT_ORDER):
    """Restriction densities (a_q, b_q) of a Theta/Upsilon valuation on E_{k,q}."""
    n, k = mu.n, mu.k
    if q not in theta_range(n, k):
        raise ValueError(f"q={q} out of range for n={n}, k={k}")
    if any(not isinstance(t, (ThetaTerm, UpsilonTerm)) for t in mu.terms):
        raise ValueError("only Theta and Upsilon terms have restriction densities")
    phi = _term_density(mu, ThetaTerm, q)
    psi = _term_density(mu, UpsilonTerm, q) if q in upsilon_range(n, k) else None
    m = 2 * n - k
    A_phi = AbelTransform(RadialProfile(phi), m, order=order) if phi is not None else Zero()
    A_psi = AbelTransform(RadialProfile(psi), m, order=order) if psi is not None else Zero()
    support = max(A_phi.support, A_psi.support)
    interior = 0 < q and 2 * q < k

    def a(s):
        s = np.asarray(s, dtype=float)
        out = A_phi(s)
        if interior:
            out = out + s * s / q * A_psi(s)
        return out

    def b(s):
        s = np.asarray(s, dtype=float)
        out = A_phi(s)
        if interior:
            out = out - 2.0 * s * s / (k - 2 * q) * A_psi(s)
        return out

    pair = DensityPair(q, n, k, _PairProfile(a, support), _PairProfile(b, support), support)
    if grid is not None:
        g = np.asarray(grid, dtype=float) if np.ndim(grid) else np.linspace(0.0, support, int(grid))
        pair.grid, pair.a_values, pair.b_values = g, a(g), b(g)
    return pair


def reconstruction_data(mu, order=DEFAULT_ORDER):
    return ReconstructionData(mu.n, mu.k, {q: densities_from_spec(mu, q, order=order)
                                           for q in theta_range(mu.n, mu.k)})


def _quotient_profile(pair, scale):
    # scale * (a - b) / r^2, held constant below SMALL_RADIUS
    def fn(r):
        r = np.maximum(np.abs(r), SMALL_RADIUS)
        return scale * (pair.a(r) - pair.b(r)) / (r * r)
    return _PairProfile(fn, pair.support)


def reconstruct_gw(data: ReconstructionData, ys, order=DEFAULT_ORDER):
    """Real-slice Goodey-Weil value at the tuple ``ys`` from restriction data only.

    ``ys`` are real 2n-vectors, realified coordinates of C^n.
    """
    n, k = data.n, data.k
    ys = np.asarray(ys, dtype=float)
    if ys.shape != (k, 2 * n):
        raise ValueError("need k real vectors of length 2n")
    u = ys.sum(axis=0)
    zz = -float(u @ u)
    total = 0.0
    for q, pair in data.pairs.items():
        g = _PairProfile(lambda r, p=pair, q=q: (2 * q * p.a(r) + (k - 2 * q) * p.b(r)) / k, pair.support)
        phi_val = profile_transform(AbelTransform(g, k - 1, order=order), zz, order)
        total += p_kq(ys, q) * float(np.real(phi_val))
        if 0 < q and 2 * q < k:
            h = AbelTransform(_quotient_profile(pair, q * (k - 2 * q) / k), k - 1, order=order)
            P = symbol_matrix(upsilon_symbol, ys, q, 2 * n)
            total += quadratic_moment(h, P, u, order)
    return total / factorial(k)

