"""Smooth unitarily invariant valuations on convex functions, evaluated by quadrature.

A valuation is a sum of terms ``density(|z|^2) * form``; its value on a convex
function f is the integral over C^n of the pullback of the form along the
graph of df. Pullbacks reduce to signed minors of the Hessian of f.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .convex_functions import ExpLinear, Sum, pullback
from .exterior_algebra import (invariant_form, normalizing_constant, theta_kq,
                               volume_form, wedge)


@dataclass
class RadialDensity:
    """Bump profile t -> poly(t) * exp(-1/(1-(t/R)^2)) on [0, R), zero beyond.

    ``poly`` lists coefficients in increasing degree. As a density on C^n it is
    applied to t = |z|^2, so its spatial support radius is sqrt(R).
    """

    R: float
    poly: Sequence[float] = (1.0,)

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("support radius must be positive")
        self.poly = [float(c) for c in self.poly]

    @property
    def spatial_radius(self):
        return float(np.sqrt(self.R))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = t / self.R
        inside = np.abs(u) < 1
        out = np.zeros_like(t)
        ui = u[inside]
        out[inside] = np.polynomial.polynomial.polyval(t[inside], self.poly) * np.exp(-1.0 / (1.0 - ui * ui))
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u = t / self.R
        inside = np.abs(u) < 1
        out = np.zeros_like(t)
        ti, ui = t[inside], u[inside]
        p = np.polynomial.polynomial.polyval(ti, self.poly)
        dp = np.polynomial.polynomial.polyval(ti, np.polynomial.polynomial.polyder(self.poly)) if len(self.poly) > 1 else 0.0
        dg = -2.0 * ui / (self.R * (1.0 - ui * ui) ** 2)
        out[inside] = (dp + p * dg) * np.exp(-1.0 / (1.0 - ui * ui))
        return out

    def to_dict(self):
        return {"type": "bump", "R": self.R, "poly": list(self.poly)}


def density_from_dict(d):
    if d.get("type", "bump") != "bump":
        raise ValueError("only bump densities are supported")
    return RadialDensity(d["R"], d.get("poly", [1.0]))


@dataclass
class ThetaTerm:
    q: int
    density: RadialDensity


@dataclass
class UpsilonTerm:
    q: int
    density: RadialDensity


@dataclass
class RawForm:
    """density * constant * form, with form one of "theta", "beta", "gamma".

    ``density`` is a RadialDensity (applied to |z|^2) or a callable on realified
    points of shape (N, 2n); a callable needs an explicit ``radius``.
    """

    family: str
    q: int
    density: object
    constant: Optional[float] = None
    radius: Optional[float] = None


def theta_range(n, k):
    return range(max(0, k - n), k // 2 + 1)


def upsilon_range(n, k):
    return range(max(1, k - n), (k - 1) // 2 + 1)


def _raw_range(n, k, family):
    if family == "theta":
        return theta_range(n, k)
    if family == "beta":
        return range(max(1, k - n), k // 2 + 1)
    if family == "gamma":
        return range(max(0, k - n), (k - 1) // 2 + 1)
    raise ValueError(f"unknown form family {family!r}")


@dataclass
class SmoothValuationSpec:
    n: int
    k: int
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.k <= 2 * self.n:
            raise ValueError("degree must lie in [0, 2n]")
        for t in self.terms:
            if isinstance(t, ThetaTerm):
                ok = t.q in theta_range(self.n, self.k)
            elif isinstance(t, UpsilonTerm):
                ok = t.q in upsilon_range(self.n, self.k)
            elif isinstance(t, RawForm):
                ok = t.q in _raw_range(self.n, self.k, t.family)
                if not isinstance(t.density, RadialDensity) and t.radius is None:
                    raise ValueError("callable densities need a support radius")
            else:
                raise TypeError(f"unknown term {t!r}")
            if not ok:
                raise ValueError(f"index q={t.q} out of range for {type(t).__name__} (n={self.n}, k={self.k})")

    @property
    def degree(self):
        return self.k

    @property
    def dim(self):
        return 2 * self.n

    @property
    def support_radius(self):
        r = 0.0
        for t in self.terms:
            if isinstance(t, RawForm) and t.radius is not None:
                r = max(r, t.radius)
            else:
                r = max(r, t.density.spatial_radius)
        return r

    def evaluate_many(self, fs, quadrature=None):
        return _integrate(self, fs, quadrature or Quadrature())

    def evaluate(self, f, quadrature=None):
        return float(self.evaluate_many([f], quadrature)[0])


def spec_to_dict(mu):
    out = {"n": mu.n, "k": mu.k, "terms": []}
    for t in mu.terms:
        if isinstance(t, RawForm):
            if not isinstance(t.density, RadialDensity):
                raise ValueError("callable densities cannot be serialized")
            out["terms"].append({"kind": "raw", "family": t.family, "q": t.q,
                                 "density": t.density.to_dict(), "constant": t.constant})
        else:
            kind = "theta" if isinstance(t, ThetaTerm) else "upsilon"
            out["terms"].append({"kind": kind, "q": t.q, "density": t.density.to_dict()})
    return out


def spec_from_dict(d):
    terms = []
    for t in d["terms"]:
        dens = density_from_dict(t["density"])
        if t["kind"] == "theta":
            terms.append(ThetaTerm(t["q"], dens))
        elif t["kind"] == "upsilon":
            terms.append(UpsilonTerm(t["q"], dens))
        elif t["kind"] == "raw":
            terms.append(RawForm(t["family"], t["q"], dens, t.get("constant")))
        else:
            raise ValueError(f"unknown term kind {t['kind']!r}")
    return SmoothValuationSpec(d["n"], d["k"], terms)


# quadrature

@dataclass(frozen=True)
class Quadrature:
    """Tensor Gauss-Legendre rule: ``panels`` equal panels of ``order`` points per axis."""

    order: int = 24
    panels: int = 2
    chunk: int = 131072


@lru_cache(maxsize=8)
def _axis_rule(order, panels, radius):
    x, w = leggauss(order)
    edges = np.linspace(-radius, radius, panels + 1)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(xs), np.concatenate(ws)


@lru_cache(maxsize=4)
def ball_nodes(dim, radius, order=24, panels=2):
    """Tensor nodes and weights on [-radius, radius]^dim, keeping only the open ball."""
    x, w = _axis_rule(order, panels, radius)
    pts = np.zeros((1, 0))
    wts = np.ones(1)
    r2 = np.zeros(1)
    lim = radius * radius
    for _ in range(dim):
        # grow one axis at a time and drop points that already left the ball
        r2n = (r2[:, None] + x[None, :] ** 2).ravel()
        keep = r2n < lim
        pts = np.concatenate([np.repeat(pts, len(x), axis=0), np.tile(x, len(pts))[:, None]], axis=1)[keep]
        wts = (wts[:, None] * w[None, :]).ravel()[keep]
        r2 = r2n[keep]
    pts.setflags(write=False)
    wts.setflags(write=False)
    return pts, wts


# pullback of forms along the graph of df

def _minor_key(mask, n):
    """Split a 2n-form monomial into (Hessian rows, Hessian cols, sign)."""
    base = [g for g in range(2 * n) if mask >> g & 1]
    fiber = [g - 2 * n for g in range(2 * n, 4 * n) if mask >> g & 1]
    cols = [c for c in range(2 * n) if c not in base]
    inv = sum(1 for b in base for c in cols if c < b)
    return tuple(fiber), tuple(cols), (-1 if inv & 1 else 1)


@lru_cache(maxsize=None)
def _orientation(n):
    return volume_form(n).terms[(1 << 2 * n) - 1]


def form_to_minors(form):
    """Group a 2n-form into {(rows, cols): coefficient} relative to the volume form."""
    n = form.n
    orient = _orientation(n)
    out = {}
    for m, c in form.terms.items():
        rows, cols, s = _minor_key(m, n)
        key = (rows, cols)
        val = c * (s * orient)
        out[key] = out[key] + val if key in out else val
    return out


def hessian_minor(H, rows, cols):
    """Minor of H (shape (..., d, d)) on the given rows and columns."""
    entries = np.moveaxis(np.asarray(H), (-2, -1), (0, 1))
    return MinorTable(entries)(tuple(rows), tuple(cols))


class MinorTable:
    """Memoized Laplace expansion of minors of a batch of matrices.

    ``entries[r][c]`` is the array of (r, c) entries over the batch; sub-minors
    are shared between the requested minors.
    """

    def __init__(self, entries):
        self.entries = entries
        self.memo = {}

    def __call__(self, rows, cols):
        k = len(rows)
        if k == 0:
            return 1.0
        if k == 1:
            return self.entries[rows[0]][cols[0]]
        key = (rows, cols)
        if key in self.memo:
            return self.memo[key]
        total = 0.0
        r0, rest = rows[0], rows[1:]
        for j, c in enumerate(cols):
            sub = self(rest, cols[:j] + cols[j + 1:])
            term = self.entries[r0][c] * sub
            total = total + term if j % 2 == 0 else total - term
        self.memo[key] = total
        return total


def pullback_density(form, H):
    """Coefficient of the volume form in the pullback of ``form`` by z -> (z, df(z))."""
    total = 0.0
    for (rows, cols), c in form_to_minors(form).items():
        total = total + c * hessian_minor(H, rows, cols)
    return total


def term_form(n, k, term, z):
    """The form of a valuation term at base points ``z`` (realified, shape (N, 2n))."""
    if isinstance(term, ThetaTerm):
        return theta_kq(n, k, term.q) * normalizing_constant(n, k, term.q)
    if isinstance(term, UpsilonTerm):
        c = normalizing_constant(n, k, term.q)
        return (_beta_form(n, k, term.q, z) - _gamma_form(n, k, term.q, z) * 2.0) * c
    c = term.constant if term.constant is not None else normalizing_constant(n, k, term.q)
    if term.family == "theta":
        return theta_kq(n, k, term.q) * c
    if term.family == "beta":
        return _beta_form(n, k, term.q, z) * c
    return _gamma_form(n, k, term.q, z) * c


def _beta_form(n, k, q, z):
    b1, b2 = invariant_form("beta1", n, z), invariant_form("beta2", n, z)
    return wedge(wedge(b1, b2), theta_kq(n - 1, k - 2, q - 1, n))


def _gamma_form(n, k, q, z):
    b1, g2 = invariant_form("beta1", n, z), invariant_form("gamma2", n, z)
    return wedge(wedge(b1, g2), theta_kq(n - 1, k - 1, q, n))


def _term_density(term, z):
    if isinstance(term.density, RadialDensity):
        return term.density(np.sum(z * z, axis=-1))
    return np.asarray(term.density(z), dtype=float)


def _integrate(mu, fs, quad):
    n, k = mu.n, mu.k
    radius = mu.support_radius
    pts, wts = ball_nodes(2 * n, radius, quad.order, quad.panels)
    out = np.zeros(len(fs))
    for start in range(0, len(pts), quad.chunk):
        z = pts[start:start + quad.chunk]
        w = wts[start:start + quad.chunk]
        minors = {}
        for term in mu.terms:
            weight = _term_density(term, z) * w
            for key, c in form_to_minors(term_form(n, k, term, z)).items():
                v = c * weight
                minors[key] = minors[key] + v if key in minors else v
        for i, f in enumerate(fs):
            table = MinorTable(f.hess_entries(z))
            out[i] += sum(float(np.sum(c * table(*key))) for key, c in minors.items())
    return out


def integrand(mu, f, z):
    """Pointwise integrand of mu(f) (density times pulled-back form) at realified points z."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    table = MinorTable(f.hess_entries(z))
    total = np.zeros(len(z))
    for term in mu.terms:
        weight = _term_density(term, z)
        for key, c in form_to_minors(term_form(mu.n, mu.k, term, z)).items():
            total = total + weight * c * table(*key)
    return total


def evaluate(mu, f, quadrature=None):
    """Value of the valuation ``mu`` on the convex function ``f``."""
    return float(evaluate_many(mu, [f], quadrature)[0])


def evaluate_many(mu, fs, quadrature=None):
    if isinstance(mu, SmoothValuationSpec):
        return mu.evaluate_many(fs, quadrature)
    return np.asarray(mu.evaluate_many(fs))


@lru_cache(maxsize=4)
def box_nodes(dim, radius, order=24, panels=1):
    """Full tensor Gauss-Legendre nodes and weights on [-radius, radius]^dim."""
    x, w = _axis_rule(order, panels, radius)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    pts.setflags(write=False)
    wts.setflags(write=False)
    return pts, wts


def monge_ampere(phi, f, dim, radius, quadrature=None, domain="ball"):
    """Integral of phi(x) det D^2 f(x) over the ball (or cube) of the given radius in R^dim.

    ``phi`` is a callable on points of shape (N, dim). On the ball it must vanish
    on the boundary; the cube is for polynomial weights, where the rule is exact.
    """
    quad = quadrature or Quadrature()
    if domain == "ball":
        pts, wts = ball_nodes(dim, radius, quad.order, quad.panels)
    elif domain == "box":
        pts, wts = box_nodes(dim, radius, quad.order, quad.panels)
    else:
        raise ValueError("domain must be 'ball' or 'box'")
    total = 0.0
    for start in range(0, len(pts), quad.chunk):
        z = pts[start:start + quad.chunk]
        H = f.hess(z)
        total += np.sum(wts[start:start + quad.chunk] * phi(z) * np.linalg.det(H))
    return float(total)


# valuations given by other means

class FunctionalValuation:
    """Wrap a k-homogeneous functional ``fn(f) -> float`` on convex functions of ``dim`` variables."""

    def __init__(self, fn: Callable, degree: int, dim: int, support_radius: Optional[float] = None):
        self.fn = fn
        self.degree = degree
        self.dim = dim
        self.support_radius = support_radius

    def evaluate_many(self, fs):
        return np.array([self.fn(f) for f in fs], dtype=float)


class RestrictedValuation:
    """f -> mu(f o pi_E), a valuation on convex functions on E."""

    def __init__(self, mu, E, quadrature=None):
        if E.n != mu.n:
            raise ValueError("subspace lives in the wrong C^n")
        self.mu = mu
        self.E = E
        self.degree = mu.degree
        self.dim = E.k
        self.support_radius = mu.support_radius
        self.quadrature = quadrature

    def evaluate_many(self, fs):
        return evaluate_many(self.mu, [pullback(f, self.E) for f in fs], self.quadrature)


def restrict(mu, E, quadrature=None):
    return RestrictedValuation(mu, E, quadrature)


def polarize(mu, fs, quadrature=None):
    """(1/k!) sum over subsets S of (-1)^(k-|S|) mu(sum_{i in S} f_i)."""
    k = len(fs)
    if k != mu.degree:
        raise ValueError("need exactly k functions")
    if k == 0:
        raise ValueError("degree zero valuations have no polarization")
    subsets, signs = [], []
    for r in range(1, k + 1):
        for s in combinations(range(k), r):
            subsets.append(s)
            signs.append((-1) ** (k - r))
    funcs = [_combine([fs[i] for i in s]) for s in subsets]
    vals = evaluate_many(mu, funcs, quadrature) if isinstance(mu, SmoothValuationSpec) else mu.evaluate_many(funcs)
    # mu(0) = 0 for k >= 1, so the empty subset drops out
    return float(np.dot(signs, vals) / factorial(k))


def _combine(parts):
    if len(parts) == 1:
        return parts[0]
    if all(isinstance(p, ExpLinear) for p in parts):
        return ExpLinear([t for p in parts for t in p.terms])
    return Sum(parts)


GW_GUARD = 30.0


def gw_slice(mu, ys, quadrature=None):
    """Goodey-Weil distribution on the real slice: polarization on x -> exp(<y_i, x>)."""
    ys = [np.asarray(y, dtype=float) for y in ys]
    R = getattr(mu, "support_radius", None)
    if R is not None:
        for y in ys:
            if np.linalg.norm(y) * R > GW_GUARD:
                raise ValueError("|y| R exceeds the overflow guard")
    fs = [ExpLinear([(1.0, y)]) for y in ys]
    return polarize(mu, fs, quadrature)
