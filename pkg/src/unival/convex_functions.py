"""Smooth convex test functions with analytic gradients and Hessians.

All evaluators accept points of shape ``(..., d)``.
"""
import numpy as np


class ConvexFunction:
    dim: int

    def value(self, x):
        raise NotImplementedError

    def grad(self, x):
        raise NotImplementedError

    def hess(self, x):
        raise NotImplementedError

    def hess_entries(self, x):
        """Hessian laid out as (d, d, N) for points x of shape (N, d)."""
        return np.ascontiguousarray(np.moveaxis(self.hess(x), 0, -1))

    def __add__(self, other):
        return Sum([self, other])

    def __mul__(self, s):
        if s < 0:
            raise ValueError("negative multiples are not convex")
        return Sum([self], [float(s)])

    __rmul__ = __mul__


class Quadratic(ConvexFunction):
    """x -> 1/2 x^T A x + b^T x + c with A symmetric positive semidefinite."""

    def __init__(self, A, b=None, c=0.0):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if not np.allclose(A, A.T):
            raise ValueError("A must be symmetric")
        if np.linalg.eigvalsh(A).min() < -1e-12:
            raise ValueError("A must be positive semidefinite")
        self.A = A
        self.dim = A.shape[0]
        self.b = np.zeros(self.dim) if b is None else np.asarray(b, dtype=float)
        self.c = float(c)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", x, self.A, x) + x @ self.b + self.c

    def grad(self, x):
        return np.asarray(x, dtype=float) @ self.A + self.b

    def hess(self, x):
        x = np.asarray(x)
        return np.broadcast_to(self.A, x.shape[:-1] + self.A.shape)

    def hess_entries(self, x):
        return np.ascontiguousarray(np.broadcast_to(self.A[..., None], self.A.shape + (len(x),)))

    def to_dict(self):
        return {"type": "quadratic", "A": self.A.tolist(), "b": self.b.tolist(), "c": self.c}


class ExpLinear(ConvexFunction):
    """x -> sum_i lam_i exp(<y_i, x>) with lam_i >= 0."""

    def __init__(self, terms):
        self.terms = [(float(lam), np.asarray(y, dtype=float)) for lam, y in terms]
        if any(lam < 0 for lam, _ in self.terms):
            raise ValueError("weights must be non-negative")
        self.dim = len(self.terms[0][1])

    def _exps(self, x):
        x = np.asarray(x, dtype=float)
        return [(lam, y, lam * np.exp(x @ y)) for lam, y in self.terms]

    def value(self, x):
        return sum(e for _, _, e in self._exps(x))

    def grad(self, x):
        return sum(e[..., None] * y for _, y, e in self._exps(x))

    def hess(self, x):
        return sum(e[..., None, None] * np.outer(y, y) for _, y, e in self._exps(x))

    def hess_entries(self, x):
        return sum(np.multiply.outer(np.outer(y, y), e) for _, y, e in self._exps(x))

    def to_dict(self):
        return {"type": "exp_linear", "terms": [[lam, y.tolist()] for lam, y in self.terms]}


class SmoothNorm(ConvexFunction):
    """x -> alpha sqrt(1 + |x|^2)."""

    def __init__(self, alpha, dim):
        if alpha < 0:
            raise ValueError("alpha must be non-negative")
        self.alpha = float(alpha)
        self.dim = int(dim)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.alpha * np.sqrt(1.0 + np.sum(x * x, axis=-1))

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(1.0 + np.sum(x * x, axis=-1))
        return self.alpha * x / s[..., None]

    def hess(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sqrt(1.0 + np.sum(x * x, axis=-1))[..., None, None]
        outer = x[..., :, None] * x[..., None, :]
        return self.alpha * (np.eye(self.dim) / s - outer / s ** 3)

    def to_dict(self):
        return {"type": "smooth_norm", "alpha": self.alpha, "dim": self.dim}


class Sum(ConvexFunction):
    """Non-negative combination of convex functions on the same space."""

    def __init__(self, parts, weights=None):
        self.parts = list(parts)
        self.weights = [1.0] * len(self.parts) if weights is None else [float(w) for w in weights]
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise ValueError("parts live on different spaces")
        self.dim = dims.pop()

    def value(self, x):
        return sum(w * p.value(x) for w, p in zip(self.weights, self.parts))

    def grad(self, x):
        return sum(w * p.grad(x) for w, p in zip(self.weights, self.parts))

    def hess(self, x):
        return sum(w * p.hess(x) for w, p in zip(self.weights, self.parts))

    def hess_entries(self, x):
        return sum(w * p.hess_entries(x) for w, p in zip(self.weights, self.parts))

    def to_dict(self):
        return {"type": "sum", "weights": self.weights, "parts": [p.to_dict() for p in self.parts]}


class PulledBack(ConvexFunction):
    """x -> inner(P x) for a k x d matrix P, e.g. f o pi_E."""

    def __init__(self, inner, P):
        self.inner = inner
        self.P = np.asarray(P, dtype=float)
        if self.P.shape[0] != inner.dim:
            raise ValueError("projection rank does not match the inner dimension")
        self.dim = self.P.shape[1]

    def _proj(self, x):
        return np.asarray(x, dtype=float) @ self.P.T

    def value(self, x):
        return self.inner.value(self._proj(x))

    def grad(self, x):
        return self.inner.grad(self._proj(x)) @ self.P

    def hess(self, x):
        h = self.inner.hess(self._proj(x))
        return np.einsum("ai,...ab,bj->...ij", self.P, h, self.P)

    def hess_entries(self, x):
        h = self.inner.hess_entries(self._proj(x))
        t = np.tensordot(self.P.T, h, axes=(1, 0))
        return np.ascontiguousarray(np.moveaxis(np.tensordot(t, self.P, axes=(1, 0)), -1, 1))

    def to_dict(self):
        return {"type": "pulled_back", "P": self.P.tolist(), "inner": self.inner.to_dict()}


def pullback(f, E):
    """f o pi_E for f defined on coordinates of the subspace E."""
    return PulledBack(f, E.projection())


def from_dict(d):
    t = d["type"]
    if t == "quadratic":
        return Quadratic(d["A"], d.get("b"), d.get("c", 0.0))
    if t == "exp_linear":
        return ExpLinear(d["terms"])
    if t == "smooth_norm":
        return SmoothNorm(d["alpha"], d["dim"])
    if t == "sum":
        return Sum([from_dict(p) for p in d["parts"]], d.get("weights"))
    if t == "pulled_back":
        return PulledBack(from_dict(d["inner"]), d["P"])
    raise ValueError(f"unknown function type {t!r}")


def random_test_function(dim, rng, kind=None):
    """A random smooth convex function of moderate size, for property tests."""
    kinds = ["quadratic", "exp_linear", "smooth_norm", "sum"]
    kind = kind or kinds[rng.integers(len(kinds))]
    if kind == "quadratic":
        m = rng.standard_normal((dim, dim))
        return Quadratic(m @ m.T / dim + 0.1 * np.eye(dim), rng.standard_normal(dim), rng.standard_normal())
    if kind == "exp_linear":
        # dim + 1 generic terms keep the Hessian non-degenerate
        return ExpLinear([(rng.uniform(0.2, 1.0), rng.standard_normal(dim)) for _ in range(dim + 1)])
    if kind == "smooth_norm":
        return SmoothNorm(rng.uniform(0.5, 2.0), dim)
    return Sum([random_test_function(dim, rng, "quadratic"), random_test_function(dim, rng, "exp_linear")])
