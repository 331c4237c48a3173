"""Sparse exterior algebra over the cotangent space of C^n x C^n.

The 4n generators are ordered ``dx_1..dx_n, dy_1..dy_n, dxi_1..dxi_n,
deta_1..deta_n`` and a monomial is stored as a bitmask over that order.
Coefficients are floats or numpy arrays of a common shape, which lets a
single form carry its values at many quadrature nodes at once.
"""
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np

BLOCKS = ("x", "y", "xi", "eta")


def generator_index(n, block, j):
    """Bit position of ``d<block>_j`` (``j`` is 0-based)."""
    return BLOCKS.index(block) * n + j


def _popcount(m):
    return bin(m).count("1")


def _is_zero(c):
    if isinstance(c, np.ndarray):
        return False
    return c == 0


def _wedge_sign(a, b):
    # parity of pairs (i in a, j in b) with i > j
    s = 0
    bb = b
    while bb:
        low = bb & -bb
        j = low.bit_length() - 1
        s += _popcount(a >> (j + 1))
        bb ^= low
    return -1 if s & 1 else 1


class MultiVector:
    """Element of the exterior algebra on 4n generators."""

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if not _is_zero(c):
                    self.terms[m] = c

    @classmethod
    def one(cls, n):
        return cls(n, {0: 1.0})

    @classmethod
    def basis(cls, n, block, j, coeff=1.0):
        return cls(n, {1 << generator_index(n, block, j): coeff})

    def copy(self):
        return MultiVector(self.n, dict(self.terms))

    def degrees(self):
        return sorted({_popcount(m) for m in self.terms})

    def degree(self):
        d = self.degrees()
        if len(d) > 1:
            raise ValueError("form is not homogeneous")
        return d[0] if d else 0

    def is_zero(self, tol=0.0):
        return all(np.max(np.abs(c)) <= tol for c in self.terms.values())

    def coefficient(self, mask):
        return self.terms.get(mask, 0.0)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MultiVector(self.n, out)

    def __neg__(self):
        return MultiVector(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, MultiVector):
            return NotImplemented
        if _is_zero(s):
            return MultiVector(self.n)
        return MultiVector(self.n, {m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        return f"MultiVector(n={self.n}, terms={len(self.terms)})"

    def to_vector(self, degree):
        """Dense coefficient vector on the sorted monomial basis of ``degree``."""
        idx = _basis_index(4 * self.n, degree)
        v = np.zeros(len(idx))
        for m, c in self.terms.items():
            if _popcount(m) != degree:
                raise ValueError("form has components outside the requested degree")
            v[idx[m]] = c
        return v

    @classmethod
    def from_vector(cls, n, degree, v, tol=0.0):
        masks = _basis_masks(4 * n, degree)
        return cls(n, {m: float(c) for m, c in zip(masks, v) if abs(c) > tol})

    def max_abs(self):
        if not self.terms:
            return 0.0
        return max(float(np.max(np.abs(c))) for c in self.terms.values())


class TangentVector:
    """Tangent vector with one component (scalar or array) per generator."""

    def __init__(self, n, components):
        if len(components) != 4 * n:
            raise ValueError("need 4n components")
        self.n = n
        self.components = list(components)

    def __getitem__(self, g):
        return self.components[g]


@lru_cache(maxsize=None)
def _basis_masks(ngen, degree):
    return tuple(sum(1 << i for i in c) for c in combinations(range(ngen), degree))


@lru_cache(maxsize=None)
def _basis_index(ngen, degree):
    return {m: i for i, m in enumerate(_basis_masks(ngen, degree))}


def wedge(a, b):
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            m = ma | mb
            c = ca * cb if _wedge_sign(ma, mb) > 0 else -(ca * cb)
            out[m] = out[m] + c if m in out else c
    return MultiVector(a.n, out)


def wedge_power(a, p):
    out = MultiVector.one(a.n)
    for _ in range(p):
        out = wedge(out, a)
    return out


def contract(v, a):
    """Interior product, an antiderivation with ``i_v(dg) = v_g``."""
    out = {}
    for m, c in a.terms.items():
        mm = m
        while mm:
            low = mm & -mm
            g = low.bit_length() - 1
            mm ^= low
            vg = v[g]
            if _is_zero(vg):
                continue
            sign = -1 if _popcount(m & (low - 1)) & 1 else 1
            t = m ^ low
            val = c * vg if sign > 0 else -(c * vg)
            out[t] = out[t] + val if t in out else val
    return MultiVector(a.n, out)


def hamiltonian_vector(eta):
    """Vector field X with ``i_X omega_s = eta`` for a 1-form ``eta``."""
    n = eta.n
    comp = [0.0] * (4 * n)
    for m, c in eta.terms.items():
        if _popcount(m) != 1:
            raise ValueError("expected a 1-form")
        g = m.bit_length() - 1
        block, j = divmod(g, n)
        # omega_s = sum dx^dxi + dy^deta
        if block == 0:
            comp[generator_index(n, "xi", j)] = -c
        elif block == 1:
            comp[generator_index(n, "eta", j)] = -c
        elif block == 2:
            comp[generator_index(n, "x", j)] = c
        else:
            comp[generator_index(n, "y", j)] = c
    return TangentVector(n, comp)


def _coords(z, n):
    z = np.asarray(z)
    if np.iscomplexobj(z):
        if z.shape[-1] != n:
            raise ValueError("complex point must have n entries")
        return z.real, z.imag
    if z.shape[-1] == 2 * n:
        return z[..., :n], z[..., n:]
    if z.shape[-1] == n:
        return z, np.zeros_like(z)
    raise ValueError("point has the wrong length")


def _coord(arr, j):
    c = arr[..., j]
    return float(c) if np.ndim(c) == 0 else c


def _pair_sum(n, pairs):
    out = MultiVector(n)
    for j in range(n):
        for (b1, b2, s) in pairs:
            out = out + MultiVector(n, {(1 << generator_index(n, b1, j)) | (1 << generator_index(n, b2, j)): float(s)})
    return out


@lru_cache(maxsize=None)
def _constant_form(name, n):
    if name == "theta0":
        return _pair_sum(n, [("x", "y", 1)])
    if name == "theta1":
        # dx^deta - dy^dxi
        return _pair_sum(n, [("x", "eta", 1), ("y", "xi", -1)])
    if name == "theta2":
        return _pair_sum(n, [("xi", "eta", 1)])
    if name == "omega_s":
        return _pair_sum(n, [("x", "xi", 1), ("y", "eta", 1)])
    raise KeyError(name)


def _linear_form(n, blocks, cx, cy):
    # sum_j cx_j d<blocks[0]>_j + cy_j d<blocks[1]>_j
    out = {}
    for j in range(n):
        out[1 << generator_index(n, blocks[0], j)] = _coord(cx, j)
        out[1 << generator_index(n, blocks[1], j)] = _coord(cy, j)
    return MultiVector(n, out)


CONSTANT_FORMS = ("theta0", "theta1", "theta2", "omega_s")
POINT_FORMS = ("gamma1", "gamma2", "beta1", "beta2", "omega1", "omega2",
               "theta0_prime", "theta1_prime", "theta2_prime")

_ALIASES = {"θ₀": "theta0", "θ₁": "theta1", "θ₂": "theta2", "ω_s": "omega_s",
            "γ₁": "gamma1", "γ₂": "gamma2", "β₁": "beta1", "β₂": "beta2",
            "ω₁": "omega1", "ω₂": "omega2", "θ′₀": "theta0_prime",
            "θ′₁": "theta1_prime", "θ′₂": "theta2_prime"}


def invariant_form(name, n, z=None):
    """One of the named U(n)-invariant forms, evaluated at the base point ``z``.

    ``z`` is a complex n-vector, a real 2n-vector ``(x, y)``, or a batch of
    either along leading axes; batched points give array coefficients.
    """
    name = _ALIASES.get(name, name)
    if name in CONSTANT_FORMS:
        return _constant_form(name, n)
    if name not in POINT_FORMS:
        raise KeyError(f"unknown form {name!r}")
    if z is None:
        raise ValueError(f"{name} depends on the base point")
    x, y = _coords(z, n)
    r2 = np.sum(x * x + y * y, axis=-1)
    r2 = float(r2) if np.ndim(r2) == 0 else r2
    if name == "gamma1":
        return _linear_form(n, ("x", "y"), x, y)
    if name == "gamma2":
        return _linear_form(n, ("x", "y"), -y, x)
    if name == "beta1":
        return _linear_form(n, ("xi", "eta"), x, y)
    if name == "beta2":
        return _linear_form(n, ("xi", "eta"), -y, x)
    g1, g2 = invariant_form("gamma1", n, z), invariant_form("gamma2", n, z)
    b1, b2 = invariant_form("beta1", n, z), invariant_form("beta2", n, z)
    if name == "omega1":
        return wedge(g1, b1) + wedge(g2, b2)
    if name == "omega2":
        return _constant_form("omega_s", n) * r2 - (wedge(g1, b1) + wedge(g2, b2))
    if name == "theta0_prime":
        return _constant_form("theta0", n) * r2 - wedge(g1, g2)
    if name == "theta1_prime":
        return _constant_form("theta1", n) * r2 - (wedge(g1, b2) - wedge(g2, b1))
    return _constant_form("theta2", n) * r2 - wedge(b1, b2)


def hamiltonian_field(name, n, z):
    """Hamiltonian vector field of gamma1 or beta1 at ``z``."""
    name = _ALIASES.get(name, name)
    if name not in ("gamma1", "beta1", "gamma2", "beta2"):
        raise KeyError(name)
    return hamiltonian_vector(invariant_form(name, n, z))


def theta_exponents(n, k, q):
    return n - k + q, k - 2 * q, q


@lru_cache(maxsize=None)
def theta_kq(n, k, q, ambient=None):
    """theta0^(n-k+q) ^ theta1^(k-2q) ^ theta2^q on ``ambient`` (default n) coordinates.

    Returns the zero form whenever an exponent is negative.
    """
    amb = n if ambient is None else ambient
    e0, e1, e2 = theta_exponents(n, k, q)
    if min(e0, e1, e2) < 0:
        return MultiVector(amb)
    out = wedge_power(_constant_form("theta0", amb), e0)
    out = wedge(out, wedge_power(_constant_form("theta1", amb), e1))
    return wedge(out, wedge_power(_constant_form("theta2", amb), e2))


def normalizing_constant(n, k, q):
    return 1.0 / (factorial(n - k + q) * factorial(q) * factorial(k - 2 * q))


def volume_form(n):
    """theta0^n / n!, i.e. dx_1^dy_1^...^dx_n^dy_n."""
    return wedge_power(_constant_form("theta0", n), n) * (1.0 / factorial(n))


# Lefschetz operator L = omega_s ^ (.)

@lru_cache(maxsize=None)
def lefschetz_matrix(n, degree, power=1):
    """Dense matrix of L^power from degree ``degree`` to ``degree + 2 power``."""
    ngen = 4 * n
    src = _basis_masks(ngen, degree)
    tgt = _basis_index(ngen, degree + 2 * power)
    lp = wedge_power(_constant_form("omega_s", n), power)
    mat = np.zeros((len(tgt), len(src)))
    for col, m in enumerate(src):
        for ml, c in lp.terms.items():
            if m & ml:
                continue
            mat[tgt[m | ml], col] += c * _wedge_sign(ml, m)
    return mat


def lefschetz(a, power=1):
    return wedge(wedge_power(_constant_form("omega_s", a.n), power), a)


def lefschetz_decompose(a):
    """Split ``a`` of degree k <= 2n into primitive parts.

    Returns ``[p_0, p_1, ...]`` with ``a = sum_i L^i p_i`` and ``p_i`` primitive
    of degree ``k - 2i``; the middle dimension of the 4n-dimensional space is 2n.
    """
    n = a.n
    if not a.terms:
        return [a]
    k = a.degree()
    mid = 2 * n
    if k > mid:
        raise ValueError("degree exceeds the middle dimension")
    if k < 2:
        return [a]
    va = a.to_vector(k)
    rhs = lefschetz_matrix(n, k, mid - k + 1) @ va
    lhs = lefschetz_matrix(n, k - 2, mid - k + 2)
    vb = np.linalg.solve(lhs, rhs)
    vp = va - lefschetz_matrix(n, k - 2, 1) @ vb
    p0 = MultiVector.from_vector(n, k, vp)
    b = MultiVector.from_vector(n, k - 2, vb)
    return [p0] + lefschetz_decompose(b)


def is_primitive(a, tol=1e-10):
    k = a.degree()
    return lefschetz(a, 2 * a.n - k + 1).is_zero(tol)


@lru_cache(maxsize=None)
def _image_basis(n, degree):
    mat = lefschetz_matrix(n, degree - 2, 1)
    q, r = np.linalg.qr(mat)
    keep = np.abs(np.diag(r)) > 1e-12
    return q[:, keep]


def mod_omega_s_residual(a, degree=None):
    """Euclidean distance from ``a`` to the ideal generated by omega_s in its degree."""
    d = a.degree() if degree is None else degree
    v = a.to_vector(d)
    if d < 2:
        return float(np.linalg.norm(v))
    q = _image_basis(a.n, d)
    return float(np.linalg.norm(v - q @ (q.T @ v)))
