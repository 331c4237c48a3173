"""Real subspaces of C^n and their multiple Kahler angles."""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .mixed_discriminant import as_complex_tuple, gram_matrices, realify


@dataclass
class Subspace:
    """Real k-dimensional subspace of C^n with a real-orthonormal basis (rows)."""

    n: int
    basis: np.ndarray

    def __post_init__(self):
        self.basis = as_complex_tuple(self.basis, self.n)
        if self.basis.shape[1] != self.n:
            raise ValueError("basis vectors must lie in C^n")
        if self.k > 2 * self.n:
            raise ValueError("k exceeds the real dimension 2n")
        rb = realify(self.basis)
        if not np.allclose(rb @ rb.T, np.eye(self.k), atol=1e-9):
            raise ValueError("basis is not orthonormal for the real inner product")

    @property
    def k(self):
        return self.basis.shape[0]

    def projection(self):
        """k x 2n matrix taking realified C^n coordinates to coordinates on E."""
        return realify(self.basis)

    def embed(self, coords):
        """Map coordinates on E (..., k) to realified points of C^n (..., 2n)."""
        return np.asarray(coords) @ realify(self.basis)


@dataclass
class KahlerAngles:
    angles: np.ndarray

    def cos2(self):
        return np.cos(self.angles) ** 2


def _paired_cosines(I, k, tol=1e-8):
    s = np.sort(np.linalg.svd(I, compute_uv=False))[::-1]
    h = k // 2
    cos = np.empty(h)
    for j in range(h):
        a, b = s[2 * j], s[2 * j + 1]
        if abs(a - b) > tol * max(1.0, a):
            raise ValueError("singular values of I_w do not pair up")
        cos[j] = 0.5 * (a + b)
    return np.clip(cos, 0.0, 1.0)


def kahler_angles(E, tol=1e-8):
    """Multiple Kahler angle, non-decreasing, from the singular values of I_w."""
    I, _ = gram_matrices(E.basis)
    cos = _paired_cosines(I, E.k, tol)
    angles = np.sort(np.arccos(cos))
    forced = max(0, E.k - E.n)
    if forced and np.any(angles[:forced] > 1e-6):
        raise ValueError("expected the first k-n angles to vanish")
    angles[:forced] = 0.0
    return KahlerAngles(angles)


def tasaki_basis(E, tol=1e-10):
    """Orthonormal basis of E in which I_w is block diagonal with blocks [[0,-c],[c,0]].

    The blocks appear with c = cos(theta_j) non-increasing; for odd k a final
    vector with I-row zero is appended.
    """
    I, _ = gram_matrices(E.basis)
    k = E.k
    T, Q = scipy.linalg.schur(I, output="real")
    blocks, singles = [], []
    i = 0
    while i < k:
        if i + 1 < k and abs(T[i + 1, i]) > tol:
            # T block is [[0, a], [-a, 0]]
            a = T[i, i + 1]
            u, v = Q[:, i], Q[:, i + 1]
            if a > 0:
                v = -v
            blocks.append((abs(a), u, v))
            i += 2
        else:
            singles.append(Q[:, i])
            i += 1
    while len(singles) >= 2:
        blocks.append((0.0, singles.pop(0), singles.pop(0)))
    blocks.sort(key=lambda b: -b[0])
    cols = []
    for _, u, v in blocks:
        cols += [u, v]
    cols += singles
    P = np.array(cols)
    return Subspace(E.n, P @ E.basis)


def is_tasaki_form(w, tol=1e-10):
    I, _ = gram_matrices(w)
    k = I.shape[0]
    target = np.zeros_like(I)
    prev = np.inf
    for j in range(k // 2):
        c = I[2 * j + 1, 2 * j]
        if c < -tol or c > prev + tol:
            return False
        prev = c
        target[2 * j, 2 * j + 1] = -c
        target[2 * j + 1, 2 * j] = c
    return np.max(np.abs(I - target)) <= tol


def extremal_subspace(n, k, q):
    """E_{k,q} = C^q x R^(k-2q) with basis e_1, i e_1, ..., e_q, i e_q, e_(q+1), ..., e_(k-q)."""
    if not (max(0, k - n) <= q <= k // 2) or k > 2 * n:
        raise ValueError(f"no extremal subspace for n={n}, k={k}, q={q}")
    rows = []
    for j in range(q):
        e = np.zeros(n, complex)
        e[j] = 1
        rows += [e, 1j * e]
    for j in range(q, k - q):
        e = np.zeros(n, complex)
        e[j] = 1
        rows.append(e)
    return Subspace(n, np.array(rows).reshape(k, n))


def random_subspace(n, k, seed=None):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((2 * n, k))
    q, _ = np.linalg.qr(g)
    return Subspace(n, as_complex_tuple(q.T, n))


def random_basis(E, seed=None):
    """Another real-orthonormal basis of E, rotated by a random element of O(k)."""
    from scipy.stats import ortho_group
    if E.k == 1:
        sign = 1 if np.random.default_rng(seed).random() < 0.5 else -1
        return Subspace(E.n, sign * E.basis)
    rot = ortho_group.rvs(E.k, random_state=seed)
    return Subspace(E.n, rot @ E.basis)


def random_unitary(n, seed=None):
    from scipy.stats import unitary_group
    if n == 1:
        rng = np.random.default_rng(seed)
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=seed)


def random_tasaki_subspace(n, k, seed=None):
    """Tasaki-form subspace with random Kahler angles, moved by a random unitary.

    Returns the subspace and the angles used (first k-n of them zero).
    """
    rng = np.random.default_rng(seed)
    h = k // 2
    forced = max(0, k - n)
    ang = np.sort(rng.uniform(0, np.pi / 2, h))
    ang[:forced] = 0.0
    ang.sort()
    f = np.eye(n, dtype=complex)
    rows = []
    for j in range(h):
        rows.append(f[j])
        if j < forced:
            rows.append(1j * f[j])
        else:
            partner = f[h + j - forced]
            rows.append(np.cos(ang[j]) * 1j * f[j] + np.sin(ang[j]) * partner)
    if k % 2:
        rows.append(f[2 * h - forced])
    u = random_unitary(n, rng.integers(2**32))
    w = np.array(rows).reshape(k, n) @ u.T
    return Subspace(n, w), ang
