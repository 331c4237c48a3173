"""Mixed discriminants and the Gram data of a vector tuple in C^n."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np

# above this many row assignments fall back to interpolation
_MAX_ASSIGNMENTS = 200_000


def hermitian(u, v):
    """Hermitian product, complex-linear in the first slot."""
    return np.sum(np.asarray(u) * np.conj(np.asarray(v)), axis=-1)


def as_complex_tuple(w, n=None):
    """Rows of ``w`` as complex n-vectors; real rows of length 2n are read as (x, y)."""
    w = np.atleast_2d(np.asarray(w))
    if np.iscomplexobj(w):
        return w.astype(complex)
    if n is None:
        if w.shape[1] % 2:
            raise ValueError("real vectors must have even length 2n")
        n = w.shape[1] // 2
    if w.shape[1] == 2 * n:
        return w[:, :n] + 1j * w[:, n:]
    if w.shape[1] == n:
        return w.astype(complex)
    raise ValueError("vector length does not match n")


def realify(w):
    w = np.asarray(w)
    return np.concatenate([w.real, w.imag], axis=-1)


@dataclass
class GramPack:
    I: np.ndarray
    R: np.ndarray
    ZI: np.ndarray
    ZR: np.ndarray


def gram_pack(w, z):
    """Gram matrices of the tuple ``w`` and the rank-two/rank-one data attached to ``z``.

    Parameters
    ----------
    w : array (k, n) complex, or (k, 2n) real
    z : complex n-vector (or real 2n-vector)
    """
    w = as_complex_tuple(w)
    z = as_complex_tuple(z, w.shape[1])[0]
    g = w @ np.conj(w).T
    h = w @ np.conj(z)
    a, b = h.real, h.imag
    return GramPack(I=g.imag, R=g.real, ZI=np.outer(a, b) - np.outer(b, a), ZR=np.outer(a, a))


def gram_matrices(w):
    """(I_w, R_w) without a base point."""
    w = as_complex_tuple(w)
    g = w @ np.conj(w).T
    return g.imag, g.real


def _exact_det(rows):
    # fraction-free is overkill here; plain Gaussian elimination on Fractions
    m = [list(r) for r in rows]
    k = len(m)
    det = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, k):
            f = m[r][c] / m[c][c]
            if f:
                for cc in range(c, k):
                    m[r][cc] -= f * m[c][cc]
    return det


def _multiset_assignments(counts):
    """All sequences with ``counts[i]`` copies of label ``i``."""
    k = sum(counts)
    out = []

    def rec(prefix, left):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for i, c in enumerate(left):
            if c:
                left[i] -= 1
                prefix.append(i)
                rec(prefix, left)
                prefix.pop()
                left[i] += 1

    rec([], list(counts))
    return out


def det_mixed(blocks):
    """Coefficient of prod t_i^m_i in det(sum_i t_i M_i).

    ``blocks`` is a list of ``(matrix, multiplicity)`` with multiplicities summing
    to the common size k. Blocks with multiplicity zero are ignored; a negative
    multiplicity gives zero. Matrices of Fractions are handled exactly.
    """
    blocks = [(m, int(c)) for m, c in blocks]
    if any(c < 0 for _, c in blocks):
        return 0.0
    blocks = [(m, c) for m, c in blocks if c > 0]
    if not blocks:
        return 1.0
    k = blocks[0][0].shape[0]
    if sum(c for _, c in blocks) != k:
        raise ValueError("multiplicities must sum to the matrix size")
    mats = [m for m, _ in blocks]
    counts = [c for _, c in blocks]
    exact = any(np.asarray(m).dtype == object for m in mats)
    n_assign = factorial(k)
    for c in counts:
        n_assign //= factorial(c)
    if n_assign > _MAX_ASSIGNMENTS and not exact:
        return _det_mixed_interpolated(mats, counts)
    # multilinearity in rows: each row is drawn from one block
    total = Fraction(0) if exact else 0.0
    for assign in _multiset_assignments(counts):
        rows = [mats[b][r] for r, b in enumerate(assign)]
        if exact:
            total += _exact_det(rows)
        else:
            total += np.linalg.det(np.array(rows, dtype=float))
    return total


def _det_mixed_interpolated(mats, counts):
    # det(sum t_i M_i) is a homogeneous polynomial of degree k; fix t_0 = 1 and
    # recover the coefficient of prod_{i>0} t_i^m_i by tensor Chebyshev interpolation
    k = mats[0].shape[0]
    r = len(mats)
    if r == 1:
        return float(np.linalg.det(mats[0]))
    deg = k
    nodes = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
    vander = np.vander(nodes, deg + 1, increasing=True)
    inv = np.linalg.inv(vander)
    grid = np.zeros((deg + 1,) * (r - 1))
    for idx in product(range(deg + 1), repeat=r - 1):
        m = mats[0].astype(float).copy()
        for i, j in enumerate(idx):
            m = m + nodes[j] * mats[i + 1]
        grid[idx] = np.linalg.det(m)
    coef = grid
    for ax in range(r - 1):
        coef = np.moveaxis(np.tensordot(inv, coef, axes=([1], [ax])), 0, ax)
    return float(coef[tuple(counts[1:])])
