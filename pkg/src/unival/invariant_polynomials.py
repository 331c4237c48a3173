"""Unitarily invariant polynomials of a vector tuple and the symbols built from them."""
from itertools import permutations
from math import comb, factorial

import numpy as np

from .grassmann import Subspace, is_tasaki_form, kahler_angles
from .mixed_discriminant import det_mixed, gram_matrices, gram_pack

# Sign in front of the Z^I sums. With I_{2j-1,2j} = -cos(theta_j) in a Tasaki
# basis the Z^I mixed discriminant carries a factor -cos, so the symbol that
# reproduces the positive closed forms on E_{k,q} needs an overall minus.
BETA_SIGN = -1.0


def _binom(a, b):
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def _tuple(w):
    if isinstance(w, Subspace):
        return w.basis
    return w


def p_kq(w, q):
    """sum_j (-1)^(j-q) C(j,q) det_k(I_w[2j], R_w[k-2j])."""
    I, R = gram_matrices(_tuple(w))
    k = I.shape[0]
    total = 0.0
    for j in range(max(q, 0), k // 2 + 1):
        c = (-1) ** (j - q) * _binom(j, q)
        if c:
            total += c * det_mixed([(I, 2 * j), (R, k - 2 * j)])
    return total


def elementary_symmetric(values, i):
    values = np.asarray(values, dtype=float)
    e = np.zeros(len(values) + 1)
    e[0] = 1.0
    for v in values:
        e[1:] = e[1:] + v * e[:-1]
    return e[i] if 0 <= i < len(e) else 0.0


def klain_mu_kq(E, q):
    """Klain function of the k,q basis valuation at E."""
    cos2 = kahler_angles(E).cos2()
    k = E.k
    return sum((-1) ** (i + q) * _binom(i, q) * elementary_symmetric(cos2, i)
               for i in range(max(q, 0), k // 2 + 1))


def symbol_beta(w, q, z):
    """Quadratic symbol in z attached to the beta family at index q."""
    g = gram_pack(_tuple(w), z)
    k = g.I.shape[0]
    total = 0.0
    for j in range(max(q, 1), k // 2 + 1):
        c = (-1) ** (j + q) * _binom(j - 1, q - 1)
        if c:
            total += c * det_mixed([(g.I, 2 * j - 1), (g.ZI, 1), (g.R, k - 2 * j)])
    return BETA_SIGN * 0.5 * total


def symbol_gamma(w, q, z):
    """Quadratic symbol in z attached to the gamma family at index q."""
    g = gram_pack(_tuple(w), z)
    k = g.I.shape[0]
    total = 0.0
    for j in range(max(q, 0), (k - 1) // 2 + 1):
        c = (-1) ** (j + q) * _binom(j, q)
        if c:
            total += c * det_mixed([(g.I, 2 * j), (g.ZR, 1), (g.R, k - 1 - 2 * j)])
    return total - symbol_beta(w, q + 1, z)


def upsilon_symbol(w, q, z):
    """Symbol pairing with the Upsilon term: D_beta / q - 2 D_gamma / (k - 2q)."""
    k = len(_tuple(w))
    return symbol_beta(w, q, z) / q - 2.0 * symbol_gamma(w, q, z) / (k - 2 * q)


def symbol_matrix(symbol, w, q, dim):
    """Symmetric matrix P with symbol(w, q, z) = z^T P z for real z in R^dim."""
    e = np.eye(dim)
    diag = np.array([symbol(w, q, e[a]) for a in range(dim)])
    P = np.diag(diag)
    for a in range(dim):
        for b in range(a + 1, dim):
            v = symbol(w, q, e[a] + e[b])
            P[a, b] = P[b, a] = 0.5 * (v - diag[a] - diag[b])
    return P


def tasaki_closed_forms(w, q, z):
    """Permutation-sum expressions for the two Z-type mixed discriminants.

    Returns ``(zi_form, zr_form)`` which equal, for a tuple in Tasaki form,
    det_k(I[2q-1], Z^I, R[k-2q]) and det_k(I[2q], Z^R, R[k-2q-1]).
    """
    w = _tuple(w)
    if not is_tasaki_form(w, tol=1e-8):
        raise ValueError("tuple is not in Tasaki normal form")
    I, _ = gram_matrices(w)
    g = gram_pack(w, z)
    k = I.shape[0]
    h = k // 2
    cos = np.array([I[2 * j + 1, 2 * j] for j in range(h)])
    cos2 = cos ** 2
    zi = np.array([g.ZI[2 * j, 2 * j + 1] for j in range(h)])
    zr = np.array([g.ZR[2 * j, 2 * j] + g.ZR[2 * j + 1, 2 * j + 1] for j in range(h)])
    perms = list(permutations(range(h)))

    zi_form = 0.0
    if 1 <= q <= h:
        acc = sum(np.prod(cos2[list(s[:q - 1])]) * cos[s[q - 1]] * zi[s[q - 1]] for s in perms)
        zi_form = -2.0 * acc / (factorial(q - 1) * factorial(h - q))

    zr_form = 0.0
    if 0 <= q and 2 * q + 1 <= k:
        if q + 1 <= h:
            acc = sum(np.prod(cos2[list(s[:q])]) * zr[s[q]] for s in perms)
            zr_form += acc / (factorial(q) * factorial(h - q - 1))
        if k % 2 and q <= h:
            acc = sum(np.prod(cos2[list(s[:q])]) for s in perms)
            zr_form += g.ZR[k - 1, k - 1] * acc / (factorial(q) * factorial(h - q))
    return zi_form, zr_form
