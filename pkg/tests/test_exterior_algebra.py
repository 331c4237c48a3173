from itertools import permutations
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unival import exterior_algebra as ea
from unival.exterior_algebra import MultiVector, contract, invariant_form, theta_kq, wedge


def _dx(n, block, j):
    return MultiVector.basis(n, block, j)


def _random_form(rng, n, degree, density=0.5):
    masks = ea._basis_masks(4 * n, degree)
    keep = rng.random(len(masks)) < density
    return MultiVector(n, {m: float(rng.standard_normal()) for m, k in zip(masks, keep) if k})


def _perm_parity(p):
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _to_tensor(a, degree):
    """Dense alternating tensor with T[i_1..i_p] = coefficient on dx_{i_1}^...^dx_{i_p}."""
    N = 4 * a.n
    T = np.zeros((N,) * degree)
    for m, c in a.terms.items():
        idx = [g for g in range(N) if m >> g & 1]
        if len(idx) != degree:
            continue
        for p in permutations(range(degree)):
            T[tuple(idx[i] for i in p)] += _perm_parity(p) * c
    return T


def _tensor_wedge(S, T):
    """Alternating tensor wedge (p+q)!/(p!q!) Alt(S x T), written directly with index permutations."""
    p, q = S.ndim, T.ndim
    prod = np.multiply.outer(S, T)
    out = np.zeros_like(prod)
    for perm in permutations(range(p + q)):
        out += _perm_parity(perm) * np.transpose(prod, perm)
    return out / (factorial(p) * factorial(q))


def test_dx_wedge_dx_is_zero():
    a = _dx(2, "x", 0)
    assert wedge(a, a).is_zero()


def test_theta0_squared_n2_against_tensor_oracle():
    t0 = invariant_form("theta0", 2)
    got = wedge(t0, t0)
    want = _tensor_wedge(_to_tensor(t0, 2), _to_tensor(t0, 2))
    assert np.allclose(_to_tensor(got, 4), want)
    # and it is twice dx1^dy1^dx2^dy2
    ref = wedge(wedge(_dx(2, "x", 0), _dx(2, "y", 0)), wedge(_dx(2, "x", 1), _dx(2, "y", 1)))
    assert (got - ref * 2.0).max_abs() == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_theta0_power_is_n_factorial_volume(n):
    vol = MultiVector.one(n)
    for j in range(n):
        vol = wedge(vol, wedge(_dx(n, "x", j), _dx(n, "y", j)))
    got = ea.wedge_power(invariant_form("theta0", n), n)
    assert (got - vol * factorial(n)).max_abs() < 1e-12
    assert (ea.volume_form(n) - vol).max_abs() < 1e-12


def test_wedge_matches_tensor_oracle_random():
    rng = np.random.default_rng(3)
    for p, q in [(1, 1), (1, 2), (2, 2), (1, 3)]:
        a, b = _random_form(rng, 2, p), _random_form(rng, 2, q)
        assert np.allclose(_to_tensor(wedge(a, b), p + q), _tensor_wedge(_to_tensor(a, p), _to_tensor(b, q)), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
def test_wedge_graded_commutative_and_associative(seed, p, q, r):
    rng = np.random.default_rng(seed)
    n = 2
    a, b, c = _random_form(rng, n, p), _random_form(rng, n, q), _random_form(rng, n, r)
    assert (wedge(a, b) - wedge(b, a) * (-1) ** (p * q)).max_abs() < 1e-12
    assert (wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs() < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_contraction_is_antiderivation(seed, p, q):
    rng = np.random.default_rng(seed)
    n = 2
    v = ea.TangentVector(n, rng.standard_normal(4 * n))
    a, b = _random_form(rng, n, p), _random_form(rng, n, q)
    lhs = contract(v, wedge(a, b))
    rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b)) * (-1) ** p
    assert (lhs - rhs).max_abs() < 1e-12


def test_contraction_of_one_form_is_component():
    n = 2
    comps = np.arange(1.0, 9.0)
    v = ea.TangentVector(n, comps)
    for g in range(4 * n):
        a = MultiVector(n, {1 << g: 1.0})
        assert contract(v, a).coefficient(0) == comps[g]


def test_linear_forms_at_e1():
    n = 2
    e1 = np.array([1.0, 0.0], complex)
    assert (invariant_form("gamma1", n, e1) - _dx(n, "x", 0)).max_abs() == 0
    assert (invariant_form("gamma2", n, e1) - _dx(n, "y", 0)).max_abs() == 0
    theta0p = invariant_form("theta0_prime", n, e1)
    ref = invariant_form("theta0", n) - wedge(_dx(n, "x", 0), _dx(n, "y", 0))
    assert (theta0p - ref).max_abs() < 1e-15
    omega2 = invariant_form("omega2", n, e1)
    ref = wedge(_dx(n, "x", 1), _dx(n, "xi", 1)) + wedge(_dx(n, "y", 1), _dx(n, "eta", 1))
    assert (omega2 - ref).max_abs() < 1e-15


def test_contraction_table_at_random_point():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        for _ in range(20):
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            F = lambda s: invariant_form(s, n, z)
            Xg = ea.hamiltonian_field("gamma1", n, z)
            Xb = ea.hamiltonian_field("beta1", n, z)
            assert contract(Xg, F("theta0")).max_abs() < 1e-14
            assert (contract(Xb, F("theta0")) - F("gamma2")).max_abs() < 1e-13
            assert (contract(Xg, F("theta2")) + F("beta2")).max_abs() < 1e-13
            assert contract(Xb, F("theta2")).max_abs() < 1e-14


def test_beta1_field_on_theta0_at_e1_is_dy1():
    n = 2
    e1 = np.array([1.0, 0.0], complex)
    Xb = ea.hamiltonian_field("beta1", n, e1)
    assert (contract(Xb, invariant_form("theta0", n)) - _dx(n, "y", 0)).max_abs() < 1e-15


def test_theta_kq_examples():
    t = theta_kq(1, 2, 1)
    assert (t - wedge(_dx(1, "xi", 0), _dx(1, "eta", 0))).max_abs() == 0
    assert theta_kq(2, 2, 2).is_zero()
    assert theta_kq(3, 3, 2).is_zero()
    t1 = invariant_form("theta1", 2)
    t20 = theta_kq(2, 2, 0)
    assert t20.degree() == 4 and not t20.is_zero()
    # exponents (n-k+q, k-2q, q) = (0, 2, 0)
    assert (t20 - wedge(t1, t1)).max_abs() == 0


def test_lefschetz_decompose_examples():
    n = 2
    omega = invariant_form("omega_s", n)
    parts = ea.lefschetz_decompose(omega)
    assert parts[0].max_abs() < 1e-12
    assert abs(parts[1].coefficient(0) - 1.0) < 1e-12
    rng = np.random.default_rng(1)
    a = _random_form(rng, n, 2, density=1.0)
    parts = ea.lefschetz_decompose(a)
    rebuilt = sum((ea.lefschetz(p, i) for i, p in enumerate(parts)), MultiVector(n))
    assert (rebuilt - a).max_abs() < 1e-10
    for i, p in enumerate(parts):
        assert ea.is_primitive(p)
    prim = parts[0]
    again = ea.lefschetz_decompose(prim)
    assert (again[0] - prim).max_abs() < 1e-10
    assert all(p.max_abs() < 1e-10 for p in again[1:])


@pytest.mark.parametrize("n", [2, 3])
def test_lefschetz_power_is_bijective(n):
    for k in range(0, 2 * n + 1):
        m = ea.lefschetz_matrix(n, k, 2 * n - k)
        assert m.shape[0] == m.shape[1]
        assert np.linalg.matrix_rank(m) == m.shape[0]


def test_mod_omega_s_residual():
    rng = np.random.default_rng(2)
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    a = wedge(invariant_form("omega_s", 2), invariant_form("beta1", 2, z))
    assert ea.mod_omega_s_residual(a) < 1e-12
    b = wedge(_dx(2, "x", 0), _dx(2, "y", 0))
    assert ea.mod_omega_s_residual(b) > 0.1


def test_vectorized_coefficients_match_pointwise():
    rng = np.random.default_rng(5)
    z = rng.standard_normal((7, 2)) + 1j * rng.standard_normal((7, 2))
    batched = invariant_form("beta1", 2, z)
    for i in range(7):
        single = invariant_form("beta1", 2, z[i])
        for m, c in single.terms.items():
            assert np.isclose(batched.coefficient(m)[i], c)
