"""Verification suites, experiment configuration and report formatting."""
import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from math import factorial
from typing import Dict, List, Optional

import numpy as np

from . import exterior_algebra as ea
from .convex_functions import Quadratic, random_test_function
from .grassmann import (Subspace, extremal_subspace, is_tasaki_form, kahler_angles,
                        random_subspace, random_tasaki_subspace, random_unitary,
                        tasaki_basis)
from .invariant_polynomials import (klain_mu_kq, p_kq, symbol_beta, symbol_gamma,
                                    symbol_matrix, tasaki_closed_forms)
from .mixed_discriminant import _det_mixed_interpolated, det_mixed, gram_matrices, gram_pack
from .transforms import (AbelTransform, RadialProfile, abel, abel_inverse, abel_m,
                         densities_from_spec, laplace_radial, quadratic_moment,
                         reconstruct_gw, reconstruction_data)
from .valuation_engine import (Quadrature, RadialDensity, RawForm,
                               SmoothValuationSpec, ThetaTerm, UpsilonTerm,
                               gw_slice, monge_ampere, restrict, theta_range,
                               upsilon_range)

DEFAULTS = {
    "seed": 0,
    "quadrature": {"order": 24, "panels": 2},
    "radial_order": 160,
    "densities": {
        "phi": {"R": 1.0, "poly": [1.0, 0.5]},
        "psi": {"R": 1.0, "poly": [0.7, -0.3, 0.2]},
    },
    "suites": {
        "forms3": {"ns": [2, 3], "points": 50, "tol_contraction": 1e-12,
                   "tol_primitive": 1e-10, "tol_mod": 1e-10, "primitive_samples": 10},
        "detk": {"samples": 40, "max_k": 5, "tol": 1e-9},
        "kahler": {"ns": [2, 3], "bases": 20, "tol_klain": 1e-9, "tol_angles": 1e-9},
        "prop45": {"samples": 100, "max_n": 3, "max_k": 4, "tol": 1e-9},
        "cor49": {"samples": 100, "ns": [2, 3], "tol_match": 1e-9, "tol_zero": 1e-10},
        "lemma48": {"samples": 100, "ns": [2, 3], "tol": 1e-10},
        "prop410": {"n": 2, "ks": [2, 3], "tuples": 25, "max_freq": 8.0, "tol": 1e-4},
        "cor411": {"cases": [[2, 24, 2], [3, 8, 1]], "functions": 10, "tol": 1e-4},
        "cor416": {"n": 2, "ks": [2, 3], "functions": 10, "tol": 1e-3,
                   "tol_ma_exact": 1e-10, "tol_ma_cycle": 1e-8},
        "abel": {"grid": 400, "tol_roundtrip": 1e-6, "tol_gaussian": 1e-5, "tol_compose": 1e-8},
        "thm418": {"n": 2, "ks": [3, 4], "tuples": 25, "max_freq": 8.0, "tol": 1e-3},
        "theorem1": {"n": 2, "k": 2, "tuples": 5, "max_freq": 6.0, "tol": 1e-3},
    },
}


@dataclass
class ExperimentConfig:
    """Seed, quadrature settings, densities and per-suite parameters.

    Anything not given falls back to DEFAULTS; the resolved settings are echoed
    into every report.
    """

    seed: int = 0
    quadrature: Dict = field(default_factory=lambda: dict(DEFAULTS["quadrature"]))
    radial_order: int = DEFAULTS["radial_order"]
    densities: Dict = field(default_factory=lambda: json.loads(json.dumps(DEFAULTS["densities"])))
    suites: Dict = field(default_factory=dict)
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"seed", "quadrature", "radial_order", "densities", "suites", "out"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        cfg.seed = int(d.get("seed", cfg.seed))
        cfg.quadrature.update(d.get("quadrature", {}))
        cfg.radial_order = int(d.get("radial_order", cfg.radial_order))
        for name, dens in d.get("densities", {}).items():
            cfg.densities[name] = dict(dens)
        for name, params in d.get("suites", {}).items():
            if name not in SUITES:
                raise ValueError(f"unknown suite {name!r} in config")
            cfg.suites[name] = dict(params)
        cfg.out = d.get("out")
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self):
        if int(self.quadrature["order"]) < 8 or self.radial_order < 8:
            raise ValueError("quadrature orders must be at least 8")
        if int(self.quadrature["panels"]) < 1:
            raise ValueError("need at least one quadrature panel")
        for name, d in self.densities.items():
            if float(d["R"]) <= 0:
                raise ValueError(f"density {name!r} needs a positive support radius")
        for name in self.suites:
            p = self.suite_params(name)
            for key in ("n", "ns", "k", "ks"):
                if key in p:
                    vals = p[key] if isinstance(p[key], list) else [p[key]]
                    if any(int(v) < 1 for v in vals):
                        raise ValueError(f"{name}.{key} must be positive")
            if "n" in p and "ks" in p and any(not 0 < k <= 2 * p["n"] for k in p["ks"]):
                raise ValueError(f"{name}: degrees must lie in (0, 2n]")
        return self

    def suite_params(self, name):
        out = dict(DEFAULTS["suites"][name])
        extra = set(self.suites.get(name, {})) - set(out)
        if extra:
            raise ValueError(f"unknown parameters for suite {name}: {sorted(extra)}")
        out.update(self.suites.get(name, {}))
        return out

    def resolved(self, name):
        """Effective settings for one suite, echoed at the top of a report."""
        return {"suite": name, "seed": self.seed, "quadrature": dict(self.quadrature),
                "radial_order": self.radial_order, "densities": self.densities,
                "params": self.suite_params(name)}

    def quad(self):
        return Quadrature(int(self.quadrature["order"]), int(self.quadrature["panels"]))

    def density(self, name):
        d = self.densities[name]
        return RadialDensity(float(d["R"]), d.get("poly", [1.0]))


@dataclass
class CaseRecord:
    """One checked case. ``residual`` is the quantity compared with ``tolerance``."""

    case: str
    statement: str
    expected: float
    actual: float
    abs_residual: float
    rel_residual: float
    residual: float
    tolerance: float
    passed: bool
    inputs_digest: str = ""
    detail: Dict = field(default_factory=dict)

    def to_record(self):
        return asdict(self)


@dataclass
class ResidualReport:
    suite: str
    config: Dict
    cases: List[CaseRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.cases)

    @property
    def max_residual(self):
        return max((c.residual for c in self.cases), default=0.0)

    def failures(self):
        return [c for c in self.cases if not c.passed]


def _clean(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _digest(inputs):
    if inputs is None:
        return ""
    h = hashlib.sha256()
    for key in sorted(inputs):
        h.update(key.encode())
        v = np.asarray(inputs[key])
        if np.iscomplexobj(v):
            v = np.stack([v.real, v.imag])
        h.update(np.ascontiguousarray(v, dtype=float).tobytes())
    return h.hexdigest()[:16]


def _record(case, statement, tol, actual, expected=0.0, mode="abs", scale=None, inputs=None, **detail):
    """Build a case record; ``mode`` picks which residual is tested ("abs", "rel" or "scaled")."""
    actual, expected = float(actual), float(expected)
    err = abs(actual - expected)
    rel = err / abs(expected) if expected != 0 else (0.0 if err == 0 else float("inf"))
    if mode == "abs":
        residual = err
    elif mode == "rel":
        residual = rel
    elif mode == "scaled":
        residual = err / abs(scale)
    else:
        raise ValueError(mode)
    ok = bool(np.isfinite(residual) and residual < tol)
    return CaseRecord(case, statement, expected, actual, err, rel, float(residual), float(tol), ok,
                      _digest(inputs), {k: _clean(v) for k, v in detail.items()})


def _case(**kw):
    parts = []
    for k, v in kw.items():
        parts.append(f"{k}={v:03d}" if isinstance(v, (int, np.integer)) else f"{k}={v}")
    return "/".join(parts)


def _gl_basis(E, rng, spread=0.3):
    """A random (non-orthonormal) real basis of E."""
    k = E.k
    A = np.eye(k) + spread * rng.standard_normal((k, k))
    while abs(np.linalg.det(A)) < 0.2:
        A = np.eye(k) + spread * rng.standard_normal((k, k))
    return A @ E.basis


def _cz(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


# suites

def suite_forms(cfg, rng):
    p = cfg.suite_params("forms3")
    out = []
    for n in p["ns"]:
        zero = ea.MultiVector(n)
        omega = ea.invariant_form("omega_s", n)
        for i in range(p["points"]):
            z = _cz(rng, n)
            zin = {"z": np.concatenate([z.real, z.imag])}
            F = {s: ea.invariant_form(s, n, z) for s in ("theta0", "theta1", "theta2", "gamma1", "gamma2", "beta1", "beta2")}
            r2 = float(np.sum(np.abs(z) ** 2))
            Xg = ea.hamiltonian_field("gamma1", n, z)
            Xb = ea.hamiltonian_field("beta1", n, z)
            table = [
                (ea.contract(Xg, F["theta0"]), zero), (ea.contract(Xg, F["theta1"]), -F["gamma2"]),
                (ea.contract(Xg, F["theta2"]), -F["beta2"]), (ea.contract(Xb, F["theta0"]), F["gamma2"]),
                (ea.contract(Xb, F["theta1"]), F["beta2"]), (ea.contract(Xb, F["theta2"]), zero),
                (ea.contract(Xg, F["beta1"]), ea.MultiVector.one(n) * (-r2)),
                (ea.contract(Xb, F["gamma1"]), ea.MultiVector.one(n) * r2),
            ]
            res = max((a - b).max_abs() for a, b in table)
            out.append(_record(_case(n=n, check="contraction", point=i),
                               "Hamiltonian fields of gamma1 and beta1 contract theta0, theta1, theta2, beta1, gamma1 as tabulated",
                               p["tol_contraction"], res, inputs=zin))
            if i < p["primitive_samples"]:
                deg = 2 * n
                a = ea.MultiVector.from_vector(n, deg, rng.standard_normal(len(ea._basis_masks(4 * n, deg))))
                prim = ea.lefschetz_decompose(a)[0]
                lhs = prim * r2
                rhs = (ea.wedge(F["gamma1"], ea.contract(Xb, prim)) - ea.wedge(F["beta1"], ea.contract(Xg, prim))
                       + ea.wedge(omega, ea.contract(Xg, ea.contract(Xb, prim))))
                res = (lhs - rhs).max_abs() / max(1.0, lhs.max_abs())
                out.append(_record(_case(n=n, check="primitive", point=i),
                                   "|z|^2 w = gamma1 ^ i_Xbeta1 w - beta1 ^ i_Xgamma1 w + omega_s ^ i_Xgamma1 i_Xbeta1 w for primitive w",
                                   p["tol_primitive"], res, inputs=zin))
            for k in range(0, 2 * n + 1):
                for q in range(max(0, k - n), k // 2 + 1):
                    T = lambda kk, qq: ea.theta_kq(n - 1, kk, qq, n)
                    e0, e1, e2 = ea.theta_exponents(n, k, q)
                    lhs = ea.theta_kq(n, k, q) * r2
                    rhs = ea.wedge(F["gamma1"], ea.wedge(F["gamma2"], T(k, q)) * e0 + ea.wedge(F["beta2"], T(k - 1, q)) * e1)
                    rhs = rhs + ea.wedge(F["beta1"], ea.wedge(F["gamma2"], T(k - 1, q)) * e1 + ea.wedge(F["beta2"], T(k - 2, q - 1)) * e2)
                    res = ea.mod_omega_s_residual(lhs - rhs, 2 * n)
                    out.append(_record(_case(n=n, k=k, q=q, check="mod_omega_s", point=i),
                                       "|z|^2 theta_kq equals its gamma1/beta1 expansion modulo omega_s",
                                       p["tol_mod"], res, inputs=zin))
        for i in range(3):
            c = rng.standard_normal((n + 1, n + 1))
            poly = ea.MultiVector(n)
            for a in range(n + 1):
                for b in range(n + 1 - a):
                    term = ea.wedge(ea.wedge(ea.wedge_power(ea.invariant_form("theta0", n), a),
                                             ea.wedge_power(ea.invariant_form("theta1", n), b)),
                                    ea.wedge_power(ea.invariant_form("theta2", n), n - a - b))
                    poly = poly + term * c[a, b]
            parts = ea.lefschetz_decompose(poly)
            res = parts[1].max_abs() / max(1.0, poly.max_abs()) if len(parts) > 1 else 0.0
            out.append(_record(_case(n=n, check="theta_polynomial", sample=i),
                               "degree-n polynomials in theta0, theta1, theta2 have no L^1 Lefschetz component",
                               p["tol_mod"], res, inputs={"c": c}))
    return out


def suite_detk(cfg, rng):
    p = cfg.suite_params("detk")
    out = []
    for i in range(p["samples"]):
        k = int(rng.integers(1, p["max_k"] + 1))
        r = int(rng.integers(1, 4))
        cuts = np.sort(rng.integers(0, k + 1, r - 1))
        counts = np.diff(np.concatenate([[0], cuts, [k]])).astype(int)
        mats = [rng.standard_normal((k, k)) for _ in range(r)]
        inputs = {f"M{j}": m for j, m in enumerate(mats)}
        val = det_mixed(list(zip(mats, counts)))
        ref = _det_mixed_interpolated(mats, list(counts)) if r > 1 else np.linalg.det(mats[0])
        out.append(_record(_case(sample=i, check="interpolation"),
                           "det_k is the coefficient of prod t_i^m_i in det(sum t_i M_i)",
                           p["tol"], val, ref, mode="scaled", scale=max(1.0, abs(ref)), inputs=inputs,
                           counts=counts.tolist()))
        perm = rng.permutation(r)
        val2 = det_mixed([(mats[j], counts[j]) for j in perm])
        out.append(_record(_case(sample=i, check="symmetry"), "det_k is symmetric in its arguments",
                           p["tol"], val2, val, mode="scaled", scale=max(1.0, abs(val)), inputs=inputs))
        d = np.linalg.det(mats[0])
        out.append(_record(_case(sample=i, check="diagonal"), "det_k(M[k]) equals det M",
                           p["tol"], det_mixed([(mats[0], k)]), d, mode="scaled", scale=max(1.0, abs(d)), inputs=inputs))
    return out


def suite_kahler(cfg, rng):
    p = cfg.suite_params("kahler")
    out = []
    for n in p["ns"]:
        for k in range(1, 2 * n + 1):
            for pp in range(max(0, k - n), k // 2 + 1):
                E = extremal_subspace(n, k, pp)
                for b in range(p["bases"]):
                    w = _gl_basis(E, rng)
                    _, R = gram_matrices(w)
                    dR = np.linalg.det(R)
                    for q in range(max(0, k - n), k // 2 + 1):
                        out.append(_record(_case(n=n, k=k, p=pp, q=q, basis=b),
                                           "P_kq(w) / det Re-Gram(w) is 1 on E_{k,q} and 0 on E_{k,p}, p != q",
                                           p["tol_klain"], p_kq(w, q) / dR, 1.0 if q == pp else 0.0, inputs={"w": w}))
            E = random_subspace(n, k, int(rng.integers(1 << 31)))
            U = random_unitary(n, int(rng.integers(1 << 31)))
            moved = Subspace(n, E.basis @ U.T)
            a1, a2 = kahler_angles(E).angles, kahler_angles(moved).angles
            T = tasaki_basis(E)
            res = max(np.max(np.abs(a1 - a2)) if len(a1) else 0.0,
                      0.0 if is_tasaki_form(T.basis, 1e-9) else np.inf,
                      np.max(np.abs(kahler_angles(T).angles - a1)) if len(a1) else 0.0)
            out.append(_record(_case(n=n, k=k, check="angles"),
                               "Kahler angles are unitarily invariant and the Tasaki basis is in normal form",
                               p["tol_angles"], res, inputs={"E": E.basis}))
    return out


def suite_factorization(cfg, rng):
    p = cfg.suite_params("prop45")
    out = []
    for i in range(p["samples"]):
        n = int(rng.integers(1, p["max_n"] + 1))
        k = int(rng.integers(1, min(p["max_k"], 2 * n) + 1))
        E = random_subspace(n, k, int(rng.integers(1 << 31)))
        w = _gl_basis(E, rng)
        _, R = gram_matrices(w)
        for q in range(max(0, k - n), k // 2 + 1):
            out.append(_record(_case(sample=i, n=n, k=k, q=q),
                               "P_kq(w) = det(Re-Gram(w)) * Klain function of mu_kq at span(w)",
                               p["tol"], p_kq(w, q), np.linalg.det(R) * klain_mu_kq(E, q), inputs={"w": w}))
    return out


def suite_symbols(cfg, rng):
    p = cfg.suite_params("cor49")
    out = []
    for i in range(p["samples"]):
        n = int(rng.choice(p["ns"]))
        k = int(rng.integers(1, 2 * n + 1))
        pp = int(rng.integers(max(0, k - n), k // 2 + 1))
        E = extremal_subspace(n, k, pp)
        w = _gl_basis(E, rng)
        _, R = gram_matrices(w)
        dR = np.linalg.det(R)
        z = _cz(rng, n)
        inputs = {"w": w, "z": np.concatenate([z.real, z.imag])}
        for q in range(max(1, k - n), k // 2 + 1):
            ref = dR * np.sum(np.abs(z[:q]) ** 2) if q == pp else 0.0
            tol = p["tol_match"] if q == pp else p["tol_zero"]
            out.append(_record(_case(sample=i, n=n, k=k, p=pp, q=q, family="beta"),
                               "D_beta on E_{k,p} equals delta_pq det(Re-Gram) sum_{j<=q} |z_j|^2",
                               tol, symbol_beta(w, q, z), ref, inputs=inputs))
        for q in range(max(0, k - n), (k - 1) // 2 + 1):
            ref = dR * np.sum(z.real[q:k - q] ** 2) if q == pp else 0.0
            tol = p["tol_match"] if q == pp else p["tol_zero"]
            out.append(_record(_case(sample=i, n=n, k=k, p=pp, q=q, family="gamma"),
                               "D_gamma on E_{k,p} equals delta_pq det(Re-Gram) sum_{q<j<=k-q} (Re z_j)^2",
                               tol, symbol_gamma(w, q, z), ref, inputs=inputs))
    return out


def suite_tasaki(cfg, rng):
    p = cfg.suite_params("lemma48")
    out = []
    for i in range(p["samples"]):
        n = int(rng.choice(p["ns"]))
        k = int(rng.integers(1, 2 * n + 1))
        E, _ = random_tasaki_subspace(n, k, int(rng.integers(1 << 31)))
        z = _cz(rng, n)
        inputs = {"w": E.basis, "z": np.concatenate([z.real, z.imag])}
        g = gram_pack(E.basis, z)
        for q in range(0, k // 2 + 1):
            zi, zr = tasaki_closed_forms(E, q, z)
            if q >= 1:
                ref = det_mixed([(g.I, 2 * q - 1), (g.ZI, 1), (g.R, k - 2 * q)])
                out.append(_record(_case(sample=i, n=n, k=k, q=q, kind="ZI"),
                                   "det_k(I[2q-1], Z^I, R[k-2q]) in a Tasaki basis equals its Kahler-angle permutation sum",
                                   p["tol"], zi, ref, inputs=inputs))
            if 2 * q + 1 <= k:
                ref = det_mixed([(g.I, 2 * q), (g.ZR, 1), (g.R, k - 2 * q - 1)])
                out.append(_record(_case(sample=i, n=n, k=k, q=q, kind="ZR"),
                                   "det_k(I[2q], Z^R, R[k-2q-1]) in a Tasaki basis equals its Kahler-angle permutation sum",
                                   p["tol"], zr, ref, inputs=inputs))
    return out


def random_tuple(rng, k, dim, max_freq, radius):
    """k random vectors with |y_i| R in [0.5, max_freq/k], so |sum y_i| R <= max_freq."""
    ys = []
    for _ in range(k):
        v = rng.standard_normal(dim)
        ys.append(v / np.linalg.norm(v) * rng.uniform(0.5, max_freq / k) / radius)
    return np.array(ys)


def family_rhs(n, k, family, q, density, ys, order=160):
    """Closed-form real-slice Goodey-Weil value of a single-family valuation.

    theta: P_kq(y) L(u) / k!, with L the Laplace transform of the density on R^2n;
    beta/gamma: the quadratic moment of the density against the symbol matrix,
    scaled by 1/q resp. 1/(k-2q). Here u = sum_i y_i.
    """
    u = ys.sum(axis=0)
    prof = RadialProfile(density)
    if family == "theta":
        return p_kq(ys, q) * laplace_radial(prof, 2 * n, u, order=order) / factorial(k)
    h = AbelTransform(prof, 2 * n - 1, order=order)
    sym = symbol_beta if family == "beta" else symbol_gamma
    scale = 1.0 / q if family == "beta" else 1.0 / (k - 2 * q)
    P = symbol_matrix(sym, ys, q, 2 * n)
    return scale * quadratic_moment(h, P, u, order) / factorial(k)


def suite_gw_families(cfg, rng):
    p = cfg.suite_params("prop410")
    out = []
    n = p["n"]
    phi = cfg.density("phi")
    R = phi.spatial_radius
    quad = cfg.quad()
    for k in p["ks"]:
        fams = [("theta", q) for q in range(max(0, k - n), k // 2 + 1)]
        fams += [("beta", q) for q in range(max(1, k - n), k // 2 + 1)]
        fams += [("gamma", q) for q in range(max(0, k - n), (k - 1) // 2 + 1)]
        for t in range(p["tuples"]):
            ys = random_tuple(rng, k, 2 * n, p["max_freq"], R)
            for fam, q in fams:
                mu = SmoothValuationSpec(n, k, [RawForm(fam, q, phi)])
                val = gw_slice(mu, ys, quad)
                ref = family_rhs(n, k, fam, q, phi, ys, cfg.radial_order)
                out.append(_record(_case(n=n, k=k, family=fam, q=q, tuple=t),
                                   f"real-slice Goodey-Weil value of the {fam} family equals its closed form",
                                   p["tol"], val, ref, mode="rel", inputs={"y": ys}))
    return out


def _test_functions(dim, count, rng):
    kinds = ["quadratic", "exp_linear", "smooth_norm", "sum"]
    return [random_test_function(dim, rng, kinds[i % 4]) for i in range(count)]


def suite_vanishing(cfg, rng):
    p = cfg.suite_params("cor411")
    out = []
    phi = cfg.density("phi")
    for n, order, panels in p["cases"]:
        quad = Quadrature(order, panels)
        for k in range(1, 2 * n + 1):
            qs = list(theta_range(n, k))
            if len(qs) < 2:
                continue
            fs = _test_functions(k, p["functions"], rng)
            for q in qs:
                mu = SmoothValuationSpec(n, k, [ThetaTerm(q, phi)])
                scale = restrict(mu, extremal_subspace(n, k, q), quad).evaluate_many(fs)
                for pp in qs:
                    if pp == q:
                        continue
                    vals = restrict(mu, extremal_subspace(n, k, pp), quad).evaluate_many(fs)
                    for i, (v, s) in enumerate(zip(vals, scale)):
                        out.append(_record(_case(n=n, k=k, q=q, p=pp, function=i),
                                           "mu_kq restricted to E_{k,p} vanishes for p != q",
                                           p["tol"], v, 0.0, mode="scaled", scale=s, scale_value=s))
    return out


def mixed_spec(cfg, n, k):
    """Theta terms at every q (alternating phi, psi) plus Upsilon terms with psi."""
    phi, psi = cfg.density("phi"), cfg.density("psi")
    dens = [phi, psi]
    terms = [ThetaTerm(q, dens[i % 2]) for i, q in enumerate(theta_range(n, k))]
    terms += [UpsilonTerm(q, psi) for q in upsilon_range(n, k)]
    return SmoothValuationSpec(n, k, terms)


def suite_restriction(cfg, rng):
    p = cfg.suite_params("cor416")
    out = []
    n = p["n"]
    quad = cfg.quad()
    for k in p["ks"]:
        mu = mixed_spec(cfg, n, k)
        for q in theta_range(n, k):
            E = extremal_subspace(n, k, q)
            pair = densities_from_spec(mu, q, order=cfg.radial_order)
            fs = _test_functions(k, p["functions"], rng)
            full = restrict(mu, E, quad).evaluate_many(fs)
            for i, f in enumerate(fs):
                red = monge_ampere(pair.density_on_subspace, f, k, pair.support, quad)
                out.append(_record(_case(n=n, k=k, q=q, function=i),
                                   "restriction to E_{k,q} is the Monge-Ampere integral of the (a_q, b_q) density",
                                   p["tol"], full[i], red, mode="rel", function=f.to_dict()))
    # Monge-Ampere of quadratics against a polynomial weight on a cube (exact rule)
    weight = lambda x: 1.0 + np.sum(x * x, axis=1)
    for d in (1, 2, 3):
        for i in range(3):
            m = rng.standard_normal((d, d))
            f = Quadratic(m @ m.T + 0.5 * np.eye(d), rng.standard_normal(d))
            val = monge_ampere(weight, f, d, 1.0, Quadrature(6, 1), domain="box")
            exact = np.linalg.det(f.A) * (2.0 ** d + d * 2.0 ** (d - 1) * 2.0 / 3.0)
            out.append(_record(_case(check="ma_quadratic", d=d, sample=i),
                               "Monge-Ampere integral of a quadratic is det A times the weight mass",
                               p["tol_ma_exact"], val, exact, mode="rel", inputs={"A": f.A}))
    # for n = 1 the differential cycle integral is the Monge-Ampere integral
    phi = cfg.density("phi")
    mu1 = SmoothValuationSpec(1, 2, [ThetaTerm(1, phi)])
    for i, f in enumerate(_test_functions(2, 4, rng)):
        cyc = mu1.evaluate(f, quad)
        direct = monge_ampere(lambda z: phi(np.sum(z * z, axis=1)), f, 2, phi.spatial_radius, quad)
        out.append(_record(_case(check="ma_cycle", function=i),
                           "for n = 1 the differential cycle integral equals the direct Monge-Ampere integral",
                           p["tol_ma_cycle"], cyc, direct, mode="rel", function=f.to_dict()))
    return out


class _Gaussian:
    support = 12.0

    def __call__(self, r):
        return np.exp(-np.asarray(r) ** 2)


class _GaussianAbel:
    support = 12.0

    def __call__(self, r):
        return np.sqrt(np.pi) * np.exp(-np.asarray(r) ** 2)

    def derivative(self, r):
        r = np.asarray(r)
        return -2.0 * r * np.sqrt(np.pi) * np.exp(-r ** 2)


def _sup_record(case, statement, tol, got, want):
    i = int(np.argmax(np.abs(got - want)))
    return _record(case, statement, tol, got[i], want[i], worst_index=i)


def suite_abel(cfg, rng):
    p = cfg.suite_params("abel")
    out = []
    order = cfg.radial_order
    for name in ("phi", "psi"):
        prof = RadialProfile(cfg.density(name))
        t = np.linspace(0.0, prof.support, p["grid"], endpoint=False)
        A = AbelTransform(prof, 1, order=order)
        out.append(_sup_record(_case(check="roundtrip", density=name),
                               "the inverse Abel transform undoes the Abel transform",
                               p["tol_roundtrip"], abel_inverse(A, t, order=order), prof(t)))
        for m1, m2 in ((1, 1), (1, 2), (2, 1)):
            comp = abel_m(AbelTransform(prof, m1, order=order), m2, t, order=order)
            out.append(_sup_record(_case(check=f"compose_{m1}_{m2}", density=name),
                                   "A^m2 A^m1 = A^(m1+m2)", p["tol_compose"],
                                   comp, abel_m(prof, m1 + m2, t, order=order)))
    t = np.linspace(0.0, 4.0, p["grid"])
    out.append(_sup_record(_case(check="gaussian_forward"), "A(exp(-r^2)) = sqrt(pi) exp(-t^2)",
                           p["tol_gaussian"], abel(_Gaussian(), t, order=order), np.sqrt(np.pi) * np.exp(-t * t)))
    out.append(_sup_record(_case(check="gaussian_inverse"), "A^-1(sqrt(pi) exp(-t^2)) = exp(-r^2)",
                           p["tol_gaussian"], abel_inverse(_GaussianAbel(), t, order=order), np.exp(-t * t)))
    return out


def suite_reconstruction(cfg, rng):
    p = cfg.suite_params("thm418")
    out = []
    n = p["n"]
    quad = cfg.quad()
    for k in p["ks"]:
        mu = mixed_spec(cfg, n, k)
        data = reconstruction_data(mu, cfg.radial_order)
        for t in range(p["tuples"]):
            ys = random_tuple(rng, k, 2 * n, p["max_freq"], mu.support_radius)
            val = gw_slice(mu, ys, quad)
            rec = reconstruct_gw(data, ys, cfg.radial_order)
            out.append(_record(_case(n=n, k=k, tuple=t),
                               "Goodey-Weil values rebuilt from the (a_q, b_q) restriction data match direct quadrature",
                               p["tol"], rec, val, mode="rel", inputs={"y": ys}))
    return out


def suite_determination(cfg, rng):
    p = cfg.suite_params("theorem1")
    out = []
    n, k = p["n"], p["k"]
    quad = cfg.quad()
    phi = cfg.density("phi")
    qs = list(theta_range(n, k))
    for q0 in qs:
        mu = SmoothValuationSpec(n, k, [ThetaTerm(q0, phi)])
        data = reconstruction_data(mu, cfg.radial_order)
        cases = []
        for pp in qs:
            E = extremal_subspace(n, k, pp)
            for t in range(p["tuples"]):
                coords = random_tuple(rng, k, k, p["max_freq"], mu.support_radius)
                ys = coords @ E.projection()
                cases.append((pp, t, ys, gw_slice(mu, ys, quad), reconstruct_gw(data, ys, cfg.radial_order)))
        scale = max(abs(c[3]) for c in cases)
        for pp, t, ys, val, rec in cases:
            out.append(_record(_case(q0=q0, p=pp, tuple=t),
                               "the restriction data on the extremal subspaces alone determine the Goodey-Weil values",
                               p["tol"], rec, val, mode="scaled", scale=scale, inputs={"y": ys}))
    return out


SUITES = {
    "forms3": suite_forms,
    "detk": suite_detk,
    "kahler": suite_kahler,
    "prop45": suite_factorization,
    "cor49": suite_symbols,
    "lemma48": suite_tasaki,
    "prop410": suite_gw_families,
    "cor411": suite_vanishing,
    "cor416": suite_restriction,
    "abel": suite_abel,
    "thm418": suite_reconstruction,
    "theorem1": suite_determination,
}

DESCRIPTIONS = {
    "forms3": "contraction table, primitive-form identity, theta expansion modulo omega_s",
    "detk": "mixed discriminant against an interpolation oracle",
    "kahler": "P_kq / det R on extremal subspaces, Kahler angle invariance",
    "prop45": "P_kq factors as det R times the Klain function",
    "cor49": "beta/gamma symbols on extremal subspaces",
    "lemma48": "Z-type mixed discriminants in a Tasaki basis",
    "prop410": "real-slice Goodey-Weil values of theta/beta/gamma families",
    "cor411": "theta valuations vanish on the wrong extremal subspaces",
    "cor416": "restriction densities (a_q, b_q) and Monge-Ampere checks",
    "abel": "Abel transform round trip, Gaussian, composition",
    "thm418": "Goodey-Weil values rebuilt from restriction data",
    "theorem1": "restriction data determine the valuation",
}


def run_suite(name, config=None, seed=None):
    """Run one suite; cases come back sorted by case key."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    cfg = config if config is not None else ExperimentConfig()
    if seed is not None:
        cfg.seed = int(seed)
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    cases = sorted(SUITES[name](cfg, rng), key=lambda c: c.case)
    return ResidualReport(name, cfg.resolved(name), cases, time.perf_counter() - t0)


TABLE_COLUMNS = ["case", "expected", "actual", "abs_residual", "rel_residual", "residual",
                 "tolerance", "passed", "statement"]


def emit(report, fmt="record", path=None, timing=False):
    """Render a report as JSON lines ("record") or tab-separated columns ("table").

    The record format is one header line ``{"suite", "config"}`` followed by one
    JSON object per case. The table starts with ``#``-prefixed config lines and a
    column header. Wall time is left out unless ``timing`` is set, so reruns with
    the same seed are byte-identical. Writes to ``path`` when given.
    """
    if fmt == "record":
        head = {"suite": report.suite, "config": report.config}
        if timing:
            head["wall_time"] = report.wall_time
        lines = [json.dumps(head, sort_keys=True)]
        lines += [json.dumps(c.to_record(), sort_keys=True) for c in report.cases]
    elif fmt == "table":
        lines = ["# " + json.dumps({"suite": report.suite, "config": report.config}, sort_keys=True)]
        if timing:
            lines.append(f"# wall_time {report.wall_time:.3f}")
        lines.append("\t".join(TABLE_COLUMNS))
        for c in report.cases:
            row = [c.case, repr(c.expected), repr(c.actual), repr(c.abs_residual), repr(c.rel_residual),
                   repr(c.residual), repr(c.tolerance), "pass" if c.passed else "FAIL", c.statement]
            lines.append("\t".join(row))
    else:
        raise ValueError("format must be 'record' or 'table'")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def parse_records(text):
    """Inverse of ``emit(report, "record")``."""
    lines = [l for l in text.splitlines() if l.strip()]
    head = json.loads(lines[0])
    cases = [CaseRecord(**json.loads(l)) for l in lines[1:]]
    return ResidualReport(head["suite"], head["config"], cases, head.get("wall_time", 0.0))
