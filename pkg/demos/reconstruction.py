"""Rebuild Goodey-Weil values of a valuation from its restrictions.

For each extremal subspace E_{k,q} the restriction of mu is a Monge-Ampere
integral against a radial density; the pair (a_q, b_q) of such densities
determines the real-slice Goodey-Weil values, which we compare against the
direct quadrature of the polarized valuation.
"""
import time

import numpy as np

from unival import (Quadrature, RadialDensity, SmoothValuationSpec, ThetaTerm, UpsilonTerm,
                    gw_slice, reconstruct_gw, reconstruction_data)

phi = RadialDensity(1.0, [1.0, 0.5])
psi = RadialDensity(1.0, [0.7, -0.3, 0.2])
mu = SmoothValuationSpec(2, 3, [ThetaTerm(1, phi), UpsilonTerm(1, psi)])

data = reconstruction_data(mu)
for q, pair in sorted(data.pairs.items()):
    r = np.array([0.0, 0.5, 0.9])
    print(f"q={q}: a_q(r) = {pair.a(r)}, b_q(r) = {pair.b(r)}")

rng = np.random.default_rng(0)
quad = Quadrature(24, 2)
for i in range(3):
    ys = rng.standard_normal((3, 4))
    ys *= rng.uniform(0.5, 2.5, (3, 1)) / np.linalg.norm(ys, axis=1, keepdims=True)
    t0 = time.perf_counter()
    direct = gw_slice(mu, ys, quad)
    t1 = time.perf_counter()
    rebuilt = reconstruct_gw(data, ys)
    t2 = time.perf_counter()
    print(f"tuple {i}: direct {direct:.10f} ({t1 - t0:.1f}s)  rebuilt {rebuilt:.10f} ({t2 - t1:.2f}s)  "
          f"rel diff {abs(rebuilt - direct) / abs(direct):.1e}")
