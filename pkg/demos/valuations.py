"""Evaluate a smooth unitarily invariant valuation on convex functions.

The valuation is a sum of Theta and Upsilon terms with bump densities; its
value on f is the integral of a differential form over the graph of df, done
by tensor Gauss-Legendre quadrature on the density's support.
"""
import numpy as np

from unival import (ExpLinear, PulledBack, Quadratic, RadialDensity, SmoothValuationSpec, Sum,
                    ThetaTerm, UpsilonTerm, evaluate, polarize)
from unival.grassmann import random_unitary

phi = RadialDensity(1.0, [1.0, 0.5])
psi = RadialDensity(1.0, [0.7, -0.3, 0.2])
mu = SmoothValuationSpec(2, 3, [ThetaTerm(1, phi), UpsilonTerm(1, psi)])

rng = np.random.default_rng(0)
f = Sum([Quadratic(np.diag([1.0, 2.0, 0.5, 1.5])), ExpLinear([(0.3, rng.standard_normal(4))])])
base = evaluate(mu, f)
print("mu(f) =", base)

# dual epi-translation invariance: adding an affine function changes nothing
aff = Quadratic(np.zeros((4, 4)), b=rng.standard_normal(4), c=2.0)
print("mu(f + affine) =", evaluate(mu, Sum([f, aff])))

# homogeneity of degree 3
for t in (0.5, 2.0):
    print(f"mu({t} f) / mu(f) = {evaluate(mu, f * t) / base:.8f}   t^3 = {t ** 3}")

# invariance under unitary changes of variable
U = random_unitary(2, seed=3)
g = np.block([[U.real, -U.imag], [U.imag, U.real]])
print("mu(f o g) =", evaluate(mu, PulledBack(f, g)))

# the polarization recovers mu on the diagonal
print("polarization on (f, f, f) =", polarize(mu, [f, f, f]))
