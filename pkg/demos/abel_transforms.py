"""Abel transforms of radial profiles: forward, iterated, and inverted."""
import numpy as np

from unival import abel, abel_inverse, abel_m
from unival.transforms import AbelTransform, RadialProfile
from unival.valuation_engine import RadialDensity

prof = RadialProfile(RadialDensity(1.0, [1.0, 0.5]))
t = np.linspace(0, 0.99, 8)

A1 = AbelTransform(prof, 1)
print("t        ", t)
print("phi      ", prof(t))
print("A phi    ", A1(t))
print("A^2 phi  ", abel_m(prof, 2, t))
print("A(A phi) ", abel(A1, t))
print("inverse  ", abel_inverse(A1, t))
print("max |A^-1 A phi - phi| =", np.max(np.abs(abel_inverse(A1, t) - prof(t))))


class Gaussian:
    support = 12.0

    def __call__(self, r):
        return np.exp(-np.asarray(r) ** 2)


s = np.linspace(0, 3, 7)
print("\nGaussian: A exp(-r^2) - sqrt(pi) exp(-t^2) =", np.max(np.abs(abel(Gaussian(), s) - np.sqrt(np.pi) * np.exp(-s * s))))
