"""The invariant forms on T*C^n and their theta polynomials."""
import numpy as np

from unival import exterior_algebra as ea

n = 2
z = np.array([0.3 + 0.1j, -0.5 + 0.2j])
for name in ("omega_s", "theta0", "theta1", "theta2", "gamma1", "beta1", "omega1"):
    print(f"{name:8s}", ea.invariant_form(name, n, z))

print("\ntheta polynomials theta0^(n-k+q) theta1^(k-2q) theta2^q, n = 2")
for k in range(0, 5):
    for q in range(max(0, k - n), k // 2 + 1):
        form = ea.theta_kq(n, k, q)
        print(f"  k={k} q={q}: exponents {ea.theta_exponents(n, k, q)}, {len(form.terms)} terms")

vol = ea.volume_form(n)
print("\nvolume form", vol)
parts = ea.lefschetz_decompose(ea.theta_kq(n, 2, 1))
print("Lefschetz parts of theta0 theta2:", [p.degree() for p in parts],
      "primitive:", [ea.is_primitive(p) for p in parts])
