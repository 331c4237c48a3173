"""Kahler angles of real subspaces of C^n and the Klain values of the
Hermitian intrinsic volumes.

P_kq(w) / det Re<w_i, w_j> depends only on the span E of w; on the extremal
subspaces E_{k,p} = C^p x R^(k-2p) it is 1 for q = p and 0 otherwise.
"""
import numpy as np

from unival import extremal_subspace, kahler_angles, klain_mu_kq, p_kq, random_subspace, tasaki_basis
from unival.mixed_discriminant import gram_matrices

np.set_printoptions(precision=4, suppress=True)
n, k = 3, 4
qs = range(max(0, k - n), k // 2 + 1)

print(f"Klain values on extremal subspaces, n={n}, k={k}")
for p in qs:
    E = extremal_subspace(n, k, p)
    vals = [klain_mu_kq(E, q) for q in qs]
    print(f"  E_{{{k},{p}}}: angles {kahler_angles(E).angles}, klain {np.round(vals, 12)}")

E = random_subspace(n, k, seed=1)
print("\nrandom subspace: angles", kahler_angles(E).angles)
print("  klain values", np.array([klain_mu_kq(E, q) for q in qs]))

# any basis of E gives the same ratio
rng = np.random.default_rng(0)
for _ in range(3):
    w = rng.standard_normal((k, k)) @ E.basis
    dR = np.linalg.det(gram_matrices(w)[1])
    print("  P/detR from a random basis:", np.array([p_kq(w, q) / dR for q in qs]))

# a Tasaki basis puts the skew Gram matrix into 2x2 blocks of cosines
T = tasaki_basis(E)
print("\nskew Gram matrix in a Tasaki basis:\n", gram_matrices(T.basis)[0])
print("cosines of the angles:", np.cos(kahler_angles(E).angles))
