# Four ways to get the spinor connection, and how they compare.
import numpy as np

from spinconn import (VARIANTS, canonical_constants, christoffel_frame, make_builtin_spacetime,
                      orthonormal_tetrad, spin_connection_general, spin_connection_special,
                      spinor_frame_data, structure_constants, torsion_defect)

schw = make_builtin_spacetime("schwarzschild", {"r_s": 1.0})
E = orthonormal_tetrad(schw)
x = np.random.default_rng(0).uniform([-1, 2, 0.5, 0], [1, 7, 2.6, 6], size=(25, 4))

# Levi-Civita coefficients in the tetrad: not symmetric, the antisymmetric part is the commutator
G = christoffel_frame(schw, E, x)
c = structure_constants(E, schw, x)
print("torsion defect:", torsion_defect(G, c))
print("size of the antisymmetric part:", np.abs(G - np.swapaxes(G, -1, -2)).max())

# derivative-free formula, valid because the gamma matrices are constant in this frame
eta = np.diag([1.0, -1.0, -1.0, -1.0])
A_special = spin_connection_special(G, canonical_constants(), eta)

# the general formulas differentiate d, H and gamma along the frame
data = spinor_frame_data()
for v in VARIANTS:
    A = spin_connection_general(schw, E, data, x, variant=v, Gamma=G)
    print(f"{v:>10}: max deviation from the special formula {np.abs(A - A_special).max():.2e}")

# A at one point: only the angular legs feel the curvature of the sphere
A0 = A_special[0]
for i in range(4):
    print(f"A_{i}:\n", np.round(A0[:, i, :], 4))
