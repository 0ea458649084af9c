# The constant spinor data of a chiral orthonormal frame and the identities it satisfies.
import numpy as np

from spinconn import (canonical_constants, check_gamma_identity, chirality_projectors,
                      chirality_split_residuals, commutation_residuals, constant_gauge,
                      apply_spinor_gauge)

c = canonical_constants()
print("d (lower):\n", c.d_lo.real)
print("H:\n", c.H.real)
for k in range(4):
    print(f"gamma_{k}:\n", c.gamma[k])

# Clifford relation with the frame metric eta
eta = np.diag([1.0, -1.0, -1.0, -1.0])
anti = np.einsum("mab,nbc->mnac", c.gamma, c.gamma) + np.einsum("nab,mbc->mnac", c.gamma, c.gamma)
print("Clifford defect:", np.abs(anti - 2 * eta[:, :, None, None] * np.eye(4)).max())

bullet, circ = chirality_projectors(c.H)
print("projectors sum to one:", np.array_equal(bullet + circ, np.eye(4)))
print("projector relations:", commutation_residuals(c))
print("split relations:", chirality_split_residuals(c))
print("gamma contraction identity residual:", check_gamma_identity(c, eta))

# a constant change of spinor frame moves every matrix but keeps the identities
S = np.eye(4) + 0.2 * np.random.default_rng(1).normal(size=(4, 4))
moved = apply_spinor_gauge(c, constant_gauge(S), np.zeros(4))
print("after a gauge, gamma_0 is no longer sparse:\n", np.round(moved.gamma[0], 3))
print("identity residual after gauge:", check_gamma_identity(moved, eta))
