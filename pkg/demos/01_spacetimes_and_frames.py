# Spacetimes, tetrads and the commutators of non-holonomic frames.
import numpy as np

from spinconn import (coordinate_frame, frame_metric_components, make_builtin_spacetime,
                      orthonormal_tetrad, structure_constants)

np.set_printoptions(precision=5, suppress=True)

schw = make_builtin_spacetime("schwarzschild", {"r_s": 1.0})
x = np.array([0.0, 3.0, 1.2, 0.4])  # (t, r, theta, phi)
print("metric at r=3:\n", schw(x))

# Gram-Schmidt tetrad: columns are the frame vectors in coordinate components
E = orthonormal_tetrad(schw)
print("tetrad E[n, i]:\n", E(x))
print("frame metric (should be diag(1,-1,-1,-1)):\n", frame_metric_components(schw, E, x))

# the tetrad vectors do not commute; the coordinate ones do
c = structure_constants(E, schw, x)
for k, i, j in zip(*np.nonzero(np.abs(c) > 1e-9)):
    if i < j:
        print(f"[U_{i}, U_{j}] has U_{k} component {c[k, i, j]: .6f}")
print("coordinate frame commutators all zero:",
      not structure_constants(coordinate_frame(schw), schw, x).any())

# points are plain arrays and may carry any batch shape
pts = np.stack([x, x + [0, 1, 0, 0], x + [0, 2, 0, 0]])
print("batched tetrads:", E(pts).shape)

# the polynomial test bed is a diagonal metric with polynomial entries
poly = make_builtin_spacetime("diag_poly")
print("diag_poly metric at the origin:", np.diag(poly(np.zeros(4))))
