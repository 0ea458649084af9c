# Riemann curvature in a tetrad, the spinor curvature, and the quarter-gamma relation between them.
import numpy as np

from spinconn import (coordinate_frame, make_builtin_spacetime, orthonormal_tetrad, random_gauge,
                      riemann_frame, spinor_curvature, spinor_frame_data)
from spinconn.curvature import frame_inverse_metric, spinor_curvature_from_riemann

schw = make_builtin_spacetime("schwarzschild", {"r_s": 1.0})
E = orthonormal_tetrad(schw)
eta = np.diag([1.0, -1.0, -1.0, -1.0])
r = np.linspace(2.0, 7.0, 6)
x = np.stack([np.zeros_like(r), r, np.full_like(r, 1.3), np.full_like(r, 0.7)], axis=-1)

R = riemann_frame(schw, E, x)
low = np.einsum("pa,...aqij->...pqij", eta, R)
K = np.einsum("...pqij,pa,qb,ic,jd,...abcd->...", low, eta, eta, eta, eta, low)
for ri, Ki in zip(r, K):
    print(f"r={ri:.1f}  Kretschmann {Ki:.6e}  closed form {12 / ri**6:.6e}")

# spinor curvature agrees with R contracted against two gammas, in any frame
for label, frame, data in [
    ("tetrad", E, spinor_frame_data()),
    ("coordinate", coordinate_frame(schw), spinor_frame_data(model=schw, frame=coordinate_frame(schw), tetrad=E)),
    ("tetrad + gauge", E, spinor_frame_data(gauge=random_gauge(seed=1, box=schw.box))),
]:
    fr = spinor_curvature(schw, frame, data, x)
    pred = spinor_curvature_from_riemann(riemann_frame(schw, frame, x), data(x), frame_inverse_metric(schw, frame, x))
    print(f"{label:>15}: relation residual {np.abs(fr - pred).max():.2e}")
