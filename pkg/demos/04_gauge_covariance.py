# A point-dependent change of spinor frame: the general formulas follow it, the special one cannot.
import numpy as np

from spinconn import (canonical_constants, christoffel_frame, frame_derivative, make_builtin_spacetime,
                      orthonormal_tetrad, random_gauge, spin_connection_general,
                      spin_connection_special, spinor_frame_data)

schw = make_builtin_spacetime("schwarzschild", {"r_s": 1.0})
E = orthonormal_tetrad(schw)
gauge = random_gauge(seed=5, box=schw.box)
x = np.random.default_rng(3).uniform([-1, 2, 0.5, 0], [1, 7, 2.6, 6], size=(20, 4))

S, S_inv = gauge.S(x), gauge.S_inv(x)
print("|S| ranges over", np.abs(S).max(axis=(1, 2)).min(), "to", np.abs(S).max())

G = christoffel_frame(schw, E, x)
eta = np.diag([1.0, -1.0, -1.0, -1.0])
A = spin_connection_special(G, canonical_constants(), eta)

# expected transformation: S^-1 A S + S^-1 L(S)
LS = frame_derivative(gauge.S, E, schw, x)
expected = np.einsum("...ac,...cid,...db->...aib", S_inv, A, S) + np.einsum("...ac,...icb->...aib", S_inv, LS)

gauged = spinor_frame_data(gauge=gauge)
for v in ("decorated", "reduced"):
    A_new = spin_connection_general(schw, E, gauged, x, variant=v)
    print(f"{v}: deviation from transformed connection {np.abs(A_new - expected).max():.2e}")

# feeding the gauged gamma to the derivative-free formula misses the S^-1 L(S) term
naive = spin_connection_special(G, gauged(x), eta)
print("derivative-free formula in the gauged frame is off by", np.abs(naive - expected).max())
