"""Independent reference values for the test suite.

Everything here is written from closed-form expressions or explicit loops and
never imports the library, so agreement with the library is a real check.
Run ``python3 tests/oracles.py`` to regenerate ``data/frozen.json``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FROZEN_PATH = Path(__file__).parent / "data" / "frozen.json"
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

# canonical matrices typed in by hand, in block form
_I2 = np.eye(2)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_Z2 = np.zeros((2, 2))


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]]).astype(complex)


GAMMA = np.array([
    _block(_Z2, _I2, _I2, _Z2),
    _block(_Z2, _SX, -_SX, _Z2),
    _block(_Z2, _SY, -_SY, _Z2),
    _block(_Z2, _SZ, -_SZ, _Z2),
])
D_LO = _block(1j * _SY, _Z2, _Z2, -1j * _SY)
H = _block(_I2, _Z2, _Z2, -_I2)
DIRAC = _block(_Z2, _I2, _I2, _Z2)


def schwarzschild_metric(r_s, x):
    _, r, th, _ = x
    f = 1 - r_s / r
    return np.diag([f, -1 / f, -r * r, -(r * np.sin(th)) ** 2])


def schwarzschild_christoffel(r_s, x):
    """Nonzero coordinate Christoffel symbols, by hand."""
    _, r, th, _ = x
    G = np.zeros((4, 4, 4))
    f = 1 - r_s / r
    G[1, 0, 0] = r_s * (r - r_s) / (2 * r**3)
    G[0, 0, 1] = G[0, 1, 0] = r_s / (2 * r * (r - r_s))
    G[1, 1, 1] = -r_s / (2 * r * (r - r_s))
    G[1, 2, 2] = -r * f
    G[1, 3, 3] = -r * f * np.sin(th) ** 2
    G[2, 1, 2] = G[2, 2, 1] = 1 / r
    G[2, 3, 3] = -np.sin(th) * np.cos(th)
    G[3, 1, 3] = G[3, 3, 1] = 1 / r
    G[3, 2, 3] = G[3, 3, 2] = np.cos(th) / np.sin(th)
    return G


def schwarzschild_tetrad(r_s, x):
    """Diagonal static tetrad ``E[n, i]`` and its partials ``dE[n, m, i] = d_n E^m_i``."""
    _, r, th, _ = x
    f = 1 - r_s / r
    fp = r_s / r**2
    E = np.diag([f**-0.5, f**0.5, 1 / r, 1 / (r * np.sin(th))])
    dE = np.zeros((4, 4, 4))
    dE[1, 0, 0] = -0.5 * f**-1.5 * fp
    dE[1, 1, 1] = 0.5 * f**-0.5 * fp
    dE[1, 2, 2] = -1 / r**2
    dE[1, 3, 3] = -1 / (r**2 * np.sin(th))
    dE[2, 3, 3] = -np.cos(th) / (r * np.sin(th) ** 2)
    return E, dE


def tetrad_christoffel(r_s, x):
    """``Gamma^k_ij`` of the static tetrad: ``nabla_{U_i} U_j = Gamma^k_ij U_k``."""
    E, dE = schwarzschild_tetrad(r_s, x)
    Ei = np.linalg.inv(E)
    Gh = schwarzschild_christoffel(r_s, x)
    out = np.zeros((4, 4, 4))
    for k in range(4):
        for i in range(4):
            for j in range(4):
                acc = 0.0
                for m in range(4):
                    for a in range(4):
                        for b in range(4):
                            acc += Ei[k, m] * Gh[m, a, b] * E[a, i] * E[b, j]
                    for n in range(4):
                        acc += Ei[k, m] * E[n, i] * dE[n, m, j]
                out[k, i, j] = acc
    return out


def tetrad_structure_constants(r_s, x):
    """``c^k_ij`` from ``[U_i, U_j] = (U_i E_j - U_j E_i)`` expanded back in the tetrad."""
    E, dE = schwarzschild_tetrad(r_s, x)
    Ei = np.linalg.inv(E)
    c = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            vec = np.zeros(4)
            for m in range(4):
                for n in range(4):
                    vec[m] += E[n, i] * dE[n, m, j] - E[n, j] * dE[n, m, i]
            c[:, i, j] = Ei @ vec
    return c


def spinor_connection_commutator(Gamma, g_hi=ETA):
    """``A_i = 1/8 sum Gamma^r_im g^mn [gamma_r, gamma_n]`` (frames with constant gamma)."""
    A = np.zeros((4, 4, 4), dtype=complex)
    for i in range(4):
        Ai = np.zeros((4, 4), dtype=complex)
        for r in range(4):
            for m in range(4):
                for n in range(4):
                    w = Gamma[r, i, m] * g_hi[m, n]
                    if w:
                        Ai += w * (GAMMA[r] @ GAMMA[n] - GAMMA[n] @ GAMMA[r]) / 8
        A[:, i, :] = Ai
    return A


def schwarzschild_tetrad_riemann(r_s, r):
    """Static-frame Riemann components ``R^p_qij`` with ``R(U_i, U_j) U_q = R^p_qij U_p``.

    Built from the tidal eigenvalues and the vacuum relations between the
    time-space and space-space sectional curvatures.
    """
    R = np.zeros((4, 4, 4, 4))
    radial = r_s / r**3
    transverse = r_s / (2 * r**3)

    def put(p, q, val):
        # val = R_pqpq with all indices lowered
        for (a, b, s) in ((p, q, 1), (q, p, 1)):
            for (i, j, t) in ((a, b, 1), (b, a, -1)):
                R[a, b, i, j] = ETA[a, a] * val * s * t

    # geodesic deviation D^2 xi^a = -R^a_0b0 xi^b: radial stretching, transverse squeezing
    put(0, 1, radial)
    put(0, 2, -transverse)
    put(0, 3, -transverse)
    put(2, 3, -radial)
    put(1, 2, transverse)
    put(1, 3, transverse)
    return R


def kretschmann(r_s, r):
    return 12 * r_s**2 / r**6


def gamma_identity_loops(gamma, g_hi, Hm, d_lo):
    """Residual of the gamma contraction identity written with explicit loops."""
    d_hi = np.linalg.inv(d_lo)
    worst = 0.0
    for d in range(4):
        for b in range(4):
            for a in range(4):
                for c in range(4):
                    lhs = sum(gamma[m, d, b] * g_hi[m, n] * gamma[n, a, c] for m in range(4) for n in range(4))
                    rhs = (float(d == c) * float(a == b) - Hm[d, c] * Hm[a, b] + d_hi[d, a] * d_lo[b, c]
                           - sum(Hm[d, r] * d_hi[r, a] * d_lo[b, s] * Hm[s, c] for r in range(4) for s in range(4)))
                    worst = max(worst, abs(lhs - rhs))
    return worst


FROZEN_POINT = [0.2, 3.0, 1.1, 0.4]
FROZEN_RS = 1.0


def freeze() -> dict:
    x = np.array(FROZEN_POINT)
    G = tetrad_christoffel(FROZEN_RS, x)
    A = spinor_connection_commutator(G)
    return {
        "point": FROZEN_POINT,
        "r_s": FROZEN_RS,
        "christoffel_coordinate": schwarzschild_christoffel(FROZEN_RS, x).tolist(),
        "christoffel_tetrad": G.tolist(),
        "structure_constants_tetrad": tetrad_structure_constants(FROZEN_RS, x).tolist(),
        "spin_connection_re": A.real.tolist(),
        "spin_connection_im": A.imag.tolist(),
        "riemann_tetrad": schwarzschild_tetrad_riemann(FROZEN_RS, x[1]).tolist(),
        "kretschmann": kretschmann(FROZEN_RS, x[1]),
    }


def load_frozen() -> dict:
    with open(FROZEN_PATH) as fh:
        return json.load(fh)


if __name__ == "__main__":
    FROZEN_PATH.parent.mkdir(exist_ok=True)
    with open(FROZEN_PATH, "w") as fh:
        json.dump(freeze(), fh, indent=1)
    print(f"wrote {FROZEN_PATH}")
