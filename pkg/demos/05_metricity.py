# Covariant derivatives of the basic fields vanish; conjugation commutes with the derivative.
import numpy as np

from spinconn import (SpinTensorType, basic_fields, covariant_derivative, levi_civita,
                      make_builtin_spacetime, metricity_report, orthonormal_tetrad, random_field,
                      random_gauge, spinor_frame_data, tau, tau_array)

poly = make_builtin_spacetime("diag_poly")
E = orthonormal_tetrad(poly)
data = spinor_frame_data(gauge=random_gauge(seed=2, box=poly.box))
x = np.random.default_rng(4).uniform(-0.8, 0.8, size=(30, 4))

rep = metricity_report(poly, E, data, x)
for name, val in rep.residuals.items():
    print(f"nabla {name:<10} {val:.2e}")
print("reality defect:", rep.reality_defect)

# the gamma field as a type (1,1|0,0|0,1) tensor; nabla adds a leading lower index
gamma = basic_fields(poly, E, data)["gamma"]
print("gamma type", gamma.type, "-> nabla gamma shape", covariant_derivative(gamma, poly, E, data, x[:1]).shape)

# a generic field is not parallel, but tau and nabla still commute
t = SpinTensorType(r=1, sb=1, q=1)
T = random_field(t, seed=8, box=poly.box)
conn = levi_civita(poly, E, data, x)
dT = covariant_derivative(T, poly, E, data, x, connection=conn)
print("|nabla T| ~", np.abs(dT).max())
diff = tau_array(dT, t, lead=1) - covariant_derivative(tau(T), poly, E, data, x, connection=conn)
print("tau nabla - nabla tau:", np.abs(diff).max())
