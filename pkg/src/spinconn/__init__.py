"""Metric connections on the bundle of Dirac spinors, evaluated numerically in arbitrary frames."""

__version__ = "0.1.0"

from .connection import (VARIANTS, ConnectionCoefficients, christoffel_frame, christoffel_holonomic,
                         conjugate_connection, levi_civita, spin_connection_general,
                         spin_connection_special, torsion_defect)
from .covariant import (MetricityReport, SpinTensorField, SpinTensorType, basic_fields,
                        covariant_derivative, metric_field, metricity_report, random_field, tau,
                        tau_array)
from .curvature import (CurvatureData, curvature_data, curvature_relation_residual, riemann_frame,
                        spinor_curvature, spinor_curvature_from_riemann)
from .errors import (ConfigError, DegenerateFrame, DomainError, InconsistentAlgebra, InvalidParam,
                     NotInvolutive, SingularGauge, SingularMetric, SpinConnError, UnknownSpacetime)
from .frames import (FrameField, coordinate_frame, custom_frame, frame_derivative,
                     frame_metric_components, orthonormal_tetrad, structure_constants)
from .geometry import (DEFAULT_SCHEME, MINKOWSKI, DerivativeScheme, SpacetimeModel,
                       directional_derivative, inverse_metric, make_builtin_spacetime)
from .spinor_algebra import (GaugeField, SpinorAlgebraConstants, SpinorFrameData,
                             apply_spinor_gauge, canonical_constants, check_gamma_identity,
                             chirality_derivative, chirality_projectors, chirality_split_residuals, commutation_residuals,
                             constant_gauge, decorated_gamma, decorated_metric, random_gauge,
                             spinor_frame_data)
