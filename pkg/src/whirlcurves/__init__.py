"""Whirl curves: synthesis, verification and closed-form rectifying geometry.

A whirl curve is a unit-speed space curve with positive curvature and nonzero
torsion whose normal makes a fixed-proportionality angle pattern with some
constant axis: <n, d> = lam * <t, d>.  This package synthesizes such curves
from an arbitrary positive curvature function, verifies the defining property
and its intrinsic curvature/torsion equation on arbitrary curves, and
implements the closed-form whirl-rectifying family together with its
hyperboloid/cone/sphere geometry and continuous extensions.
"""

from .errors import DomainError, FrameError, QuadratureError
from .numerics import (EPS, QuadratureResult, ScalarFn, SmoothCumulative,
                       as_scalar_fn, cumulative_integral, derivative,
                       gauss_legendre, integrate)
from .traceio import (CurveTrace, read_csv, read_json, read_trace, to_csv_text,
                    write_csv, write_json)
from .frenet import (FrenetApparatus, Vec3, frenet_at, trace, trace_frames,
                     unit_speed_residual, vec3)
from .whirl import (AxisReport, WhirlFit, fit_lambda_axis, intrinsic_residual,
                    intrinsic_residual_grid, proportionality_residual,
                    ratio_derivative, verify_whirl, whirl_axis)
from .synthesis import (SphericalTangent, WhirlCurve, WhirlSpec, axis_bound,
                        axis_component,
                        azimuth, azimuth_rate, bound_from_ratio, cos_polar,
                        exponent, intrinsic_residual_max, kappa_constant,
                        kappa_linear_ratio, kappa_polynomial, ratio_rate, ratio_step,
                        synthesize, torsion_from_curvature)
from .rectifying import (ChenFit, ConePoint, RectifyingSpec, chen_ratio_fit,
                         cone_coords, cone_point, curve_point, curve_velocity,
                         extended_point, extended_sphere_point,
                         geodesic_residual, hyperboloid_residual, sphere_point)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
