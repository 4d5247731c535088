"""Closed-form whirl-rectifying curves and their cone/sphere geometry.

The family is parametrized by constants a != 0, b, lam != 0 and lives on one
sheet of the two-leaf hyperboloid z^2 - (x^2 + y^2)/lam^2 = 1/a^2.  It is a
geodesic of the cone X(t, u) = u * w(t) over a unit-speed spherical curve w,
and extends continuously through the a*s + b = 0 seam (curve extension on the
whole line, sphere-curve extension on the open angular interval).

Numerical note: every closed form contains arctanh(x) with
x = sqrt((1+lam^2)/(1+h^2+lam^2)) -> 1 as h -> 0.  Since 1 - x^2 = h^2/G
exactly, arctanh is evaluated in the cancellation-free log form
ln(1+x) + ln(sqrt(G)/|h|).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, FrameError
from .frenet import FrenetApparatus, Vec3, frenet_at
from .numerics import derivative

HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class RectifyingSpec:
    """Constants of one whirl-rectifying curve.

    ``branch`` selects the half line a*s + b > 0 (+1, the default) or < 0
    (-1).  ``d_shift`` is the angular offset of the sphere-curve
    parametrization.  The branch with sign(a*s+b) = sign(a*lam) is the one
    whose torsion-to-curvature ratio is exactly a*s + b and whose whirl
    constant is exactly lam.
    """

    a: float
    b: float
    lam: float
    d_shift: float = 0.0
    branch: int = 1

    def __post_init__(self):
        if abs(self.a) < 1e-12:
            raise ValueError("a must be nonzero")
        if abs(self.lam) < 1e-12:
            raise ValueError("lam must be nonzero")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")

    def consistent_branch(self) -> int:
        """Branch on which chen_ratio_fit recovers (a, b) and the whirl fit lam."""
        return 1 if self.a * self.lam > 0 else -1


@dataclass
class ConePoint:
    """Cone-surface coordinates: angular parameter t and radial scale u > 0."""

    t: float
    u: float

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError("u must be positive")


def _arctanh_term(h2, lam: float):
    """arctanh(sqrt((1+lam^2)/(1+h^2+lam^2))) via the stable log form."""
    G = 1.0 + h2 + lam * lam
    x = np.sqrt((1.0 + lam * lam) / G)
    return np.log1p(x) + 0.5 * np.log(G) - 0.5 * np.log(h2)


def _check_branch(spec: RectifyingSpec, h, what: str):
    h_arr = np.atleast_1d(np.asarray(h, dtype=float))
    if np.any(h_arr == 0.0):
        raise DomainError(f"{what} undefined at a*s+b = 0: use omega extension")
    if np.any(np.sign(h_arr) != spec.branch):
        bad = h_arr[np.sign(h_arr) != spec.branch][0]
        raise DomainError(
            f"branch mismatch: a*s+b = {bad} has the wrong sign for branch {spec.branch:+d}")


def curve_point(spec: RectifyingSpec, s) -> Vec3:
    """Position of the whirl-rectifying curve (unit-speed parameter s)."""
    s = np.asarray(s, dtype=float)
    h = spec.a * s + spec.b
    _check_branch(spec, h, "curve")
    lam = spec.lam
    root = np.sqrt(1.0 + lam * lam)
    A = _arctanh_term(h * h, lam) / lam
    G = 1.0 + h * h + lam * lam
    x = (h / spec.a) * (lam / root) * np.cos(A)
    y = -(h / spec.a) * (lam / root) * np.sin(A)
    z = np.sqrt(G) / (spec.a * root)
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def curve_velocity(spec: RectifyingSpec, s) -> Vec3:
    """Analytic first derivative of :func:`curve_point` (a unit vector)."""
    s = np.asarray(s, dtype=float)
    h = spec.a * s + spec.b
    _check_branch(spec, h, "curve")
    lam = spec.lam
    root = np.sqrt(1.0 + lam * lam)
    A = _arctanh_term(h * h, lam) / lam
    sg = np.sqrt(1.0 + h * h + lam * lam)
    x = (lam / root) * np.cos(A) + np.sin(A) / sg
    y = -(lam / root) * np.sin(A) + np.cos(A) / sg
    z = h / (sg * root)
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def hyperboloid_residual(p, lam: float, a: float):
    """z^2 - (x^2 + y^2)/lam^2 - 1/a^2; zero on the membership sheet."""
    p = np.asarray(p, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    out = z * z - (x * x + y * y) / (lam * lam) - 1.0 / (a * a)
    return out if out.ndim else float(out)


def _sphere_interval(spec: RectifyingSpec):
    if spec.branch == 1:
        return -spec.d_shift, -spec.d_shift + HALF_PI
    return -spec.d_shift - HALF_PI, -spec.d_shift


def sphere_point(spec: RectifyingSpec, t) -> Vec3:
    """Unit-speed curve on the unit sphere whose cone carries the curve."""
    t = np.asarray(t, dtype=float)
    if np.any(t == -spec.d_shift):
        raise DomainError("sphere curve undefined at t = -d: use upsilon extension")
    lo, hi = _sphere_interval(spec)
    if np.any(t <= lo) or np.any(t >= hi):
        raise DomainError(
            f"t outside the open branch interval ({lo}, {hi})")
    return _sphere_formula(spec, t)


def _sphere_formula(spec: RectifyingSpec, t):
    lam = spec.lam
    ang = spec.d_shift + t
    tn = np.tan(ang)
    root = np.sqrt(1.0 + lam * lam)
    G = 1.0 + tn * tn + lam * lam
    A = _arctanh_term(tn * tn, lam) / lam
    sa = 1.0 if spec.a > 0 else -1.0
    x = sa * (lam / root) * np.sin(ang) * np.cos(A)
    y = -sa * (lam / root) * np.sin(ang) * np.sin(A)
    z = sa * np.cos(ang) * np.sqrt(G) / root
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def cone_coords(spec: RectifyingSpec, s) -> ConePoint:
    """Change of variables s -> (t, u) with u * w(t) = curve_point(s)."""
    h = spec.a * float(s) + spec.b
    t = -spec.d_shift + np.arctan(h)
    u = np.sqrt(1.0 + h * h) / abs(spec.a)
    return ConePoint(t=float(t), u=float(u))


def cone_point(spec: RectifyingSpec, cp: ConePoint) -> Vec3:
    """Point u * w(t) of the cone surface."""
    if not cp.u > 0:
        raise ValueError("u must be positive")
    return cp.u * sphere_point(spec, cp.t)


def geodesic_residual(spec: RectifyingSpec, s) -> float:
    """Norm of N x n, the unit cone normal against the unit curve normal.

    Zero exactly when the curve normal is parallel to the surface normal,
    i.e. when the curve runs along a geodesic of the cone.
    """
    cp = cone_coords(spec, s)
    if cp.u < 1e-12:
        raise DomainError("degenerate surface normal: u -> 0")
    w = sphere_point(spec, cp.t)
    wp = derivative(lambda q: _sphere_formula(spec, np.asarray(q)), cp.t, 1)
    normal = np.cross(wp, w)
    nn = np.linalg.norm(normal)
    if nn < 1e-12:
        raise DomainError("degenerate surface normal")
    normal /= nn
    frame = frenet_at(lambda u: curve_point(spec, u), float(s),
                      deriv=lambda u: curve_velocity(spec, u))
    return float(np.linalg.norm(np.cross(normal, frame.n)))


@dataclass
class ChenFit:
    """Least-squares line fit of torsion/curvature against arc length."""

    c1: float
    c2: float
    rms: float
    is_rectifying: bool
    note: str = ""


def chen_ratio_fit(curve: Union[Callable, Sequence[FrenetApparatus]],
                   s_grid=None, deriv: Optional[Callable] = None,
                   rms_tol: float = 1e-3,
                   slope_floor: float = 1e-3) -> ChenFit:
    """Fit tau/kappa = c1*s + c2 over the grid.

    The rectifying-compatible verdict requires the fit to be tight
    (rms < rms_tol) and genuinely nonconstant (|c1| > slope_floor).
    """
    if s_grid is None and isinstance(curve, (list, tuple)):
        frames = list(curve)
    else:
        s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
        frames = [frenet_at(curve, float(si), deriv=deriv,
                            strict_unit_speed=False) for si in s_grid]
    if len(frames) < 3:
        raise FrameError("need at least 3 frames for a line fit")
    svals = np.array([f.s for f in frames])
    ratios = np.array([f.tau / f.kappa for f in frames])
    design = np.column_stack([svals, np.ones_like(svals)])
    coef, *_ = np.linalg.lstsq(design, ratios, rcond=None)
    resid = ratios - design @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    c1, c2 = float(coef[0]), float(coef[1])
    ok = rms < rms_tol and abs(c1) > slope_floor
    note = "" if ok else (
        "ratio is constant" if abs(c1) <= slope_floor else "ratio is not linear")
    return ChenFit(c1=c1, c2=c2, rms=rms, is_rectifying=ok, note=note)


# -- continuous extensions --------------------------------------------------

def extended_point(spec: RectifyingSpec, s) -> Vec3:
    """Whole-line continuous extension of the curve (branch auto-selected).

    Off the seam it equals curve_point on the corresponding branch; at
    s = -b/a it takes the value (0, 0, 1/a).
    """
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    h = spec.a * s_arr + spec.b
    out = np.empty(s_arr.shape + (3,))
    seam = h == 0.0
    out[seam] = np.array([0.0, 0.0, 1.0 / spec.a])
    if np.any(~seam):
        hh = h[~seam]
        lam = spec.lam
        root = np.sqrt(1.0 + lam * lam)
        A = _arctanh_term(hh * hh, lam) / lam
        G = 1.0 + hh * hh + lam * lam
        out[~seam, 0] = (hh / spec.a) * (lam / root) * np.cos(A)
        out[~seam, 1] = -(hh / spec.a) * (lam / root) * np.sin(A)
        out[~seam, 2] = np.sqrt(G) / (spec.a * root)
    return out[0] if scalar else out


def extended_sphere_point(spec: RectifyingSpec, t) -> Vec3:
    """Extension of the sphere curve across t = -d on the open interval
    (-d - pi/2, -d + pi/2); the seam value is (0, 0, sign(a))."""
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    lo = -spec.d_shift - HALF_PI
    hi = -spec.d_shift + HALF_PI
    if np.any(t_arr <= lo) or np.any(t_arr >= hi):
        raise DomainError(f"t outside the open interval ({lo}, {hi})")
    out = np.empty(t_arr.shape + (3,))
    seam = t_arr == -spec.d_shift
    sa = 1.0 if spec.a > 0 else -1.0
    out[seam] = np.array([0.0, 0.0, sa])
    if np.any(~seam):
        out[~seam] = _sphere_formula(spec, t_arr[~seam])
    return out[0] if scalar else out
