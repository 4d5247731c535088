"""Frenet-Serret apparatus of a parametric space curve.

Frames come from the difference stencils in :mod:`whirlcurves.numerics`; a
callable returning the analytic first derivative can be supplied instead for
extra accuracy.  Strict unit-speed mode (the default) refuses curves that are
not arc-length parametrized, since every closed form in this library assumes
arc length.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import FrameError
from .numerics import derivative
from .traceio import CurveTrace

Vec3 = np.ndarray

FRAME_TOL = 1e-9
KAPPA_FLOOR = 1e-9


def vec3(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


@dataclass
class FrenetApparatus:
    """Frame and scalar invariants of a curve at one arc-length value.

    t, n, b are orthonormal with b = t x n (checked to 1e-9 on construction)
    and kappa is strictly positive.
    """

    s: float
    t: Vec3
    n: Vec3
    b: Vec3
    kappa: float
    tau: float

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.n = np.asarray(self.n, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        for name, v in (("t", self.t), ("n", self.n), ("b", self.b)):
            if abs(np.linalg.norm(v) - 1.0) > FRAME_TOL:
                raise FrameError(f"{name} is not a unit vector")
        if (abs(self.t @ self.n) > FRAME_TOL or abs(self.t @ self.b) > FRAME_TOL
                or abs(self.n @ self.b) > FRAME_TOL):
            raise FrameError("frame is not orthogonal")
        if np.linalg.norm(self.b - np.cross(self.t, self.n)) > FRAME_TOL:
            raise FrameError("b != t x n")
        if not self.kappa > 0:
            raise FrameError("kappa must be positive")


def frenet_at(curve: Callable, s: float, deriv: Optional[Callable] = None,
              strict_unit_speed: bool = True,
              unit_speed_tol: float = 1e-6) -> FrenetApparatus:
    """Frenet frame, curvature and torsion of ``curve`` at arc length ``s``.

    Parameters
    ----------
    curve : callable s -> (3,) position.
    deriv : optional callable s -> (3,) analytic first derivative; when given,
        higher derivatives are taken from it instead of from positions.
    strict_unit_speed : reject curves with | |curve'| - 1 | > unit_speed_tol.
        With strict mode off, the general-speed curvature/torsion formulas
        |a' x a''|/|a'|^3 and (a' x a'' . a''')/|a' x a''|^2 are used.
    """
    if deriv is not None:
        d1 = np.asarray(deriv(s), dtype=float)
        d2 = derivative(deriv, s, 1)
        d3 = derivative(deriv, s, 2)
    else:
        d1 = derivative(curve, s, 1)
        d2 = derivative(curve, s, 2)
        d3 = derivative(curve, s, 3)
    speed = float(np.linalg.norm(d1))
    if speed == 0.0:
        raise FrameError(f"undefined frame: zero velocity at s={s}")
    unit = abs(speed - 1.0) <= unit_speed_tol
    if strict_unit_speed and not unit:
        raise FrameError(
            f"not arc-length parametrized: | |curve'| - 1 | = {abs(speed - 1.0):.3e} at s={s}")

    t = d1 / speed
    if unit:
        kappa = float(np.linalg.norm(d2))
        if kappa < KAPPA_FLOOR:
            raise FrameError(f"undefined frame: vanishing curvature at s={s}")
        n = d2 / kappa
    else:
        cr = np.cross(d1, d2)
        kappa = float(np.linalg.norm(cr) / speed ** 3)
        if kappa < KAPPA_FLOOR:
            raise FrameError(f"undefined frame: vanishing curvature at s={s}")
        n = np.cross(cr, d1)
        n = n / np.linalg.norm(n)
    # re-orthogonalize against t so the typed invariants hold exactly
    n = n - (n @ t) * t
    n = n / np.linalg.norm(n)
    b = np.cross(t, n)
    cr = np.cross(d1, d2)
    crn2 = float(cr @ cr)
    if crn2 == 0.0:
        raise FrameError(f"undefined frame: vanishing curvature at s={s}")
    tau = float(cr @ d3) / crn2
    return FrenetApparatus(s=float(s), t=t, n=n, b=b, kappa=kappa, tau=tau)


def _sample_speeds(curve: Callable, s_grid: np.ndarray) -> np.ndarray:
    h = np.cbrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(s_grid))
    try:
        p_plus = np.asarray(curve(s_grid + h), dtype=float)
        p_minus = np.asarray(curve(s_grid - h), dtype=float)
        if p_plus.shape != (s_grid.size, 3):
            raise TypeError
    except (TypeError, ValueError, IndexError):
        p_plus = np.array([curve(si + hi) for si, hi in zip(s_grid, h)], dtype=float)
        p_minus = np.array([curve(si - hi) for si, hi in zip(s_grid, h)], dtype=float)
    d1 = (p_plus - p_minus) / (2.0 * h[:, None])
    return np.linalg.norm(d1, axis=1)


def unit_speed_residual(curve: Callable, s_grid) -> float:
    """max over the grid of | |curve'(s)| - 1 |."""
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    speeds = _sample_speeds(curve, s_grid)
    if not np.all(np.isfinite(speeds)):
        raise ValueError("curve sampling produced non-finite values")
    return float(np.max(np.abs(speeds - 1.0)))


def trace(curve: Callable, s_lo: float, s_hi: float, n: int,
          meta: Optional[dict] = None) -> CurveTrace:
    """Sample ``curve`` on a uniform n-point grid inclusive of both endpoints."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not s_lo < s_hi:
        raise ValueError("need s_lo < s_hi")
    grid = np.linspace(s_lo, s_hi, n)
    try:
        pts = np.asarray(curve(grid), dtype=float)
        if pts.shape != (n, 3):
            raise TypeError
    except (TypeError, ValueError, IndexError):
        pts = np.empty((n, 3))
        for i, si in enumerate(grid):
            pts[i] = np.asarray(curve(si), dtype=float)
    for i, si in enumerate(grid):
        if not np.all(np.isfinite(pts[i])):
            raise ValueError(f"curve evaluation failed at node s={si}")
    return CurveTrace(grid, pts, meta=dict(meta or {}))


def trace_frames(tr: CurveTrace, strict_unit_speed: bool = False,
                 unit_speed_tol: float = 1e-3):
    """Frenet frames at the interior nodes of a uniformly sampled trace.

    Uses fourth-order central stencils, so the three outermost samples on
    each side carry no frame.  Needs at least 8 samples.
    """
    s, p = tr.s, tr.points
    if len(tr) < 8:
        raise ValueError("insufficient samples: need at least 8 to frame a trace")
    dx = np.diff(s)
    if np.max(dx) - np.min(dx) > 1e-9 * np.max(dx):
        raise ValueError("trace_frames requires a uniform parameter grid")
    h = float(np.mean(dx))
    # fourth-order stencils on index i (3 <= i <= n-4)
    f = p
    d1 = (f[1:-5] - 8 * f[2:-4] + 8 * f[4:-2] - f[5:-1]) / (12 * h)
    d2 = (-f[1:-5] + 16 * f[2:-4] - 30 * f[3:-3] + 16 * f[4:-2] - f[5:-1]) / (12 * h * h)
    d3 = (f[:-6] - 8 * f[1:-5] + 13 * f[2:-4] - 13 * f[4:-2] + 8 * f[5:-1] - f[6:]) / (8 * h ** 3)
    frames = []
    for i in range(d1.shape[0]):
        v1, v2, v3 = d1[i], d2[i], d3[i]
        speed = float(np.linalg.norm(v1))
        if strict_unit_speed and abs(speed - 1.0) > unit_speed_tol:
            raise FrameError(f"not arc-length parametrized at s={s[i + 3]}")
        cr = np.cross(v1, v2)
        crn2 = float(cr @ cr)
        kappa = float(np.sqrt(crn2) / speed ** 3)
        if kappa < KAPPA_FLOOR or crn2 == 0.0:
            raise FrameError(f"undefined frame: vanishing curvature at s={s[i + 3]}")
        t = v1 / speed
        n = np.cross(cr, v1)
        n /= np.linalg.norm(n)
        n = n - (n @ t) * t
        n /= np.linalg.norm(n)
        b = np.cross(t, n)
        tau = float(cr @ v3) / crn2
        frames.append(FrenetApparatus(s=float(s[i + 3]), t=t, n=n, b=b,
                                      kappa=kappa, tau=tau))
    return frames
