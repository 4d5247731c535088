"""Synthesis of whirl curves from an arbitrary positive curvature function.

Given kappa(s) > 0, a nonzero constant lam, an offset ``bound`` and a base
point s0, the construction produces a unit-speed curve whose whirl axis is
(0, 0, +-1).  Everything is driven by the exponent

    E(s) = lam * int_{s0}^{s} kappa - bound,

valid while E(s) < 0.  Torsion, the spherical tangent angles and the closed
azimuth form all follow from E; positions come from quadrature of the
closed-form tangent (no Frenet-system integration, hence no frame drift).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .numerics import ScalarFn, SmoothCumulative, as_scalar_fn
from .traceio import CurveTrace

EXPONENT_CEIL = -1e-12   # requests with exponent above this are rejected

# Two congruent tangent arrangements: "spherical" keeps the explicit
# (polar, azimuth) angles; "combined" folds the arctan phase into the
# cos/sin coefficients.  They differ by a rotation about the vertical axis
# (a half turn when lam < 0), so traces agree up to a rigid motion.
_FORMS = ("spherical", "combined")


@dataclass(frozen=True)
class WhirlSpec:
    """Parameters defining one synthesized whirl curve.

    ``kappa`` must be positive on its domain and is expected to accept numpy
    arrays.  ``bound`` caps lam * int kappa; use :func:`bound_from_ratio` to
    derive it from an initial torsion-to-curvature ratio.  The two sign
    switches select among the four congruent branches of the construction.
    """

    kappa: ScalarFn
    lam: float
    bound: float
    s0: float = 0.0
    z_sign: int = 1
    tau_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_scalar_fn(self.kappa))
        if abs(self.lam) < 1e-12:
            raise ValueError("lam must be nonzero")
        if self.z_sign not in (1, -1) or self.tau_sign not in (1, -1):
            raise ValueError("z_sign and tau_sign must be +1 or -1")


@dataclass(frozen=True)
class SphericalTangent:
    """Unit tangent in spherical coordinates: polar angle in (0, pi) plus
    azimuth, so t = (sin(phi) cos(theta), sin(phi) sin(theta), cos(phi))."""

    phi: float
    theta: float

    def __post_init__(self):
        if not 0.0 < self.phi < np.pi:
            raise ValueError("polar angle must lie in (0, pi)")

    def vector(self) -> np.ndarray:
        sp = np.sin(self.phi)
        return np.array([sp * np.cos(self.theta), sp * np.sin(self.theta),
                         np.cos(self.phi)])


def bound_from_ratio(h0: float, lam: float) -> float:
    """Offset that anchors the construction to ratio tau/kappa = h0 at s0.

    Equals -ln[(|h0|/sqrt(1+lam^2)) / sqrt(1 + h0^2/(1+lam^2))], always > 0.
    """
    if h0 == 0.0:
        raise ValueError("initial ratio h0 must be nonzero")
    lam2 = lam * lam
    return 0.5 * np.log(1.0 + lam2 + h0 * h0) - np.log(abs(h0))


def axis_bound(bound: float, lam: float) -> float:
    """Companion constant C with (1+lam^2) e^(-2C) = e^(-2*bound)."""
    return bound + 0.5 * np.log(1.0 + lam * lam)


@lru_cache(maxsize=256)
def _kappa_cumulative(spec: WhirlSpec) -> SmoothCumulative:
    return SmoothCumulative(spec.kappa, anchor=spec.s0)


class WhirlCurve:
    """Evaluator for one synthesized whirl curve.

    Callable for positions; all methods accept floats or numpy arrays.
    Positions integrate the closed-form tangent from ``origin`` (where the
    position is the zero vector) on cached fixed-node panels, so they are
    smooth enough for difference stencils.
    """

    def __init__(self, spec: WhirlSpec, origin: float = None,
                 form: str = "spherical"):
        if form not in _FORMS:
            raise ValueError(f"form must be one of {_FORMS}")
        self.spec = spec
        self.form = form
        self.origin = spec.s0 if origin is None else float(origin)
        self._kcum = _kappa_cumulative(spec)
        self._pos = SmoothCumulative(self.tangent, anchor=self.origin)

    # -- scalar machinery -------------------------------------------------

    def exponent(self, s):
        """lam * int_{s0}^{s} kappa - bound; must stay below zero."""
        val = self.spec.lam * self._kcum(s) - self.spec.bound
        if np.any(np.asarray(val) > EXPONENT_CEIL):
            bad = np.atleast_1d(np.asarray(s))[
                np.atleast_1d(np.asarray(val) > EXPONENT_CEIL)][0]
            raise DomainError(
                f"domain bound lam*int(kappa) < bound violated at s={bad}")
        return val

    def _qw(self, s):
        e = self.exponent(s)
        q = np.exp(e)
        w = np.sqrt(-np.expm1(2.0 * e))
        return e, q, w

    def torsion(self, s):
        """Torsion of the synthesized curve (sign = tau_sign)."""
        _, q, w = self._qw(s)
        lam = self.spec.lam
        return (self.spec.tau_sign * np.sqrt(1.0 + lam * lam)
                * self.spec.kappa(s) * q / w)

    def cos_polar(self, s):
        """z-component of the unit tangent, z_sign * e^E / sqrt(1+lam^2)."""
        _, q, _ = self._qw(s)
        return self.spec.z_sign * q / np.sqrt(1.0 + self.spec.lam ** 2)

    def axis_component(self, s):
        """Inner product of the tangent with the axis, +-e^(lam*int kappa - C)."""
        lam = self.spec.lam
        c = axis_bound(self.spec.bound, lam)
        return self.spec.z_sign * np.exp(lam * self._kcum(s) - c)

    def azimuth(self, s):
        """Closed azimuth form arctan(w/lam) - arctanh(w)/lam, w = sqrt(1-e^{2E}).

        arctanh(w) is evaluated as log1p(w) - E, which is exact in the
        w -> 1 limit where the naive form loses all precision.
        """
        e, _, w = self._qw(s)
        lam = self.spec.lam
        return np.arctan(w / lam) - (np.log1p(w) - e) / lam

    def azimuth_rate(self, s):
        """Derivative of the closed azimuth form (positive for kappa > 0)."""
        e, _, w = self._qw(s)
        lam2 = self.spec.lam ** 2
        return (1.0 + lam2) * self.spec.kappa(s) * w / (1.0 + lam2 - np.exp(2.0 * e))

    def spherical_tangent(self, s: float) -> SphericalTangent:
        """Tangent direction at one point as (polar, azimuth) angles."""
        theta = (self.spec.z_sign * self.spec.tau_sign
                 * float(self.azimuth(s)))
        return SphericalTangent(phi=float(np.arccos(self.cos_polar(s))),
                                theta=theta)

    # -- curve ------------------------------------------------------------

    def tangent(self, s):
        """Closed-form unit tangent; rows of shape (3,) for array input."""
        e, q, w = self._qw(s)
        lam = self.spec.lam
        root = np.sqrt(1.0 + lam * lam)
        cphi = self.spec.z_sign * q / root
        sphi = np.sqrt(1.0 - (q * q) / (1.0 + lam * lam))
        if self.form == "spherical":
            theta = self.spec.z_sign * self.spec.tau_sign * (
                np.arctan(w / lam) - (np.log1p(w) - e) / lam)
            x = sphi * np.cos(theta)
            y = sphi * np.sin(theta)
        else:
            psi = (np.log1p(w) - e) / lam
            x = (lam * np.cos(psi) + w * np.sin(psi)) / root
            y = (w * np.cos(psi) - lam * np.sin(psi)) / root
            if self.spec.z_sign * self.spec.tau_sign < 0:
                y = -y
        return np.stack(np.broadcast_arrays(x, y, cphi), axis=-1)

    def position(self, s):
        return self._pos(s)

    __call__ = position


# -- module-level operations over a spec ----------------------------------

@lru_cache(maxsize=256)
def _curve(spec: WhirlSpec) -> WhirlCurve:
    return WhirlCurve(spec)


def exponent(spec: WhirlSpec, s):
    return _curve(spec).exponent(s)


def torsion_from_curvature(spec: WhirlSpec, s):
    return _curve(spec).torsion(s)


def cos_polar(spec: WhirlSpec, s):
    return _curve(spec).cos_polar(s)


def axis_component(spec: WhirlSpec, s):
    return _curve(spec).axis_component(s)


def azimuth(spec: WhirlSpec, s):
    return _curve(spec).azimuth(s)


def azimuth_rate(spec: WhirlSpec, s):
    return _curve(spec).azimuth_rate(s)


def synthesize(spec: WhirlSpec, s_lo: float, s_hi: float, n: int,
               form: str = "spherical") -> CurveTrace:
    """Sample the synthesized curve on a uniform n-point grid.

    The position integration constant is chosen so the trace starts at the
    origin.  Raises DomainError when the exponent bound is violated anywhere
    on [s_lo, s_hi] and ValueError when kappa's domain does not cover the
    hull of the request and s0.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not s_lo < s_hi:
        raise ValueError("need s_lo < s_hi")
    hull_lo = min(s_lo, spec.s0)
    hull_hi = max(s_hi, spec.s0)
    if not spec.kappa.contains(hull_lo, hull_hi):
        raise ValueError(
            f"kappa domain {spec.kappa.domain} does not cover [{hull_lo}, {hull_hi}]")
    curve = WhirlCurve(spec, origin=s_lo, form=form)
    # the exponent is monotone in int(kappa); checking both ends guards the window
    curve.exponent(np.array([s_lo, s_hi]))
    grid = np.linspace(s_lo, s_hi, n)
    pts = curve.position(grid)
    meta = {
        "param": "s",
        "kind": "whirl_synth",
        "form": form,
        "lam": float(spec.lam),
        "bound": float(spec.bound),
        "s0": float(spec.s0),
        "z_sign": int(spec.z_sign),
        "tau_sign": int(spec.tau_sign),
    }
    return CurveTrace(grid, pts, meta=meta)


# -- curvature families ----------------------------------------------------

def kappa_constant(value: float,
                   domain=(-np.inf, np.inf)) -> ScalarFn:
    """Constant curvature function."""
    value = float(value)
    if not value > 0:
        raise ValueError("curvature must be positive")

    def ev(s):
        return np.full(np.shape(s), value) if np.ndim(s) else value

    return ScalarFn(ev, domain)


def kappa_linear_ratio(lam: float, a: float, b: float,
                       domain) -> ScalarFn:
    """Curvature whose whirl curve has torsion/curvature = a*s + b.

    kappa(s) = (1+lam^2) a / (lam (a s + b) (1 + lam^2 + (a s + b)^2)); the
    domain must keep it positive (sign(a s + b) = sign(a / lam)) and away
    from the a*s + b = 0 pole.
    """
    lam, a, b = float(lam), float(a), float(b)
    if a == 0.0 or abs(lam) < 1e-12:
        raise ValueError("need a != 0 and lam != 0")
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError("empty domain")

    def ev(s):
        h = a * np.asarray(s, dtype=float) + b
        return (1.0 + lam * lam) * a / (lam * h * (1.0 + lam * lam + h * h))

    for edge in (lo, hi):
        if not ev(edge) > 0:
            raise ValueError(
                "kappa is not positive on the requested domain "
                "(need sign(a*s+b) = sign(a/lam) throughout)")
    if (a * lo + b) * (a * hi + b) <= 0:
        raise ValueError("domain crosses the a*s + b = 0 pole")
    return ScalarFn(ev, (lo, hi))


def kappa_polynomial(coeffs, domain) -> ScalarFn:
    """Polynomial curvature sum(coeffs[k] * s^k); checked positive by sampling."""
    coeffs = [float(c) for c in coeffs]
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError("empty domain")

    def ev(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape)
        for c in reversed(coeffs):
            out = out * s + c
        return out if out.ndim else float(out)

    probe = ev(np.linspace(lo, hi, 1001))
    if np.min(probe) <= 0:
        raise ValueError("polynomial curvature is not positive on the domain")
    return ScalarFn(ev, (lo, hi))


# -- intrinsic-equation residual ---------------------------------------------

def ratio_step(spec: WhirlSpec, s):
    """Difference step for the torsion-to-curvature ratio at s.

    The ratio h grows at the local rate |lam|*kappa*(1+lam^2+h^2)/(1+lam^2),
    which steepens sharply toward the domain edge where the torsion blows
    up; the usual step is shrunk by that rate so a fourth-order stencil
    resolves the ratio derivative to ~1e-9 across the whole valid window,
    even at |lam| = 20.
    """
    curve = _curve(spec)
    s = np.asarray(s, dtype=float)
    kap = np.abs(np.asarray(spec.kappa(s), dtype=float))
    h = np.asarray(curve.torsion(s), dtype=float) / kap
    lam2 = spec.lam * spec.lam
    rate = np.maximum(1.0, np.abs(spec.lam) * kap
                      * (1.0 + lam2 + 3.0 * h * h) / (1.0 + lam2))
    return np.finfo(float).eps ** 0.2 * np.maximum(1.0, np.abs(s)) / rate


def ratio_rate(spec: WhirlSpec, s):
    """Fourth-order central-difference d(tau/kappa)/ds, per-point step.

    The probes extend 2 steps either side of s; keep s that far inside the
    valid exponent window.
    """
    curve = _curve(spec)
    s = np.asarray(s, dtype=float)
    h = ratio_step(spec, s)

    def ratio(x):
        return np.asarray(curve.torsion(x)) / np.asarray(spec.kappa(x))

    return (ratio(s - 2 * h) - 8.0 * ratio(s - h)
            + 8.0 * ratio(s + h) - ratio(s + 2 * h)) / (12.0 * h)


def intrinsic_residual_max(spec: WhirlSpec, s_lo: float, s_hi: float,
                           n: int = 2049) -> float:
    """Max |intrinsic residual| over an n-node grid spanning [s_lo, s_hi].

    Nodes are kept two difference steps clear of the window ends so the
    ratio-derivative probes never leave the validated window.
    """
    from .whirl import intrinsic_residual
    margin = 2.0 * float(np.max(ratio_step(spec, np.array([s_lo, s_hi]))))
    grid = np.linspace(s_lo + margin, s_hi - margin, n)
    curve = _curve(spec)
    kv = np.asarray(spec.kappa(grid), dtype=float)
    tv = np.asarray(curve.torsion(grid), dtype=float)
    resid = intrinsic_residual(kv, tv, ratio_rate(spec, grid), spec.lam)
    return float(np.max(np.abs(resid)))
