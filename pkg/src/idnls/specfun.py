"""Complex special functions and unit-circle contour quadrature.

Everything here is a pure function: the gamma function for complex
arguments, principal-branch complex powers, adaptive quadrature along
arcs of the unit circle, and branch-tracked logarithms along such arcs.
These are the primitives behind every steepest-descent quantity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BranchCutError,
    DomainError,
    GammaPoleError,
    PoleOnPathError,
    QuadratureError,
)

TWO_PI = 2.0 * math.pi

# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient set).
# Relative accuracy is ~1e-15 on the moderate domain used here
# (|w| <= 10, |Im w| <= 10), comfortably below the 1e-12 contract.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def _lanczos_half_plane(w: complex) -> complex:
    # valid for Re w >= 0.5
    wm1 = w - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (wm1 + k)
    base = wm1 + _LANCZOS_G + 0.5
    return (
        math.sqrt(TWO_PI)
        * cmath.exp((wm1 + 0.5) * cmath.log(base) - base)
        * acc
    )


def gamma_complex(w: complex) -> complex:
    """Gamma function for complex ``w`` away from the non-positive integers.

    Lanczos rational approximation on Re w >= 0.5, reflection formula
    elsewhere. Raises :class:`GammaPoleError` within 1e-14 of a pole.
    """
    w = complex(w)
    if abs(w.imag) < 1e-14:
        k = round(w.real)
        if k <= 0 and abs(w - k) < 1e-14:
            raise GammaPoleError(f"gamma pole at non-positive integer {k}")
    if w.real >= 0.5:
        return _lanczos_half_plane(w)
    # reflection: Gamma(w) Gamma(1-w) = pi / sin(pi w)
    return math.pi / (cmath.sin(math.pi * w) * _lanczos_half_plane(1.0 - w))


def branched_power(base: complex, exponent: complex) -> complex:
    """Principal-branch power ``base**exponent`` cut along the negative reals.

    ``exp(exponent * Log base)`` with Im Log in (-pi, pi].  Integer
    exponents fall back to exact repeated multiplication (no cut).
    """
    base = complex(base)
    if base == 0:
        raise DomainError("branched_power: base must be nonzero")
    exponent = complex(exponent)
    if exponent.imag == 0.0 and exponent.real == round(exponent.real):
        return base ** int(round(exponent.real))
    if base.imag == 0.0 and base.real < 0.0:
        raise BranchCutError(
            "branched_power: base on the negative-real-axis cut"
        )
    return cmath.exp(exponent * cmath.log(base))


def wrap_angle(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    a = math.remainder(angle, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class ArcSpec:
    """A minor arc of the unit circle, traversed from ``start_angle``.

    ``end_angle`` is stored so that ``end_angle - start_angle`` is the
    signed sweep, reduced to (-pi, pi); the sign fixes the direction
    (positive = counterclockwise).  Semicircles and full turns are
    rejected: only the shorter arc between two distinct points is valid.
    """

    start_angle: float
    end_angle: float
    tolerance: float = 1e-10

    def __post_init__(self) -> None:
        sweep = wrap_angle(self.end_angle - self.start_angle)
        if not 0.0 < abs(sweep) < math.pi:
            raise DomainError(
                f"ArcSpec: sweep {sweep:.6g} is not a minor arc"
            )
        object.__setattr__(self, "end_angle", self.start_angle + sweep)

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle


def minor_arc(z_from: complex, z_to: complex, tolerance: float = 1e-10) -> ArcSpec:
    """ArcSpec for the shorter unit-circle arc joining two circle points."""
    return ArcSpec(cmath.phase(z_from), cmath.phase(z_to), tolerance)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)
_MAX_DEPTH = 30


def _gl_panel(g: Callable[[float], complex], a: float, b: float) -> complex:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    total = 0.0 + 0.0j
    for x, w in zip(_GL_NODES, _GL_WEIGHTS):
        total += w * g(mid + half * x)
    return half * total


def _refine(g, a, b, whole, tol, depth, streak=0):
    # accept a panel only after the halved estimate agrees with its parent
    # at two consecutive depths: a single agreement can be a coincidence
    # for non-smooth integrands (the estimator has zero crossings)
    mid = 0.5 * (a + b)
    left = _gl_panel(g, a, mid)
    right = _gl_panel(g, mid, b)
    agreed = abs(left + right - whole) <= tol
    if agreed and streak >= 1:
        return left + right
    if depth >= _MAX_DEPTH:
        raise QuadratureError(
            f"arc quadrature did not converge within depth {_MAX_DEPTH}"
        )
    half_tol = 0.5 * tol
    next_streak = 1 if agreed else 0
    return _refine(g, a, mid, left, half_tol, depth + 1, next_streak) + _refine(
        g, mid, b, right, half_tol, depth + 1, next_streak
    )


def arc_integral(f: Callable[[complex], complex], arc: ArcSpec) -> complex:
    """Integral of ``f(tau) dtau`` along the arc, tau = exp(i theta).

    Adaptive composite Gauss-Legendre on the angle parameter with
    interval halving; the integrand must be continuous on the closed
    arc (removable endpoint singularities are the caller's job).
    """

    def g(theta: float) -> complex:
        tau = cmath.exp(1j * theta)
        return f(tau) * 1j * tau

    return _refine(
        g,
        arc.start_angle,
        arc.end_angle,
        _gl_panel(g, arc.start_angle, arc.end_angle),
        arc.tolerance,
        0,
    )


_MAX_LOG_STEP = 0.25 * math.pi  # angular increment per branch-tracking step


def _log_step(pole: complex, th0: float, th1: float, depth: int = 0) -> complex:
    w0 = cmath.exp(1j * th0) - pole
    w1 = cmath.exp(1j * th1) - pole
    if abs(w0) < 1e-13 or abs(w1) < 1e-13:
        raise PoleOnPathError("log path passes through its pole")
    inc = cmath.log(w1 / w0)
    # with sweeps <= pi/4 the principal increment cannot alias unless it
    # reaches pi/2; halve in angle (points stay on the arc) until it is safe
    if abs(inc.imag) < 0.5 * math.pi:
        return inc
    if depth >= 60:
        raise PoleOnPathError("cannot track the branch: pole on the path")
    mid = 0.5 * (th0 + th1)
    return _log_step(pole, th0, mid, depth + 1) + _log_step(pole, mid, th1, depth + 1)


def path_continuous_log_ratio(
    pole: complex, start_angle: float, end_angle: float
) -> complex:
    """log(z_end - pole) - log(z_start - pole) continued along the arc.

    The arc is theta in [start_angle, end_angle] on the unit circle
    (any signed sweep, not only minor arcs); the branch of the
    logarithm varies continuously with theta.  Equals the integral of
    dtau/(tau - pole) along the path.
    """
    sweep = end_angle - start_angle
    if sweep == 0.0:
        return 0.0 + 0.0j
    n_steps = max(1, int(math.ceil(abs(sweep) / _MAX_LOG_STEP)))
    thetas = np.linspace(start_angle, end_angle, n_steps + 1)
    total = 0.0 + 0.0j
    for th0, th1 in zip(thetas[:-1], thetas[1:]):
        total += _log_step(pole, float(th0), float(th1))
    return total
