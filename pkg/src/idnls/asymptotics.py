"""Saddle-point quantities and the closed-form long-time leading term.

For fixed ratio v = n/t in (-2, 2) the oscillatory phase

    phi(z) = (1/2) i t (z - 1/z)^2 - n log z

has four unit-circle saddles S_1..S_4.  The leading behavior of the
lattice field is a sum of two decaying oscillations, one per saddle
S_1, S_2, with amplitudes and log-t phase corrections built from the
time-zero reflection coefficient r evaluated at and between the
saddles.  All quadratures run along minor arcs of the circle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    ConsistencyError,
    DegenerateError,
    DomainError,
    RegionError,
)
from .specfun import (
    ArcSpec,
    arc_integral,
    branched_power,
    gamma_complex,
    minor_arc,
    path_continuous_log_ratio,
)

import numpy as np

TWO_PI = 2.0 * math.pi
_T_FIRST = cmath.exp(-0.25j * math.pi)  # reference point for arcs, saddles 1-2
_T_SECOND = -_T_FIRST                   # its antipode, for saddles 3-4
_TWO_PI_LD = 2.0 * np.arccos(np.longdouble(-1.0))


def _unit_phase(*products: tuple[float, float]) -> complex:
    """exp(i * sum(a * b)) with the sum carried in extended precision.

    The oscillatory phases grow like n and t; accumulating them in
    80-bit arithmetic keeps the reduced angle accurate to ~1e-15 rad
    even for phases of order 1e4.
    """
    total = np.longdouble(0.0)
    for a, b in products:
        total += np.longdouble(a) * np.longdouble(b)
    reduced = float(np.mod(total, _TWO_PI_LD))
    return cmath.exp(1j * reduced)

# switch to the analytic endpoint limit this close to a removable point
_REMOVABLE_RADIUS = 1e-7
_FD_STEP = 1e-5  # radians, centered differences of r along the circle

CircleFn = Callable[[complex], complex]


@dataclass(frozen=True)
class RegionGuard:
    """Admissible-ratio guard: formulas require |v| <= 2 - v0."""

    v0: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 < self.v0 < 2.0:
            raise DomainError("RegionGuard.v0 must lie in (0, 2)")

    def check(self, v: float) -> None:
        if abs(v) > 2.0 - self.v0:
            raise RegionError(
                f"|n/t| = {abs(v):.6g} exceeds 2 - V0 = {2.0 - self.v0:.6g} "
                "(saddles coalesce as |n/t| -> 2)"
            )


def phase(z: complex, n: float, t: float) -> tuple[complex, complex, complex]:
    """Oscillatory phase and its first two z-derivatives (principal log)."""
    z = complex(z)
    if z == 0:
        raise DomainError("phase: z must be nonzero")
    iz = 1.0 / z
    w = z - iz
    val = 0.5j * t * w * w - n * cmath.log(z)
    d1 = 1j * t * w * (1.0 + iz * iz) - n * iz
    d2 = 1j * t * ((1.0 + iz * iz) ** 2 - 2.0 * iz ** 3 * w) + n * iz * iz
    return val, d1, d2


def saddle_points(
    v: float, guard: RegionGuard = RegionGuard()
) -> tuple[complex, tuple[complex, complex, complex, complex]]:
    """The unit-modulus constant A and the four saddles S_1..S_4 at ratio v."""
    guard.check(v)
    a = 0.5 * (math.sqrt(2.0 + v) - 1j * math.sqrt(2.0 - v))
    s1 = _T_FIRST * a
    s2 = _T_FIRST * a.conjugate()
    return a, (s1, s2, -s1, -s2)


def nu(r_at_saddle: complex) -> float:
    """Local exponent -log(1 - |r|^2) / (2 pi) >= 0."""
    m2 = abs(r_at_saddle) ** 2
    if m2 >= 1.0:
        raise DomainError("nu: |r| must be < 1")
    return -math.log1p(-m2) / TWO_PI


def _log_one_minus_r2(r: CircleFn, tau: complex) -> float:
    m2 = abs(r(tau)) ** 2
    if m2 >= 1.0:
        raise DomainError("|r| >= 1 on the circle")
    return math.log1p(-m2)


def _ref_point(j: int) -> complex:
    return _T_FIRST if j <= 2 else _T_SECOND


def chi_at_saddle(
    j: int,
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> complex:
    """Regularized log-ratio integral along the arc from the reference
    point to S_j; the integrand's removable endpoint value at tau = S_j
    is the tangential derivative of log(1 - |r|^2) there.
    """
    s_j = saddles[j - 1]
    l_j = _log_one_minus_r2(r, s_j)
    th_j = cmath.phase(s_j)
    lp = _log_one_minus_r2(r, cmath.exp(1j * (th_j + _FD_STEP)))
    lm = _log_one_minus_r2(r, cmath.exp(1j * (th_j - _FD_STEP)))
    endpoint = ((lp - lm) / (2.0 * _FD_STEP)) / (1j * s_j)

    def f(tau: complex) -> complex:
        if abs(tau - s_j) < _REMOVABLE_RADIUS:
            return endpoint
        return (_log_one_minus_r2(r, tau) - l_j) / (tau - s_j)

    arc = minor_arc(_ref_point(j), s_j, quad_tol)
    return arc_integral(f, arc) / (TWO_PI * 1j)


def delta0(
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> float:
    """Transmission-type constant exp(-(1/pi i) int_{S1}^{S2} log(1-|r|^2) dtau/tau).

    Real and >= 1 for valid r; a large imaginary residue signals a
    quadrature or branch fault.
    """
    s1, s2 = saddles[0], saddles[1]
    arc = minor_arc(s1, s2, quad_tol)
    integral = arc_integral(lambda tau: _log_one_minus_r2(r, tau) / tau, arc)
    value = cmath.exp(-integral / (math.pi * 1j))
    if abs(value.imag) > 1e-8:
        raise ConsistencyError(
            f"delta0 imaginary residue {value.imag:.3e} exceeds 1e-8"
        )
    return value.real


def delta_hat(
    j: int,
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> complex:
    """Off-saddle part of the transmission factor at S_j (j in {1, 2}).

    Two minor-arc integrals of log(1 - |r|^2)/(tau - S_j): one from the
    reference point to the opposite saddle S_{3-j} (sign (-1)^j), one
    along the antipodal arc from -S_1 to -S_2.
    """
    if j not in (1, 2):
        raise DomainError("delta_hat: j must be 1 or 2")
    s_j = saddles[j - 1]

    def f(tau: complex) -> complex:
        return _log_one_minus_r2(r, tau) / (tau - s_j)

    i_a = arc_integral(f, minor_arc(_T_FIRST, saddles[2 - j], quad_tol))
    i_b = arc_integral(f, minor_arc(saddles[2], saddles[3], quad_tol))
    sign = -1.0 if j == 1 else 1.0
    return cmath.exp((sign * i_a - i_b) / (TWO_PI * 1j))


def beta_D(j: int, n: float, t: float) -> tuple[complex, complex]:
    """Scaling amplitude beta_j and the power base D_j (Re D_j > 0)."""
    if j not in (1, 2):
        raise DomainError("beta_D: j must be 1 or 2")
    disc = 4.0 * t * t - n * n
    if disc <= 0.0:
        raise DegenerateError("beta_D degenerates at |n| >= 2t")
    quarter = disc ** 0.25
    a = 0.5 * (math.sqrt(2.0 + n / t) - 1j * math.sqrt(2.0 - n / t))
    e = cmath.exp(0.25j * math.pi)
    if j == 1:
        beta = -e * a / (2.0 * quarter)
        d = -1j * a / (2.0 * quarter * (a - 1.0))
    else:
        ac = a.conjugate()
        beta = e * ac / (2.0 * quarter)
        d = 1j * ac / (2.0 * quarter * (ac - 1.0))
    if d.real <= 0.0:
        raise ConsistencyError("Re D_j <= 0: power base left the half-plane")
    return beta, d


@dataclass(frozen=True)
class SaddleFrame:
    """Every ratio-only quantity entering the leading term at fixed v."""

    v: float
    A: complex
    S: tuple[complex, complex, complex, complex]
    r_at_saddle: tuple[complex, complex]
    nu: tuple[float, float]
    chi: tuple[complex, complex]
    delta_hat: tuple[complex, complex]
    delta0: float


def build_saddle_frame(
    v: float,
    r: CircleFn,
    guard: RegionGuard = RegionGuard(),
    quad_tol: float = 1e-10,
) -> SaddleFrame:
    """Assemble the frame from the time-zero reflection coefficient."""
    a, saddles = saddle_points(v, guard)
    r1, r2 = complex(r(saddles[0])), complex(r(saddles[1]))
    return SaddleFrame(
        v=v,
        A=a,
        S=saddles,
        r_at_saddle=(r1, r2),
        nu=(nu(r1), nu(r2)),
        chi=(
            chi_at_saddle(1, r, saddles, quad_tol),
            chi_at_saddle(2, r, saddles, quad_tol),
        ),
        delta_hat=(
            delta_hat(1, r, saddles, quad_tol),
            delta_hat(2, r, saddles, quad_tol),
        ),
        delta0=delta0(r, saddles, quad_tol),
    )


def delta_j0(j: int, n: float, t: float, frame: SaddleFrame) -> complex:
    """Oscillatory per-saddle factor of unit growth rate.

    S_j^n exp(-i t (S_j - 1/S_j)^2 / 2) D_j^{(-1)^{j-1} i nu_j}
    exp((-1)^{j-1} chi_j) delta_hat_j; on the circle the first two
    factors reduce to exp(i (n theta_j + 2 t Im(S_j)^2)), which keeps
    their modulus exactly 1.
    """
    if j not in (1, 2):
        raise DomainError("delta_j0: j must be 1 or 2")
    s_j = frame.S[j - 1]
    sign = 1.0 if j == 1 else -1.0  # (-1)^{j-1}
    theta = cmath.phase(s_j)
    osc = _unit_phase((n, theta), (2.0 * t, s_j.imag ** 2))
    _, d = beta_D(j, n, t)
    power = branched_power(d, sign * 1j * frame.nu[j - 1])
    return osc * power * cmath.exp(sign * frame.chi[j - 1]) * frame.delta_hat[j - 1]


def m_factor(j: int, r_at_saddle: complex, nu_j: float) -> complex:
    """Gamma-function amplitude of the j-th oscillation; 0 when r(S_j) = 0.

    Satisfies |m_factor|^2 = nu_j.
    """
    if j not in (1, 2):
        raise DomainError("m_factor: j must be 1 or 2")
    if abs(r_at_saddle) >= 1.0:
        raise DomainError("m_factor: |r(S_j)| must be < 1")
    if r_at_saddle == 0:
        return 0.0 + 0.0j
    sign = -1.0 if j == 1 else 1.0  # (-1)^j
    num = math.sqrt(TWO_PI) * cmath.exp(
        sign * 0.75j * math.pi - 0.5 * math.pi * nu_j
    )
    den = r_at_saddle.conjugate() * gamma_complex(-sign * 1j * nu_j)
    return num / den


def saddle_summand(j: int, n: float, t: float, frame: SaddleFrame) -> complex:
    """The j-th term of the leading sum, prefactor included.

    The prefactor is -2 delta(0): the four-saddle sum collapses onto
    saddles 1 and 2 (the antipodal pair contributes identically), and
    the 1/(2 pi i) of the contour measure is already inside the
    gamma-function amplitude m_factor.  Validated against the linear
    (small-field) limit, where the sum must reproduce the Bessel
    asymptotics of the discrete free evolution.
    """
    s_j = frame.S[j - 1]
    beta, _ = beta_D(j, n, t)
    d0 = delta_j0(j, n, t, frame)
    m = m_factor(j, frame.r_at_saddle[j - 1], frame.nu[j - 1])
    return -2.0 * frame.delta0 * beta * d0 ** -2 * s_j ** -2 * m


def leading_term(
    n: int,
    t: float,
    scattering,
    guard: RegionGuard = RegionGuard(),
    frame: SaddleFrame | None = None,
    quad_tol: float = 1e-10,
) -> complex:
    """Closed-form leading approximation to R_n(t) at ratio v = n/t.

    ``scattering`` provides the time-zero reflection coefficient; all
    time dependence enters through the explicit factors.  A prebuilt
    frame for the same v may be passed to amortize the quadratures.
    """
    if t <= 0.0:
        raise DomainError("leading_term requires t > 0")
    v = n / t
    guard.check(v)
    if frame is None:
        frame = build_saddle_frame(v, scattering.r, guard, quad_tol)
    return saddle_summand(1, n, t, frame) + saddle_summand(2, n, t, frame)


@dataclass(frozen=True)
class AsymptoticTerm:
    """One decaying oscillation C t^{-1/2} exp(-i (p t + q log t))."""

    j: int
    C: complex
    p: float
    q: float

    def evaluate(self, t: float) -> complex:
        osc = _unit_phase((-self.p, t), (-self.q, math.log(t)))
        return self.C * t ** -0.5 * osc


def phase_decomposition(j: int, frame: SaddleFrame) -> AsymptoticTerm:
    """Factor the j-th summand into amplitude, t-frequency and log-t frequency.

    At fixed v the t-linear phase collects n theta_j (n = v t) and the
    quadratic-phase value at the saddle; the log-t phase carries nu_j;
    everything else is a v-only constant, extracted by evaluating the
    t-dependent factors at t = 1.
    """
    if j not in (1, 2):
        raise DomainError("phase_decomposition: j must be 1 or 2")
    s_j = frame.S[j - 1]
    theta = cmath.phase(s_j)
    a_im = s_j.imag
    sign = 1.0 if j == 1 else -1.0  # (-1)^{j-1}
    p = float(
        2.0 * np.longdouble(frame.v) * np.longdouble(theta)
        + 4.0 * np.longdouble(a_im) ** 2
    )
    q = -sign * frame.nu[j - 1]

    # v-only amplitude: the summand at t = 1, n = v, with the unit-modulus
    # oscillation exp(i (n theta + 2 a^2 t)) divided back out of delta_j0.
    beta1, d1 = beta_D(j, frame.v, 1.0)
    m = m_factor(j, frame.r_at_saddle[j - 1], frame.nu[j - 1])
    core = (
        branched_power(d1, sign * 1j * frame.nu[j - 1])
        * cmath.exp(sign * frame.chi[j - 1])
        * frame.delta_hat[j - 1]
    )
    c = -2.0 * frame.delta0 * beta1 * core ** -2 * s_j ** -2 * m
    return AsymptoticTerm(j=j, C=c, p=p, q=q)


# -- general-point transmission factors (diagnostics and cross-checks) ------


def delta_at(
    z: complex,
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> complex:
    """Transmission factor at a general off-circle point, by direct quadrature.

    exp(-(1/2 pi i) [int_{S1}^{S2} + int_{S3}^{S4}] log(1-|r|^2)/(tau - z) dtau),
    minor arcs.  Satisfies delta_at(-z) = delta_at(z).
    """

    def f(tau: complex) -> complex:
        return _log_one_minus_r2(r, tau) / (tau - z)

    total = arc_integral(f, minor_arc(saddles[0], saddles[1], quad_tol))
    total += arc_integral(f, minor_arc(saddles[2], saddles[3], quad_tol))
    return cmath.exp(-total / (TWO_PI * 1j))


def delta_component(
    k: int,
    z: complex,
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> complex:
    """Single-saddle factor delta_k(z) so that prod_k delta_k = delta_at.

    exp((-1)^{k-1} (i nu_k l_k(z) + chi_k(z))) with l_k the
    branch-tracked log of (tau - z) along the arc from the reference
    point to S_k and chi_k the regularized log-ratio integral.  Requires
    z off that arc and z != S_k (the integrand is then smooth).
    """
    if k not in (1, 2, 3, 4):
        raise DomainError("delta_component: k must be in 1..4")
    s_k = saddles[k - 1]
    nu_k = nu(r(s_k))
    arc = minor_arc(_ref_point(k), s_k, quad_tol)
    ell = path_continuous_log_ratio(z, arc.start_angle, arc.end_angle)
    l_k = _log_one_minus_r2(r, s_k)

    def f(tau: complex) -> complex:
        return (_log_one_minus_r2(r, tau) - l_k) / (tau - z)

    chi = arc_integral(f, arc) / (TWO_PI * 1j)
    sign = 1.0 if k % 2 == 1 else -1.0
    return cmath.exp(sign * (1j * nu_k * ell + chi))


def delta_hat_product(
    j: int,
    r: CircleFn,
    saddles: tuple[complex, ...],
    quad_tol: float = 1e-10,
) -> complex:
    """delta_hat via its defining product prod_{k != j} delta_k(S_j).

    Independent cross-check of :func:`delta_hat` (different contours,
    different branch bookkeeping).
    """
    s_j = saddles[j - 1]
    out = 1.0 + 0.0j
    for k in range(1, 5):
        if k != j:
            out *= delta_component(k, s_j, r, saddles, quad_tol)
    return out
