"""Built-in invariant suite: one pass/fail line per identity.

Runs the cross-cutting identities that tie the modules together
(special-function identities, conservation, scattering unitarity and
symmetry, saddle residuals, amplitude law, transmission-factor
factorization, and the round trip between direct integration and the
explicit spectral evolution).  Everything is seeded and deterministic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import asymptotics, lattice, scattering, specfun
from .lattice import IntegratorConfig, LatticeState
from .scattering import ScatteringData


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _check(name, worst, bound):
    return CheckResult(name, worst <= bound, f"worst {worst:.3e} (bound {bound:.1e})")


def check_gamma_modulus_identity() -> CheckResult:
    rng = np.random.default_rng(11)
    worst = 0.0
    for y in rng.uniform(0.01, 5.0, size=100):
        target = math.pi / (y * math.sinh(math.pi * y))
        got = abs(specfun.gamma_complex(1j * y)) ** 2
        worst = max(worst, abs(got - target) / target)
    return _check("gamma modulus identity |Gamma(iy)|^2", worst, 1e-12)


def check_gamma_recurrence() -> CheckResult:
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(100):
        w = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(w.imag) < 0.2 and w.real < 0.5:
            w += 0.5j  # stay clear of the pole line
        lhs = specfun.gamma_complex(w + 1)
        rhs = w * specfun.gamma_complex(w)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return _check("gamma recurrence Gamma(w+1) = w Gamma(w)", worst, 1e-12)


def check_arc_additivity() -> CheckResult:
    rng = np.random.default_rng(13)
    worst = 0.0

    def f(tau):
        return cmath.exp(tau) / tau

    for _ in range(20):
        th0 = rng.uniform(-math.pi, math.pi)
        sweep = rng.uniform(0.3, 2.9) * (1 if rng.random() < 0.5 else -1)
        mid = th0 + sweep * rng.uniform(0.2, 0.8)
        tol = 1e-11
        whole = specfun.arc_integral(f, specfun.ArcSpec(th0, th0 + sweep, tol))
        parts = specfun.arc_integral(
            f, specfun.ArcSpec(th0, mid, tol)
        ) + specfun.arc_integral(f, specfun.ArcSpec(mid, th0 + sweep, tol))
        worst = max(worst, abs(whole - parts))
    return _check("arc quadrature additivity", worst, 2e-11)


def check_branched_power_integer() -> CheckResult:
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(50):
        base = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(base) < 0.1:
            base += 0.5
        m = int(rng.integers(-6, 7))
        direct = 1.0 + 0j
        for _ in range(abs(m)):
            direct *= base
        if m < 0:
            direct = 1.0 / direct
        got = specfun.branched_power(base, m)
        worst = max(worst, abs(got - direct) / max(abs(direct), 1e-300))
    return _check("integer branched power = repeated product", worst, 1e-14)


def check_conservation() -> CheckResult:
    state = LatticeState(0, [0.3])
    cfg = IntegratorConfig(dt=1e-3, window_margin=16)
    evolved = lattice.integrate(state, cfg, 5.0)
    drift = abs(lattice.c_minus_inf(evolved) - lattice.c_minus_inf(state))
    return _check("conserved product drift (t=5, dt=1e-3)", drift, 1e-10)


def check_gauge_covariance() -> CheckResult:
    rng = np.random.default_rng(15)
    vals = 0.4 * rng.random(5) * np.exp(2j * math.pi * rng.random(5))
    alpha = 0.83
    cfg = IntegratorConfig(dt=1e-2, window_margin=16)
    a = lattice.integrate(LatticeState(-2, vals), cfg, 2.0)
    b = lattice.integrate(LatticeState(-2, vals * cmath.exp(1j * alpha)), cfg, 2.0)
    worst = float(np.max(np.abs(b.values - cmath.exp(1j * alpha) * a.values)))
    return _check("global phase covariance of the flow", worst, 1e-10)


def check_unitarity() -> CheckResult:
    rng = np.random.default_rng(16)
    thetas = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    zs = np.exp(1j * thetas)
    worst = 0.0
    for _ in range(10):
        m = int(rng.integers(1, 10))
        vals = 0.9 * rng.random(m) * np.exp(2j * math.pi * rng.random(m))
        state = LatticeState(int(rng.integers(-4, 5)), vals)
        c = lattice.c_minus_inf(state)
        a, b = scattering.scattering_coeffs(state, zs)
        worst = max(
            worst,
            float(np.max(np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - c)))
            / (1.0 + c),
        )
    return _check("characterization |a|^2 - |b|^2 = c", worst, 1e-10)


def check_odd_symmetry() -> CheckResult:
    rng = np.random.default_rng(17)
    zs = np.exp(1j * np.linspace(0.05, 2 * math.pi, 64, endpoint=False))
    vals = 0.7 * rng.random(7) * np.exp(2j * math.pi * rng.random(7))
    state = LatticeState(-3, vals)
    r_plus = scattering.reflection(state, zs)
    r_minus = scattering.reflection(state, -zs)
    worst = float(np.max(np.abs(r_plus + r_minus)))
    return _check("reflection odd symmetry r(-z) = -r(z)", worst, 1e-12)


def check_evolution_modulus() -> CheckResult:
    rng = np.random.default_rng(18)
    worst = 0.0
    for _ in range(100):
        r0 = 0.9 * rng.random() * cmath.exp(2j * math.pi * rng.random())
        z = cmath.exp(2j * math.pi * rng.random())
        rt = scattering.evolve_reflection(r0, z, 100.0 * rng.random())
        worst = max(worst, abs(abs(rt) - abs(r0)))
    return _check("evolution preserves |r|", worst, 1e-14)


def check_saddle_residuals() -> CheckResult:
    worst = 0.0
    for v in np.linspace(-1.9, 1.9, 39):
        _, saddles = asymptotics.saddle_points(float(v))
        for t in (1.0, 10.0, 100.0):
            n = v * t
            for s in saddles:
                _, d1, _ = asymptotics.phase(s, n, t)
                worst = max(worst, abs(d1) / t)
    return _check("saddle residual |phi'(S_j)|/t", worst, 1e-12)


def check_amplitude_law() -> CheckResult:
    rng = np.random.default_rng(19)
    worst = 0.0
    for _ in range(100):
        mag = rng.uniform(1e-3, 0.95)
        r_s = mag * cmath.exp(2j * math.pi * rng.random())
        nu_j = asymptotics.nu(r_s)
        for j in (1, 2):
            m = asymptotics.m_factor(j, r_s, nu_j)
            worst = max(worst, abs(abs(m) - math.sqrt(nu_j)))
    return _check("amplitude law |M_j| = sqrt(nu_j)", worst, 1e-10)


def check_delta_machinery() -> CheckResult:
    worst = 0.0
    # closed form for constant-modulus reflection
    for q in (0.2, 0.5, 0.8):
        for v in (0.0, 1.0, -1.0):
            _, saddles = asymptotics.saddle_points(v)
            r = lambda z: q * z
            d0 = asymptotics.delta0(r, saddles)
            sweep = cmath.phase(saddles[1]) - cmath.phase(saddles[0])
            closed = (1.0 - q * q) ** (-sweep / math.pi)
            worst = max(worst, abs(d0 - closed))
    # factorization and symmetry at off-circle points, non-constant |r|
    data = ScatteringData.from_state(LatticeState(0, np.array([0.3, 0.4j])))
    _, saddles = asymptotics.saddle_points(0.6)
    rng = np.random.default_rng(20)
    for _ in range(5):
        z = rng.choice([0.5, 2.0]) * cmath.exp(2j * math.pi * rng.random())
        direct = asymptotics.delta_at(z, data.r, saddles)
        prod = 1.0 + 0j
        for k in (1, 2, 3, 4):
            prod *= asymptotics.delta_component(k, z, data.r, saddles)
        worst = max(worst, abs(direct - prod) / abs(direct))
        worst = max(worst, abs(asymptotics.delta_at(-z, data.r, saddles) - direct))
    return _check("transmission factor closed forms + factorization", worst, 1e-8)


def check_ist_consistency() -> CheckResult:
    state = LatticeState(0, [0.3])
    cfg = IntegratorConfig(dt=1e-3, window_margin=16, tail_tolerance=1e-12)
    evolved = lattice.integrate(state, cfg, 2.0)
    zs = np.exp(1j * np.linspace(0, 2 * math.pi, 16, endpoint=False))
    direct = scattering.reflection(evolved, zs)
    spectral = scattering.evolve_reflection(
        scattering.reflection(state, zs), zs, 2.0
    )
    worst = float(np.max(np.abs(direct - spectral)))
    return _check("integration matches spectral evolution", worst, 1e-6)


def check_integrator_order() -> CheckResult:
    state = LatticeState(0, [0.3])
    results = {}
    for dt in (0.02, 0.01, 0.00125):
        cfg = IntegratorConfig(dt=dt, window_margin=16)
        results[dt] = lattice.integrate(state, cfg, 1.0)

    def err(a, b):
        lo = min(a.offset, b.offset)
        hi = max(a.offset + len(a.values), b.offset + len(b.values))
        pad_a = np.zeros(hi - lo, dtype=complex)
        pad_b = np.zeros(hi - lo, dtype=complex)
        pad_a[a.offset - lo : a.offset - lo + len(a.values)] = a.values
        pad_b[b.offset - lo : b.offset - lo + len(b.values)] = b.values
        return float(np.max(np.abs(pad_a - pad_b)))

    factor = err(results[0.02], results[0.00125]) / err(
        results[0.01], results[0.00125]
    )
    ok = 12.0 <= factor <= 20.0
    return CheckResult(
        "step-halving error-reduction factor",
        ok,
        f"factor {factor:.2f} (expected within [12, 20])",
    )


ALL_CHECKS = (
    check_gamma_modulus_identity,
    check_gamma_recurrence,
    check_arc_additivity,
    check_branched_power_integer,
    check_conservation,
    check_gauge_covariance,
    check_unitarity,
    check_odd_symmetry,
    check_evolution_modulus,
    check_saddle_residuals,
    check_amplitude_law,
    check_delta_machinery,
    check_ist_consistency,
    check_integrator_order,
)


def run_selftest() -> list[CheckResult]:
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crash is a failure, not an abort
            results.append(CheckResult(check.__name__, False, f"raised {exc!r}"))
    return results
