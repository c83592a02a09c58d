"""Doubly-infinite defocusing lattice field on a finite window.

The field R_n lives on the integers; sites outside the stored window
are exactly zero.  The vector field is

    dR_n/dt = i [ (R_{n+1} - 2 R_n + R_{n-1}) - |R_n|^2 (R_{n+1} + R_{n-1}) ]

and valid evolutions keep sup|R_n| < 1 (smallness condition), which in
turn keeps the conserved product prod(1 - |R_n|^2) positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BlowUpError, ConfigError, ConservationError, DomainError

_MIN_EXPAND = 16  # smallest one-shot window extension, sites


@dataclass
class LatticeState:
    """Finite window of complex lattice amplitudes.

    ``offset`` is the lattice index of ``values[0]``; sites outside the
    window read as exactly 0.
    """

    offset: int
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 1:
            raise ConfigError("LatticeState.values must be one-dimensional")

    @property
    def sites(self) -> np.ndarray:
        return self.offset + np.arange(len(self.values))

    def linf(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def l1(self) -> float:
        return float(np.sum(np.abs(self.values)))

    def at(self, n: int) -> complex:
        """Amplitude at lattice site n (0 outside the window)."""
        k = n - self.offset
        if 0 <= k < len(self.values):
            return complex(self.values[k])
        return 0.0 + 0.0j

    def copy(self) -> "LatticeState":
        return LatticeState(self.offset, self.values.copy(), self.time)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-2
    window_margin: int = 16
    tail_tolerance: float = 1e-12
    conservation_alarm: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.dt <= 0.1:
            raise ConfigError("dt must lie in (0, 0.1] for the explicit scheme")
        if self.window_margin < 0:
            raise ConfigError("window_margin must be >= 0")
        if self.tail_tolerance <= 0.0 or self.conservation_alarm <= 0.0:
            raise ConfigError("tolerances must be positive")


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    l1_norm: float
    linf_norm: float
    c_minus_inf: Optional[float]

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL (smallness condition violated)"
        c = "n/a" if self.c_minus_inf is None else f"{self.c_minus_inf:.12g}"
        return (
            f"{status}: l1={self.l1_norm:.12g} linf={self.linf_norm:.12g} "
            f"c_minus_inf={c}"
        )


def idnls_rhs(state: LatticeState) -> np.ndarray:
    """Time derivative of every window site; neighbors outside read as 0."""
    r = state.values
    nb = np.zeros_like(r)
    nb[:-1] += r[1:]   # R_{n+1}
    nb[1:] += r[:-1]   # R_{n-1}
    return 1j * ((nb - 2.0 * r) - (np.abs(r) ** 2) * nb)


def c_minus_inf(state: LatticeState) -> float:
    """Conserved product prod(1 - |R_n|^2) over the window."""
    sq = np.abs(state.values) ** 2
    if np.any(sq >= 1.0):
        raise DomainError("c_minus_inf undefined: some |R_n| >= 1")
    return float(np.prod(1.0 - sq))


def validate_initial(state: LatticeState) -> ValidationReport:
    linf = state.linf()
    passed = linf < 1.0
    return ValidationReport(
        passed=passed,
        l1_norm=state.l1(),
        linf_norm=linf,
        c_minus_inf=c_minus_inf(state) if passed else None,
    )


def _rk4_step(values: np.ndarray, offset: int, t: float, h: float) -> np.ndarray:
    def rhs(v: np.ndarray) -> np.ndarray:
        return idnls_rhs(LatticeState(offset, v, t))

    k1 = rhs(values)
    k2 = rhs(values + 0.5 * h * k1)
    k3 = rhs(values + 0.5 * h * k2)
    k4 = rhs(values + h * k3)
    return values + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _Window:
    """Mutable integration buffer with auto-expanding zero margins."""

    def __init__(self, state: LatticeState, margin: int, tail_tol: float):
        pad = np.zeros(margin, dtype=np.complex128)
        self.values = np.concatenate([pad, state.values, pad])
        self.offset = state.offset - margin
        self.tail_tol = tail_tol
        self._grow = max(margin, _MIN_EXPAND)

    def expand_if_needed(self) -> None:
        v = self.values
        left = abs(v[0]) > self.tail_tol
        right = abs(v[-1]) > self.tail_tol
        if not (left or right):
            return
        grow = self._grow
        pad = np.zeros(grow, dtype=np.complex128)
        if left:
            self.values = np.concatenate([pad, self.values])
            self.offset -= grow
        if right:
            self.values = np.concatenate([self.values, pad])
        self._grow = 2 * grow  # doubling amortizes repeated reallocation


def integrate_checkpoints(
    state: LatticeState,
    cfg: IntegratorConfig,
    times: Sequence[float],
) -> list[LatticeState]:
    """One forward integration, snapshotting at each requested time.

    ``times`` must be non-decreasing and >= state.time.  Classical
    fourth-order one-step scheme with fixed dt; the final step toward
    each checkpoint is shortened to land exactly on it.
    """
    times = [float(t) for t in times]
    if any(t < state.time for t in times):
        raise ConfigError("checkpoint before the state's current time")
    if any(b < a for a, b in zip(times, times[1:])):
        raise ConfigError("checkpoint times must be non-decreasing")
    report = validate_initial(state)
    if not report.passed:
        raise DomainError("initial data violate the smallness condition")
    c0 = report.c_minus_inf

    win = _Window(state, cfg.window_margin, cfg.tail_tolerance)
    t = state.time
    out: list[LatticeState] = []

    def step(h: float) -> None:
        nonlocal t
        win.values = _rk4_step(win.values, win.offset, t, h)
        t += h
        amax = float(np.max(np.abs(win.values)))
        if amax >= 1.0:
            raise BlowUpError(f"sup|R_n| = {amax:.6g} >= 1 at t = {t:.6g}")
        c_now = float(np.prod(1.0 - np.abs(win.values) ** 2))
        if abs(c_now - c0) > cfg.conservation_alarm:
            raise ConservationError(
                f"conserved product drifted by {abs(c_now - c0):.3e} "
                f"at t = {t:.6g}"
            )
        win.expand_if_needed()

    for target in times:
        # integer step count keeps trajectories bit-identical whether or
        # not intermediate checkpoints are requested
        span = target - t
        if span > 0.0:
            n_full = int(math.floor(span / cfg.dt + 1e-9))
            for _ in range(n_full):
                step(cfg.dt)
            remainder = target - t
            if remainder > 1e-9 * cfg.dt:
                step(remainder)
        t = target
        out.append(LatticeState(win.offset, win.values.copy(), target))
    return out


def integrate(
    state: LatticeState, cfg: IntegratorConfig, t_end: float
) -> LatticeState:
    """Integrate the lattice flow from state.time to t_end."""
    if t_end < state.time:
        raise ConfigError("t_end must be >= state.time")
    return integrate_checkpoints(state, cfg, [t_end])[0]
