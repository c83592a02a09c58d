"""Direct scattering transform for the lattice field.

The linear problem is the 2x2 difference system

    X_{n+1} = [[z, conj(R_n)], [R_n, 1/z]] X_n,   |z| = 1.

For window-supported data the Jost solution that behaves like
z^n (1, 0)^T far to the left is propagated exactly by finite
transfer-matrix products; matching it against the plane-wave basis past
the right edge yields the connection coefficients a(z), b(z) and the
reflection coefficient r = b/a.  Time evolution of r is the explicit
phase exp(i t (z - 1/z)^2), which on the circle preserves |r|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .lattice import LatticeState, c_minus_inf

ArrayLike = "np.ndarray | complex"


def transfer_matrix(r_n: complex, z: complex) -> np.ndarray:
    """Single-site transfer matrix; det = 1 - |R_n|^2."""
    if z == 0:
        raise DomainError("transfer_matrix: z must be nonzero")
    return np.array([[z, np.conj(r_n)], [r_n, 1.0 / z]], dtype=np.complex128)


def scattering_coeffs(state: LatticeState, z: ArrayLike):
    """Connection coefficients (a(z), b(z)) of the window-supported data.

    Accepts a scalar or an ndarray of unit-modulus spectral points and
    evaluates elementwise.  Exact (up to roundoff) for data supported on
    the window: beyond the support the Jost solution is a combination of
    the plane waves z^n (1,0)^T and z^{-n} (0,1)^T.
    """
    scalar = np.isscalar(z) or np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    phi1 = zz ** state.offset
    phi2 = np.zeros_like(phi1)
    inv = 1.0 / zz
    for r_n in state.values:
        phi1, phi2 = zz * phi1 + np.conj(r_n) * phi2, r_n * phi1 + inv * phi2
    k = state.offset + len(state.values)  # first index past the window
    a = phi1 * zz ** (-k)
    b = phi2 * zz ** k
    if scalar:
        return complex(a), complex(b)
    return a, b


def reflection(state: LatticeState, z: ArrayLike):
    """Reflection coefficient r(z) = b(z)/a(z); |r| < 1 for valid data."""
    a, b = scattering_coeffs(state, z)
    r = np.asarray(b) / np.asarray(a)
    if np.any(np.abs(r) >= 1.0):
        raise ConsistencyError(
            "computed |r| >= 1: upstream data or numerics are faulty"
        )
    if np.ndim(r) == 0:
        return complex(r)
    return r


def evolve_reflection(r0: ArrayLike, z: ArrayLike, t: float):
    """Exact time evolution r(z, t) = r(z, 0) exp(i t (z - 1/z)^2).

    On |z| = 1 the quantity (z - 1/z)^2 is real and <= 0, so the
    exponent is purely imaginary and |r| is preserved; the roundoff
    residue in its imaginary part is discarded to keep that exact.
    """
    zz = np.asarray(z, dtype=np.complex128)
    w2 = np.real((zz - 1.0 / zz) ** 2)
    phase = np.exp(1j * t * w2)
    out = np.asarray(r0, dtype=np.complex128) * phase
    if np.ndim(out) == 0:
        return complex(out)
    return out


def _trimmed(state: LatticeState, tol: float) -> LatticeState:
    mags = np.abs(state.values)
    keep = np.nonzero(mags >= tol)[0]
    if len(keep) == 0:
        return LatticeState(state.offset, np.zeros(0), state.time)
    lo, hi = int(keep[0]), int(keep[-1]) + 1
    return LatticeState(state.offset + lo, state.values[lo:hi].copy(), state.time)


@dataclass(frozen=True)
class ScatteringData:
    """Immutable snapshot exposing (a, b, r) at arbitrary |z| = 1.

    Holds a (possibly tail-trimmed) copy of the lattice window it was
    built from, the conserved product of that snapshot, and the snapshot
    time.  Evaluation is on demand per z; concurrent evaluation at
    distinct z is safe.
    """

    offset: int
    values: np.ndarray
    c_inf: float
    snapshot_time: float

    @classmethod
    def from_state(
        cls, state: LatticeState, trim_tolerance: float = 0.0
    ) -> "ScatteringData":
        src = _trimmed(state, trim_tolerance) if trim_tolerance > 0.0 else state
        return cls(
            offset=src.offset,
            values=src.values.copy(),
            c_inf=c_minus_inf(src),
            snapshot_time=state.time,
        )

    def _state(self) -> LatticeState:
        return LatticeState(self.offset, self.values, self.snapshot_time)

    def coefficients(self, z: ArrayLike):
        return scattering_coeffs(self._state(), z)

    def r(self, z: ArrayLike):
        return reflection(self._state(), z)
