"""Experiment orchestration: configs, comparison runs, persistence.

Configs are TOML files; complex values are written as two-number arrays
[re, im].  See docs/config_schema.md for the full schema.  All outputs
are flat text files with 17-significant-digit floats, so identical
configs produce byte-identical artifacts.
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import asymptotics, lattice, scattering, specfun
from .errors import ConfigError, NumericsError
from .lattice import IntegratorConfig, LatticeState
from .scattering import ScatteringData

OUTPUT_DIR_ENV = "IDNLS_OUTPUT_DIR"
REL_ERR_FLOOR = 1e-300


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _as_complex(value, where: str) -> complex:
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(u, (int, float)) for u in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: complex values are written as [re, im]")


@dataclass(frozen=True)
class RunConfig:
    initial_state: LatticeState
    initial_kind: str
    integrator: IntegratorConfig
    circle_grid: int
    quadrature_tol: float
    v0: float
    compare_points: tuple[tuple[int, float], ...]
    output_dir: Path

    @property
    def guard(self) -> asymptotics.RegionGuard:
        return asymptotics.RegionGuard(self.v0)


def _build_initial(table: dict) -> tuple[LatticeState, str]:
    if not isinstance(table, dict) or "kind" not in table:
        raise ConfigError("initial_data: table with a 'kind' key required")
    kind = table["kind"]
    if kind == "inline":
        values = table.get("values")
        if not isinstance(values, list) or not values:
            raise ConfigError("initial_data.values: non-empty list required")
        amps = [_as_complex(v, "initial_data.values") for v in values]
        offset = int(table.get("offset", 0))
        return LatticeState(offset, np.array(amps)), kind
    if kind == "single_site":
        q = _as_complex(table.get("q"), "initial_data.q")
        return LatticeState(int(table.get("site", 0)), np.array([q])), kind
    if kind == "gaussian":
        amp = _as_complex(table.get("amplitude"), "initial_data.amplitude")
        width = float(table.get("width", 1.0))
        center = int(table.get("center", 0))
        if width <= 0:
            raise ConfigError("initial_data.width must be positive")
        # truncate where the envelope falls below 1e-16
        half = int(math.ceil(width * math.sqrt(2.0 * 16.0 * math.log(10.0)))) + 1
        n = np.arange(-half, half + 1)
        vals = amp * np.exp(-(n.astype(float) ** 2) / (2.0 * width * width))
        return LatticeState(center - half, vals), kind
    if kind == "random":
        seed = int(table.get("seed", 0))
        amp = float(table.get("amplitude", 0.5))
        support = int(table.get("support", 8))
        if support < 1:
            raise ConfigError("initial_data.support must be >= 1")
        rng = np.random.default_rng(seed)
        mags = amp * rng.random(support)
        phases = 2.0 * math.pi * rng.random(support)
        return LatticeState(-(support // 2), mags * np.exp(1j * phases)), kind
    raise ConfigError(f"initial_data.kind: unknown kind {kind!r}")


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a TOML run configuration, filling defaults."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: TOML parse error: {exc}")

    state, kind = _build_initial(raw.get("initial_data", {}))
    report = lattice.validate_initial(state)
    if not report.passed:
        raise ConfigError(
            "initial_data: smallness condition violated "
            f"(sup|R_n| = {report.linf_norm:.6g} >= 1)"
        )

    itable = raw.get("integrator", {})
    try:
        integrator = IntegratorConfig(
            dt=float(itable.get("dt", 1e-2)),
            window_margin=int(itable.get("window_margin", 16)),
            tail_tolerance=float(itable.get("tail_tolerance", 1e-12)),
            conservation_alarm=float(itable.get("conservation_alarm", 1e-6)),
        )
    except ConfigError as exc:
        raise ConfigError(f"integrator: {exc}")

    v0 = float(raw.get("v0", 0.1))
    if not 0.0 < v0 < 2.0:
        raise ConfigError("v0 must lie in (0, 2)")
    circle_grid = int(raw.get("circle_grid", 256))
    if circle_grid < 4:
        raise ConfigError("circle_grid must be >= 4")
    quadrature_tol = float(raw.get("quadrature_tol", 1e-10))
    if quadrature_tol <= 0:
        raise ConfigError("quadrature_tol must be positive")

    points: list[tuple[int, float]] = []
    for entry in raw.get("compare_points", []):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ConfigError("compare_points: entries are [n, t] pairs")
        n, t = int(entry[0]), float(entry[1])
        if t <= 0:
            raise ConfigError(f"compare_points: t must be positive, got {t}")
        if abs(n / t) > 2.0 - v0:
            raise ConfigError(
                f"compare_points: ({n}, {t}) has |n/t| = {abs(n / t):.6g} "
                f"outside the region |v| <= {2.0 - v0:.6g}"
            )
        points.append((n, t))

    out = os.environ.get(OUTPUT_DIR_ENV) or raw.get("output_dir", "out")
    return RunConfig(
        initial_state=state,
        initial_kind=kind,
        integrator=integrator,
        circle_grid=circle_grid,
        quadrature_tol=quadrature_tol,
        v0=v0,
        compare_points=tuple(points),
        output_dir=Path(out),
    )


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    t: float
    v: float
    r_sim: complex
    r_asym: complex

    @property
    def abs_err(self) -> float:
        return abs(self.r_sim - self.r_asym)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(abs(self.r_asym), REL_ERR_FLOOR)


@dataclass
class CompareResult:
    rows: list[ComparisonRow] = field(default_factory=list)
    failures: list[tuple[int, float, str]] = field(default_factory=list)
    c_hat: Optional[float] = None           # max of abs_err * t / log t  (t > 1)
    c_hat_ratio: Optional[float] = None     # max/min of the same quantity
    sqrt_t_moduli: list[float] = field(default_factory=list)

    def summary_lines(self) -> list[str]:
        lines = [f"rows={len(self.rows)} failures={len(self.failures)}"]
        if self.c_hat is not None:
            lines.append(f"c_hat={_fmt(self.c_hat)}")
        if self.c_hat_ratio is not None:
            lines.append(f"c_hat_max_min_ratio={_fmt(self.c_hat_ratio)}")
        for row, m in zip(self.rows, self.sqrt_t_moduli):
            lines.append(
                f"point n={row.n} t={_fmt(row.t)}: abs_err={_fmt(row.abs_err)} "
                f"rel_err={_fmt(row.rel_err)} sqrt_t_modulus={_fmt(m)}"
            )
        # decay diagnostics: successive abs_err ratios at fixed n
        by_n: dict[int, list[ComparisonRow]] = {}
        for row in self.rows:
            by_n.setdefault(row.n, []).append(row)
        for n, rows in sorted(by_n.items()):
            rows.sort(key=lambda r: r.t)
            for prev, nxt in zip(rows, rows[1:]):
                if prev.abs_err > 0.0:
                    lines.append(
                        f"decay n={n}: abs_err({_fmt(nxt.t)})/abs_err({_fmt(prev.t)})"
                        f"={_fmt(nxt.abs_err / prev.abs_err)}"
                    )
        for n, t, msg in self.failures:
            lines.append(f"FAILED point n={n} t={_fmt(t)}: {msg}")
        return lines


def _checkpoint_states(cfg: RunConfig) -> dict[float, LatticeState]:
    """One forward integration serving every compare time (sorted)."""
    times = sorted({t for _, t in cfg.compare_points})
    states = lattice.integrate_checkpoints(cfg.initial_state, cfg.integrator, times)
    return dict(zip(times, states))


def run_compare(cfg: RunConfig) -> CompareResult:
    """Simulate, predict, and tabulate errors for every compare point.

    Prediction always uses the time-zero scattering data; simulation is
    a single forward trajectory with checkpoints.  A numeric failure at
    one point is recorded and does not discard completed rows.
    """
    result = CompareResult()
    if not cfg.compare_points:
        return result
    data = ScatteringData.from_state(cfg.initial_state)
    snapshots = _checkpoint_states(cfg)
    frames: dict[float, asymptotics.SaddleFrame] = {}
    for n, t in cfg.compare_points:
        try:
            v = n / t
            frame = frames.get(v)
            if frame is None:
                frame = asymptotics.build_saddle_frame(
                    v, data.r, cfg.guard, cfg.quadrature_tol
                )
                frames[v] = frame
            pred = asymptotics.leading_term(
                n, t, data, cfg.guard, frame=frame, quad_tol=cfg.quadrature_tol
            )
            sim = snapshots[t].at(n)
            result.rows.append(ComparisonRow(n=n, t=t, v=v, r_sim=sim, r_asym=pred))
        except NumericsError as exc:
            result.failures.append((n, t, str(exc)))
    c_hats = [
        row.abs_err * row.t / math.log(row.t) for row in result.rows if row.t > 1.0
    ]
    if c_hats:
        result.c_hat = max(c_hats)
        positive = [c for c in c_hats if c > 0.0]
        if positive:
            result.c_hat_ratio = max(positive) / min(positive)
    result.sqrt_t_moduli = [abs(row.r_asym) * math.sqrt(row.t) for row in result.rows]
    return result


# ---------------------------------------------------------------------------
# persistence


def _ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_compare_csv(result: CompareResult, out_dir: Path) -> Path:
    out = _ensure_dir(out_dir) / "compare.csv"
    with out.open("w") as fh:
        fh.write("n,t,v,re_sim,im_sim,re_asym,im_asym,abs_err,rel_err\n")
        for row in result.rows:
            fh.write(
                ",".join(
                    [
                        str(row.n),
                        _fmt(row.t),
                        _fmt(row.v),
                        _fmt(row.r_sim.real),
                        _fmt(row.r_sim.imag),
                        _fmt(row.r_asym.real),
                        _fmt(row.r_asym.imag),
                        _fmt(row.abs_err),
                        _fmt(row.rel_err),
                    ]
                )
                + "\n"
            )
    return out


def write_error_profile(result: CompareResult, out_dir: Path) -> Path:
    """Columnar text for external plotting: t, abs_err, t^-1 log t."""
    out = _ensure_dir(out_dir) / "error_profile.txt"
    with out.open("w") as fh:
        fh.write("# t abs_err ref_t_inv_log_t\n")
        for row in sorted(result.rows, key=lambda r: (r.t, r.n)):
            ref = math.log(row.t) / row.t if row.t > 1.0 else float("nan")
            fh.write(f"{_fmt(row.t)} {_fmt(row.abs_err)} {_fmt(ref)}\n")
    return out


def write_summary(result: CompareResult, out_dir: Path) -> Path:
    out = _ensure_dir(out_dir) / "summary.txt"
    out.write_text("\n".join(result.summary_lines()) + "\n")
    return out


def write_failures(result: CompareResult, out_dir: Path) -> Optional[Path]:
    if not result.failures:
        return None
    out = _ensure_dir(out_dir) / "failures.txt"
    with out.open("w") as fh:
        for n, t, msg in result.failures:
            fh.write(f"n={n} t={_fmt(t)}: {msg}\n")
    return out


def circle_angles(count: int) -> np.ndarray:
    return np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)


def write_reflection_csv(cfg: RunConfig, out_dir: Path) -> Path:
    """Time-zero reflection coefficient on the circle grid."""
    data = ScatteringData.from_state(cfg.initial_state)
    thetas = circle_angles(cfg.circle_grid)
    rs = data.r(np.exp(1j * thetas))
    out = _ensure_dir(out_dir) / "reflection.csv"
    with out.open("w") as fh:
        fh.write("theta,re_r,im_r,abs_r\n")
        for th, r in zip(thetas, np.atleast_1d(rs)):
            fh.write(
                f"{_fmt(th)},{_fmt(r.real)},{_fmt(r.imag)},{_fmt(abs(r))}\n"
            )
    return out


def write_simulation_csv(cfg: RunConfig, out_dir: Path) -> Path:
    """Window snapshots at every compare time, long format."""
    snapshots = _checkpoint_states(cfg)
    out = _ensure_dir(out_dir) / "simulation.csv"
    with out.open("w") as fh:
        fh.write("t,n,re_sim,im_sim\n")
        for t in sorted(snapshots):
            state = snapshots[t]
            for n, val in zip(state.sites, state.values):
                fh.write(
                    f"{_fmt(t)},{int(n)},{_fmt(val.real)},{_fmt(val.imag)}\n"
                )
    return out


def write_predictions_csv(cfg: RunConfig, out_dir: Path) -> Path:
    """Leading-term predictions only (no simulation)."""
    data = ScatteringData.from_state(cfg.initial_state)
    frames: dict[float, asymptotics.SaddleFrame] = {}
    out = _ensure_dir(out_dir) / "predictions.csv"
    with out.open("w") as fh:
        fh.write("n,t,v,re_asym,im_asym\n")
        for n, t in cfg.compare_points:
            v = n / t
            frame = frames.setdefault(
                v,
                asymptotics.build_saddle_frame(
                    v, data.r, cfg.guard, cfg.quadrature_tol
                ),
            )
            pred = asymptotics.leading_term(
                n, t, data, cfg.guard, frame=frame, quad_tol=cfg.quadrature_tol
            )
            fh.write(
                f"{n},{_fmt(t)},{_fmt(v)},{_fmt(pred.real)},{_fmt(pred.imag)}\n"
            )
    return out
