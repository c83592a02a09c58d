#!/usr/bin/env python3
"""Amplitude profile across the light cone at a fixed time.

Compares sqrt(t) * |R_n(t)| from simulation against the closed-form
prediction across n, showing how the envelope changes with the ratio
v = n/t and grows toward the edges |v| -> 2 (the region guard excludes
the coalescence neighborhood itself).

Example:
    python scripts/amplitude_profile.py --q-im 0.4 --t 60 --n-step 4
"""

import argparse
import math
import sys

from idnls.asymptotics import RegionGuard, build_saddle_frame, leading_term
from idnls.errors import RegionError
from idnls.lattice import IntegratorConfig, LatticeState, integrate
from idnls.scattering import ScatteringData


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q-re", type=float, default=0.0)
    ap.add_argument("--q-im", type=float, default=0.4)
    ap.add_argument("--t", type=float, default=60.0)
    ap.add_argument("--n-step", type=int, default=4)
    ap.add_argument("--v0", type=float, default=0.1)
    ap.add_argument("--dt", type=float, default=1e-2)
    args = ap.parse_args()

    q = complex(args.q_re, args.q_im)
    if abs(q) >= 1.0:
        ap.error("|q| must be < 1 (smallness condition)")
    state = LatticeState(0, [q])
    margin = int(2 * args.t + 50)
    cfg = IntegratorConfig(dt=args.dt, window_margin=margin, tail_tolerance=1e-12)
    snap = integrate(state, cfg, args.t)
    data = ScatteringData.from_state(state)
    guard = RegionGuard(args.v0)

    n_max = int((2.0 - args.v0) * args.t)
    print("# n v sqrt_t_abs_sim sqrt_t_abs_asym abs_err")
    for n in range(-n_max, n_max + 1, args.n_step):
        v = n / args.t
        try:
            frame = build_saddle_frame(v, data.r, guard)
            pred = leading_term(n, args.t, data, guard, frame=frame)
        except RegionError:
            continue
        sim = snap.at(n)
        root_t = math.sqrt(args.t)
        print(
            f"{n} {v:.6f} {abs(sim) * root_t:.6f} "
            f"{abs(pred) * root_t:.6f} {abs(sim - pred):.3e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
