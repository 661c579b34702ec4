"""Time the measurement-entropy oracle: numba kernel vs pure-numpy fallback.

The package selects the kernel at import time (set DISCORDLAB_DISABLE_NUMBA=1
to force the numpy path everywhere).  This script sidesteps the switch and
calls both implementations directly on the same batch of random states, so a
single run reports the speedup and confirms the two paths agree.

Usage:
    python3 benchmarks/bench_oracle.py [--samples 40] [--grid 181x360] [--seed 7]
"""

import argparse
import time

import numpy as np

from discordlab import _kernels
from discordlab.qstate import TwoQubitState, pauli_expansion


def random_coefficient_matrices(samples, seed):
    """R matrices of Ginibre-random full-rank two-qubit states."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(samples):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        out.append(pauli_expansion(TwoQubitState(rho)).entries)
    return out


def time_path(fn, mats, grid):
    values = []
    t0 = time.perf_counter()
    for r in mats:
        values.append(fn(r, grid[0], grid[1])[0])
    elapsed = time.perf_counter() - t0
    return elapsed, np.array(values)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--grid", default="181x360", help="polar x azimuth nodes")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    polar, azimuth = (int(tok) for tok in args.grid.lower().split("x"))
    mats = random_coefficient_matrices(args.samples, args.seed)

    print(f"oracle benchmark: {args.samples} random states, grid {polar}x{azimuth}")

    t_np, v_np = time_path(_kernels.min_entropy_scan_numpy, mats, (polar, azimuth))
    print(f"  numpy : {t_np:8.3f} s total  {1e3 * t_np / args.samples:8.2f} ms/state")

    if not _kernels.USE_NUMBA:
        print("  numba : unavailable (not installed or DISCORDLAB_DISABLE_NUMBA set)")
        return

    _kernels.min_entropy_scan(mats[0], polar, azimuth)  # JIT warm-up
    t_nb, v_nb = time_path(_kernels.min_entropy_scan, mats, (polar, azimuth))
    print(f"  numba : {t_nb:8.3f} s total  {1e3 * t_nb / args.samples:8.2f} ms/state")
    print(f"  speedup         {t_np / t_nb:8.1f}x")
    print(f"  max |numpy - numba|  {np.max(np.abs(v_np - v_nb)):.3e}")


if __name__ == "__main__":
    main()
