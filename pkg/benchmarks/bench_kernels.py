#!/usr/bin/env python3
"""Benchmark the compiled Svetlichny kernels against the pure-Python twin.

Times single objective evaluations and full multi-start maximizations for
both encodings.  Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_kernels.py [--starts 64] [--repeat 2000]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from ctsim import _kernels_py
from ctsim.channel import CoherentMsState, DampingParams
from ctsim.encodings import CoherentEncoding, MsParams, ms_state_vsp
from ctsim.nonlocality import correlation_tensor

try:
    from ctsim import _kernels as compiled
except ImportError:
    compiled = None


def time_call(fn, repeat: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench(args):
    rng = np.random.default_rng(0)
    tensor = correlation_tensor(ms_state_vsp(MsParams(0.0)).to_density())
    state = CoherentMsState.build(MsParams(math.pi / 4), CoherentEncoding(0.5), DampingParams(0.3))
    x = rng.uniform(0.0, 2.0, size=12)

    starts = np.empty((args.starts, 12))
    unit = np.random.default_rng(1).uniform(0.0, 1.0, size=(args.starts, 12))
    starts[:, 0::2] = unit[:, 0::2] * math.pi
    starts[:, 1::2] = unit[:, 1::2] * 2.0 * math.pi
    steps = np.array([0.1 * math.pi, 0.2 * math.pi] * 6)
    qubit = np.array(state.qubit, dtype=np.int32)
    signs = np.array(state.signs)

    backends = [("python", _kernels_py)]
    if compiled is not None:
        backends.append(("compiled", compiled))

    rows = []
    for label, mod in backends:
        t_vsp = time_call(lambda: mod.svetlichny_vsp(tensor, x), args.repeat)
        t_coh = time_call(
            lambda: mod.svetlichny_coherent(state.weights, qubit, signs, state.gamma, x),
            args.repeat,
        )
        t0 = time.perf_counter()
        best, _, _, evals = mod.maximize_vsp(tensor, starts, steps, 1e-8, 8000)
        t_max_vsp = time.perf_counter() - t0
        t0 = time.perf_counter()
        best_c, _, _, evals_c = mod.maximize_coherent(
            state.weights, qubit, signs, state.gamma, 2.0 * (state.gamma + 1.0),
            starts, steps, 1e-8, 8000,
        )
        t_max_coh = time.perf_counter() - t0
        rows.append((label, t_vsp, t_coh, t_max_vsp, t_max_coh, best, evals, best_c, evals_c))

    print(f"{args.starts} starts, {args.repeat} objective repeats\n")
    header = (
        f"{'backend':<10} {'eval vsp':>12} {'eval coh':>12} "
        f"{'maximize vsp':>14} {'maximize coh':>14}"
    )
    print(header)
    print("-" * len(header))
    for label, t_vsp, t_coh, t_mv, t_mc, _, _, _, _ in rows:
        print(
            f"{label:<10} {t_vsp * 1e6:>10.2f}us {t_coh * 1e6:>10.2f}us "
            f"{t_mv:>13.3f}s {t_mc:>13.3f}s"
        )
    print()
    for label, _, _, _, _, best, evals, best_c, evals_c in rows:
        print(
            f"{label}: |S_v|max vsp={best:.9f} ({evals} evals), "
            f"coherent={best_c:.9f} ({evals_c} evals)"
        )
    if len(rows) == 2:
        speedups = [rows[0][i] / rows[1][i] for i in (1, 2, 3, 4)]
        print(
            "\ncompiled speedup: "
            f"eval vsp {speedups[0]:.0f}x, eval coh {speedups[1]:.0f}x, "
            f"maximize vsp {speedups[2]:.0f}x, maximize coh {speedups[3]:.0f}x"
        )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--starts", type=int, default=64)
    parser.add_argument("--repeat", type=int, default=2000)
    bench(parser.parse_args())
