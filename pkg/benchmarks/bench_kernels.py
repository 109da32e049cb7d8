"""Time the fused LSTM gate kernels: compiled extension vs pure numpy.

Both backends implement the same contract (see declfix.nnet.kernels), so
this is a like-for-like comparison on identical inputs.  Run from the
repository root:

    python3 benchmarks/bench_kernels.py [--batch B] [--hidden H] [--reps N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from declfix.nnet import kernels


def _inputs(rng, batch, hidden):
    z = lambda: rng.standard_normal((batch, hidden))
    zf, zg, zc, zo, s_prev = z(), z(), z(), z(), z()
    return zf, zg, zc, zo, s_prev


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(batch, hidden, reps):
    rng = np.random.default_rng(0)
    zf, zg, zc, zo, s_prev = _inputs(rng, batch, hidden)
    dh = rng.standard_normal((batch, hidden))
    ds_in = rng.standard_normal((batch, hidden))

    rows = []
    restore = kernels.BACKEND
    try:
        for name in kernels.available_backends():
            kernels.use_backend(name)
            f, g, c, q, s, h = kernels.lstm_gates_forward(zf, zg, zc, zo, s_prev, False)
            fwd = _time(
                lambda: kernels.lstm_gates_forward(zf, zg, zc, zo, s_prev, False), reps
            )
            bwd = _time(
                lambda: kernels.lstm_gates_backward(
                    dh, ds_in, f, g, c, q, s, s_prev, False
                ),
                reps,
            )
            soft = _time(lambda: kernels.softmax_rows(dh), reps)
            rows.append((name, fwd, bwd, soft))
    finally:
        kernels.use_backend(restore)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--hidden", type=int, default=512)
    ap.add_argument("--reps", type=int, default=200)
    args = ap.parse_args()

    rows = bench(args.batch, args.hidden, args.reps)
    print(f"batch={args.batch} hidden={args.hidden} reps={args.reps} (best of)")
    print(f"{'backend':8s} {'forward':>12s} {'backward':>12s} {'softmax':>12s}")
    for name, fwd, bwd, soft in rows:
        print(f"{name:8s} {fwd*1e6:10.1f}us {bwd*1e6:10.1f}us {soft*1e6:10.1f}us")
    if len(rows) == 2:
        base, fast = rows[0], rows[1]
        print(
            f"\n{fast[0]} vs {base[0]}: "
            f"forward x{base[1]/fast[1]:.2f}, backward x{base[2]/fast[2]:.2f}, "
            f"softmax x{base[3]/fast[3]:.2f}"
        )


if __name__ == "__main__":
    main()
