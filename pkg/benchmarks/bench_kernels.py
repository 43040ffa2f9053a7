"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

The numpy timings come from a child process started with
MSAEKIT_DISABLE_JIT=1, so both paths run through the public API.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

CASES = [
    ("analyze N=40 full band", "analyze", 40),
    ("analyze N=640 full band", "analyze", 640),
    ("autoencode default frame", "autoencode", 0),
    ("enhance 3 s oracle wiener", "enhance", 0),
]


def _time(fn, repeat):
    fn()  # warm-up, includes JIT compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_cases(repeat):
    from msaekit import _kernels
    from msaekit.autoencoder import DEFAULT_CONFIG, autoencode
    from msaekit.masking import OracleWienerMask, enhance
    from msaekit.synth import mix_at_snr, speech_shaped_noise
    from msaekit.xform import analyze, build_kernels

    x = speech_shaped_noise(20480, seed=0)
    s = speech_shaped_noise(48000, seed=1)
    noisy, _ = mix_at_snr(s, 0.0, seed=2)
    out = {"backend": _kernels.backend()}
    for label, kind, n in CASES:
        if kind == "analyze":
            ks = build_kernels(n, 0.0, 1.0)
            fn = lambda ks=ks: analyze(x, ks)  # noqa: E731
        elif kind == "autoencode":
            fn = lambda: autoencode(x, DEFAULT_CONFIG)  # noqa: E731
        else:
            fn = lambda: enhance(noisy, OracleWienerMask(), target=s)  # noqa: E731
        out[label] = _time(fn, repeat)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(run_cases(args.repeat)))
        return
    results = []
    for flag in ("0", "1"):
        env = dict(os.environ, MSAEKIT_DISABLE_JIT=flag)
        proc = subprocess.run(
            [sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True,
        )
        results.append(json.loads(proc.stdout))
    jit, ref = results
    print(f"{'case':32s} {jit['backend']:>10s} {ref['backend']:>10s} {'speedup':>8s}")
    for label, _, _ in CASES:
        a, b = jit[label], ref[label]
        print(f"{label:32s} {a * 1e3:8.2f}ms {b * 1e3:8.2f}ms {b / a if a else np.nan:7.1f}x")


if __name__ == "__main__":
    main()
