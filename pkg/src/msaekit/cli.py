"""Command-line entry point: ``msaekit <subcommand> ...``.

Exit status is 0 on success, 2 on bad usage and 1 on processing errors;
errors print a single ``error: <kind>: <message>`` line to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import config as config_mod
from .autoencoder import encode, magnitude
from .bands import constant_q_plan, measured_q, uniform_plan
from .errors import MsaeError
from .masking import MASK_SOURCES, GainFloor, autoencode_signal, enhance
from .metrics import PmseParams, mse, pmse, reconstruction_error_db, segmental_snr_db, snr_db
from .signal_io import Waveform, read_wav, require_rate, split_frames, write_wav
from .synth import mix_at_snr, speech_shaped_noise
from .targets import wiener_target


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _emit_json(obj, path=None):
    text = _dump(obj) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _run_config(args) -> config_mod.RunConfig:
    cfg = config_mod.load(args.config)
    cfg = cfg.replace(
        branches=getattr(args, "branches", None),
        quality_factor=getattr(args, "q", None),
        base_window_ms=getattr(args, "base_window_ms", None),
        kappa=getattr(args, "kappa", None),
        frame_len=getattr(args, "frame_len", None),
        floor_db=getattr(args, "floor_db", None),
        stft_win=getattr(args, "win", None),
        beta=getattr(args, "beta", None),
        mu=getattr(args, "mu", None),
    )
    return cfg.validate()


def _read(path, rate: int) -> Waveform:
    w = read_wav(path)
    require_rate(w, rate)
    return w


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_design_bands(args):
    plan = uniform_plan(args.branches) if args.uniform else constant_q_plan(args.branches, args.q)
    _emit_json(
        {
            "branches": plan.num_bands,
            "quality_factor": plan.quality_factor,
            "edges": list(plan.edges),
            "edges_hz": plan.to_hz(args.sample_rate),
            "measured_q": [measured_q(plan, b) for b in range(1, plan.num_bands + 1)],
        }
    )


def _write_csv(path, mats):
    with open(path, "w") as fh:
        for m in mats:
            for row in m:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _write_pgm(path, mats):
    m = np.concatenate(mats, axis=0)  # (time, bins)
    img = np.log10(1.0 + m).T[::-1]  # bins on the vertical axis, low frequencies at the bottom
    peak = img.max()
    scaled = np.zeros(img.shape, dtype=np.uint8) if peak == 0 else np.round(255.0 * img / peak).astype(np.uint8)
    h, w = scaled.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(scaled.tobytes())


def cmd_analyze(args):
    cfg = _run_config(args)
    w = _read(args.input, cfg.sample_rate)
    msae = cfg.msae()
    frames = split_frames(w, cfg.frame_len)
    if args.frame is not None:
        if not 0 <= args.frame < len(frames):
            raise MsaeError(f"frame {args.frame} outside 0..{len(frames) - 1}")
        frames = [frames[args.frame]]
    mats = [magnitude(encode(f.payload, msae)) for f in frames]
    out = Path(args.out)
    if out.suffix.lower() == ".pgm":
        _write_pgm(out, mats)
    else:
        _write_csv(out, mats)
    print(
        f"wrote {out} frames={len(mats)} rows_per_frame={mats[0].shape[0]} bins={mats[0].shape[1]} "
        f"branch_bins={list(msae.bin_counts)}"
    )


def cmd_reconstruct(args):
    cfg = _run_config(args)
    w = _read(args.input, cfg.sample_rate)
    y = autoencode_signal(w, cfg.msae(), cfg.frame_len, threads=args.threads)
    write_wav(args.output, Waveform(y, w.sample_rate), pcm16=args.pcm16)
    if args.report:
        err = reconstruction_error_db(w.samples, y) if np.any(w.samples) else float("-inf")
        print(f"reconstruction_error_db: {err:.4f}")


def cmd_enhance_oracle(args):
    cfg = _run_config(args)
    x = _read(args.noisy, cfg.sample_rate)
    s = _read(args.target, cfg.sample_rate)
    if len(x) != len(s):
        raise MsaeError(f"noisy ({len(x)}) and target ({len(s)}) lengths differ")
    msae = cfg.msae()
    floor = GainFloor(cfg.floor_db)
    source = MASK_SOURCES[args.mask]()
    y = enhance(x, source, msae, floor, target=s, frame_len=cfg.frame_len, threads=args.threads)
    write_wav(args.out, Waveform(y, x.sample_rate), pcm16=args.pcm16)
    if args.metrics:
        recon = autoencode_signal(x, msae, cfg.frame_len, threads=args.threads)
        p = cfg.pmse_params()
        in_snr = snr_db(s.samples, x.samples)
        out_snr = snr_db(s.samples, y)
        metrics = {
            "mask": args.mask,
            "floor_db": cfg.floor_db,
            "samples": len(x),
            "frames": len(split_frames(x, cfg.frame_len)),
            "input_snr_db": in_snr,
            "output_snr_db": out_snr,
            "snr_improvement_db": out_snr - in_snr,
            "input_segsnr_db": segmental_snr_db(s.samples, x.samples),
            "output_segsnr_db": segmental_snr_db(s.samples, y),
            "input_pmse": pmse(s.samples, x.samples, p),
            "output_pmse": pmse(s.samples, y, p),
            "reconstruction_error_db": reconstruction_error_db(x.samples, recon),
            "config": dataclasses.asdict(cfg),
        }
        _emit_json(metrics, args.metrics)
    print(f"wrote {args.out}")


def cmd_make_target(args):
    s = read_wav(args.clean)
    v = read_wav(args.reverb)
    require_rate(s, v.sample_rate)
    if len(s) != len(v):
        raise MsaeError(f"clean ({len(s)}) and reverberant ({len(v)}) lengths differ")
    out, stats = wiener_target(s.samples, v.samples, args.win, return_stats=True)
    write_wav(args.out, Waveform(out, v.sample_rate), pcm16=args.pcm16)
    print(f"wrote {args.out} bins={stats.bins} zero_denominator={stats.zero_denominator} mean_gain={stats.mean_gain:.6f}")


def cmd_eval(args):
    ref = read_wav(args.ref)
    est = read_wav(args.est)
    if len(ref) != len(est):
        raise MsaeError(f"reference ({len(ref)}) and estimate ({len(est)}) lengths differ")
    p = PmseParams(args.beta, args.mu)
    _emit_json(
        {
            "mse": mse(ref.samples, est.samples),
            "pmse": pmse(ref.samples, est.samples, p),
            "snr_db": snr_db(ref.samples, est.samples),
        }
    )


def cmd_mix(args):
    if args.clean:
        clean = read_wav(args.clean)
        s, rate = clean.samples, clean.sample_rate
    else:
        rate = args.sample_rate
        s = 0.1 * speech_shaped_noise(int(round(args.seconds * rate)), seed=args.seed, sample_rate=rate)
    noisy, _ = mix_at_snr(s, args.snr, args.noise, seed=args.seed + 1)
    peak = float(np.max(np.abs(noisy))) if noisy.size else 0.0
    if peak > 1.0:
        s = s / peak
        noisy = noisy / peak
    write_wav(args.out, Waveform(noisy, rate), pcm16=args.pcm16)
    if args.clean_out:
        write_wav(args.clean_out, Waveform(s, rate), pcm16=args.pcm16)
    print(f"wrote {args.out} snr_db={snr_db(s, noisy):.4f}")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _config_flags(p, floor=False):
    p.add_argument("--config", default="default", help="config file path, or 'default'")
    p.add_argument("--branches", type=int)
    p.add_argument("--q", type=float, help="quality factor")
    p.add_argument("--base-window-ms", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--frame-len", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--pcm16", action="store_true", help="write 16-bit PCM instead of float32")
    if floor:
        p.add_argument("--floor-db", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--mu", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msaekit", description="Multiscale filterbank analysis, synthesis and oracle enhancement")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design-bands", help="print band edges as JSON")
    p.add_argument("--branches", type=int, required=True)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--sample-rate", type=int, default=16000)
    p.set_defaults(func=cmd_design_bands)

    p = sub.add_parser("analyze", help="export magnitude maps per processing frame")
    p.add_argument("input")
    p.add_argument("--out", required=True, help=".csv or .pgm")
    p.add_argument("--frame", type=int, help="export a single processing frame")
    _config_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="run the autoencoder path")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--report", action="store_true")
    _config_flags(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("enhance-oracle", help="enhance with an oracle mask")
    p.add_argument("--noisy", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--mask", choices=sorted(MASK_SOURCES), default="wiener")
    p.add_argument("--out", required=True)
    p.add_argument("--metrics")
    _config_flags(p, floor=True)
    p.set_defaults(func=cmd_enhance_oracle)

    p = sub.add_parser("make-target", help="oracle Wiener-filtered target")
    p.add_argument("--clean", required=True)
    p.add_argument("--reverb", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--win", type=int, default=512)
    p.add_argument("--pcm16", action="store_true")
    p.set_defaults(func=cmd_make_target)

    p = sub.add_parser("eval", help="MSE, pMSE and SNR of an estimate")
    p.add_argument("--ref", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--beta", type=float, default=0.97)
    p.add_argument("--mu", type=float, default=255.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("mix", help="write a noisy test mixture")
    p.add_argument("--out", required=True)
    p.add_argument("--clean", help="clean input; a speech-shaped signal is synthesized when omitted")
    p.add_argument("--clean-out", help="also write the clean signal used")
    p.add_argument("--snr", type=float, default=0.0)
    p.add_argument("--noise", choices=["white", "pink"], default="white")
    p.add_argument("--seconds", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-rate", type=int, default=16000)
    p.add_argument("--pcm16", action="store_true")
    p.set_defaults(func=cmd_mix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except MsaeError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: IOError: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
