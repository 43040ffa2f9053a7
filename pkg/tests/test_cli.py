import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from msaekit import config as config_mod
from msaekit.cli import main
from msaekit.config import RunConfig
from msaekit.errors import ConfigurationError
from msaekit.signal_io import Waveform, read_wav, write_wav
from msaekit.synth import speech_shaped_noise

FAST = ["--branches", "3", "--q", "2.0", "--base-window-ms", "1.0", "--kappa", "1", "--frame-len", "1024"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_design_bands(capsys):
    code, out, _ = run(capsys, "design-bands", "--branches", "5", "--q", "1.5")
    assert code == 0
    data = json.loads(out)
    assert data["edges"] == [0, 0.0625, 0.125, 0.25, 0.5, 1.0]
    assert data["edges_hz"] == [0, 500, 1000, 2000, 4000, 8000]


def test_design_bands_uniform(capsys):
    code, out, _ = run(capsys, "design-bands", "--branches", "4", "--uniform")
    assert json.loads(out)["edges"] == [0, 0.25, 0.5, 0.75, 1.0]


def test_bad_q_is_processing_error(capsys):
    code, _, err = run(capsys, "design-bands", "--branches", "3", "--q", "0.4")
    assert code == 1
    assert err.startswith("error: DomainError:")


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["design-bands"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2


@pytest.fixture
def pair(tmp_path):
    s = 0.1 * speech_shaped_noise(4000, seed=7)
    noisy = tmp_path / "noisy.wav"
    clean = tmp_path / "clean.wav"
    write_wav(clean, Waveform(s))
    rng = np.random.default_rng(5)
    write_wav(noisy, Waveform(s + 0.1 * rng.standard_normal(4000)))
    return noisy, clean


def test_reconstruct_report(capsys, tmp_path, pair):
    noisy, _ = pair
    out_wav = tmp_path / "r.wav"
    code, out, _ = run(capsys, "reconstruct", str(noisy), str(out_wav), "--report", *FAST)
    assert code == 0
    line = [l for l in out.splitlines() if l.startswith("reconstruction_error_db:")][0]
    assert float(line.split(":")[1]) < -10
    assert len(read_wav(out_wav)) == 4000


def test_reconstruct_default_config(capsys, tmp_path):
    p = tmp_path / "in.wav"
    write_wav(p, Waveform(0.1 * speech_shaped_noise(20480, seed=0)))
    code, out, _ = run(capsys, "reconstruct", "--config", "default", str(p), str(tmp_path / "o.wav"), "--report")
    assert code == 0 and "reconstruction_error_db:" in out


def test_analyze_csv_and_pgm(capsys, tmp_path, pair):
    noisy, _ = pair
    csv = tmp_path / "spec.csv"
    code, out, _ = run(capsys, "analyze", str(noisy), "--out", str(csv), "--frame", "0", *FAST)
    assert code == 0
    rows = np.loadtxt(csv, delimiter=",")
    # N_o = 16, frame 1024: T = 128 rows, K_T from the 3-branch Q=2 plan
    assert rows.shape[0] == 128 and (rows >= 0).all()
    pgm = tmp_path / "spec.pgm"
    code, _, _ = run(capsys, "analyze", str(noisy), "--out", str(pgm), *FAST)
    raw = pgm.read_bytes()
    header = raw.split(b"\n", 3)
    assert header[0] == b"P5" and header[2] == b"255"
    w, h = map(int, header[1].split())
    assert h == rows.shape[1] and len(header[3]) == w * h
    assert max(header[3]) == 255


def test_enhance_oracle_metrics(capsys, tmp_path, pair):
    noisy, clean = pair
    out_wav = tmp_path / "e.wav"
    metrics = tmp_path / "m.json"
    code, _, _ = run(
        capsys, "enhance-oracle", "--noisy", str(noisy), "--target", str(clean), "--mask", "wiener",
        "--floor-db", "-50", "--out", str(out_wav), "--metrics", str(metrics), *FAST,
    )
    assert code == 0
    m = json.loads(metrics.read_text())
    assert m["output_snr_db"] > m["input_snr_db"]
    for key in ("input_snr_db", "output_snr_db", "output_pmse", "reconstruction_error_db", "config"):
        assert key in m


def test_make_target_and_eval(capsys, tmp_path, pair):
    noisy, clean = pair
    out_wav = tmp_path / "t.wav"
    code, _, _ = run(capsys, "make-target", "--clean", str(clean), "--reverb", str(clean), "--out", str(out_wav))
    assert code == 0
    code, out, _ = run(capsys, "eval", "--ref", str(clean), "--est", str(out_wav))
    data = json.loads(out)
    assert set(data) == {"mse", "pmse", "snr_db"}
    assert data["snr_db"] > 60


def test_mix(capsys, tmp_path):
    out_wav = tmp_path / "x.wav"
    clean = tmp_path / "c.wav"
    code, out, _ = run(capsys, "mix", "--out", str(out_wav), "--clean-out", str(clean), "--snr", "5", "--seconds", "0.5")
    assert code == 0
    x, s = read_wav(out_wav).samples, read_wav(clean).samples
    snr = 10 * np.log10(np.sum(s**2) / np.sum((x - s) ** 2))
    assert snr == pytest.approx(5.0, abs=0.01)


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--ref", str(tmp_path / "nope.wav"), "--est", str(tmp_path / "nope.wav"))
    assert code == 1 and err.startswith("error:")


def test_wrong_rate(capsys, tmp_path):
    p = tmp_path / "8k.wav"
    write_wav(p, Waveform(np.zeros(8000), 8000))
    code, _, err = run(capsys, "reconstruct", str(p), str(tmp_path / "o.wav"))
    assert code == 1 and "ConfigurationError" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "msaekit", "design-bands", "--branches", "2", "--q", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["edges"] == pytest.approx([0, 0.6, 1.0])


# -- config ------------------------------------------------------------------


def test_config_round_trip(tmp_path):
    cfg = RunConfig(branches=4, quality_factor=None, kappa=2.0, floor_db=-20.5, beta=0.1 + 0.2)
    p = tmp_path / "run.cfg"
    config_mod.save(cfg, p)
    assert config_mod.load(p) == cfg


@given(
    st.integers(1, 9), st.one_of(st.none(), st.floats(0.51, 10)), st.floats(0.1, 100), st.floats(1, 4),
    st.integers(1, 10**6), st.floats(-200, 0), st.floats(0, 0.999), st.floats(0, 1e4), st.floats(0, 1),
)
def test_config_text_lossless(b, q, t, k, d, f, beta, mu, prior):
    cfg = RunConfig(b, q, t, k, d, f, 512, beta, mu, prior)
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_config_defaults():
    cfg = config_mod.load("default")
    assert (cfg.branches, cfg.quality_factor, cfg.base_window_ms, cfg.kappa) == (5, 2.0, 2.5, 1.5)
    assert cfg.frame_len == 20480 and cfg.floor_db == -50.0
    assert cfg.validate().msae().required_multiple == 640


def test_config_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        RunConfig.from_text("bogus = 1\n")
    with pytest.raises(ConfigurationError):
        RunConfig.from_text("branches five\n")
    with pytest.raises(ConfigurationError):
        RunConfig(frame_len=20000).validate()
    with pytest.raises(ConfigurationError):
        config_mod.load(tmp_path / "missing.cfg")


def test_config_file_and_flag_override(capsys, tmp_path, pair):
    noisy, _ = pair
    p = tmp_path / "run.cfg"
    p.write_text("# test\nbranches = 3\nbase_window_ms = 1.0\nkappa = 1\nframe_len = 1024\n")
    code, out, _ = run(capsys, "analyze", str(noisy), "--out", str(tmp_path / "a.csv"), "--config", str(p), "--branches", "2")
    assert code == 0 and "branch_bins=" in out
    assert out.count(",") == 1  # two branches
