import csv
import io
import math
import os
import subprocess
import sys

import pytest

from spincat import cli


def run(args):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.main(args)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def pairs(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line and not line.startswith("#"))


def test_headline_values():
    code, out = run(["headline"])
    assert code == 0
    kv = pairs(out)
    assert float(kv["F_prime"]) == pytest.approx(2.412e-4, rel=1e-3)
    assert float(kv["P0"]) == pytest.approx(0.9127, abs=1e-4)
    assert kv["regime"] == "in-window"


def test_fig1_csv_roundtrip(tmp_path):
    path = tmp_path / "fig1.csv"
    assert cli.main(["fig1", "--two-s-max", "12", "--out", str(path)]) == 0
    text = path.read_bytes()
    assert b"\r" not in text
    rows = list(csv.DictReader(io.StringIO(text.decode())))
    assert [int(r["two_s"]) for r in rows] == list(range(1, 13))
    for r in rows:
        value = float(r["F_prime"])
        assert f"{value:.12e}" == r["F_prime"]
        assert float(r["s"]) == int(r["two_s"]) / 2


def test_fig2_comments():
    code, out = run(["fig2", "--two-s", "20", "--two-j", "10"])
    lines = out.splitlines()
    assert lines[0] == "two_m,m,p_m,F_m,P_m"
    assert len([l for l in lines if not l.startswith("#")]) == 1 + 11
    comments = pairs("\n".join(l[2:] for l in lines if l.startswith("#")))
    assert float(comments["sum_p"]) == pytest.approx(1.0, abs=1e-12)


def test_half_integer_spin_flag():
    _, a = run(["headline", "--s", "7.5", "--j", "3"])
    _, b = run(["headline", "--two-s", "15", "--two-j", "6"])
    assert a == b


def test_rejects_non_half_integer(capsys):
    assert cli.main(["headline", "--s", "7.3"]) == 2
    assert "half-integer" in capsys.readouterr().err


def test_cost_ceiling(capsys):
    assert cli.main(["fig2", "--two-s", "4001"]) == 2
    assert "asymptotic" in capsys.readouterr().err
    assert cli.main(["fig1", "--two-s-max", "5000"]) == 2


def test_complex_amplitudes():
    code, out = run(["headline", "--two-s", "10", "--two-j", "10", "--c-plus", "0.6,0", "--c-minus", "0,0.8"])
    assert code == 0
    code, _ = run(["headline", "--c-plus", "1,0", "--c-minus", "1,0"])
    assert code == 2


def test_config_file_semantics(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ntwo_s = 20\ntwo_j=10\ng = 0.02\n")
    _, via_cfg = run(["headline", "--config", str(cfg)])
    _, via_flags = run(["headline", "--two-s", "20", "--two-j", "10", "--g", "0.02"])
    assert via_cfg == via_flags
    # explicit flags override the file
    _, override = run(["headline", "--config", str(cfg), "--g", "0.01"])
    _, direct = run(["headline", "--two-s", "20", "--two-j", "10", "--g", "0.01"])
    assert override == direct


def test_estimate_commands():
    kv = pairs(run(["estimate", "--delta-e-over-kt", "1.0"])[1])
    assert math.cos(float(kv["theta"])) == pytest.approx(math.tanh(0.5))
    kv = pairs(run(["estimate", "--delta-e", "1.380649e-23", "--temperature", "1"])[1])
    assert math.cos(float(kv["theta"])) == pytest.approx(math.tanh(0.5))
    assert run(["estimate"])[0] == 2
    kv = pairs(run(["estimate-env", "--t0", "1", "--p0", "0.968", "--s", "50", "--theta", str(math.pi / 6)])[1])
    assert float(kv["j"]) > 0 and int(kv["two_j"]) >= 1
    assert run(["estimate-env", "--t0", "1"])[0] == 2


def test_asymptotic_large_scale():
    code, out = run(["asymptotic", "--s", "1e8", "--j", "1e8", "--g", "1e-8", "--theta", "0.01"])
    assert code == 0
    kv = pairs(out)
    assert float(kv["F_prime_sq"]) == 0.0
    assert float(kv["log_F_prime_sq"]) < -700


def test_oracle_check_exit_code():
    code, out = run(["oracle-check"])
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["fig1", "--two-s-max", "30"],
    ["fig2", "--two-s", "30", "--two-j", "20"],
    ["headline", "--two-s", "30"],
    ["estimate-env", "--synthetic", "--two-s", "40", "--two-j", "40"],
    ["asymptotic"],
])
def test_deterministic_bytes(argv):
    assert run(argv)[1] == run(argv)[1]


def test_module_entry_pure_python_backend():
    env = dict(os.environ, SPINCAT_PURE_PYTHON="1")
    pure = subprocess.run([sys.executable, "-m", "spincat", "headline"], env=env,
                          capture_output=True, text=True, check=True).stdout
    kv_pure, kv_fast = pairs(pure), pairs(run(["headline"])[1])
    for key in ("F_prime", "P_prime", "F0", "P0", "mean_F", "mean_P"):
        assert float(kv_pure[key]) == pytest.approx(float(kv_fast[key]), rel=1e-11)
