import json

import pytest

from exotic_walks import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dist_rows(capsys):
    code, out, err = run(capsys, "dist", "--profile", "const", "--lambda", "0.25", "--n", "2")
    assert code == 0
    assert out == "j,mass\n0,0.25\n2,0.75\n"
    assert json.loads(err)["subcommand"] == "dist"


def test_dist_zero_and_exact(capsys):
    assert run(capsys, "dist", "--n", "0")[1] == "j,mass\n0,1\n"
    assert run(capsys, "dist", "--n", "2", "--exact")[1] == "j,mass\n0,1/4\n2,3/4\n"


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "dist", "--lambda", "0.3", "--n", "3")[0] == 2
    assert run(capsys, "dist", "--profile", "no-drift", "--lambda", "0.3", "--n", "3")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["dist"])
    assert e.value.code == 2
    monkeypatch.setenv("EXOTIC_WALKS_BUDGET", "10")
    assert run(capsys, "dist", "--n", "11")[0] == 3


def test_invariant_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli.qi, "pushforward_law_check", lambda n, cfg: 1)
    assert run(capsys, "qi", "law-check", "--n", "2")[0] == 4


def test_qi_commands(capsys):
    assert run(capsys, "qi", "dx", "--C", "4")[1] == "68/81\n"
    assert run(capsys, "qi", "map", "--C", "4", "--word", "cabb")[1] == "bbbcabb\n"
    assert run(capsys, "qi", "map", "--word", "bbbcabb", "--inverse")[1] == "cabb\n"
    assert run(capsys, "qi", "map", "--mode", "absolute", "--word", "abbbcabb")[1] == "abbbbbbcabb\n"
    code, out, _ = run(capsys, "qi", "verify", "--ball", "5", "--pairs", "50", "--depth", "60")
    assert code == 0 and json.loads(out)["max_ratio"] <= 4
    out = run(capsys, "qi", "a-series", "--horizon", "7")[1].splitlines()
    assert out[0] == "i,A_exact_num,A_exact_den,A_double" and out[-1].startswith("7,212,27,")
    assert json.loads(run(capsys, "qi", "law-check", "--n", "3")[1])["tv"] == "0"


def test_drift_and_tame(capsys, tmp_path):
    code = cli.main(["drift", "--profile", "const", "--horizon", "1000", "--out", str(tmp_path)])
    last = (tmp_path / "drift.csv").read_text().splitlines()[-1].split(",")
    assert code == 0 and last[0] == "1000" and abs(float(last[2]) - 0.5) <= 1e-3 + 1e-3
    code, out, _ = run(capsys, "drift", "--qi", "--checkpoints", "1")
    assert json.loads(out[out.index("{"):])["gap"] >= 0.01
    code, out, _ = run(capsys, "tame", "--horizon", "50", "--words", "2")
    rep = json.loads(out)
    assert rep["bounded_jumps"] and len(rep["support"]) == 4 and rep["rho_fit"] < 1
    assert all(r["exact"] >= r["eps"] for r in rep["irreducibility"])


def test_clt_command(capsys):
    code, out, _ = run(capsys, "clt", "--n", "400", "--sigma2", "0.75,1.0")
    assert code == 0 and len(json.loads(out)["ks"]) == 2
    assert run(capsys, "clt")[0] == 2


def test_out_dir_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["drift", "--profile", "no-drift", "--kind", "geometric",
                         "--checkpoints", "1,2,3", "--out", str(d)]) == 0
    for name in ("drift.csv", "summary.json", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    man = json.loads((a / "manifest.json").read_text())
    assert set(man["outputs"]) == {"drift.csv", "summary.json"}
    assert man["params"]["kind"] == "geometric" and "seed" in man["params"]
    assert b"\r" not in (a / "drift.csv").read_bytes()
