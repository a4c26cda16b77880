import json
import subprocess
import sys

import pytest

from gasketnet.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_distance(capsys):
    assert run(capsys, "distance", "--t", "3", "--from", "233", "--to", "312") == (0, "2\n", "")
    code, out, _ = run(capsys, "distance", "--t", "3", "--from", "132", "--to", "-",
                       "--method", "symbolic")
    assert (code, out) == (0, "2\n")
    code, out, _ = run(capsys, "distance", "--t", "3", "--from", "21", "--to", "312",
                       "--method", "recursive")
    assert (code, out) == (0, "3\n")


def test_distance_errors(capsys):
    code, _, err = run(capsys, "distance", "--t", "2", "--from", "111", "--to", "-")
    assert code == 2 and "not in V_2" in err
    code, _, err = run(capsys, "distance", "--t", "3", "--from", "1", "--to", "2",
                       "--method", "symbolic")
    assert code == 2
    code, _, _ = run(capsys, "distance", "--t", "3", "--from", "14", "--to", "2")
    assert code == 2


def test_generate(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--t", "1")
    assert code == 0
    assert out.splitlines()[0] == "-\t1" and len(out.splitlines()) == 6
    code, out, _ = run(capsys, "generate", "--t", "3", "--format", "metadata-json")
    assert json.loads(out)["vertex_count"] == 40
    target = tmp_path / "g.tsv"
    code, out, _ = run(capsys, "generate", "--t", "2", "--out", str(target), "--seed", "5")
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 42
    meta = json.loads((tmp_path / "g.tsv.meta.json").read_text())
    assert meta["command"] == "generate" and meta["seed"] == 5 and meta["threads"] == 1
    assert meta["edge_count"] == 42 and meta["elapsed_ms"] >= 0


def test_generate_cap(capsys):
    code, _, err = run(capsys, "generate", "--t", "13")
    assert code == 2 and "cap" in err
    code, _, _ = run(capsys, "generate", "--t", "3", "--build-cap", "2")
    assert code == 2


def test_apl(capsys):
    code, out, _ = run(capsys, "apl", "--t", "1")
    header, row = out.splitlines()
    assert header.startswith("t,pi,lambda,mu,nu")
    assert row.split(",")[-1] == "1.0"
    code, out, _ = run(capsys, "apl", "--t", "5", "--check-identity")
    assert code == 0 and out.splitlines()[1].endswith(",true")
    code, _, err = run(capsys, "apl", "--t", "9")
    assert code == 2 and "--mode sampled" in err
    code, out, _ = run(capsys, "apl", "--t", "10", "--mode", "sampled", "--pairs", "300",
                       "--seed", "1")
    assert code == 0 and out.startswith("t,estimate,std_err,pairs,seed\n10,")


def test_alpha_and_table(capsys):
    code, out, _ = run(capsys, "alpha", "--t", "3")
    assert out == "t,value_num,value_den,value_decimal\n3,2,9,0.222222222222\n"
    code, out, _ = run(capsys, "alpha", "--from", "1", "--to", "4", "--quantity", "chi")
    assert len(out.splitlines()) == 5 and out.splitlines()[1] == "1,3,4,0.75"
    code, out, _ = run(capsys, "table", "--paper")
    assert [ln.split(",")[1] for ln in out.splitlines()[1:]] == \
        ["0.2207", "0.2211", "0.2213", "0.2214", "0.2215", "0.2216"]
    code, _, _ = run(capsys, "alpha")
    assert code == 2


def test_renewal(capsys):
    code, out, _ = run(capsys, "renewal", "--t", "2000", "--exact")
    value = float(out.splitlines()[1].split(",")[3])
    assert code == 0 and abs(value - 2 / 9) < 1e-2
    code, out, _ = run(capsys, "renewal", "--t", "4", "--raw")
    assert out.splitlines()[1] == "4,2,3,0.666666666667"
    code, out, _ = run(capsys, "renewal", "--t", "30", "--mc", "--samples", "2000",
                       "--seed", "4")
    first = out
    assert code == 0 and out.startswith("t,estimate,std_err,samples,seed\n30,")
    _, again, _ = run(capsys, "renewal", "--t", "30", "--mc", "--samples", "2000",
                      "--seed", "4", "--threads", "2")
    assert again == first


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "geometry", "--tmax", "5")
    assert code == 0
    assert all(ln.startswith("PASS") for ln in out.splitlines()[:-1])


def test_verify_failure_exit_code(capsys, monkeypatch):
    from gasketnet import cli, verify
    monkeypatch.setattr(cli, "run_suite",
                        lambda s, t: [verify.Check("forced", False, 1, "11 22")])
    code, out, _ = run(capsys, "verify", "--suite", "neighbors")
    assert code == 1 and "first counterexample: 11 22" in out


def test_thread_resolution(capsys, tmp_path, monkeypatch):
    meta = tmp_path / "m.json"
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nthreads = 3\nseed=8\n")

    def threads(*extra):
        code, _, _ = run(capsys, "alpha", "--t", "2", "--meta", str(meta), *extra)
        assert code == 0
        return json.loads(meta.read_text())

    assert threads()["threads"] == 1
    monkeypatch.setenv("GASKETNET_THREADS", "2")
    assert threads()["threads"] == 2
    got = threads("--config", str(cfg))
    assert (got["threads"], got["seed"]) == (3, 8)
    assert threads("--config", str(cfg), "--threads", "4")["threads"] == 4

    cfg.write_text("bogus = 1\n")
    assert run(capsys, "alpha", "--t", "2", "--config", str(cfg))[0] == 2
    assert run(capsys, "alpha", "--t", "2", "--threads", "0")[0] == 2


def test_output_is_deterministic(capsys):
    a = run(capsys, "apl", "--t", "4")
    b = run(capsys, "apl", "--t", "4", "--threads", "3")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gasketnet", "alpha", "--t", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "3,2,9,0.222222222222"


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["apl"])
    assert exc.value.code == 2
