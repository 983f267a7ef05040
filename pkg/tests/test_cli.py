import json

import pytest

from schurhad.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.strip().split("\n") if line]


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert "schurhad 0.1.0" in capsys.readouterr().out


def test_regularity_grows(capsys):
    code, out, _ = run_cli(capsys, "regularity", "--link", "proj:j", "--grid", "10,20,40")
    assert code == 0
    recs = records(out)
    assert recs[0]["record"] == "config"
    verdicts = [r for r in recs if r["record"] == "regularity"]
    assert verdicts[0]["verdict"] == "GrowsWithN"


def test_regularity_pair_with_injectivity(capsys):
    code, out, _ = run_cli(capsys, "regularity", "--link-x", "sym-toeplitz",
                           "--link-y", "hankel", "--grid", "8,16")
    assert code == 0
    recs = records(out)
    inj = [r for r in recs if r["record"] == "joint-injectivity"][0]
    assert inj["injective"] is False
    assert inj["counterexample"] == [[1, 2], [2, 1]]


def test_regularity_needs_links(capsys):
    code, _, err = run_cli(capsys, "regularity", "--grid", "8,16")
    assert code == 2
    assert "error:" in err


def test_moments_identity_word(capsys):
    code, out, _ = run_cli(capsys, "moments", "--word", "1*", "--link-x", "toeplitz",
                           "--link-y", "hankel", "--n", "100", "--trials", "5", "--seed", "1")
    assert code == 0
    rec = [r for r in records(out) if r["record"] == "moment"][0]
    assert abs(rec["mean"] - 1.0) <= 0.5
    assert rec["theory_circular"] == 1
    assert rec["trials"] == 5


def test_verify_joint_circularity(capsys):
    code, out, _ = run_cli(capsys, "verify", "joint-circularity", "--word", "1*1*",
                           "--grid", "8,16", "--link-x", "toeplitz", "--link-y", "hankel")
    assert code == 0
    recs = records(out)
    counts = [r for r in recs if r["record"] == "count"]
    assert len(counts) == 6  # 3 pair partitions x 2 grid sizes
    nc = [r for r in counts if r["predicted_limit"]["num"] == 1]
    assert all(r["ratio"]["num"] == r["ratio"]["den"] for r in nc)


def test_verify_compat_csv(capsys):
    code, out, _ = run_cli(capsys, "verify", "compatibility", "--word", "1*1*",
                           "--grid", "8,16", "--link-x", "toeplitz", "--link-y", "hankel",
                           "--csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[1].startswith("pi_x,pi_y,n,")
    assert len(lines) == 2 + 12  # config + header + 6 pairs x 2 sizes


def test_verify_reconstruct(capsys):
    code, out, _ = run_cli(capsys, "verify", "reconstruct", "--word", "1*",
                           "--link-x", "toeplitz", "--link-y", "hankel",
                           "--n", "16", "--trials", "200", "--dist-x", "rademacher",
                           "--dist-y", "rademacher")
    assert code == 0
    rec = [r for r in records(out) if r["record"] == "reconstruction"][0]
    assert rec["combinatorial_sum"]["float"] == 1.0
    assert rec["agrees"] is True


def test_sample_csv_stdout(capsys):
    code, out, _ = run_cli(capsys, "sample", "--link-x", "toeplitz", "--link-y", "hankel",
                           "--n", "3", "--dist-x", "rademacher", "--dist-y", "rademacher",
                           "--seed", "5")
    assert code == 0
    lines = out.strip().split("\n")
    assert json.loads(lines[0])["record"] == "config"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 3 and all(len(r) == 3 for r in rows)
    assert all(float(v) in (-1.0, 1.0) for r in rows for v in r)


def test_spectrum_and_determinism(capsys):
    argv = ["spectrum", "--link-x", "toeplitz", "--link-y", "hankel", "--n", "60",
            "--seed", "4"]
    code, out1, _ = run_cli(capsys, *argv)
    assert code == 0
    code, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2
    rec = [r for r in records(out1) if r["record"] == "spectrum"][0]
    assert rec["n"] == 60 and rec["diagnostic"] is True


def test_figure_writes_files(tmp_path, capsys):
    prefix = str(tmp_path / "fig")
    code, out, _ = run_cli(capsys, "figure", "--link-x", "toeplitz", "--link-y", "hankel",
                           "--n", "50", "--seed", "2", "--out-prefix", prefix)
    assert code == 0
    assert (tmp_path / "fig_eigs.csv").exists()
    assert (tmp_path / "fig_stats.json").exists()
    rec = [r for r in records(out) if r["record"] == "figure"][0]
    assert rec["csv"].endswith("_eigs.csv")


def test_exit_codes(capsys):
    code, _, err = run_cli(capsys, "moments", "--word", "xyz", "--link-x", "toeplitz",
                           "--link-y", "hankel", "--n", "10")
    assert code == 2 and "error:" in err
    code, _, err = run_cli(capsys, "moments", "--word", "1*", "--link-x", "nope",
                           "--link-y", "hankel", "--n", "10")
    assert code == 2
    code, _, err = run_cli(capsys, "moments", "--word", "1*", "--link-x", "toeplitz",
                           "--link-y", "hankel", "--n", "2000", "--trials", "100",
                           "--budget-seconds", "0.01")
    assert code == 3 and "budget:" in err


def test_bad_seed_rejected(capsys):
    code, _, err = run_cli(capsys, "moments", "--word", "1*", "--link-x", "toeplitz",
                           "--link-y", "hankel", "--n", "10", "--seed", "abc")
    assert code == 2


def test_random_seed_recorded(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--link-x", "toeplitz", "--link-y", "hankel",
                           "--n", "30", "--seed", "random")
    assert code == 0
    cfg = records(out)[0]
    assert isinstance(cfg["seed"], int)
