import csv
import io
import subprocess
import sys

import pytest

from abcycle.abfinder import load_cert
from abcycle.cli import main
from abcycle.fklab import fk_bound
from abcycle.hypergraph import format_uhg, load_uhg
from abcycle.oracle import complete_hypergraph

FOUR = "6 3\n1 2 3\n2 3 4\n4 5 6\n5 6 1\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_degrees(files, capsys):
    assert main(["degrees", files("k.uhg", format_uhg(complete_hypergraph(6, 3))), "-d", "2"]) == 0
    assert "min_degree=4" in capsys.readouterr().out
    assert main(["degrees", files("f.uhg", FOUR), "-d", "1"]) == 0
    out = capsys.readouterr().out
    assert "min_degree=2" in out and "histogram=2:6" in out
    assert main(["degrees", files("e.uhg", ""), "-d", "1"]) == 2
    assert main(["degrees", "/nonexistent/x.uhg", "-d", "1"]) == 2


def test_usage_errors_exit_2(files):
    assert main([]) == 2
    assert main(["find", files("f.uhg", FOUR), "-a", "1", "-b", "1"]) == 2


def test_find_and_verify(files, tmp_path, capsys):
    k15 = files("k15.uhg", format_uhg(complete_hypergraph(15, 3)))
    cert = str(tmp_path / "c.txt")
    assert main(["find", k15, "-a", "1", "-b", "2", "--seed", "3", "--out", cert]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["attempts"] == "1" and row["succeeded"] == "1" and row["master_seed"] == "3"
    assert main(["verify", k15, cert]) == 0
    assert capsys.readouterr().out.strip() == "valid"

    empty = files("e.uhg", "6 3\n")
    assert main(["find", empty, "-a", "1", "-b", "2", "--attempts", "4"]) == 1
    (row,) = rows(capsys.readouterr().out)
    assert row["ore_failures"] == "4" and row["succeeded"] == "0"


def test_find_timing_column(files, capsys):
    k = files("k.uhg", format_uhg(complete_hypergraph(9, 3)))
    assert main(["find", k, "-a", "1", "-b", "2", "--timing"]) == 0
    assert "elapsed_ms" in capsys.readouterr().out


def test_verify_failures(files, capsys):
    bad_size = files("bad.txt", "2 1 2\nA: 1\nB: 2 3 4\nA: 4\nB: 5 6\n")
    assert main(["verify", files("f.uhg", FOUR), bad_size]) == 1
    assert "block size" in capsys.readouterr().out
    good = files("good.txt", "2 1 2\nA: 1\nB: 2 3\nA: 4\nB: 5 6\n")
    deleted = files("d.uhg", "6 3\n1 2 3\n2 3 4\n4 5 6\n")
    assert main(["verify", deleted, good]) == 1
    assert "missing edge: [1, 5, 6]" in capsys.readouterr().out
    assert main(["verify", deleted, files("junk.txt", "nonsense\n")]) == 2


def test_planted_find_recovers_plant(tmp_path, capsys):
    H, plant = str(tmp_path / "p.uhg"), str(tmp_path / "plant.txt")
    found = str(tmp_path / "found.txt")
    assert main(["gen", "planted", "9", "1", "2", "--seed", "5", "--out", H, "--cert", plant]) == 0
    assert main(["find", H, "-a", "1", "-b", "2", "--attempts", "20000", "--out", found]) == 0
    assert load_cert(found) == load_cert(plant)
    assert main(["oracle", H, "-a", "1", "-b", "2", "--out", str(tmp_path / "o.txt")]) == 0
    assert load_cert(str(tmp_path / "o.txt")) == load_cert(plant)


def test_oracle_negative_and_budget(files, capsys):
    H = files("par.uhg", "")
    assert main(["gen", "parity", "6", "3", "1,2,3", "even", "--out", H]) == 0
    assert main(["oracle", H, "-a", "1", "-b", "2"]) == 1
    k = files("k12.uhg", format_uhg(complete_hypergraph(12, 3)))
    assert main(["oracle", k, "-a", "1", "-b", "2", "--budget", "0"]) == 3


@pytest.mark.parametrize("kind,params", [
    ("complete", ["6", "3"]), ("random", ["8", "3", "0.4"]), ("parity", ["8", "4", "1,2"]),
    ("product", ["3", "6", "1", "2", "0.5"]),
])
def test_gen_round_trip(tmp_path, kind, params):
    p = str(tmp_path / "g.uhg")
    assert main(["gen", kind, *params, "--seed", "1", "--out", p]) == 0
    H = load_uhg(p)
    assert format_uhg(H) == open(p).read()


def test_product_find(tmp_path, capsys):
    p = str(tmp_path / "prod.uhg")
    assert main(["gen", "product", "3", "6", "1", "2", "--out", p]) == 0
    assert main(["find", p, "--out", str(tmp_path / "c.txt")]) == 0
    assert main(["verify", p, str(tmp_path / "c.txt")]) == 0
    assert main(["check", p, "--alpha", "0.5"]) == 1  # error term too large at this size


def test_check_exit_codes(files, capsys):
    assert main(["check", files("k.uhg", format_uhg(complete_hypergraph(6, 3))), "-a", "1"]) == 1
    out = capsys.readouterr().out
    assert "hypothesis_holds=False" in out and "actual_delta_a=10" in out


def test_fk_csv(tmp_path, capsys):
    out = str(tmp_path / "fk.csv")
    assert main(["fk", "--m", "12", "--l", "3", "--t", "4", "--theta", "1",
                 "--trials", "300", "--out", out]) == 0
    data = rows(open(out).read())
    assert [r["gamma"] for r in data] == ["0.5", "1", "1.5", "2", "2.5"]
    assert all(float(r["empirical_tail"]) == 0 for r in data)
    for r in data:
        assert float(r["bound"]) == pytest.approx(fk_bound(float(r["gamma"])), rel=1e-5)
    script = (tmp_path / "fk.gp").read_text()
    assert "fk.csv" in script and "plot" in script


def test_fk_deterministic(capsys):
    args = ["fk", "--m", "30", "--t", "10", "--trials", "3000", "--seed", "77"]
    main(args)
    first = capsys.readouterr().out
    main(args + ["--jobs", "2"])
    assert capsys.readouterr().out == first


def test_sweep(tmp_path, capsys):
    out = str(tmp_path / "s.csv")
    argv = ["sweep", "--n", "6", "--k", "3", "-a", "1", "-b", "2", "--p-grid", "0,0.5,0.9,1",
            "--trials", "15", "--attempts", "60", "--seed", "2", "--out", out]
    assert main(argv) == 0
    data = rows(open(out).read())
    assert data[0]["finder_success_rate"] == "0" and data[-1]["finder_success_rate"] == "1"
    for r in data:
        assert float(r["finder_success_rate"]) <= float(r["oracle_exists_rate"])
    first = open(out).read()
    assert main(argv) == 0
    assert open(out).read() == first


def test_oresucc_and_linkconc(tmp_path, capsys):
    k = str(tmp_path / "k.uhg")
    (tmp_path / "k.uhg").write_text(format_uhg(complete_hypergraph(12, 3)))
    out = str(tmp_path / "o.csv")
    assert main(["oresucc", k, "-a", "1", "-b", "2", "--trials", "25", "--seed", "4", "--out", out]) == 0
    data = rows(open(out).read())
    assert len(data) == 25 and [r["trial_index"] for r in data] == [str(i) for i in range(25)]
    assert all(r["ore_ok"] == "1" and r["master_seed"] == "4" for r in data)
    out2 = str(tmp_path / "l.csv")
    assert main(["linkconc", k, "-a", "1", "--trials", "100", "--out", out2]) == 0
    data = rows(open(out2).read())
    assert all(float(r["deviation_freq"]) == 0 for r in data)
    assert (tmp_path / "l.gp").exists()


def test_biham_and_orecheck(files, capsys):
    c6 = files("c6.adj", "3\n101\n110\n011\n")
    assert main(["orecheck", c6]) == 0
    assert main(["biham", c6]) == 0
    assert main(["biham", c6, "--exact"]) == 0
    m = files("m.adj", "3\n100\n010\n001\n")
    assert main(["orecheck", m]) == 1
    assert "violated" in capsys.readouterr().out
    assert main(["biham", m]) == 1
    assert main(["biham", files("bad.adj", "3\n10\n")]) == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "k.uhg"
    p.write_text(format_uhg(complete_hypergraph(6, 3)))
    r = subprocess.run([sys.executable, "-m", "abcycle.cli", "degrees", str(p), "-d", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "min_degree=10" in r.stdout
