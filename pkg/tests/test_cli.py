import json

from prefmatch.cli import main

from conftest import DATA


def test_gen_solve_eval(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    match = tmp_path / "m.txt"
    assert main(["gen", "--model", "uni", "--n", "8", "--density", "0.25", "--seed", "1",
                 "-o", str(inst)]) == 0
    assert main(["solve", "--algo", "amm", "-i", str(inst), "-o", str(match)]) == 0
    assert main(["eval", "-i", str(inst), "-m", str(match), "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["cardinality"] == len(match.read_text().splitlines())
    assert main(["oracle", "-i", str(inst), "--check", "amm", "-m", str(match)]) == 0


def test_oracle_summary(capsys):
    assert main(["oracle", "-i", str(DATA / "fix_a.txt")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["max_aupcr"] == "12/16"
    assert out["max_cardinality"] == 4


def test_oracle_check_failure(tmp_path, capsys):
    match = tmp_path / "m.txt"
    match.write_text("1 1\n")
    assert main(["oracle", "-i", str(DATA / "fix_a.txt"), "--check", "pom", "-m", str(match)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_bench_and_ranks(tmp_path):
    csv_path = tmp_path / "b.csv"
    table = tmp_path / "t.csv"
    assert main(["bench", "--models", "uni", "--sizes", "20", "--densities", "0.1..0.2:0.1",
                 "--replicates", "1", "--seed", "2", "-o", str(csv_path)]) == 0
    assert len(csv_path.read_text().splitlines()) == 1 + 2 * 5
    assert main(["ranks", "-i", str(csv_path), "-o", str(table)]) == 0
    lines = table.read_text().splitlines()
    assert lines[0] == "model,metric,POM,RMM,POPM,FM,AMM"
    assert lines[-1].startswith("UNI,rank_mean,")


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1\n1: 2\n")
    assert main(["solve", "--algo", "fm", "-i", str(bad)]) == 2
    assert main(["solve", "--algo", "fm", "-i", str(tmp_path / "missing.txt")]) == 4
    big = tmp_path / "big.txt"
    big.write_text("9 1\n" + "".join(f"{a}: 1\n" for a in range(1, 10)))
    assert main(["oracle", "-i", str(big)]) == 3
    assert main(["ranks", "-i", str(tmp_path / "missing.csv")]) == 4
