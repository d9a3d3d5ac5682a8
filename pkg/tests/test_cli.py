import json
from math import comb

import jsonschema
import pytest

from kholes.cli import REPORT_VERSION, load_schema, main
from kholes.io import read_points, write_points
from kholes.generators import gen_convex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def h64(tmp_path, capsys):
    path = tmp_path / "h64.pts"
    code, out, _ = run(capsys, "gen", "--kind", "horton", "--m", "6", "--out", str(path))
    assert code == 0 and out.split() == [str(path), "64"]
    return path


def test_gen_horton_file(h64):
    lines = [l for l in h64.read_text().splitlines() if not l.startswith("#")]
    assert len(lines) == 64


def test_gen_random_validated(tmp_path, capsys):
    path = tmp_path / "r.pts"
    assert run(capsys, "gen", "--kind", "random", "--n", "80", "--seed", "7", "--out", str(path))[0] == 0
    ps = read_points(path)
    assert len(ps) == 80


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "--kind", "convex", "--n", "5")
    assert code == 0 and len([l for l in out.splitlines() if not l.startswith("#")]) == 5


def test_gen_errors(capsys):
    code, _, err = run(capsys, "gen", "--kind", "horton", "--m", "20")
    assert code == 2 and "CoordinateOverflow" in err
    assert run(capsys, "gen", "--kind", "random")[0] == 2
    assert run(capsys, "gen", "--kind", "horton")[0] == 2
    assert run(capsys, "gen", "--kind", "random", "--n", "50", "--range", "10")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["gen", "--kind", "hexagonal", "--n", "5"])
    assert e.value.code == 2


def test_count_convex_and_horton(tmp_path, capsys, h64):
    path = tmp_path / "c.pts"
    write_points(path, gen_convex(10, 0))
    code, out, _ = run(capsys, "count", str(path), "--k", "5")
    assert code == 0 and out.strip() == "k=5 252"
    for alg in ("brute", "dp"):
        code, out, _ = run(capsys, "count", str(path), "--k", "3,4,5", "--algorithm", alg)
        assert out.split() == ["k=3", str(comb(10, 3)), "k=4", str(comb(10, 4)), "k=5", "252"]
    code, out, _ = run(capsys, "count", str(h64), "--k", "7")
    assert out.strip() == "k=7 0"


def test_count_json_schema(tmp_path, capsys, h64):
    out = tmp_path / "c.json"
    assert run(capsys, "count", str(h64), "--k", "5,6", "--json", str(out))[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, load_schema())
    assert doc["version"] == REPORT_VERSION and doc["counts"]["holes"] == {"5": 4524, "6": 990}


def test_count_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.pts"
    bad.write_text("0 0\n1 1\n2 2\n")
    code, _, err = run(capsys, "count", str(bad))
    assert code == 2 and "GeneralPositionError" in err
    junk = tmp_path / "junk.pts"
    junk.write_text("hello\n")
    assert run(capsys, "count", str(junk))[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["count", str(bad), "--k", "2"])
    assert e.value.code == 2


def test_assign_missing_file(capsys):
    assert run(capsys, "assign", "missing.pts")[0] == 2


def test_assign_and_pipeline_json(tmp_path, capsys, h64):
    schema = load_schema()
    a = tmp_path / "a.json"
    code, out, _ = run(capsys, "assign", str(h64), "--json", str(a))
    assert code == 0 and "distinct_holes=" in out
    jsonschema.validate(json.loads(a.read_text()), schema)
    p = tmp_path / "p.json"
    code, out, _ = run(capsys, "pipeline", str(h64), "--json", str(p))
    assert code == 0
    doc = json.loads(p.read_text())
    jsonschema.validate(doc, schema)
    assert all(doc["pipeline"]["verdicts"].values())


def test_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, text, _ = run(capsys, "verify", "--suite", "harborth", "--trials", "20", "--seed", "1", "--json", str(out))
    assert code == 0 and text.startswith("PASS harborth")
    jsonschema.validate(json.loads(out.read_text()), load_schema())
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2


def test_verify_failure_and_replay(tmp_path, capsys):
    # a stored counterexample: four points cannot hold a 5-hole
    art = tmp_path / "fail.json"
    art.write_text(json.dumps({"trial": 0, "seed": 1, "problems": [], "case": {"points": [[0, 0], [5, 1], [2, 7], [1, 3]]}}))
    code, out, _ = run(capsys, "verify", "--suite", "harborth", "--replay", str(art))
    assert code == 1 and "FAIL" in out


def test_bench(tmp_path, capsys):
    out = tmp_path / "b.json"
    code, text, _ = run(capsys, "bench", "--sizes", "8,12", "--k", "4", "--json", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, load_schema())
    assert [r["n"] for r in doc["bench"]["rows"]] == [8, 12]


def test_threads_flag_positions(tmp_path, capsys, h64):
    a = run(capsys, "--threads", "2", "count", str(h64), "--k", "5")
    b = run(capsys, "count", str(h64), "--k", "5", "--threads", "2")
    assert a == b and a[0] == 0
    assert run(capsys, "--threads", "0", "count", str(h64))[0] == 2
