import json

import pytest

from ampletori.cli import main

GAUSS_ALGEBRA = {"factors": [["1", "0", "1"]], "order_basis": None}
CUBIC_ALGEBRA = {"factors": [["-1", "1", "0", "1"]], "order_basis": None}


@pytest.fixture
def gauss_file(tmp_path):
    p = tmp_path / "gaussian.json"
    p.write_text(json.dumps(GAUSS_ALGEBRA))
    return str(p)


@pytest.fixture
def cubic_file(tmp_path):
    p = tmp_path / "cubic.json"
    p.write_text(json.dumps(CUBIC_ALGEBRA))
    return str(p)


def test_check_ample_exit_codes(gauss_file, capsys):
    assert main(["check-ample", "--algebra", gauss_file, "--ambient", "SL", "--places", "inf,5"]) == 0
    assert main(["check-ample", "--algebra", gauss_file, "--ambient", "SL", "--places", "inf"]) == 2


def test_check_ample_json_certificate(gauss_file, capsys):
    code = main(["--json", "check-ample", "--algebra", gauss_file, "--places", "inf,5"])
    out = capsys.readouterr().out
    assert code == 0
    cert = json.loads(out)
    assert cert["verdict"] == "S-ample"
    assert cert["local_ranks"] == {"inf": 0, "p:5": 1}


def test_local_rank_cli(cubic_file, capsys):
    assert main(["local-rank", "--algebra", cubic_file, "--place", "inf"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_units_search_cli(gauss_file, capsys):
    code = main([
        "--json", "units", "search", "--algebra", gauss_file, "--bound", "2",
        "--norms", "1,-1",
    ])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 4


def test_units_verify_cli(gauss_file, tmp_path, capsys):
    sysfile = tmp_path / "system.json"
    sysfile.write_text(json.dumps({
        "torsion": {"element": ["0", "1"], "order": 4},
        "free": [["4/5", "3/5"]],
        "s_primes": [5],
    }))
    code = main([
        "--json", "units", "verify", "--algebra", gauss_file,
        "--system", str(sysfile), "--s-primes", "5",
    ])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verified"] and data["rank"] == 1


def test_construct_cli(tmp_path, cubic_file, capsys):
    reqfile = tmp_path / "request.json"
    reqfile.write_text(json.dumps({
        "algebra": CUBIC_ALGEBRA,
        "ambient": "SL",
        "places": "inf",
        "unit_source": {"search": {"coord_bound": 3}},
    }))
    code = main(["--json", "construct", str(reqfile)])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "S-ample"
    assert report["generators"]["torus"] == [[["0", "0", "1"], ["1", "0", "-1"], ["0", "1", "0"]]]


def test_construct_byte_identical(tmp_path, capsys):
    reqfile = tmp_path / "request.json"
    reqfile.write_text(json.dumps({
        "algebra": GAUSS_ALGEBRA,
        "ambient": "SL",
        "places": "inf,5",
        "unit_source": {"search": {"coord_bound": 3}},
    }))
    main(["--json", "construct", str(reqfile)])
    out1 = capsys.readouterr().out
    main(["--json", "construct", str(reqfile)])
    out2 = capsys.readouterr().out
    assert out1 == out2


def test_error_exit_code_and_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["--json", "check-ample", "--algebra", str(bad), "--places", "inf"])
    assert code == 1
    err = json.loads(capsys.readouterr().out)
    assert "error" in err and err["error"]["module"] == "cli"


def test_ramified_place_is_error_exit(cubic_file, capsys):
    code = main(["--json", "check-ample", "--algebra", cubic_file, "--places", "inf,31"])
    assert code == 1
    err = json.loads(capsys.readouterr().out)
    assert err["error"]["module"] == "places"


def test_undecidable_exit_code(tmp_path, capsys):
    # multi-factor algebras fail condition (i): exit 2, not an error
    algebra = {"factors": [["-1", "1"], ["-2", "1"]], "order_basis": None}
    p = tmp_path / "qq.json"
    p.write_text(json.dumps(algebra))
    assert main(["check-ample", "--algebra", str(p), "--places", "inf"]) == 2


def test_units_verify_dependent_system_exits_one(gauss_file, tmp_path, capsys):
    sysfile = tmp_path / "dependent.json"
    sysfile.write_text(json.dumps({
        "torsion": {"element": ["0", "1"], "order": 4},
        "free": [["2", "1"], ["3", "4"]],  # (2+i) and (2+i)^2: dependent
        "s_primes": [5],
    }))
    code = main([
        "--json", "units", "verify", "--algebra", gauss_file,
        "--system", str(sysfile), "--s-primes", "5",
    ])
    assert code == 1
    data = json.loads(capsys.readouterr().out)
    assert not data["verified"] and "dependent" in data["witness"]


def test_verify_paper_cli(capsys):
    code = main(["--json", "verify-paper"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["all_pass"]
    assert [r["example"] for r in data["rows"]] == ["5.1", "5.2", "5.3", "5.4"]


@pytest.mark.parametrize(
    "argv",
    [
        ["check-ample", "--algebra", "{g}", "--places", "inf,notaprime"],
        ["check-ample", "--algebra", "{g}", "--places", "5"],  # misses inf
        ["check-ample", "--algebra", "/nonexistent.json", "--places", "inf"],
        ["local-rank", "--algebra", "{g}", "--place", "xyz"],
        ["units", "verify", "--algebra", "{g}"],  # missing --system
        ["units", "search", "--algebra", "{g}", "--norms", "abc"],
    ],
)
def test_error_taxonomy_is_total(argv, gauss_file, capsys):
    # every malformed input maps to exit 1 and a JSON error object
    argv = [a.replace("{g}", gauss_file) for a in argv]
    code = main(["--json"] + argv)
    assert code == 1
    err = json.loads(capsys.readouterr().out)
    assert "error" in err and "message" in err["error"] and "module" in err["error"]
