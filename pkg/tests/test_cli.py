import json
from pathlib import Path

import pytest

from excision_lab import cli, squares
from excision_lab.rings.finite import FiniteRing

EXAMPLE = str(Path(__file__).resolve().parent.parent / "docs" / "example.toml")


def call(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="in.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_example_objects():
    ws = cli.parse_input(EXAMPLE)
    Z4 = ws.rings["Z4"]
    assert isinstance(Z4, FiniteRing) and Z4.order == 4
    assert set(ws.squares) == {"glued"}
    assert set(ws.towers) == {"tor2", "kos"}


def test_glued_fiber_product_is_pullback():
    sq = cli.parse_input(EXAMPLE).squares["glued"]
    assert squares.is_pullback(sq).holds


def test_analyze_glued_exit_zero(capsys):
    code, out, _ = call(capsys, "analyze", EXAMPLE, "--json")
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["schema"] == "excision-lab/v1"
    assert set(rep) >= {"object", "command", "verdicts", "evidence", "config"}
    assert rep["object"] == "glued"


def test_analyze_reports_connectivity_two():
    cfg = cli.WorkspaceConfig(EXAMPLE, json=True)
    rep = cli.run("analyze", cfg, cli.build_parser().parse_args(["analyze", EXAMPLE]))
    assert rep.ok
    assert '"n": 2' in cli.dumps(rep)


@pytest.mark.parametrize("command", ["analyze", "sequence", "verify-square", "tor", "connectivity"])
def test_json_roundtrip_byte_identical(capsys, command):
    code, out, _ = call(capsys, command, EXAMPLE, "--json")
    assert code == cli.EXIT_OK
    text = out[:-1] if out.endswith("\n") else out
    assert cli.roundtrip(text) == text


def test_sequence_all_pass(capsys):
    code, out, _ = call(capsys, "sequence", EXAMPLE, "--json")
    assert code == cli.EXIT_OK
    assert all(v["status"] == "pass" for v in json.loads(out)["verdicts"])


def test_verify_square_subring_fails(capsys):
    code, out, _ = call(capsys, "verify-square", "--object", "subring")
    assert code == cli.EXIT_FAIL
    assert "FAIL" in out


def test_boxring_certificate(capsys):
    code, out, _ = call(capsys, "boxring", "--alpha", "1", "--degree", "5", "--json")
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["command"] == "boxring" and rep["verdicts"]


@pytest.mark.parametrize("argv", [
    ["toeplitz", "--degree", "3"],
    ["pro-tor", EXAMPLE, "--object", "tor2", "--degree", "2"],
    ["koszul", EXAMPLE, "--object", "kos", "--degree", "2"],
    ["dga-check", EXAMPLE, "--object", "De", "--ideal", "e", "--degree", "3"],
])
def test_other_commands_on_example(capsys, argv):
    code, out, err = call(capsys, *argv, "--json")
    assert code in (cli.EXIT_OK, cli.EXIT_FAIL), err
    rep = json.loads(out)
    assert rep["command"] == argv[0]
    text = out.rstrip("\n")
    assert cli.roundtrip(text) == text


def test_dga_check_dual_numbers_passes(capsys):
    code, out, _ = call(capsys, "dga-check", EXAMPLE, "--object", "De", "--ideal", "e", "--json")
    assert code == cli.EXIT_OK
    names = [v["name"] for v in json.loads(out)["verdicts"]]
    assert names == ["cone_quasi_iso", "cia_square", "square_zero_shift"]


def test_quiet_prints_nothing(capsys):
    code, out, err = call(capsys, "verify-square", "--object", "subring", "--quiet")
    assert code == cli.EXIT_FAIL
    assert out == "" and err == ""


def test_human_table(capsys):
    code, out, _ = call(capsys, "verify-square", EXAMPLE)
    assert code == cli.EXIT_OK
    assert out.startswith("verify-square: glued")
    assert "PASS" in out


def test_toml_syntax_error_has_line(tmp_path, capsys):
    path = write(tmp_path, "[ring.A]\nbase = 2\n\n[ring.B\nbase = 3\n")
    code, _, err = call(capsys, "analyze", path)
    assert code == cli.EXIT_INPUT
    assert "parse error" in err and "line 4" in err


def test_non_multiplicative_hom_rejected(tmp_path, capsys):
    text = (
        "[ring.D]\nbase = 2\ngenerators = [\"e\"]\nrelations = [\"e^2\"]\n\n"
        "[ring.T]\nbase = 2\ngenerators = [\"t\"]\nrelations = [\"t^2 - t\"]\n\n"
        "[hom.u]\nsource = \"D\"\ntarget = \"T\"\nimages = { e = \"t\" }\n"
    )
    path = write(tmp_path, text)
    code, _, err = call(capsys, "analyze", path)
    assert code == cli.EXIT_INPUT
    assert "line 11" in err and "hom u" in err


def test_unknown_ring_in_hom(tmp_path, capsys):
    path = write(tmp_path, "[ring.A]\nbase = 2\n\n[hom.h]\nsource = \"A\"\ntarget = \"Nope\"\n")
    code, _, err = call(capsys, "analyze", path)
    assert code == cli.EXIT_INPUT
    assert "line 4" in err and "Nope" in err


def test_unknown_section_rejected(tmp_path, capsys):
    path = write(tmp_path, "[widget.A]\nx = 1\n")
    code, _, err = call(capsys, "analyze", path)
    assert code == cli.EXIT_INPUT
    assert "unknown sections" in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = call(capsys, "analyze", str(tmp_path / "absent.toml"))
    assert code == cli.EXIT_INPUT


@pytest.mark.parametrize("flag", [["--degree", "0"], ["--horizon", "0"], ["--mod", "0"]])
def test_invalid_config(capsys, flag):
    code, _, err = call(capsys, "analyze", EXAMPLE, *flag)
    assert code == cli.EXIT_INPUT
    assert "at least 1" in err or "positive" in err


def test_workspace_config_invariants():
    with pytest.raises(ValueError):
        cli.WorkspaceConfig(degree=0)
    with pytest.raises(ValueError):
        cli.WorkspaceConfig(horizon=0)


def test_unknown_object(capsys):
    code, _, err = call(capsys, "analyze", EXAMPLE, "--object", "nothing")
    assert code == cli.EXIT_INPUT
    assert "nothing" in err


def test_cache_populated_and_reused(tmp_path, capsys):
    cache = tmp_path / "cache"
    code1, out1, _ = call(capsys, "tor", EXAMPLE, "--json", "--cache", str(cache))
    files = sorted(cache.glob("*.json"))
    assert code1 == cli.EXIT_OK and files
    code2, out2, _ = call(capsys, "tor", EXAMPLE, "--json", "--cache", str(cache))
    assert code2 == cli.EXIT_OK
    assert out1 == out2
    assert sorted(cache.glob("*.json")) == files


def test_corrupt_cache_entry_recomputed(tmp_path, capsys):
    cache = tmp_path / "cache"
    _, ref, _ = call(capsys, "tor", EXAMPLE, "--json", "--cache", str(cache))
    for f in cache.glob("*.json"):
        f.write_text("{not json")
    code, out, _ = call(capsys, "tor", EXAMPLE, "--json", "--cache", str(cache))
    assert code == cli.EXIT_OK and out == ref
    for f in cache.glob("*.json"):
        json.loads(f.read_text())


def test_cached_and_uncached_agree(tmp_path, capsys):
    _, plain, _ = call(capsys, "connectivity", EXAMPLE, "--json")
    _, cached, _ = call(capsys, "connectivity", EXAMPLE, "--json", "--cache", str(tmp_path / "c"))
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "config"}
    assert strip(plain) == strip(cached)


def test_unit_to_non_unit_rejected(tmp_path, capsys):
    text = (
        "[ring.F2]\nbase = 2\n\n"
        "[ring.D]\nbase = 2\ngenerators = [\"e\"]\nrelations = [\"e^2\"]\n\n"
        "[hom.bad]\nsource = \"F2\"\ntarget = \"D\"\nadditive = [[1, 0]]\n"
    )
    code, _, err = call(capsys, "analyze", write(tmp_path, text))
    assert code == cli.EXIT_INPUT
    assert "line 9" in err and "unit does not map to unit" in err
