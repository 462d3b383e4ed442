import json

from evoalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_matrix(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="ascii")
    return str(p)


def test_classify_e4(tmp_path, capsys):
    m = write_matrix(tmp_path, "m.txt", "2\n0+0i 5+0i\n0+0i 0+0i\n")
    code, out, _ = run(capsys, "classify", m)
    assert code == 0
    assert out.splitlines()[0] == "class: E4"


def test_classify_zero(tmp_path, capsys):
    m = write_matrix(tmp_path, "m.txt", "2\n0+0i 0+0i\n0+0i 0+0i\n")
    code, out, _ = run(capsys, "classify", m)
    assert code == 0 and "class: E0" in out


def test_classify_e5_canonical_order(tmp_path, capsys):
    m = write_matrix(tmp_path, "m.txt", "2\n1+0i 0.2+0i\n0.1+0i 1+0i\n")
    code, out, _ = run(capsys, "classify", m, "--field", "complex")
    assert code == 0
    assert "class: E5(0.1, 0.2)" in out
    assert "witness" in out


def test_classify_parse_error(tmp_path, capsys):
    m = write_matrix(tmp_path, "m.txt", "2\nbogus entries here\n0+0i 0+0i\n")
    code, _, err = run(capsys, "classify", m)
    assert code == 1 and "error" in err


def test_classify_missing_file(capsys):
    code, _, err = run(capsys, "classify", "does-not-exist.txt")
    assert code == 1


def test_classify_unclassifiable(tmp_path, capsys):
    m = write_matrix(tmp_path, "m.txt", "2\n0+0i 3+0i\n1e-12+0i 0+0i\n")
    code, _, err = run(capsys, "classify", m)
    assert code == 2 and "unclassifiable" in err


def test_cea_verify_pass_and_fail(tmp_path, capsys):
    good = tmp_path / "m1.json"
    good.write_text(json.dumps({
        "schema_version": 1, "family": "M1",
        "functions": {"rho": "s", "phi": "exp(t)"}, "samples": 400,
    }))
    code, out, _ = run(capsys, "cea", "verify", str(good))
    assert code == 0 and "pass" in out

    # M5 is not closed under composition across its threshold
    bad = tmp_path / "m5.json"
    bad.write_text(json.dumps({
        "schema_version": 1, "family": "M5",
        "functions": {"Phi": "exp(t)"}, "thresholds": {"C": 2.0}, "samples": 200,
    }))
    code, out, _ = run(capsys, "cea", "verify", str(bad))
    assert code == 3 and "FAIL" in out


def test_cea_verify_bad_config(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text("{oops")
    code, _, err = run(capsys, "cea", "verify", str(p))
    assert code == 1


def test_cea_diagram_outputs(tmp_path, capsys):
    cfg = tmp_path / "m5.json"
    cfg.write_text(json.dumps({
        "schema_version": 1, "family": "M5",
        "functions": {"Phi": "exp(t)"}, "thresholds": {"C": 2.0},
        "window": [0, 4, 0, 4], "resolution": 16, "property": "E4",
    }))
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "cea", "diagram", str(cfg), "--out", str(out_dir))
    assert code == 0
    csv = (out_dir / "diagram.csv").read_text()
    svg = (out_dir / "diagram.svg").read_text()
    assert csv.startswith("s,t,class_tag\n")
    assert svg.startswith("<svg")
    # the t > C band carries the E4 class color
    from evoalg.cea import CLASS_COLORS

    assert CLASS_COLORS["E4"] in svg
    band = [ln for ln in csv.splitlines()[1:] if float(ln.split(",")[1]) > 2.0
            and float(ln.split(",")[0]) <= float(ln.split(",")[1])]
    assert band and all(ln.endswith("E4") for ln in band)


def test_rbo_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "rbo", "verify", "--algebra", "E2", "--weight", "1",
                       "--samples", "40")
    assert code == 0
    assert "6/6 families pass" in out
    code, _, err = run(capsys, "rbo", "verify", "--algebra", "E9", "--weight", "0")
    assert code == 1


def test_rbo_search_zero_algebra(capsys):
    code, out, _ = run(capsys, "rbo", "search", "--algebra", "E0", "--weight", "0",
                       "--starts", "10")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "r11,r12,r21,r22,residual,annotation"
    assert len(lines) == 11  # every start converges on the zero algebra


def test_rbo_search_param_error(capsys):
    code, _, err = run(capsys, "rbo", "search", "--algebra", "E5", "--params", "nope",
                       "--weight", "1")
    assert code == 1


def test_rbo_systems_e1(capsys):
    code, out, _ = run(capsys, "rbo", "systems", "--algebra", "E1", "--weight", "0")
    assert code == 0
    assert "a^2 = 0" in out and "2*a*b = 0" in out and "c^2 = 0" in out and "b*c = 0" in out
    assert "tautologies" in out


def test_rbo_systems_unknown(capsys):
    code, _, err = run(capsys, "rbo", "systems", "--algebra", "E0", "--weight", "0")
    assert code == 1


def test_jobs_validation(capsys, tmp_path):
    m = write_matrix(tmp_path, "m.txt", "2\n0+0i 0+0i\n0+0i 0+0i\n")
    code, _, err = run(capsys, "--jobs", "0", "classify", m)
    assert code == 1


def test_search_csv_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        code, _, _ = run(capsys, "--seed", "3", "rbo", "search", "--algebra", "E2",
                         "--weight", "0", "--starts", "40", "--out", str(out))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
