import io
import json

import pytest

from rfree.cli import main, parse_scan_csv, CSV_COLUMNS


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_with_oracle(capsys):
    code, out, _ = run_cli(["count", "--r", "2", "--k", "1", "--x", "10", "--oracle"], capsys)
    assert code == 0
    assert "V = 14" in out
    assert "oracle = 14" in out
    assert "agreement = true" in out


def test_count_r1_k2_x1(capsys):
    code, out, _ = run_cli(["count", "--r", "1", "--k", "2", "--x", "1"], capsys)
    assert code == 0
    assert "V = 8" in out


def test_count_rejects_negative_x(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["count", "--r", "1", "--k", "2", "--x", "-1"])
    assert exc.value.code == 2


def test_count_csv_and_json(capsys):
    code, out, _ = run_cli(
        ["count", "--r", "2", "--k", "1", "--x", "10", "--format", "csv"], capsys
    )
    assert code == 0
    rows = parse_scan_csv(io.StringIO(out))
    assert rows[0].x == 10 and rows[0].V == 14

    code, out, _ = run_cli(
        ["count", "--r", "2", "--k", "1", "--x", "10", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["V"] == "14"           # exact integers as strings
    assert payload[0]["x"] == "10"
    assert set(payload[0]) == set(CSV_COLUMNS)


def test_jordan_command(capsys):
    code, out, _ = run_cli(
        ["jordan", "--n", "6", "--r", "1", "--k", "1", "--oracle"], capsys
    )
    assert code == 0
    assert "= 2" in out
    assert "agreement = true" in out


def test_partial_sum_command(capsys):
    code, out, _ = run_cli(
        ["partial-sum", "--x", "100", "--r", "2", "--k", "3"], capsys
    )
    assert code == 0
    assert "agreement = true" in out
    direct = [l for l in out.splitlines() if l.startswith("direct")]
    bern = [l for l in out.splitlines() if l.startswith("bernoulli")]
    assert direct[0].split(" = ")[1] == bern[0].split(" = ")[1]


def test_identity_command(capsys):
    code, out, _ = run_cli(["identity", "--r", "2", "--k", "3", "--x-max", "40"], capsys)
    assert code == 0
    assert "0 mismatches" in out


def test_identity_r1_k1(capsys):
    code, out, _ = run_cli(["identity", "--r", "1", "--k", "1", "--x-max", "50"], capsys)
    assert code == 0
    assert "0 mismatches" in out


def test_scan_row_count_and_round_trip(capsys):
    argv = ["scan", "--r", "1", "--k", "3", "--x-min", "10", "--x-max", "120",
            "--workers", "1"]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 111
    rows = parse_scan_csv(io.StringIO(out))
    assert rows[0].x == 10 and rows[-1].x == 120
    # parsing and re-rendering reproduces the file byte for byte
    rendered = [",".join(CSV_COLUMNS)]
    for row in rows:
        rendered.append(
            f"{row.x},{row.V},{row.main_term},{row.error},"
            f"{row.normalized_error},{row.density}"
        )
    assert "\n".join(rendered) + "\n" == out


def test_scan_is_deterministic(capsys):
    argv = ["scan", "--r", "2", "--k", "2", "--x-min", "10", "--x-max", "60",
            "--workers", "1"]
    _, first, _ = run_cli(argv, capsys)
    _, second, _ = run_cli(argv, capsys)
    assert first == second


def test_scan_rejects_inverted_range(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--r", "1", "--k", "2", "--x-min", "10", "--x-max", "5"])
    assert exc.value.code == 2


def test_scan_to_file_and_report(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, _ = run_cli(
        ["scan", "--r", "2", "--k", "2", "--x-min", "10", "--x-max", "400",
         "--workers", "1", "--output", str(out_path)],
        capsys,
    )
    assert code == 0
    code, out, _ = run_cli(
        ["report", "--split", "200", "--input", str(out_path)], capsys
    )
    assert code == 0
    assert "ratio = " in out


def test_report_constant_rows(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    header = ",".join(CSV_COLUMNS)
    rows = [f"{x},1,1.0,1.0,2.500,0.5" for x in (1, 5, 9)]
    csv_path.write_text(header + "\n" + "\n".join(rows) + "\n")
    code, out, _ = run_cli(["report", "--split", "5", "--input", str(csv_path)], capsys)
    assert code == 0
    assert "ratio = 1" in out


def test_report_empty_window_fails(capsys, tmp_path):
    csv_path = tmp_path / "rows.csv"
    header = ",".join(CSV_COLUMNS)
    csv_path.write_text(header + "\n1,1,1.0,1.0,2.5,0.5\n")
    code, _, err = run_cli(["report", "--split", "100", "--input", str(csv_path)], capsys)
    assert code == 1
    assert "window" in err


def test_report_missing_input_reports_path(capsys, tmp_path):
    missing = tmp_path / "nope.csv"
    code, _, err = run_cli(["report", "--split", "5", "--input", str(missing)], capsys)
    assert code == 1
    assert str(missing) in err


def test_scan_sieve_limit_flag(capsys):
    code, out, _ = run_cli(
        ["scan", "--r", "2", "--k", "2", "--x-min", "10", "--x-max", "20",
         "--workers", "1", "--sieve-limit", "500"],
        capsys,
    )
    assert code == 0
    assert len(out.strip().splitlines()) == 12


def test_witness_large_command(capsys):
    code, out, _ = run_cli(
        ["witness", "--large", "--r", "2", "--k", "2", "--count", "5"], capsys
    )
    assert code == 0
    assert out.count("verdict = negative") == 5
    assert out.count("x = ") == 5


def test_witness_large_rejects_small_rk(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["witness", "--large", "--r", "2", "--k", "1"])
    assert exc.value.code == 2


def test_witness_small_command(capsys):
    code, out, _ = run_cli(["witness", "--small", "--r", "2", "--m", "1"], capsys)
    assert code == 0
    assert "verdict = negative" in out
    assert "target_bound = -1/20" in out


def test_witness_small_rejects_even_m(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["witness", "--small", "--r", "2", "--m", "2"])
    assert exc.value.code == 2


def test_witness_requires_branch(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["witness", "--r", "2", "--k", "2"])
    assert exc.value.code == 2


def test_zeta_command(capsys):
    code, out, _ = run_cli(["zeta", "--s", "4", "--precision", "1e-10"], capsys)
    assert code == 0
    assert "zeta(4) = 1.0823232337" in out
    assert "error_radius" in out


def test_precision_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("RFREE_PRECISION", "1e-6")
    code, out, _ = run_cli(
        ["count", "--r", "2", "--k", "1", "--x", "10", "--format", "csv"], capsys
    )
    assert code == 0
    data_line = out.strip().splitlines()[1]
    main_term = data_line.split(",")[2]
    assert len(main_term.split(".")[1]) == 6


def test_unknown_command_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
