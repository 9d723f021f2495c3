import json
import subprocess
import sys

import pytest

from annulus_strings.cli import main, parse_range
from annulus_strings.diagrams import HalfInt


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_diff_examples(capsys):
    assert run(capsys, "diff", "--complex", "f00", "--expr", "x(4)") == (0, "x(2)^2\n", "")
    code, out, _ = run(capsys, "diff", "--complex", "f22", "--expr", "c(1)*d(0)*x(-1)")
    assert code == 0 and out == "c(0)*d(0) + c(1)*d(-1) + a(1/2)*b(1/2)*x(-1)\n"
    assert run(capsys, "diff", "--complex", "f02", "--expr", "a(1/2)")[:2] == (0, "0\n")


def test_diff_parse_error(capsys):
    code, out, err = run(capsys, "diff", "--complex", "f00", "--expr", "x(")
    assert code == 2 and out == "" and "position 2" in err


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "f00", "--winding", "0", "--max-weight", "2", "--format", "json")
    (record,) = json.loads(out)
    assert code == 0
    assert record["dim_homology"] == 2 and record["predicted"] == 2
    assert list(record) == [
        "complex",
        "winding",
        "max_weight",
        "dim_space",
        "dim_kernel",
        "dim_image",
        "dim_homology",
        "predicted",
        "stable",
    ]


def test_homology_summand(capsys):
    code, out, _ = run(
        capsys, "homology", "--complex", "f22", "--summand", "a+b-", "--winding", "0", "--max-weight", "1", "--format", "json"
    )
    (record,) = json.loads(out)
    assert (record["dim_homology"], record["predicted"]) == (1, 1)


def test_half_integer_fields(capsys):
    code, out, _ = run(
        capsys, "homology", "--complex", "f02", "--summand", "a+", "--winding", "1/2", "--max-weight", "5/2", "--format", "json"
    )
    (record,) = json.loads(out)
    assert record["winding"] == "1/2" and record["max_weight"] == "5/2"
    assert record["dim_homology"] == 1


def test_f11_scan(capsys):
    code, out, _ = run(capsys, "table", "--complex", "f11", "--winding", "0", "--max-weight", "0..3", "--format", "json")
    rows = json.loads(out)
    assert [r["dim_homology"] for r in rows] == [1, 1, 0, 0]
    assert [r["stable"] for r in rows] == [False, False, True, True]
    assert all(r["predicted"] is None for r in rows)


def test_csv_format(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "f00", "--winding", "-1..1", "--max-weight", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0].startswith("complex,winding,max_weight")
    assert [line.split(",")[1] for line in lines[1:]] == ["-1", "0", "1"]


def test_jobs_do_not_change_output(capsys):
    args = ["homology", "--complex", "f11", "--winding", "-2..2", "--max-weight", "0..4", "--format", "json"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "3")
    assert serial == parallel


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", "--complex", "f00", "--winding", "0", "--max-weight", "2", "--summand", "a+b+"],
        ["homology", "--complex", "f22", "--winding", "0", "--max-weight", "x"],
        ["homology", "--complex", "f22", "--winding", "0..1/2", "--max-weight", "2"],
        ["homology", "--complex", "f02", "--winding", "1/2", "--max-weight", "3", "--summand", "a+b+"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["diff", "--complex", "f33", "--expr", "1"])
    assert info.value.code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "d2", "--max-weight", "6")
    assert code == 0 and out.strip().endswith("0 failed")


def test_verify_nonvanishing_reports(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "nonvanishing")
    assert code == 0
    assert "FAIL" not in out


def test_parse_range():
    assert parse_range("3") == [HalfInt(6)]
    assert parse_range("1/2..5/2") == [HalfInt(1), HalfInt(3), HalfInt(5)]
    assert parse_range("-1..1") == [HalfInt(-2), HalfInt(0), HalfInt(2)]


def test_byte_determinism_across_processes():
    cmd = [sys.executable, "-m", "annulus_strings", "homology", "--complex", "f22", "--winding", "0",
           "--max-weight", "0..3", "--format", "csv"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
