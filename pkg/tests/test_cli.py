"""CLI contract: flags, CSV schema, determinism and exit codes."""

import csv

import pytest

from rodfiter import cli, harness
from rodfiter.iteration import DegreeBudgetError


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    rc = cli.main(list(argv) + ["--out", str(out)])
    return rc, out


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_reconstruct_schema_and_formatting(tmp_path):
    rc, out = run(tmp_path, "reconstruct", "--horizon-s", "0.16")
    assert rc == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = read_rows(out)
    assert rows[0] == list(harness.ERROR_HEADER)
    assert len(rows) > 1
    for row in rows[1:]:
        assert len(row) == 6
        float(row[0]), int(row[2]), int(row[3])
        err = float(row[4])
        # %.17g survives a float round trip
        assert f"{err:.17g}" == row[4]


def test_byte_identical_reruns(tmp_path):
    args = ("noise-run", "--arw-deg-sqrt-h", "0.002", "--seed", "3",
            "--horizon-s", "0.16")
    rc1, a = run(tmp_path, *args, name="a.csv")
    rc2, b = run(tmp_path, *args, name="b.csv")
    assert rc1 == rc2 == 0
    assert a.read_bytes() == b.read_bytes()


def test_compare_lists_every_method(tmp_path):
    rc, out = run(tmp_path, "compare", "--samples", "5", "--horizon-s", "0.1")
    assert rc == 0
    methods = {row[1] for row in read_rows(out)[1:]}
    assert methods == set(harness.ALL_METHODS)


def test_noise_run_includes_bound_rows(tmp_path):
    rc, out = run(tmp_path, "noise-run", "--bias-deg-h", "5e-3,-3e-3,4e-3",
                  "--arw-deg-sqrt-h", "0.002", "--horizon-s", "0.16")
    assert rc == 0
    bounds = [row for row in read_rows(out)[1:] if row[1] == "prop2-bound"]
    assert len(bounds) == 2
    assert all(float(row[4]) > 0.0 for row in bounds)


def test_sweep_schema(tmp_path):
    rc, out = run(tmp_path, "sweep-convergence")
    assert rc == 0
    rows = read_rows(out)
    assert rows[0] == list(harness.SWEEP_HEADER)
    assert [int(row[0]) for row in rows[1:]] == list(range(2, 11))


def test_validation_failures_exit_2(tmp_path, capsys):
    rc, _ = run(tmp_path, "reconstruct", "--samples", "1")
    assert rc == 2
    rc, _ = run(tmp_path, "reconstruct", "--rate-hz", "0")
    assert rc == 2
    rc, _ = run(tmp_path, "reconstruct", "--alpha-deg", "95")
    assert rc == 2
    assert "invalid run specification" in capsys.readouterr().err


def test_bad_flag_values_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "reconstruct", "--method", "simpson")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "reconstruct", "--bias-deg-h", "1,2")
    assert exc.value.code == 2


def test_numerical_failures_exit_3(tmp_path, monkeypatch, capsys):
    def boom(*a, **kw):
        raise DegreeBudgetError(20000, 16384)

    monkeypatch.setattr(harness, "run_reconstruct", boom)
    rc, _ = run(tmp_path, "reconstruct")
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err


def test_divergent_scenario_still_writes_rows(tmp_path):
    rc, out = run(tmp_path, "reconstruct", "--coning-freq-pi", "80",
                  "--sample-kind", "velocity", "--iterations", "9",
                  "--horizon-s", "0.08")
    assert rc == 0
    rows = read_rows(out)[1:]
    assert rows
    assert all("precondition_ge_2" in row[5] for row in rows)
