"""Integration-style tests that exercise the command runtime end to end."""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from warpiso.config import apply_overrides, get_config
from warpiso.constants import EXIT_CERTIFICATION, EXIT_OK, EXIT_PRECONDITION
from warpiso.errors import ConfigError, PreconditionError
from warpiso.runtime import (
    REPRO_NAMES,
    cmd_repro,
    cmd_sweep,
    exit_code_for,
    repro,
    run_command,
    sweep,
    sweep_instance,
)
from tests.oracles import COSH_TWO_CELL_H, COSH_TWO_CELL_VOL_S


def _execute(
    command: str, config_name: str = "default", overrides: list[str] | None = None, **kwargs
) -> tuple[int, list[str]]:
    """Run one command and return its exit code with the emitted lines."""

    lines: list[str] = []
    config = apply_overrides(get_config(config_name), overrides or [])
    code = run_command(command, config, emit=lambda text: lines.extend(text.splitlines()), **kwargs)
    return code, lines


def _values(lines: list[str]) -> dict[str, str]:
    return dict(line.split("=", 1) for line in lines if "=" in line)


def test_check_reports_certification_verdict() -> None:
    """Log-convex warpings pass; a wavy one exits with the certification code."""

    code, lines = _execute("check")
    assert code == EXIT_OK
    assert _values(lines)["log_convex"] == "true"

    code, _ = _execute("check", overrides=["warping.expression=exp(-t)"])
    assert code == EXIT_OK

    code, lines = _execute("check", overrides=["warping.expression=sin(t) + 2"])
    assert code == EXIT_CERTIFICATION
    assert _values(lines)["log_convex"] == "false"


def test_verify_reports_constant_height_and_calibration() -> None:
    code, lines = _execute("verify")
    values = _values(lines)
    assert code == EXIT_OK
    assert float(values["H"]) == pytest.approx(COSH_TWO_CELL_H, abs=1e-8)
    assert float(values["vol_S"]) == pytest.approx(2.0 * COSH_TWO_CELL_VOL_S, abs=1e-8)
    assert float(values["margin"]) > 0.0
    assert values["equality"] == "none"
    assert values["calibration.chain_ok"] == "true"
    assert values["warnings"] == ""


def test_verify_detects_log_linear_equality() -> None:
    _, lines = _execute("verify", "horosphere")
    values = _values(lines)
    assert values["equality"] == "log_linear_equality"
    assert abs(float(values["margin"])) <= 1e-9


def test_verify_appends_csv_rows(tmp_path: Path) -> None:
    """The header is written once; every run adds a row."""

    target = tmp_path / "reports.csv"
    for _ in range(2):
        code, _ = _execute("verify", csv_append=target)
        assert code == EXIT_OK
    rows = target.read_text(encoding="utf-8").splitlines()
    assert len(rows) == 3
    assert rows[0].split(",")[:3] == ["vol_room", "vol_floor", "H"]
    assert rows[1] == rows[2]


def test_omega_writes_critical_points_and_checks_the_bound(tmp_path: Path) -> None:
    target = tmp_path / "crit.csv"
    code, lines = _execute("omega", "ex2", output=target)
    values = _values(lines)
    assert code == EXIT_OK
    assert values["source"] == "first_critical_value"
    assert float(values["omega"]) < 2.0
    assert values["bound.ok"] == "true"
    rows = target.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "h_star,crit_value"
    assert len(rows) == 2


def test_omega_precondition_failure_propagates() -> None:
    with pytest.raises(PreconditionError) as info:
        _execute("omega", "ex4")
    assert exit_code_for(info.value) == EXIT_PRECONDITION


def test_profile_csv_is_byte_identical_across_runs(tmp_path: Path) -> None:
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    _execute("profile", "ex3", output=first)
    code, lines = _execute("profile", "ex3", output=second)
    assert code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    rows = first.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "h,Iprofile,nfprime_over_f"
    assert len(rows) == 257
    assert _values(lines)["critical_point_count"] == "0"
    assert b"\r" not in first.read_bytes()


def test_profile_without_output_streams_csv() -> None:
    code, lines = _execute("profile", "ex3", overrides=["window.samples=5"])
    assert code == EXIT_OK
    assert lines[0] == "h,Iprofile,nfprime_over_f"
    assert len(lines) == 6


def test_dido_command() -> None:
    code, lines = _execute("dido")
    assert code == EXIT_OK
    assert float(_values(lines)["chosen_h"]) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ConfigError):
        _execute("dido", "ex2")


def test_trace_records_run_boundaries(tmp_path: Path) -> None:
    trace = tmp_path / "trace.jsonl"
    _execute("verify", trace_path=trace)
    events = [json.loads(line) for line in trace.read_text(encoding="utf-8").splitlines()]
    assert events[0]["event"] == "run_start"
    assert events[0]["config"] == "default"
    assert (events[-1]["event"], events[-1]["exit_code"]) == ("run_end", EXIT_OK)
    stages = [e["stage"] for e in events if e["event"] == "stage"]
    assert stages == ["space", "verify", "calibration"]


@pytest.mark.parametrize("name", REPRO_NAMES)
def test_repro_examples_pass(name: str) -> None:
    result = repro(name)
    assert result.passed, f"Failed checks for {name}: {result.checks}"


def test_repro_details() -> None:
    ex2 = repro("ex2")
    assert ex2.details["critical_point_count"] == 1
    assert math.isclose(float(ex2.details["plateau"]), 2.0, abs_tol=1e-3)

    lines: list[str] = []
    assert cmd_repro("ex4", emit=lines.append) == EXIT_OK
    assert "passed=true" in lines
    with pytest.raises(ConfigError):
        repro("ex5")


async def test_sweep_is_independent_of_scheduling() -> None:
    """Concurrent verification matches a plain loop instance by instance."""

    outcomes = await sweep(8, seed=3, tol_verify=1e-8)
    expected = [sweep_instance(index, 3, 1e-8) for index in range(8)]
    assert [o.index for o in outcomes] == list(range(8))
    assert [o.report for o in outcomes] == [e.report for e in expected]
    assert not any(o.violated for o in outcomes)


def test_sweep_output_is_deterministic(tmp_path: Path) -> None:
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cmd_sweep(12, 4, tol_verify=1e-8, output=first) == EXIT_OK
    assert cmd_sweep(12, 4, tol_verify=1e-8, output=second) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    rows = first.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "index,a,b,H,vol_S,vol_C_vertical,margin"
    assert len(rows) == 13
    assert all(float(row.split(",")[-1]) >= -1e-6 for row in rows[1:])
