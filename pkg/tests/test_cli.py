"""CLI behavior: exit codes, output formats, determinism, worker cap."""

import numpy as np
import pytest

from amcx.cli import build_parser, main, run
from amcx.parallel import thread_map, worker_count


def _run(capsys, argv):
    status = main(argv)
    out = capsys.readouterr().out
    return status, out


def test_blowup_subcommand_passes(capsys):
    status, out = _run(capsys, ["blowup", "--n", "3"])
    assert status == 0
    assert '"name": "blowup"' in out
    assert '"pass": true' in out


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_missing_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_unwritable_out_exits_3(tmp_path):
    target = tmp_path / "no_such_dir" / "report.json"
    status = main(["blowup", "--n", "3", "--out", str(target)])
    assert status == 3


def test_json_output_deterministic(capsys):
    _, a = _run(capsys, ["blowup", "--n", "3", "--seed", "42"])
    _, b = _run(capsys, ["blowup", "--n", "3", "--seed", "42"])
    assert a == b


def test_out_file_and_csv(tmp_path):
    j = tmp_path / "r.json"
    c = tmp_path / "r.csv"
    assert main(["blowup", "--n", "3", "--out", str(j)]) == 0
    assert main(["blowup", "--n", "3", "--out", str(c), "--format", "csv"]) == 0
    assert j.read_text().startswith("{")
    lines = c.read_text().splitlines()
    assert lines[0].startswith("suite,case")
    assert len(lines) == 2


def test_plot_files_written(tmp_path):
    out = tmp_path / "rep.json"
    assert main(["blowup", "--n", "3", "--out", str(out), "--plot"]) == 0
    svg = tmp_path / "rep_blowup.svg"
    assert svg.exists()
    assert svg.read_text().startswith("<svg")


def test_identity_subcommand_fast(capsys):
    status, out = _run(
        capsys,
        ["identity", "--n", "3", "--sign", "plus", "--eps", "1e-2", "--samples", "50"],
    )
    assert status == 0
    assert '"max_rel_residual"' in out


def test_minors_subcommand_fast(capsys):
    status, out = _run(capsys, ["minors", "--n", "3", "--sign", "minus", "--samples", "100"])
    assert status == 0
    assert '"name": "minors"' in out


def test_run_reports_config():
    parser = build_parser()
    args = parser.parse_args(["blowup", "--n", "4", "--seed", "7"])
    report, status = run(args)
    assert status == 0
    assert report["config"]["n"] == 4
    assert report["config"]["seed"] == 7
    assert report["pass"] is True


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("AMCX_THREADS", "2")
    assert worker_count() == 2
    monkeypatch.setenv("AMCX_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("AMCX_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()


def test_thread_map_order_and_equivalence(monkeypatch):
    items = list(range(20))
    monkeypatch.setenv("AMCX_THREADS", "1")
    serial = thread_map(lambda v: v * v, items)
    monkeypatch.setenv("AMCX_THREADS", "4")
    parallel = thread_map(lambda v: v * v, items)
    assert serial == parallel == [v * v for v in items]


def test_sweep_subcommand_reduced(capsys):
    status, out = _run(
        capsys,
        [
            "sweep",
            "--n",
            "3",
            "--sign",
            "plus",
            "--grid-res",
            "9",
            "--eps-list",
            "1e-1,1e-2,1e-3",
            "--pairs",
            "1000",
        ],
    )
    assert status == 0
    assert '"sup_d2f"' in out
    assert '"holder_q"' in out


def test_admissible_subcommand_reduced(capsys):
    status, out = _run(
        capsys,
        [
            "admissible",
            "--n",
            "3",
            "--sign",
            "plus",
            "--grid-res",
            "9",
            "--rho-ladder",
            "0.05,0.1",
            "--eps-list",
            "1e-1,1e-3",
        ],
    )
    assert status == 0
    assert '"rho_star": 0.1' in out


def test_remark1_subcommand(capsys):
    status, out = _run(capsys, ["remark1", "--eps-list", "1e-1,1e-2,1e-3"])
    assert status == 0
    assert '"growth_passed": true' in out
