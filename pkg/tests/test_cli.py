import math

import numpy as np
import pytest

from qfridge.cli import (
    ConfigError,
    ScenarioConfig,
    SweepResult,
    constants_report,
    emit_csv,
    format_scan_table,
    load_csv,
    main,
    parse_config,
    run_steady,
    scan_filters,
    sweep_th,
    validate_config,
)
from qfridge.reservoirs import COOLING_FILTERS

FIG_CONFIG = """
[system]
omega_c_ghz = 210
omega_h = 3
g = 9/17
gamma = 0.6

[reservoirs]
t_c_kelvin = 10
t_r_kelvin = 40
t_h_kelvin = 66.7

[filter]
h = 3
r = 2
c = 1

[background]
mode = thermal
t0_kelvin = 12
gamma = 0.6

[sweep]
variable = t_h
start_kelvin = 12
stop_kelvin = 120
points = 8
"""

NATURAL_CONFIG = """
[system]
omega_c = 1.0
omega_h = 3.0
g = 0.25
gamma = 0.05

[reservoirs]
t_h = 6.0
t_r = 4.0
t_c = 1.0

[filter]
h = 2
r = 1
c = 3

[background]
mode = vacuum
gamma = 0.05
"""


def test_parse_config_resolves_units():
    config = parse_config(FIG_CONFIG)
    p = config.params
    assert p.omega_c == 1.0
    assert p.omega_h == 3.0
    assert p.g == pytest.approx(9.0 / 17.0, abs=0)
    assert p.unit_scale == pytest.approx(2 * math.pi * 210e9)
    # 10 K at 2*pi*210 GHz is just below one natural unit
    assert config.reservoirs.cold.temperature == pytest.approx(0.99222, abs=5e-6)
    assert config.background.mode == "thermal"
    assert config.sweep.points == 8
    assert config.filter.kept_h == frozenset({3})


def test_parse_config_errors():
    with pytest.raises(ConfigError, match="missing \\[system\\]"):
        parse_config("[reservoirs]\nt_h = 1\nt_r = 0.5\nt_c = 0.2\n")
    with pytest.raises(ConfigError, match="not both"):
        parse_config("[system]\nomega_c = 1\nomega_c_ghz = 210\nomega_h = 3\n"
                      "g = 0.2\ngamma = 0.1\n[reservoirs]\nt_h = 3\nt_r = 2\nt_c = 1\n")
    with pytest.raises(ConfigError, match="cannot parse number"):
        parse_config("[system]\nomega_c = 1\nomega_h = three\ng = 0.2\ngamma = 0.1\n"
                      "[reservoirs]\nt_h = 3\nt_r = 2\nt_c = 1\n")
    with pytest.raises(ConfigError, match="needs omega_c_ghz"):
        parse_config("[system]\nomega_c = 1\nomega_h = 3\ng = 0.2\ngamma = 0.1\n"
                      "[reservoirs]\nt_h_kelvin = 3\nt_r = 2\nt_c = 1\n")
    with pytest.raises(ConfigError, match="strictly increasing"):
        parse_config("[system]\nomega_c = 1\nomega_h = 3\ng = 0.2\ngamma = 0.1\n"
                      "[reservoirs]\nt_h = 3\nt_r = 2\nt_c = 1\n"
                      "[sweep]\nvariable = t_h\nstart = 5\nstop = 4\npoints = 3\n")
    with pytest.raises(ConfigError, match="channel indices"):
        parse_config("[system]\nomega_c = 1\nomega_h = 3\ng = 0.2\ngamma = 0.1\n"
                      "[reservoirs]\nt_h = 3\nt_r = 2\nt_c = 1\n[filter]\nh = 5\n")


def test_config_round_trip_through_items():
    config = parse_config(FIG_CONFIG)
    items = dict(config.canonical_items())
    rebuilt = ScenarioConfig.from_items(items)
    assert rebuilt.canonical_items() == config.canonical_items()
    assert rebuilt.params == config.params
    assert rebuilt.reservoirs == config.reservoirs
    assert rebuilt.filter == config.filter
    assert rebuilt.background == config.background
    assert rebuilt.sweep == config.sweep


def test_run_steady_vacuum_background_report():
    report = run_steady(parse_config(NATURAL_CONFIG))
    assert "steady_states = 1" in report
    assert "unique = True" in report
    assert "stage = " in report
    assert "sigma = inf" in report


def test_run_steady_equal_temperatures_null():
    text = """
[system]
omega_c = 1.0
omega_h = 3.0
g = 0.25
gamma = 0.05

[reservoirs]
t_h = 2.0
t_r = 2.0
t_c = 2.0
"""
    report = run_steady(parse_config(text))
    for line in report.splitlines():
        if "] qdot_" in line:
            assert abs(float(line.split(" = ")[1])) <= 1e-12
        if "] sigma" in line:
            assert abs(float(line.split(" = ")[1])) <= 1e-12


def test_sweep_rows_and_determinism(tmp_path):
    config = parse_config(FIG_CONFIG)
    result = sweep_th(config)
    assert len(result.rows) == 8
    assert [r.sweep_value for r in result.rows] == sorted(
        r.sweep_value for r in result.rows)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(result, str(a))
    emit_csv(sweep_th(config), str(b))
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_sweep_parallel_matches_serial(tmp_path):
    config = parse_config(FIG_CONFIG)
    serial = sweep_th(config, parallel=1)
    parallel = sweep_th(config, parallel=2)
    assert serial.rows == parallel.rows


def test_csv_round_trip(tmp_path):
    config = parse_config(FIG_CONFIG)
    result = sweep_th(config)
    path = tmp_path / "sweep.csv"
    emit_csv(result, str(path))
    loaded = load_csv(str(path))
    assert loaded.config.canonical_items() == config.canonical_items()
    assert len(loaded.rows) == len(result.rows)
    for got, expect in zip(loaded.rows, result.rows):
        assert got.sweep_value == expect.sweep_value
        assert got.qdot_C == expect.qdot_C
        assert got.stage == expect.stage


def test_csv_first_law_validation_on_load(tmp_path):
    config = parse_config(FIG_CONFIG)
    result = sweep_th(config)
    path = tmp_path / "sweep.csv"
    emit_csv(result, str(path))
    lines = path.read_text().splitlines()
    cells = lines[-1].split(",")
    cells[1] = f"{float(cells[1]) + 1.0:.16e}"  # break energy conservation
    lines[-1] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ConfigError, match="first law"):
        load_csv(str(path))


def test_emit_csv_header_only_for_empty_sweep(tmp_path):
    config = parse_config(FIG_CONFIG)
    path = tmp_path / "empty.csv"
    emit_csv(SweepResult(config=config, rows=(), warnings=()), str(path))
    lines = path.read_text().splitlines()
    assert lines[-1].startswith("sweep_value,")
    assert all(line.startswith("#") for line in lines[:-1])


def test_scan_filter_counts_and_census():
    text = """
[system]
omega_c = 1.0
omega_h = 3.0
g = 0.25
gamma = 0.05

[reservoirs]
t_h = 50.0
t_r = 1.2
t_c = 1.0
"""
    config = parse_config(text)
    rows = scan_filters(config, mode="single_channel")
    assert len(rows) == 27
    cooling = [r for r in rows if r.cooling]
    assert len(cooling) == 6
    assert {str(r.filter) for r in cooling} == {str(f) for f in COOLING_FILTERS}
    assert all(r.cycle_matched for r in cooling)
    # ranking: cooling rows come first, sorted by cold current
    assert [r.qdot_C for r in rows[:6]] == sorted(
        (r.qdot_C for r in cooling), reverse=True)
    table = format_scan_table(config, rows)
    assert table.count("\n") == 27 + len(config.canonical_items()) + 1


def test_scan_all_mode_counts():
    text = """
[system]
omega_c = 1.0
omega_h = 3.0
g = 0.25
gamma = 0.05

[reservoirs]
t_h = 2.0
t_r = 2.0
t_c = 2.0
"""
    rows = scan_filters(parse_config(text), mode="all")
    assert len(rows) == 216
    # equal temperatures: nothing cools
    assert not any(r.cooling for r in rows)
    assert all(not r.error for r in rows)


def test_validate_config_report():
    report, ok = validate_config(parse_config(FIG_CONFIG))
    assert ok
    assert "cycle_match = matched" in report
    assert "warning:" in report  # gamma = 0.6 strains the Markov margin
    degenerate = FIG_CONFIG.replace("9/17", "0.5")
    report, ok = validate_config(parse_config(degenerate))
    assert not ok and "degenerate" in report


def test_constants_report():
    text = constants_report(parse_config(FIG_CONFIG))
    assert "k_B / hbar" in text
    assert "unit_scale = 1.3194689145e+12" in text
    assert "T_C" in text


def test_main_subcommands(tmp_path, capsys):
    cfg = tmp_path / "scenario.ini"
    cfg.write_text(NATURAL_CONFIG)
    out = tmp_path / "steady.txt"
    assert main(["steady", "--config", str(cfg), "--out", str(out)]) == 0
    assert "steady_states = 1" in out.read_text()

    assert main(["validate", "--config", str(cfg)]) == 0
    capsys.readouterr()

    assert main(["constants", "--config", str(cfg)]) == 0
    capsys.readouterr()

    missing = main(["steady", "--config", str(tmp_path / "nope.ini")])
    assert missing != 0
    assert "error:" in capsys.readouterr().err

    sweep_cfg = tmp_path / "sweep.ini"
    sweep_cfg.write_text(FIG_CONFIG)
    csv_path = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(sweep_cfg), "--out", str(csv_path)]) == 0
    assert csv_path.exists()
    assert main(["steady", "--config", str(sweep_cfg)]) != 0  # sweep section present

    scan_out = tmp_path / "scan.csv"
    assert main(["scan", "--config", str(cfg), "--out", str(scan_out)]) == 0
    assert len(scan_out.read_text().splitlines()) > 27


def test_sweep_requires_sweep_section():
    with pytest.raises(ConfigError, match="no \\[sweep\\]"):
        sweep_th(parse_config(NATURAL_CONFIG))


@pytest.mark.parametrize("name", ["figure_sweep.ini", "vacuum_transport.ini",
                                  "filter_census.ini"])
def test_shipped_configs_validate(name):
    from pathlib import Path

    from qfridge.cli import load_config

    path = Path(__file__).resolve().parent.parent / "configs" / name
    config = load_config(str(path))
    report, ok = validate_config(config)
    assert ok, report
