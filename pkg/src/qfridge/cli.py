"""Scenario configs, steady reports, hot-bath sweeps, filter scans, CSV I/O.

Configs are flat INI text (``key = value`` under ``[section]`` headers),
chosen so golden files diff cleanly.  Frequencies and temperatures are in
natural units unless a ``*_ghz`` / ``*_kelvin`` key is used, which requires
the unit scale anchor ``omega_c_ghz``.  Values accept plain floats and
simple fractions like ``9/17``.

Example::

    [system]
    omega_c_ghz = 210        # anchors unit_scale; omega_c = 1 natural unit
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
    points = 200
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    Generator,
    SolverFailure,
    SteadyState,
    build_generator,
    steady_states_numeric,
)
from .reservoirs import (
    HBAR,
    KB,
    BackgroundSpec,
    FilterConfig,
    ReservoirSet,
    cycle_match_check,
    markov_validity_report,
    natural_from_kelvin,
)
from .spectrum import (
    QUBITS,
    SystemParams,
    degenerate_frequency_pairs,
)
from .thermo import (
    HeatCurrentReport,
    build_report,
    cooling_predicate_for_filter,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "ScanRow",
    "load_config",
    "parse_config",
    "run_steady",
    "sweep_th",
    "scan_filters",
    "emit_csv",
    "load_csv",
    "format_scan_table",
    "main",
]

CSV_COLUMNS = (
    "sweep_value",
    "qdot_C",
    "qdot_H",
    "qdot_R",
    "qdot_B_C",
    "qdot_B_H",
    "qdot_B_R",
    "eta",
    "sigma",
    "stage",
)


class ConfigError(ValueError):
    """Bad scenario configuration; message carries section/key context."""


def _fmt(x: float) -> str:
    """17-significant-digit scientific notation; round-trips float64."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _fmt_value(x: float) -> str:
    """Shortest exact decimal for config echo lines."""
    return repr(float(x))


def _number(text: str, where: str) -> float:
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return float(num) / float(den)
        return float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: cannot parse number {text!r} ({exc})") from None


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.variable != "t_h":
            raise ConfigError(f"sweep.variable: only t_h is supported, got {self.variable!r}")
        if not self.stop > self.start:
            raise ConfigError(f"sweep range must be strictly increasing, got "
                              f"[{self.start}, {self.stop}]")
        if self.points < 1:
            raise ConfigError(f"sweep.points must be >= 1, got {self.points}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams
    reservoirs: ReservoirSet
    filter: FilterConfig
    background: BackgroundSpec
    sweep: SweepSpec | None = None

    def canonical_items(self) -> list[tuple[str, str]]:
        """Resolved natural-unit key/value pairs; parsing them back
        reproduces this config exactly."""
        p = self.params
        items = [
            ("system.omega_c", _fmt_value(p.omega_c)),
            ("system.omega_h", _fmt_value(p.omega_h)),
            ("system.g", _fmt_value(p.g)),
            ("system.gamma", _fmt_value(p.gamma)),
            ("system.unit_scale",
             "none" if p.unit_scale is None else _fmt_value(p.unit_scale)),
            ("reservoirs.t_h", _fmt_value(self.reservoirs.hot.temperature)),
            ("reservoirs.t_r", _fmt_value(self.reservoirs.room.temperature)),
            ("reservoirs.t_c", _fmt_value(self.reservoirs.cold.temperature)),
        ]
        for q, key in (("H", "filter.h"), ("R", "filter.r"), ("C", "filter.c")):
            kept = sorted(self.filter.kept_for(q))
            items.append((key, ",".join(map(str, kept)) if kept else "none"))
        items.append(("background.mode", self.background.mode))
        if self.background.mode == "thermal":
            items.append(("background.t0", _fmt_value(self.background.temperature)))
        if self.background.active:
            items.append(("background.gamma", _fmt_value(self.background.gamma)))
        if self.sweep is not None:
            items += [
                ("sweep.variable", self.sweep.variable),
                ("sweep.start", _fmt_value(self.sweep.start)),
                ("sweep.stop", _fmt_value(self.sweep.stop)),
                ("sweep.points", str(self.sweep.points)),
            ]
        return items

    @classmethod
    def from_items(cls, items: dict[str, str]) -> "ScenarioConfig":
        text_lines: dict[str, list[str]] = {}
        for key, value in items.items():
            section, _, name = key.partition(".")
            text_lines.setdefault(section, []).append(f"{name} = {value}")
        text = "\n".join(
            f"[{sec}]\n" + "\n".join(lines) for sec, lines in text_lines.items()
        )
        return parse_config(text, source="<csv header>")


def _parse_filter_field(raw: str, where: str) -> frozenset[int]:
    s = raw.strip().lower()
    if s in ("none", ""):
        return frozenset()
    if s == "all":
        return frozenset((1, 2, 3))
    try:
        indices = frozenset(int(tok) for tok in s.split(","))
    except ValueError:
        raise ConfigError(f"{where}: expected channel indices, got {raw!r}") from None
    if not indices <= {1, 2, 3}:
        raise ConfigError(f"{where}: channel indices must be in 1..3, got {sorted(indices)}")
    return indices


def parse_config(text: str, source: str = "<string>") -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    def get(section, key, default=None):
        if cp.has_option(section, key):
            return cp.get(section, key)
        return default

    if not cp.has_section("system"):
        raise ConfigError(f"{source}: missing [system] section")

    unit_scale = None
    omega_c_ghz = get("system", "omega_c_ghz")
    omega_c_raw = get("system", "omega_c")
    if omega_c_ghz is not None and omega_c_raw is not None:
        raise ConfigError("system: give omega_c or omega_c_ghz, not both")
    if omega_c_ghz is not None:
        f_ghz = _number(omega_c_ghz, "system.omega_c_ghz")
        unit_scale = 2.0 * math.pi * f_ghz * 1e9
        omega_c = 1.0  # the cold frequency anchors the natural scale
    else:
        omega_c = _number(omega_c_raw or "1.0", "system.omega_c")
        us_raw = get("system", "unit_scale")
        if us_raw is not None and us_raw.strip().lower() != "none":
            unit_scale = _number(us_raw, "system.unit_scale")

    def required(section, key):
        raw = get(section, key)
        if raw is None:
            raise ConfigError(f"{source}: missing {section}.{key}")
        return raw

    try:
        params = SystemParams(
            omega_c=omega_c,
            omega_h=_number(required("system", "omega_h"), "system.omega_h"),
            g=_number(required("system", "g"), "system.g"),
            gamma=_number(required("system", "gamma"), "system.gamma"),
            unit_scale=unit_scale,
        )
    except ValueError as exc:
        raise ConfigError(f"system: {exc}") from None

    def temperature(section, stem):
        nat = get(section, stem)
        kel = get(section, stem + "_kelvin")
        if nat is not None and kel is not None:
            raise ConfigError(f"{section}: give {stem} or {stem}_kelvin, not both")
        if kel is not None:
            if unit_scale is None:
                raise ConfigError(
                    f"{section}.{stem}_kelvin needs omega_c_ghz (or unit_scale) set"
                )
            return natural_from_kelvin(_number(kel, f"{section}.{stem}_kelvin"), unit_scale)
        if nat is None:
            raise ConfigError(f"{source}: missing {section}.{stem}")
        return _number(nat, f"{section}.{stem}")

    if not cp.has_section("reservoirs"):
        raise ConfigError(f"{source}: missing [reservoirs] section")
    try:
        reservoirs = ReservoirSet.from_temperatures(
            params,
            t_h=temperature("reservoirs", "t_h"),
            t_r=temperature("reservoirs", "t_r"),
            t_c=temperature("reservoirs", "t_c"),
        )
    except ValueError as exc:
        raise ConfigError(f"reservoirs: {exc}") from None

    if cp.has_section("filter"):
        filt = FilterConfig(
            kept_h=_parse_filter_field(get("filter", "h", "all"), "filter.h"),
            kept_r=_parse_filter_field(get("filter", "r", "all"), "filter.r"),
            kept_c=_parse_filter_field(get("filter", "c", "all"), "filter.c"),
        )
    else:
        filt = FilterConfig.all_channels()

    background = BackgroundSpec.none()
    if cp.has_section("background"):
        mode = get("background", "mode", "none").strip().lower()
        if mode not in ("none", "vacuum", "thermal"):
            raise ConfigError(f"background.mode: unknown mode {mode!r}")
        if mode != "none":
            gamma_b = _number(required("background", "gamma"), "background.gamma")
            t0 = temperature("background", "t0") if mode == "thermal" else None
            try:
                background = BackgroundSpec(mode=mode, temperature=t0, gamma=gamma_b)
            except ValueError as exc:
                raise ConfigError(f"background: {exc}") from None

    sweep = None
    if cp.has_section("sweep"):
        variable = get("sweep", "variable", "t_h").strip().lower()
        start = temperature("sweep", "start")
        stop = temperature("sweep", "stop")
        points_raw = required("sweep", "points")
        try:
            points = int(points_raw)
        except ValueError:
            raise ConfigError(f"sweep.points: expected integer, got {points_raw!r}") from None
        sweep = SweepSpec(variable=variable, start=start, stop=stop, points=points)

    return ScenarioConfig(
        params=params,
        reservoirs=reservoirs,
        filter=filt,
        background=background,
        sweep=sweep,
    )


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=path)


# ---------------------------------------------------------------------------
# Solving helpers
# ---------------------------------------------------------------------------


def _build(config: ScenarioConfig) -> tuple[Generator, list[str]]:
    """Build the generator, capturing validity warnings as plain strings."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        gen = build_generator(
            config.params, config.filter, config.reservoirs, config.background
        )
    return gen, [str(w.message) for w in caught]


def _reporting_state(gen: Generator, states) -> tuple[SteadyState, HeatCurrentReport]:
    """The steady state used for single-row outputs: the unique one, or the
    state with the largest cold-current magnitude (flowing branches of a
    multistable filter agree in sign, so the verdict is unambiguous)."""
    best = None
    for s in states:
        report = build_report(gen, s)
        if best is None or abs(report.engineered["C"]) > abs(best[1].engineered["C"]):
            best = (s, report)
    return best


def _row_from_report(value: float, report: HeatCurrentReport) -> "SweepRow":
    return SweepRow(
        sweep_value=value,
        qdot_C=report.engineered["C"],
        qdot_H=report.engineered["H"],
        qdot_R=report.engineered["R"],
        qdot_B_C=report.background["C"],
        qdot_B_H=report.background["H"],
        qdot_B_R=report.background["R"],
        eta=math.nan if report.efficiency is None else report.efficiency,
        sigma=report.sigma,
        stage=str(report.stage),
    )


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    qdot_C: float
    qdot_H: float
    qdot_R: float
    qdot_B_C: float
    qdot_B_H: float
    qdot_B_R: float
    eta: float
    sigma: float
    stage: str

    def as_csv(self) -> str:
        cells = [
            _fmt(self.sweep_value),
            _fmt(self.qdot_C),
            _fmt(self.qdot_H),
            _fmt(self.qdot_R),
            _fmt(self.qdot_B_C),
            _fmt(self.qdot_B_H),
            _fmt(self.qdot_B_R),
            _fmt(self.eta),
            _fmt(self.sigma),
            self.stage,
        ]
        return ",".join(cells)

    @property
    def failed(self) -> bool:
        return self.stage == "error"


@dataclass(frozen=True)
class SweepResult:
    config: ScenarioConfig
    rows: tuple[SweepRow, ...]
    warnings: tuple[str, ...]


def _with_hot_temperature(config: ScenarioConfig, t_h: float) -> ScenarioConfig:
    res = config.reservoirs
    return replace(
        config,
        reservoirs=ReservoirSet(
            hot=replace(res.hot, temperature=t_h), room=res.room, cold=res.cold
        ),
    )


def _solve_point(config: ScenarioConfig, t_h: float) -> SweepRow:
    point = _with_hot_temperature(config, t_h)
    try:
        gen, _ = _build(point)
        states = steady_states_numeric(gen)
        _, report = _reporting_state(gen, states)
        return _row_from_report(t_h, report)
    except Exception:  # per-row failure is recorded, the sweep continues
        return SweepRow(
            sweep_value=t_h,
            qdot_C=math.nan, qdot_H=math.nan, qdot_R=math.nan,
            qdot_B_C=math.nan, qdot_B_H=math.nan, qdot_B_R=math.nan,
            eta=math.nan, sigma=math.nan, stage="error",
        )


def _sweep_worker(payload) -> SweepRow:
    return _solve_point(*payload)


def sweep_th(config: ScenarioConfig, parallel: int = 1) -> SweepResult:
    """Solve one row per hot-temperature grid point.

    Rows are independent; with ``parallel > 1`` they run in worker
    processes, and the result keeps grid order regardless of completion
    order.  A failing row is recorded with stage ``error`` and NaN values.
    """
    if config.sweep is None:
        raise ConfigError("sweep requested but the config has no [sweep] section")
    _, warns = _build(_with_hot_temperature(config, config.sweep.values[0]))
    payloads = [(config, float(v)) for v in config.sweep.values]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(_sweep_worker, payloads))
    else:
        rows = [_solve_point(*p) for p in payloads]
    return SweepResult(config=config, rows=tuple(rows), warnings=tuple(warns))


def emit_csv(result: SweepResult, path: str) -> None:
    """Deterministic CSV: ``#`` config header, fixed column order, 17
    significant digits, LF endings.  Identical runs produce identical bytes."""
    lines = [f"# {key} = {value}" for key, value in result.config.canonical_items()]
    lines.append(",".join(CSV_COLUMNS))
    lines += [row.as_csv() for row in result.rows]
    payload = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)


def load_csv(path: str) -> SweepResult:
    """Read a sweep CSV back, re-parsing the embedded config and
    re-validating the first-law sum on every solved row."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    items: dict[str, str] = {}
    body: list[str] = []
    for line in lines:
        if line.startswith("# ") and " = " in line:
            key, _, value = line[2:].partition(" = ")
            items[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body or body[0] != ",".join(CSV_COLUMNS):
        raise ConfigError(f"{path}: missing or wrong column header")
    config = ScenarioConfig.from_items(items)
    rows = []
    for line in body[1:]:
        cells = line.split(",")
        if len(cells) != len(CSV_COLUMNS):
            raise ConfigError(f"{path}: malformed row {line!r}")
        row = SweepRow(
            sweep_value=float(cells[0]),
            qdot_C=float(cells[1]), qdot_H=float(cells[2]), qdot_R=float(cells[3]),
            qdot_B_C=float(cells[4]), qdot_B_H=float(cells[5]), qdot_B_R=float(cells[6]),
            eta=float(cells[7]), sigma=float(cells[8]), stage=cells[9],
        )
        if not row.failed:
            total = (row.qdot_C + row.qdot_H + row.qdot_R
                     + row.qdot_B_C + row.qdot_B_H + row.qdot_B_R)
            scale = (abs(row.qdot_C) + abs(row.qdot_H) + abs(row.qdot_R)
                     + abs(row.qdot_B_C) + abs(row.qdot_B_H) + abs(row.qdot_B_R))
            if scale > 1e-12 and abs(total) > 1e-10 * scale:
                raise ConfigError(
                    f"{path}: row at {row.sweep_value} violates the first law "
                    f"(sum {total:.3e} vs scale {scale:.3e})"
                )
        rows.append(row)
    return SweepResult(config=config, rows=tuple(rows), warnings=())


# ---------------------------------------------------------------------------
# Steady report
# ---------------------------------------------------------------------------


def run_steady(config: ScenarioConfig) -> str:
    """Solve a no-sweep scenario and render the full structured report."""
    gen, warns = _build(config)
    states = steady_states_numeric(gen)
    out = ["qfridge steady-state report"]
    out += [f"{key} = {value}" for key, value in config.canonical_items()]
    out.append(f"steady_states = {len(states)}")
    out.append(f"unique = {states.unique}")
    for k, s in enumerate(states):
        report = build_report(gen, s)
        out.append(f"[state {k}] support = {sorted(s.support)}")
        pops = ", ".join(f"{p:.12g}" for p in s.populations)
        out.append(f"[state {k}] populations = {pops}")
        for ch in report.per_channel:
            out.append(f"[state {k}] current {ch.label} = {_fmt(ch.value)}")
        for q in QUBITS:
            out.append(f"[state {k}] qdot_{q} = {_fmt(report.engineered[q])}")
        if gen.background.active:
            for q in QUBITS:
                out.append(f"[state {k}] qdot_B_{q} = {_fmt(report.background[q])}")
        eta = report.efficiency
        out.append(f"[state {k}] eta = {'undefined' if eta is None else _fmt(eta)}")
        out.append(f"[state {k}] sigma = {_fmt(report.sigma)}")
        out.append(f"[state {k}] stage = {report.stage}")
    for w in warns:
        out.append(f"warning: {w}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Filter scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    filter: FilterConfig
    qdot_C: float
    qdot_H: float
    qdot_R: float
    eta: float
    cooling: bool
    cycle_matched: bool
    n_states: int
    error: str = ""


def _filter_patterns(mode: str) -> list[FilterConfig]:
    if mode == "single_channel":
        singles = [frozenset((j,)) for j in (1, 2, 3)]
        patterns = singles
    elif mode == "all":
        patterns = [
            frozenset(s)
            for s in ((1,), (2,), (3,), (1, 2), (1, 3), (2, 3))
        ]
    else:
        raise ValueError(f"unknown scan mode {mode!r}")
    return [
        FilterConfig(kept_h=h, kept_r=r, kept_c=c)
        for h in patterns for r in patterns for c in patterns
    ]


def _scan_one(config: ScenarioConfig, filt: FilterConfig) -> ScanRow:
    cooling_tol = 1e-12 * config.params.omega_c
    matched = cycle_match_check(filt).matched
    scenario = replace(config, filter=filt)
    try:
        gen, _ = _build(scenario)
        states = steady_states_numeric(gen)
        _, report = _reporting_state(gen, states)
        return ScanRow(
            filter=filt,
            qdot_C=report.engineered["C"],
            qdot_H=report.engineered["H"],
            qdot_R=report.engineered["R"],
            eta=math.nan if report.efficiency is None else report.efficiency,
            cooling=report.engineered["C"] > cooling_tol,
            cycle_matched=matched,
            n_states=len(states),
        )
    except Exception as exc:
        return ScanRow(
            filter=filt, qdot_C=math.nan, qdot_H=math.nan, qdot_R=math.nan,
            eta=math.nan, cooling=False, cycle_matched=matched, n_states=0,
            error=f"{type(exc).__name__}: {exc}",
        )


def _scan_worker(payload) -> ScanRow:
    return _scan_one(*payload)


def scan_filters(
    config: ScenarioConfig, mode: str = "single_channel", parallel: int = 1
) -> list[ScanRow]:
    """Evaluate every filter mask (27 single-channel or 216 one-or-two
    channel configurations) at fixed temperatures, sorted by cold current."""
    payloads = [(config, filt) for filt in _filter_patterns(mode)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(_scan_worker, payloads))
    else:
        rows = [_scan_one(*p) for p in payloads]
    rows.sort(key=lambda r: (-(r.qdot_C if not math.isnan(r.qdot_C) else -math.inf),
                             str(r.filter)))
    return rows


def format_scan_table(config: ScenarioConfig, rows: list[ScanRow]) -> str:
    lines = [f"# {key} = {value}" for key, value in config.canonical_items()]
    lines.append("filter,qdot_C,qdot_H,qdot_R,eta,cooling,cycle_matched,n_states,error")
    for r in rows:
        lines.append(
            ",".join((
                str(r.filter), _fmt(r.qdot_C), _fmt(r.qdot_H), _fmt(r.qdot_R),
                _fmt(r.eta), str(r.cooling).lower(), str(r.cycle_matched).lower(),
                str(r.n_states), r.error,
            ))
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Validation and constants
# ---------------------------------------------------------------------------


def validate_config(config: ScenarioConfig) -> tuple[str, bool]:
    """Run the scenario checks without solving; returns (report, ok)."""
    lines = ["qfridge config validation"]
    lines += [f"{key} = {value}" for key, value in config.canonical_items()]
    ok = True

    participating = [ch_key for ch_key in config.filter.kept_keys]
    if config.background.active:
        participating = [(q, j) for q in QUBITS for j in (1, 2, 3)]
    pairs = degenerate_frequency_pairs(config.params, participating or None)
    if participating and pairs:
        ok = False
        for a, b in pairs:
            lines.append(f"error: channels {a[0]}{a[1]} and {b[0]}{b[1]} are degenerate")
    else:
        lines.append("check: participating channel frequencies are distinct")

    gammas = [config.reservoirs[q].gamma for q in QUBITS]
    if config.background.active:
        gammas.append(config.background.gamma)
    msg = markov_validity_report(config.params, participating, max(gammas)) \
        if participating else None
    lines.append(f"warning: {msg}" if msg else "check: Markov validity margin holds")

    match = cycle_match_check(config.filter)
    lines.append(f"cycle_match = {match.status} ({match.detail})")
    if match.matched:
        try:
            verdict = cooling_predicate_for_filter(
                config.params, config.reservoirs, config.filter
            )
            lines.append(
                f"cooling_predicate = {verdict.cooling} "
                f"(ratio {verdict.ratio:.6g} vs threshold {verdict.threshold:.6g})"
            )
        except ValueError as exc:
            lines.append(f"cooling_predicate = n/a ({exc})")

    if config.sweep is not None:
        lines.append(f"sweep: {config.sweep.points} points over "
                     f"[{config.sweep.start:.6g}, {config.sweep.stop:.6g}]")
    lines.append("result = " + ("ok" if ok else "invalid"))
    return "\n".join(lines) + "\n", ok


def constants_report(config: ScenarioConfig | None = None) -> str:
    lines = [
        "qfridge unit conventions (hbar = k_B = 1 internally)",
        f"hbar = {HBAR:.10e} J s",
        f"k_B = {KB:.10e} J / K",
        f"k_B / hbar = {KB / HBAR:.10e} rad / (s K)",
        "omega[natural] = 2*pi * f[GHz] * 1e9 / unit_scale",
        "T[natural] = (k_B / hbar) * T[K] / unit_scale",
    ]
    if config is not None and config.params.unit_scale is not None:
        us = config.params.unit_scale
        lines.append(f"unit_scale = {us:.10e} rad / s")
        lines.append(f"1 natural frequency unit = {us / (2 * math.pi * 1e9):.10g} GHz")
        lines.append(f"1 natural temperature unit = {us * HBAR / KB:.10g} K")
        for q in QUBITS:
            t = config.reservoirs[q].temperature
            lines.append(f"T_{q} = {t:.10g} natural = {t * us * HBAR / KB:.10g} K")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qfridge",
        description="Filtered three-qubit refrigerator: steady states, "
                    "sweeps, filter scans",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in (
        ("steady", True), ("sweep", True), ("scan", True),
        ("validate", True), ("constants", False),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=needs_config,
                        help="scenario config file")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        if name in ("sweep", "scan"):
            sp.add_argument("--parallel", type=int, default=1,
                            help="worker processes for independent rows")
        if name == "scan":
            sp.add_argument("--mode", choices=("single_channel", "all"),
                            default="single_channel")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config) if args.config else None
        if args.command == "steady":
            if config.sweep is not None:
                raise ConfigError("steady requires a config without a [sweep] section")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                _write_output(run_steady(config), args.out)
        elif args.command == "sweep":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = sweep_th(config, parallel=args.parallel)
            if args.out is None:
                raise ConfigError("sweep requires --out for the CSV file")
            emit_csv(result, args.out)
            for w in result.warnings:
                print(f"warning: {w}", file=sys.stderr)
        elif args.command == "scan":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rows = scan_filters(config, mode=args.mode, parallel=args.parallel)
            _write_output(format_scan_table(config, rows), args.out)
        elif args.command == "validate":
            report, ok = validate_config(config)
            _write_output(report, args.out)
            if not ok:
                return 2
        elif args.command == "constants":
            _write_output(constants_report(config), args.out)
    except (ConfigError, SolverFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
