"""Command-line interface, config format, reports, and plots.

Commands: ``groundstate``, ``evolve``, ``fit``, ``preset-list``,
``preset-run``. Config files are flat ``key = value`` text grouped into
``[section]`` blocks; unknown keys are rejected with their line number.
Every run directory receives the resolved scenario config that produced
it, so any archived run can be replayed exactly.

Exit codes: 0 success, 2 run stopped by the singularity rule with nothing
to check against (informational), 3 expectation failure, 4 configuration
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, snapshots
from .evolution import STATUS_SINGULARITY, MonitorConfig, TimeGrid
from .grids import Grid
from .ground_state import continuation_in_s
from .model import ModelParams
from .scenarios import (
    ALLOWED_SCALES,
    Expectation,
    GroundStateLibrary,
    InitialDataSpec,
    Scenario,
    ScenarioError,
    ScenarioReport,
    preset,
    preset_names,
    run_scenario,
)

EXIT_OK = 0
EXIT_SINGULARITY = 2
EXIT_EXPECTATION = 3
EXIT_CONFIG = 4

OUTPUT_ROOT_ENV = "FNLSLAB_OUT"

_SCALE_ALIASES = {
    "1": 1.0, "1/1": 1.0, "1/2": 0.5, "0.5": 0.5,
    "1/4": 0.25, "0.25": 0.25, "1/8": 0.125, "0.125": 0.125,
}


class ConfigError(ValueError):
    """Malformed configuration text; message carries the line number."""


@dataclass
class RunConfig:
    """Parsed [run] block of a config file or of CLI flags."""

    command: str
    preset: str | None = None
    scenario_path: str | None = None
    output_dir: str | None = None
    scale: float = 1.0
    integrator: str | None = None
    plots: bool = False

    def __post_init__(self):
        if self.command not in ("groundstate", "evolve", "fit", "preset-list",
                                "preset-run"):
            raise ConfigError(f"unknown command {self.command!r}")
        if self.scale not in ALLOWED_SCALES:
            raise ConfigError(f"scale must be one of {ALLOWED_SCALES}")


# --------------------------------------------------------------------------
# config text parsing

_KNOWN_KEYS = {
    "run": {"command", "preset", "scenario", "output", "scale", "integrator",
            "plots"},
    "scenario": {"name", "integrator", "fit_norms", "fit_window"},
    "model": {"s", "p", "gamma", "eps"},
    "grid": {"n_modes", "half_width"},
    "time": {"t_end", "n_steps"},
    "monitor": {"series_stride", "singularity_stop", "spectrum_floor_check",
                "energy_drift_threshold", "snapshot_times"},
    "data": {"kind", "alpha", "beta", "boost", "chirp", "perturbation"},
}
_EXPECT_KEYS = {"value", "rel_tol", "lo", "hi", "provenance"}


def _tokenize(text: str) -> dict[str, dict[str, tuple[str, int]]]:
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise ConfigError(f"line {lineno}: empty section name")
            base = current.split(".", 1)[0]
            if base not in _KNOWN_KEYS and base != "expect":
                raise ConfigError(f"line {lineno}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        allowed = (
            _EXPECT_KEYS if current.startswith("expect.")
            else _KNOWN_KEYS.get(current, set())
        )
        if key not in allowed:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r} in section [{current}]"
            )
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        sections[current][key] = (value, lineno)
    return sections


def _take(section: dict, key: str, convert, default=..., *, section_name=""):
    if key not in section:
        if default is ...:
            raise ConfigError(f"missing key {key!r} in section [{section_name}]")
        return default
    value, lineno = section[key]
    try:
        return convert(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(part) for part in text.split(","))


def _parse_str_list(text: str) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(part.strip() for part in text.split(","))


def _parse_expect_value(text: str):
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return float(text)
    except ValueError:
        return text


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def parse_config(text: str) -> "RunConfig | Scenario":
    """Parse config text into a RunConfig ([run] present) or a Scenario."""
    sections = _tokenize(text)
    if "run" in sections:
        run = sections["run"]
        return RunConfig(
            command=_take(run, "command", str, section_name="run"),
            preset=_take(run, "preset", str, None, section_name="run"),
            scenario_path=_take(run, "scenario", str, None, section_name="run"),
            output_dir=_take(run, "output", str, None, section_name="run"),
            scale=_take(run, "scale", _parse_scale, 1.0, section_name="run"),
            integrator=_take(run, "integrator", str, None, section_name="run"),
            plots=_take(run, "plots", _parse_bool, False, section_name="run"),
        )
    return scenario_from_sections(sections)


def _parse_scale(text: str) -> float:
    if text not in _SCALE_ALIASES:
        raise ValueError(f"scale must be one of {sorted(_SCALE_ALIASES)}")
    return _SCALE_ALIASES[text]


def scenario_from_sections(sections) -> Scenario:
    for required in ("model", "grid", "time", "data"):
        if required not in sections:
            raise ConfigError(f"missing required section [{required}]")
    model = sections["model"]
    grid_sec = sections["grid"]
    time_sec = sections["time"]
    data_sec = sections["data"]
    mon_sec = sections.get("monitor", {})
    sc_sec = sections.get("scenario", {})
    try:
        params = ModelParams(
            s=_take(model, "s", float, section_name="model"),
            p=_take(model, "p", float, 1.0, section_name="model"),
            gamma=_take(model, "gamma", float, -1.0, section_name="model"),
            eps=_take(model, "eps", float, 1.0, section_name="model"),
        )
        grid = Grid(
            n_modes=_take(grid_sec, "n_modes", int, section_name="grid"),
            half_width=_take(grid_sec, "half_width", float, section_name="grid"),
        )
        tg = TimeGrid(
            t_end=_take(time_sec, "t_end", float, section_name="time"),
            n_steps=_take(time_sec, "n_steps", int, section_name="time"),
        )
        monitors = MonitorConfig(
            energy_drift_threshold=_take(
                mon_sec, "energy_drift_threshold", float, 1e-3,
                section_name="monitor"),
            singularity_stop=_take(
                mon_sec, "singularity_stop", _parse_bool, False,
                section_name="monitor"),
            series_stride=_take(
                mon_sec, "series_stride", int, 1, section_name="monitor"),
            snapshot_times=_take(
                mon_sec, "snapshot_times", _parse_float_list, (),
                section_name="monitor"),
            spectrum_floor_check=_take(
                mon_sec, "spectrum_floor_check", _parse_bool, False,
                section_name="monitor"),
        )
        data_kwargs = {}
        for key in ("alpha", "beta", "boost", "chirp", "perturbation"):
            value = _take(data_sec, key, float, None, section_name="data")
            if value is not None:
                data_kwargs[key] = value
        data = InitialDataSpec(
            kind=_take(data_sec, "kind", str, section_name="data"), **data_kwargs
        )
        expected = []
        for name, body in sections.items():
            if not name.startswith("expect."):
                continue
            quantity = name.split(".", 1)[1]
            expected.append(Expectation(
                quantity=quantity,
                value=_take(body, "value", _parse_expect_value, None,
                            section_name=name),
                rel_tol=_take(body, "rel_tol", float, None, section_name=name),
                lo=_take(body, "lo", float, None, section_name=name),
                hi=_take(body, "hi", float, None, section_name=name),
                provenance=_take(body, "provenance", str, "", section_name=name),
            ))
        return Scenario(
            name=_take(sc_sec, "name", str, "run", section_name="scenario"),
            params=params,
            grid=grid,
            tg=tg,
            data=data,
            monitors=monitors,
            integrator=_take(sc_sec, "integrator", str, "splitting4",
                             section_name="scenario"),
            fit_norms=_take(sc_sec, "fit_norms", _parse_str_list, (),
                            section_name="scenario"),
            fit_window=_take(sc_sec, "fit_window", str, "last_1000",
                             section_name="scenario"),
            expected=expected,
        )
    except (ValueError, ScenarioError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def scenario_to_config(scenario: Scenario) -> str:
    """Canonical config text for a scenario; parse(render(s)) == s."""
    lines = [
        "[scenario]",
        f"name = {scenario.name}",
        f"integrator = {scenario.integrator}",
        f"fit_norms = {', '.join(scenario.fit_norms)}",
        f"fit_window = {scenario.fit_window}",
        "",
        "[model]",
        f"s = {_fmt(scenario.params.s)}",
        f"p = {_fmt(scenario.params.p)}",
        f"gamma = {_fmt(scenario.params.gamma)}",
        f"eps = {_fmt(scenario.params.eps)}",
        "",
        "[grid]",
        f"n_modes = {scenario.grid.n_modes}",
        f"half_width = {_fmt(scenario.grid.half_width)}",
        "",
        "[time]",
        f"t_end = {_fmt(scenario.tg.t_end)}",
        f"n_steps = {scenario.tg.n_steps}",
        "",
        "[monitor]",
        f"series_stride = {scenario.monitors.series_stride}",
        f"singularity_stop = {str(scenario.monitors.singularity_stop).lower()}",
        f"spectrum_floor_check = "
        f"{str(scenario.monitors.spectrum_floor_check).lower()}",
        f"energy_drift_threshold = "
        f"{_fmt(scenario.monitors.energy_drift_threshold)}",
        f"snapshot_times = "
        f"{', '.join(_fmt(t) for t in scenario.monitors.snapshot_times)}",
        "",
        "[data]",
        f"kind = {scenario.data.kind}",
    ]
    for key in ("alpha", "beta", "boost", "chirp", "perturbation"):
        value = getattr(scenario.data, key)
        if value is not None:
            lines.append(f"{key} = {_fmt(value)}")
    for exp in scenario.expected:
        lines.extend(["", f"[expect.{exp.quantity}]"])
        if isinstance(exp.value, bool):
            lines.append(f"value = {str(exp.value).lower()}")
        elif isinstance(exp.value, str):
            lines.append(f"value = {exp.value}")
        elif exp.value is not None:
            lines.append(f"value = {_fmt(exp.value)}")
        if exp.rel_tol is not None:
            lines.append(f"rel_tol = {_fmt(exp.rel_tol)}")
        if exp.lo is not None:
            lines.append(f"lo = {_fmt(exp.lo)}")
        if exp.hi is not None:
            lines.append(f"hi = {_fmt(exp.hi)}")
        lines.append(f"provenance = {exp.provenance}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# reports

def emit_report(report: ScenarioReport) -> tuple[str, int]:
    """Render measured-vs-expected rows and derive the process exit code."""
    rows = []
    header = (
        f"scenario: {report.scenario.name}  scale: {report.scale:g}  "
        f"status: {report.run.status}  stop_time: {report.run.stop_time:.6g}"
    )
    rows.append(header)
    rows.append("-" * len(header))
    failures = 0
    for check in report.checks:
        e = check.expectation
        if isinstance(e.value, (bool, str)):
            target = f"= {e.value}"
        elif e.value is not None:
            target = f"= {e.value:g} +- {100 * e.rel_tol:g}%"
        else:
            lo = "-inf" if e.lo is None else f"{e.lo:g}"
            hi = "inf" if e.hi is None else f"{e.hi:g}"
            target = f"in [{lo}, {hi}]"
        measured = check.measured
        shown = f"{measured:.6g}" if isinstance(measured, float) else str(measured)
        verdict = "PASS" if check.passed else "FAIL"
        failures += not check.passed
        rows.append(
            f"{verdict}  {e.quantity:<22} measured {shown:<14} expected {target:<26}"
            f" [{e.provenance}]"
        )
    if not report.checks:
        rows.append("(no expectations recorded)")
    for name, fit in report.fits.items():
        rows.append(
            f"fit {name}: t* = {fit.t_star:.6g}, kappa1 = {fit.kappa1:.6g}, "
            f"kappa2 = {fit.kappa2:.6g}, Delta2 = {fit.delta2:.3g} "
            f"({fit.model}, window {fit.fit_window})"
        )
    if report.run.status == STATUS_SINGULARITY:
        rows.append("note: run stopped by the singularity-distance rule")
    text = "\n".join(rows) + "\n"
    if failures:
        return text, EXIT_EXPECTATION
    if not report.checks and report.run.status == STATUS_SINGULARITY:
        return text, EXIT_SINGULARITY
    return text, EXIT_OK


# --------------------------------------------------------------------------
# plots

def emit_plots(series, snapshots_list, out_dir, spectrum_field=None) -> list[str]:
    """Write vector-graphic figures; failures degrade to warnings.

    Emits one curve file per norm series, a |psi|^2 waterfall when
    snapshots exist, and the final spectrum with its fitted asymptote.
    Deterministic for fixed input.
    """
    import warnings

    try:
        import matplotlib
        matplotlib.use("Agg")
        matplotlib.rcParams["svg.hashsalt"] = "fnlslab"
        import matplotlib.pyplot as plt
    except Exception as exc:  # pragma: no cover - matplotlib is optional
        warnings.warn(f"plotting unavailable: {exc}")
        return []

    os.makedirs(out_dir, exist_ok=True)
    written = []

    def save(fig, name):
        path = os.path.join(out_dir, name)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)

    t = series["t"]
    for column, label in (
        ("sup_norm", "sup norm"),
        ("grad_l2", "gradient L2 norm"),
        ("mass", "mass"),
        ("energy", "energy"),
        ("delta_E", "relative energy drift"),
    ):
        try:
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.plot(t, series[column], lw=1.0)
            ax.set_xlabel("t")
            ax.set_ylabel(label)
            if column in ("sup_norm", "grad_l2", "delta_E"):
                positive = series[column] > 0
                if positive.all():
                    ax.set_yscale("log")
            fig.tight_layout()
            save(fig, f"norm_{column}.svg")
        except Exception as exc:
            warnings.warn(f"could not plot {column}: {exc}")

    if snapshots_list:
        try:
            fig, ax = plt.subplots(figsize=(6, 4))
            offset = 0.0
            for t_snap, fld in snapshots_list:
                density = np.abs(fld.values) ** 2
                ax.plot(fld.grid.x, density + offset, lw=0.8,
                        label=f"t = {t_snap:.3g}")
                offset += 0.25 * float(density.max())
            ax.set_xlabel("x")
            ax.set_ylabel("|psi|^2 (offset by time)")
            ax.legend(fontsize=6, loc="upper right")
            fig.tight_layout()
            save(fig, "waterfall.svg")
        except Exception as exc:
            warnings.warn(f"could not plot waterfall: {exc}")

    if spectrum_field is not None:
        try:
            import scipy.fft as _fft

            from .grids import SpectralField

            grid = spectrum_field.grid
            coeffs = _fft.fft(spectrum_field.values)
            fit = analysis.fit_fourier_asymptotics(SpectralField(grid, coeffs))
            n = grid.n_modes
            kpos = np.arange(1, n // 2) / grid.half_width
            amp = np.abs(coeffs[1 : n // 2])
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.semilogy(kpos, np.maximum(amp, 1e-300), lw=0.7, label="|u_hat(k)|")
            if np.isfinite(fit.delta):
                model = np.exp(
                    fit.log_amplitude
                    - (fit.mu + 1.0) * np.log(kpos)
                    - fit.delta * kpos
                )
                ax.semilogy(kpos, model, "--", lw=0.9,
                            label=f"fit: delta = {fit.delta:.3g}")
            ax.set_xlabel("k")
            ax.set_ylabel("|u_hat|")
            ax.legend(fontsize=7)
            fig.tight_layout()
            save(fig, "spectrum.svg")
        except Exception as exc:
            warnings.warn(f"could not plot spectrum: {exc}")
    return written


# --------------------------------------------------------------------------
# run directory contents

def _default_out_dir(name: str) -> str:
    root = os.environ.get(OUTPUT_ROOT_ENV, os.path.join(os.getcwd(), "runs"))
    return os.path.join(root, name)


def write_run_outputs(report: ScenarioReport, out_dir: str, plots: bool) -> str:
    os.makedirs(out_dir, exist_ok=True)
    sc = report.scenario
    snapshots.atomic_write_bytes(
        os.path.join(out_dir, "config.cfg"),
        scenario_to_config(sc).encode("utf-8"),
    )
    snapshots.write_series(os.path.join(out_dir, "series.csv"), report.run.series)
    header = snapshots.SnapshotHeader(
        n_modes=sc.grid.n_modes, half_width=sc.grid.half_width,
        t=report.run.stop_time, s=sc.params.s, p=sc.params.p,
        gamma=sc.params.gamma, eps=sc.params.eps,
    )
    snapshots.write_snapshot(
        os.path.join(out_dir, "final_state.snap"), report.run.final_state, header
    )
    for t_snap, fld in report.run.snapshots:
        snapshots.write_snapshot(
            os.path.join(out_dir, f"state_t{t_snap:.6f}.snap"),
            fld,
            replace(header, t=t_snap),
        )
    text, _ = emit_report(report)
    snapshots.atomic_write_bytes(
        os.path.join(out_dir, "report.txt"), text.encode("utf-8")
    )
    if plots:
        emit_plots(
            report.run.series, report.run.snapshots,
            os.path.join(out_dir, "plots"),
            spectrum_field=report.run.final_state,
        )
    return text


# --------------------------------------------------------------------------
# commands

def _cmd_preset_list(args) -> int:
    names = preset_names()
    if args.json:
        entries = []
        for name in names:
            sc = preset(name)
            entries.append({
                "name": name,
                "s": sc.params.s, "p": sc.params.p, "gamma": sc.params.gamma,
                "eps": sc.params.eps, "n_modes": sc.grid.n_modes,
                "half_width": sc.grid.half_width, "t_end": sc.tg.t_end,
                "n_steps": sc.tg.n_steps, "integrator": sc.integrator,
                "data": sc.data.kind,
                "expectations": [e.quantity for e in sc.expected],
            })
        print(json.dumps(entries, indent=2))
    else:
        for name in names:
            print(name)
    return EXIT_OK


def _run_and_report(scenario: Scenario, args) -> int:
    if args.integrator:
        scenario = replace(scenario, integrator=args.integrator)
    try:
        report = run_scenario(scenario, scale=args.scale)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out or _default_out_dir(scenario.name)
    text = write_run_outputs(report, out_dir, args.plots)
    print(text, end="")
    print(f"outputs written to {out_dir}")
    _, code = emit_report(report)
    return code


def _cmd_preset_run(args) -> int:
    try:
        scenario = preset(args.name)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _run_and_report(scenario, args)


def _cmd_evolve(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            parsed = parse_config(handle.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if isinstance(parsed, RunConfig):
        print("error: config describes a [run], expected a scenario",
              file=sys.stderr)
        return EXIT_CONFIG
    return _run_and_report(parsed, args)


def _cmd_groundstate(args) -> int:
    try:
        grid = Grid(args.n_modes, args.half_width)
        states = continuation_in_s(args.s, args.p, grid)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    state = states[-1]
    out_dir = args.out or _default_out_dir(f"groundstate_s{args.s:g}")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"groundstate_s{args.s:g}_p{args.p:g}.snap")
    header = snapshots.SnapshotHeader(
        n_modes=grid.n_modes, half_width=grid.half_width, t=0.0,
        s=state.s, p=state.p, gamma=-1.0, eps=1.0, omega=state.omega,
        residual_norm=state.residual_norm, is_ground_state=True,
    )
    snapshots.write_snapshot(path, state.field, header)
    for st in states:
        print(f"s = {st.s:<6g} residual = {st.residual_norm:.3e} "
              f"newton steps = {len(st.residual_history) - 1}")
    print(f"ground state written to {path}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    try:
        series = snapshots.read_series(args.series)
    except (OSError, snapshots.SnapshotFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    t = series["t"]
    if args.norm == "grad":
        values = series["grad_l2"]
        y = 2.0 * np.log(values / values[0])
    else:
        values = series["sup_norm"]
        y = np.log(values / values[0])
    models = ("pure_log", "log_log") if args.model == "both" else (args.model,)
    for model in models:
        fit = analysis.fit_blowup_rate(t, y, model, args.window)
        print(
            f"{model}: t* = {fit.t_star:.6g} kappa1 = {fit.kappa1:.6g} "
            f"kappa2 = {fit.kappa2:.6g} Delta2 = {fit.delta2:.6g} "
            f"(n = {fit.n_used})"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fnlslab",
        description="Pseudospectral laboratory for 1-D fractional NLS",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("preset-list", help="list catalogued experiments")
    p_list.add_argument("--json", action="store_true",
                        help="machine-readable listing")
    p_list.set_defaults(func=_cmd_preset_list)

    def add_run_args(p):
        p.add_argument("--scale", type=_parse_scale, default=1.0,
                       help="resolution scale: 1, 1/2, 1/4, 1/8")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--plots", action="store_true", help="emit SVG figures")
        p.add_argument("--integrator", default=None,
                       choices=("splitting4", "stiff_rk4"))

    p_run = sub.add_parser("preset-run", help="run a catalogued experiment")
    p_run.add_argument("name")
    add_run_args(p_run)
    p_run.set_defaults(func=_cmd_preset_run)

    p_ev = sub.add_parser("evolve", help="run a scenario from a config file")
    p_ev.add_argument("config")
    add_run_args(p_ev)
    p_ev.set_defaults(func=_cmd_evolve)

    p_gs = sub.add_parser("groundstate", help="compute a ground state")
    p_gs.add_argument("--s", type=float, required=True)
    p_gs.add_argument("--p", type=float, default=1.0)
    p_gs.add_argument("--n-modes", type=int, default=2**16)
    p_gs.add_argument("--half-width", type=float, default=100.0)
    p_gs.add_argument("--out", default=None)
    p_gs.set_defaults(func=_cmd_groundstate)

    p_fit = sub.add_parser("fit", help="fit blow-up rates from a series CSV")
    p_fit.add_argument("series")
    p_fit.add_argument("--model", choices=("pure_log", "log_log", "both"),
                       default="pure_log")
    p_fit.add_argument("--window", default="last_1000",
                       choices=sorted(analysis.WINDOW_PRESETS))
    p_fit.add_argument("--norm", choices=("grad", "sup"), default="grad")
    p_fit.set_defaults(func=_cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
