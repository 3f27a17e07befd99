"""Command-line front end.

Subcommands:
  measure            one-shot report of a prepared state, CSV row to stdout
  evolve             closed-system or intrinsic-decoherence time sweep
  channel            apply a Kraus channel, then report
  figure figN        regenerate the data CSVs for one figure (plus quick-look PNGs)
  sweep              closed-form grid sweep driven by an INI config file
  validate-oracles   run every pipeline-vs-closed-form check and report deviations

States and channels use a small name:params syntax, e.g. --state gghz:0.7 or
--channel gadc:0.3,0.5. Parameters can also come from the dedicated flags
(--d, --p, --theta, ...); values inside the state/channel token win.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import experiments, measures
from .channels import KrausChannel, Placement, apply, by_name, dephasing_lambda
from .closedform import ScenarioId
from .dynamics import HamiltonianParams, MilburnParams, milburn_evolve, schrodinger_evolve
from .states import gghz, ghz, gw, mix_ghz_extremes, mix_w_vacuum, pure_dm, w, wbar, wwbar

_FIGURES = tuple(f"fig{i}" for i in range(1, 10))
_PLACES = {p.value: p for p in Placement}


class UsageError(ValueError):
    """Bad invocation; the message names the offending flag or token."""


class RunError(RuntimeError):
    """Invocation was well-formed but execution failed."""


@dataclass(frozen=True)
class RunConfig:
    """Fully parsed invocation. None means the flag was not given; effective
    defaults are applied per command at execution time."""

    command: str
    state: str = "ghz"
    channel: str | None = None
    place: str = "q1"
    J: float = 1.0
    Delta: float = 1.0
    D: float = 0.0
    B: float = 0.0
    milburn: bool = False
    gamma: float | None = None
    d: float | None = None
    p: float | None = None
    b: float | None = None
    tau: float | None = None
    theta: float | None = None
    w: float | None = None
    w1: float | None = None
    w2: float | None = None
    tmax: float = 10.0
    steps: int | None = None
    out: str | None = None
    figure: str | None = None
    config_path: str | None = None
    scenario: str | None = None
    grid: tuple[tuple[str, float, float, int], ...] = ()

    def __post_init__(self) -> None:
        if self.command not in ("measure", "evolve", "channel", "figure", "sweep",
                                "validate-oracles"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.gamma is not None and not (self.command == "evolve" and self.milburn):
            raise UsageError("--gamma is only valid with 'evolve --milburn'")
        if self.milburn and self.command != "evolve":
            raise UsageError("--milburn is only valid with the 'evolve' command")
        if self.milburn and self.gamma is None:
            raise UsageError("--milburn requires --gamma")
        if self.place not in _PLACES:
            raise UsageError(f"--place must be one of {sorted(_PLACES)}, got {self.place!r}")
        if self.steps is not None and self.steps < 2:
            raise UsageError("--steps must be at least 2")
        if self.figure is not None and self.figure not in _FIGURES:
            raise UsageError(f"figure id must be fig1..fig9, got {self.figure!r}")
        if self.command == "figure" and self.figure is None:
            raise UsageError("the 'figure' command needs a figure id (fig1..fig9)")

    def to_argv(self) -> list[str]:
        """Arguments that reparse to an equal config (sweep grids are carried
        by the config file, so they round-trip through --config)."""
        argv = [self.command]
        if self.figure is not None:
            argv.append(self.figure)
        argv += ["--state", self.state, "--place", self.place]
        if self.channel is not None:
            argv += ["--channel", self.channel]
        for flag, value in (
            ("--J", self.J), ("--Delta", self.Delta), ("--D", self.D),
            ("--B", self.B), ("--gamma", self.gamma), ("--d", self.d),
            ("--p", self.p), ("--b", self.b), ("--tau", self.tau),
            ("--theta", self.theta), ("--w", self.w), ("--w1", self.w1),
            ("--w2", self.w2), ("--tmax", self.tmax),
        ):
            if value is not None:
                argv += [flag, repr(float(value))]
        if self.milburn:
            argv.append("--milburn")
        if self.steps is not None:
            argv += ["--steps", str(self.steps)]
        if self.out is not None:
            argv += ["--out", self.out]
        if self.config_path is not None:
            argv += ["--config", self.config_path]
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tritangle", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--state", default=None,
                       help="ghz | gghz:a | w | wbar | wwbar:theta[,phi] | "
                            "gw:a,b | mix-ghz:w1,w2 | mix-w:w")
        p.add_argument("--channel", default=None,
                       help="pdc[:d] | adc[:d] | gadc[:d,p] | ntd[:lambda]")
        p.add_argument("--place", default=None, help="q1 | q2 | q3 | all")
        for flag in ("J", "Delta", "D", "B", "gamma", "d", "p", "b", "tau",
                     "theta", "w", "w1", "w2", "tmax"):
            p.add_argument(f"--{flag}", type=float, default=None)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--milburn", action="store_true", default=False)
        p.add_argument("--out", default=None)
        p.add_argument("--config", dest="config_path", default=None)

    for name in ("measure", "evolve", "channel", "sweep", "validate-oracles"):
        common(sub.add_parser(name))
    fig = sub.add_parser("figure")
    fig.add_argument("figure", metavar="figN", help="fig1..fig9")
    common(fig)
    return parser


_SCENARIO_KEYS = {
    "id": ("scenario", str), "state": ("state", str), "channel": ("channel", str),
    "place": ("place", str), "figure": ("figure", str),
    "milburn": ("milburn", bool), "steps": ("steps", int),
    **{k: (k, float) for k in ("J", "Delta", "D", "B", "gamma", "d", "p", "b",
                               "tau", "theta", "w", "w1", "w2", "tmax")},
}


def _config_line(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.lower().startswith(key.lower()) and \
                stripped[len(key):].lstrip().startswith(("=", ":")):
            return i
    return 0


def load_config(path: str | Path, base: RunConfig | None = None,
                explicit: frozenset[str] = frozenset()) -> RunConfig:
    """Merge an INI file ([scenario] / [grid] / [output]) into a config.

    Values given on the command line (listed in `explicit`) keep priority
    over the file. Parse and validation errors name the offending line.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from exc
    parser = ConfigParser()
    try:
        parser.read_string(text, source=str(path))
    except ConfigParserError as exc:
        raise UsageError(f"--config {path}: {exc}") from exc
    unknown = set(parser.sections()) - {"scenario", "grid", "output"}
    if unknown:
        raise UsageError(f"--config {path}: unknown section(s) {sorted(unknown)}")
    updates: dict[str, object] = {}
    if parser.has_section("scenario"):
        for key, raw in parser.items("scenario"):
            if key not in _SCENARIO_KEYS:
                raise UsageError(
                    f"--config {path} line {_config_line(text, key)}: "
                    f"unknown key {key!r} in [scenario]")
            field_name, cast = _SCENARIO_KEYS[key]
            try:
                value: object = raw.strip().lower() in ("1", "true", "yes", "on") \
                    if cast is bool else cast(raw)
            except ValueError as exc:
                raise UsageError(
                    f"--config {path} line {_config_line(text, key)}: "
                    f"bad value for {key!r}: {exc}") from exc
            updates[field_name] = value
    if parser.has_section("grid"):
        axes = []
        for key, raw in parser.items("grid"):
            parts = [s.strip() for s in raw.split(",")]
            try:
                if len(parts) != 3:
                    raise ValueError("expected 'start,stop,steps'")
                axes.append((key, float(parts[0]), float(parts[1]), int(parts[2])))
            except ValueError as exc:
                raise UsageError(
                    f"--config {path} line {_config_line(text, key)}: "
                    f"bad grid axis {key!r}: {exc}") from exc
        updates["grid"] = tuple(axes)
    if parser.has_section("output"):
        for key, raw in parser.items("output"):
            if key != "path":
                raise UsageError(
                    f"--config {path} line {_config_line(text, key)}: "
                    f"unknown key {key!r} in [output]")
            updates["out"] = raw.strip()
    base = base if base is not None else RunConfig(command="sweep")
    kept = {k: v for k, v in updates.items() if k not in explicit}
    return replace(base, **kept)


def parse_args(argv: list[str]) -> RunConfig:
    """Parse an argument vector into a validated RunConfig."""
    namespace = _build_parser().parse_args(argv)
    values = vars(namespace)
    explicit = frozenset(
        k for k, v in values.items()
        if v is not None and not (k == "milburn" and v is False)
    )
    field_names = {f.name for f in RunConfig.__dataclass_fields__.values()}
    kwargs = {k: v for k, v in values.items() if k in field_names and v is not None}
    if "milburn" in values:
        kwargs["milburn"] = values["milburn"]
    try:
        config = RunConfig(**kwargs)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    if config.config_path is not None:
        config = load_config(config.config_path, base=config, explicit=explicit)
    return config


def _split_token(token: str) -> tuple[str, list[float]]:
    name, _, tail = token.partition(":")
    if not tail:
        return name.strip().lower(), []
    try:
        params = [float(s) for s in tail.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad numeric parameter in {token!r}: {exc}") from exc
    return name.strip().lower(), params


def _pick(params: list[float], index: int, fallback: float | None,
          what: str, flag: str) -> float:
    if index < len(params):
        return params[index]
    if fallback is not None:
        return fallback
    raise UsageError(f"{what} needs a value; give it in the token or via {flag}")


def build_state(config: RunConfig) -> np.ndarray:
    """Density matrix described by --state plus the parameter flags."""
    name, params = _split_token(config.state)
    if name == "ghz":
        return pure_dm(ghz())
    if name == "gghz":
        return pure_dm(gghz(_pick(params, 0, None, "gghz amplitude", "--state gghz:a")))
    if name == "w":
        return pure_dm(w())
    if name == "wbar":
        return pure_dm(wbar())
    if name == "wwbar":
        theta = _pick(params, 0, config.theta, "wwbar mixing angle", "--theta")
        phi = params[1] if len(params) > 1 else 0.0
        return pure_dm(wwbar(theta, phi))
    if name == "gw":
        a = _pick(params, 0, None, "gw amplitude a", "--state gw:a,b")
        b = _pick(params, 1, None, "gw amplitude b", "--state gw:a,b")
        return pure_dm(gw(a, b))
    if name == "mix-ghz":
        ww1 = _pick(params, 0, config.w1, "mix-ghz weight w1", "--w1")
        ww2 = _pick(params, 1, config.w2, "mix-ghz weight w2", "--w2")
        return mix_ghz_extremes(ww1, ww2)
    if name == "mix-w":
        return mix_w_vacuum(_pick(params, 0, config.w, "mix-w weight", "--w"))
    raise UsageError(f"--state: unknown state {name!r}")


def build_channel(config: RunConfig) -> KrausChannel:
    """Kraus channel described by --channel plus the parameter flags."""
    if config.channel is None:
        raise UsageError("--channel is required for this command")
    name, params = _split_token(config.channel)
    if name in ("pdc", "adc"):
        return by_name(name, _pick(params, 0, config.d, f"{name} strength", "--d"))
    if name == "gadc":
        return by_name(
            "gadc",
            _pick(params, 0, config.d, "gadc strength", "--d"),
            _pick(params, 1, config.p, "gadc excitation weight", "--p"),
        )
    if name == "ntd":
        if params:
            lam = params[0]
        elif config.b is not None and config.tau is not None:
            lam = dephasing_lambda(config.b, config.tau, config.tmax)
        else:
            raise UsageError(
                "ntd needs a dephasing factor: ntd:lambda, or --b and --tau "
                "(evaluated at --tmax)")
        return by_name("ntd", lam)
    raise UsageError(f"--channel: unknown channel {name!r}")


def _hamiltonian(config: RunConfig) -> HamiltonianParams:
    return HamiltonianParams(J=config.J, Delta=config.Delta, D=config.D, B=config.B)


def _emit(config: RunConfig, filename: str, text: str, stdout: io.TextIOBase) -> None:
    if config.out is None:
        stdout.write(text)
    else:
        out_dir = Path(config.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / filename).write_text(text, encoding="utf-8")


def _single_row(rho: np.ndarray, label: str) -> str:
    report = measures.full_report(rho)
    return measures.MeasureReport.csv_header() + "\n" + report.csv_row(label) + "\n"


def _run_measure(config: RunConfig, stdout: io.TextIOBase) -> int:
    _emit(config, "measure.csv", _single_row(build_state(config), "0"), stdout)
    return 0


def _run_channel(config: RunConfig, stdout: io.TextIOBase) -> int:
    rho = apply(build_state(config), build_channel(config), _PLACES[config.place])
    _emit(config, "channel.csv", _single_row(rho, "0"), stdout)
    return 0


def _run_evolve(config: RunConfig, stdout: io.TextIOBase) -> int:
    rho0 = build_state(config)
    params = _hamiltonian(config)
    steps = config.steps if config.steps is not None else 200
    ts = np.linspace(0.0, config.tmax, steps)
    m = MilburnParams(config.gamma) if config.milburn else None
    convention = "quadratic" if config.milburn else "combination"
    lines = [measures.MeasureReport.csv_header()]
    for t in ts:
        rho = milburn_evolve(rho0, params, m, t) if m is not None \
            else schrodinger_evolve(rho0, params, t)
        report = measures.full_report(rho, m_convention=convention)
        lines.append(report.csv_row(f"{t:.16e}"))
    _emit(config, "evolve.csv", "\n".join(lines) + "\n", stdout)
    return 0


def _quicklook(csv_path: Path, png_path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    with csv_path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    header, data = rows[0], rows[1:]
    x_idx = header.index("t/param") if "t/param" in header else 0
    curve_cols = range(x_idx)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for col in range(x_idx + 1, len(header)):
        if header[col] in ("path",):
            continue
        groups: dict[tuple[str, ...], tuple[list[float], list[float]]] = {}
        for row in data:
            if col >= len(row) or row[col] == "":
                continue
            try:
                y = float(row[col])
            except ValueError:
                continue
            key = tuple(row[i] for i in curve_cols)
            xs, ys = groups.setdefault(key, ([], []))
            xs.append(float(row[x_idx]))
            ys.append(y)
        for j, (xs, ys) in enumerate(groups.values()):
            ax.plot(xs, ys, lw=0.9, label=header[col] if j == 0 else None)
    ax.set_xlabel(header[x_idx])
    ax.set_title(csv_path.stem)
    if ax.lines:
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(png_path, dpi=110)
    plt.close(fig)


def _run_figure(config: RunConfig, stdout: io.TextIOBase) -> int:
    out = config.out if config.out is not None else "."
    steps = config.steps if config.steps is not None else 2000
    paths = experiments.run_figure(config.figure, out, steps=steps)
    for path in paths:
        _quicklook(path, path.with_suffix(".png"))
        stdout.write(f"{path}\n")
    return 0


def _run_sweep(config: RunConfig, stdout: io.TextIOBase) -> int:
    if config.scenario is None:
        raise UsageError("sweep needs a config file with [scenario] id = ...")
    spec = experiments.SweepSpec(
        scenario=config.scenario,
        grid={name: (lo, hi, steps) for name, lo, hi, steps in config.grid},
        time_grid=None,
        output_path=config.out if config.out is not None else ".",
    )
    stdout.write(f"{experiments.run_sweep(spec)}\n")
    return 0


def _run_validate(config: RunConfig, stdout: io.TextIOBase) -> int:
    failed = 0
    for scenario in ScenarioId:
        report = experiments.cross_validate(scenario)
        for line in report.summary_lines():
            stdout.write(line + "\n")
        if not report.passed:
            failed += 1
    if failed:
        stdout.write(f"{failed} scenario(s) exceed the oracle gate\n")
        return 1
    stdout.write("all oracle gates passed\n")
    return 0


_RUNNERS = {
    "measure": _run_measure,
    "evolve": _run_evolve,
    "channel": _run_channel,
    "figure": _run_figure,
    "sweep": _run_sweep,
    "validate-oracles": _run_validate,
}


def run(config: RunConfig, stdout: io.TextIOBase | None = None) -> int:
    """Execute a parsed invocation; returns the process exit status."""
    out = stdout if stdout is not None else sys.stdout
    return _RUNNERS[config.command](config, out)


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_args(args)
        return run(config)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
