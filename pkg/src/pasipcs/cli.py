"""Command-line tables for the photon-added coherent-state library.

Every command writes one table: CSV with a one-line JSON metadata comment,
or a JSON document. Numbers carry 12 significant digits. The exit status is
0 only when every check the command performs is within tolerance.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields
from importlib import metadata

import numpy as np

from . import coherent_states as cs
from . import measure, susy_core
from . import poschl_teller as pt
from . import thermal as th

DIGITS = 12


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    """Comma list of reals, or lo:hi:count for an evenly spaced grid."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        lo, hi, count = text.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(count))]
    return [float(v) for v in text.split(",")]


def _ints(text: str) -> list[int]:
    text = text.strip()
    return [int(v) for v in text.split(",")] if text else []


def _complexes(text: str) -> list[complex]:
    text = text.strip()
    return [complex(v.replace(" ", "")) for v in text.split(",")] if text else []


@dataclass
class RunConfig:
    l: float = 2.0
    l_prime: float = 2.0
    a: float = 1.0
    choice: str = cs.PHASE
    alpha: float = 0.0
    kappa: float = 1.0
    m: list[int] = field(default_factory=lambda: [0, 1, 2])
    n_max: int = 10
    z: list[complex] = field(default_factory=lambda: [0.5 + 0j])
    x: list[float] = field(default_factory=lambda: [float(v) for v in np.linspace(0.1, 10.0, 100)])
    beta: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 4.0, 8.0])
    truncation: int = 0
    tol: float = 0.0
    format: str = "csv"

    _PARSERS = {"l": float, "l_prime": float, "a": float, "choice": str, "alpha": float,
                "kappa": float, "m": _ints, "n_max": int, "z": _complexes, "x": _floats,
                "beta": _floats, "truncation": int, "tol": float, "format": str}

    def params(self) -> pt.PTParams:
        return pt.PTParams(self.l, self.l_prime, self.a)

    def zchoice(self) -> cs.ZChoice:
        return cs.ZChoice(self.choice, self.alpha, self.kappa)

    def set(self, key: str, text: str, where: str = ""):
        if key not in self._PARSERS:
            raise ConfigError(f"{where}unknown field {key!r}")
        try:
            setattr(self, key, self._PARSERS[key](text))
        except ValueError as exc:
            raise ConfigError(f"{where}bad value for field {key!r}: {text!r} ({exc})") from None

    def validate(self):
        if self.choice not in (cs.PHASE, cs.GAMMA):
            raise ConfigError(f"field 'choice' must be {cs.PHASE} or {cs.GAMMA}, got {self.choice!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"field 'format' must be csv or json, got {self.format!r}")
        if any(v < 0 for v in self.m):
            raise ConfigError("field 'm' must hold non-negative integers")
        try:
            self.zchoice().check(self.params())
        except ValueError as exc:
            raise ConfigError(f"fields 'l', 'l_prime', 'a', 'kappa': {exc}") from None

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            val = getattr(self, f.name)
            if isinstance(val, list):
                val = _fmt_list(val)
            else:
                val = _fmt(val)
            lines.append(f"{f.name} = {val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg.set(key, val, f"{source}:{lineno}: ")
        return cfg


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, complex):
        if v.imag == 0:
            return f"{v.real:.{DIGITS}g}"
        return f"{v.real:.{DIGITS}g}{v.imag:+.{DIGITS}g}j"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{DIGITS}g}"
    return str(v)


def _fmt_list(vals) -> str:
    """Comma list, or lo:hi:count when the values are an evenly spaced grid."""
    if len(vals) > 2 and all(isinstance(v, float) for v in vals):
        grid = np.linspace(vals[0], vals[-1], len(vals))
        if np.array_equal(grid, np.asarray(vals)):
            return f"{_fmt(vals[0])}:{_fmt(vals[-1])}:{len(vals)}"
    return ",".join(_fmt(v) for v in vals)


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    ok: bool = True
    notes: dict = field(default_factory=dict)


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def render(table: Table, cfg: RunConfig, command: str) -> str:
    meta = {"command": command, "version": _version(), "ok": bool(table.ok),
            "config": cfg.to_text().strip().splitlines(), **table.notes}
    if cfg.format == "json":
        rows = [[_fmt(v) for v in row] for row in table.rows]
        return json.dumps({"meta": meta, "columns": table.columns, "rows": rows}, indent=1) + "\n"
    out = ["# " + json.dumps(meta, sort_keys=True), ",".join(table.columns)]
    out += [",".join(_fmt(v) for v in row) for row in table.rows]
    return "\n".join(out) + "\n"


def _tol(cfg: RunConfig, default: float) -> float:
    return cfg.tol if cfg.tol > 0 else default


# ------------------------------------------------------------------ commands

def cmd_spectrum(cfg: RunConfig) -> Table:
    p = cfg.params()
    tol = _tol(cfg, 1e-12)
    table = Table(["n", "E_partial_sum", "E_closed", "abs_diff"])
    if cfg.n_max < 0:
        return table
    sums = susy_core.spectrum(pt.pt_chain(p), cfg.n_max).energies
    for n in range(cfg.n_max + 1):
        closed = pt.energy(p, n)
        diff = abs(sums[n] - closed)
        table.ok &= diff <= tol * max(1.0, abs(closed))
        table.rows.append([n, sums[n], closed, diff])
    return table


def cmd_coeffs(cfg: RunConfig) -> Table:
    p, choice = cfg.params(), cfg.zchoice()
    tol = _tol(cfg, 1e-10)
    table = Table(["m", "n", "mod2_raw", "mod2_closed", "phase_closed", "rel_diff"])
    for m in cfg.m:
        for n in range(cfg.n_max + 1):
            raw = cs.coefficient_raw(choice, p, m, n)
            closed = cs.coefficient_closed(choice, p, m, n)
            rel = abs(raw - closed) / abs(closed)
            table.ok &= rel <= tol
            table.rows.append([m, n, abs(raw) ** 2, abs(closed) ** 2, np.angle(closed), rel])
    return table


def cmd_state(cfg: RunConfig) -> Table:
    p, choice = cfg.params(), cfg.zchoice()
    tol = _tol(cfg, 1e-10)
    table = Table(["m", "z", "level", "prob", "phase"])
    for m in cfg.m:
        for z in cfg.z:
            state = cs.state_coefficients(choice, p, z, m, cfg.truncation or None)
            probs = state.probabilities()
            table.ok &= abs(probs.sum() - 1) <= tol
            for level, (c, pr) in enumerate(zip(state.coeffs, probs)):
                table.rows.append([m, z, level, pr, float(np.angle(c)) if pr > 0 else 0.0])
    return table


def cmd_weight(cfg: RunConfig) -> Table:
    p, choice = cfg.params(), cfg.zchoice()
    curves = measure.sample_weights(choice, p, cfg.m, cfg.x)
    return _curve_table(curves, cfg)


def _curve_table(curves: measure.CurveSet, cfg: RunConfig) -> Table:
    table = Table(["x"] + [f"omega_m{m}" for m in curves.curves])
    table.notes["failed_points"] = {str(m): n for m, n in curves.failures.items()}
    for i, x in enumerate(curves.x):
        row = [x]
        for vals in curves.curves.values():
            v = vals[i]
            row.append(v)
            if math.isfinite(v):
                table.ok &= v >= -1e-10
        table.rows.append(row)
    table.ok = bool(table.ok) and not any(curves.failures.values())
    return table


def cmd_curves(cfg: RunConfig) -> Table:
    # phase-choice weights for every m in the config, on the x grid
    p = cfg.params()
    curves = measure.sample_weights(cs.ZChoice.phase_only(cfg.alpha), p, cfg.m, cfg.x)
    return _curve_table(curves, cfg)


def cmd_moments(cfg: RunConfig) -> Table:
    p, choice = cfg.params(), cfg.zchoice()
    default = measure.PHASE_MOMENT_TOL if choice.kind == cs.PHASE else measure.GAMMA_MOMENT_TOL
    tol = _tol(cfg, default)
    table = Table(["m", "n", "integral", "target", "rel_err"])
    for m in cfg.m:
        report = measure.identity_resolution_report(measure.WeightSpec(choice, p, m), cfg.n_max, tol)
        table.ok &= report.ok
        for r in report.moments:
            table.rows.append([m, r.n, r.integral, r.target, r.rel_err])
    return table


def cmd_thermal(cfg: RunConfig) -> Table:
    p, choice = cfg.params(), cfg.zchoice()
    tol = _tol(cfg, 1e-12)
    table = Table(["m", "beta", "Z", "mean_N", "mean_N2", "g2", "mandel_q",
                   "dev_Q_minus_beta", "dev_Q_plus_beta"])
    for m in cfg.m:
        for beta in cfg.beta:
            tcfg = th.ThermalConfig(beta, m, cfg.truncation or None)
            cross = th.closed_form_crosscheck(p, choice, tcfg)
            r = cross.direct
            if r.mean_N > 0:
                identity = r.variance / r.mean_N - 1
                table.ok &= abs(identity - r.mandel_q) <= tol * max(1.0, abs(r.mandel_q))
            table.rows.append([m, beta, r.partition, r.mean_N, r.mean_N2, r.g2, r.mandel_q,
                               cross.deviation["minus_beta"]["mandel_q"],
                               cross.deviation["plus_beta"]["mandel_q"]])
    return table


COMMANDS = {"spectrum": cmd_spectrum, "coeffs": cmd_coeffs, "state": cmd_state,
            "weight": cmd_weight, "curves": cmd_curves, "moments": cmd_moments,
            "thermal": cmd_thermal}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pasipcs", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="flat key = value file")
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--choice", choices=[cs.PHASE, cs.GAMMA])
    parser.add_argument("--m", help="comma list of added quanta")
    parser.add_argument("--beta", help="comma list or lo:hi:count")
    parser.add_argument("--tol", help="tolerance override")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="any config field, repeatable")
    return parser


def load_config(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.parse(fh.read(), args.config)
    else:
        cfg = RunConfig()
    for key in ("format", "choice", "m", "beta", "tol"):
        val = getattr(args, key)
        if val is not None:
            cfg.set(key, val, f"--{key}: ")
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        cfg.set(key.strip(), val.strip(), "--set: ")
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        table = COMMANDS[args.command](cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"{args.command} failed: {exc}", file=sys.stderr)
        return 1
    text = render(table, cfg, args.command)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if table.ok else 1


if __name__ == "__main__":
    sys.exit(main())
