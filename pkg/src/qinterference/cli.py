"""Command-line front end.

    qinterference run CONFIG.json [--out DIR] [--seed N] [--no-vacuum] [--verify]
    qinterference sweep CONFIG.json --var VAR --from A --to B --points N [--out DIR]

Exit codes: 0 success, 2 configuration error, 3 oracle mismatch (--verify).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, QInterferenceError
from .config import ScenarioConfig
from .modes import Species
from .observables import Contraction, PhaseResponse
from .oracle import TruncatedFockSpace, matrix_expectation, merged_energy
from .hamiltonian import build_hamiltonian
from .scenarios import pattern_phases, run_scenario, scenario_modes, scenario_spec

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3

CSV_COLUMNS = ("scenario", "species", "N_modes", "phase_pattern", "vacuum",
               "E", "Px", "Py", "Pz", "Ntot", "Q", "cross_E", "seed")
VERIFY_TOL = 1e-9
MAX_ORACLE_DIM = 200_000


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def _manifest(args, config_path, formats):
    return {
        "tool": "qinterference",
        "version": __version__,
        "command": args.command,
        "config": str(config_path),
        "seed": args.seed,
        "formats": list(formats),
    }


def _atomic_write(files: dict) -> None:
    """Write all ``{path: text}`` pairs, or none of them."""
    staged = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def load_config(path, seed=None, no_vacuum=False) -> ScenarioConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object", "<root>")
    config = ScenarioConfig.from_dict(data)
    if seed is not None:
        config.seed = seed
    if no_vacuum:
        config.vacuum = False
    return config


def _csv_text(manifest, header, rows) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _row(config, values, cross_e):
    return [config.kind, config.species.value, config.n_modes, config.phase_pattern,
            config.vacuum, values["E"], values["Px"], values["Py"], values["Pz"],
            values["Ntot"], values["Q"], cross_e, config.seed]


def verify(config: ScenarioConfig):
    """Recompute the energy with an independent oracle when one applies.

    Returns (oracle name, oracle value), or None when no oracle covers the
    configuration.
    """
    if config.phase_pattern == "random":
        return None
    spec, state = scenario_spec(config)
    modes = spec.modes
    variant = config.algebra.variant.value
    if variant == "canonical":
        top = max(max(o) for o in config.occupations)
        space_dim = (top + 3) ** (2 * len(modes))
        if space_dim > MAX_ORACLE_DIM:
            return None
        space = TruncatedFockSpace(modes, n_max=top + 2)
        value = matrix_expectation(build_hamiltonian(spec), state, space)
        return "truncated-fock", value.real
    equal_k = all(m.k == modes[0].k for m in modes)
    if (variant == "cross-unit" and equal_k and config.contraction is Contraction.COHERENT
            and spec.species is not Species.FERMION):
        value = merged_energy(modes, config.occupations, [m.phase for m in modes],
                              config.vacuum)
        return "merged-mode", value
    return None


def cmd_run(args) -> int:
    config = load_config(args.config, args.seed, args.no_vacuum)
    rep, extras = run_scenario(config)
    manifest = _manifest(args, args.config, ("json", "csv"))
    payload = {"manifest": manifest, "config": config.to_dict(), "report": rep.as_dict(),
               "extras": extras}
    if args.verify:
        check = verify(config)
        if check is not None:
            name, value = check
            payload["verification"] = {"oracle": name, "energy": value,
                                       "abs_error": abs(value - rep.energy)}
            if abs(value - rep.energy) > VERIFY_TOL * max(1.0, abs(value)):
                print(f"oracle mismatch: {name} gives {value!r}, evaluator {rep.energy!r}",
                      file=sys.stderr)
                return EXIT_VERIFY
        else:
            payload["verification"] = None
    stem = Path(args.config).stem
    out = Path(args.out)
    cross_e = rep.metadata.get("cross_energy", rep.cross_energy)
    _atomic_write({
        out / f"{stem}.report.json": json.dumps(payload, indent=2, sort_keys=True) + "\n",
        out / f"{stem}.summary.csv": _csv_text(manifest, CSV_COLUMNS,
                                               [_row(config, rep.values(), cross_e)]),
    })
    print(f"E={fmt(rep.energy)} N={fmt(rep.particle_number)} Q={fmt(rep.charge)}")
    return EXIT_OK


def _parse_var(var: str, config: ScenarioConfig):
    if var in ("N", "dk"):
        return var, None
    if var.startswith("phase:"):
        try:
            i = int(var.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad mode index in {var!r}", "--var") from None
        if not 0 <= i < config.n_modes:
            raise ConfigError(f"mode index {i} out of range", "--var")
        return "phase", i
    raise ConfigError(f"unknown sweep variable {var!r} (use phase:<i>, dk or N)", "--var")


def sweep_rows(config: ScenarioConfig, var: str, grid):
    """One (value, observables, cross energy) triple per grid point."""
    kind, i = _parse_var(var, config)
    if config.phase_pattern == "random":
        raise ConfigError("sweeps need a deterministic phase pattern", "phase_pattern")
    if kind == "phase":
        base = np.array([m.phase for m in scenario_modes(config)])
        phases = np.repeat(base[None, :], len(grid), axis=0)
        phases[:, i] = grid
        spec, state = scenario_spec(config, phases=base)
        table = PhaseResponse(spec, state, config.contraction).evaluate(phases)
        for p, value in enumerate(grid):
            yield value, {k: table[k][p] for k in table}, table["cross_E"][p]
        return
    for value in grid:
        if kind == "dk":
            if not config.kind.startswith("young"):
                raise ConfigError("dk sweeps apply to Young scenarios", "kind")
            cfg = replace(config, delta_k=float(value))
        else:
            n = int(round(value))
            if n < 1:
                raise ConfigError("N must be >= 1", "--from")
            if config.kind.startswith("young") or config.kind in ("aharonov-bohm", "custom"):
                raise ConfigError(f"N sweeps are not defined for {config.kind}", "kind")
            cfg = replace(config, n_modes=n, occupations=[config.occupations[0]] * n)
            if cfg.phase_pattern == "explicit":
                raise ConfigError("N sweeps need the equal or pi-alternating pattern",
                                  "phase_pattern")
            pattern_phases(cfg.phase_pattern, n)
        spec, state = scenario_spec(cfg)
        table = PhaseResponse(spec, state, cfg.contraction).evaluate(
            [[m.phase for m in spec.modes]])
        yield value, {k: table[k][0] for k in table}, table["cross_E"][0]


def cmd_sweep(args) -> int:
    config = load_config(args.config, args.seed, args.no_vacuum)
    if args.points < 1:
        raise ConfigError("points must be >= 1", "--points")
    grid = np.linspace(args.start, args.stop, args.points)
    rows = []
    for value, values, cross_e in sweep_rows(config, args.var, grid):
        row = _row(config, values, cross_e)
        if args.var == "N":
            row[2] = int(round(value))
        rows.append([args.var, value] + row)
    manifest = _manifest(args, args.config, ("csv",))
    stem = Path(args.config).stem
    path = Path(args.out) / f"{stem}.sweep.csv"
    _atomic_write({path: _csv_text(manifest, ("var", "value") + CSV_COLUMNS, rows)})
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qinterference",
                                     description="Multimode interference observables")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="scenario JSON file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--no-vacuum", action="store_true", help="drop vacuum constants")

    run = sub.add_parser("run", help="run one scenario")
    common(run)
    run.add_argument("--verify", action="store_true",
                     help="cross-check the energy against an oracle")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="sweep one variable")
    common(sweep)
    sweep.add_argument("--var", required=True, help="phase:<i>, dk or N")
    sweep.add_argument("--from", dest="start", type=float, required=True)
    sweep.add_argument("--to", dest="stop", type=float, required=True)
    sweep.add_argument("--points", type=int, required=True)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QInterferenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
