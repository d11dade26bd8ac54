"""Command-line front end.

    susyloops <command> --config FILE [--out DIR] [--seed INT]

Commands: potential, spectrum, phase, loop, coherent, run (all configured
tasks).  Failures exit non-zero with a JSON error object on stderr:
2 for invalid input or singular chains, 3 when a numerical cross-check fails.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .basis import SpectrumDescriptor, random_state
from .errors import ConsistencyError, SusyError
from .loops import detect_loops, evolve, geometric_phase_closed, geometric_phase_coherent
from .numverify import discretize, loop_residual, low_eigenvalues, spectrum_report
from .seed import SeedSpec
from .states import coherent_state
from .susychain import Grid, SusyChain, potential_wronskian

TASKS = ("potential", "spectrum", "phase", "loop", "coherent")
GRID_ENV = "SUSYLOOPS_GRID_POINTS"
PHASE_RTOL = 1e-9
ROUNDTRIP_TOL = 1e-12


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.extra = extra


@dataclass
class SeedConfig:
    epsilon: float
    nu: float
    exact: Optional[Fraction] = None


@dataclass
class ExperimentConfig:
    seeds: List[SeedConfig]
    grid: Grid
    tasks: List[str]
    output_dir: Path
    random_seed: int = 0
    phase: dict = field(default_factory=dict)
    coherent: dict = field(default_factory=dict)
    spectrum: dict = field(default_factory=dict)

    @property
    def exact_epsilons(self) -> Optional[List[Fraction]]:
        if all(s.exact is not None for s in self.seeds):
            return [s.exact for s in self.seeds]
        return None

    def chain(self) -> SusyChain:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return SusyChain(tuple(SeedSpec(s.epsilon, s.nu) for s in self.seeds), self.grid)

    def spectrum_descriptor(self) -> SpectrumDescriptor:
        return SpectrumDescriptor(tuple(s.epsilon for s in self.seeds))


def _parse_seed(raw) -> SeedConfig:
    if not isinstance(raw, dict) or "epsilon" not in raw:
        raise CliError(2, "config", f"seed entry must be an object with 'epsilon': {raw!r}")
    eps = raw["epsilon"]
    nu = float(raw.get("nu", 0.0))
    if isinstance(eps, list):
        if len(eps) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in eps) or eps[1] == 0:
            raise CliError(2, "config", f"exact epsilon must be [numerator, denominator], got {eps!r}")
        exact = Fraction(eps[0], eps[1])
        return SeedConfig(float(exact), nu, exact)
    if isinstance(eps, (int, float)) and not isinstance(eps, bool):
        return SeedConfig(float(eps), nu)
    raise CliError(2, "config", f"unsupported epsilon value {eps!r}")


def load_config(path, out: Optional[str] = None, seed: Optional[int] = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(2, "config", f"cannot read config {path}: {exc}") from exc
    seeds = [_parse_seed(s) for s in raw.get("seeds", [])]
    g = raw.get("grid") or {}
    n_points = int(g.get("n_points", 2401))
    if os.environ.get(GRID_ENV):
        n_points = int(os.environ[GRID_ENV])
    try:
        grid = Grid(float(g.get("x_min", -12.0)), float(g.get("x_max", 12.0)), n_points)
    except ValueError as exc:
        raise CliError(2, "config", str(exc)) from exc
    tasks = raw.get("tasks", list(TASKS))
    if not tasks:
        raise CliError(2, "config", "at least one task is required")
    unknown = [t for t in tasks if t not in TASKS]
    if unknown:
        raise CliError(2, "config", f"unknown tasks {unknown}")
    output_dir = Path(out or raw.get("output_dir", "."))
    random_seed = int(seed if seed is not None else raw.get("seed", 0))
    return ExperimentConfig(seeds, grid, list(tasks), output_dir, random_seed,
                            raw.get("phase", {}), raw.get("coherent", {}), raw.get("spectrum", {}))


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: Path, data) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_potential(cfg: ExperimentConfig) -> Path:
    chain = cfg.chain()
    pot = potential_wronskian(chain)
    x = chain.grid.x
    path = cfg.output_dir / "potential.csv"
    _write_csv(path, ["x", "v0", "vk"], zip(x, 0.5 * x * x, pot.v))
    return path


def cmd_spectrum(cfg: ExperimentConfig) -> Path:
    chain = cfg.chain()
    report = spectrum_report(chain, int(cfg.spectrum.get("n_ladder", 4)))
    path = cfg.output_dir / "spectrum.json"
    data = report.to_json()
    data["numeric"] = [float(v) for v in data["numeric"]]
    data["spurious"] = [float(v) for v in data["spurious"]]
    _write_json(path, data)
    if not report.ok:
        raise CliError(3, "oracle", "discretized spectrum disagrees with the analytic levels",
                       max_abs_err=report.max_abs_err, spurious=data["spurious"])
    return path


def cmd_phase(cfg: ExperimentConfig, r_min: float = None, r_max: float = None, r_steps: int = None) -> Path:
    spec = cfg.spectrum_descriptor()
    r_min = float(cfg.phase.get("r_min", 0.0) if r_min is None else r_min)
    r_max = float(cfg.phase.get("r_max", 5.0) if r_max is None else r_max)
    r_steps = int(cfg.phase.get("r_steps", 51) if r_steps is None else r_steps)
    rows = []
    worst = 0.0
    for r in np.linspace(r_min, r_max, r_steps):
        r = float(r)
        try:
            res = geometric_phase_coherent(spec, r)
            closed, summed = res.beta, res.beta_check
        except ConsistencyError:
            closed = geometric_phase_closed(spec, r)
            cs = coherent_state(spec, r)
            summed = 2 * math.pi * math.fsum(np.arange(cs.state.n_levels) * np.abs(cs.state.c) ** 2)
        scale = max(abs(closed), abs(summed))
        if scale:
            worst = max(worst, abs(closed - summed) / scale)
        rows.append((r, closed, summed, 2 * math.pi * r * r))
    path = cfg.output_dir / "phase.csv"
    _write_csv(path, ["r", "beta_closed", "beta_sum", "beta_standard"], rows)
    if worst > PHASE_RTOL:
        raise CliError(3, "oracle", "closed-form and summed phases disagree", max_rel_err=worst)
    return path


def cmd_loop(cfg: ExperimentConfig) -> Path:
    spec = cfg.spectrum_descriptor()
    exact = cfg.exact_epsilons
    report = detect_loops(spec, exact if spec.k else None)
    data = {"loop": report.to_json()}
    if exact is None and spec.k:
        data["note"] = "no exact factorization energies supplied; only the partial loop is reported"
    failed = None
    if report.kind == "global":
        rng = np.random.default_rng(cfg.random_seed)
        errs = []
        for _ in range(10):
            st = random_state(spec.k, 16, rng)
            back = evolve(spec, st, report.tau)
            errs.append(back.max_coefficient_error(st.scaled(report.phase_factor)))
        chain = cfg.chain()
        eigs = low_eigenvalues(discretize(potential_wronskian(chain)), spec.k + 4)
        data["verification"] = {
            "roundtrip_states": 10,
            "roundtrip_max_error": max(errs),
            "numeric_levels": [float(e) for e in eigs],
            "loop_residual": loop_residual(eigs, report.tau, report.phi),
        }
        if max(errs) > ROUNDTRIP_TOL:
            failed = max(errs)
    path = cfg.output_dir / "loop.json"
    _write_json(path, data)
    if failed is not None:
        raise CliError(3, "oracle", "evolution at the loop period does not return the states", max_error=failed)
    return path


def cmd_coherent(cfg: ExperimentConfig) -> Path:
    spec = cfg.spectrum_descriptor()
    zr = cfg.coherent.get("z", [1.0, 0.0])
    z = complex(zr[0], zr[1]) if isinstance(zr, list) else complex(zr)
    cs = coherent_state(spec, z)
    path = cfg.output_dir / "coherent.json"
    _write_json(path, cs.to_json())
    return path


COMMANDS = {
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "phase": cmd_phase,
    "loop": cmd_loop,
    "coherent": cmd_coherent,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="susyloops", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=list(COMMANDS) + ["run"])
    p.add_argument("--config", required=True, help="JSON experiment descriptor")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, help="random seed for verification states")
    return p


def _fail(code: int, kind: str, message: str, **extra) -> int:
    payload = {"error": kind, "message": message, "exit_code": code}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload, default=float) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.out, args.seed)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        names = cfg.tasks if args.command == "run" else [args.command]
        written = [str(COMMANDS[n](cfg)) for n in names]
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc), **exc.extra)
    except ConsistencyError as exc:
        return _fail(3, "oracle", str(exc))
    except SusyError as exc:
        extra = {"x": exc.x} if getattr(exc, "x", None) is not None else {}
        return _fail(2, type(exc).__name__, str(exc), **extra)
    except ValueError as exc:
        return _fail(2, "ValueError", str(exc))
    for w in written:
        print(w)
    return 0


if __name__ == "__main__":
    sys.exit(main())
