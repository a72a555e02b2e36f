"""Experiment runner: every pipeline as a subcommand with seeded
reproducibility, flat key-value configs, and manifest-stamped outputs.

Output protocol: artifacts are written to temporary names inside the output
directory, their digests go into manifest.txt, and only then are the
artifacts renamed into place.  A directory holds exactly one manifest;
rerunning into it requires --force.  Exit status is 0 only if every requested
artifact was produced.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, analysis, presets, rbm, thermo, vmc
from .csvio import write_csv
from .errors import RbmTfiError
from .exact import ED_MAX_L, ed_ground_state, free_fermion_energy
from .runtime import worker_count
from .spins import TfiParams
from .sr import SrConfig, optimize
from .vmc import SamplerConfig

MANIFEST_NAME = "manifest.txt"


class CliError(Exception):
    """User-facing failure; printed to stderr with exit status 2."""


@dataclass
class RunManifest:
    """What gets stamped next to every output set: tool version, the fully
    resolved configuration (defaults materialized), the master seed, wall
    times, and a sha256 per emitted file."""

    subcommand: str
    master_seed: int
    config: dict
    started_utc: str
    finished_utc: str = ""
    digests: dict = field(default_factory=dict)

    def render(self) -> str:
        lines = [
            f"tool = rbmtfi {__version__}",
            f"subcommand = {self.subcommand}",
            f"started_utc = {self.started_utc}",
            f"finished_utc = {self.finished_utc}",
            f"master_seed = {self.master_seed}",
        ]
        lines += [f"config.{k} = {v}" for k, v in sorted(self.config.items())]
        lines += [f"digest.{name} = {digest}" for name, digest in sorted(self.digests.items())]
        return "\n".join(lines) + "\n"


class ArtifactDir:
    """Staged output directory: files land under temporary names and are
    renamed only after the manifest (with their digests) is on disk."""

    def __init__(self, outdir: Path, subcommand: str, master_seed: int,
                 config: dict, force: bool):
        self.outdir = outdir
        self.staged: list[tuple[Path, str]] = []
        self.manifest = RunManifest(
            subcommand=subcommand, master_seed=master_seed, config=config,
            started_utc=datetime.now(timezone.utc).isoformat())
        if outdir.exists() and (outdir / MANIFEST_NAME).exists() and not force:
            raise CliError(f"{outdir} already holds a manifest; rerun with --force to overwrite")
        outdir.mkdir(parents=True, exist_ok=True)

    def stage(self, name: str) -> Path:
        tmp = self.outdir / (name + ".tmp")
        self.staged.append((tmp, name))
        return tmp

    def finalize(self) -> None:
        for tmp, name in self.staged:
            digest = hashlib.sha256(tmp.read_bytes()).hexdigest()
            self.manifest.digests[name] = digest
        self.manifest.finished_utc = datetime.now(timezone.utc).isoformat()
        (self.outdir / MANIFEST_NAME).write_text(self.manifest.render(), encoding="ascii")
        for tmp, name in self.staged:
            os.replace(tmp, self.outdir / name)


# ---------------------------------------------------------------------------
# config files: flat `key = value` lines, '#' comments; flags win over file


def parse_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise CliError(f"cannot read config file {path}: {err}") from err
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise CliError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = parts
        values[key.strip()] = value.strip()
    return values


_OPTIMIZE_KEYS = {
    "L": int, "gamma": float, "seed": int,
    "eta": float, "lambda_abs": float, "lambda_rel": float, "n_iters": int,
    "init_scale": float, "max_step": float,
    "n_sweeps": int, "n_burnin": int, "n_chains": int,
}
_OPTIMIZE_REQUIRED = ("L", "gamma", "seed")


def resolve_optimize_config(args) -> dict:
    values = parse_config_file(args.config) if args.config else {}
    for key in _OPTIMIZE_KEYS:
        flag = getattr(args, key.lower(), None)
        if flag is not None:
            values[key] = flag
    for key in values:
        if key not in _OPTIMIZE_KEYS:
            raise CliError(f"config error: unknown key '{key}'")
    for key in _OPTIMIZE_REQUIRED:
        if key not in values:
            raise CliError(f"config error: missing required key '{key}'")
    resolved = {}
    for key, cast in _OPTIMIZE_KEYS.items():
        if key in values:
            try:
                resolved[key] = cast(values[key])
            except (TypeError, ValueError) as err:
                raise CliError(f"config error: key '{key}': {err}") from err
    # materialize defaults
    sr_defaults = SrConfig(seed=0)
    sampler_defaults = SamplerConfig(seed=0)
    resolved.setdefault("eta", sr_defaults.eta)
    resolved.setdefault("lambda_abs", sr_defaults.lambda_abs)
    resolved.setdefault("lambda_rel", sr_defaults.lambda_rel)
    resolved.setdefault("n_iters", sr_defaults.n_iters)
    resolved.setdefault("init_scale", sr_defaults.init_scale)
    resolved.setdefault("max_step", sr_defaults.max_step)
    resolved.setdefault("n_sweeps", sampler_defaults.n_sweeps)
    resolved.setdefault("n_burnin", sampler_defaults.n_burnin)
    resolved.setdefault("n_chains", sampler_defaults.resolved_chains())
    return resolved


def parse_grid(spec: str, what: str) -> list:
    """'a:b:step' or comma-separated values."""
    try:
        if ":" in spec:
            a, b, step = (float(x) for x in spec.split(":"))
            if step <= 0 or b < a:
                raise ValueError("need a <= b and step > 0")
            n = int(round((b - a) / step))
            return [round(a + k * step, 10) for k in range(n + 1)]
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as err:
        raise CliError(f"bad {what} grid '{spec}': {err}") from err


def parse_int_list(spec: str, what: str) -> list:
    try:
        return [int(x) for x in spec.split(",") if x.strip()]
    except ValueError as err:
        raise CliError(f"bad {what} list '{spec}': {err}") from err


# ---------------------------------------------------------------------------
# subcommands


def cmd_exact(args) -> int:
    if args.method == "fermion":
        if args.L % 2 != 0:
            raise CliError(
                f"free-fermion method requires even L (got {args.L}); "
                f"use --method ed for odd chains up to L={ED_MAX_L}")
        energy = free_fermion_energy(args.L, TfiParams(args.gamma))
    else:
        if not 2 <= args.L <= ED_MAX_L:
            raise CliError(
                f"dense diagonalization supports 2 <= L <= {ED_MAX_L} (got {args.L}); "
                f"use --method fermion for larger even chains")
        energy = ed_ground_state(args.L, TfiParams(args.gamma)).ground_energy
    print(f"{energy:.17g}")
    return 0


def _optimized_params(L, gamma, seed, sr_cfg, sampler_cfg, threads, polish=True):
    tfi = TfiParams(gamma)
    params, trace = optimize(L, tfi, sr_cfg, sampler_cfg, threads=threads)
    if polish:
        params, _ = optimize(L, tfi, replace(presets.polish_preset(L, seed + 1), seed=seed + 1),
                             replace(sampler_cfg, seed=seed + 1),
                             threads=threads, w_init=params.w)
    return params, trace


def cmd_optimize(args) -> int:
    cfg = resolve_optimize_config(args)
    outdir = Path(args.out)
    art = ArtifactDir(outdir, "optimize", cfg["seed"], cfg, args.force)
    sr_cfg = SrConfig(seed=cfg["seed"], eta=cfg["eta"], lambda_abs=cfg["lambda_abs"],
                      lambda_rel=cfg["lambda_rel"], n_iters=cfg["n_iters"],
                      init_scale=cfg["init_scale"], max_step=cfg["max_step"])
    sampler_cfg = SamplerConfig(seed=cfg["seed"], n_sweeps=cfg["n_sweeps"],
                                n_burnin=cfg["n_burnin"], n_chains=cfg["n_chains"])
    params, trace = optimize(cfg["L"], TfiParams(cfg["gamma"]), sr_cfg, sampler_cfg,
                             threads=args.threads)
    rbm.save_params(art.stage("params.txt"), params)
    trace.to_csv(art.stage("trace.csv"))
    art.finalize()
    print(f"wrote {outdir / 'params.txt'} and {outdir / 'trace.csv'}")
    return 0


def cmd_thermo(args) -> int:
    params = rbm.load_params(args.snapshot)
    t_grid = parse_grid(args.t_grid, "temperature") if args.t_grid else presets.default_t_grid()
    cfg = SamplerConfig(seed=args.seed, n_sweeps=args.n_sweeps,
                        n_burnin=args.n_burnin, n_chains=args.n_chains)
    config = {"snapshot": args.snapshot, "L": params.L, "gamma": args.gamma,
              "t_grid": ",".join(str(t) for t in t_grid), "seed": args.seed,
              "n_sweeps": cfg.n_sweeps, "n_burnin": cfg.n_burnin,
              "n_chains": cfg.resolved_chains(), "per_site_divisor": 2 * params.L}
    art = ArtifactDir(Path(args.out), "thermo", args.seed, config, args.force)
    scan = thermo.temperature_scan(params, t_grid, cfg, threads=args.threads)
    thermo.scan_to_csv(art.stage("thermo.csv"), scan, gamma=args.gamma, L=params.L)
    art.finalize()
    for t, err in scan.failures:
        print(f"T={t} failed: {err}", file=sys.stderr)
    print(f"wrote {Path(args.out) / 'thermo.csv'} ({len(scan.points)} temperatures)")
    return 1 if scan.failures else 0


def _scan_one_size(L, gammas, seed, args, art, threads):
    sr_cfg = replace(presets.sr_preset(L, seed), **_sr_overrides(args))
    sampler_cfg = replace(presets.sampler_preset(L, seed), **_sampler_overrides(args))
    polish = None if args.no_polish else replace(presets.polish_preset(L, seed),
                                                 **_polish_overrides(args))
    n_starts = args.starts if args.starts is not None else presets.SCAN_STARTS
    scan = analysis.gamma_scan(gammas, L, sr_cfg, sampler_cfg, threads=threads,
                               polish_cfg=polish,
                               estimate_cfg=presets.estimate_preset(L, seed),
                               n_starts=n_starts)
    analysis.tail_to_csv(art.stage(f"tail_L{L}.csv"), scan)
    for point in scan.points:
        analysis.profile_to_csv(
            art.stage(f"profile_L{L}_gamma{point.report.gamma:g}.csv"), point.report)
    return scan


def _sr_overrides(args):
    out = {}
    if getattr(args, "n_iters", None) is not None:
        out["n_iters"] = args.n_iters
    if getattr(args, "eta", None) is not None:
        out["eta"] = args.eta
    return out


def _polish_overrides(args):
    out = {}
    if getattr(args, "polish_iters", None) is not None:
        out["n_iters"] = args.polish_iters
    return out


def _sampler_overrides(args):
    out = {}
    if getattr(args, "n_sweeps", None) is not None:
        out["n_sweeps"] = args.n_sweeps
    if getattr(args, "n_burnin", None) is not None:
        out["n_burnin"] = args.n_burnin
    if getattr(args, "n_chains", None) is not None:
        out["n_chains"] = args.n_chains
    return out


_ENERGY_HEADER = ["gamma", "L", "energy", "energy_err", "exact_energy", "rel_error", "seed"]


def _energy_rows(scan):
    return [(p.report.gamma, p.report.L, p.energy, p.energy_err, p.exact_energy,
             p.rel_error, p.seed) for p in scan.points]


def cmd_scan(args) -> int:
    gammas = parse_grid(args.gammas, "gamma")
    l_list = parse_int_list(args.l_list, "L")
    config = {"gammas": args.gammas, "L_list": args.l_list, "seed": args.seed,
              "polish": not args.no_polish}
    art = ArtifactDir(Path(args.out), "scan", args.seed, config, args.force)
    failures = []
    energy_rows = []
    for L in l_list:
        scan = _scan_one_size(L, gammas, presets.point_seed(args.seed, L), args, art,
                              args.threads)
        energy_rows += _energy_rows(scan)
        failures += [(L, g, e) for g, e in scan.failures]
    write_csv(art.stage("energy.csv"), _ENERGY_HEADER, energy_rows)
    art.finalize()
    for L, g, err in failures:
        print(f"L={L} gamma={g} failed: {err}", file=sys.stderr)
    print(f"wrote scan artifacts to {args.out}")
    return 1 if failures else 0


def _reproduce_l_list(args):
    if args.l_list:
        return parse_int_list(args.l_list, "L")
    return presets.DESK_L_LIST if args.scale == "desk" else presets.PAPER_L_LIST


def cmd_reproduce(args) -> int:
    if args.scale == "paper" and not args.confirm:
        raise CliError(
            "paper scale optimizes and samples 256-spin chains, which may take "
            "hours per figure; rerun with --confirm to proceed")
    l_list = _reproduce_l_list(args)
    gammas = parse_grid(args.gammas, "gamma") if args.gammas else presets.GAMMA_GRID
    t_grid = parse_grid(args.t_grid, "temperature") if args.t_grid else presets.default_t_grid()
    config = {"figure": args.figure, "scale": args.scale, "seed": args.seed,
              "L_list": ",".join(map(str, l_list))}
    art = ArtifactDir(Path(args.out), f"reproduce-{args.figure}", args.seed, config, args.force)
    threads = args.threads
    failures = []

    if args.figure in ("fig2", "fig4"):
        energy_rows = []
        for L in l_list:
            scan = _scan_one_size(L, gammas, presets.point_seed(args.seed, L), args, art,
                                  threads)
            energy_rows += _energy_rows(scan)
            failures += scan.failures
        if args.figure == "fig2":
            write_csv(art.stage("energy.csv"), _ENERGY_HEADER, energy_rows)

    elif args.figure == "fig3":
        L = max(l_list)
        for gamma in (parse_grid(args.gammas, "gamma") if args.gammas
                      else presets.PROFILE_GAMMAS):
            seed = presets.point_seed(args.seed, L, int(round(gamma * 1000)))
            sr_cfg = replace(presets.sr_preset(L, seed), **_sr_overrides(args))
            sampler_cfg = replace(presets.sampler_preset(L, seed), **_sampler_overrides(args))
            params, _ = _optimized_params(L, gamma, seed, sr_cfg, sampler_cfg, threads,
                                          polish=not args.no_polish)
            analysis.profile_to_csv(art.stage(f"profile_L{L}_gamma{gamma:g}.csv"),
                                    analysis.tail_report(params, gamma))

    elif args.figure == "fig5":
        for gamma in (parse_grid(args.gammas, "gamma") if args.gammas
                      else presets.HEAT_GAMMAS):
            for L in l_list:
                seed = presets.point_seed(args.seed, L, int(round(gamma * 1000)))
                sr_cfg = replace(presets.sr_preset(L, seed), **_sr_overrides(args))
                sampler_cfg = replace(presets.sampler_preset(L, seed),
                                      **_sampler_overrides(args))
                params, _ = _optimized_params(L, gamma, seed, sr_cfg, sampler_cfg, threads,
                                              polish=not args.no_polish)
                thermo_cfg = presets.thermo_preset(L, seed + 7)
                if args.thermo_sweeps is not None:
                    thermo_cfg = replace(thermo_cfg, n_sweeps=args.thermo_sweeps)
                scan = thermo.temperature_scan(params, t_grid, thermo_cfg, threads=threads)
                failures += scan.failures
                thermo.scan_to_csv(art.stage(f"thermo_gamma{gamma:g}_L{L}.csv"),
                                   scan, gamma=gamma, L=L)

    elif args.figure == "fig6":
        L = max(l_list)
        header = ["gamma", "L", "T", "e_per_site", "e_err", "var_per_site",
                  "var_err", "c_per_site", "c_err", "n_sweeps", "seed"]
        rows = []
        for gamma in gammas:
            seed = presets.point_seed(args.seed, L, int(round(gamma * 1000)))
            sr_cfg = replace(presets.sr_preset(L, seed), **_sr_overrides(args))
            sampler_cfg = replace(presets.sampler_preset(L, seed), **_sampler_overrides(args))
            params, _ = _optimized_params(L, gamma, seed, sr_cfg, sampler_cfg, threads,
                                          polish=not args.no_polish)
            thermo_cfg = presets.thermo_preset(L, seed + 7)
            if args.thermo_sweeps is not None:
                thermo_cfg = replace(thermo_cfg, n_sweeps=args.thermo_sweeps)
            temp = thermo.Temperature(1.0)
            sample = thermo.thermal_sample(params, temp, thermo_cfg, threads=threads)
            c = thermo.specific_heat(sample.e_mean, sample.e2_mean, temp, 2 * L)
            rows.append((gamma, L, 1.0, sample.e_mean.mean / (2 * L),
                         sample.e_mean.stderr / (2 * L), c.mean, c.stderr,
                         c.mean, c.stderr, thermo_cfg.n_sweeps, seed))
        write_csv(art.stage(f"variance_L{L}.csv"), header, rows)

    art.finalize()
    for g, err in failures:
        print(f"point {g} failed: {err}", file=sys.stderr)
    print(f"wrote {args.figure} artifacts to {args.out}")
    return 1 if failures else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbmtfi",
        description="Transverse-field Ising ground states with a symmetric RBM, "
                    "plus classical-spin analysis of the learned couplings.")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: RBMTFI_THREADS or hardware)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("exact", help="exact ground-state energy")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--method", choices=("ed", "fermion"), default="fermion")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("optimize", help="optimize couplings for one (L, gamma)")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    for key, cast in _OPTIMIZE_KEYS.items():
        p.add_argument(f"--{key.lower().replace('_', '-')}", dest=key.lower(),
                       type=cast, default=None, help=f"override config key {key}")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("thermo", help="temperature scan of a coupling snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--gamma", type=float, default=float("nan"),
                   help="field label recorded in the CSV")
    p.add_argument("--t-grid", help="temperatures 'a:b:step' or comma list "
                                    "(default 0.2:4.0:0.1)")
    p.add_argument("--n-sweeps", type=int, default=10_000)
    p.add_argument("--n-burnin", type=int, default=1000)
    p.add_argument("--n-chains", type=int, default=4)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_thermo)

    def add_scan_tuning(p):
        p.add_argument("--n-iters", type=int, default=None)
        p.add_argument("--eta", type=float, default=None)
        p.add_argument("--n-sweeps", type=int, default=None)
        p.add_argument("--n-burnin", type=int, default=None)
        p.add_argument("--n-chains", type=int, default=None)
        p.add_argument("--polish-iters", type=int, default=None)
        p.add_argument("--no-polish", action="store_true")
        p.add_argument("--starts", type=int, default=None,
                       help="independent starts per point (lowest energy wins)")

    p = sub.add_parser("scan", help="optimize over a gamma grid; tail + energy tables")
    p.add_argument("--gammas", required=True, help="'a:b:step' or comma list")
    p.add_argument("--L-list", dest="l_list", required=True, help="comma list of sizes")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    add_scan_tuning(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("reproduce", help="regenerate a bundled result set")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4", "fig5", "fig6"))
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--confirm", action="store_true",
                   help="acknowledge multi-hour paper-scale runtime")
    p.add_argument("--force", action="store_true")
    p.add_argument("--gammas", default=None, help="override the field grid")
    p.add_argument("--L-list", dest="l_list", default=None, help="override the size list")
    p.add_argument("--t-grid", default=None, help="override the temperature grid")
    p.add_argument("--thermo-sweeps", type=int, default=None)
    add_scan_tuning(p)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        args.threads = worker_count(args.threads)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except RbmTfiError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
