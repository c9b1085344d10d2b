"""Command-line front end: ``quadsim run | sweep | check``.

Exit codes: 0 success, 1 simulation failure (divergence or another
numerical error during a run), 2 usage error.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
import sys

from .config import DEFAULT_CONFIG, read_config
from .csvlog import write_csv
from .errors import InvalidParameter, QuadSimError
from .harness import CONTROLLERS, GainSet, RunConfig, _n_steps, metrics, run_closed_loop
from .params import NoiseConfig, QuadParams
from .scenarios import SCENARIOS

EKF_MODES = {"standard": "standard", "paper-literal": "paper_literal",
             "paper_literal": "paper_literal"}
SUMMARY_FIELDS = ("controller", "scenario", "seed", "status",
                  "rmse_x", "rmse_y", "rmse_z", "max_x", "max_y", "max_z",
                  "est_rmse_x", "est_rmse_y", "est_rmse_z", "psi_rmse")


class UsageError(Exception):
    """Bad flag or config value; reported with exit code 2."""

    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class CliInvocation:
    subcommand: str
    settings: dict = field(default_factory=dict)
    params: QuadParams = QuadParams()
    noise_cfg: NoiseConfig = NoiseConfig()
    p0: float = 1e-2
    gains: GainSet = GainSet()
    out: str = None
    plot: bool = False
    controllers: tuple = ()
    scenarios: tuple = ()
    seeds: tuple = ()
    jobs: int = 1
    samples: int = 1000


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or v == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text!r}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"must be in [0, 2^64), got {text!r}")
    return v


def _list_of(kind, allowed=None):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        out = tuple(kind(t) for t in items)
        if allowed is not None:
            bad = [v for v in out if v not in allowed]
            if bad:
                raise argparse.ArgumentTypeError(f"invalid choice(s) {bad}; choose from {sorted(allowed)}")
        return out
    return parse


def _add_sim_flags(sp):
    sp.add_argument("--ts", type=_positive_float, help="sample time [s] (default 0.01)")
    sp.add_argument("--duration", type=_positive_float, help="run length [s] (default: scenario length)")
    sp.add_argument("--noise", choices=("on", "off"), help="measurement/process noise (default on)")
    sp.add_argument("--ekf-mode", choices=("standard", "paper-literal"),
                    help="filter propagation (default standard)")
    sp.add_argument("--config", help="config file; flags override its values")
    sp.add_argument("--plot", action="store_true", help="also write a PNG figure next to each CSV")


def build_parser():
    parser = argparse.ArgumentParser(prog="quadsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run = sub.add_parser("run", help="one closed-loop run -> CSV + metrics")
    run.add_argument("--scenario", type=int, choices=sorted(SCENARIOS))
    run.add_argument("--controller", choices=CONTROLLERS)
    run.add_argument("--seed", type=_seed)
    run.add_argument("--out", help="CSV path (default <controller>_s<scenario>_seed<seed>.csv)")
    _add_sim_flags(run)

    sweep = sub.add_parser("sweep", help="controllers x scenarios x seeds")
    sweep.add_argument("--controllers", type=_list_of(str, CONTROLLERS),
                       default=CONTROLLERS, help="comma list (default all)")
    sweep.add_argument("--scenarios", type=_list_of(int, SCENARIOS),
                       default=tuple(sorted(SCENARIOS)), help="comma list (default 1,2,3)")
    sweep.add_argument("--seeds", type=_list_of(_seed), help="comma list (default: config seed)")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    sweep.add_argument("--out", default=".", help="output directory (default .)")
    _add_sim_flags(sweep)

    check = sub.add_parser("check", help="fast invariant suite")
    check.add_argument("--samples", type=int, default=1000, help="random states per check")
    return parser


def _settings(args):
    """Defaults < config file < flags."""
    path = args.config if getattr(args, "config", None) else DEFAULT_CONFIG
    try:
        run, params, noise, p0, gains = read_config(path)
    except OSError as exc:
        raise UsageError("--config", str(exc)) from None
    except InvalidParameter as exc:
        raise UsageError("--config", str(exc)) from None
    settings = {"scenario": 1, "controller": "ahsmc", "ts": 0.01, "duration": None,
                "noise": True, "seed": 42, "ekf_mode": "standard"}
    settings.update(run)
    flags = {
        "scenario": getattr(args, "scenario", None),
        "controller": getattr(args, "controller", None),
        "ts": args.ts,
        "duration": args.duration,
        "noise": None if args.noise is None else args.noise == "on",
        "seed": getattr(args, "seed", None),
        "ekf_mode": args.ekf_mode,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    if settings["ekf_mode"] not in EKF_MODES:
        raise UsageError("--ekf-mode", f"unknown mode {settings['ekf_mode']!r}")
    settings["ekf_mode"] = EKF_MODES[settings["ekf_mode"]]
    if settings["controller"] not in CONTROLLERS:
        raise UsageError("--controller", f"unknown controller {settings['controller']!r}")
    if settings["scenario"] not in SCENARIOS:
        raise UsageError("--scenario", f"unknown scenario {settings['scenario']!r}")
    return settings, params, noise, (1e-2 if p0 is None else p0), GainSet(**gains)


def parse_args(argv=None) -> CliInvocation:
    """Parse and validate; raises UsageError on bad values that argparse lets through."""
    args = build_parser().parse_args(argv)
    if args.subcommand == "check":
        if args.samples < 1:
            raise UsageError("--samples", "must be >= 1")
        return CliInvocation("check", samples=args.samples)
    settings, params, noise, p0, gains = _settings(args)
    inv = CliInvocation(args.subcommand, settings, params, noise, p0, gains,
                        out=args.out, plot=args.plot)
    if args.subcommand == "sweep":
        if args.jobs < 1:
            raise UsageError("--jobs", "must be >= 1")
        inv.controllers = args.controllers
        inv.scenarios = args.scenarios
        inv.seeds = args.seeds if args.seeds else (settings["seed"],)
        inv.jobs = args.jobs
    # fail on duration/ts mismatches before anything runs
    for sc in inv.scenarios or (settings["scenario"],):
        try:
            _run_config(inv, settings["controller"], sc, settings["seed"])
        except ValueError as exc:
            flag = "--duration" if "duration" in str(exc) else "--ts"
            raise UsageError(flag, str(exc)) from None
    return inv


def _run_config(inv, controller, scenario, seed):
    s = inv.settings
    cfg = RunConfig(controller=controller, ts=s["ts"], seed=seed, noise=s["noise"],
                    ekf_mode=s["ekf_mode"], duration=s["duration"],
                    noise_cfg=inv.noise_cfg, gains=inv.gains, p0=inv.p0)
    _n_steps(cfg.duration or SCENARIOS[scenario].duration, cfg.ts)
    return cfg


def cell_name(controller, scenario, seed):
    return f"{controller}_s{scenario}_seed{seed}"


def _metrics_row(m):
    return [m["rmse"][a] for a in "xyz"] + [m["max_abs"][a] for a in "xyz"] + \
        [m["est_rmse"][a] for a in "xyz"] + [m["psi_rmse"]]


def print_metrics(m, out=None):
    out = out or sys.stdout
    print(f"{'axis':<6}{'rmse':>12}{'max_err':>12}{'est_rmse':>12}", file=out)
    for a in "xyz":
        print(f"{a:<6}{m['rmse'][a]:>12.5f}{m['max_abs'][a]:>12.5f}{m['est_rmse'][a]:>12.6f}", file=out)
    print(f"{'psi':<6}{m['psi_rmse']:>12.5f}", file=out)


def _run_cell(inv, controller, scenario, seed, csv_path):
    """Worker for one cell; returns (status, metrics-or-message)."""
    cfg = _run_config(inv, controller, scenario, seed)
    try:
        log_ = run_closed_loop(cfg, params=inv.params, scenario=scenario)
    except QuadSimError as exc:
        return "failed", f"{type(exc).__name__}: {exc}"
    write_csv(log_, csv_path)
    if inv.plot:
        from .plotting import plot_run
        plot_run(log_, Path(csv_path).with_suffix(".png"), title=cell_name(controller, scenario, seed))
    return "ok", metrics(log_, params=inv.params)


def cmd_run(inv) -> int:
    s = inv.settings
    out = inv.out or cell_name(s["controller"], s["scenario"], s["seed"]) + ".csv"
    status, result = _run_cell(inv, s["controller"], s["scenario"], s["seed"], out)
    if status != "ok":
        print(f"error: {result}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    print_metrics(result)
    return 0


def cmd_sweep(inv) -> int:
    outdir = Path(inv.out)
    outdir.mkdir(parents=True, exist_ok=True)
    cells = list(product(inv.controllers, inv.scenarios, inv.seeds))
    paths = [outdir / (cell_name(*c) + ".csv") for c in cells]
    if inv.jobs == 1:
        results = [_run_cell(inv, *c, p) for c, p in zip(cells, paths)]
    else:
        with ProcessPoolExecutor(max_workers=inv.jobs) as pool:
            futures = [pool.submit(_run_cell, inv, *c, p) for c, p in zip(cells, paths)]
            results = [f.result() for f in futures]
    failed = 0
    with open(outdir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for (controller, scenario, seed), (status, result) in zip(cells, results):
            if status == "ok":
                w.writerow([controller, scenario, seed, status] + [repr(v) for v in _metrics_row(result)])
                print(f"ok      {cell_name(controller, scenario, seed)}  "
                      f"rmse x/y/z = {result['rmse']['x']:.4f}/{result['rmse']['y']:.4f}/{result['rmse']['z']:.4f}")
            else:
                failed += 1
                w.writerow([controller, scenario, seed, status] + [""] * (len(SUMMARY_FIELDS) - 4))
                print(f"failed  {cell_name(controller, scenario, seed)}  {result}")
    print(f"wrote {len(cells) - failed} run CSVs and {outdir / 'summary.csv'}")
    return 1 if failed else 0


def cmd_check(inv) -> int:
    from .checks import run_all
    results = run_all(inv.samples)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "check": cmd_check}


def main(argv=None) -> int:
    try:
        inv = parse_args(argv)
    except UsageError as exc:
        print(f"quadsim: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    return COMMANDS[inv.subcommand](inv)


if __name__ == "__main__":
    sys.exit(main())
