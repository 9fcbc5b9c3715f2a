"""``drivencoin``: CSV front end for the driven-coin walk.

    drivencoin evolve --schedule cos:0.1 --horizon 100 --with-references
    drivencoin distribution --schedule cos:0.1 --at 90 --mixture abs-kappa --even-only
    drivencoin asymptotic constants
    drivencoin correlations --schedule const:1 --horizon 100 --stride 2
    drivencoin verify --quick

Any long option can also come from ``--config FILE`` (``key=value`` lines,
``#`` comments); flags on the command line win.

Exit codes: 0 ok, 1 verification failed, 2 usage error, 3 horizon/window error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from . import asymptotics
from .acceptance import TAMPERABLE, run_checks
from .correlations import OptimizerConfig, correlation_trajectory
from .errors import ConfigurationError, ContractViolation, HorizonExceeded
from .evolution import evolve, trajectory_distribution
from .observables import tv_distance
from .schedule import Constant, parse_schedule
from .state import CoinSpec, initial_state

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_HORIZON = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Shortest round-trip decimal; integral floats lose their ``.0``."""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    text = repr(float(v))
    if text.endswith(".0"):
        text = text[:-2]
    return "0" if text == "-0" else text


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _schedule(text: str):
    try:
        return parse_schedule(text)
    except ValueError as exc:
        raise UsageError(f"bad schedule {text!r}: {exc}") from exc


def _coin(text: str) -> CoinSpec:
    try:
        return CoinSpec.parse(text)
    except (ValueError, ContractViolation) as exc:
        raise UsageError(f"bad coin {text!r}: {exc}") from exc


def _window(args, horizon: int) -> int:
    return args.window if args.window is not None else max(horizon, 1)


def cmd_evolve(args, out) -> int:
    sch = _schedule(args.schedule)
    coin = _coin(args.coin)
    window = _window(args, args.horizon)
    traj = evolve(initial_state(coin, window), sch, args.horizon, label=args.schedule)
    header = ["t", "kappa", "variance", "entropy"]
    columns = [traj.t, traj.kappa, traj.variance, traj.entropy]
    if args.with_references:
        qw = evolve(initial_state(coin, window), Constant(1.0), args.horizon)
        rw = evolve(initial_state(coin, window), Constant(0.0), args.horizon)
        header += ["variance_qw", "variance_rw", "entropy_qw", "entropy_rw"]
        columns += [qw.variance, rw.variance, qw.entropy, rw.entropy]
    w = _writer(out)
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([fmt(v) for v in row])
    return EXIT_OK


def cmd_distribution(args, out) -> int:
    sch = _schedule(args.schedule)
    coin = _coin(args.coin)
    horizon = args.at if args.horizon is None else args.horizon
    if args.at > horizon:
        raise UsageError(f"snapshot time {args.at} is beyond the horizon {horizon}")
    traj = evolve(initial_state(coin, _window(args, horizon)), sch, args.at, snapshot_times=[args.at])
    p = trajectory_distribution(traj, args.at)
    t = args.at
    xs = range(-t, t + 1)
    header = ["x", "P_simulated"]
    mix = None
    if args.mixture:
        mode = "abs" if args.mixture == "abs-kappa" else "signed"
        weight = asymptotics.mixture_weight(sch, t, mode)
        mix = asymptotics.mixture_distribution(t, weight, coin, signed=(mode == "signed"))
        tv = tv_distance(p, mix)
        header += ["P_asymptotic_mixture", "tv_distance"]
    w = _writer(out)
    w.writerow(header)
    for x in xs:
        if args.even_only and x % 2:
            continue
        row = [fmt(x), fmt(p.at(x))]
        if mix is not None:
            row += [fmt(mix.at(x)), fmt(tv)]
        w.writerow(row)
    return EXIT_OK


def cmd_asymptotic(args, out) -> int:
    w = _writer(out)
    if args.what == "constants":
        k = asymptotics.ballistic_constants(args.n_k)
        c1, c2 = asymptotics.velocity_moments(_coin(args.coin), args.n_k)
        w.writerow(["name", "value"])
        w.writerow(["C1", fmt(k.c1)])
        w.writerow(["C2", fmt(k.c2)])
        w.writerow(["coefficient", fmt(k.c2 - k.c1**2)])
        w.writerow(["analytic", fmt(k.analytic)])
        w.writerow(["velocity_mean", fmt(c1)])
        w.writerow(["velocity_square", fmt(c2)])
        w.writerow(["coin_coefficient", fmt(c2 - c1 * c1)])
        return EXIT_OK
    if args.what == "variance":
        w.writerow(["t", "variance"])
        for t in range(args.horizon + 1):
            w.writerow([fmt(t), fmt(asymptotics.mixture_variance(t, args.weight))])
        return EXIT_OK
    if args.at is None or args.at < 1:
        raise UsageError("asymptotic distribution needs --at >= 1")
    if not 0.0 <= args.weight <= 1.0:
        raise UsageError("--weight must lie in [0, 1]")
    p = asymptotics.mixture_distribution(args.at, args.weight, _coin(args.coin))
    w.writerow(["x", "P"])
    for x in range(-args.at, args.at + 1):
        if args.even_only and x % 2:
            continue
        w.writerow([fmt(x), fmt(p.at(x))])
    return EXIT_OK


def cmd_correlations(args, out) -> int:
    sch = _schedule(args.schedule)
    if args.stride < 1:
        raise UsageError("--stride must be at least 1")
    cfg = OptimizerConfig(grid_theta=args.grid, grid_phi=args.grid)
    records = correlation_trajectory(
        sch,
        args.horizon,
        args.stride,
        coin=_coin(args.coin),
        config=cfg,
        observe=args.observe,
        window=_window(args, args.horizon),
    )
    w = _writer(out)
    w.writerow(["t", "mutual_info", "classical_corr", "discord", "mid", "theta_opt", "phi_opt", "warn", "mid_fallback"])
    for r in records:
        w.writerow(
            [fmt(r.t), fmt(r.mutual_info), fmt(r.classical_corr), fmt(r.discord), fmt(r.mid),
             fmt(r.theta_opt), fmt(r.phi_opt), fmt(r.warn), fmt(r.mid_fallback)]
        )
    return EXIT_OK


def cmd_verify(args, out) -> int:
    start = time.perf_counter()
    results = run_checks(quick=args.quick, tamper=args.tamper, report=lambda line: print(line, file=out, flush=True))
    failed = [r.name for r in results if not r.passed and not r.skipped]
    elapsed = time.perf_counter() - start
    if failed:
        print(f"FAILED ({elapsed:.1f}s): {', '.join(failed)}", file=out)
        return EXIT_FAILED
    print(f"all checks passed ({elapsed:.1f}s)", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drivencoin", description="Driven-coin quantum walk simulator.")
    parser.add_argument("--config", help="key=value file supplying option defaults")
    parser.add_argument("-o", "--output", help="write CSV here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    def common(p, horizon_default=100):
        p.add_argument("--schedule", default="cos:0.1", help="cos:<eta>, const:<c>, saw:<period>:<lo>:<hi>, piecewise:..., table:...")
        p.add_argument("--horizon", type=int, default=horizon_default)
        p.add_argument("--coin", default="default", help="default, plus, minus, or 'a,b' amplitudes")
        p.add_argument("--window", type=int, default=None, help="position window half-width (default: horizon)")

    p = sub.add_parser("evolve", help="per-step kappa, variance and entropy")
    common(p)
    p.add_argument("--with-references", action="store_true", help="add unitary and fully dephased columns")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("distribution", help="position distribution at one time")
    common(p, horizon_default=None)
    p.add_argument("--at", type=int, required=True)
    p.add_argument("--mixture", choices=("abs-kappa", "signed-kappa"))
    p.add_argument("--even-only", action="store_true")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("asymptotic", help="long-time closed forms")
    p.add_argument("what", choices=("constants", "variance", "distribution"))
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--weight", type=float, default=1.0, help="quantum weight of the mixture")
    p.add_argument("--at", type=int)
    p.add_argument("--coin", default="default")
    p.add_argument("--n-k", type=int, default=4096)
    p.add_argument("--even-only", action="store_true")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("correlations", help="mutual information, discord and MID over time")
    common(p)
    p.add_argument("--stride", type=int, default=2)
    p.add_argument("--grid", type=int, default=24, help="measurement grid points per angle")
    p.add_argument("--observe", choices=("post-step", "pre-flip"), default="post-step")
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="t <= 50, n_k = 1024")
    p.add_argument("--tamper", choices=TAMPERABLE, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for n, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{n}: expected key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                values[key.replace("-", "_")] = value
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    return values


def _install_config(parser: argparse.ArgumentParser, argv, config: dict) -> None:
    """Make ``config`` the defaults of the subcommand named in ``argv``."""
    command = next((a for a in argv if a in parser.subcommands), None)
    if command is None:
        return
    sub = parser.subcommands[command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in config.items():
        if key not in actions or key == "help":
            raise UsageError(f"unknown config key {key!r} for {command}")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise UsageError(f"config key {key!r} needs a boolean")
            defaults[key] = value.lower() in ("true", "1", "yes")
        else:
            try:
                defaults[key] = action.type(value) if action.type else value
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
            if action.choices is not None and defaults[key] not in action.choices:
                raise UsageError(f"config key {key!r} must be one of {', '.join(action.choices)}")
        # a required option may now come from the file
        action.required = False
    sub.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    pre_parser = argparse.ArgumentParser(add_help=False)
    pre_parser.add_argument("--config")
    try:
        pre, _ = pre_parser.parse_known_args(argv)
        if pre.config:
            _install_config(parser, argv, _read_config(pre.config))
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"drivencoin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        return args.func(args, out)
    except (UsageError, ContractViolation) as exc:
        print(f"drivencoin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, HorizonExceeded) as exc:
        print(f"drivencoin: error: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
