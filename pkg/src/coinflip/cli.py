"""``coinflip`` command line: biases, fair points, sweeps, simulations, verification.

Exit status is 0 on success, 2 for usage or input errors and 3 when a
numerical certificate fails (for instance a duality gap above tolerance).
Every error is also written to stderr as one line of JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

from .acceptance import verify_all
from .alice import alice_bias_closed, alice_bias_spectral
from .bob import recover_primal, solve_dual
from .config import TOL
from .errors import CoinflipError, PrimalRecoveryWarning, SizingError, StrategyError
from .fair import bias_report, fair_table, find_fair_theta, parse_grid, sweep_csv, sweep_curves, sweep_records
from .protocol import ProtocolParams
from .simulation import run_cheating_alice, run_cheating_bob, simulate_honest
from .strategy import CheatStrategy
from .two_qubit import two_qubit_analytic

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class CertificationError(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _diagnose(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _add_n(p, required=True):
    p.add_argument("--n", type=int, required=required, help="number of qubits")


def _add_theta(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta-deg", type=float, help="axis half-angle in degrees")
    g.add_argument("--theta-rad", type=float, help="axis half-angle in radians")


def _add_output(p):
    p.add_argument("--out", help="write the artifact here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coinflip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("alice", help="Alice's optimal bias")
    _add_n(p)
    _add_theta(p)
    _add_output(p)

    p = sub.add_parser("bob", help="Bob's optimal bias, dual and recovered primal")
    _add_n(p)
    _add_theta(p)
    _add_output(p)

    p = sub.add_parser("fair", help="fair angle where both biases coincide")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--n-max", type=int, help="table for n = 1 .. n-max")
    _add_output(p)

    p = sub.add_parser("sweep", help="both bias curves over a theta grid")
    _add_n(p)
    p.add_argument("--grid", required=True, help="start:stop:count, inclusive")
    p.add_argument("--grid-unit", choices=("deg", "rad"), default="deg")
    _add_output(p)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run of the protocol")
    _add_n(p)
    _add_theta(p)
    p.add_argument("--p-loss", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--cheat",
        nargs="+",
        default=["none"],
        metavar="MODE",
        help="none | alice-optimal | bob-optimal | bob-file PATH",
    )
    p.add_argument("--target", type=int, choices=(0, 1), default=0)
    _add_output(p)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="skip n >= 5 and Monte Carlo")
    p.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def _theta(args) -> float:
    theta = math.radians(args.theta_deg) if args.theta_deg is not None else args.theta_rad
    if not math.isfinite(theta):
        raise UsageError("theta must be finite")
    return theta


def _params(args) -> ProtocolParams:
    try:
        return ProtocolParams(args.n, _theta(args))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        return json.dumps(payload) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = list(records[0])
    w.writerow(keys)
    for r in records:
        w.writerow([format(r[k], ".12g") if isinstance(r[k], float) else r[k] for k in keys])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_alice(args) -> list[dict]:
    params = _params(args)
    res = alice_bias_spectral(params.n, params.theta)
    return [
        {
            "n": params.n,
            "theta_rad": params.theta,
            "theta_deg": params.theta_deg,
            "alice_bias": res.p_star,
            "closed_form": alice_bias_closed(params.n, params.theta),
        }
    ]


def cmd_bob(args) -> list[dict]:
    params = _params(args)
    rep = bias_report(params.n, params.theta)
    d = rep.to_dict()
    if params.n == 2:
        dual = solve_dual(2, params.theta)
        d.update(xi=dual.xi, chi=dual.chi, quartic_value=two_qubit_analytic(params.theta).valid_root_value)
    if not rep.gap <= TOL.duality_gap:
        raise CertificationError(f"duality gap {rep.gap:.3e} exceeds {TOL.duality_gap:g}", [d])
    return [d]


def cmd_fair(args) -> list[dict]:
    if args.n_max is not None:
        if args.n_max < 1:
            raise UsageError("--n-max must be at least 1")
        return [fp.to_dict() for fp in fair_table(args.n_max)]
    return [find_fair_theta(args.n).to_dict()]


def cmd_sweep(args):
    try:
        grid = parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.grid_unit == "deg":
        grid = [math.radians(g) for g in grid]
    rows = sweep_curves(args.n, grid)
    bad = [r for r in rows if not r.gap <= TOL.duality_gap]
    text = sweep_csv(rows) if args.format == "csv" else json.dumps(sweep_records(rows)) + "\n"
    if bad:
        raise CertificationError(f"{len(bad)} grid points exceed the duality-gap tolerance", text)
    return text


def _strategy_for(args, params):
    mode = args.cheat[0]
    extra = args.cheat[1:]
    if mode == "bob-file":
        if len(extra) != 1:
            raise UsageError("--cheat bob-file takes exactly one path")
        with open(extra[0], encoding="utf-8") as fh:
            strat = CheatStrategy.from_json(fh.read())
        if strat.n != params.n:
            raise UsageError(f"strategy file is for n={strat.n}, run uses n={params.n}")
        return strat
    if extra:
        raise UsageError(f"--cheat {mode} takes no argument")
    if mode == "bob-optimal":
        return recover_primal(solve_dual(params.n, params.theta))
    raise UsageError(f"unknown cheat mode {mode!r}")


def cmd_simulate(args) -> list[dict]:
    params = _params(args)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if not 0.0 <= args.p_loss < 1.0:
        raise UsageError("--p-loss must lie in [0, 1)")
    mode = args.cheat[0]
    if mode == "none":
        if len(args.cheat) > 1:
            raise UsageError("--cheat none takes no argument")
        summ = simulate_honest(params, args.p_loss, args.trials, args.seed)
    elif mode == "alice-optimal":
        if len(args.cheat) > 1:
            raise UsageError("--cheat alice-optimal takes no argument")
        state = alice_bias_spectral(params.n, params.theta).optimal_state
        summ = run_cheating_alice(params, state, args.target, args.seed, args.trials, args.p_loss)
    else:
        strat = _strategy_for(args, params)
        summ = run_cheating_bob(params, strat, args.target, args.seed, args.trials, args.p_loss)
    d = summ.to_dict()
    d["theta_deg"] = params.theta_deg
    d["seed"] = args.seed
    return [d]


def cmd_verify(args):
    results = verify_all(quick=args.quick, tolerance_scale=args.tolerance_scale)
    if args.format == "json":
        text = json.dumps(
            [
                {"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail,
                 "seconds": round(r.seconds, 3)}
                for r in results
            ]
        ) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise CertificationError(f"criteria failed: {failed}", text)
    return text


COMMANDS = {
    "alice": cmd_alice,
    "bob": cmd_bob,
    "fair": cmd_fair,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def _as_text(result, fmt: str) -> str:
    return result if isinstance(result, str) else _render(result, fmt)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            # the CLI checks the gap itself and reports it through the exit code
            warnings.simplefilter("ignore", PrimalRecoveryWarning)
            result = COMMANDS[args.command](args)
        _emit(_as_text(result, args.format), args.out)
        return EXIT_OK
    except UsageError as exc:
        _diagnose("usage", str(exc))
        return EXIT_USAGE
    except CertificationError as exc:
        if exc.payload is not None:
            _emit(_as_text(exc.payload, args.format), args.out)
        _diagnose("certification", str(exc))
        return EXIT_NUMERIC
    except (SizingError, StrategyError) as exc:
        _diagnose("input", str(exc))
        return EXIT_USAGE
    except CoinflipError as exc:
        _diagnose(type(exc).__name__, str(exc))
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError, OSError) as exc:
        _diagnose("input", f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
