"""Command-line entry point: solve, effects, sweep, oracle, simulate, extensions.

Exit codes: 0 success, 1 solver failure, 2 infeasible parameters, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

from chasing.core import (ContestParams, DomainError, NormalizedIndices, derive_indices,
                          indices, params_from_indices, validate)
from chasing.effects import decompose, fmt, rows_to_csv, sweep
from chasing.extensions import (ExtendedParams, infinite_horizon_classify,
                                naive_chaser_work_region, pb_chaser_solo,
                                pf_preference_verdict, postponed_reward_start,
                                symmetric_exponential_verdict)
from chasing.hidden import solve_hidden
from chasing.montecarlo import SimConfig, hidden_profile, public_profile, simulate
from chasing.oracle import NonContiguousError, cutoff_errors
from chasing.public import DEFAULT_TOL, solve_public
from chasing.roots import BracketError

EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2, 64
COMMANDS = ("solve", "effects", "sweep", "oracle", "simulate", "extensions")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> Parser:
    p = Parser(prog="chasing", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--v", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--regime", choices=("public", "hidden", "both"), default="public")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--lambdaT", type=float)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--threads", type=int)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--players", type=int, default=2)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=math.inf)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"))
    return p


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("CHASE_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CHASE_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def resolve(args) -> tuple[NormalizedIndices, ContestParams | None]:
    """Indices win over primitives when both are given."""
    if args.delta is not None or args.phi is not None:
        if args.delta is None or args.phi is None:
            raise UsageError("--delta and --phi must be given together")
        lam = args.lam if args.lam is not None else 1.0
        T = args.T if args.T is not None else 1.0
        idx = indices(args.delta, args.phi, lam, T)
        try:
            params = params_from_indices(idx, args.c if args.c is not None else 1.0)
        except DomainError:
            params = None
        return idx, params
    missing = [f for f, x in (("--lambda", args.lam), ("--v", args.v), ("--c", args.c),
                              ("--beta", args.beta), ("--T", args.T)) if x is None]
    if missing:
        raise UsageError("missing " + ", ".join(missing) + " (or give --delta/--phi)")
    params = ContestParams(args.lam, args.v, args.c, args.beta, args.T)
    return derive_indices(params), params


def _value(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return fmt(x)
        return float(fmt(x))
    if hasattr(x, "value"):
        return x.value
    return x


def dump(record: dict) -> str:
    return json.dumps({k: _value(v) for k, v in record.items()}, indent=2) + "\n"


def _base(idx: NormalizedIndices) -> dict:
    return {"delta": idx.delta, "phi": idx.phi, "lambdaT": idx.lambdaT}


def cmd_solve(args, idx, params) -> dict:
    out = _base(idx)
    if args.regime in ("public", "both"):
        eq = solve_public(idx, args.tol)
        pre = "public_" if args.regime == "both" else ""
        out.update({pre + "case": eq.case, "x1F": eq.x1F, "x0F": eq.x0F, "yF": eq.yF,
                    "x0": eq.x0, "yHF": eq.yHF, pre + "residual": eq.residual})
    if args.regime in ("hidden", "both"):
        eq = solve_hidden(idx, args.tol)
        pre = "hidden_" if args.regime == "both" else ""
        out.update({pre + "case": eq.case, "xN": eq.xN, "yN": eq.yN, "gamma": eq.gamma,
                    "ybarN": eq.ybarN, pre + "residual": eq.residual})
    return out


def cmd_effects(args, idx, params) -> dict:
    d = decompose(idx, args.tol)
    out = _base(idx)
    out.update({k: v for k, v in asdict(d).items()})
    out["regime"] = d.regime
    return out


def cmd_oracle(args, idx, params) -> dict:
    if params is None:
        raise UsageError("oracle needs primitives or indices with phi > 0 and delta < 1")
    out = _base(idx)
    out["n"] = args.n
    regimes = ("public", "hidden") if args.regime == "both" else (args.regime,)
    ok = True
    for r in regimes:
        comp = cutoff_errors(params, args.n, r)
        for row in comp.rows:
            out[row.name] = row.continuous
            out[row.name + "_discrete"] = row.discrete
            out[row.name + "_error"] = row.error
        out[r + "_converged"] = comp.converged
        out[r + "_iterations"] = comp.iterations
        ok &= comp.within_bound
    out["bound"] = 2.0 * idx.T / args.n
    out["within_bound"] = ok
    return out


def cmd_simulate(args, idx, params) -> dict:
    if params is None:
        raise UsageError("simulate needs primitives or indices with phi > 0 and delta < 1")
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    out = _base(idx)
    out.update({"seed": args.seed, "reps": args.reps})
    regimes = ("public", "hidden") if args.regime == "both" else (args.regime,)
    cfg = SimConfig(args.seed, args.reps, _threads(args))
    for r in regimes:
        profile = public_profile(solve_public(idx, args.tol)) if r == "public" \
            else hidden_profile(solve_hidden(idx, args.tol))
        st = simulate(params, profile, cfg)
        pre = r + "_" if args.regime == "both" else ""
        for name in ("leader_win_prob", "chaser_win_prob", "no_winner_prob", "leader_payoff",
                     "chaser_payoff", "planned_start_mean", "realized_start_mean",
                     "termination_time_mean"):
            est = getattr(st, name)
            out[pre + name] = est.mean
            out[pre + name + "_se"] = est.se
        out[pre + "ties"] = st.ties
    return out


def cmd_extensions(args, idx, params) -> dict:
    if params is None:
        raise UsageError("extensions needs primitives or indices with phi > 0 and delta < 1")
    out = _base(idx)
    s = pb_chaser_solo(params)
    out.update({"pb_mode": s.mode, "pb_x1": s.x1, "pb_y1": s.y1, "pb_y0": s.y0, "pb_x0": s.x0})
    region = naive_chaser_work_region(params)
    out.update({"naive_empty": region.empty, "naive_start": region.start,
                "naive_stop": region.stop})
    ext = ExtendedParams(params, args.players, args.rho, args.eta)
    verdict = symmetric_exponential_verdict(ext)
    out.update({"symmetric_mode": verdict.mode, "symmetric_start": verdict.start})
    if args.rho > 0:
        out["postponed_start"] = postponed_reward_start(ext)
    out["pf_mode"] = pf_preference_verdict(ext)
    st = infinite_horizon_classify(params.beta, params.lam * params.v / params.c)
    out.update({"infinite_horizon": st.leader, "infinite_chaser_chasing": st.chaser_chasing,
                "infinite_chaser_contest": st.chaser_contest})
    return out


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    if args.lambdaT is None or args.lambdaT <= 0:
        raise UsageError("sweep needs a positive --lambdaT")
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    rows = sweep(args.lambdaT, args.grid, threads=_threads(args), tol=args.tol)
    fmt_ = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    if fmt_ == "csv":
        _emit(rows_to_csv(rows), args.out)
    else:
        data = [{k: _value(v) for k, v in asdict(r).items()} for r in rows]
        _emit(json.dumps({"lambdaT": _value(args.lambdaT), "rows": data}, indent=2) + "\n",
              args.out)
    return EXIT_OK


HANDLERS = {"solve": cmd_solve, "effects": cmd_effects, "oracle": cmd_oracle,
            "simulate": cmd_simulate, "extensions": cmd_extensions}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.tol < 1e-14:
            raise UsageError("--tol must be at least 1e-14")
        if args.command == "sweep":
            return cmd_sweep(args)
        idx, params = resolve(args)
        report = validate(params if params is not None and args.delta is None else idx)
        if not report.feasible:
            sys.stderr.write(dump({**_base(idx), "feasible": False,
                                   "notes": "; ".join(report.notes)}))
            return EXIT_INFEASIBLE
        if args.format == "csv":
            raise UsageError(f"{args.command} only writes json")
        _emit(dump(HANDLERS[args.command](args, idx, params)), args.out)
        return EXIT_OK
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (BracketError, NonContiguousError, ArithmeticError, RuntimeError) as exc:
        sys.stderr.write(f"solver failure: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
