"""Command-line front end: game-file parsing, command dispatch, reports.

Games and profiles are UTF-8 JSON with every number written as an exact
rational string such as "-110/3" or "40".  Exit codes: 0 success, 1 for
usage/parse/validation errors, 2 when no equilibrium was produced.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import construct, ratlp
from .construct import Kind, grid_mixed_search, solve
from .construct.basic import monotone_interval_eq, nonrevealing, partition_structure_eq
from .construct.envy import leader_follower
from .construct.mediated import mediated_three
from .construct.mixed import mixed_three
from .errors import (
    NoPartitionalEquilibrium,
    NotAnEquilibrium,
    ParseError,
    VetotalkError,
)
from .model import GameSpec, game, receiver_strategy, sender_strategy
from .participation import acceptance_set, participation_structure
from .ratlp import AffineFn, Polytope, rat
from .threshold import best_partitional_value, exit_threshold, mechanism_bound
from .verify import check_limit_equilibrium, check_v0_equilibrium

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNRESOLVED = 2

METHODS = {
    "auto": None,
    "nonrevealing": nonrevealing,
    "partition": partition_structure_eq,
    "monotone": monotone_interval_eq,
    "leader": leader_follower,
    "thm8": leader_follower,
    "mixed3": mixed_three,
    "mediated3": mediated_three,
    "grid": None,
}


# ---------------------------------------------------------------------------
# file parsing


def _require_members(obj: dict, required, context: str):
    missing = [m for m in required if m not in obj]
    unknown = [m for m in obj if m not in required]
    if missing:
        raise ParseError(f"{context}: missing member(s) {missing}")
    if unknown:
        raise ParseError(f"{context}: unknown member(s) {unknown}")


def _parse_rational(value, context: str) -> Fraction:
    if not isinstance(value, str):
        raise ParseError(f"{context}: rationals must be strings, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{context}: not a rational: {value!r} ({exc})") from None


def _parse_vector(values, context: str):
    if not isinstance(values, list):
        raise ParseError(f"{context}: expected a list of rational strings")
    return tuple(_parse_rational(v, context) for v in values)


def _parse_affine(obj, context: str) -> AffineFn:
    if not isinstance(obj, dict):
        raise ParseError(f"{context}: expected an object with coeffs and constant")
    _require_members(obj, ["coeffs", "constant"], context)
    return AffineFn(_parse_vector(obj["coeffs"], f"{context}.coeffs"),
                    _parse_rational(obj["constant"], f"{context}.constant"))


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: the top level must be a JSON object")
    return data


def load_game(path) -> GameSpec:
    data = _load_json(path)
    _require_members(data, ["dimension", "decision_set", "types"], str(path))
    dim = data["dimension"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{path}: dimension must be a positive integer")
    ds = data["decision_set"]
    if not isinstance(ds, dict):
        raise ParseError(f"{path}: decision_set must be an object")
    _require_members(ds, ["rows"], f"{path}: decision_set")
    rows = []
    for i, row in enumerate(ds["rows"]):
        ctx = f"{path}: decision_set.rows[{i}]"
        if not isinstance(row, dict):
            raise ParseError(f"{ctx}: expected an object")
        _require_members(row, ["normal", "rhs"], ctx)
        normal = _parse_vector(row["normal"], f"{ctx}.normal")
        if len(normal) != dim:
            raise ParseError(f"{ctx}: normal has length {len(normal)}, expected {dim}")
        rows.append((normal, _parse_rational(row["rhs"], f"{ctx}.rhs")))
    names, prior, reserve, sender_u, receiver_v = [], [], [], [], []
    if not isinstance(data["types"], list) or not data["types"]:
        raise ParseError(f"{path}: types must be a nonempty list")
    for i, t in enumerate(data["types"]):
        ctx = f"{path}: types[{i}]"
        if not isinstance(t, dict):
            raise ParseError(f"{ctx}: expected an object")
        _require_members(t, ["name", "prior", "reserve", "U", "V"], ctx)
        if not isinstance(t["name"], str):
            raise ParseError(f"{ctx}: name must be a string")
        names.append(t["name"])
        prior.append(_parse_rational(t["prior"], f"{ctx}.prior"))
        reserve.append(_parse_rational(t["reserve"], f"{ctx}.reserve"))
        sender_u.append(_parse_affine(t["U"], f"{ctx}.U"))
        receiver_v.append(_parse_affine(t["V"], f"{ctx}.V"))
    return GameSpec(n=dim, type_names=tuple(names), prior=tuple(prior),
                    reserve=tuple(reserve), X=Polytope(dim, tuple(rows)),
                    sender_u=tuple(sender_u), receiver_v=tuple(receiver_v))


def load_profile(path, g: GameSpec):
    data = _load_json(path)
    if "profile" in data and "messages" not in data:
        data = data["profile"]  # accept a previously written result file
        if not isinstance(data, dict):
            raise ParseError(f"{path}: profile member must be an object")
    _require_members(data, ["messages", "sigma", "tau"], str(path))
    messages = data["messages"]
    if (not isinstance(messages, list)
            or not all(isinstance(m, str) for m in messages)):
        raise ParseError(f"{path}: messages must be a list of strings")
    if not isinstance(data["sigma"], list) or len(data["sigma"]) != g.k:
        raise ParseError(f"{path}: sigma needs one row per type ({g.k})")
    rows = [_parse_vector(row, f"{path}: sigma[{i}]") for i, row in enumerate(data["sigma"])]
    if not isinstance(data["tau"], dict):
        raise ParseError(f"{path}: tau must map messages to decisions")
    tau_map = {m: _parse_vector(x, f"{path}: tau[{m}]") for m, x in data["tau"].items()}
    missing = [m for m in messages if m not in tau_map]
    if missing:
        raise ParseError(f"{path}: tau misses message(s) {missing}")
    sigma = sender_strategy(messages, rows)
    tau = receiver_strategy([(m, tau_map[m]) for m in messages])
    return sigma, tau


# ---------------------------------------------------------------------------
# report serialization


def _s(x) -> str:
    return str(Fraction(x))


def _vec_s(xs):
    return [_s(x) for x in xs]


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _profile_json(sigma, tau):
    return {
        "messages": list(sigma.messages),
        "sigma": [_vec_s(row) for row in sigma.rows],
        "tau": {m: _vec_s(x) for m, x in tau.proposals},
    }


def _report_json(report):
    return {
        "overall": report.overall,
        "no_exit": {
            "ok": report.no_exit_ok,
            "violations": [{"type": k, "message": m} for k, m in report.exit_violations],
        },
        "constrained_opt": {
            "ok": report.constrained_opt_ok,
            "gaps": {m: _s(gap) for m, gap in report.optimality_gaps},
        },
        "incentive": {
            "ok": report.incentive_ok,
            "violations": [
                {"type": k, "message": m, "better": m2, "gap": _s(gap)}
                for k, m, m2, gap in report.incentive_violations
            ],
        },
        "exit_types": list(report.exit_types),
        "interim_sender_payoffs": _vec_s(report.interim_sender_payoffs),
        "receiver_ex_ante": _s(report.receiver_ex_ante),
        "posteriors": [
            {"message": e.message, "mass": _s(e.mass), "belief": _vec_s(e.belief)}
            for e in report.posterior_table.entries
        ],
    }


def _mediated_report_json(report):
    return {
        "overall": report.overall,
        "truth_telling": {
            "ok": report.truth_telling_ok,
            "violations": [
                {"type": k, "report": r, "gap": _s(gap)}
                for k, r, gap in report.truth_violations
            ],
        },
        "obedience": {
            "ok": report.obedience_ok,
            "gaps": [{"pair": list(p), "gap": _s(gap)} for p, gap in report.obedience_gaps],
        },
        "interim_sender_payoffs": _vec_s(report.interim_sender_payoffs),
        "receiver_ex_ante": _s(report.receiver_ex_ante),
    }


def _equilibrium_json(g, eq):
    out = {"kind": eq.kind.value, "provenance": eq.provenance}
    if eq.mechanism is not None:
        out["mechanism"] = {
            g.type_names[k]: [{"probability": _s(p), "decision": _vec_s(x)}
                              for p, x in eq.mechanism.lottery(k)]
            for k in range(g.k)
        }
        out["checks"] = _mediated_report_json(eq.report)
    else:
        out["profile"] = _profile_json(eq.sigma, eq.tau)
        out["checks"] = _report_json(eq.report)
    meta = {}
    if "partition" in eq.metadata:
        meta["partition"] = [[g.type_names[k] for k in cell]
                             for cell in eq.metadata["partition"]]
    if "pivot" in eq.metadata:
        meta["pivot"] = eq.metadata["pivot"]
    if "t" in eq.metadata:
        meta["indifference_parameter"] = _s(eq.metadata["t"])
    if "leaders" in eq.metadata:
        meta["leaders"] = [g.type_names[k] for k in eq.metadata["leaders"]]
    if meta:
        out["metadata"] = meta
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_structure(args) -> tuple[int, dict]:
    g = load_game(args.game)
    ps = participation_structure(g)
    systems = []
    for types in ps.maximal:
        P = acceptance_set(g, types)
        systems.append({
            "types": [g.type_names[k] for k in types],
            "rows": [{"normal": _vec_s(a), "rhs": _s(b)} for a, b in P.rows],
        })
    result = {
        "command": "structure",
        "game_digest": _digest(args.game),
        "maximal": [[g.type_names[k] for k in types] for types in ps.maximal],
        "classification": ps.classification.value,
        "acceptance_systems": systems,
    }
    print(f"participation structure: {result['maximal']}")
    print(f"classification: {ps.classification.value}")
    return EXIT_OK, result


def cmd_solve(args) -> tuple[int, dict]:
    g = load_game(args.game)
    result = {"command": "solve", "game_digest": _digest(args.game), "method": args.method}
    if args.method == "auto":
        res = solve(g, grid_resolution=args.grid_resolution)
        result["attempts"] = [{"method": m, "outcome": o} for m, o in res.attempts]
        eq = res.equilibrium
    elif args.method == "grid":
        eq = grid_mixed_search(g, args.grid_resolution)
    elif args.method == "nonrevealing":
        eq = nonrevealing(g)
    else:
        eq = METHODS[args.method](g)
    if eq is None:
        result["outcome"] = "unresolved"
        print("no equilibrium produced")
        return EXIT_UNRESOLVED, result
    result.update(_equilibrium_json(g, eq))
    result["outcome"] = eq.kind.value
    print(f"equilibrium: {eq.kind.value} (via {eq.provenance})")
    if eq.mechanism is None:
        for m, x in eq.tau.proposals:
            print(f"  {m} -> ({', '.join(_vec_s(x))})")
        print(f"  interim sender payoffs: {_vec_s(eq.report.interim_sender_payoffs)}")
        print(f"  receiver ex-ante value: {_s(eq.report.receiver_ex_ante)}")
    else:
        for k in range(g.k):
            lot = ", ".join(f"{_s(p)} on ({', '.join(_vec_s(x))})"
                            for p, x in eq.mechanism.lottery(k))
            print(f"  report {g.type_names[k]}: {lot}")
    return EXIT_OK, result


def cmd_check(args) -> tuple[int, dict]:
    g = load_game(args.game)
    sigma, tau = load_profile(args.profile, g)
    if args.v0 is not None:
        report = check_v0_equilibrium(g, rat(args.v0), sigma, tau)
    else:
        report = check_limit_equilibrium(g, sigma, tau)
    result = {
        "command": "check",
        "game_digest": _digest(args.game),
        "v0": args.v0,
        "profile": _profile_json(sigma, tau),
        "checks": _report_json(report),
        "outcome": "equilibrium" if report.overall else "not-an-equilibrium",
    }
    print(f"overall: {report.overall}")
    if report.incentive_violations:
        for k, m, m2, gap in report.incentive_violations:
            print(f"  incentive violation: type {g.type_names[k]} prefers {m2} over {m} (gap {_s(gap)})")
    if not report.constrained_opt_ok:
        for m, gap in report.optimality_gaps:
            if gap != 0:
                print(f"  receiver not optimal at {m} (gap {_s(gap)})")
    if report.exit_violations:
        for k, m in report.exit_violations:
            print(f"  exit: type {g.type_names[k]} rejects the proposal at {m}")
    return EXIT_OK if report.overall else EXIT_UNRESOLVED, result


def cmd_threshold(args) -> tuple[int, dict]:
    g = load_game(args.game)
    sigma, tau = load_profile(args.profile, g)
    rep = exit_threshold(g, sigma, tau)
    result = {
        "command": "threshold",
        "game_digest": _digest(args.game),
        "profile": _profile_json(sigma, tau),
        "per_message": {m: (None if b is None else _s(b)) for m, b in rep.per_message},
        "deviation": None if rep.deviation is None else _s(rep.deviation),
        "admissibility": _s(rep.admissibility),
        "overall": _s(rep.overall),
        "outcome": "threshold",
    }
    print(f"per-message thresholds: {result['per_message']}")
    print(f"overall threshold: {result['overall']} (deviation {result['deviation']}, "
          f"admissibility cap {result['admissibility']})")
    return EXIT_OK, result


def cmd_bound(args) -> tuple[int, dict]:
    g = load_game(args.game)
    v_star, eq = best_partitional_value(g)
    bound = mechanism_bound(g, v_star)
    v_bar = max(ratlp.maximize(v, g.X).value for v in g.receiver_v)
    result = {
        "command": "bound",
        "game_digest": _digest(args.game),
        "v_star": _s(v_star),
        "v_bar": _s(v_bar),
        "p_min": _s(min(g.prior)),
        "bound": _s(bound),
        "best_partition": [[g.type_names[k] for k in cell]
                           for cell in eq.metadata["partition"]],
        "outcome": "bound",
    }
    print(f"best partitional receiver value: {_s(v_star)} "
          f"at partition {result['best_partition']}")
    print(f"v_bar: {_s(v_bar)}, smallest prior: {_s(min(g.prior))}, bound: {_s(bound)}")
    return EXIT_OK, result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vetotalk",
        description="Exact equilibrium computation for sender-receiver games "
                    "with a sender approval stage.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("structure", help="participation structure of a game")
    p.add_argument("game")
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("solve", help="construct an equilibrium")
    p.add_argument("game")
    p.add_argument("--method", choices=sorted(METHODS), default="auto")
    p.add_argument("--grid-resolution", type=int, default=construct.DEFAULT_GRID_RESOLUTION)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a profile against a game")
    p.add_argument("game")
    p.add_argument("profile")
    p.add_argument("--v0", help="check in the exit game at this rational exit payoff")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("threshold", help="exit threshold of an equilibrium profile")
    p.add_argument("game")
    p.add_argument("profile")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bound", help="mechanism-design exit bound of a game")
    p.add_argument("game")
    p.set_defaults(func=cmd_bound)

    for sp in sub.choices.values():
        sp.add_argument("--out", help="write the machine-readable result here")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, result = args.func(args)
    except (ParseError, NotAnEquilibrium) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except NoPartitionalEquilibrium as exc:
        print(f"no partitional equilibrium: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except VetotalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out:
        Path(args.out).write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
