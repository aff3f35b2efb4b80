"""Command line front end: analyze, table, solve, play, serve."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import crt, game, grundy, poly
from .game import ConsolidationPolicy
from .modular import SetSaturated
from .session import analyze_numeric, analyze_poly

DEFAULT_SOLVE_BUDGET = 2_000_000


def _parse_heaps(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise ValueError(f"heaps must be a comma-separated list of integers, got {s!r}")


def _parse_field(s: str) -> tuple[int, int, int]:
    parts = s.split(",")
    if len(parts) != 3:
        raise ValueError("field must be given as p,n,modulus (e.g. 2,3,0b1011)")
    return int(parts[0]), int(parts[1]), int(parts[2], 0)


def _build_position(args):
    if args.mod is not None and args.field is not None:
        raise ValueError("give either --mod or --field, not both")
    heaps = _parse_heaps(args.heaps)
    if args.mod is not None:
        return game.new_position(args.mod, heaps)
    if args.field is not None:
        p, n, bits = _parse_field(args.field)
        return poly.new_poly_position(poly.field_from_int(p, n, bits), heaps)
    raise ValueError("a position needs --mod or --field")


def _policy(args) -> ConsolidationPolicy:
    return ConsolidationPolicy(args.policy)


def _outcome_text(outcome_value: str) -> str:
    if outcome_value == "P":
        return "losing for the player to move (P-position)"
    return "winning for the player to move (N-position)"


def _print_numeric_analysis(view: dict) -> None:
    m = view["modulus"]
    print(f"position: {view['heaps']} mod {m}")
    print(f"product: {view['productInteger']} = {view['product']} (mod {m})")
    print(f"outcome: {_outcome_text(view['outcome'])}")
    print(f"stranded: {'yes' if view['stranded'] else 'no'}")
    if view["stateVector"] is not None:
        parts = ", ".join(
            f"mod {f}: {c}"
            for f, c in zip(view["stateVector"]["factors"], view["stateVector"]["components"])
        )
        print(f"state vector: ({parts})")
    if view["mumber"] is not None:
        print(f"mumber ({view['mumber']['policy']}): {view['mumber']['value']}")
    if view["grundy"] is not None:
        print(f"grundy value: {view['grundy']}")


def _print_poly_analysis(view: dict) -> None:
    f = view["field"]
    print(
        f"position: {view['heaps']} over F({f['p']}^{f['n']}), I(x) = {f['modulusPolynomial']}"
    )
    power = "" if view["productPower"] is None else f", x^{view['productPower']}"
    print(f"product: {view['product']} ({view['productPolynomial']}{power})")
    print(f"outcome: {_outcome_text(view['outcome'])}")
    print(f"stranded: {'yes' if view['stranded'] else 'no'}")
    for d in view["heapDetails"]:
        power = "" if d["power"] is None else f" = x^{d['power']}"
        print(f"  heap {d['heap']}: {d['polynomial']}{power}")


def cmd_analyze(args) -> int:
    pos = _build_position(args)
    if isinstance(pos, game.NumPosition):
        _print_numeric_analysis(analyze_numeric(pos, _policy(args)))
    else:
        _print_poly_analysis(analyze_poly(pos, _policy(args)))
    return 0


def cmd_table(args) -> int:
    if args.kind == "mex":
        mex = grundy.emit_mex_table(args.mod if args.mod is not None else 5, args.max)
        tables = [mex.single_heap, mex.sample_states]
    elif args.kind == "inverses":
        if args.field is None:
            raise ValueError("table inverses needs --field")
        p, n, bits = _parse_field(args.field)
        tables = [poly.emit_inverse_table(poly.field_from_int(p, n, bits))]
    elif args.kind == "mum15":
        heap_values = _parse_heaps(args.heap_values)
        tables = [crt.emit_mum15_table(heap_values)]
    else:
        raise ValueError(f"unknown table kind {args.kind!r}")
    out = []
    for t in tables:
        out.append(t.to_csv() if args.format == "csv" else t.to_text())
    print("\n\n".join(out))
    return 0


def cmd_solve(args) -> int:
    pos = _build_position(args)
    policy = _policy(args)
    if isinstance(pos, game.NumPosition):
        brute = grundy.outcome_bruteforce(pos, policy, args.budget)
        prod = game.product_mod(pos)
        product_class = game.classify(pos)
        try:
            mex = grundy.mumber_mex(pos, policy, args.budget)
        except SetSaturated:
            mex = None
        hint = game.optimal_move(pos, policy)
        print(f"position: {list(pos.heaps)} mod {pos.modulus}")
        print(f"brute-force outcome: {_outcome_text(brute.value)}")
        print(
            f"product rule: product = {prod} (mod {pos.modulus}) -> {_outcome_text(product_class.value)}"
        )
        print(f"verdict: {'agree' if brute is product_class else 'DISAGREE'}")
        if mex is None:
            print(
                f"mumber ({policy.value}): undefined (option values cover "
                f"every residue mod {pos.modulus})"
            )
        else:
            print(f"mumber ({policy.value}): {mex}")
        if mex is not None and mex != prod:
            print(
                f"note: mumber {mex} differs from the product {prod}; under "
                f"{policy.value} consolidation small positions can lack the "
                f"full option range"
            )
    else:
        brute = poly.outcome_bruteforce_poly(pos, policy, args.budget)
        product_class = poly.classify_poly(pos)
        prod = poly.field_product(pos)
        hint = poly.optimal_move_poly(pos, policy)
        print(f"position: {list(pos.heaps)} over F({pos.field.p}^{pos.field.n})")
        print(f"brute-force outcome: {_outcome_text(brute.value)}")
        print(
            f"product rule: product = {prod.rep} ({poly.poly_str(prod)}) -> "
            f"{_outcome_text(product_class.value)}"
        )
        print(f"verdict: {'agree' if brute is product_class else 'DISAGREE'}")
    if hint is None:
        print("hint: no winning move exists")
    elif isinstance(hint, game.Reduce):
        print(f"hint: reduce heap {hint.heap_index} by {hint.amount}")
    else:
        print(f"hint: consolidate, then subtract {hint.amount}")
    return 0


def _play_show(pos, policy) -> None:
    if isinstance(pos, game.NumPosition):
        view = analyze_numeric(pos, policy)
        _print_numeric_analysis(view)
    else:
        view = analyze_poly(pos, policy)
        _print_poly_analysis(view)


def cmd_play(args) -> int:
    """Hot-seat play at the terminal; both seats are human."""
    pos = _build_position(args)
    policy = _policy(args)
    numeric = isinstance(pos, game.NumPosition)
    players = ("player 1", "player 2")
    turn = 0
    print("commands: <heap_index> <amount> | c <amount> | hint | moves | q")
    while True:
        moves = (
            game.legal_moves(pos, policy) if numeric else poly.legal_moves_poly(pos, policy)
        )
        if not moves:
            print(f"{players[1 - turn]} wins: {players[turn]} has no legal move")
            return 0
        print()
        _play_show(pos, policy)
        try:
            line = input(f"{players[turn]}> ").strip()
        except EOFError:
            print("\nsession abandoned")
            return 0
        if not line:
            continue
        if line in ("q", "quit", "exit"):
            print("session abandoned")
            return 0
        if line == "moves":
            for mv in moves:
                if isinstance(mv, game.Reduce):
                    print(f"  {mv.heap_index} {mv.amount}")
                else:
                    print(f"  c {mv.amount}")
            continue
        if line == "hint":
            best = (
                game.optimal_move(pos, policy)
                if numeric
                else poly.optimal_move_poly(pos, policy)
            )
            if best is None:
                print("  no winning move exists")
            elif isinstance(best, game.Reduce):
                print(f"  reduce heap {best.heap_index} by {best.amount}")
            else:
                print(f"  consolidate, then subtract {best.amount}")
            continue
        try:
            parts = line.split()
            if parts[0] == "c":
                move = game.ConsolidateThenReduce(int(parts[1]))
            else:
                move = game.Reduce(int(parts[0]), int(parts[1]))
            pos = (
                game.apply_move(pos, move, policy)
                if numeric
                else poly.apply_move_poly(pos, move, policy)
            )
        except (IndexError, ValueError) as exc:
            print(f"  rejected: {exc}")
            continue
        turn = 1 - turn


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    port = args.port if args.port is not None else int(os.environ.get("MUM_PORT", "8000"))
    store = args.store if args.store is not None else os.environ.get(
        "MUM_STORE_DIR", "mum-sessions"
    )
    static = args.static
    if static is None:
        candidate = Path("frontend") / "dist"
        static = candidate if candidate.is_dir() else None
    app = create_app(store, static)
    print(f"store: {store}")
    if static is not None:
        print(f"static assets: {static}")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mum",
        description="Multiplicative modular nim: analysis, tables, solving, and play",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_position_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mod", type=int, default=None, help="modulus for numeric games")
        p.add_argument(
            "--field",
            default=None,
            help="finite field as p,n,modulus with base-p digit integer (e.g. 2,3,0b1011)",
        )
        p.add_argument("--heaps", required=True, help="comma-separated heap values")
        p.add_argument(
            "--policy",
            choices=["stranded-only", "always"],
            default="stranded-only",
            help="when consolidation moves are offered",
        )

    p_analyze = sub.add_parser("analyze", help="classify a position and show its invariants")
    add_position_args(p_analyze)
    p_analyze.set_defaults(fn=cmd_analyze)

    p_table = sub.add_parser("table", help="emit one of the reference tables")
    p_table.add_argument("kind", choices=["mex", "inverses", "mum15"])
    p_table.add_argument("--mod", type=int, default=None, help="modulus for the mex table")
    p_table.add_argument("--max", type=int, default=7, help="largest single heap in the mex table")
    p_table.add_argument("--field", default=None, help="field for the inverse table")
    p_table.add_argument(
        "--heap-values",
        default="11,13,14,16",
        help="heap values for the mod-15 decomposition table",
    )
    p_table.add_argument("--format", choices=["text", "csv"], default="text")
    p_table.set_defaults(fn=cmd_table)

    p_solve = sub.add_parser(
        "solve", help="brute-force a position and check it against the product rule"
    )
    add_position_args(p_solve)
    p_solve.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_SOLVE_BUDGET,
        help="maximum positions to expand before giving up",
    )
    p_solve.set_defaults(fn=cmd_solve)

    p_play = sub.add_parser("play", help="hot-seat game at the terminal")
    add_position_args(p_play)
    p_play.set_defaults(fn=cmd_play)

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--store", default=None, help="session store directory")
    p_serve.add_argument("--static", default=None, help="directory of web UI assets")
    p_serve.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except grundy.SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
