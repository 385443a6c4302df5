"""Command-line interface.

Exit codes: 0 success or trivial, 1 nontrivial or no solution, 2 usage or
parse error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence, TextIO

from . import afgroup, gfgroup, protocol
from .afgroup import AllIntegers, NoSolution, ParseError, Unique
from .oracle import REGISTRY, DESCRIPTIONS, FunctionOracle, OracleError, DomainError, from_spec

BENCH_HEADER = ["oracle", "n", "wp_steps", "dlp_steps", "wp_evals", "dlp_evals"]


class UsageError(Exception):
    pass


def _parse(kind: str, text: str):
    return afgroup.parse_aword(text) if kind == "a" else gfgroup.parse_gword(text)


def cmd_normalize(args, oracle: FunctionOracle) -> int:
    w = _parse(args.kind, args.word)
    print(afgroup.reduce(w, oracle) if args.kind == "a" else gfgroup.canon(w))
    return 0


def cmd_wp(args, oracle: FunctionOracle) -> int:
    w = _parse(args.kind, args.word)
    mod = afgroup if args.kind == "a" else gfgroup
    trivial = mod.word_problem(w, oracle)
    print("trivial" if trivial else "nontrivial")
    return 0 if trivial else 1


def cmd_dlp(args, oracle: FunctionOracle) -> int:
    base, target = _parse(args.kind, args.base), _parse(args.kind, args.target)
    if args.kind == "a":
        result = afgroup.discrete_log(base, target, oracle)
    else:
        result = gfgroup.discrete_log(gfgroup.canon(base), gfgroup.canon(target), oracle)
    if isinstance(result, Unique):
        print(f"x={result.x}")
        return 0
    if isinstance(result, AllIntegers):
        print("all-integers")
        return 0
    print("no-solution")
    if args.verbose and result.reason:
        print(result.reason, file=sys.stderr)
    return 1


def cmd_embed(args, oracle: FunctionOracle) -> int:
    try:
        word = gfgroup.embed_a(args.index) if args.family == "a" else gfgroup.embed_b(args.index)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(word)
    return 0


def bench_rows(oracle: FunctionOracle, n_min: int, n_max: int) -> list[list]:
    """One row per in-domain ``n``: oracle cost of solving
    ``Psi(a_n)^x = Psi(b_n)`` versus checking ``Psi(a_n^x b_n^-1) = 1``."""
    if n_min > n_max:
        raise UsageError(f"empty range: {n_min} > {n_max}")
    if n_min < 1:
        raise UsageError("n must be >= 1 (b_n needs a positive index)")
    rows = []
    for n in range(n_min, n_max + 1):
        if not oracle.in_domain(n):
            continue
        dlp_oracle, wp_oracle = oracle.fresh(), oracle.fresh()
        result = gfgroup.discrete_log(gfgroup.canon(gfgroup.embed_a(n)),
                                      gfgroup.canon(gfgroup.embed_b(n)), dlp_oracle)
        if not isinstance(result, Unique):
            raise RuntimeError(f"n={n}: expected a unique solution, got {result}")
        probe = gfgroup.commutator_word(result.x, 2 * n + 1) * gfgroup.commutator_word(-1, 2 * n)
        if not gfgroup.word_problem(probe, wp_oracle):
            raise RuntimeError(f"n={n}: probe Psi(a_n^{result.x} b_n^-1) is not trivial")
        wp, dlp = wp_oracle.meter(), dlp_oracle.meter()
        rows.append([oracle.spec, n, wp.charged_steps, dlp.charged_steps,
                     wp.eval_calls, dlp.eval_calls])
    return rows


def cmd_bench(args, oracle: FunctionOracle) -> int:
    rows = bench_rows(oracle, *args.n)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    writer.writerows(rows)
    return 0


def _stream(session: protocol.Session, incoming, inp: TextIO, out: TextIO) -> protocol.Session:
    while True:
        session, msg = protocol.step(session, incoming)
        if msg is not None:
            out.write(msg.to_line() + "\n")
            out.flush()
        if session.state is protocol.State.COMPLETED:
            return session
        line = inp.readline()
        if not line:
            raise protocol.ProtocolError("peer closed the stream")
        incoming = protocol.Message.from_line(line.rstrip("\n"))


def cmd_keyex(args, oracle: FunctionOracle) -> int:
    if args.stream:
        if args.role == "initiator":
            _require(args, "P", "g0", "n", "key")
            inst = protocol.ActionInstantiation(args.P, args.g0)
            session = _stream(protocol.initiator(inst, args.n, args.key), None, sys.stdin, sys.stdout)
        else:
            _require(args, "key")
            line = sys.stdin.readline()
            first = protocol.Message.from_line(line.rstrip("\n"))
            session = _stream(protocol.responder(args.key), first, sys.stdin, sys.stdout)
        print(f"shared={session.shared_index}", file=sys.stderr)
        return 0

    _require(args, "P", "g0", "n", "key_a", "key_b")
    inst = protocol.ActionInstantiation(args.P, args.g0)
    shared_a, shared_b, transcript = protocol.run_exchange(inst, args.n, args.key_a, args.key_b)
    for msg in transcript:
        print(msg.to_line())
    if shared_a != shared_b:
        print(f"mismatch: {shared_a} != {shared_b}")
        return 1
    print(f"shared={shared_a}")
    return 0


def _require(args, *names: str) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def cmd_oracle(args, oracle: FunctionOracle) -> int:
    for name in REGISTRY:
        print(f"{name:18} {DESCRIPTIONS[name]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", default=argparse.SUPPRESS,
                        help="oracle spec, e.g. succ or 'toy_dlog(P=23,g=5)'")

    parser = argparse.ArgumentParser(prog="wreathlog", description=__doc__.splitlines()[0])
    parser.add_argument("--oracle", default="succ", help="oracle spec (default: succ)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="reduced A-word or canonical G-form")
    p.add_argument("kind", choices=["a", "g"])
    p.add_argument("word")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("wp", parents=[common], help="word problem")
    p.add_argument("kind", choices=["a", "g"])
    p.add_argument("word")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("dlp", parents=[common], help="solve base^x = target")
    p.add_argument("kind", choices=["a", "g"])
    p.add_argument("--base", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("-v", "--verbose", action="store_true", help="explain no-solution on stderr")
    p.set_defaults(func=cmd_dlp)

    p = sub.add_parser("embed", parents=[common], help="G-word for a_i or b_i")
    p.add_argument("family", choices=["a", "b"])
    p.add_argument("index", type=int)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("keyex", parents=[common], help="key exchange, in-process or over stdio")
    p.add_argument("--P", type=int)
    p.add_argument("--g0", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--key-a", type=int)
    p.add_argument("--key-b", type=int)
    p.add_argument("--stream", action="store_true", help="speak the wire format on stdin/stdout")
    p.add_argument("--role", choices=["initiator", "responder"], default="initiator")
    p.add_argument("--key", type=int, help="own private key in --stream mode")
    p.set_defaults(func=cmd_keyex)

    p = sub.add_parser("bench", parents=[common], help="CSV of WP vs DLP oracle cost")
    p.add_argument("--n", nargs=2, type=int, metavar=("N_MIN", "N_MAX"), required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", parents=[common], help="oracle registry")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        oracle = from_spec(args.oracle)
        return args.func(args, oracle)
    except (UsageError, ParseError, OracleError, DomainError, protocol.ProtocolError) as exc:
        print(f"wreathlog {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
