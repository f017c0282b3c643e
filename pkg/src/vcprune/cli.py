"""Command line: ``vcprune {prune,vc,match,check,fuzz}``.

Exit codes: 0 success, 1 unreadable input, 2 bad configuration,
3 check failure, 4 vacuous check (old formula satisfiable),
10 ``prune`` produced literally ``false``.
"""
from __future__ import annotations

import argparse
import sys

from .matcher import SimilarityWeights, build_substitution
from .oracle import (
    GeneratorParams, OracleError, Universe, check_prune_correct, format_report,
    run_batch,
)
from .pruner import prune_details
from .terms import (
    DEFAULT_REGISTRY, ParseError, Session, SubstitutionError, parse_term,
    print_term,
)
from .vcgen import GraphError, parse_graph, vc

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_FAIL, EXIT_VACUOUS, EXIT_FALSE = 0, 1, 2, 3, 4, 10


class ConfigError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None


def _parse_file(path: str, session: Session):
    text = _read(path)
    try:
        return parse_term(text, session)
    except ParseError as e:
        raise ParseError(f"{path}:{e}") from None


def load_config(path: str) -> dict:
    """Read ``key=value`` lines; ``#`` and ``;`` start comments."""
    out = {}
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_CONFIG_KEYS = {"commutative", "w_env", "w_lcs", "no_match", "range", "max_atoms",
                "max_depth", "mode", "seed", "count"}


def _apply_config(args: argparse.Namespace) -> None:
    if not args.config:
        return
    cfg = load_config(args.config)
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        # flags given on the command line win over the file
        if "commutative" in cfg:
            args.commutative = cfg["commutative"].replace(",", " ").split() + args.commutative
        for key in ("w_env", "w_lcs", "max_atoms", "max_depth", "seed", "count"):
            if key in cfg and getattr(args, key, None) is None:
                setattr(args, key, int(cfg[key]))
        if "no_match" in cfg and not args.no_match:
            args.no_match = cfg["no_match"].lower() in ("1", "true", "yes", "on")
        if "range" in cfg and getattr(args, "range", None) is None:
            lo, hi = cfg["range"].replace(",", " ").split()
            args.range = [int(lo), int(hi)]
        if "mode" in cfg and getattr(args, "mode", None) is None:
            args.mode = cfg["mode"]
    except ValueError as e:
        raise ConfigError(f"bad value in {args.config}: {e}") from None


def _registry(args):
    return DEFAULT_REGISTRY.extended(*args.commutative)


def _weights(args) -> SimilarityWeights:
    try:
        return SimilarityWeights(env=10 if args.w_env is None else args.w_env,
                                 lcs=1 if args.w_lcs is None else args.w_lcs)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _universe(args) -> Universe:
    lo, hi = args.range if args.range is not None else Universe().int_range
    if lo > hi:
        raise ConfigError(f"empty integer range {lo}..{hi}")
    return Universe(int_range=(lo, hi))


def cmd_prune(args, out) -> int:
    session = Session()
    old, new = _parse_file(args.old, session), _parse_file(args.new, session)
    reg, weights = _registry(args), _weights(args)
    result, subst = prune_details(old, new, registry=reg, match=not args.no_match,
                                  weights=weights)
    if args.emit_substitution:
        text = subst.to_text()
        try:
            with open(args.emit_substitution, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise ConfigError(f"cannot write {args.emit_substitution}: {e.strerror}") from None
    out.write(print_term(result) + "\n")
    return EXIT_FALSE if result is session.false else EXIT_OK


def cmd_vc(args, out) -> int:
    session = Session()
    graph = parse_graph(_read(args.graph), session)
    out.write(print_term(vc(graph, _registry(args))) + "\n")
    return EXIT_OK


def cmd_match(args, out) -> int:
    session = Session()
    old, new = _parse_file(args.old, session), _parse_file(args.new, session)
    out.write(build_substitution(old, new, _registry(args), _weights(args)).to_text())
    return EXIT_OK


def cmd_check(args, out) -> int:
    session = Session()
    old, new = _parse_file(args.old, session), _parse_file(args.new, session)
    try:
        report = check_prune_correct(old, new, _universe(args), match=not args.no_match,
                                     registry=_registry(args))
    except OracleError as e:
        raise ConfigError(str(e)) from None
    out.write(format_report(report) + "\n")
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "vacuous": EXIT_VACUOUS}[report.verdict]


def cmd_fuzz(args, out) -> int:
    try:
        params = GeneratorParams(
            max_atoms=args.max_atoms if args.max_atoms is not None else 4,
            max_depth=args.max_depth if args.max_depth is not None else 3,
            mode=args.mode or "propositional")
    except ValueError as e:
        raise ConfigError(str(e)) from None
    seed = args.seed if args.seed is not None else 0
    count = args.count if args.count is not None else 100
    if count < 0:
        raise ConfigError("--count must be non-negative")
    try:
        reports = run_batch(seed, count, params, _universe(args))
    except OracleError as e:
        raise ConfigError(str(e)) from None
    for r in reports:
        out.write(format_report(r) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value configuration file")
    common.add_argument("--commutative", metavar="SYM", action="append", default=[],
                        help="treat SYM as commutative (repeatable; and/or always are)")
    matching = argparse.ArgumentParser(add_help=False)
    matching.add_argument("--w-env", type=int, default=None, help="environment weight (10)")
    matching.add_argument("--w-lcs", type=int, default=None, help="name LCS weight (1)")
    matching.add_argument("--no-match", action="store_true", help="skip constant renaming")
    universe = argparse.ArgumentParser(add_help=False)
    universe.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), default=None,
                          help="integer range for the oracle (default -4 7)")

    p = argparse.ArgumentParser(prog="vcprune", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prune", parents=[common, matching], help="prune NEW against UNSAT OLD")
    sp.add_argument("old")
    sp.add_argument("new")
    sp.add_argument("--emit-substitution", metavar="PATH")
    sp.set_defaults(func=cmd_prune)

    sp = sub.add_parser("vc", parents=[common], help="print the VC of a DSA graph file")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_vc)

    sp = sub.add_parser("match", parents=[common, matching], help="print the constant renaming")
    sp.add_argument("old")
    sp.add_argument("new")
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("check", parents=[common, matching, universe],
                        help="verify pruning of a pair by enumeration")
    sp.add_argument("old")
    sp.add_argument("new")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("fuzz", parents=[common, universe], help="check random pairs")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--max-atoms", type=int, default=None)
    sp.add_argument("--max-depth", type=int, default=None)
    sp.add_argument("--mode", choices=("propositional", "integer"), default=None)
    sp.set_defaults(func=cmd_fuzz, w_env=None, w_lcs=None, no_match=False)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    for attr, default in (("range", None), ("no_match", False), ("w_env", None), ("w_lcs", None)):
        if not hasattr(args, attr):
            setattr(args, attr, default)
    try:
        _apply_config(args)
        return args.func(args, out)
    except (ParseError, GraphError) as e:
        print(f"vcprune: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, SubstitutionError) as e:
        print(f"vcprune: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
