"""
twofactor command line
──────────────────────
    python -m app.cli solve graph.txt --k 3 --report run.json
    python -m app.cli verify graph.txt factor.txt
    python -m app.cli oracle graph.txt
    python -m app.cli gen extremal --n 10 --k 3 --out ext.txt
    python -m app.cli aux graph.txt --dot aux.dot
    python -m app.cli params --epsilon 0.5 --k 2
    python -m app.cli export-dot graph.txt --factor factor.txt --out g.dot
    python -m app.cli sweep --n 24,36 --delta 0.4 --k 2,3 --seeds 0,1 --csv runs.csv

Exit status: 0 success, 1 usage or input error, 2 search failure (also an
internal invariant violation, reported as such), 3 no such 2-factor
(confirmed by the oracle).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from app.core.config import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_CLUSTER,
    DEFAULT_MAX_PATTERN_LEN,
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_SEED,
    SECOND_ENUMERATOR_MAX_N,
    log_level,
    oracle_cap,
)
from app.core.errors import (
    GraphFormatError,
    OracleCapError,
    PipelineInvariantError,
    TwoFactorError,
)
from app.core.logging_setup import configure_logging
from app.models.graph import HamiltonianInstance
from app.models.schemas import PipelineConfig
from app.services import json_formatter
from app.services.aux_graph import build_auxiliary
from app.services.dot_export import aux_to_dot, graph_to_dot
from app.services.generators import (
    gen_extremal_instance,
    gen_planted_blowup,
    gen_random_hamiltonian,
)
from app.services.graph_core import verify_cycle_listing
from app.services.graph_parser import (
    format_factor,
    load_instance,
    parse_factor_file,
    parse_graph_document,
    parse_hamilton_flag,
    serialize_instance,
)
from app.services.oracle import brute_force_two_factors, cycle_cover_counts
from app.services.pipeline import solve, theoretical_params
from app.services.sweep import export_csv, run_sweep, summarize

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SEARCH_FAILURE = 2
EXIT_IMPOSSIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ── helpers ───────────────────────────────────────────────────────────────────

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _int_list(value: str) -> list[int]:
    return [int(v) for v in value.replace(",", " ").split()]


def _float_list(value: str) -> list[float]:
    return [float(v) for v in value.replace(",", " ").split()]


def _load(args: argparse.Namespace) -> HamiltonianInstance:
    document = parse_graph_document(_read(args.graph))
    flag = parse_hamilton_flag(args.hamilton) if getattr(args, "hamilton", None) else None
    return load_instance(document, flag)


# ══════════════════════════════════════════════════════════════════════════════
# Commands
# ══════════════════════════════════════════════════════════════════════════════

def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load(args)
    config = PipelineConfig(
        target_k=args.k,
        epsilon=args.epsilon,
        seed=args.seed,
        search_budget=args.budget,
        max_pattern_len=args.max_pattern_len,
        max_cluster=args.max_cluster,
        fallback_enabled=not args.no_fallback,
    )
    factor, report = solve(instance, config)

    status = EXIT_OK
    if factor is not None:
        print(format_factor(factor))
    else:
        print(f"search failure: {report.failure_reason}", file=sys.stderr)
        status = EXIT_SEARCH_FAILURE
        if not args.no_oracle and instance.n <= oracle_cap():
            result = brute_force_two_factors(instance.graph)
            if args.k in result.achievable:
                report.diagnostics.append(f"oracle: a 2-factor with {args.k} cycles exists")
            else:
                report.diagnostics.append(f"oracle: no 2-factor with {args.k} cycles")
                print(f"oracle: no 2-factor with {args.k} cycles exists", file=sys.stderr)
                status = EXIT_IMPOSSIBLE

    if args.report:
        _write(args.report, report.model_dump_json(indent=2))
    return status


def cmd_verify(args: argparse.Namespace) -> int:
    graph = parse_graph_document(_read(args.graph)).graph
    cycles = parse_factor_file(_read(args.factor))
    try:
        tf = verify_cycle_listing(graph, cycles)
    except TwoFactorError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"components: {tf.component_count}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    graph = parse_graph_document(_read(args.graph)).graph
    result = brute_force_two_factors(graph)
    second = None
    if args.second:
        if graph.n > SECOND_ENUMERATOR_MAX_N:
            raise OracleCapError(
                f"second enumerator capped at n <= {SECOND_ENUMERATOR_MAX_N}, got n = {graph.n}"
            )
        second = set(cycle_cover_counts(graph))
    _write(args.out, json_formatter.oracle_report(result, second).model_dump_json(indent=2))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        instance = gen_random_hamiltonian(args.n, args.delta, args.seed)
    elif args.kind == "extremal":
        instance = gen_extremal_instance(args.n, args.k)
    else:
        planted = gen_planted_blowup(
            args.pattern_len, args.t, args.noise, args.seed, n=args.n, ordered=args.ordered
        )
        instance = planted.instance
        if args.certificate:
            cert = json_formatter.blowup_model(planted.certificate)
            _write(args.certificate, cert.model_dump_json(indent=2))
    _write(args.out, serialize_instance(instance))
    return EXIT_OK


def cmd_aux(args: argparse.Namespace) -> int:
    aux = build_auxiliary(_load(args))
    dot = aux_to_dot(aux)
    if args.dot:
        _write(args.dot, dot)
        _write(None, json_formatter.aux_summary(aux).model_dump_json(indent=2))
    else:
        _write(None, dot)
    return EXIT_OK


def cmd_params(args: argparse.Namespace) -> int:
    _write(None, theoretical_params(args.epsilon, args.k, args.n).model_dump_json(indent=2))
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    instance = _load(args)
    factor = None
    if args.factor:
        factor = verify_cycle_listing(instance.graph, parse_factor_file(_read(args.factor)))
    _write(args.out, graph_to_dot(instance, factor))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    base = PipelineConfig(
        target_k=1,
        epsilon=args.epsilon,
        search_budget=args.budget,
        fallback_enabled=not args.no_fallback,
    )
    df = run_sweep(args.n, args.delta, args.k, args.seeds, base)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            export_csv(df, fh)
    print(summarize(df).to_string(index=False))
    return EXIT_OK


# ══════════════════════════════════════════════════════════════════════════════
# Parser
# ══════════════════════════════════════════════════════════════════════════════

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="twofactor", description="2-factors with exactly k cycles")
    ap.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default from env)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a 2-factor with exactly k cycles")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET, help="search node budget")
    p.add_argument("--max-pattern-len", type=int, default=DEFAULT_MAX_PATTERN_LEN)
    p.add_argument("--max-cluster", type=int, default=DEFAULT_MAX_CLUSTER)
    p.add_argument("--no-fallback", action="store_true")
    p.add_argument("--no-oracle", action="store_true", help="skip the oracle check on failure")
    p.add_argument("--hamilton", help="Hamilton cycle as 1-based ids, e.g. 1,2,3,4")
    p.add_argument("--report", help="write the RunReport JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a factor file against a graph")
    p.add_argument("graph")
    p.add_argument("factor")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact achievable cycle counts (small n)")
    p.add_argument("graph")
    p.add_argument("--second", action="store_true", help="cross-check with the cycle-cover enumerator")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate an instance")
    kinds = p.add_subparsers(dest="kind", required=True)
    g = kinds.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=float, required=True)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--out")
    g = kinds.add_parser("extremal")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out")
    g = kinds.add_parser("planted")
    g.add_argument("--pattern-len", type=int, default=4)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--n", type=int)
    g.add_argument("--ordered", action="store_true")
    g.add_argument("--certificate", help="write the planted blow-up JSON here")
    g.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("aux", help="auxiliary graph summary and DOT")
    p.add_argument("graph")
    p.add_argument("--hamilton")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_aux)

    p = sub.add_parser("params", help="theoretical constants for epsilon and k")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("export-dot", help="graph with H and a factor highlighted")
    p.add_argument("graph")
    p.add_argument("--hamilton")
    p.add_argument("--factor")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("sweep", help="batch runs on random instances")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--delta", type=_float_list, required=True)
    p.add_argument("--k", type=_int_list, required=True)
    p.add_argument("--seeds", type=_int_list, default=[DEFAULT_SEED])
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--no-fallback", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or log_level())
    logger.debug("command %s", args.command)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineInvariantError as exc:
        logger.error("internal invariant violated: %s", exc)
        print(f"internal error (please report): {exc}", file=sys.stderr)
        return EXIT_SEARCH_FAILURE
    except TwoFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
