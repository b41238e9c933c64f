"""
Command-line entry point: `mtpack <subcommand>` or `python main.py <subcommand>`.

Exit codes: 0 success, 1 usage or input error, 2 unmet hypothesis,
3 re-verified counterexample candidate (hunt), 4 internal consistency
failure or exhausted budget.
"""

from collections.abc import Sequence
from pathlib import Path
from typing import Optional
import argparse
import json
import sys
import time

from rich.console import Console
from rich.table import Table

from .bt import kappa_one_characterization
from .campaign import DEFAULT_SIZES, CampaignConfig, format_report, reverify_candidate, run_campaign
from .config import get_settings, log
from .cycle import CyclePacking
from .digraph import MultipartiteTournament
from .diversify import diversify_3partite
from .exceptions import (
    BudgetExceeded,
    HypothesisError,
    InputError,
    InternalConsistencyError,
    MtpackError,
)
from .generators import (
    GenSpec,
    gen_bt,
    gen_complete_split,
    gen_extended_tournament,
    gen_random_extended,
    gen_random_multipartite,
    gen_split_with_min_outdegree,
    gen_with_min_outdegree,
)
from .mtg import read_mtg, read_packing, serialize_mtg, serialize_packing
from .oracle import (
    OracleBudget,
    enumerate_cycles,
    exists_k_disjoint,
    kappa_exact,
    reference_cycles,
    verify_packing,
    vertex_pancyclic_check,
)
from .packing import PACKERS, pack

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_INTERNAL = 4

console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True, highlight=False)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _ranges(text: str) -> list[tuple[int, int]]:
    ranges = []
    for tok in text.split(","):
        low, sep, high = tok.partition("-")
        try:
            ranges.append((int(low), int(high if sep else low)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected ranges like 3-5,4-4, got {text!r}") from None
    return ranges


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mtpack", description="Cycle packings in multipartite tournaments")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json"], default="text")

    gen = sub.add_parser("gen", parents=[fmt], help="generate an instance")
    gen.add_argument("--family", choices=["multipartite", "bt", "split", "extended"], default="multipartite")
    gen.add_argument("--sizes", type=_int_list, required=True)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--delta-min", type=int, default=None)
    gen.add_argument("--max-attempts", type=int, default=None)
    gen.add_argument("--input", help="tournament to blow up (extended family)")
    gen.add_argument("--output")

    pack_cmd = sub.add_parser("pack", parents=[fmt], help="pack k disjoint cycles")
    pack_cmd.add_argument("--input", required=True)
    pack_cmd.add_argument("--k", type=int, required=True)
    pack_cmd.add_argument("--algorithm", choices=["auto", *PACKERS], default="auto")
    pack_cmd.add_argument("--output")

    div = sub.add_parser("diversify", parents=[fmt], help="k disjoint cycles of two lengths")
    div.add_argument("--input", required=True)
    div.add_argument("--k", type=int, required=True)
    div.add_argument("--output")

    kappa = sub.add_parser("kappa", parents=[fmt], help="exact kappa^k by search")
    kappa.add_argument("--input", required=True)
    kappa.add_argument("--k", type=int, required=True)
    kappa.add_argument("--max-cycle-len", type=int, default=None)

    k1 = sub.add_parser("check-kappa-one", parents=[fmt], help="decide kappa^k = 1 for 3-partite input")
    k1.add_argument("--input", required=True)
    k1.add_argument("--k", type=int, required=True)

    oracle = sub.add_parser("oracle", parents=[fmt], help="run the exact oracle")
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--k", type=int, default=1)
    oracle.add_argument("--mode", choices=["exists", "enumerate", "pancyclic", "cross-check"], default="exists")
    oracle.add_argument("--max-cycle-len", type=int, default=None)

    verify = sub.add_parser("verify", parents=[fmt], help="check a packing file against an instance")
    verify.add_argument("--input", required=True)
    verify.add_argument("--packing", required=True)

    hunt = sub.add_parser("hunt", parents=[fmt], help="run a verification campaign")
    hunt.add_argument(
        "--family",
        choices=["3partite", "multipartite", "bipartite", "split", "4partite", "bt", "extended"],
        required=True,
    )
    sizes = hunt.add_mutually_exclusive_group()
    sizes.add_argument("--sizes", type=_int_list)
    sizes.add_argument("--size-ranges", type=_ranges)
    hunt.add_argument("--k", type=int, default=2)
    hunt.add_argument("--k-max", type=int, default=None)
    hunt.add_argument("--trials", type=int, default=1)
    hunt.add_argument("--seed", type=int, default=0)
    hunt.add_argument("--delta-rule", choices=["2k-1", "3k-2"], default="2k-1")
    hunt.add_argument("--cross-check-max-n", type=int, default=14)
    hunt.add_argument("--max-cycle-len", type=int, default=None)
    hunt.add_argument("--no-diversify", action="store_true")
    hunt.add_argument("--workers", type=int, default=None)
    hunt.add_argument("--report")
    return parser


def _instance(path: str, multipartite: bool = True):
    D = read_mtg(path)
    if multipartite and not isinstance(D, MultipartiteTournament):
        raise InputError(f"{path} holds a plain digraph; this command needs 'p mtg' input")
    return D


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        log.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


def _packing_json(packing: CyclePacking, **extra) -> str:
    payload = {**extra, "cycles": [list(c.verts) for c in packing], "lengths": list(packing.lengths)}
    return json.dumps(payload) + "\n"


def _budget(args) -> OracleBudget:
    return OracleBudget.make(max_cycle_len=args.max_cycle_len)


def cmd_gen(args) -> int:
    seed = args.seed or 0
    attempts = {"max_attempts": args.max_attempts} if args.max_attempts else {}
    match args.family:
        case "multipartite":
            spec = GenSpec.make(sizes=args.sizes, seed=seed, delta_min=args.delta_min, **attempts)
            D = gen_with_min_outdegree(spec) if args.delta_min is not None else gen_random_multipartite(spec)
        case "bt":
            D = gen_bt(args.sizes)
        case "split":
            if len(args.sizes) != 2:
                raise UsageError("--sizes for the split family is CLIQUE,INDEPENDENT")
            clique, indep = args.sizes
            if args.delta_min is not None:
                D = gen_split_with_min_outdegree(clique, indep, seed, args.delta_min, args.max_attempts)
            else:
                D = gen_complete_split(clique, indep, seed)
        case "extended":
            if args.input:
                D = gen_extended_tournament(_instance(args.input), args.sizes, args.seed)
            else:
                D = gen_random_extended(args.sizes, seed, args.delta_min or 0, args.max_attempts)
    comments = [f"family={args.family} sizes={','.join(map(str, args.sizes))} seed={seed}"]
    _emit(serialize_mtg(D, comments), args.output)
    return EXIT_OK


def cmd_pack(args) -> int:
    D = _instance(args.input)
    name, packing = pack(D, args.k, args.algorithm)
    if args.format == "json":
        _emit(_packing_json(packing, algorithm=name), args.output)
    else:
        _emit(serialize_packing(packing), args.output)
    return EXIT_OK


def cmd_diversify(args) -> int:
    D = _instance(args.input)
    result = diversify_3partite(D, args.k)
    if args.format == "json":
        _emit(_packing_json(result.packing, branch=result.branch, witness=list(result.witness)), args.output)
    else:
        _emit(serialize_packing(result.packing), args.output)
    return EXIT_OK


def cmd_kappa(args) -> int:
    D = _instance(args.input, multipartite=False)
    result = kappa_exact(D, args.k, _budget(args))
    if args.format == "json":
        cycles = [list(c.verts) for c in result.witness] if result.witness else []
        console.print_json(json.dumps({"kappa": result.value, "cycles": cycles}))
    else:
        console.print(f"kappa^{args.k} = {result.value}", markup=False)
        if result.witness:
            console.print(serialize_packing(result.witness), end="", markup=False)
    return EXIT_OK


def cmd_check_kappa_one(args) -> int:
    D = _instance(args.input)
    verdict = kappa_one_characterization(D, args.k)
    if args.format == "json":
        payload = {
            "holds": verdict.holds,
            "reason": verdict.reason,
            "n_list": list(verdict.labeling.n_list) if verdict.labeling else None,
            "witness": [list(c.verts) for c in verdict.witness] if verdict.witness else None,
        }
        console.print_json(json.dumps(payload))
    else:
        console.print("true" if verdict.holds else "false", markup=False)
        err_console.print(verdict.reason, markup=False)
    return EXIT_OK


def cmd_oracle(args) -> int:
    D = _instance(args.input, multipartite=args.mode == "pancyclic")
    budget = _budget(args)
    match args.mode:
        case "exists":
            found = exists_k_disjoint(D, args.k, budget)
            if args.format == "json":
                console.print_json(json.dumps({"exists": found is not None,
                                               "cycles": [list(c.verts) for c in found] if found else []}))
            else:
                console.print("found" if found else "none", markup=False)
                if found:
                    console.print(serialize_packing(found), end="", markup=False)
        case "enumerate":
            cycles = enumerate_cycles(D, budget)
            if args.format == "json":
                console.print_json(json.dumps({"cycles": [list(c.verts) for c in cycles]}))
            else:
                console.print(serialize_packing(CyclePacking.of(cycles)), end="", markup=False)
        case "pancyclic":
            result = vertex_pancyclic_check(D, budget)
            table = Table("part", "witness")
            for part, vertex in sorted(result.witnesses.items()):
                table.add_row(str(part), str(vertex))
            console.print(table)
            if not result.ok:
                raise InternalConsistencyError(result.violation, instance=serialize_mtg(D))
        case "cross-check":
            ours = enumerate_cycles(D, budget)
            theirs = reference_cycles(D, budget.cap(D))
            same = ours == theirs
            console.print(f"enumerate={len(ours)} reference={len(theirs)} {'agree' if same else 'DIFFER'}", markup=False)
            if not same:
                raise InternalConsistencyError("Cycle enumerators disagree", instance=serialize_mtg(D))
    return EXIT_OK


def cmd_verify(args) -> int:
    D = _instance(args.input, multipartite=False)
    packing = read_packing(args.packing)
    verdict = verify_packing(D, packing)
    console.print("true" if verdict.ok else f"false: {verdict.violation}", markup=False)
    return EXIT_OK if verdict.ok else EXIT_USAGE


def cmd_hunt(args) -> int:
    sizes = args.sizes
    if sizes is None and args.size_ranges is None:
        sizes = DEFAULT_SIZES[args.family]
    config = CampaignConfig.make(
        family=args.family,
        sizes=sizes,
        size_ranges=args.size_ranges,
        k_min=args.k,
        k_max=args.k_max,
        trials=args.trials,
        seed=args.seed,
        delta_rule=args.delta_rule,
        oracle_cross_check_max_n=args.cross_check_max_n,
        diversify=not args.no_diversify,
        max_cycle_len=args.max_cycle_len,
    )
    report = run_campaign(config, args.workers)
    text = format_report(report, args.format)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
        log.info(f"Report written to {args.report}")
    else:
        sys.stdout.write(text)

    table = Table("outcome", "trials", title=f"{config.family} campaign")
    for outcome, count in report.counts.items():
        table.add_row(outcome, str(count))
    err_console.print(table)

    candidates = report.candidates
    if not candidates:
        return EXIT_OK
    confirmed = [r for r in candidates if reverify_candidate(r)]
    log.critical(f"{len(confirmed)} of {len(candidates)} counterexample candidates re-verified")
    return EXIT_COUNTEREXAMPLE if confirmed else EXIT_INTERNAL


COMMANDS = {
    "gen": cmd_gen,
    "pack": cmd_pack,
    "diversify": cmd_diversify,
    "kappa": cmd_kappa,
    "check-kappa-one": cmd_check_kappa_one,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "hunt": cmd_hunt,
}


def exit_code_for(error: Exception) -> int:
    match error:
        case UsageError() | InputError():
            return EXIT_USAGE
        case HypothesisError():
            return EXIT_HYPOTHESIS
        case InternalConsistencyError() | BudgetExceeded():
            return EXIT_INTERNAL
    return EXIT_INTERNAL


def cli_dispatch(argv: Sequence[str]) -> int:
    """Parse argv, run the subcommand and map errors to exit codes"""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        err_console.print(str(e), markup=False)
        return EXIT_USAGE

    log.debug(f"Configured settings:\n{get_settings().model_dump_json(indent=2)}")
    start_time = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except (UsageError, MtpackError) as e:
        code = exit_code_for(e)
        if isinstance(e, InternalConsistencyError) and e.instance:
            log.critical(f"Offending instance:\n{e.instance}")
        err_console.print(f"{type(e).__name__}: {e}", markup=False)
    except OSError as e:
        err_console.print(f"{type(e).__name__}: {e}", markup=False)
        code = EXIT_USAGE
    log.debug(f"{args.command} finished in {time.perf_counter() - start_time:2f} seconds")
    return code


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
