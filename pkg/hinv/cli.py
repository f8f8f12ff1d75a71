"""Command line interface.

    hinv enumerate --alpha 5,2,1                  # every node of V(5,2,1) with its sons
    hinv sons --alpha 5,3,1 --tuple 3,2,1         # sons, fathers, unique son, dual
    hinv special-chains --alpha 7,3,2,1           # C1 / C2 / C3
    hinv riding-chains --alpha 5,2                # RC1 / RC2 / RC3
    hinv quotient --alpha 5,3,1 [--kind sim2]     # factor lattice by ~2 or ~3
    hinv iso --alpha 5,2 --beta 4,2,1             # classification verdict
    hinv witness --alpha 5,2 --beta 4,2,1         # explicit isomorphism
    hinv verify --n-max 12 [--workers 4]          # theorem vs. brute force
    hinv hasse --alpha 5,2,1                      # DOT Hasse diagram

Exit codes: 0 success, 1 bad input, 2 a node bound was hit, 3 verification
found a disagreement or an internal check failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from pydantic import BaseModel

from . import hyperlattice as hl
from .chains import riding_chains, special_chains
from .config import get_settings
from .errors import HinvError, InvalidTuple, OutputError, UnsupportedFormat
from .isomorphism import build_witness, decide_iso, necessary_conditions, verify_range
from .models import (
    ChainBody,
    ChainList,
    FactorBody,
    LatticeBody,
    NeighboursBody,
    VerdictBody,
    WitnessBody,
)
from .quotient import Congruence, CongruenceKind, factor
from .segre import SegreChar, parse

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 like every other bad input."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(chunk.strip()) for chunk in text.split(","))
    except ValueError:
        raise InvalidTuple("Tuple must be comma-separated integers", detail=repr(text)) from None


def _emit(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"Cannot write output: {exc.strerror or exc}", detail=output) from exc
        log.info("Wrote %s", output)
    else:
        sys.stdout.write(text)


def _render(body: BaseModel, fmt: str) -> str:
    if fmt == "json":
        return body.model_dump_json(indent=2)
    if fmt == "text":
        return body.as_text()
    raise UnsupportedFormat(f"Format '{fmt}' is not available for this command")


def _alpha(args) -> SegreChar:
    return parse(args.alpha)


def cmd_enumerate(args) -> int:
    lattice = hl.enumerate_lattice(_alpha(args), args.max_nodes)
    if args.format == "dot":
        _emit(hl.hasse_dot(lattice), args.output)
    else:
        _emit(_render(LatticeBody.from_lattice(lattice), args.format), args.output)
    return 0


def cmd_sons(args) -> int:
    alpha = _alpha(args)
    u = hl.require_member(alpha, _parse_tuple(args.tuple))
    son = hl.unique_son(alpha, u) if any(u) else None
    body = NeighboursBody(
        alpha=list(alpha.parts),
        node=list(u),
        weight=hl.weight(u),
        sons=[list(v) for v in hl.sons(alpha, u)],
        fathers=[list(v) for v in hl.fathers(alpha, u)],
        unique_son=list(son) if son is not None else None,
        dual=list(hl.dual(alpha, u)),
    )
    _emit(_render(body, args.format), args.output)
    return 0


def cmd_special_chains(args) -> int:
    lattice = hl.enumerate_lattice(_alpha(args), args.max_nodes)
    body = ChainList(
        alpha=list(lattice.alpha.parts),
        chains=[ChainBody.from_special(sc) for sc in special_chains(lattice)],
    )
    _emit(_render(body, args.format), args.output)
    return 0


def cmd_riding_chains(args) -> int:
    lattice = hl.enumerate_lattice(_alpha(args), args.max_nodes)
    body = ChainList(
        alpha=list(lattice.alpha.parts),
        chains=[ChainBody.from_riding(rc) for rc in riding_chains(lattice)],
    )
    _emit(_render(body, args.format), args.output)
    return 0


def cmd_quotient(args) -> int:
    alpha = _alpha(args)
    if args.kind:
        congruence = Congruence(CongruenceKind(args.kind), alpha)
    else:
        congruence = Congruence.for_alpha(alpha)
    fl = factor(hl.enumerate_lattice(alpha, args.max_nodes), congruence)
    if args.format == "dot":
        _emit(hl.render_dot(fl.to_graph()), args.output)
    else:
        _emit(_render(FactorBody.from_factor(fl), args.format), args.output)
    return 0


def cmd_iso(args) -> int:
    verdict = decide_iso(_alpha(args), parse(args.beta))
    checks = necessary_conditions(verdict.alpha, verdict.beta)
    body = VerdictBody(
        alpha=list(verdict.alpha.parts),
        beta=list(verdict.beta.parts),
        isomorphic=verdict.isomorphic,
        rule=verdict.rule.value,
        chain_l=verdict.chain_l,
        dim_ok=checks.dim_ok,
        card_ok=checks.card_ok,
    )
    _emit(_render(body, args.format), args.output)
    return 0


def cmd_witness(args) -> int:
    alpha, beta = _alpha(args), parse(args.beta)
    f = build_witness(alpha, beta, args.max_nodes)
    pairs = None
    if f is not None:
        pairs = [(list(u), list(v)) for u, v in sorted(f.items(), reverse=True)]
    body = WitnessBody(alpha=list(alpha.parts), beta=list(beta.parts), pairs=pairs)
    _emit(_render(body, args.format), args.output)
    return 0


def cmd_verify(args) -> int:
    report = verify_range(args.n_max, args.workers, args.max_nodes)
    _emit(_render(report, args.format), args.output)
    if not report.ok:
        print(
            f"Error: verification failed ({len(report.disagreements)} disagreements)",
            file=sys.stderr,
        )
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", default=None, help="Write to this file instead of stdout")
    common.add_argument(
        "--max-nodes", type=int, default=None, help="Override the enumeration / search node bound"
    )

    parser = _Parser(prog="hinv", description="Hyperinvariant subspace lattices V(α)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, fn, summary: str, *, beta: bool = False, fmt: str = "text"
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=summary)
        # Not in the parent: the default differs per subcommand.
        p.add_argument("--format", choices=("text", "json", "dot"), default=fmt)
        if name != "verify":
            p.add_argument("--alpha", required=True, help="Segre characteristic, e.g. 5,2,1")
        if beta:
            p.add_argument("--beta", required=True, help="Second Segre characteristic")
        p.set_defaults(fn=fn)
        return p

    command("enumerate", cmd_enumerate, "List every node of V(α) with its sons")
    p_sons = command("sons", cmd_sons, "Sons, fathers and unique son of one tuple")
    p_sons.add_argument("--tuple", required=True, help="Hypertuple, e.g. 3,2,1")
    command("special-chains", cmd_special_chains, "Special chains ending at zero")
    command("riding-chains", cmd_riding_chains, "Chains riding on the special chains")
    p_quot = command("quotient", cmd_quotient, "Factor lattice by ~2 or ~3")
    p_quot.add_argument("--kind", choices=[k.value for k in CongruenceKind], default=None)
    command("iso", cmd_iso, "Decide V(α) ≅ V(β) by the classification", beta=True)
    command("witness", cmd_witness, "Find an explicit isomorphism", beta=True)
    p_verify = command("verify", cmd_verify, "Cross-check the classification by brute force")
    p_verify.add_argument("--n-max", type=int, default=None, help="Largest dimension to check")
    p_verify.add_argument("--workers", type=int, default=None, help="Process pool size")
    command("hasse", cmd_enumerate, "Hasse diagram of V(α)", fmt="dot")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.INFO if verbose else get_settings().log_level.upper()
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args.verbose)
    try:
        return args.fn(args)
    except HinvError as exc:
        print(f"Error: {exc.message}", file=sys.stderr)
        if exc.detail:
            print(f"  {exc.detail}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
