from __future__ import annotations

import argparse
from typing import Callable, List, NoReturn

from ..errors import UsageError

PROG = "skwb"


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError (with the usage text) instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


def _list_of(cast: Callable[[str], object]) -> Callable[[str], List[object]]:
    def parse(text: str) -> List[object]:
        try:
            return [cast(part) for part in text.split(",") if part.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}") from e

    parse.__name__ = f"{cast.__name__}_list"
    return parse


int_list = _list_of(int)
float_list = _list_of(float)


def function_tables(text: str) -> List[List[float]]:
    """`1,0;0,1` -> one value table per receiver."""
    return [float_list(part) for part in text.split(";") if part.strip()]


def _parent(**kwargs) -> argparse.ArgumentParser:
    return argparse.ArgumentParser(add_help=False, **kwargs)


def _global_options() -> argparse.ArgumentParser:
    p = _parent()
    g = p.add_argument_group("run options")
    g.add_argument("--config", action="append", default=[], metavar="YAML", help="Extra config file merged over the defaults (repeatable).")
    g.add_argument("--units", choices=("bits", "nats"), default=None, help="Unit of rates in and out (default from config: bits).")
    g.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"), default=None)
    g.add_argument("--workers", type=int, default=None, help="Parallel workers (default $SKWB_THREADS or 1).")
    return p


def _source_options() -> argparse.ArgumentParser:
    p = _parent()
    p.add_argument("--source", required=True, metavar="FILE", help="Source document (YAML or JSON).")
    return p


def _scheme_options() -> argparse.ArgumentParser:
    p = _parent()
    g = p.add_argument_group("auxiliary scheme")
    g.add_argument("--scheme", default=None, metavar="FILE", help="Scheme document with u_given_z and s_given_uz tables.")
    g.add_argument("--u", default="z", help="U preset when no --scheme: z, const or x<j> (default z).")
    g.add_argument("--s", default="const", help="S_l preset(s): const or z, one value or one per receiver (default const).")
    return p


def _size_options() -> argparse.ArgumentParser:
    p = _parent()
    g = p.add_argument_group("codebook")
    g.add_argument("--I", dest="I_list", type=int_list, required=True, metavar="I0,...,Im")
    g.add_argument("--J", dest="J_list", type=int_list, required=True, metavar="J1,...,Jm")
    g.add_argument("--order", type=int_list, default=[], metavar="L1,...,Lm", help="Receiver labels in codebook order.")
    g.add_argument("--n", type=int, default=1, help="Blocklength (default 1).")
    return p


def _search_options() -> argparse.ArgumentParser:
    p = _parent()
    g = p.add_argument_group("search")
    g.add_argument("--restarts", type=int, default=None)
    g.add_argument("--iterations", type=int, default=None)
    g.add_argument("--u-card", type=int, default=None, help="|U| used by the search.")
    g.add_argument("--seed", type=int, default=None, help="Root seed of the search (default from config: 0).")
    return p


def _simulation_options() -> argparse.ArgumentParser:
    p = _parent()
    g = p.add_argument_group("simulation")
    g.add_argument("--codebook-seed", type=int, default=0)
    return p


def build_parser() -> WorkbenchArgumentParser:
    common = _global_options()
    source = _source_options()
    scheme = _scheme_options()
    sizes = _size_options()
    search = _search_options()
    sim = _simulation_options()

    parser = WorkbenchArgumentParser(
        prog=PROG,
        description="Secret key generation workbench: rate regions, one-shot bounds, protocol simulation and converses.",
    )
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=WorkbenchArgumentParser)
    groups.required = True

    def group(name: str, help_text: str) -> argparse._SubParsersAction:
        sub = groups.add_parser(name, help=help_text)
        actions = sub.add_subparsers(dest="action", metavar="ACTION", parser_class=WorkbenchArgumentParser)
        actions.required = True
        return actions

    # region ----------------------------------------------------------------
    region = group("region", "Rate region extreme points and key rate maximization")
    for name, help_text in (
        ("theorem1", "General region for a scheme (U and S_l)"),
        ("maxform", "Max-form region of the one-shot scheme"),
        ("theorem2", "Omniscient-helper region for Q_{U|X^m}"),
        ("oneway", "One-way region (m = 1)"),
        ("cr", "Common-randomness region"),
    ):
        region.add_parser(name, help=help_text, parents=[common, source, scheme])
    region.add_parser("capacity", help="Key capacity without rate constraints", parents=[common, source])
    maximize = region.add_parser("maximize", help="Largest key rate under rate budgets", parents=[common, source, search])
    maximize.add_argument("--budgets", type=float_list, required=True, metavar="B1,...,Bm")
    maximize.add_argument("--s-card", type=int, default=None, help="|S_l| used by the search.")

    # oneshot ---------------------------------------------------------------
    oneshot = group("oneshot", "One-shot achievability bounds")
    oneshot.add_parser("bounds", help="Error and leakage bounds for codebook sizes", parents=[common, source, scheme, sizes])
    params = oneshot.add_parser("params", help="Codebook sizes for a blocklength", parents=[common, source, scheme])
    params.add_argument("--n", type=int, required=True, help="Blocklength.")
    params.add_argument("--beta", type=float, required=True, help="Rate slack.")
    params.add_argument("--covering-slack", action="store_true", help="Also subtract beta from the covering rate.")

    # simulate --------------------------------------------------------------
    simulate = group("simulate", "Simulation of the likelihood-encoder scheme")
    simulate.add_parser("exact", help="Exact metrics of one codebook", parents=[common, source, scheme, sizes, sim])
    mc = simulate.add_parser("mc", help="Monte Carlo metrics of one codebook", parents=[common, source, scheme, sizes, sim])
    mc.add_argument("--trials", type=int, default=10_000)
    mc.add_argument("--source-seed", type=int, default=0)
    sound = simulate.add_parser("soundness", help="Codebook-averaged error against the one-shot bound", parents=[common, source, scheme, sizes, sim])
    sound.add_argument("--seeds", type=int, default=20, help="Number of codebook seeds.")

    # hc --------------------------------------------------------------------
    hc = group("hc", "Hypercontractivity and strong data processing")
    check = hc.add_parser("check", help="Search for a violating channel", parents=[common, source, search])
    check.add_argument("--p", type=float_list, required=True, metavar="P1,...,Pm")
    functional = hc.add_parser("functional", help="Functional inequality check or random falsification", parents=[common, source])
    functional.add_argument("--p", type=float_list, required=True, metavar="P1,...,Pm")
    functional.add_argument("--functions", type=function_tables, default=None, metavar="F1;...;Fm")
    functional.add_argument("--trials", type=int, default=10_000)
    functional.add_argument("--seed", type=int, default=0)
    hc.add_parser("sdpi", help="Contraction coefficient s*", parents=[common, source, search])

    # converse --------------------------------------------------------------
    converse = group("converse", "Hypercontractivity converse bounds")
    theorem4 = converse.add_parser("theorem4", help="Lower bound on the key distance", parents=[common])
    margin = converse.add_parser("margin", help="Zero-rate margin", parents=[common])
    for sub in (theorem4, margin):
        sub.add_argument("--K", type=int, required=True, help="|K|")
        sub.add_argument("--W", type=int_list, required=True, metavar="W1,...,Wm")
        sub.add_argument("--p", type=float_list, required=True, metavar="P1,...,Pm")
    margin.add_argument("--n", type=int, default=None, help="Also report the per-symbol form.")

    return parser
