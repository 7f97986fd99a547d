from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import TYPE_CHECKING, Any, Dict, Optional, Sequence, TextIO, Tuple

from colorama import Fore, Style, init as colorama_init
from pydantic import ValidationError

from ..errors import UsageError, WorkbenchError
from ..utils.config_loader import DEFAULT_PATHS, load_settings
from ..utils.settings import WorkbenchSettings
from .parser import build_parser
from .report import RunReport, convert_units, emit, to_nats
from .schemes import build_scheme, build_u_channel
from .source_file import parse_source

if TYPE_CHECKING:
    from app import WorkbenchApp

logger = logging.getLogger(__name__)

_U_ONLY = {"theorem2", "oneway", "cr"}


def _override(model: Any, **updates: Any) -> Any:
    """Validated copy of a settings model with the non-None updates applied."""
    values = {k: v for k, v in updates.items() if v is not None}
    if not values:
        return model
    try:
        return type(model).model_validate({**model.model_dump(), **values})
    except ValidationError as ve:
        raise UsageError(f"invalid option value: {ve}") from ve


def resolve_settings(
    args: argparse.Namespace,
    base: WorkbenchSettings,
    base_paths: Sequence[str] = DEFAULT_PATHS,
) -> WorkbenchSettings:
    """Defaults < config files < --config files < flags."""
    settings = load_settings(list(base_paths) + list(args.config)) if args.config else base
    flags = {
        "restarts": getattr(args, "restarts", None),
        "iterations": getattr(args, "iterations", None),
        "u_card": getattr(args, "u_card", None),
        "seed": getattr(args, "seed", None),
    }
    search, hc_search = settings.search, settings.hc_search
    if args.group == "region":
        search = _override(search, s_card=getattr(args, "s_card", None), workers=args.workers, **flags)
    elif args.group == "hc" and args.action != "functional":
        hc_search = _override(hc_search, workers=args.workers, **flags)
    output = _override(settings.output, units=args.units)
    log = _override(settings.logging, level=args.log_level)
    return settings.model_copy(update={"search": search, "hc_search": hc_search, "output": output, "logging": log})


def _source_payload(args: argparse.Namespace) -> Dict[str, Any]:
    source = parse_source(args.source)
    payload: Dict[str, Any] = {"source": source}
    if hasattr(args, "scheme"):
        if args.group == "region" and args.action in _U_ONLY:
            payload["q_u"] = build_u_channel(source, document=args.scheme, u=args.u)
        else:
            payload["scheme"] = build_scheme(source, document=args.scheme, u=args.u, s=args.s)
    return payload


def build_payload(args: argparse.Namespace, settings: WorkbenchSettings) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Command input and the seeds that determine its output."""
    units = settings.output.units
    group, action = args.group, args.action

    if group == "converse":
        payload: Dict[str, Any] = {"K": args.K, "W": args.W, "p": args.p}
        if action == "margin":
            payload["blocklength"] = args.n
        return payload, {}

    payload = _source_payload(args)
    seeds: Dict[str, int] = {}

    if group == "region" and action == "maximize":
        payload["budgets"] = [to_nats(b, units) for b in args.budgets]
        payload["search"] = settings.search
        seeds["search"] = settings.search.seed
    elif group == "oneshot" and action == "bounds":
        payload.update(I_list=args.I_list, J_list=args.J_list, order=args.order, blocklength=args.n)
    elif group == "oneshot" and action == "params":
        payload.update(blocklength=args.n, beta=to_nats(args.beta, units), covering_slack=args.covering_slack)
    elif group == "simulate":
        payload.update(
            I_list=args.I_list,
            J_list=args.J_list,
            order=args.order,
            blocklength=args.n,
            codebook_seed=args.codebook_seed,
            budget=settings.simulation,
            workers=args.workers,
        )
        seeds["codebook"] = args.codebook_seed
        if action == "mc":
            payload.update(trials=args.trials, source_seed=args.source_seed)
            seeds["source"] = args.source_seed
        elif action == "soundness":
            payload["seeds"] = args.seeds
    elif group == "hc":
        if action == "functional":
            payload.update(p=args.p, functions=args.functions, trials=args.trials, seed=args.seed)
            seeds["functions"] = args.seed
        else:
            if action == "check":
                payload["p"] = args.p
            payload["search"] = settings.hc_search
            seeds["search"] = settings.hc_search.seed
    return payload, seeds


def dispatch(argv: Sequence[str], app: "WorkbenchApp") -> RunReport:
    """Parse `argv`, run the mapped command and build its report (nothing is printed)."""
    args = build_parser().parse_args(list(argv))
    settings = resolve_settings(args, app.settings, app.config_paths)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    command = app.registry.get_command(f"{args.group}.{args.action}")
    payload, seeds = build_payload(args, settings)

    started = time.perf_counter()
    output = command(payload)
    wall_time = time.perf_counter() - started
    logger.info("%s finished in %.3f s", command.name, wall_time)

    units = settings.output.units
    arguments = {k: v for k, v in vars(args).items() if k not in ("group", "action")}
    return RunReport(
        command=list(argv),
        subcommand=command.name,
        resolved_config={"settings": settings.model_dump(mode="json"), "arguments": arguments},
        seeds=seeds,
        units=units,
        results=convert_units(output.model_dump(mode="json"), command.nats_fields, units),
        wall_time=wall_time,
    )


def _diagnose(stream: TextIO, message: str, colour: str = Fore.RED) -> None:
    stream.write(colour + message + Style.RESET_ALL + "\n")


def run(
    argv: Sequence[str],
    app: "WorkbenchApp",
    *,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Dispatch, print the report and map failures to exit statuses."""
    colorama_init()
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        report = dispatch(argv, app)
    except UsageError as e:
        _diagnose(err, f"usage error: {e}")
        return e.exit_status
    except WorkbenchError as e:
        cause = getattr(e, "cause", None)
        _diagnose(err, f"{type(e).__name__}: {e}")
        if cause is not None:
            _diagnose(err, f"  caused by {type(cause).__name__}", Fore.YELLOW)
        return getattr(e, "exit_status", 1)
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        _diagnose(err, f"error: {e}")
        return 1
    emit(report, out, indent=report.resolved_config["settings"]["output"]["indent"])
    return 0

