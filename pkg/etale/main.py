#!/usr/bin/env python3
"""
Command-line interface.

    python main.py field-info --poly "x^2+5"
    python main.py class-group --poly "x^2+5"
    python main.py cohomology --poly "x^2+5" --n 2
    python main.py cup --poly "x^2+5" --n 2 --x '{"base_poly": "x^2+5", "n": 2, "v": "-1"}' --y bockstein
    python main.py kim --poly "x^2+5" --n 2 --v "-1"
    python main.py scan --disc-range=-500..-3 --n 2 --cache scan_cache.jsonl

JSON goes to stdout. Exit codes: 0 success, 1 mathematical error, 2 usage error.
"""

import argparse
import json
import os
import sys
from typing import Dict, List, Optional
import logging

from dotenv import load_dotenv

from class_unit import class_group
from cohomology import H2Class, bockstein, cup_11, cup_12, ext1_from_json, ext1_presentation, ext_group, h_group
from config import SolverConfig, solver_config
from errors import InvalidExtensionSpec, InvalidIdealSpec, MathematicalError, UsageError
from ideal_arith import ideal_from_json
from kim import kim_invariant, make_kim_job
from nf_core import NumberField, field_from_text
from rel_ext import H1Class, extension_from_spec, validate_ext_spec
from result_cache import get_cache_stats
from scanner import parse_disc_range, scan, write_jsonl
from schemas import (
    ClassGroupOut, CohomologyOut, CupOut, ExplicitExtensionSpec, FieldInfoOut, GroupStructureOut,
    KimResultOut, KummerSpec, ScanRecord,
)

load_dotenv()

logger = logging.getLogger(__name__)

__version__ = "1.0.0"


def _emit(payload: Dict, args) -> None:
    print(json.dumps(payload, indent=None if args.compact else 2, sort_keys=True))


def _summary(text: str, args) -> None:
    if not args.json and sys.stderr.isatty():
        print(text, file=sys.stderr)


def _load_config(args) -> SolverConfig:
    cfg = SolverConfig(args.config) if args.config else solver_config
    if args.seed is not None:
        cfg = cfg.copy_with({"witness": {"seed": args.seed}})
    return cfg


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidIdealSpec(f"{what} is not valid JSON: {e}")


def _parse_extension(text: str, K: NumberField):
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidExtensionSpec(f"extension spec is not valid JSON: {e}")
    ok, kind = validate_ext_spec(spec)
    if not ok:
        raise InvalidExtensionSpec(kind)
    try:
        if kind == "kummer":
            spec = KummerSpec.model_validate(spec).model_dump()
        elif kind == "explicit":
            spec = ExplicitExtensionSpec.model_validate(spec).model_dump()
    except ValueError as e:
        raise InvalidExtensionSpec(str(e))
    return extension_from_spec(spec, K)


# --- subcommands ----------------------------------------------------------------------

def cmd_field_info(args, cfg: SolverConfig) -> int:
    K = field_from_text(args.poly)
    out = FieldInfoOut(
        polynomial=K.poly_text,
        degree=str(K.degree),
        discriminant=str(K.discriminant),
        signature=[str(s) for s in K.signature],
        integral_basis=[[str(c) for c in w.power_basis()] for w in K.basis_elements()],
        roots_of_unity=str(K.torsion.order),
        unit_rank=str(K.unit_rank),
    )
    _emit(out.model_dump(), args)
    _summary(f"{K.poly_text}: degree {K.degree}, discriminant {K.discriminant}, signature {K.signature}", args)
    return 0


def cmd_class_group(args, cfg: SolverConfig) -> int:
    K = field_from_text(args.poly)
    group = class_group(K, cfg)
    data = group.to_json()
    out = ClassGroupOut(polynomial=K.poly_text, snf=data["snf"], class_number=data["class_number"],
                        generators=data["generators"])
    if args.ideal:
        I = ideal_from_json(K, _parse_json(args.ideal, "--ideal"))
        out.ideal_class = [str(c) for c in group.discrete_log(I)]
    _emit(out.model_dump(), args)
    _summary(f"Cl = {group.snf_orders or 'trivial'}, h = {group.order}", args)
    return 0


def cmd_cohomology(args, cfg: SolverConfig) -> int:
    K = field_from_text(args.poly)
    h = [GroupStructureOut(**{k: v for k, v in h_group(K, args.n, i, cfg).to_json().items()
                              if k in GroupStructureOut.model_fields}) for i in range(4)]
    ext = [GroupStructureOut(**{k: v for k, v in ext_group(K, args.n, i, cfg).to_json().items()
                                if k in GroupStructureOut.model_fields}) for i in range(4)]
    out = CohomologyOut(polynomial=K.poly_text, n=str(args.n), ext=ext, h=h)
    _emit(out.model_dump(), args)
    _summary("H^i orders: " + ", ".join(g.order for g in h), args)
    return 0


def cmd_cup(args, cfg: SolverConfig) -> int:
    K = field_from_text(args.poly)
    x = H1Class(_parse_extension(args.x, K), args.n)
    if args.y == "bockstein":
        value = cup_12(x, bockstein(x, cfg), cfg.seed, cfg)
        out = CupOut(n=str(args.n), kind="h3", values=[str(value.value)], witnesses=value.witnesses)
    else:
        try:
            y_spec = json.loads(args.y)
        except json.JSONDecodeError as e:
            raise InvalidExtensionSpec(f"--y is neither 'bockstein' nor JSON: {e}")
        if isinstance(y_spec, dict) and "values" in y_spec:
            presentation = ext1_presentation(K, args.n, cfg)
            y = H2Class(presentation, [int(v) for v in y_spec["values"]])
            value = cup_12(x, y, cfg.seed, cfg)
            out = CupOut(n=str(args.n), kind="h3", values=[str(value.value)], witnesses=value.witnesses)
        else:
            y = H1Class(_parse_extension(args.y, K), args.n)
            table = cup_11(x, y, cfg.seed, cfg)
            out = CupOut(n=str(args.n), kind="h2", values=[str(v) for v in table.values],
                         generators=[g.to_json() for g in table.presentation.generators],
                         witnesses=table.witnesses)
            if args.at:
                pair = ext1_from_json(K, args.n, _parse_json(args.at, "--at"))
                out.value_at = str(table.evaluate(pair))
    if args.at and out.kind != "h2":
        raise UsageError("--at applies to H^2 tables only")
    _emit(out.model_dump(), args)
    _summary(f"cup values: {out.values}", args)
    return 0


def cmd_kim(args, cfg: SolverConfig) -> int:
    K = field_from_text(args.poly)
    job = make_kim_job(K, args.n, K.parse_element(args.v))
    result = kim_invariant(job, args.verify, cfg.seed, cfg)
    out = KimResultOut(**result.to_record())
    _emit(out.model_dump(), args)
    _summary(f"vanishes: {result.vanishes} (Artin value {result.artin_value} in Z/{result.degree})", args)
    return 0


def cmd_scan(args, cfg: SolverConfig) -> int:
    disc_range = parse_disc_range(args.disc_range or cfg.get("scan", "disc_range"))
    n = args.n or int(cfg.get("scan", "n"))

    def validated():
        for record in scan(disc_range, n, args.cache, cfg):
            ScanRecord.model_validate({k: v for k, v in record.items() if k in ScanRecord.model_fields})
            yield record

    count = write_jsonl(validated(), sys.stdout)
    _summary(f"{count} records; cache {get_cache_stats(args.cache)}", args)
    return 0


COMMANDS = {
    "field-info": cmd_field_info,
    "class-group": cmd_class_group,
    "cohomology": cmd_cohomology,
    "cup": cmd_cup,
    "kim": cmd_kim,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="solver config JSON file")
    common.add_argument("--seed", type=int, help="witness seed")
    common.add_argument("--log-level", default=os.getenv("ETALE_LOG_LEVEL", "WARNING"))
    common.add_argument("--json", action="store_true", help="JSON only, no summary on stderr")
    common.add_argument("--compact", action="store_true", help="single-line JSON")

    parser = argparse.ArgumentParser(prog="etale", description="Etale cohomology of number rings")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", parents=[common])
    p.add_argument("--poly", required=True)

    p = sub.add_parser("class-group", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--ideal", help="ideal JSON, {\"hnf\", \"den\"} or {\"two_gens\", \"den\"}; prints its class")

    p = sub.add_parser("cohomology", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("cup", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="extension spec JSON")
    p.add_argument("--y", required=True, help="extension spec JSON, value table JSON, or 'bockstein'")
    p.add_argument("--at", help="Z1 pair JSON {\"a\", \"ideal\"} at which to evaluate an H^2 result")

    p = sub.add_parser("kim", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--verify", action="store_true", help="check against the exhaustive norm image")

    p = sub.add_parser("scan", parents=[common])
    p.add_argument("--disc-range")
    p.add_argument("--n", type=int)
    p.add_argument("--cache")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        if getattr(args, "n", None) is not None and args.n < 1:
            raise UsageError(f"modulus n must be positive, got {args.n}")
        cfg = _load_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except MathematicalError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        # malformed values that slipped past the typed checks
        logger.debug(f"Untyped input error in {args.command}", exc_info=True)
        print(f"UsageError: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
