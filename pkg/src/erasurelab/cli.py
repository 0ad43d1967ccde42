"""Batch command-line front end.

Subcommands: construct, verify, analyze, search, simulate. Every run echoes
its resolved configuration in the output metadata, embeds the tool version
and (where a field is involved) the field modulus, and is byte-for-byte
deterministic given its flags and seed. Exit codes: 0 = pass/found, 1 =
verified failure or nothing found, 2 = usage, parameter, or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    cyclic_report,
    exhaustive_burst_random_search,
    exhaustive_code_search,
    random_field_lower_bound,
    rate_report,
    resolve_workers,
    sparse_field_lower_bound,
    sparsity_minimum,
)
from .channel import ChannelParams, check_wraparound, is_b1b2_code
from .codes import (
    LinearCode,
    construction_one,
    construction_one_binary,
    cyclic_from_h,
    mds_code,
)
from .errors import BadParameters, ErasureLabError
from .streaming import (
    GilbertElliottSource,
    PeriodicSource,
    StreamingParams,
    simulate,
    verify_streaming_code,
)


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _scalar(v) -> str:
    if v is None:
        return ""
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in value):
            rows.append((prefix, " ".join(_scalar(x) for x in value)))
        else:
            for i, x in enumerate(value):
                _flatten(f"{prefix}.{i}", x, rows)
    else:
        rows.append((prefix, _scalar(value)))


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    rows: list[tuple[str, str]] = []
    _flatten("", payload, rows)
    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(rows)
        return
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}")


def _meta(command: str, args: argparse.Namespace, field=None, **extra) -> dict:
    config = {
        k: v for k, v in sorted(vars(args).items()) if k != "func" and not callable(v)
    }
    meta = {
        "tool": "erasurelab",
        "version": __version__,
        "command": command,
        "config": config,
    }
    if field is not None:
        meta["field"] = field.to_json()
    meta.update(extra)
    return meta


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise BadParameters(f"missing required flags: {flags}")


def _parse_coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise BadParameters(f"bad coefficient list {text!r}") from exc


def _load_code(path: str) -> LinearCode:
    try:
        doc = json.loads(Path(path).read_text())
    except ValueError as exc:
        raise BadParameters(f"malformed code file {path}: {exc}") from exc
    try:
        return LinearCode.from_json(doc)
    except (KeyError, TypeError) as exc:
        raise BadParameters(f"malformed code file {path}: {exc!r}") from exc


def _write_code(code: LinearCode, path: str) -> None:
    Path(path).write_text(json.dumps(code.to_json(), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_construct(args) -> tuple[dict, int]:
    scheme = args.scheme
    if scheme == "c1":
        _require(args, "n", "b1", "b2")
        code = construction_one(args.n, args.b1, args.b2, q=args.q)
    elif scheme == "c1bin":
        _require(args, "n", "b1", "b2")
        code = construction_one_binary(args.n, args.b1, args.b2)
    elif scheme == "mds":
        _require(args, "n", "r")
        code = mds_code(args.n, args.r, q=args.q)
    else:  # cyclic
        _require(args, "n", "q", "h")
        code = cyclic_from_h(args.n, args.q, _parse_coeffs(args.h))
    if args.out:
        _write_code(code, args.out)
    return {"meta": _meta("construct", args, code.field), "result": code.to_json()}, 0


def _cmd_verify(args) -> tuple[dict, int]:
    code = _load_code(args.code)
    streaming_mode = args.w is not None or args.a is not None
    burst_mode = args.b1 is not None or args.b2 is not None
    if streaming_mode == burst_mode:
        raise BadParameters("give either --a/--b/--e/--w (streaming) or --b1/--b2")
    if streaming_mode:
        _require(args, "a", "b", "e", "w")
        tau = args.tau if args.tau is not None else args.w - 1
        params = StreamingParams(ChannelParams(args.a, args.b, args.e, args.w), tau)
        report = verify_streaming_code(code, params)
    else:
        _require(args, "b1", "b2")
        if args.wraparound:
            report = check_wraparound(code, args.b1, args.b2)
        else:
            report = is_b1b2_code(code, args.b1, args.b2)
    payload = {"meta": _meta("verify", args, code.field), "result": report.to_json()}
    return payload, 0 if report.verdict else 1


def _cmd_analyze_rate(args) -> tuple[dict, int]:
    _require(args, "a", "b", "e", "w")
    report = rate_report(ChannelParams(args.a, args.b, args.e, args.w))
    return {"meta": _meta("analyze rate", args), "result": report.to_json()}, 0


def _cmd_analyze_cyclic(args) -> tuple[dict, int]:
    _require(args, "n", "q", "h")
    code = cyclic_from_h(args.n, args.q, _parse_coeffs(args.h))
    report = cyclic_report(code)
    payload = {"meta": _meta("analyze cyclic", args, code.field), "result": report.to_json()}
    return payload, 0


def _cmd_analyze_sparsity(args) -> tuple[dict, int]:
    _require(args, "n", "b")
    result = {
        "n": args.n,
        "b": args.b,
        "minimum_nonzeros": sparsity_minimum(args.n, args.b),
        "field_size_lower_bound": sparse_field_lower_bound(args.n, args.b),
    }
    return {"meta": _meta("analyze sparsity", args), "result": result}, 0


def _cmd_analyze_fieldbound(args) -> tuple[dict, int]:
    _require(args, "n", "b", "e")
    result = {
        "n": args.n,
        "b": args.b,
        "e": args.e,
        "field_size_lower_bound": random_field_lower_bound(args.n, args.b, args.e),
        "conditional": True,
    }
    return {"meta": _meta("analyze fieldbound", args), "result": result}, 0


def _cmd_search(args) -> tuple[dict, int]:
    _require(args, "n", "q")
    two_burst = args.b1 is not None or args.b2 is not None
    burst_random = args.b is not None or args.e is not None
    if two_burst == burst_random:
        raise BadParameters("give either --b1/--b2 or --b/--e")
    workers = resolve_workers(args.workers)
    if two_burst:
        _require(args, "b1", "b2")
        code = exhaustive_code_search(args.n, args.b1, args.b2, args.q, workers=workers)
    else:
        _require(args, "b", "e")
        code = exhaustive_burst_random_search(args.n, args.b, args.e, args.q, workers=workers)
    meta = _meta("search", args, None if code is None else code.field, threads=workers)
    if code is None:
        return {"meta": meta, "result": {"found": False}}, 1
    if args.out:
        _write_code(code, args.out)
    return {"meta": meta, "result": {"found": True, "code": code.to_json()}}, 0


def _cmd_simulate(args) -> tuple[dict, int]:
    code = _load_code(args.code)
    _require(args, "a", "b", "e", "w")
    tau = args.tau if args.tau is not None else args.w - 1
    params = StreamingParams(ChannelParams(args.a, args.b, args.e, args.w), tau)
    if args.source == "periodic":
        _require(args, "periods")
        source = PeriodicSource(args.periods)
    else:
        _require(args, "slots", "p_gb", "p_bg", "p_loss_good", "p_loss_bad")
        source = GilbertElliottSource(
            args.p_gb, args.p_bg, args.p_loss_good, args.p_loss_bad, args.slots
        )
    summary = simulate(code, params, source, args.seed)
    failed = summary["messages_failed"] or summary["deadline_misses"]
    payload = {"meta": _meta("simulate", args, code.field), "result": summary}
    return payload, 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv", "table"), default="table",
        help="output format (default: table)",
    )

    parser = argparse.ArgumentParser(
        prog="erasurelab",
        description="Construct, verify, analyze, search, and simulate erasure "
        "codes for burst+random loss.",
    )
    parser.add_argument("--version", action="version", version=f"erasurelab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a code and print/save it")
    p.add_argument("--scheme", choices=("c1", "c1bin", "mds", "cyclic"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--b1", type=int)
    p.add_argument("--b2", type=int)
    p.add_argument("--r", type=int, help="parity rows (mds scheme)")
    p.add_argument("--q", type=int, help="field size override")
    p.add_argument("--h", help="comma-separated polynomial coefficients, ascending")
    p.add_argument("--out", help="write the code file here")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check a code against a pattern family")
    p.add_argument("--code", required=True, help="code file from construct/search")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--tau", type=int, help="decoding deadline (default w-1)")
    p.add_argument("--b1", type=int)
    p.add_argument("--b2", type=int)
    p.add_argument("--wraparound", action="store_true", help="let bursts wrap cyclically")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("analyze", help="rate, cyclic, sparsity, and field-size reports")
    asub = p.add_subparsers(dest="kind", required=True)
    pa = asub.add_parser("rate", parents=[common])
    pa.add_argument("--a", type=int)
    pa.add_argument("--b", type=int)
    pa.add_argument("--e", type=int)
    pa.add_argument("--w", type=int)
    pa.set_defaults(func=_cmd_analyze_rate)
    pa = asub.add_parser("cyclic", parents=[common])
    pa.add_argument("--n", type=int)
    pa.add_argument("--q", type=int)
    pa.add_argument("--h", help="comma-separated polynomial coefficients, ascending")
    pa.set_defaults(func=_cmd_analyze_cyclic)
    pa = asub.add_parser("sparsity", parents=[common])
    pa.add_argument("--n", type=int)
    pa.add_argument("--b", type=int)
    pa.set_defaults(func=_cmd_analyze_sparsity)
    pa = asub.add_parser("fieldbound", parents=[common])
    pa.add_argument("--n", type=int)
    pa.add_argument("--b", type=int)
    pa.add_argument("--e", type=int)
    pa.set_defaults(func=_cmd_analyze_fieldbound)

    p = sub.add_parser("search", parents=[common], help="exhaustive code search")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--b1", type=int)
    p.add_argument("--b2", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--workers", type=int, help="parallel workers (capped by ERASURELAB_THREADS)")
    p.add_argument("--out", help="write the found code file here")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("simulate", parents=[common], help="stream a code over a loss source")
    p.add_argument("--code", required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--source", choices=("periodic", "ge"), required=True)
    p.add_argument("--periods", type=int)
    p.add_argument("--slots", type=int)
    p.add_argument("--p-gb", type=float, help="good-to-bad transition probability")
    p.add_argument("--p-bg", type=float, help="bad-to-good transition probability")
    p.add_argument("--p-loss-good", type=float)
    p.add_argument("--p-loss-bad", type=float)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    fmt = args.format
    try:
        payload, rc = args.func(args)
    except ErasureLabError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, fmt)
        return 2
    except OSError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, fmt)
        return 2
    _emit(payload, fmt)
    return rc


def run() -> None:
    raise SystemExit(main())
