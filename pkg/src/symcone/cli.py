"""Batch command-line front end.

Thin client over the service handlers: every subcommand builds the same
request model the HTTP API accepts, runs it in process (or against a
running server with --server), and renders the JSON report.  The JSON is
the single source of truth; the human-readable table is derived from it.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import SymconeError
from .service import handlers, models

DEFAULTS = {
    "rank": None,
    "ambient": None,
    "sigma": "identity",
    "samples": 200_000,
    "seed": 42,
    "theta_grid": "0.05,0.1,0.15,0.2,0.25",
    "z_threshold": 4.0,
    "diff_checks": 10,
}


def _merge(args: argparse.Namespace, keys) -> dict:
    """Layer values: explicit flags win over the config file, which wins
    over the built-in defaults."""
    config = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise SymconeError("config file must hold a JSON object")
    merged = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, DEFAULTS.get(key))
        merged[key] = value
    return merged


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(payload: dict, args) -> None:
    text = _canonical_json(payload)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if getattr(args, "json", False):
        sys.stdout.write(text)
    else:
        _render_human(payload)


def _render_human(payload: dict, indent: str = "") -> None:
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _render_human(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}: [{len(value)} rows]")
            for row in value:
                cells = ", ".join(f"{k}={_fmt(v)}" for k, v in row.items())
                print(f"{indent}  - {cells}")
        else:
            print(f"{indent}{key}: {_fmt(value)}")


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return value


def _post(args, path: str, payload: dict) -> dict:
    import httpx

    response = httpx.post(args.server.rstrip("/") + path, json=payload, timeout=600.0)
    if response.status_code >= 400:
        raise SymconeError(f"server error {response.status_code}: {response.text}")
    return response.json()


def _get(args, path: str) -> dict:
    import httpx

    response = httpx.get(args.server.rstrip("/") + path, timeout=600.0)
    if response.status_code >= 400:
        raise SymconeError(f"server error {response.status_code}: {response.text}")
    return response.json()


def _selector_fields(merged) -> dict:
    out = {"algebra": merged["algebra"]}
    if merged.get("rank") is not None:
        out["rank"] = merged["rank"]
    if merged.get("ambient") is not None:
        out["ambient"] = merged["ambient"]
    return out


def cmd_info(args) -> int:
    merged = _merge(args, ["algebra", "rank", "ambient"])
    req = models.InfoRequest(**_selector_fields(merged))
    if args.server:
        payload = _post(args, "/info", req.model_dump())
    else:
        payload = handlers.run_info(req).model_dump()
    _emit(payload, args)
    return 0


def cmd_check_identities(args) -> int:
    merged = _merge(args, ["algebra", "rank", "ambient", "seed"])
    req = models.CheckIdentitiesRequest(
        **_selector_fields(merged), seed=int(merged["seed"])
    )
    if args.server:
        payload = _post(args, "/check-identities", req.model_dump())
    else:
        payload = handlers.run_check_identities(req).model_dump()
    _emit(payload, args)
    return 0 if payload["passed"] else 1


def cmd_verify(args) -> int:
    merged = _merge(
        args,
        [
            "algebra", "rank", "ambient", "p", "pp", "sigma", "samples",
            "seed", "theta_grid", "z_threshold", "diff_checks",
        ],
    )
    if merged["p"] is None or merged["pp"] is None:
        raise SymconeError("verify requires --p and --pp")
    scales = [float(v) for v in str(merged["theta_grid"]).split(",") if v.strip()]
    req = models.VerifyRequest(
        **_selector_fields(merged),
        p=float(merged["p"]),
        p_prime=float(merged["pp"]),
        sigma=str(merged["sigma"]),
        samples=int(merged["samples"]),
        seed=int(merged["seed"]),
        theta_scales=scales,
        z_threshold=float(merged["z_threshold"]),
        diff_checks=int(merged["diff_checks"]),
    )
    if args.server:
        payload = _post(args, "/verify", req.model_dump())
    else:
        payload = handlers.run_verify(req).model_dump()
    _emit(payload, args)
    return 0 if payload["passed"] else 1


def cmd_recover(args) -> int:
    merged = _merge(args, ["a", "b1", "b2", "n"])
    missing = [k for k in ("a", "b1", "b2", "n") if merged[k] is None]
    if missing:
        raise SymconeError(f"recover requires --{', --'.join(missing)}")
    req = models.RecoverRequest(
        a=float(merged["a"]), b1=float(merged["b1"]), b2=float(merged["b2"]), n=int(merged["n"])
    )
    if args.server:
        payload = _post(args, "/recover", req.model_dump())
    else:
        payload = handlers.run_recover(req).model_dump()
    _emit(payload, args)
    return 0


def cmd_dims_table(args) -> int:
    if args.server:
        payload = _get(args, "/dims-table")
    else:
        payload = handlers.run_dims_table().model_dump()
    _emit(payload, args)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser, algebra: bool = True) -> None:
    parser.add_argument("--config", help="JSON file mirroring the flags; flags win")
    parser.add_argument("--server", help="base URL of a running service; run remotely")
    parser.add_argument("--out", help="write the JSON report to this path")
    parser.add_argument("--json", action="store_true", help="print JSON instead of a table")
    if algebra:
        parser.add_argument("--algebra", choices=["sym", "herm", "quat", "spin", "albert"])
        parser.add_argument("--rank", type=int)
        parser.add_argument("--ambient", type=int, help="dim E (spin factors only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcone",
        description="Jordan-algebra kernels and Wishart regression verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="dimensions, split sizes, admissible shapes")
    _add_common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("check-identities", help="run the operator identity suite")
    _add_common(p)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_check_identities)

    p = sub.add_parser("verify", help="Monte Carlo regression verification")
    _add_common(p)
    p.add_argument("--p", type=float, help="shape of X")
    p.add_argument("--pp", type=float, help="shape of Y")
    p.add_argument("--sigma", help="identity | diag:a,b,... | random:SEED")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--theta-grid", dest="theta_grid", help="comma-separated scales of e")
    p.add_argument("--z-threshold", dest="z_threshold", type=float)
    p.add_argument("--diff-checks", dest="diff_checks", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("recover", help="recover (d, r, kind) from constants")
    _add_common(p, algebra=False)
    p.add_argument("--a", type=float)
    p.add_argument("--b1", type=float)
    p.add_argument("--b2", type=float)
    p.add_argument("--n", type=int, help="dimension of the underlying space")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("dims-table", help="dimension table over all supported kinds")
    _add_common(p, algebra=False)
    p.set_defaults(func=cmd_dims_table)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SymconeError, ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
