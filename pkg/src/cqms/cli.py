"""Command-line entry point ``cqms``.

    cqms verify   --model M [--config FILE] [--out PATH] [--format json|csv]
    cqms distance --model M --state-a FILE --state-b FILE [--caps FILE] [--config FILE]
    cqms sweep    --model M --axis D|N|M|W --from I --to J [--config FILE]

Exit codes: 0 pass, 1 check failure (or internal solver failure), 2 usage error.
Reports carry ``"schema": 1``; the ``body`` is a deterministic function of the
config and seed, wall-clock timing sits outside it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .amplification import truncate
from .checks import Check, run_suite
from .circle import CircleState, TrigPoly
from .config import MODELS, RunConfig, build_instance, load_json, parse_config
from .exceptions import CqmsError, InvalidInputError
from .extension import ExtensionElement
from .metric import Caps
from .models import podles as pod
from .models import suq2
from .states import state_from_json

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SIG_DIGITS = 12
SWEEP_AXES = {
    "circle": ("D",),
    "amplification": ("N",),
    "toeplitz": ("D", "M"),
    "suq2": ("D", "M", "W"),
    "podles": ("D", "M"),
}


class UsageError(CqmsError):
    pass


def _round(x):
    """Round floats to a fixed number of significant digits, recursively."""
    if isinstance(x, float) or isinstance(x, np.floating):
        x = float(x)
        if not np.isfinite(x) or x == 0.0:
            return x
        return float(f"{x:.{SIG_DIGITS - 1}e}") + 0.0
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def canonical_body(body: dict) -> str:
    return json.dumps(_round(body), sort_keys=True, separators=(",", ":"))


def make_report(command: str, cfg: RunConfig, body: dict, seconds: float) -> dict:
    body = {"tool": "cqms", "version": __version__, "command": command, "config": cfg.echo(), **body}
    text = canonical_body(body)
    return {
        "schema": SCHEMA,
        "body": json.loads(text),
        "body_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "timing": {"seconds": round(seconds, 3)},
    }


def checks_body(checks: list[Check]) -> dict:
    records = [c.to_dict() for c in checks]
    return {"passed": all(c.passed for c in checks), "checks": records}


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(_round(row))
    return buf.getvalue()


def emit(report: dict, rows: list[dict], fmt: str, out: str | None):
    if fmt == "csv":
        _write(_csv(rows), out)
    else:
        _write(json.dumps(report, indent=2, sort_keys=True) + "\n", out)


def _config(args) -> RunConfig:
    payload = load_json(args.config) if args.config else {}
    return parse_config(payload, args.model)


# -- commands ------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = _config(args)
    start = time.perf_counter()
    checks = run_suite(cfg)
    body = checks_body(checks)
    report = make_report("verify", cfg, body, time.perf_counter() - start)
    emit(report, body["checks"], args.format, args.out)
    for c in checks:
        if not c.passed:
            print(f"FAIL {c.name}: lhs={c.lhs!r} {c.relation} rhs={c.rhs!r} (tol {c.tolerance})", file=sys.stderr)
    return EXIT_PASS if body["passed"] else EXIT_FAIL


def _caps_from_file(path: str, cfg: RunConfig) -> Caps:
    payload = load_json(path)
    if not isinstance(payload, dict):
        raise InvalidInputError("caps file must be a JSON object")
    unknown = set(payload) - {"N", "D", "grid", "ideal_degree", "ideal_grid"}
    if unknown:
        raise InvalidInputError(f"field {sorted(unknown)[0]!r}: unknown caps field")
    return Caps(**{**cfg.caps().to_dict(), **payload})


def cmd_distance(args) -> int:
    cfg = _config(args)
    caps = _caps_from_file(args.caps, cfg) if args.caps else cfg.caps()
    instance = build_instance(cfg)
    s = state_from_json(instance, load_json(args.state_a), caps)
    t = state_from_json(instance, load_json(args.state_b), caps)
    start = time.perf_counter()
    d = instance.distance(s, t, caps)
    bound = instance.diameter_bound
    check = Check("distance <= diameter bound", "rho_L(mu, nu) <= diam", d, bound, 1e-6)
    body = {"caps": caps.to_dict(), "distance": d, "diameter_bound": bound, **checks_body([check])}
    report = make_report("distance", cfg, body, time.perf_counter() - start)
    emit(report, [{"distance": d, "diameter_bound": bound}], args.format, args.out)
    return EXIT_PASS if check.passed else EXIT_FAIL


def _axis_values(lo: int, hi: int) -> list[int]:
    if lo < 1 or hi < lo:
        raise UsageError(f"sweep range must satisfy 1 <= from <= to, got {lo}..{hi}")
    out, v = [], lo
    while v <= hi:
        out.append(v)
        v *= 2
    return out


def _sweep_row(cfg: RunConfig, axis: str, value: int, G=None) -> dict:
    model = cfg.model
    if axis == "D":
        c = replace(cfg, D=value, grid=max(cfg.grid, 64 * value))
        instance = build_instance(c)
        d = instance.distance(CircleState.point(0.0), CircleState.point(np.pi), c.caps())
        return {"D": value, "distance": d, "limit": float(np.pi)}
    if axis == "N":
        amp = build_instance(cfg)
        tail = G - truncate(G, value)
        return {
            "N": value,
            "tail_norm": amp.amplified_norm(tail),
            "bound": amp.constant * value ** (2 - amp.k) * amp.lk_seminorm(tail),
        }
    if model == "toeplitz":
        instance = build_instance(replace(cfg, M=value))
        norm = instance.norm(ExtensionElement(instance.zero().G, TrigPoly.cos(1)))
        return {"M": value, "norm_T_cos": norm, "sup_norm_cos": 1.0}
    if model == "suq2":
        c = replace(cfg, **{axis: value})
        res = suq2.relation_residuals(build_instance(c).params)
        return {axis: value, "max_interior_residual": max(res.values())}
    res = {s: pod.relation_residuals(build_instance(replace(cfg, M=value)).params, s) for s in pod.SIGNS}
    return {
        "M": value,
        "max_interior_residual": max(r[n] for r in res.values() for n in pod.RELATIONS[:4]),
        "literal_variant_residual": max(r[pod.LITERAL_RELATION] for r in res.values()),
    }


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.axis not in SWEEP_AXES[cfg.model]:
        raise UsageError(f"axis {args.axis!r} is not available for model {cfg.model!r} "
                         f"(choose from {', '.join(SWEEP_AXES[cfg.model])})")
    values = _axis_values(args.lo, args.hi)
    G = None
    if args.axis == "N":
        amp = build_instance(cfg)
        G = amp.random_matrix_element(cfg.rng(), 2 * values[-1], degree=4)
    start = time.perf_counter()
    rows = [_sweep_row(cfg, args.axis, v, G) for v in values]
    body = {"axis": args.axis, "rows": rows}
    report = make_report("sweep", cfg, body, time.perf_counter() - start)
    emit(report, rows, args.format, args.out)
    return EXIT_PASS


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqms", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"cqms {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", required=True, choices=MODELS)
        p.add_argument("--config", help="JSON parameter record")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run the model's invariant suite")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distance", help="LP distance between two states")
    common(p)
    p.add_argument("--state-a", required=True)
    p.add_argument("--state-b", required=True)
    p.add_argument("--caps", help="JSON caps record (N, D, grid, ideal_degree, ideal_grid)")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("sweep", help="tabulate a quantity along a doubling axis")
    common(p)
    p.add_argument("--axis", required=True, choices=("D", "N", "M", "W"))
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        print(f"cqms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CqmsError as exc:
        print(f"cqms: failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
