"""Command line front end: every capability as a reproducible command.

Output is JSON (CSV for the tabular commands), assembled with sorted keys
and no timestamps, so a fixed (command, config, seed) produces byte
identical bytes on every run.  Exit codes: 0 for success or a passing
verdict, 1 for a definite negative verdict, 2 for usage or resource
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import bounds, geometry, spread
from .errors import CapExceededError, SearchBudgetError
from .field import FieldCtx, parse_field_spec
from .poly import Line

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: str | None
    dim: int | None
    seed: int
    cap_matrix: int
    cap_points: int
    budget: int | None
    format: str
    out: str | None


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", help="field spec, e.g. 5 or 3^2")
    p.add_argument("--dim", type=int, help="ambient dimension d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-matrix", type=int, default=spread.DEFAULT_MATRIX_CAP)
    p.add_argument("--cap-points", type=int, default=geometry.DEFAULT_POINT_CAP)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nikodym",
        description="finite-field Nikodym/Kakeya toolkit: verify, search, "
                    "spreadness certificates, bound reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a point set file against a predicate")
    p.add_argument("setfile")
    p.add_argument("--mode", choices=("weak", "nikodym", "kakeya"), default="weak")
    p.add_argument("--policy", choices=("canonical", "random"), default="canonical",
                   help="tie-break for associated lines")
    _common_flags(p)

    p = sub.add_parser("search", help="smallest set passing a predicate (desk scale)")
    p.add_argument("--mode", choices=("weak", "nikodym", "kakeya"), default="weak")
    _common_flags(p)

    p = sub.add_parser("spread", help="spreadness certificates for a point instance")
    p.add_argument("--points", help="point set file, coordinates read as flat-local")
    p.add_argument("--grid", help="grid spec like 3x3 (first a elements per axis)")
    p.add_argument("--random", dest="random_spec", help="random spec k,r")
    p.add_argument("--n", required=True, help="comma list of multiplicity parameters")
    p.add_argument("--max-degree", type=int, default=None,
                   help="fixed D to certify; searched when omitted")
    _common_flags(p)

    p = sub.add_parser("bound", help="dimension-counting bound report")
    p.add_argument("--q", type=int, help="field size (any integer >= 3)")
    p.add_argument("--set", dest="setfile", help="weak Nikodym set file; counts derived")
    p.add_argument("--input", dest="inputfile", help="JSON file with q, d, L, mp")
    p.add_argument("--sweep", help="q range lo:hi (inclusive) instead of one q")
    _common_flags(p)

    p = sub.add_parser("field-info", help="show the deterministic field construction")
    _common_flags(p)

    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command, field=getattr(args, "field", None),
        dim=getattr(args, "dim", None), seed=args.seed,
        cap_matrix=args.cap_matrix, cap_points=args.cap_points,
        budget=args.budget, format=args.format, out=args.out)


def _render_point(ctx: FieldCtx, pt) -> str:
    return ",".join(ctx.render(c) for c in pt)


def _render_line(line: Line) -> dict:
    return {"base": _render_point(line.ctx, line.base),
            "direction": _render_point(line.ctx, line.direction)}


def _emit(payload: dict, config: RunConfig, table=None) -> str:
    if config.format == "csv":
        if table is None:
            raise ValueError("csv format is only available for tabular commands")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in table:
            writer.writerow(row)
        return buf.getvalue()
    doc = {"schema_version": SCHEMA_VERSION, "command": config.command,
           "config": asdict(config), "result": payload}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(text: str, config: RunConfig) -> None:
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _field_ctx(args) -> FieldCtx:
    _require(args.field is not None, "--field is required here")
    return parse_field_spec(args.field)


# -- commands --

def cmd_verify(args) -> int:
    config = _config_from(args)
    S = geometry.load_point_set(args.setfile, cap=args.cap_points)
    result = {"mode": args.mode, "q": S.ctx.order, "d": S.d, "size": S.size}
    if args.mode == "weak":
        r = geometry.is_weak_nikodym(S, policy=args.policy, seed=args.seed)
        result["ok"] = r.ok
        result["policy"] = args.policy
        if r.ok:
            result["associated_lines"] = [
                {"x": _render_point(S.ctx, geometry.point_at(S.ctx, S.d, x)),
                 "line": _render_line(line)}
                for x, line in r.instance.assoc]
        else:
            result["refutation_point"] = _render_point(S.ctx, r.refutation)
    elif args.mode == "nikodym":
        r = geometry.is_nikodym(S, policy=args.policy, seed=args.seed)
        result["ok"] = r.ok
        result["policy"] = args.policy
        if r.ok:
            result["witness_lines"] = [
                {"x": _render_point(S.ctx, geometry.point_at(S.ctx, S.d, x)),
                 "line": _render_line(line)}
                for x, line in r.witness]
        else:
            result["refutation_point"] = _render_point(S.ctx, r.refutation)
    else:
        r = geometry.is_kakeya(S)
        result["ok"] = r.ok
        if r.ok:
            result["direction_witnesses"] = [
                {"direction": _render_point(S.ctx, direction),
                 "line": _render_line(line)}
                for direction, line in r.witness]
        else:
            result["missing_direction"] = _render_point(S.ctx, r.missing_direction)
    _write(_emit(result, config), config)
    return 0 if result["ok"] else 1


def cmd_search(args) -> int:
    config = _config_from(args)
    ctx = _field_ctx(args)
    _require(args.dim is not None and args.dim >= 1, "--dim is required and positive")
    res = geometry.min_weak_nikodym(ctx, args.dim, budget=args.budget, mode=args.mode)
    result = {
        "mode": args.mode, "q": ctx.order, "d": args.dim,
        "size": res.size, "exact": res.exact, "method": res.method,
        "evaluations": res.evaluations,
        "points": [_render_point(ctx, pt) for pt in res.points.points()],
        "note": "exact minimum" if res.exact else "upper bound only",
    }
    _write(_emit(result, config), config)
    return 0


def _spread_instance(args) -> tuple[spread.SpreadInstance, dict]:
    sources = [s for s in (args.points, args.grid, args.random_spec) if s]
    _require(len(sources) == 1, "exactly one of --points/--grid/--random is required")
    if args.points:
        S = geometry.load_point_set(args.points, cap=args.cap_points)
        inst = spread.SpreadInstance(S.ctx, S.d, tuple(S.points()))
        return inst, {"source": "points", "file": args.points}
    if args.grid:
        ctx = _field_ctx(args)
        sizes = [int(x) for x in args.grid.lower().split("x")]
        _require(len(set(sizes)) == 1, "grid axes must share one size")
        inst = spread.canonical_grid(ctx, sizes[0], len(sizes))
        return inst, {"source": "grid", "spec": args.grid}
    ctx = _field_ctx(args)
    parts = args.random_spec.split(",")
    _require(len(parts) == 2, "--random expects k,r")
    k, r = int(parts[0]), int(parts[1])
    inst = spread.random_instance(ctx, k, r, args.seed)
    return inst, {"source": "random", "k": k, "r": r, "seed": args.seed,
                  "note": "seeded sample; heuristic evidence, not a genericity certificate"}


def cmd_spread(args) -> int:
    config = _config_from(args)
    inst, source = _spread_instance(args)
    ns = [int(x) for x in args.n.split(",")]
    _require(all(n >= 1 for n in ns), "all n must be >= 1")
    result = {"k": inst.k, "r": inst.r, "q": inst.ctx.order, "instance": source,
              "contract": "certificates are statements at fixed (n, D) only"}
    table = [("n", "D", "rank", "rows", "columns", "full_column_rank",
              "ratio_num", "ratio_den")]
    if args.max_degree is not None:
        certs = [spread.is_spread_at(inst, n, args.max_degree, args.cap_matrix)
                 for n in ns]
        result["certificates"] = [c.to_dict() for c in certs]
        for c in certs:
            table.append((c.n, c.D, c.rank, c.rows, c.cols, c.full_column_rank,
                          c.ratio.numerator, c.ratio.denominator))
    else:
        trend = [spread.max_forced_degree(inst, n, args.cap_matrix) for n in ns]
        result["trend"] = [t.to_dict() for t in trend]
        kroot = trend[0].k_root if trend else None
        if kroot is not None:
            result["k_root_enclosure"] = {
                "lo": {"num": kroot.lo.numerator, "den": kroot.lo.denominator},
                "hi": {"num": kroot.hi.numerator, "den": kroot.hi.denominator}}
        for t in trend:
            table.append((t.n, t.d_star, "", "", "", "",
                          t.ratio.numerator, t.ratio.denominator))
    _write(_emit(result, config, table=table), config)
    return 0


def cmd_bound(args) -> int:
    config = _config_from(args)
    if args.sweep:
        _require(args.dim is not None, "--dim is required for a sweep")
        lo, hi = (int(x) for x in args.sweep.split(":"))
        sw = bounds.sweep_final_bound(args.dim, range(lo, hi + 1))
        table = [("q", "x_max_lo_num", "x_max_lo_den", "x_max_hi_num", "x_max_hi_den",
                  "ratio_lo_num", "ratio_lo_den", "ratio_hi_num", "ratio_hi_den")]
        for e in sw["entries"]:
            table.append((e["q"],
                          e["x_max"]["lo"]["num"], e["x_max"]["lo"]["den"],
                          e["x_max"]["hi"]["num"], e["x_max"]["hi"]["den"],
                          e["ratio"]["lo"]["num"], e["ratio"]["lo"]["den"],
                          e["ratio"]["hi"]["num"], e["ratio"]["hi"]["den"]))
        _write(_emit(sw, config, table=table), config)
        return 0
    inp = None
    if args.setfile:
        S = geometry.load_point_set(args.setfile, cap=args.cap_points)
        r = geometry.is_weak_nikodym(S)
        if not r.ok:
            result = {"ok": False,
                      "refutation_point": _render_point(S.ctx, r.refutation),
                      "note": "set is not weak Nikodym; no counting data derived"}
            _write(_emit(result, config), config)
            return 1
        inp = bounds.BoundInput.from_nikodym_instance(r.instance)
        q, d = inp.q, inp.d
    elif args.inputfile:
        with open(args.inputfile) as fh:
            raw = json.load(fh)
        inp = bounds.BoundInput(q=int(raw["q"]), d=int(raw["d"]), L=int(raw["L"]),
                                mp=tuple(int(m) for m in raw["mp"]),
                                from_instance=bool(raw.get("from_instance", True)))
        q, d = inp.q, inp.d
    else:
        _require(args.q is not None and args.dim is not None,
                 "--q and --dim are required without an input file")
        q, d = args.q, args.dim
    report = bounds.final_bound(q, d, inp=inp)
    _write(_emit(report.to_dict(), config), config)
    return 0


def cmd_field_info(args) -> int:
    config = _config_from(args)
    ctx = _field_ctx(args)
    mono = []
    for i in range(ctx.k, -1, -1):
        c = ctx.modulus[i]
        if c == 0:
            continue
        if i == 0:
            mono.append(str(c))
        elif i == 1:
            mono.append("x" if c == 1 else f"{c}*x")
        else:
            mono.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
    result = {
        "p": ctx.p, "k": ctx.k, "q": ctx.order,
        "modulus_coeffs_lsb_first": list(ctx.modulus),
        "modulus": "+".join(mono),
        "element_rendering": "fixed-width base-p digits, least significant first",
    }
    if ctx.order <= 64:
        result["elements"] = [ctx.render(e) for e in ctx.elements()]
    _write(_emit(result, config), config)
    return 0


_HANDLERS = {
    "verify": cmd_verify,
    "search": cmd_search,
    "spread": cmd_spread,
    "bound": cmd_bound,
    "field-info": cmd_field_info,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, KeyError, OSError, ZeroDivisionError,
            CapExceededError, SearchBudgetError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
