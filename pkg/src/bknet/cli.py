"""Command-line front end.

Subcommands: gen-density, gen-net, check-net, schedule, certify, distort,
search, plot.  Exit codes: 0 success, 2 validation error, 1 runtime error.
All output is deterministic given flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import certificate, density, hierarchy, netbuild, plmap, search, svgplot
from .geometry import Rect


class ValidationError(Exception):
    pass


def _parse_window(text: str) -> Rect:
    try:
        x0, y0, x1, y1 = (float(t) for t in text.split(","))
        return Rect(x0, y0, x1, y1)
    except Exception as exc:
        raise ValidationError(f"bad --window '{text}': {exc}") from exc


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_density(path: str) -> density.DensityField:
    try:
        with open(path) as fh:
            return density.field_from_json(fh.read())
    except FileNotFoundError as exc:
        raise ValidationError(f"missing file: {path}") from exc
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"malformed density file {path}: {exc}") from exc


def _json_dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n"


def cmd_gen_density(args) -> int:
    if args.kind == "checkerboard":
        if args.N is None or args.c is None:
            raise ValidationError("checkerboard needs --N and --c")
        field = density.make_checkerboard(args.N, args.c)
    elif args.kind == "hierarchy":
        if args.L is None or args.c is None or args.depth is None:
            raise ValidationError("hierarchy needs --L, --c, --depth")
        consts = certificate.toy_constants(args.L, args.c,
                                           N=args.N or 4, M=args.M or 2)
        field, _ = hierarchy.build_hierarchy(args.L, args.c, args.depth, consts)
    elif args.kind == "limit":
        if args.c is None:
            raise ValidationError("limit needs --c")
        squares = [(Rect(2.0 ** -(k + 1), 2.0 ** -(k + 1),
                         2.0 ** -k, 2.0 ** -k), k)
                   for k in range(1, (args.depth or 2) + 1)]
        field = hierarchy.assemble_limit_density(args.c, squares)
    else:
        raise ValidationError(f"unknown density kind '{args.kind}'")
    _write_or_print(density.field_to_json(field) + "\n", args.out)
    return 0


def _build_net(args) -> tuple[netbuild.NetPlan, netbuild.Net]:
    field = _load_density(args.density)
    if args.K is None or args.K < 0:
        raise ValidationError("--K must be a non-negative integer")
    plan = netbuild.make_plan(field, args.K)
    return plan, netbuild.build_net(plan)


def _default_window(plan: netbuild.NetPlan, margin: float = 2.0) -> Rect:
    if plan.schedule:
        hi = max(e.square.x1 for e in plan.schedule)
    else:
        hi = 8.0
    return Rect(-margin, -margin, hi + margin, hi + margin)


def cmd_gen_net(args) -> int:
    plan, net = _build_net(args)
    window = _parse_window(args.window) if args.window else _default_window(plan)
    pts, tags = net.points_in_window(window)
    _write_or_print(netbuild.net_to_csv(pts, tags), args.out)
    return 0


def cmd_check_net(args) -> int:
    plan, net = _build_net(args)
    window = _parse_window(args.window) if args.window else _default_window(plan)
    sep = netbuild.check_separation(net, window)
    cov = netbuild.check_covering(net, window)
    reports = {k: netbuild.measure_report(net, plan, k)
               for k in range(1, len(plan.schedule) + 1)}
    doc = {"separation_a": sep, "covering_b": cov,
           "measure_report": reports}
    _write_or_print(_json_dump(doc), args.out)
    return 0


def cmd_schedule(args) -> int:
    if args.L is None or args.c is None:
        raise ValidationError("schedule needs --L and --c")
    consts = certificate.schedule_constants(args.L, args.c)
    _write_or_print(_json_dump(certificate.feasibility_report(consts)), args.out)
    return 0


def cmd_certify(args) -> int:
    if not args.infile:
        raise ValidationError("certify needs --in PLMAP.json")
    try:
        with open(args.infile) as fh:
            m = plmap.plmap_from_json(fh.read())
    except FileNotFoundError as exc:
        raise ValidationError(f"missing file: {args.infile}") from exc
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"malformed map file: {exc}") from exc
    if args.L is None or args.c is None or args.N is None or args.M is None:
        raise ValidationError("certify needs --L --c --N --M")
    consts = certificate.toy_constants(args.L, args.c, N=args.N, M=args.M)
    grid = certificate.marked_grid(args.N, args.M)
    rep = certificate.evaluate_stretch(m, grid, consts)
    doc = {
        "A": rep.A,
        "flagged": rep.any_flagged,
        "flagged_pair": rep.flagged_pair,
        "flagged_ratio": rep.flagged_ratio,
        "max_ratio": float(rep.pair_ratios.max()),
        "regular_squares": [bool(b) for b in rep.regular_squares],
    }
    _write_or_print(_json_dump(doc), args.out)
    return 0


def _load_points_csv(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            pts, _ = netbuild.net_from_csv(fh.read())
        return pts
    except FileNotFoundError as exc:
        raise ValidationError(f"missing file: {path}") from exc
    except ValueError as exc:
        raise ValidationError(f"malformed points file {path}: {exc}") from exc


def cmd_distort(args) -> int:
    X = _load_points_csv(args.x)
    Y = _load_points_csv(args.y)
    from . import distortion
    if args.greedy:
        res = distortion.greedy_distortion(X, Y, restarts=args.restarts,
                                           seed=args.seed)
    else:
        res = distortion.pair_distortion(X, Y)
    doc = {"mapping": list(res.mapping), "lip": res.lip,
           "lip_inv": res.lip_inv, "distortion": res.distortion}
    _write_or_print(_json_dump(doc), args.out)
    return 0


def cmd_search(args) -> int:
    for name in ("L", "c", "N", "M"):
        if getattr(args, name) is None:
            raise ValidationError(f"search needs --{name}")
    consts = certificate.toy_constants(args.L, args.c, N=args.N, M=args.M)
    field = density.make_checkerboard(args.N, args.c)
    res = search.search_min_stretch(field, consts, args.budget, args.seed)
    doc = {
        "objective": res.objective,
        "trace": list(res.trace),
        "lip": res.lip,
        "mismatch_area": res.mismatch_area,
        "A": res.stretch.A,
        "flagged": res.stretch.any_flagged,
        "flagged_pair": res.stretch.flagged_pair,
        "map": json.loads(plmap.plmap_to_json(res.plmap)),
    }
    _write_or_print(_json_dump(doc), args.out)
    return 0


def cmd_plot(args) -> int:
    if not args.infile:
        raise ValidationError("plot needs --in FILE")
    if args.kind == "net":
        pts, tags = netbuild.net_from_csv(open(args.infile).read())
        svg = svgplot.net_svg(pts, tags)
    elif args.kind == "map":
        m = plmap.plmap_from_json(open(args.infile).read())
        svg = svgplot.plmap_svg(m)
    else:
        raise ValidationError(f"unknown plot kind '{args.kind}'")
    _write_or_print(svg, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bknet")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--L", type=float)
        sp.add_argument("--c", type=float)
        sp.add_argument("--N", type=int)
        sp.add_argument("--M", type=int)
        sp.add_argument("--K", type=int)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=1000)
        sp.add_argument("--restarts", type=int, default=8)
        sp.add_argument("--window", type=str)
        sp.add_argument("--in", dest="infile", type=str)
        sp.add_argument("--out", type=str)

    sp = sub.add_parser("gen-density")
    sp.add_argument("kind", choices=["checkerboard", "hierarchy", "limit"])
    common(sp)
    sp.set_defaults(func=cmd_gen_density)

    sp = sub.add_parser("gen-net")
    sp.add_argument("--density", required=True)
    common(sp)
    sp.set_defaults(func=cmd_gen_net)

    sp = sub.add_parser("check-net")
    sp.add_argument("--density", required=True)
    common(sp)
    sp.set_defaults(func=cmd_check_net)

    sp = sub.add_parser("schedule")
    common(sp)
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("certify")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("distort")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--greedy", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_distort)

    sp = sub.add_parser("search")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("plot")
    sp.add_argument("kind", choices=["net", "map"])
    common(sp)
    sp.set_defaults(func=cmd_plot)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
