"""Command line entry point: ``cork-calculus``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .handlebody import HandlePresentation, homology, preset
from .knots import ONE, alexander_family, alexander_from_seifert
from .scenarios import SCENARIOS, KnotInput, run_scenario
from .swalgebra import CONVENTIONS, beta_elliptic


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_knots(spec: str) -> list[KnotInput]:
    """``torus:1,2,3``, ``twist:1,2``, ``seifert:FILE`` or ``unknot``."""
    if spec == "unknot":
        return [KnotInput("U", ONE)]
    kind, _, rest = spec.partition(":")
    if kind == "torus":
        return [KnotInput(f"T(2,{2 * k + 1})", alexander_family("torus_2q", k)) for k in _int_list(rest)]
    if kind == "twist":
        return [KnotInput(f"Tw{k}", alexander_family("twist", k)) for k in _int_list(rest)]
    if kind == "seifert":
        data = json.loads(Path(rest).read_text())
        # a single matrix, or a list of matrices
        mats = data if data and isinstance(data[0], list) and data[0] and isinstance(data[0][0], list) else [data]
        stem = Path(rest).stem
        return [
            KnotInput(f"{stem}[{i}]" if len(mats) > 1 else stem, alexander_from_seifert(m)) for i, m in enumerate(mats)
        ]
    raise argparse.ArgumentTypeError(f"unknown knot spec {spec!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_scenario(args: argparse.Namespace) -> int:
    knots: list[KnotInput] = []
    for spec in args.knots or ["torus:1,2,3"]:
        knots.extend(parse_knots(spec))
    report = run_scenario(args.id, n=args.n, p_list=args.p_list, knots=knots, convention=args.parity)
    _emit(report.to_json() if args.format == "json" else report.render_text(), args.out)
    return 0 if report.passed else 1


def _cmd_homology(args: argparse.Namespace) -> int:
    pres = HandlePresentation.loads(Path(args.file).read_text())
    h = homology(pres)
    if args.format == "json":
        _emit(json.dumps({"name": pres.name, **h.to_dict()}, sort_keys=True, indent=2) + "\n", args.out)
    else:
        f = h.intersection_form
        _emit(
            f"{pres.name}\n  H1 = {h.h1}\n  H2 = {h.h2}\n  H3 = {h.h3}\n  H1(boundary) = {h.boundary_h1}\n"
            f"  euler = {h.euler}\n  form: rank {f.rank}, signature {f.signature}, {f.parity}, {f.definiteness}\n",
            args.out,
        )
    return 0


def _cmd_sw(args: argparse.Namespace) -> int:
    beta = beta_elliptic(args.n, args.m, args.parity)
    if args.format == "json":
        _emit(json.dumps(beta.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = [
            f"E({args.n}) # {args.m} CP2bar: e={beta.e} sigma={beta.sigma} N={beta.count}",
            f"parity convention: {args.parity}" + (" (placeholder values)" if beta.placeholder_values else ""),
        ]
        lines += [f"  {v}: {x}" for v, x in beta.classes]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_preset(args: argparse.Namespace) -> int:
    _emit(preset(args.name, *args.params, framing=args.framing).dumps() + "\n", args.out)
    return 0


def _cmd_alexander(args: argparse.Namespace) -> int:
    knots = parse_knots(args.knot)
    _emit("".join(f"{k.label}: {k.delta}\n" for k in knots), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cork-calculus", description="Exact cork, plug and SW bookkeeping.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--format", choices=("text", "json"), default="text")

    s = sub.add_parser("scenario", help="run a scenario and check its clauses")
    s.add_argument("id", choices=SCENARIOS)
    s.add_argument("--n", type=int, default=2, help="elliptic surface index for knotting scenarios")
    s.add_argument("--p-list", type=_int_list, default=None, help="comma-separated p_i")
    s.add_argument("--knots", action="append", help="torus:k1,k2|twist:k1,k2|seifert:FILE|unknot (repeatable)")
    s.add_argument("--parity", choices=CONVENTIONS, default="paper")
    common(s)
    s.set_defaults(func=_cmd_scenario)

    h = sub.add_parser("homology", help="homology of a presentation file (JSON)")
    h.add_argument("file")
    common(h)
    h.set_defaults(func=_cmd_homology)

    sw = sub.add_parser("sw", help="basic-class sets")
    swsub = sw.add_subparsers(dest="sw_command", required=True)
    b = swsub.add_parser("beta", help="basic classes of E(n) # m CP2bar")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, default=0)
    b.add_argument("--parity", choices=CONVENTIONS, default="paper")
    common(b)
    b.set_defaults(func=_cmd_sw)

    pr = sub.add_parser("preset", help="print a preset presentation as JSON")
    pr.add_argument("name", choices=("Wn", "Wfamily", "Wmn", "Cp", "Dp", "Bp"))
    pr.add_argument("params", type=int, nargs="+")
    pr.add_argument("--framing", type=int, default=0)
    pr.add_argument("--out")
    pr.set_defaults(func=_cmd_preset)

    al = sub.add_parser("alexander", help="print normalized Alexander polynomials")
    al.add_argument("knot", help="torus:k1,k2|twist:k1,k2|seifert:FILE|unknot")
    al.add_argument("--out")
    al.set_defaults(func=_cmd_alexander)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"cork-calculus: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
