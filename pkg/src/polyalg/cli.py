"""Command-line front end: ``polyalg <command> ...``.

Every command prints JSON (one object, or JSON lines for streams) on stdout.
Exit codes: 0 all checks pass, 2 a theorem check failed, 3 a budget ran out,
4 the input was rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Iterable, Optional, Sequence

from polyalg.algebra import PAIR_BUDGET, initial_ideal
from polyalg.classify import classify, enumerate_closed_paths, enumerate_weakly_closed_paths
from polyalg.complex import FACET_BUDGET, krull_report
from polyalg.errors import BudgetExceeded, InputError, PolyalgError
from polyalg.grid import Point, Polyomino, parse_polyomino
from polyalg.hilbert import Pipeline, build_pipeline, headline_check, konig_check
from polyalg.order import RULES, Labelling, label_vertices, search_labelling
from polyalg.rook import BLOCK, CONVENTIONS, phi_check, rook_configurations, rook_polynomial
from polyalg.shelling import (
    ShellingCertificate,
    h_from_restrictions,
    search_shelling,
    shelling_order,
    verify_shelling,
)

OK, MISMATCH, BUDGET, BAD_INPUT = 0, 2, 3, 4


# ---------------------------------------------------------------- input / output

def load_polyomino(path: str) -> Polyomino:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read polyomino from {path}: {exc}") from exc
    return parse_polyomino(data)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _pt(p: Point) -> list[int]:
    return [p.x, p.y]


def _vertex_name(p: Point, lab: Optional[Labelling]) -> str:
    if lab is not None:
        return lab.label(p)
    return f"({p.x},{p.y})"


def macaulay2_text(pipe: Pipeline) -> str:
    """Plain-text ring and ideal, variables listed from greatest to least."""
    names = {}
    for p in pipe.order.ranked:
        if pipe.lab is None:
            names[p] = f"v_({p.x},{p.y})"
        else:
            label = pipe.lab.label(p)
            names[p] = f"y_{label[:-1]}" if label.endswith("'") else ("w" if label == "w" else f"x_{label}")
    ranked = pipe.order.ranked

    def mono(m) -> str:
        return "*".join(names[ranked[r]] + (f"^{e}" if e > 1 else "") for r, e in m)

    gens = [f"{mono(g.lead)}-{mono(g.trail)}" for g in pipe.gens]
    variables = ", ".join(names[p] for p in ranked)
    return f"R = QQ[{variables}, MonomialOrder => Lex];\nI = ideal({', '.join(gens)});\n"


def _maybe_export(args, pipe: Pipeline) -> None:
    if getattr(args, "export_macaulay2", None):
        Path(args.export_macaulay2).write_text(macaulay2_text(pipe))


def _pipeline(args, P: Polyomino, lab: Optional[Labelling] = None) -> Pipeline:
    return build_pipeline(
        P, lab, y2_rule=args.rule, facet_budget=args.budget_facets, pair_budget=args.budget_pairs
    )


# ---------------------------------------------------------------- commands

def cmd_classify(args) -> int:
    _emit(classify(load_polyomino(args.file)).to_json())
    return OK


def cmd_order(args) -> int:
    P = load_polyomino(args.file)
    lab = search_labelling(P) if args.fallback_search else label_vertices(P)
    order = lab.order(args.rule)
    _emit({"labels": lab.to_json(), "ranking": [lab.label(p) for p in order.ranked], "rule": args.rule})
    return OK


def cmd_groebner(args) -> int:
    P = load_polyomino(args.file)
    lab = search_labelling(P) if args.order_from == "search" else None
    pipe = _pipeline(args, P, lab)
    _maybe_export(args, pipe)
    ranked = pipe.order.ranked
    ideal = initial_ideal(pipe.gens, pipe.order)
    ok = pipe.gb_ok
    _emit(
        {
            "is_groebner": ok,
            "basis": [[_pt(ranked[r]) for r, _ in g.lead] + [_pt(ranked[r]) for r, _ in g.trail] for g in pipe.gens],
            "initial_ideal": sorted(
                sorted(_vertex_name(ranked[r], pipe.lab) for r, _ in m) for m in ideal.generators
            ),
            "squarefree": ideal.squarefree,
            "quadratic": ideal.quadratic,
        }
    )
    return OK if ok and ideal.squarefree and ideal.quadratic else MISMATCH


def cmd_complex(args) -> int:
    P = load_polyomino(args.file)
    pipe = _pipeline(args, P)
    _maybe_export(args, pipe)
    cx = pipe.complex
    krull = krull_report(P, cx.facets)
    _emit(
        {
            "facets": [sorted(_vertex_name(v, pipe.lab) for v in f) for f in cx.facets],
            "f_vector": cx.f_vector(),
            "h_vector": cx.h_vector(),
            "pure": cx.pure,
            "dimension": cx.dimension,
            "krull": krull,
        }
    )
    return OK if cx.pure and krull["equal"] else MISMATCH


def certificate_json(cert: ShellingCertificate, lab: Optional[Labelling]) -> dict:
    name = lambda v: _vertex_name(v, lab)  # noqa: E731
    corners = cert.corner_sets()
    return {
        "facets": [sorted(map(name, f)) for f in cert.ordered_facets],
        "restriction_sets": [sorted(map(name, r)) for r in cert.restriction_sets],
        "steps": [
            [
                {"kind": s.kind, "corner": name(s.corner), "triple": sorted(map(name, s.triple)), "cell": list(s.step_cell)}
                for s in steps
            ]
            for steps in cert.steps_per_facet
        ],
        "corner_mismatches": sum(c != r for c, r in zip(corners, cert.restriction_sets)),
    }


def _shell(args, P: Polyomino, pipe: Pipeline) -> tuple[dict, bool]:
    facets = pipe.complex.facets
    if args.generic or pipe.lab is None:
        order = search_shelling(facets)
        if order is None:
            return {"method": "search", "found": False, "verified": False}, False
        verdict = verify_shelling(order)
        name = lambda v: _vertex_name(v, pipe.lab)  # noqa: E731
        out = {
            "method": "search",
            "found": True,
            "verified": verdict.ok,
            "facets": [sorted(map(name, f)) for f in order],
            "restriction_sets": [sorted(map(name, r)) for r in verdict.restriction_sets],
        }
        out["h_from_restrictions"] = h_from_restrictions(verdict.restriction_sets)
        return out, verdict.ok
    cert = shelling_order(P, pipe.lab, facets, pipe.complex.graph)
    verdict = verify_shelling(cert.ordered_facets)
    out = {"method": "constructed", "verified": verdict.ok, "witness": verdict.witness}
    out.update(certificate_json(cert, pipe.lab))
    out["h_from_restrictions"] = h_from_restrictions(cert.restriction_sets)
    return out, verdict.ok


def cmd_shell(args) -> int:
    P = load_polyomino(args.file)
    pipe = _pipeline(args, P)
    out, ok = _shell(args, P, pipe)
    _emit(out)
    return OK if ok else MISMATCH


def cmd_rook(args) -> int:
    P = load_polyomino(args.file)
    rp = rook_polynomial(P, args.convention)
    _emit(
        {
            "polynomial": str(rp),
            "coefficients": list(rp.coefficients),
            "rook_number": rp.rook_number,
            "convention": args.convention,
        }
    )
    return OK


def cmd_phi(args) -> int:
    P = load_polyomino(args.file)
    pipe = _pipeline(args, P)
    if pipe.lab is None:
        raise InputError("phi needs a closed or weakly closed path")
    report = phi_check(P, pipe.lab, pipe.complex.facets, args.convention)
    _emit(report.to_json())
    return OK if report.bijection_ok else MISMATCH


def cmd_hseries(args) -> int:
    P = load_polyomino(args.file)
    pipe = _pipeline(args, P)
    _maybe_export(args, pipe)
    rep = headline_check(P, args.convention, pipe)
    _emit(rep.to_json())
    return OK if rep.equal and rep.degree_eq_rook_number else MISMATCH


def cmd_gen(args) -> int:
    source = enumerate_closed_paths if args.cls == "closed-path" else enumerate_weakly_closed_paths
    for P in source(args.max_cells):
        _emit(P.canonical().to_json())
    return OK


def _corpus(max_cells: int, weakly_cells: int) -> Iterable[tuple[str, Polyomino]]:
    if max_cells >= 8:
        for P in enumerate_closed_paths(max_cells):
            yield "closed-path", P
    if weakly_cells >= 7:
        for P in enumerate_weakly_closed_paths(weakly_cells):
            yield "weakly", P


def run_instance(P: Polyomino, kind: str, args) -> dict:
    t = time.perf_counter()
    rec: dict = {"kind": kind, "cells": len(P), "polyomino": P.canonical().to_json()["cells"]}
    try:
        cl = classify(P)
        rec["zigzag"] = cl.zigzag is not None
        pipe = _pipeline(args, P)
        ideal = initial_ideal(pipe.gens, pipe.order)
        rec["groebner"] = pipe.gb_ok and ideal.squarefree and ideal.quadratic
        cx = pipe.complex
        krull = krull_report(P, cx.facets)
        rec["complex"] = {"facets": len(cx.facets), "pure": cx.pure, "krull_ok": krull["equal"]}
        shell, shell_ok = _shell(args, P, pipe)
        rec["shell"] = {
            "method": shell["method"],
            "verified": shell_ok,
            "corner_mismatches": shell.get("corner_mismatches"),
        }
        h_restr = shell.get("h_from_restrictions")
        rep = headline_check(P, args.convention, pipe)
        rec["hseries"] = rep.to_json()
        rec["h_from_restrictions_ok"] = h_restr is not None and tuple(h_restr) == rep.h
        rec["konig"] = konig_check(P, pipe.lab, pipe.gens, pipe.order)
        rec["pass"] = all(
            (
                rec["groebner"],
                cx.pure,
                krull["equal"],
                shell_ok,
                rep.equal,
                rep.degree_eq_rook_number,
                rep.krull_ok,
                rec["h_from_restrictions_ok"],
                rec["konig"],
            )
        )
        rec["status"] = "pass" if rec["pass"] else "mismatch"
        if args.figures:
            render_figure(P, pipe.lab, Path(args.figures) / f"{kind}-{len(P)}-{_slug(P)}.{args.figure_format}")
    except BudgetExceeded as exc:
        rec.update(status="budget", error=str(exc), **{"pass": False})
    except PolyalgError as exc:
        rec.update(status="error", error=f"{type(exc).__name__}: {exc}", **{"pass": False})
    rec["seconds"] = round(time.perf_counter() - t, 3)
    return rec


def _slug(P: Polyomino) -> str:
    return format(abs(hash(P.key())) % 16**8, "08x")


def cmd_run_all(args) -> int:
    if args.figures:
        Path(args.figures).mkdir(parents=True, exist_ok=True)
    counts = {"pass": 0, "mismatch": 0, "budget": 0, "error": 0}
    for kind, P in _corpus(args.max_cells, args.weakly_cells):
        rec = run_instance(P, kind, args)
        counts[rec["status"]] += 1
        _emit(rec)
    _emit({"summary": counts, "instances": sum(counts.values())})
    if counts["mismatch"] or counts["error"]:
        return MISMATCH
    if counts["budget"]:
        return BUDGET
    return OK


# ---------------------------------------------------------------- rendering

def render_ascii(P: Polyomino, marks: Optional[dict[Point, str]] = None) -> str:
    """Cells as boxes filled with '#'; vertices drawn '+' unless ``marks`` gives a character."""
    marks = marks or {}
    x0, y0, x1, y1 = P.bbox
    rows = []
    for y in range(y1, y0 - 1, -1):
        line = []
        for x in range(x0, x1 + 1):
            p = Point(x, y)
            line.append(marks.get(p, "+") if p in P.vertices else " ")
            if x < x1:
                line.append("---" if (x, y - 1) in P.cells or (x, y) in P.cells else "   ")
        rows.append("".join(line).rstrip())
        if y > y0:
            line = []
            for x in range(x0, x1 + 1):
                line.append("|" if (x - 1, y - 1) in P.cells or (x, y - 1) in P.cells else " ")
                if x < x1:
                    line.append(" # " if (x, y - 1) in P.cells else "   ")
            rows.append("".join(line).rstrip())
    return "\n".join(rows)


def render_figure(
    P: Polyomino,
    lab: Optional[Labelling],
    out: Path,
    facet: Optional[Iterable[Point]] = None,
    rooks: Optional[Iterable] = None,
) -> None:
    """Cells, vertex labels, facet markers (circle: Y1, cross: Y2) and rooks, drawn with matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    x0, y0, x1, y1 = P.bbox
    fig, ax = plt.subplots(figsize=(0.6 * (x1 - x0 + 2), 0.6 * (y1 - y0 + 2)))
    for c in sorted(P.cells):
        ax.add_patch(Rectangle((c.x, c.y), 1, 1, facecolor="#e8eef7", edgecolor="black", linewidth=1))
    for c in sorted(rooks or ()):
        ax.text(c.x + 0.5, c.y + 0.5, "R", ha="center", va="center", fontsize=11, color="darkred")
    y1set = set(lab.y1) if lab else set()
    for v in sorted(facet or ()):
        ax.plot(v.x, v.y, "o" if v in y1set else "x", color="tab:blue", markersize=7, markerfacecolor="none")
    if lab is not None:
        for p in sorted(P.vertices):
            ax.text(p.x + 0.06, p.y + 0.06, lab.label(p), fontsize=6)
    ax.set_xlim(x0 - 0.5, x1 + 0.5)
    ax.set_ylim(y0 - 0.5, y1 + 0.5)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def cmd_render(args) -> int:
    P = load_polyomino(args.file)
    lab = None
    facet = None
    rooks = None
    if args.labels or args.facet is not None:
        pipe = _pipeline(args, P)
        lab = pipe.lab
        if args.facet is not None:
            facets = pipe.complex.facets
            if not 0 <= args.facet < len(facets):
                raise InputError(f"facet index {args.facet} out of range 0..{len(facets) - 1}")
            facet = facets[args.facet]
    if args.rooks is not None:
        configs = list(rook_configurations(P, args.convention, args.rooks))
        if not configs:
            raise InputError(f"no {args.rooks}-rook configuration")
        rooks = configs[0].rooks
    if args.format == "ascii":
        marks: dict = {}
        if facet is not None:
            y1 = set(lab.y1) if lab else set()
            marks = {v: ("o" if v in y1 else "x") for v in facet}
        text = render_ascii(P, marks)
        if args.output:
            Path(args.output).write_text(text + "\n")
        else:
            print(text)
        return OK
    if not args.output:
        raise InputError("svg and png output need --output")
    render_figure(P, lab, Path(args.output), facet, rooks)
    return OK


# ---------------------------------------------------------------- argument parsing

def _common(p: argparse.ArgumentParser, file: bool = True) -> None:
    if file:
        p.add_argument("file", help="polyomino JSON: [[x, y], ...] or {\"cells\": [...]}; '-' reads stdin")
    p.add_argument("--rule", choices=RULES, default="desc", help="order of primed variables")
    p.add_argument("--convention", choices=CONVENTIONS, default=BLOCK, help="rook attack convention")
    p.add_argument("--budget-pairs", type=int, default=PAIR_BUDGET, help="S-pair budget for Buchberger")
    p.add_argument("--budget-facets", type=int, default=FACET_BUDGET, help="facet enumeration budget")
    p.add_argument("--export-macaulay2", metavar="PATH", help="write the ring and ideal as Macaulay2 text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="closed path / weakly / zig-zag / L-configurations / ladders")
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("order", help="vertex labelling and variable ranking")
    _common(p)
    p.add_argument("--fallback-search", action="store_true", help="try every start cell and direction")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("groebner", help="Buchberger check of the inner 2-minors")
    _common(p)
    p.add_argument("--order-from", choices=("label", "search"), default="label")
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("complex", help="facets, f- and h-vector of the flag complex")
    _common(p)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("shell", help="shelling order with restriction sets and steps")
    _common(p)
    p.add_argument("--generic", action="store_true", help="use the backtracking search")
    p.set_defaults(func=cmd_shell)

    p = sub.add_parser("rook", help="rook polynomial and rook number")
    _common(p)
    p.set_defaults(func=cmd_rook)

    p = sub.add_parser("phi", help="facets with i steps against i-rook configurations")
    _common(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("hseries", help="h-polynomial against the rook polynomial")
    _common(p)
    p.set_defaults(func=cmd_hseries)

    p = sub.add_parser("gen", help="stream closed or weakly closed paths as JSON lines")
    p.add_argument("--max-cells", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=("closed-path", "weakly"), default="closed-path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run-all", help="full pipeline over the corpus, JSON lines plus a summary")
    _common(p, file=False)
    p.add_argument("--max-cells", type=int, default=12)
    p.add_argument("--weakly-cells", type=int, default=0, help="also sweep weakly closed paths up to this size")
    p.add_argument("--generic", action="store_true", help="shell with the backtracking search")
    p.add_argument("--figures", metavar="DIR", help="write one figure per instance here")
    p.add_argument("--figure-format", choices=("svg", "png"), default="svg")
    p.set_defaults(func=cmd_run_all)

    p = sub.add_parser("render", help="draw a polyomino, optionally with labels, a facet or rooks")
    _common(p)
    p.add_argument("--format", choices=("ascii", "svg", "png"), default="ascii")
    p.add_argument("--output", "-o")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--facet", type=int, help="index into the lex-sorted facet list")
    p.add_argument("--rooks", type=int, help="overlay the first k-rook configuration")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"polyalg: budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except InputError as exc:
        print(f"polyalg: input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except PolyalgError as exc:
        print(f"polyalg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return MISMATCH


if __name__ == "__main__":
    sys.exit(main())
