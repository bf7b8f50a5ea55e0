"""Command-line entry point: generate, compute, verify, optimize, counterexample.

Exit codes: 0 success, 1 inequality violation (verify), 2 usage error,
3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import functionals as fn
from . import geometry as geo
from . import inequalities as iq
from . import optimizer as op
from . import polyio, shapes
from .errors import ConevolError, UsageError
from .weights import parse_weight

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CommandPlan:
    subcommand: str
    flags: dict
    source: tuple | None = None  # ("file", path) | ("shape", spec) | ("shapes", [specs])
    fmt: str = "table"
    seed: int = 0
    weights: list = field(default_factory=list)


def _build_parser():
    p = _Parser(prog="conevol", description="Weighted cone-volume functionals of polytopes.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a named polytope's vertices")
    g.add_argument("--spec", required=True)
    g.add_argument("-o", "--output")
    g.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compute", help="evaluate all functionals on one polytope")
    c.add_argument("--shape", action="append")
    c.add_argument("--input", action="append")
    c.add_argument("--weight", action="append", default=[])
    c.add_argument("--p", type=float, action="append")
    c.add_argument("--mc-samples", type=int, default=0)
    c.add_argument("--format", choices=("table", "records"), default="table")
    c.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run inequality checks")
    v.add_argument("--shape", action="append")
    v.add_argument("--input", action="append")
    v.add_argument("--weight", action="append", default=[])
    v.add_argument("--checks", default="all")
    v.add_argument("--format", choices=("table", "records"), default="table")
    v.add_argument("--seed", type=int, default=0)

    o = sub.add_parser("optimize", help="maximize a functional over K points on the sphere")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--objective", default="volume")
    o.add_argument("--restarts", type=int, default=20)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--maxiter", type=int, default=2000)
    o.add_argument("--format", choices=("table", "records"), default="records")
    o.add_argument("-o", "--output")

    x = sub.add_parser("counterexample", help="sweep the 8-vertex volume maximizer family")
    x.add_argument("--lo", type=float, default=0.58)
    x.add_argument("--hi", type=float, default=0.64)
    x.add_argument("--step", type=float, default=0.002)
    x.add_argument("--p", type=float, action="append")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("-o", "--output")
    return p


def parse(argv):
    """Validate ``argv`` into a ``CommandPlan``; raises ``UsageError``."""
    ns = _build_parser().parse_args(argv)
    flags = vars(ns).copy()
    plan = CommandPlan(ns.subcommand, flags, fmt=flags.get("format") or "table", seed=ns.seed)
    if ns.subcommand in ("compute", "verify"):
        shapes_ = ns.shape or []
        inputs = ns.input or []
        if shapes_ and inputs:
            raise UsageError("give either --shape or --input, not both")
        if not shapes_ and not inputs:
            raise UsageError("an input source (--shape or --input) is required")
        if ns.subcommand == "compute" and len(shapes_) + len(inputs) > 1:
            raise UsageError("compute takes exactly one source")
        if shapes_:
            for s in shapes_:
                try:
                    shapes.parse_spec(s)
                except ConevolError as exc:
                    raise UsageError(str(exc)) from None
            plan.source = ("shape", shapes_[0]) if len(shapes_) == 1 else ("shapes", shapes_)
        else:
            plan.source = ("file", inputs[0]) if len(inputs) == 1 else ("files", inputs)
        plan.weights = [parse_weight(w) for w in ns.weight]
    if ns.subcommand == "verify" and ns.checks != "all":
        checks = [c.strip() for c in ns.checks.split(",") if c.strip()]
        bad = [c for c in checks if c not in iq.ALL_CHECKS]
        if bad:
            raise UsageError(f"unknown checks: {', '.join(bad)}")
        flags["checks"] = checks
    if ns.subcommand == "optimize":
        op.parse_objective(ns.objective)
        if ns.k < 4 or ns.restarts < 1:
            raise UsageError("optimize needs --k >= 4 and --restarts >= 1")
    if ns.subcommand == "generate":
        try:
            shapes.parse_spec(ns.spec)
        except ConevolError as exc:
            raise UsageError(str(exc)) from None
    return plan


def _workers():
    raw = os.environ.get("CONEVOL_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return os.cpu_count() or 1 if n == 0 else max(1, n)


def _value(x, records):
    if x is None:
        return "absent"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return polyio.fmt(x) if records else format(float(x), ".10g")
    if isinstance(x, (list, tuple, np.ndarray)):
        return ",".join(_value(v, records) for v in x)
    return str(x)


def _emit(pairs, fmt, out):
    records = fmt == "records"
    if records:
        for k, v in pairs:
            out.write(f"{k}={_value(v, True)}\n")
    else:
        width = max(len(k) for k, _ in pairs)
        for k, v in pairs:
            out.write(f"{k:<{width}}  {_value(v, False)}\n")


def _load_polytope(kind, ref):
    if kind == "shape":
        return ref, shapes.generate(ref)
    n, P = polyio.read_points(ref)
    if n == len(P) - 1 and n > 3:
        return ref, geo.simplex_from_vertices(P)
    return ref, geo.convex_hull(P, n)


def _try(f, *args):
    try:
        return f(*args)
    except ConevolError:
        return None


def compute_pairs(Q, weights, p_values, mc_samples=0, seed=0):
    """Ordered ``(name, value)`` pairs reported by ``compute``."""
    info = geo.ball_info(Q)
    v, e, f = Q.counts()
    s = fn.summary(Q)
    pairs = [
        ("seed", seed),
        ("dim", Q.dim),
        ("vertices", v),
        ("edges", e),
        ("facets", f),
        ("volume", geo.volume(Q)),
        ("surface", geo.surface_area(Q)),
        ("circumradius", info.circumradius),
        ("chebyshev_radius", info.chebyshev_radius),
        ("has_insphere", info.has_insphere),
        ("incenter", None if info.incenter is None else list(info.incenter)),
        ("origin_interior", bool(np.all(Q.offsets > 0))),
        ("mean_height", s.mean_height),
        ("mean_facet_area", s.mean_facet_area),
        ("height_sum", s.height_sum),
    ]
    for p in p_values:
        pairs.append((f"s_p[{p:g}]", _try(fn.s_p, Q, p)))
    for w in weights:
        lab = w.label()
        pairs.append((f"s_weighted[{lab}]", _try(fn.s_weighted, Q, w)))
        pairs.append((f"s_weighted_in[{lab}]", _try(fn.s_weighted_in, Q, w)))
        pairs.append((f"orlicz_surface[{lab}]", _try(fn.orlicz_surface_area, Q, w)))
    if Q.dim == 3:
        M = fn.edge_curvature(Q, fn.EXTERIOR)
        W = fn.mean_width(Q).value
        pairs += [
            ("angle_convention", fn.EXTERIOR),
            ("total_edge_length", s.total_edge_length),
            ("mean_exterior_angle", s.mean_exterior_angle),
            ("edge_curvature[exterior]", M),
            ("edge_curvature[paper_literal]", fn.edge_curvature(Q, fn.PAPER_LITERAL)),
            ("mean_width[exact_edges]", W),
            ("curvature_to_width_ratio", M / W),
            ("foot_condition", geo.foot_condition(Q)),
        ]
        for w in weights:
            pairs.append((f"edge_curvature_weighted[{w.label()}]",
                          _try(fn.edge_curvature_weighted, Q, w)))
        if mc_samples:
            mc = fn.mean_width(Q, "monte_carlo", mc_samples, seed)
            pairs += [("mean_width[monte_carlo]", mc.value), ("mean_width_stderr", mc.stderr)]
    return pairs


def _report_line(r, records):
    val = lambda x: _value(x, records)  # noqa: E731
    fields = [
        ("shape", r.shape), ("weight", r.weight or "-"), ("tag", r.tag),
        ("lhs", val(r.lhs)), ("rhs", val(r.rhs)), ("direction", r.direction),
        ("satisfied", val(r.satisfied)), ("equality", val(r.equality)),
        ("expected_equality", val(r.expected_equality)), ("slack", val(r.slack)),
    ]
    text = " ".join(f"{k}={v}" for k, v in fields)
    if r.notes:
        text += f' notes="{r.notes}"'
    return text


def execute(plan, out=None):
    """Run a parsed plan, writing to ``out``; returns the exit code."""
    out = out or sys.stdout
    sub = plan.subcommand
    fl = plan.flags
    if sub == "generate":
        Q = shapes.generate(fl["spec"])
        text = polyio.dumps_points(Q.vertices)
        if fl.get("output"):
            with open(fl["output"], "w") as fh:
                fh.write(text)
        else:
            out.write(text)
        return EXIT_OK

    if sub == "compute":
        kind, ref = plan.source
        _, Q = _load_polytope(kind, ref)
        p_values = fl.get("p") or [0.0, 0.5, 1.0]
        pairs = compute_pairs(Q, plan.weights, p_values, fl.get("mc_samples", 0), plan.seed)
        _emit(pairs, plan.fmt, out)
        return EXIT_OK

    if sub == "verify":
        kind, ref = plan.source
        refs = ref if kind in ("shapes", "files") else [ref]
        base = "shape" if kind.startswith("shape") else "file"
        sources = [_load_polytope(base, r) for r in refs]
        weights = plan.weights or None
        res = iq.run_suite(sources, weights, fl["checks"], workers=_workers())
        records = plan.fmt == "records"
        out.write(f"seed={plan.seed}\n")
        for r in res.reports:
            out.write(_report_line(r, records) + "\n")
        for shape, check, wlab, msg in res.errors:
            out.write(f'error shape={shape} check={check} weight={wlab or "-"} message="{msg}"\n')
        out.write(f"reports={len(res.reports)} violations={len(res.violations)} "
                  f"equalities={sum(r.equality for r in res.reports)} errors={len(res.errors)}\n")
        return EXIT_OK if res.ok else EXIT_VIOLATION

    if sub == "optimize":
        res = op.optimize(fl["k"], fl["objective"], fl["restarts"], plan.seed, fl["maxiter"],
                          workers=_workers())
        pairs = [("seed", plan.seed), ("k", fl["k"]), ("objective", res.objective),
                 ("value", res.value), ("restarts", res.restarts)]
        for t in res.trace:
            pairs.append((f"restart[{t['restart']}]", [t["iterations"], t["value"]]))
        _emit(pairs, plan.fmt, out)
        P = res.best.points()
        out.write("# best configuration\n")
        out.write(polyio.dumps_points(P))
        if fl.get("output"):
            polyio.write_points(fl["output"], P)
        return EXIT_OK

    if sub == "counterexample":
        p_values = fl.get("p") or [0.5]
        rows, report, headline = op.counterexample_sweep(fl["lo"], fl["hi"], fl["step"], p_values)
        buf = io.StringIO()
        cols = list(rows[0].keys())
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theta"] + cols[1:])
        for r in rows:
            writer.writerow([polyio.fmt(r[c]) for c in cols])
        if fl.get("output"):
            with open(fl["output"], "w") as fh:
                fh.write(buf.getvalue())
        else:
            out.write(f"# seed={plan.seed}\n")
            out.write(buf.getvalue())
        for name, col in report.items():
            headline[f"argmax[{name}]"] = col["argmax"]
        _emit(list(headline.items()), "records", out)
        return EXIT_OK
    raise UsageError(f"unknown subcommand {sub!r}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return execute(plan)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ConevolError, OSError, ValueError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        sys.stderr.write(f"error[{code}]: {exc}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
