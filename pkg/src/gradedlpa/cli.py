"""Command-line front end.

Every command prints one JSON report on stdout:

    {"format": 1, "command": ..., "inputs": ..., "result": ..., "checks": [...], "seed": ...}

Exit codes: 0 success or Yes, 1 No or a failed check, 2 Unknown, 64 usage
or input error.  Arguments that take JSON accept either a file path or the
JSON text itself.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import graded_monoid as gm
from . import kgraph as kg
from . import monoid as mo
from . import orbit as ob
from . import smash as sm
from .graph import (
    CoverWindow,
    Graph,
    enumerate_hereditary_saturated,
    has_condition_l,
    no_cycle_has_exit,
    simple_cycles,
)
from .lpa import LeavittPathAlgebra, basis_count, format_element, parse_element

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
FORMAT = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# -- input helpers -----------------------------------------------------------


def load_json(arg):
    try:
        if os.path.isfile(arg):
            with open(arg, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {arg!r}: {exc}") from None
    except OSError as exc:
        raise UsageError(str(exc)) from None


def load_text(arg):
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read().strip()
    return arg


def load_graph(arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a graph must be a JSON object")
    return Graph.from_dict(data)


def load_monoid_element(g, arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a monoid element must be a JSON object")
    x = mo.MonoidElement(data)
    mo._check_support(g, x)
    return x


def load_graded(g, arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a graded element must be a JSON object")
    x = gm.GradedMonoidElement(data)
    gm._check(g, x)
    return x


def load_class(g, arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a class must be a JSON object")
    out = {}
    for k, c in data.items():
        v, n = gm.parse_generator(k)
        if not g.is_vertex(v):
            raise UsageError(f"unknown vertex {v!r}")
        if isinstance(c, bool) or not isinstance(c, int):
            raise UsageError("class coefficients must be integers")
        out[(v, n)] = out.get((v, n), 0) + c
    return out


def parse_smash(alg, text):
    """``r@beta; s@gamma`` with ``r``, ``s`` in the element syntax."""
    parts = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        body, sep, beta = chunk.rpartition("@")
        if not sep:
            raise UsageError(f"smash term {chunk!r} needs '@level'")
        try:
            beta = int(beta)
        except ValueError:
            raise UsageError(f"bad level in {chunk!r}") from None
        r = parse_element(alg, body)
        parts[beta] = parts[beta] + r if beta in parts else r
    return sm.SmashElement(alg, parts)


def _class_dict(c):
    return {f"{v}@{n}": k for (v, n), k in sorted(c.items(), key=lambda kv: (kv[0][1], kv[0][0]))}


def _verdict_code(v):
    return {mo.Verdict.YES: EXIT_OK, mo.Verdict.NO: EXIT_NO, mo.Verdict.UNKNOWN: EXIT_UNKNOWN}[v]


def _checks_code(checks):
    states = [s for _, s in checks]
    if "fail" in states:
        return EXIT_NO
    if "unknown" in states:
        return EXIT_UNKNOWN
    return EXIT_OK


def _pf(ok):
    return "pass" if ok else "fail"


# -- commands ------------------------------------------------------------------
# Each returns (inputs, result, checks, seed, exit_code).


def cmd_graph_validate(a):
    g = load_graph(a.graph)
    result = {
        "vertices": list(g.vertices),
        "edges": len(g.edges),
        "sinks": sorted(g.sinks()),
        "unit_weights": g.has_unit_weights(),
        "cycles": [list(c) for c in simple_cycles(g)],
        "condition_l": has_condition_l(g),
        "no_cycle_has_exit": no_cycle_has_exit(g),
    }
    return {"graph": g.to_dict()}, result, [("valid", "pass")], None, EXIT_OK


def cmd_graph_cover(a):
    g = load_graph(a.graph)
    lo, hi = a.window
    if lo > hi:
        raise UsageError("window must satisfy LO <= HI")
    w = CoverWindow(g, lo, hi)
    checks = []
    if g.has_unit_weights():
        checks.append(("acyclic", _pf(not simple_cycles(w.graph))))
    result = {"graph": w.graph.to_dict(), "complete_vertices": sorted(w.complete_vertices())}
    return {"graph": g.to_dict(), "window": [lo, hi]}, result, checks, None, _checks_code(checks)


def cmd_graph_hs(a):
    g = load_graph(a.graph)
    hs = enumerate_hereditary_saturated(g, bound=a.bound)
    return {"graph": g.to_dict()}, {"hereditary_saturated": [sorted(h) for h in hs], "count": len(hs)}, [], None, EXIT_OK


def cmd_lpa_mul(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x, y = parse_element(alg, load_text(a.x)), parse_element(alg, load_text(a.y))
    p = x * y
    inputs = {"graph": g.to_dict(), "x": str(x), "y": str(y)}
    return inputs, {"product": format_element(p), "degrees": p.degrees()}, [], None, EXIT_OK


def cmd_lpa_normal(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x = parse_element(alg, load_text(a.x))
    result = {"normal_form": format_element(x), "degrees": x.degrees(), "terms": len(x.terms)}
    return {"graph": g.to_dict(), "x": load_text(a.x)}, result, [], None, EXIT_OK


def cmd_lpa_basis_count(a):
    g = load_graph(a.graph)
    n = basis_count(g, a.bound)
    return {"graph": g.to_dict(), "bound": a.bound}, {"count": n}, [], None, EXIT_OK


def cmd_smash_mul(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x, y = parse_smash(alg, load_text(a.x)), parse_smash(alg, load_text(a.y))
    p = x * y
    inputs = {"graph": g.to_dict(), "x": x.to_dict(), "y": y.to_dict()}
    return inputs, {"product": p.to_dict()}, [], None, EXIT_OK


def cmd_smash_check_iso(a):
    g = load_graph(a.graph)
    lo, hi = a.window
    if lo > hi:
        raise UsageError("window must satisfy LO <= HI")
    t0 = time.perf_counter()
    iso = sm.WindowIsomorphism(g, lo, hi)
    rel_failures = iso.check_relations()
    prod_failures = iso.check_products(a.samples, a.seed)
    injective, basis = iso.check_injective(a.inj_bound)
    checks = [
        ("relations", _pf(not rel_failures)),
        ("products", _pf(prod_failures == 0)),
        ("injective", _pf(injective)),
    ]
    result = {
        "relation_failures": [str(r) for r in rel_failures],
        "product_samples": a.samples,
        "product_failures": prod_failures,
        "injectivity_basis": basis,
    }
    if a.timing:
        result["seconds"] = round(time.perf_counter() - t0, 3)
    inputs = {"graph": g.to_dict(), "window": [lo, hi], "samples": a.samples, "inj_bound": a.inj_bound}
    return inputs, result, checks, a.seed, _checks_code(checks)


def cmd_smash_regular_witness(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x = parse_element(alg, load_text(a.x))
    b = sm.graded_regular_witness(x)
    ok = x * b * x == x
    result = {"a": format_element(x), "b": format_element(b)}
    if x:
        result["degree"] = x.degree()
    return {"graph": g.to_dict(), "a": format_element(x)}, result, [("aba=a", _pf(ok))], None, _checks_code([("", _pf(ok))])


def cmd_monoid_eq(a):
    g = load_graph(a.graph)
    x, y = load_monoid_element(g, a.x), load_monoid_element(g, a.y)
    r = mo.monoid_equal(g, x, y, a.depth, a.coeff_cap)
    result = {
        "verdict": r.verdict.value,
        "reason": r.reason,
        "witness": None if r.witness is None else r.witness.to_dict(),
        "explored": r.explored,
    }
    inputs = {"graph": g.to_dict(), "x": x.to_dict(), "y": y.to_dict(), "depth": a.depth, "coeff_cap": a.coeff_cap}
    return inputs, result, [], None, _verdict_code(r.verdict)


def cmd_monoid_cancellative(a):
    g = load_graph(a.graph)
    c = mo.is_cancellative(g)
    result = {"cancellative": c, "cycles_with_exits": [list(cy) for cy in simple_cycles(g) if not c]}
    return {"graph": g.to_dict()}, result, [], None, EXIT_OK if c else EXIT_NO


def cmd_monoid_counterexample(a):
    g = load_graph(a.graph)
    cx = mo.cancellation_counterexample(g)
    if cx is None:
        return {"graph": g.to_dict()}, {"counterexample": None}, [], None, EXIT_NO
    ok = cx.certify(g, a.depth)
    return {"graph": g.to_dict()}, {"counterexample": cx.to_dict()}, [("certified", _pf(ok))], None, _checks_code([("", _pf(ok))])


def cmd_ideals(a):
    g = load_graph(a.graph)
    ideals = mo.order_ideals(g, bound=a.bound)
    result = {"order_ideals": [I.sorted_vertices() for I in ideals], "count": len(ideals)}
    checks = []
    if a.graded:
        lat = gm.graded_ideal_lattice(g, bound=a.bound)
        result["graded_count"] = len(lat.graded)
        checks = sorted((k, _pf(v)) for k, v in lat.verify().items())
    return {"graph": g.to_dict(), "graded": a.graded}, result, checks, None, _checks_code(checks)


def cmd_gr_eq(a):
    g = load_graph(a.graph)
    x, y = load_graded(g, a.x), load_graded(g, a.y)
    if g.has_unit_weights():
        v = mo.Verdict.YES if gm.gequal(g, x, y) else mo.Verdict.NO
        method = "stable-kernel"
    else:
        v = gm.gequal_bfs(g, x, y, a.depth, a.coeff_cap)
        method = "bounded-rewriting"
    inputs = {"graph": g.to_dict(), "x": x.to_dict(), "y": y.to_dict()}
    return inputs, {"verdict": v.value, "method": method}, [], None, _verdict_code(v)


def cmd_gr_cancel_sweep(a):
    g = load_graph(a.graph)
    lo, hi = a.levels
    r = gm.graded_cancellation_sweep(g, a.samples, a.seed, a.max_total, (lo, hi))
    result = {
        "samples": r["samples"],
        "related": r["related"],
        "failures": [[x.to_dict(), y.to_dict(), z.to_dict()] for x, y, z in r["failures"]],
    }
    checks = [("cancellation", _pf(not r["failures"]))]
    inputs = {"graph": g.to_dict(), "samples": a.samples, "levels": [lo, hi], "max_total": a.max_total}
    return inputs, result, checks, a.seed, _checks_code(checks)


def cmd_kgr0_classes(a):
    g = load_graph(a.graph)
    K = gm.kgr0(g)
    result = {"presentation": K.presentation()}
    inputs = {"graph": g.to_dict()}
    code = EXIT_OK
    if a.x is not None:
        x = load_class(g, a.x)
        inputs["x"] = _class_dict(x)
        pos = K.is_positive(x, a.depth)
        result["x_positive"] = pos.value
        if a.y is not None:
            y = load_class(g, a.y)
            inputs["y"] = _class_dict(y)
            eq = K.equal(x, y)
            result["equal"] = eq
            code = EXIT_OK if eq else EXIT_NO
        elif pos is mo.Verdict.UNKNOWN:
            code = EXIT_UNKNOWN
    return inputs, result, [], None, code


def _load_spec(arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a k-graph spec must be a JSON object")
    return kg.KGraphSpec.from_dict(data)


def _load_limit(spec, arg):
    data = load_json(arg)
    if not isinstance(data, dict):
        raise UsageError("a limit vector must be a JSON object")
    v = kg.LimitVector.from_dict(data)
    kg._check_vector(spec, v)
    return v


def cmd_kgraph_eq(a):
    spec = _load_spec(a.spec)
    x, y = _load_limit(spec, a.x), _load_limit(spec, a.y)
    eq = kg.limit_equal(spec, x, y)
    inputs = {"spec": spec.to_dict(), "x": x.to_dict(), "y": y.to_dict()}
    return inputs, {"equal": eq}, [], None, EXIT_OK if eq else EXIT_NO


def cmd_kgraph_cancel_sweep(a):
    spec = _load_spec(a.spec)
    r = kg.kgraph_cancellation_sweep(spec, a.samples, a.seed, a.max_entry)
    result = {
        "samples": r["samples"],
        "related": r["related"],
        "violations": [[v.to_dict() for v in t] for t in r["violations"]],
    }
    checks = [("cancellation", _pf(not r["violations"]))]
    inputs = {"spec": spec.to_dict(), "samples": a.samples, "max_entry": a.max_entry}
    return inputs, result, checks, a.seed, _checks_code(checks)


def cmd_orbit_act(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x = ob.parse_rational_path(g, load_text(a.path))
    elem = parse_element(alg, load_text(a.element))
    image = ob.module_act(elem, x)
    inputs = {"graph": g.to_dict(), "path": str(x), "element": format_element(elem)}
    return inputs, {"image": image.to_dict()}, [], None, EXIT_OK


def cmd_orbit_simple_sweep(a):
    g = load_graph(a.graph)
    x = ob.parse_rational_path(g, load_text(a.path))
    r = ob.simple_sweep(g, x, a.depth)
    obstruction = ob.grading_obstruction(g, x)
    result = dict(r)
    result["grading_obstruction"] = {"cycle": list(obstruction["cycle"]), "degree": obstruction["degree"]}
    checks = [("transitivity", _pf(r["transitive"])), ("commutant", _pf(r["commutant_ok"]))]
    inputs = {"graph": g.to_dict(), "path": str(x), "depth": a.depth}
    return inputs, result, checks, None, _checks_code(checks)


def cmd_orbit_ann_probe(a):
    g = load_graph(a.graph)
    alg = LeavittPathAlgebra(g)
    x = ob.parse_rational_path(g, load_text(a.path))
    elem = parse_element(alg, load_text(a.element))
    r = ob.annihilator_probe(elem, x, a.depth)
    inputs = {"graph": g.to_dict(), "path": str(x), "element": format_element(elem), "depth": a.depth}
    return inputs, r.to_dict(), [], None, EXIT_NO if r.refuted else EXIT_OK


# -- parser --------------------------------------------------------------------


def _add(sub, name, func, help_text):
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.set_defaults(func=func)
    return p


def build_parser():
    parser = _Parser(prog="gradedlpa", description="Graded invariants of Leavitt path algebras.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    p = top.add_parser("graph", help="graph utilities")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "validate", cmd_graph_validate, "validate a graph and summarise it")
    q.add_argument("graph")
    q = _add(s, "cover", cmd_graph_cover, "finite window of the covering graph")
    q.add_argument("graph")
    q.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"), required=True)
    q = _add(s, "hs", cmd_graph_hs, "hereditary saturated subsets")
    q.add_argument("graph")
    q.add_argument("--bound", type=int, default=16)

    p = top.add_parser("lpa", help="Leavitt path algebra arithmetic")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "mul", cmd_lpa_mul, "multiply two elements")
    q.add_argument("graph")
    q.add_argument("x")
    q.add_argument("y")
    q = _add(s, "normal", cmd_lpa_normal, "normal form of an element")
    q.add_argument("graph")
    q.add_argument("x")
    q = _add(s, "basis-count", cmd_lpa_basis_count, "count normal monomials with path lengths <= bound")
    q.add_argument("graph")
    q.add_argument("--bound", type=int, required=True)

    p = top.add_parser("smash", help="smash product with Z")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "mul", cmd_smash_mul, "multiply smash elements written 'r@beta; s@gamma'")
    q.add_argument("graph")
    q.add_argument("x")
    q.add_argument("y")
    q = _add(s, "check-iso", cmd_smash_check_iso, "check phi' on a covering window")
    q.add_argument("graph")
    q.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"), default=[-4, 4])
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--inj-bound", type=int, default=2, help="path length bound for the injectivity check")
    q.add_argument("--timing", action="store_true", help="include wall time (makes output non-reproducible)")
    q = _add(s, "regular-witness", cmd_smash_regular_witness, "b with aba = a for homogeneous a")
    q.add_argument("graph")
    q.add_argument("x")

    p = top.add_parser("monoid", help="graph monoid")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "eq", cmd_monoid_eq, "three-valued equality")
    q.add_argument("graph")
    q.add_argument("x")
    q.add_argument("y")
    q.add_argument("--depth", type=int, default=mo.DEFAULT_DEPTH)
    q.add_argument("--coeff-cap", type=int, default=mo.DEFAULT_COEFF_CAP)
    q = _add(s, "cancellative", cmd_monoid_cancellative, "is the monoid cancellative")
    q.add_argument("graph")
    q = _add(s, "counterexample", cmd_monoid_counterexample, "certified failure of cancellation")
    q.add_argument("graph")
    q.add_argument("--depth", type=int, default=mo.DEFAULT_DEPTH)
    for parent in (s, top):
        q = _add(parent, "ideals", cmd_ideals, "order-ideals (and graded ones with --graded)")
        q.add_argument("graph")
        q.add_argument("--graded", action="store_true")
        q.add_argument("--bound", type=int, default=16)

    p = top.add_parser("gr-monoid", help="graded graph monoid")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "eq", cmd_gr_eq, "equality of graded elements")
    q.add_argument("graph")
    q.add_argument("x")
    q.add_argument("y")
    q.add_argument("--depth", type=int, default=mo.DEFAULT_DEPTH)
    q.add_argument("--coeff-cap", type=int, default=mo.DEFAULT_COEFF_CAP)
    q = _add(s, "cancel-sweep", cmd_gr_cancel_sweep, "seeded cancellation sweep")
    q.add_argument("graph")
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--levels", nargs=2, type=int, metavar=("LO", "HI"), default=[-2, 2])
    q.add_argument("--max-total", type=int, default=3)

    p = top.add_parser("kgr0", help="graded K0 data")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "classes", cmd_kgr0_classes, "presentation, class equality and positivity")
    q.add_argument("graph")
    q.add_argument("--x", help="class as {\"v@n\": int}")
    q.add_argument("--y", help="second class, compared with --x")
    q.add_argument("--depth", type=int, default=mo.DEFAULT_DEPTH)

    p = top.add_parser("kgraph", help="k-graph monoid limits")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "eq", cmd_kgraph_eq, "equality in the direct limit")
    q.add_argument("spec")
    q.add_argument("x")
    q.add_argument("y")
    q = _add(s, "cancel-sweep", cmd_kgraph_cancel_sweep, "seeded cancellation sweep")
    q.add_argument("spec")
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--max-entry", type=int, default=3)

    p = top.add_parser("orbit", help="orbit modules of rational paths")
    s = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    q = _add(s, "act", cmd_orbit_act, "act by an algebra element on a rational path")
    q.add_argument("graph")
    q.add_argument("path", help="e.g. 'beta=f;cycle=e'")
    q.add_argument("element")
    q = _add(s, "simple-sweep", cmd_orbit_simple_sweep, "transitivity and commutant on a truncation")
    q.add_argument("graph")
    q.add_argument("path")
    q.add_argument("--depth", type=int, default=3)
    q = _add(s, "ann-probe", cmd_orbit_ann_probe, "look for a basis path not killed by an element")
    q.add_argument("graph")
    q.add_argument("element")
    q.add_argument("path")
    q.add_argument("--depth", type=int, default=3)
    return parser


def run(argv=None):
    """Parse ``argv`` and return ``(report_or_None, exit_code)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    command = f"{args.group} {args.command}" if getattr(args, "command", None) else args.group
    try:
        inputs, result, checks, seed, code = args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return None, EXIT_USAGE
    report = {
        "format": FORMAT,
        "command": command,
        "inputs": inputs,
        "result": result,
        "checks": [list(c) for c in checks],
        "seed": seed,
    }
    return report, code


def main(argv=None):
    try:
        report, code = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if report is not None:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, default=str) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
