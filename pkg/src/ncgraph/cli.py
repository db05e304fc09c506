"""Command line interface.

Exit status is 0 when every requested check passes, 1 when some check
fails and 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import __version__
from .calculus import (ExtendedCalculus, ScalarFunction, Tensor, commutator, d,
                       kernel_of_d_dimension, matrix_operator, surjectivity_rank, theta)
from .cayley import (CayleyGraph, GroupError, build_group, cayley_graph, circulant_eigenvectors,
                     invariant_form_laplacian, maurer_cartan, parse_generators)
from .formats import (FormatError, connection_from_json, connection_to_json, dump_json, load_json_text,
                      metric_from_json, tensor_to_json)
from .geometry import (GeometryError, Metric, check_braid, check_metric_compat, check_torsion_compatible,
                       cotorsion, curvature, derham_cohomology, nabla_metric, omega2_space, ricci,
                       ricci_permutation_euclidean, ricci_scalar, torsion)
from .graph import Digraph, GraphError, format_digraph, is_bidirected, is_weakly_connected, parse_digraph
from .laplacian import (LaplacianError, format_multiset, mgon_eigenvalues,
                        mgon_spectrum, spectrum_matches, spectrum_reports, vertex_laplacian)
from .linalg import charpoly
from .poly import poly_roots, roots_to_multiset
from .rational import format_fraction

VERIFY_CHECKS = ["braid", "metric-compat", "torsion-compat", "torsion", "curvature", "cotorsion", "ricci"]

CHECK_IDS = {
    "braid": "braid-relations",
    "metric-compat": "metric-compatibility",
    "torsion-compat": "torsion-compatibility",
    "torsion": "torsion-free",
    "curvature": "curvature-zero",
    "cotorsion": "cotorsion-free",
    "ricci": "ricci-closed-form",
}


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def load_graph(path: str) -> Digraph:
    try:
        return parse_digraph(_read(path))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_group(spec: str):
    if os.path.isfile(spec):
        spec = _read(spec)
    try:
        return build_group(spec)
    except GroupError as exc:
        raise InputError(str(exc)) from exc


def _emit(args, data, text: str) -> None:
    out = dump_json(data) if args.format == "json" else text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _check(check_id: str, passed: bool, **detail) -> dict:
    out = {"id": check_id, "passed": bool(passed)}
    out.update(detail)
    return out


def _checks_text(checks: List[dict]) -> str:
    lines = []
    for c in checks:
        extra = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("id", "passed") and not isinstance(v, (list, dict)))
        lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['id']}" + (f" ({extra})" if extra else ""))
    return "\n".join(lines)


# -- spectrum ---------------------------------------------------------------------------


def _spectrum_checks(rep) -> List[dict]:
    return [
        _check("edge-spectrum-certificate", rep.certificate.holds),
        _check("edge-spectrum-positivity", rep.positive, zero_modes=rep.zero_modes),
    ]


def cmd_spectrum(args) -> int:
    g = load_graph(args.graph)
    if not is_bidirected(g):
        raise InputError("spectrum needs a bidirected graph")
    reports = spectrum_reports(g, args.tol)
    if not reports:
        raise InputError("graph has no edges")
    comps = []
    texts = []
    ok = True
    for rep in reports:
        checks = _spectrum_checks(rep)
        ok &= all(c["passed"] for c in checks)
        data = rep.to_json()
        data["spectrum"] = format_multiset(rep.spectrum())
        data["checks"] = checks
        comps.append(data)
        texts.append(rep.to_text() + "\n" + _checks_text(checks))
    if len(comps) == 1 and is_weakly_connected(g):
        data = comps[0]
        data.pop("vertices", None)
    else:
        data = {"components": comps}
    _emit(args, data, "\n\n".join(texts))
    return 0 if ok else 1


def cmd_mgon(args) -> int:
    if args.m < 3:
        raise InputError("m must be at least 3")
    rep = mgon_spectrum(args.m, args.tol)
    expected = mgon_eigenvalues(args.m)
    checks = _spectrum_checks(rep)
    checks.append(_check("mgon-spectrum-formula", spectrum_matches(rep.spectrum(), expected, args.tol)))
    rule = "no" if args.m % 6 == 0 else "yes"
    checks.append(_check("mgon-diagonalizability-rule", rep.diagonalizable == rule, verdict=rep.diagonalizable))
    data = rep.to_json()
    data["m"] = args.m
    data["spectrum"] = format_multiset(rep.spectrum())
    data["checks"] = checks
    _emit(args, data, f"m = {args.m}\n" + rep.to_text() + "\n" + _checks_text(checks))
    return 0 if all(c["passed"] for c in checks) else 1


# -- verify ---------------------------------------------------------------------------------


def _geometry_input(args):
    """Graph, optional Cayley structure, connection and metric from the arguments."""
    cg: Optional[CayleyGraph] = None
    if args.group:
        if not args.generators:
            raise InputError("--group needs --generators")
        grp = load_group(args.group)
        try:
            cg = cayley_graph(grp, parse_generators(grp, args.generators))
        except GroupError as exc:
            raise InputError(str(exc)) from exc
        g = cg.graph
    elif args.graph:
        g = load_graph(args.graph)
    else:
        raise InputError("give a graph file or --group with --generators")
    if not is_bidirected(g):
        raise InputError("geometry needs a bidirected graph")

    def named(name):
        if name == "maurer-cartan":
            if cg is None:
                raise InputError("maurer-cartan needs a group input")
            try:
                return maurer_cartan(cg)
            except GroupError as exc:
                raise InputError(str(exc)) from exc
        raise InputError(f"unknown named connection {name!r}")

    spec = args.connection
    try:
        if spec in ("canonical", "maurer-cartan"):
            conn = connection_from_json({"named": spec}, g, named)
        else:
            conn = connection_from_json(load_json_text(_read(spec), spec), g, named)
        if args.metric == "euclidean":
            met = Metric.euclidean(g)
        else:
            met = metric_from_json(load_json_text(_read(args.metric), args.metric), g)
    except FormatError as exc:
        raise InputError(str(exc)) from exc
    return g, cg, conn, met


def run_verify(g: Digraph, conn, met, checks: List[str]) -> dict:
    results: List[dict] = []
    space = None
    space_error = None
    try:
        space = omega2_space(conn)
    except GeometryError as exc:
        space_error = str(exc)
    arrows = [Tensor.basis(g, a) for a in g.arrows]
    for name in checks:
        cid = CHECK_IDS[name]
        if name == "braid":
            ok, bad = check_braid(conn)
            results.append(_check(cid, ok, violations=bad[:20], violation_count=len(bad)))
        elif name == "metric-compat":
            ok = check_metric_compat(conn, met)
            residual = [] if ok else tensor_to_json(nabla_metric(conn, met))[:20]
            results.append(_check(cid, ok, residual=residual))
        elif space is None:
            results.append(_check(cid, False, error=f"no 2-forms: {space_error}"))
        elif name == "torsion-compat":
            results.append(_check(cid, check_torsion_compatible(conn, space)))
        elif name == "torsion":
            bad = {f"{a[0]}->{a[1]}": tensor_to_json(torsion(conn, space, w))
                   for a, w in zip(g.arrows, arrows) if not torsion(conn, space, w).is_zero()}
            results.append(_check(cid, not bad, nonzero_on=dict(list(bad.items())[:10]), nonzero_count=len(bad)))
        elif name == "curvature":
            bad = {f"{a[0]}->{a[1]}": tensor_to_json(curvature(conn, space, w))
                   for a, w in zip(g.arrows, arrows) if not curvature(conn, space, w).is_zero()}
            results.append(_check(cid, not bad, nonzero_on=dict(list(bad.items())[:10]), nonzero_count=len(bad)))
        elif name == "cotorsion":
            c = cotorsion(conn, space, met)
            results.append(_check(cid, c.is_zero(), value=tensor_to_json(c)[:40]))
        elif name == "ricci":
            s = ricci(conn, met)
            scalar = ricci_scalar(conn, met)
            detail = {"ricci": tensor_to_json(s)[:40], "scalar": [format_fraction(v) for v in scalar]}
            ok = True
            if conn.is_permutation_type() and met.is_euclidean():
                ok = ricci_permutation_euclidean(conn) == s
                detail["closed_form_compared"] = True
            results.append(_check(cid, ok, **detail))
    info = {"omega2_dimension": space.dimension if space else None}
    if space is not None:
        coh = derham_cohomology(conn, space)
        info.update({"h0": coh.h0, "h1": coh.h1})
    if space_error:
        info["omega2_error"] = space_error
    return {"checks": results, "info": info}


def cmd_verify(args) -> int:
    g, cg, conn, met = _geometry_input(args)
    checks = VERIFY_CHECKS if not args.checks else [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in CHECK_IDS]
    if unknown:
        raise InputError(f"unknown checks: {', '.join(unknown)} (choose from {', '.join(VERIFY_CHECKS)})")
    data = run_verify(g, conn, met, checks)
    info = data["info"]
    text = _checks_text(data["checks"])
    text += f"\nOmega^2 dimension: {info['omega2_dimension']}"
    if "h1" in info:
        text += f"; H^0 = {info['h0']}, H^1 = {info['h1']}"
    _emit(args, data, text)
    return 0 if all(c["passed"] for c in data["checks"]) else 1


# -- cayley -------------------------------------------------------------------------------


def cmd_cayley(args) -> int:
    grp = load_group(args.group)
    try:
        gens = parse_generators(grp, args.generators)
        cg = cayley_graph(grp, gens)
    except GroupError as exc:
        raise InputError(str(exc)) from exc
    g = cg.graph
    bundle: Dict = {
        "group_order": grp.order,
        "generators": [grp.labels[a] for a in gens.elements],
        "flags": {"closed_under_inverse": gens.closed_under_inverse, "ad_stable": gens.ad_stable,
                  "generates": gens.generates},
        "graph": format_digraph(g),
    }
    checks = []
    if gens.ad_stable:
        conn = maurer_cartan(cg)
        bundle["connection"] = connection_to_json(conn)
        inv = invariant_form_laplacian(cg)
        roots = roots_to_multiset(poly_roots(charpoly(inv)))
        bundle["invariant_laplacian"] = {
            "basis": [grp.labels[a] for a in gens.elements],
            "matrix": [[format_fraction(v) for v in row] for row in inv.rows],
            "eigenvalues": format_multiset([z.real for z in roots]),
        }
        met = Metric.euclidean(g)
        checks.append(_check("braid-relations", check_braid(conn)[0]))
        checks.append(_check("metric-compatibility", check_metric_compat(conn, met)))
    else:
        bundle["connection"] = None
        bundle["note"] = "generating set is not stable under conjugation; no Maurer-Cartan connection"
    reports = spectrum_reports(g, args.tol)
    bundle["spectrum"] = [dict(r.to_json(), spectrum=format_multiset(r.spectrum())) for r in reports]
    for r in reports:
        checks.extend(_spectrum_checks(r))
    if grp.is_abelian():
        ana = circulant_eigenvectors(cg, args.tol)
        bundle["character_eigenvectors"] = {
            "candidates": len(ana.candidates),
            "independent": ana.independent_count,
            "numeric_rank": ana.numeric_rank,
            "max_residual": float(f"{ana.max_residual:.3g}"),
        }
        checks.append(_check("character-eigenvectors", ana.max_residual <= args.tol))
    bundle["checks"] = checks
    if args.emit_dir:
        os.makedirs(args.emit_dir, exist_ok=True)
        with open(os.path.join(args.emit_dir, "graph.txt"), "w", encoding="utf-8") as fh:
            fh.write(bundle["graph"])
        if bundle["connection"] is not None:
            with open(os.path.join(args.emit_dir, "connection.json"), "w", encoding="utf-8") as fh:
                fh.write(dump_json(bundle["connection"]))
    lines = [f"group of order {grp.order}, generators {', '.join(bundle['generators'])}",
             f"{g.n_vertices} vertices, {g.n_arrows} arrows"]
    if "invariant_laplacian" in bundle:
        lines.append("invariant-form Laplacian eigenvalues: " + bundle["invariant_laplacian"]["eigenvalues"])
    for r in reports:
        lines.append("edge spectrum: " + format_multiset(r.spectrum()) + f" (diagonalizable: {r.diagonalizable})")
    if "character_eigenvectors" in bundle:
        ce = bundle["character_eigenvectors"]
        lines.append(f"character eigenvectors: {ce['independent']} independent of {ce['candidates']}")
    lines.append(_checks_text(checks))
    _emit(args, bundle, "\n".join(lines))
    return 0 if all(c["passed"] for c in checks) else 1


# -- calculus ---------------------------------------------------------------------------------


def run_calculus_suite(g: Digraph, seed: int, trials: int, lams: List[Fraction]) -> List[dict]:
    rng = random.Random(seed)
    n = g.n_vertices

    def rand_f():
        return ScalarFunction(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n))

    checks = []
    leib = inner = True
    for _ in range(trials):
        f, h = rand_f(), rand_f()
        leib &= d(g, f * h) == d(g, f).right(h) + d(g, h).left(f)
        inner &= commutator(theta(g), f) == d(g, f)
    checks.append(_check("leibniz-rule", leib))
    checks.append(_check("inner-calculus", inner))
    k = kernel_of_d_dimension(g)
    checks.append(_check("kernel-of-d", (k == 1) == is_weakly_connected(g), dimension=k))
    r = surjectivity_rank(g)
    checks.append(_check("surjectivity", r == g.n_arrows, rank=r))
    if is_bidirected(g) and g.n_arrows:
        met = Metric.euclidean(g)
        lap0 = matrix_operator(g, vertex_laplacian(g).scale(2))
        for lam in lams:
            ctx = ExtendedCalculus(g, lap0, met.bracket(), lam)
            ok_l = ok_i = True
            for _ in range(trials):
                f, h = rand_f(), rand_f()
                ok_l &= ctx.d_tilde(f * h) == ctx.right(ctx.d_tilde(f), h) + ctx.left(f, ctx.d_tilde(h))
                ok_i &= ctx.commutator(ctx.theta(), f) == ctx.d_tilde(f)
            checks.append(_check("extended-leibniz", ok_l, lam=format_fraction(lam)))
            checks.append(_check("extended-inner", ok_i, lam=format_fraction(lam)))
    return checks


def cmd_calculus(args) -> int:
    g = load_graph(args.graph)
    try:
        lams = [Fraction(s) for s in args.lam.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --lam value: {args.lam}") from exc
    checks = run_calculus_suite(g, args.seed, args.trials, lams)
    _emit(args, {"seed": args.seed, "checks": checks}, _checks_text(checks))
    return 0 if all(c["passed"] for c in checks) else 1


# -- entry point --------------------------------------------------------------------------------


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-9, help="numeric tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites (default 0)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="ncgraph", description="Exact geometry and edge Laplacians of finite graphs")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of the canonical edge Laplacian")
    s.add_argument("graph", help="edge-list file")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("mgon", parents=[common], help="edge Laplacian spectrum of the m-gon")
    s.add_argument("m", type=int)
    s.set_defaults(func=cmd_mgon)

    s = sub.add_parser("verify", parents=[common], help="check a connection and metric")
    s.add_argument("graph", nargs="?", help="edge-list file (or use --group)")
    s.add_argument("--group", help="group spec (cyclic:n, sym:n, product:A,B) or table file")
    s.add_argument("--generators", help="comma separated generator labels")
    s.add_argument("--connection", default="canonical", help="canonical, maurer-cartan or a JSON file")
    s.add_argument("--metric", default="euclidean", help="euclidean or a JSON file")
    s.add_argument("--checks", help=f"comma separated subset of {','.join(VERIFY_CHECKS)}")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cayley", parents=[common], help="Cayley graph with its invariant geometry")
    s.add_argument("group", help="group spec or table file")
    s.add_argument("generators", help="comma separated generator labels")
    s.add_argument("--emit-dir", help="also write graph.txt and connection.json here")
    s.set_defaults(func=cmd_cayley)

    s = sub.add_parser("calculus", parents=[common], help="property checks of the differential calculus")
    s.add_argument("graph", help="edge-list file")
    s.add_argument("--lam", default="0,1,1/2", help="extension parameters (default 0,1,1/2)")
    s.add_argument("--trials", type=int, default=10)
    s.set_defaults(func=cmd_calculus)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphError, LaplacianError, GroupError, GeometryError, FormatError) as exc:
        print(f"ncgraph: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
