"""The full pipeline behind ``latmax analyze``: one JSON-ready report per job."""

from __future__ import annotations

from dataclasses import dataclass

from .building import (
    InvariantComplex,
    classify_vertices,
    complex_dimension,
    enumerate_complex,
    simplices,
    tropical_hull_verify,
)
from .config import JobSpec
from .lattice import _canon, dual_lattice, load_representation
from .maxlat import (
    Subquotient,
    check_sharp_above,
    maximal_with_socle,
    realize_sharp,
    sharp_above,
    sharp_subquotients,
    theta,
)
from .modrep import (
    all_submodules,
    composition_series,
    cosocle,
    dual_module,
    is_isomorphic,
    module_length,
    restrict,
    socle,
    socle_filtration,
)
from .ribet import (
    ExtensionGraph,
    ResidualFactors,
    bellaiche_verify,
    brute_force_edges,
    check_edge_witness,
    extension_graph,
    realised_extensions,
    residual_factors,
    vertex_factors,
)


@dataclass
class Analysis:
    spec: JobSpec
    rep: object
    complex: InvariantComplex
    factors: ResidualFactors
    graph: ExtensionGraph
    report: dict


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _matrix_json(m) -> list:
    return [list(r) for r in m]


def _json_entry(e):
    return list(e) if isinstance(e, tuple) else e


def _module_json(m) -> dict:
    return {lab: _matrix_json(g) for lab, g in zip(m.labels, m.generators)}


def _theta_suite(x: InvariantComplex, rf: ResidualFactors):
    """Round trip of realize_sharp and theta on every vertex, plus the sharp count bound."""
    rows = []
    cap = x.rep.cap
    for i, lat in enumerate(x.vertices):
        m = lat.reduction
        subs = all_submodules(m, cap)
        sharp = sharp_subquotients(m, cap, subs)
        hits = []
        for q in sharp:
            v = realize_sharp(lat, q, rf.classes)
            hits.append(theta(lat, v) == q)
        series = composition_series(m, cap)
        pairs = [Subquotient(a, b, m) for a, b in zip(series, series[1:])]
        above_ok = all(check_sharp_above(m, q, sharp_above(m, q, cap, subs)) for q in pairs)
        rows.append({
            "vertex": i,
            "sharp": len(sharp),
            "length": module_length(m, cap),
            "round_trip": all(hits),
            "sharp_above": above_ok,
        })
    return rows


def analyze_spec(spec: JobSpec, workers: int = 1) -> Analysis:
    rep, base = load_representation(spec)
    cap = rep.cap
    x = enumerate_complex(rep, max_vertices=spec.max_vertices, workers=workers)
    rf = residual_factors(rep, x)
    x = classify_vertices(x, rf.classes)
    dim = complex_dimension(x)
    names = [c.name for c in rf.classes]
    g = extension_graph(x, rf)
    brute = brute_force_edges(x, rf)
    soundness = all(
        check_edge_witness(x.vertices[x.index(w.vertex)].reduction, w.submodule, j, i, rf)
        for (j, i), ws in g.edges.items() for w in ws
    )
    bell = bellaiche_verify(rep, g, rf)
    exts = []
    for i in range(rf.r):
        for j in range(rf.r):
            e = realised_extensions(x, rf, i, j)
            if e.classes or i != j:
                exts.append(e)
    hull = tropical_hull_verify(x)
    theta_rows = _theta_suite(x, rf)

    n_max = len(x.maximal)
    n_ext = len(x.extremal)
    mult_free = all(m == 1 for m in rf.multiplicities)

    # one maximal vertex per simple class, exactly one when the multiplicity is 1
    per_class = []
    for c, mlt in zip(rf.classes, rf.multiplicities):
        vx, unique = maximal_with_socle(base, c, mlt, rf.classes)
        holders = [i for i, v in enumerate(x.info) if v.is_maximal and v.socle_classes == ((c.id, 1),)]
        per_class.append({
            "class": c.name,
            "vertex": x.index(vx.key),
            "unique_flag": unique,
            "maximal_vertices_with_this_socle": holders,
            "ok": bool(holders) and (not unique or len(holders) == 1) and x.index(vx.key) in holders,
        })

    duality = []
    for i, v in enumerate(x.info):
        if not v.is_maximal:
            continue
        m = v.lattice.reduction
        d = dual_lattice(v.lattice)
        lhs = cosocle(d.reduction, cap)
        rhs = dual_module(restrict(m, socle(m, cap)))
        duality.append({"vertex": i, "ok": is_isomorphic(lhs, rhs) is not None})

    vertices = []
    for i, (lat, v) in enumerate(zip(x.vertices, x.info)):
        filt = socle_filtration(lat.reduction, cap)
        vertices.append({
            "index": i,
            "key": lat.key.to_json(),
            "maximal": v.is_maximal,
            "extremal": v.is_extremal,
            "socle": [names[c] for c, k in v.socle_classes for _ in range(k)],
            "length": v.length,
            "loewy_length": len(filt),
            "factors": list(vertex_factors(lat.reduction, rf)),
            "reduction": _module_json(lat.reduction),
        })

    verdicts = {
        "count_bound": n_max >= 1 + dim and (not mult_free or n_max == 1 + dim),
        "extremal_contains_maximal": n_ext >= n_max and all(v.is_extremal for v in x.info if v.is_maximal),
        "maximal_per_class": all(r["ok"] for r in per_class),
        "theta_surjectivity": all(r["round_trip"] for r in theta_rows),
        "sharp_count_bound": all(r["sharp"] >= r["length"] for r in theta_rows),
        "sharp_above": all(r["sharp_above"] for r in theta_rows),
        "edge_soundness": soundness,
        "edge_oracle": g.edge_set == brute,
        "path_bound": all(c.ok for c in bell.checks),
        "strong_connectivity": bell.strongly_connected,
        "uniqueness": all(e.ok for e in exts),
        "tropical_hull": all(r[2] for r in hull.reconstruction) and hull.closure_ok,
        "hull_minimality": all(ok for _, ok in hull.minimality),
        "duality": all(r["ok"] for r in duality),
    }

    report = {
        "job": {
            "name": spec.name,
            "spec_sha256": spec.sha256,
            "p": spec.p,
            "flavor": spec.flavor,
            "precision": spec.precision,
            "caps": spec.caps_json(),
            "labels": sorted(spec.labels),
        },
        "lattice": {
            "dim": rep.dim,
            "closure_steps": rep.closure_steps,
            "base_exponent": rep.base_exp,
            "base_basis_columns": [
                [_json_entry(_canon(rep.base_ctx, e)) for e in col]
                for col in zip(*rep.base_matrix)
            ],
            "residual": _module_json(base.reduction),
        },
        "complex": {
            "vertices": vertices,
            "edges": [list(e) for e in x.edges],
            "base": x.base,
            "dimension": dim,
            "simplex_count": len(simplices(x)),
            "maximal_count": n_max,
            "extremal_count": n_ext,
        },
        "maxlat": {
            "theta": theta_rows,
            "maximal_with_socle": per_class,
        },
        "ribet": {
            "factors": rf.to_json(),
            "r": rf.r,
            "multiplicity_free": mult_free,
            "graph": {
                "nodes": names,
                "edges": [
                    {"from": names[j], "to": names[i], "witnesses": sorted(x.index(w.vertex) for w in ws)}
                    for (j, i), ws in sorted(g.edges.items())
                ],
                "brute_force_edges": sorted([names[j], names[i]] for j, i in brute),
                "strongly_connected": bell.strongly_connected,
                "weakly_connected": bell.weakly_connected,
            },
            "path_bound": [
                {"from": names[c.source], "to": names[c.target], "level": c.level,
                 "distance": c.distance, "ok": c.ok}
                for c in bell.checks
            ],
            "realised_extensions": [
                {"top": names[e.top], "sub": names[e.sub], "classes": len(e.classes),
                 "sources": [x.index(r.source) for r in e.classes],
                 "unique_expected": e.unique_expected, "ok": e.ok}
                for e in exts
            ],
        },
        "hull": {
            "reconstruction": [{"vertex": i, "witness": list(w), "ok": ok} for i, w, ok in hull.reconstruction],
            "minimality": [{"vertex": i, "ok": ok} for i, ok in hull.minimality],
            "closure_is_complex": hull.closure_ok,
        },
        "duality": duality,
        "verdicts": {k: _verdict(v) for k, v in verdicts.items()},
    }
    return Analysis(spec, rep, x, rf, g, report)


def strip_precision(report: dict) -> dict:
    """The report without the fields that legitimately depend on N."""
    out = dict(report)
    out["job"] = {k: v for k, v in report["job"].items() if k != "precision"}
    out.pop("precision_check", None)
    return out


def analyze_checked(spec: JobSpec, workers: int = 1, extra: int = 4) -> Analysis:
    """Run at N and N + extra; the report records whether both agree."""
    a = analyze_spec(spec, workers)
    b = analyze_spec(spec.with_overrides(precision=spec.precision + extra), workers)
    agree = strip_precision(a.report) == strip_precision(b.report)
    a.report["precision_check"] = {
        "precisions": [spec.precision, spec.precision + extra],
        "agree": agree,
    }
    a.report["verdicts"]["precision_stability"] = _verdict(agree)
    return a


def failed_verdicts(report: dict) -> list:
    return sorted(k for k, v in report["verdicts"].items() if v != "PASS")
