"""Report assembly and rendering.

Reports are plain dicts so they serialize directly; this module only
collects values computed elsewhere.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import PrymlabError, SpecError
from .graphs import spectrum_of, validate_srg
from .permgroups import format_cycles
from .prym import dimensions, fixed_point_analysis

SCHEMA = "prymlab.report/1"


def spectrum_section(spec):
    return {
        "k": spec.k,
        "r_plus": str(spec.r_plus),
        "r_minus": str(spec.r_minus),
        "integral": spec.integral,
        "multiplicities": {str(v): n for v, n in spec.multiplicities.items()},
    }


def graph_section(graph):
    out = {"name": graph.name, "d": graph.d, "group_order": graph.group.order()}
    try:
        params = validate_srg(graph)
    except PrymlabError as exc:
        out["params"] = None
        out["srg_error"] = str(exc)
    else:
        out["params"] = list(params.as_tuple())
        out["nontrivial"] = params.nontrivial
        out["spectrum"] = spectrum_section(spectrum_of(params))
    try:
        cert = graph.certificate
    except PrymlabError as exc:
        out["certificate"] = None
        out["certificate_error"] = exc.kind
        out.setdefault("warnings", []).append(str(exc))
    else:
        out["certificate"] = {"k": cert.k, "r_plus": cert.r_plus, "r_minus": cert.r_minus, "c": str(cert.c)}
    return out


def covering_section(covering):
    return {"degree": covering.degree, "branch_count": len(covering), "genus": covering.genus}


def triple_section(triple, d0=None):
    fp = fixed_point_analysis(triple)
    dims = dimensions(triple, d0=d0, fixed_points=fp)
    out = {
        "m": triple.m,
        "r": triple.tag,
        "genus": dims.genus,
        "eta": dims.eta,
        "d0": dims.d0,
        "s_diag": dims.s_diag,
        "fixed_point_free": dims.fixed_point_free,
        "intersection_number": dims.intersection_number,
        "d_plus": dims.d_plus,
        "d_minus": dims.d_minus,
        "exponent": dims.exponent,
        "prym_tyurin": dims.prym_tyurin,
    }
    nonempty = [
        {"branch": label, "cycle": "(" + " ".join(str(x + 1) for x in cyc) + ")", "s": s, "t": list(ts)}
        for label, cyc, s, ts in fp.nonempty()
    ]
    if nonempty:
        out["fixed_point_sets"] = nonempty[:50]
        out["fixed_point_sets_total"] = len(nonempty)
    return out, list(dims.warnings)


def triple_report(triple, d0=None, input_echo=None):
    tri, warnings = triple_section(triple, d0)
    rep = {
        "schema": SCHEMA,
        "graph": graph_section(triple.graph),
        "covering": covering_section(triple.covering),
        "triple": tri,
        "warnings": warnings,
    }
    if input_echo is not None:
        rep["input"] = input_echo
    return rep


def split_section(split, triple):
    from .splitting import branch_type_counts, usual_prym_dims

    out = {
        "m": split.m,
        "d": split.d,
        "genus_C": split.genus_total,
        "genus_quotient": split.genus_quotient,
        "quotient_branch_count": len(split.quotient),
        "simple": split.simple,
        "branch_types": branch_type_counts(split, triple),
    }
    if split.complete_blocks:
        dp, dm = usual_prym_dims(split, split.genus_total)
        out["usual_prym"] = {"d_plus": dp, "d_minus": dm}
    return out


def fiber_product_section(rep):
    return {
        "n": rep.n,
        "l1": rep.l1,
        "l2": rep.l2,
        "genus_C1": rep.genus1,
        "genus_C2": rep.genus2,
        "order_G": rep.order_G,
        "order_H": rep.order_H,
        "order_H1_cap_H2": rep.order_intersection,
        "intersection_is_stabilizer": rep.intersection_is_stabilizer,
        "join_is_G": rep.join_is_G,
        "d_plus": rep.d_plus,
        "dimension_matches": rep.dimension_matches,
    }


def conversion_section(conv):
    return {
        "direction": conv.direction,
        "l": conv.l,
        "l1": conv.l1,
        "l2": conv.l2,
        "identities": {name: ok for name, ok in conv.identities},
        "branch_points": [{"label": b.label, "perm": format_cycles(b.perm)} for b in conv.target.covering.branch_points],
    }


def _flatten(prefix, value, lines):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], lines)
    elif isinstance(value, list) and value and isinstance(value[0], dict):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, lines)
    else:
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value) if value else "-"
        elif value is None:
            value = "-"
        lines.append(f"{prefix}: {value}")


def render_text(report):
    lines = []
    body = {k: v for k, v in report.items() if k not in ("schema", "warnings")}
    _flatten("", body, lines)
    for w in report.get("warnings", []):
        lines.append(f"WARNING: {w}")
    return "\n".join(lines)


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(report, path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(report))
        os.replace(tmp, path)
    except OSError as exc:
        raise SpecError("io-error", f"{path}: {exc.strerror or exc}") from None
