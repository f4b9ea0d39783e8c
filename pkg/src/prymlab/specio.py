"""JSON input formats for graphs, coverings, triples and towers.

Every parse error names the offending field path (and branch label where
there is one); JSON syntax errors carry line and column.
"""
from __future__ import annotations

import json
from pathlib import Path

from .coverings import BranchPoint, validate_covering
from .errors import PrymlabError, SpecError, ValidationError
from .graphs import (
    complete_graph_union,
    explicit_graph,
    latin_square_graph,
    lattice_complement,
    lattice_graph,
    paley_graph,
    schlaefli_graph,
)
from .permgroups import parse_cycles
from .prym import TAGS, build_triple
from .splitting import TowerBranch, TowerSpec

GRAPH_KINDS = ("lattice", "lattice_complement", "latin_square", "schlaefli", "paley", "complete_union", "explicit")


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError("io-error", f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("json-syntax", f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(obj, key, where, kind=None, required=True):
    if not isinstance(obj, dict):
        raise SpecError("wrong-type", f"{where}: expected an object")
    if key not in obj:
        if required:
            raise SpecError("missing-field", f"{where}.{key} is required")
        return None
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise SpecError("wrong-type", f"{where}.{key}: expected an integer, got {val!r}")
    if kind is str and not isinstance(val, str):
        raise SpecError("wrong-type", f"{where}.{key}: expected a string, got {val!r}")
    if kind is list and not isinstance(val, list):
        raise SpecError("wrong-type", f"{where}.{key}: expected a list")
    return val


def _perm(text, degree, where):
    try:
        return parse_cycles(text, degree)
    except PrymlabError as exc:
        raise SpecError(exc.kind, f"{where}: {exc.message}") from None


def graph_from_spec(spec, where="matrix"):
    kind = _field(spec, "kind", where, str)
    if kind not in GRAPH_KINDS:
        raise SpecError("unknown-kind", f"{where}.kind: {kind!r} is not one of {', '.join(GRAPH_KINDS)}")
    if kind == "schlaefli":
        return schlaefli_graph()
    if kind in ("lattice", "lattice_complement", "latin_square"):
        n = _field(spec, "n", where, int)
        return {"lattice": lattice_graph, "lattice_complement": lattice_complement, "latin_square": latin_square_graph}[kind](n)
    if kind == "paley":
        return paley_graph(_field(spec, "q", where, int))
    if kind == "complete_union":
        return complete_graph_union(_field(spec, "m_copies", where, int), _field(spec, "k", where, int))
    rows = _field(spec, "entries", where, list)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise SpecError("wrong-type", f"{where}.entries[{i}]: expected a list of integers")
        if len(row) != len(rows):
            raise SpecError("not-square", f"{where}.entries[{i}] has {len(row)} entries, expected {len(rows)}")
    gens_text = _field(spec, "generators", where, list, required=False) or []
    gens = [_perm(g, len(rows), f"{where}.generators[{i}]") for i, g in enumerate(gens_text)]
    return explicit_graph(rows, gens)


def covering_from_spec(spec, where="covering"):
    degree = _field(spec, "degree", where, int)
    items = _field(spec, "branch_points", where, list)
    branches = []
    for i, item in enumerate(items):
        loc = f"{where}.branch_points[{i}]"
        label = _field(item, "label", loc, str)
        perm = _perm(_field(item, "perm", loc, str), degree, f"{loc} (label {label})")
        try:
            branches.append(BranchPoint(label, perm))
        except ValidationError as exc:
            raise ValidationError(exc.kind, f"{loc}: {exc.message}") from None
    return validate_covering(degree, branches)


def triple_from_spec(spec):
    graph = graph_from_spec(_field(spec, "matrix", "triple"))
    m = _field(spec, "m", "triple", int, required=False)
    m = 1 if m is None else m
    tag = _field(spec, "r", "triple", str, required=False) or "plus"
    if tag not in TAGS:
        raise SpecError("bad-value", f"triple.r: expected plus or minus, got {tag!r}")
    covering = covering_from_spec(_field(spec, "covering", "triple"))
    return build_triple(graph, m, covering, tag)


def tower_from_spec(spec, where="tower"):
    d = _field(spec, "d", where, int)
    m = _field(spec, "m", where, int)
    items = _field(spec, "branch_points", where, list)
    branches = []
    for i, item in enumerate(items):
        loc = f"{where}.branch_points[{i}]"
        label = _field(item, "label", loc, str)
        kind = _field(item, "kind", loc, str)
        perm = _perm(_field(item, "perm", loc, str), d * m, f"{loc} (label {label})")
        branches.append(TowerBranch(label, kind, perm))
    return TowerSpec(d, m, branches)


def triple_to_spec(triple, matrix_spec=None):
    if matrix_spec is None:
        matrix_spec = {"kind": "explicit", "entries": triple.graph.matrix.tolist(),
                       "generators": [format_perm(g) for g in triple.graph.generators]}
    return {"matrix": matrix_spec, "m": triple.m, "r": triple.tag, "covering": triple.covering.to_spec()}


def format_perm(p):
    from .permgroups import format_cycles

    return format_cycles(p)
