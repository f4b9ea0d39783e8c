from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import fraction_identity, srg_counts
from prymlab.errors import ValidationError
from prymlab.graphs import (
    PrymGraph,
    QuadSurd,
    SrgParams,
    certify_prym,
    classify_binary_prym,
    complement_params,
    complete_graph_union,
    displacing_automorphism,
    explicit_graph,
    latin_square_graph,
    latin_translation,
    lattice_complement,
    lattice_graph,
    lattice_map,
    paley_graph,
    repeat_matrix,
    schlaefli_graph,
    schlaefli_labels,
    spectrum_of,
    validate_srg,
)
from prymlab.permgroups import Perm, parse_cycles


def cycle_graph(n):
    a = np.zeros((n, n), dtype=int)
    for i in range(n):
        a[i, (i + 1) % n] = a[(i + 1) % n, i] = 1
    return a


def catalog():
    return [
        lattice_graph(3), lattice_graph(4), lattice_graph(5),
        lattice_complement(3), lattice_complement(4), lattice_complement(6),
        latin_square_graph(4), latin_square_graph(5),
        schlaefli_graph(),
        complete_graph_union(2, 1), complete_graph_union(3, 2), complete_graph_union(1, 3),
    ]


# --- constructors -----------------------------------------------------------


def test_lattice_examples():
    assert validate_srg(lattice_graph(3)).as_tuple() == (9, 4, 1, 2)
    assert lattice_graph(4).matrix[0].sum() == 6
    assert validate_srg(lattice_graph(5)).as_tuple() == (25, 8, 3, 2)


def test_lattice_row_major_labels():
    g = lattice_graph(4)
    assert g.labels[(2 - 1) * 4 + (3 - 1)] == "(2,3)"


@pytest.mark.parametrize("n", range(3, 9))
def test_lattice_family_counts(n):
    assert srg_counts(lattice_graph(n).matrix.tolist()) == (n * n, 2 * (n - 1), n - 2, 2)
    assert srg_counts(lattice_complement(n).matrix.tolist()) == (n * n, (n - 1) ** 2, (n - 2) ** 2, (n - 1) * (n - 2))


def test_lattice_complement_examples():
    assert validate_srg(lattice_complement(3)).as_tuple() == (9, 4, 1, 2)
    assert validate_srg(lattice_complement(4)).as_tuple() == (16, 9, 4, 6)
    c = lattice_complement(6).certificate
    assert (c.k, c.r_plus, c.r_minus) == (25, 1, -5)


def test_latin_square_examples():
    assert validate_srg(latin_square_graph(4)).as_tuple() == (16, 9, 4, 6)
    c = latin_square_graph(5).certificate
    assert (c.k, c.r_plus, c.r_minus) == (12, 2, -3)
    g = latin_square_graph(4)
    t = latin_translation(4, 1, 1)
    assert np.array_equal(g.matrix[np.ix_(t.images, t.images)], g.matrix)


def test_schlaefli_examples():
    g = schlaefli_graph()
    assert validate_srg(g).as_tuple() == (27, 10, 1, 5)
    c = g.certificate
    assert (c.k, c.r_plus, c.r_minus) == (10, 1, -5)
    assert [sum(1 for x in range(27) if t(x) == x) for t in g.generators] == [15] * 6
    assert schlaefli_labels()[:2] == ("a1", "a2") and schlaefli_labels()[12] == "c12"
    assert schlaefli_labels()[-1] == "c56"


def test_schlaefli_incidence_rules():
    g, lab = schlaefli_graph(), schlaefli_labels()
    idx = {name: i for i, name in enumerate(lab)}
    assert g.adjacent(idx["a1"], idx["b2"]) and not g.adjacent(idx["a1"], idx["b1"])
    assert g.adjacent(idx["a1"], idx["c12"]) and not g.adjacent(idx["a3"], idx["c12"])
    assert g.adjacent(idx["c12"], idx["c34"]) and not g.adjacent(idx["c12"], idx["c13"])


def test_paley_examples():
    assert validate_srg(paley_graph(5)).as_tuple() == (5, 2, 0, 1)
    spec = spectrum_of(SrgParams(5, 2, 0, 1))
    assert spec.r_plus == QuadSurd(-1, 1, 5) and spec.r_minus == QuadSurd(-1, -1, 5)
    assert not spec.integral
    assert validate_srg(paley_graph(13)).as_tuple() == (13, 6, 2, 3)
    for q in (7, 9, 4):
        with pytest.raises(ValidationError, match="invalid-parameter"):
            paley_graph(q)


def test_complete_union_examples():
    g = complete_graph_union(2, 1)
    assert g.d == 4
    spec = spectrum_of(SrgParams(4, 1, 0, 0))
    assert {str(v): m for v, m in spec.multiplicities.items()} == {"1": 2, "-1": 2}
    assert validate_srg(complete_graph_union(3, 2)).as_tuple() == (9, 2, 1, 0)
    k4 = spectrum_of(validate_srg(complete_graph_union(1, 3)))
    assert set(k4.multiplicities) == {QuadSurd.of(3), QuadSurd.of(-1)}


@pytest.mark.parametrize("ctor", [lattice_graph, lattice_complement, latin_square_graph])
def test_small_n_rejected(ctor):
    with pytest.raises(ValidationError, match="invalid-parameter"):
        ctor(2)


# --- validation -------------------------------------------------------------


def test_validate_examples():
    assert validate_srg(cycle_graph(5)).as_tuple() == (5, 2, 0, 1)
    path = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    with pytest.raises(ValidationError, match="not-regular"):
        validate_srg(path)
    with pytest.raises(ValidationError, match="not-strongly-regular"):
        validate_srg(cycle_graph(6))
    with pytest.raises(ValidationError):
        validate_srg(np.zeros((3, 3), dtype=int))


def test_srg_feasibility_enforced():
    with pytest.raises(ValidationError, match="infeasible"):
        SrgParams(10, 3, 1, 1)


def test_nontrivial_flag():
    assert SrgParams(9, 4, 1, 2).nontrivial
    assert not SrgParams(9, 2, 1, 0).nontrivial


# --- spectra ----------------------------------------------------------------


def test_spectrum_examples():
    s = spectrum_of(SrgParams(27, 10, 1, 5))
    assert (s.r_plus, s.r_minus) == (QuadSurd.of(1), QuadSurd.of(-5))
    s = spectrum_of(SrgParams(9, 4, 1, 2))
    assert (int(s.r_plus), int(s.r_minus)) == (1, -2)


@pytest.mark.parametrize("graph", catalog(), ids=lambda g: g.name)
def test_spectrum_matches_numeric_eigenvalues(graph):
    params = validate_srg(graph)
    spec = spectrum_of(params)
    assert sum(spec.multiplicities.values()) == graph.d
    assert spec.r_minus < 0 <= spec.r_plus and spec.r_plus <= spec.k
    ev = np.sort(np.linalg.eigvalsh(graph.matrix.astype(float)))
    expect = np.sort(np.concatenate([np.full(m, float(v)) for v, m in spec.multiplicities.items()]))
    assert np.allclose(ev, expect, atol=1e-8)


def test_quadsurd_ordering():
    a = QuadSurd.make(-1, 1, 5)
    assert QuadSurd.of(0) < a < QuadSurd.of(1)
    assert QuadSurd.make(0, 1, 8) == QuadSurd(0, 2, 2)
    assert str(QuadSurd.of(3)) == "3"


# --- certificates -----------------------------------------------------------


def test_certify_examples():
    g = lattice_graph(4)
    c = certify_prym(g.matrix, g.generators)
    assert (c.k, c.r_plus, c.r_minus) == (6, 2, -2)
    p = paley_graph(5)
    with pytest.raises(ValidationError, match="no-integer-spectrum"):
        certify_prym(p.matrix, p.generators)
    with pytest.raises(ValidationError, match="no-integer-spectrum"):
        certify_prym(np.eye(2, dtype=int), [Perm([1, 0])])


def test_certify_errors():
    g = lattice_graph(3)
    with pytest.raises(ValidationError, match="generator-not-automorphism"):
        certify_prym(g.matrix, [parse_cycles("(1 2)", 9)])
    with pytest.raises(ValidationError, match="not-transitive"):
        certify_prym(g.matrix, [g.generators[0]])
    a = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    with pytest.raises(ValidationError, match="not-transitive|row-sums"):
        certify_prym(a, [])
    with pytest.raises(ValidationError, match="not-automorphism"):
        PrymGraph("bad", g.matrix, [parse_cycles("(1 2)", 9)])


def test_certify_with_loops_and_weights():
    # A = 2I + L2(3) still satisfies a quadratic relation with shifted roots
    g = lattice_graph(3)
    A = g.matrix + 2 * np.eye(9, dtype=int)
    c = certify_prym(A, g.generators)
    assert (c.k, c.r_plus, c.r_minus) == (6, 3, 0)


@pytest.mark.parametrize("graph", catalog(), ids=lambda g: g.name)
def test_catalog_quadratic_identity_exact(graph):
    c = graph.certificate
    assert fraction_identity(graph.matrix.tolist(), c.r_plus, c.r_minus, graph.d)
    assert c.orbit_size == graph.d
    assert all(r == c.k for r in graph.matrix.sum(axis=1))


def test_repeat_examples():
    j2 = explicit_graph([[0, 1], [1, 0]], [Perm([1, 0])])
    r = repeat_matrix(j2, 3)
    assert r.d == 6
    assert np.array_equal(r.matrix, np.kron(np.eye(3, dtype=int), [[0, 1], [1, 0]]))
    assert repeat_matrix(j2, 1) is j2
    l3 = lattice_graph(3)
    rep = repeat_matrix(l3, 2)
    c = l3.certificate
    assert c.c == 2
    assert fraction_identity(rep.matrix.tolist(), c.r_plus, c.r_minus, 9)
    assert rep.group.is_transitive()
    with pytest.raises(ValidationError):
        repeat_matrix(j2, 0)


# --- derived parameters -----------------------------------------------------


def test_complement_params_examples():
    assert complement_params(SrgParams(9, 4, 1, 2)).as_tuple() == (9, 4, 1, 2)
    assert complement_params(SrgParams(27, 10, 1, 5)).as_tuple() == (27, 16, 10, 8)
    assert validate_srg(schlaefli_graph().complement()).as_tuple() == (27, 16, 10, 8)
    assert complement_params(SrgParams(16, 6, 2, 2)).as_tuple() == (16, 9, 4, 6)


@st.composite
def feasible_params(draw):
    graph = draw(st.sampled_from(catalog()[:9]))
    return validate_srg(graph)


@given(feasible_params())
def test_complement_params_involution(params):
    assert complement_params(complement_params(params)) == params


def test_classify_examples():
    g = lattice_graph(4)
    assert classify_binary_prym(g.certificate, g).as_tuple() == (16, 6, 2, 2)
    s = schlaefli_graph()
    p = classify_binary_prym(s.certificate, s)
    assert (p.lam, p.mu) == (1, 5)
    c = lattice_complement(3)
    p = classify_binary_prym(c.certificate, c)
    assert (p.lam, p.mu) == (1, 2)


@pytest.mark.parametrize("graph", [g for g in catalog() if validate_srg(g).mu > 0], ids=lambda g: g.name)
def test_classify_agrees_with_counting(graph):
    assert classify_binary_prym(graph.certificate, graph) == validate_srg(graph)


# --- displacing automorphisms -----------------------------------------------


def test_displacing_examples():
    t12 = parse_cycles("(1 2)", 4)
    assert displacing_automorphism(lattice_complement(4), lattice_map(4, sigma=t12))
    assert not displacing_automorphism(lattice_complement(4), lattice_map(4, sigma=t12, tau=t12))
    s = parse_cycles("(1 2 3 4 5)", 5)
    assert displacing_automorphism(lattice_graph(5), lattice_map(5, sigma=s, tau=~s, swap=True))
    with pytest.raises(ValidationError, match="not-an-automorphism"):
        displacing_automorphism(lattice_graph(3), parse_cycles("(1 2)", 9))
