from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prymlab import fixtures as fx
from prymlab.coverings import BranchPoint, validate_covering
from prymlab.errors import ValidationError
from prymlab.graphs import explicit_graph, lattice_complement, lattice_graph
from prymlab.permgroups import Perm, PermGroup, parse_cycles
from prymlab.prym import (
    build_triple,
    check_matrix_identities,
    check_quadratic_identity,
    complement_dual,
    dimensions,
    double_coset_weights,
    fiber_matrix,
    fixed_point_analysis,
)
from prymlab.splitting import from_tower


def test_build_triple_examples():
    t = fx.schlaefli_triple(8)
    assert t.degree == 27
    raw = parse_cycles("(1 2)", 9)
    good = list(fx.exponent_witness(3, 0, 0).branch_points)
    bad = validate_covering(9, good + [("raw1", raw), ("raw2", raw)])
    with pytest.raises(ValidationError, match="monodromy-not-automorphic.*raw1"):
        build_triple(lattice_complement(3), 1, bad)
    t = from_tower(fx.simple_tower(1))
    assert t.m == 3 and t.d == 2


def test_build_triple_degree_mismatch():
    with pytest.raises(ValidationError, match="degree-mismatch"):
        build_triple(lattice_graph(3), 2, fx.lattice_witness(3, 0))


def test_fiber_matrix_examples():
    t = fx.exponent_triple(3, 1, 0)
    fm = fiber_matrix(t)
    assert set(fm.matrix.sum(axis=1).tolist()) == {4}
    assert fm.is_symmetric()
    assert fiber_matrix(fx.schlaefli_triple(7)).bidegree == (10, 10)


def test_double_coset_weight_examples():
    t = fx.exponent_triple(3, 1, 0)
    ws = double_coset_weights(t)
    ident = [w for w in ws if w.point == 0]
    assert ident[0].weight == -1
    assert {w.weight for w in ws if w.point != 0} <= {0, 1}
    minus = build_triple(t.graph, 1, t.covering, "minus")
    assert [w.weight for w in double_coset_weights(minus) if w.point == 0] == [2]


def test_double_coset_weights_regular_s2():
    # H is trivial, so each element is its own double coset: weights -r and s_21 = 1
    j2 = explicit_graph([[0, 1], [1, 0]], [Perm([1, 0])])
    cov = validate_covering(2, [Perm([1, 0])] * 2)
    ws = double_coset_weights(build_triple(j2, 1, cov))
    assert sorted(w.weight for w in ws) == [-1, 1]
    assert sum(w.size for w in ws) == 2


@pytest.mark.parametrize(
    "triple",
    [fx.lattice_triple(3, 1), fx.schlaefli_triple(7), fx.exponent_triple(4, 1, 1), from_tower(fx.simple_tower(1))],
    ids=["L2(3)", "schlaefli", "comp-L2(4)", "J2-I2 x3"],
)
def test_quadratic_identity_holds(triple):
    assert check_quadratic_identity(triple).ok


def test_quadratic_identity_detects_corruption():
    t = fx.schlaefli_triple(7)
    M = np.array(t.matrix)
    M[3, 5] += 1
    res = check_matrix_identities(M, 27, 10, 1, -5)
    assert not res.ok and res.which == "quadratic"


def test_fixed_point_examples():
    n, l1 = 4, 1
    t = fx.twisted_triple(n, l1, 0)
    rep = fixed_point_analysis(t)
    t_points = [b for b in rep.branches if b.label.startswith("t")]
    assert all(b.contribution == n * (n - 1) // 2 for b in t_points)
    assert rep.intersection_number == (l1 + 1) * (n - 1) * n
    assert fixed_point_analysis(fx.schlaefli_triple(9)).fixed_point_free
    assert fixed_point_analysis(fx.exponent_triple(3, 2, 1)).fixed_point_free


def test_fixed_point_aggregate_relabelling_invariant():
    t = fx.twisted_triple(4, 1, 1)
    base = fixed_point_analysis(t).intersection_number
    for g in t.graph.generators:
        moved = t.with_covering(t.covering.relabel(g))
        assert fixed_point_analysis(moved).intersection_number == base


def test_latin_even_n_has_fixed_points():
    rep = fixed_point_analysis(fx.latin_triple(4, 2))
    assert not rep.fixed_point_free
    assert rep.intersection_number == 32
    assert fixed_point_analysis(fx.latin_triple(5, 2)).fixed_point_free


def test_dimension_examples():
    d = dimensions(fx.schlaefli_triple(12))
    assert (d.genus, d.d_plus, d.exponent) == (46, 6, 6)
    d = dimensions(fx.lattice_triple(3, 2))
    assert (d.genus, d.d_plus, d.exponent) == (10, 2, 3)
    d = dimensions(fx.twisted_triple(6, 0, 6))
    assert (d.genus, d.d_plus) == (46, 6)
    d = dimensions(fx.latin_triple(5, 2))
    assert (d.genus, d.d_plus) == (76, 28)


def test_twisted_family_has_no_exponent():
    # fixed points rule out the Prym-Tyurin criterion even though r+ = 1
    d = dimensions(fx.twisted_triple(6, 0, 6))
    assert d.r_plus == 1 and not d.fixed_point_free and d.exponent is None


def test_d0_rules():
    t = fx.lattice_triple(3, 0)
    with pytest.raises(ValidationError):
        dimensions(t, d0=2)
    # lattice graph repeated twice, block-preserving monodromy: eta = 1
    l3 = lattice_graph(3)
    perms = []
    for p in fx.lattice_witness(3, 0).perms:
        perms.append(Perm(list(p.images) + [9 + x for x in p.images]))
    swap = Perm([x + 9 for x in range(9)] + list(range(9)))
    cov = validate_covering(18, perms + [swap, swap])
    t2 = build_triple(l3, 2, cov)
    d = dimensions(t2)
    assert d.eta == 1 and d.d0 == 0 and d.d_plus + d.d_minus + d.d0 == d.genus
    d_alt = dimensions(t2, d0=0)
    assert d_alt.d_plus == d.d_plus


@pytest.mark.parametrize("n,l", [(3, 0), (3, 2), (4, 1), (5, 3)])
def test_complement_dual(n, l):
    t = fx.lattice_triple(n, l)
    dual = complement_dual(t)
    assert dual.tag == "minus"
    a, b = dimensions(t), dimensions(dual)
    assert a.d_tagged == b.d_tagged
    assert (a.d_plus, a.d_minus) == (b.d_minus, b.d_plus)
    assert a.intersection_number + b.intersection_number == t.covering.ramification()
    back = complement_dual(dual)
    assert np.array_equal(back.matrix, t.matrix) and back.tag == t.tag


def test_complement_dual_known_values():
    a = dimensions(fx.lattice_triple(3, 0))
    b = dimensions(complement_dual(fx.lattice_triple(3, 0)))
    assert (a.genus, a.d_plus, a.d_minus, a.intersection_number) == (4, 0, 4, 0)
    assert (b.d_plus, b.d_minus, b.intersection_number) == (4, 0, 24)


def test_complement_dual_needs_single_block():
    with pytest.raises(ValidationError):
        complement_dual(from_tower(fx.simple_tower(2)))


@given(st.integers(3, 5), st.integers(0, 2), st.integers(0, 2), st.booleans())
@settings(max_examples=25, deadline=None)
def test_dimension_sum_identity(n, l1, l2, twisted):
    t = fx.twisted_triple(n, l1, l2) if twisted else fx.exponent_triple(n, l1, l2)
    d = dimensions(t)
    assert d.d_plus + d.d_minus + d.eta * d.d0 == d.genus
    assert min(d.d_plus, d.d_minus) >= 0


@given(st.integers(0, 8))
@settings(max_examples=9, deadline=None)
def test_aggregate_invariant_under_common_conjugation(k):
    t = fx.schlaefli_triple(8)
    G = PermGroup(t.graph.generators)
    g = list(G.elements())[k * 97]
    cov = validate_covering(27, [BranchPoint(b.label, b.perm.conjugate(g)) for b in t.covering.branch_points])
    assert fixed_point_analysis(t.with_covering(cov)).intersection_number == 0
