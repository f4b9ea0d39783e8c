from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prymlab import fixtures as fx
from prymlab.coverings import validate_covering
from prymlab.errors import ValidationError
from prymlab.graphs import lattice_complement, lattice_graph, repeat_matrix
from prymlab.permgroups import Perm, PermGroup, induced_action, parse_cycles
from prymlab.prym import build_triple, dimensions
from prymlab.splitting import (
    TowerBranch,
    TowerSpec,
    analyze_type_l1l2,
    branch_type_counts,
    canonical_split,
    conjugation_identities,
    convert_type_l,
    from_tower,
    is_simple_split,
    lrr_build,
    lrr_recover,
    phi,
    tower_from_split,
    usual_prym_dims,
    xi_isomorphism,
)


def _lattice_pair_triple():
    """L2(3) repeated twice; each lattice branch point acts on both blocks."""
    perms = []
    for p in fx.lattice_witness(3, 0).perms:
        perms.append(Perm(list(p.images) + [9 + x for x in p.images]))
    swap = Perm([x + 9 for x in range(9)] + list(range(9)))
    return build_triple(lattice_graph(3), 2, validate_covering(18, perms + [swap, swap]))


# --- canonical splitting ------------------------------------------------------


def test_split_simple_case_one():
    t = from_tower(fx.simple_tower(1))
    s = canonical_split(t)
    assert (s.m, s.d, s.quotient.degree) == (3, 2, 3)
    assert branch_type_counts(s, t) == {"simple": 4, "double": 10, "other": 0}
    assert (t.genus, s.genus_quotient) == (7, 3)
    assert usual_prym_dims(s, t.genus) == (4, 3)


def test_split_simple_case_two():
    t = from_tower(fx.simple_tower(2))
    s = canonical_split(t)
    assert s.quotient.degree == 4 and len(s.quotient) == 18
    assert branch_type_counts(s, t)["double"] == 18
    assert (t.genus, s.genus_quotient) == (11, 6)
    assert usual_prym_dims(s, t.genus) == (5, 6)


def test_split_lattice_pair():
    t = _lattice_pair_triple()
    s = canonical_split(t)
    assert [len(b) for b in s.blocks] == [9, 9]
    with pytest.raises(ValidationError, match="preconditions"):
        usual_prym_dims(s, t.genus)


def test_split_preconditions():
    with pytest.raises(ValidationError, match="preconditions"):
        canonical_split(fx.lattice_triple(3, 0))


@pytest.mark.parametrize("case", [1, 2])
def test_tower_round_trip(case):
    tower = fx.simple_tower(case)
    t = from_tower(tower)
    s = canonical_split(t)
    assert tower_from_split(s, t) == tower
    again = from_tower(tower_from_split(s, t))
    assert again.covering.same_monodromy(t.covering)


@pytest.mark.parametrize("case", [1, 2])
def test_split_blocks_invariant_under_relabelling(case):
    t = from_tower(fx.simple_tower(case))
    base = canonical_split(t).blocks
    for g in repeat_matrix(t.graph, t.m, certify=False).generators:
        moved = t.with_covering(t.covering.relabel(g))
        s = canonical_split(moved)
        assert s.blocks == base and s.genus_quotient == canonical_split(t).genus_quotient


@pytest.mark.parametrize("case", [1, 2])
def test_usual_prym_matches_dimension_formula(case):
    t = from_tower(fx.simple_tower(case))
    s = canonical_split(t)
    d = dimensions(t)
    assert (d.d_plus, d.d_minus) == usual_prym_dims(s, t.genus)
    assert d.d_plus + d.d_minus == t.genus


def test_tower_validation():
    bad = parse_cycles("(1 3)(2 4)", 6)
    with pytest.raises(ValidationError, match="tower-invalid"):
        TowerSpec(2, 3, [TowerBranch("x", "inner", bad), TowerBranch("y", "inner", bad)])
    with pytest.raises(ValidationError, match="tower-invalid"):
        TowerSpec(2, 3, [TowerBranch("x", "block", parse_cycles("(1 3)", 6))])
    with pytest.raises(ValidationError, match="tower-invalid"):
        TowerSpec(1, 3, [])


# --- simplicity ---------------------------------------------------------------


@pytest.mark.parametrize("case", [1, 2])
def test_simple_fixtures_accepted(case):
    t = from_tower(fx.simple_tower(case))
    s = canonical_split(t)
    assert s.simple and is_simple_split(s, t)


def _with_extra(case, perms):
    tower = fx.simple_tower(case)
    extra = [TowerBranch(f"v{i}", "inner" if kind == "inner" else "block", p) for i, (kind, p) in enumerate(perms)]
    return from_tower(TowerSpec(tower.d, tower.m, list(tower.branch_points) + extra))


def test_double_inner_transposition_rejected():
    p = parse_cycles("(1 2)(3 4)", 6)
    t = _with_extra(1, [("inner", p), ("inner", p)])
    assert not is_simple_split(canonical_split(t), t)


def test_block_three_cycle_rejected():
    p = parse_cycles("(1 3 5)(2 4 6)", 6)
    t = _with_extra(1, [("block", p), ("block", p), ("block", p)])
    assert not is_simple_split(canonical_split(t), t)


def test_block_swap_with_inner_branching_rejected():
    # swaps blocks 1 and 2 but as a 4-cycle, so f ramifies in that fiber
    p = parse_cycles("(1 3 2 4)", 6)
    t = _with_extra(1, [("block", p), ("block", ~p)])
    assert not is_simple_split(canonical_split(t), t)


# --- the nine-point isomorphism -----------------------------------------------


def test_xi_transports_adjacency():
    xi = xi_isomorphism()
    L, C = lattice_graph(3).matrix, lattice_complement(3).matrix
    for x in range(9):
        for y in range(x + 1, 9):
            assert L[x, y] == C[xi(x), xi(y)]


def test_xi_squared_is_matrix_square():
    xi = xi_isomorphism()

    def lin(i, j):  # (0 -2; 2 0) on residues, labels 1..3 with 3 read as 0
        a, b = (-2 * j) % 3, (2 * i) % 3
        return ((a - 1) % 3) * 3 + (b - 1) % 3

    expect = Perm.from_function(9, lambda x: lin(x // 3 + 1, x % 3 + 1))
    assert xi * xi == expect


def test_conjugation_identities():
    assert all(ok for _, ok in conjugation_identities())


@pytest.mark.parametrize("l", [1, 2])
def test_convert_type_l(l):
    t = fx.lattice_triple(3, l)
    conv = convert_type_l(t)
    assert conv.l == l and conv.l1 + conv.l2 == l
    a, b = dimensions(t), dimensions(conv.target)
    assert (a.genus, a.d_plus, a.d_minus, a.fixed_point_free) == (b.genus, b.d_plus, b.d_minus, b.fixed_point_free)
    back = convert_type_l(conv.target, "to_lattice")
    assert back.target.covering.same_monodromy(t.covering)


def test_convert_rejects_other_monodromy():
    with pytest.raises(ValidationError, match="not-type-l"):
        convert_type_l(fx.exponent_triple(3, 1, 0))


# --- fiber products -----------------------------------------------------------


@pytest.mark.parametrize("n,l1,l2", [(3, 1, 1), (4, 2, 0), (3, 0, 2), (4, 1, 2)])
def test_fiber_product(n, l1, l2):
    rep = analyze_type_l1l2(fx.exponent_triple(n, l1, l2))
    assert (rep.genus1, rep.genus2) == (l1, l2)
    assert rep.h1.degree == rep.h2.degree == n
    assert rep.intersection_is_stabilizer and rep.join_is_G
    assert rep.d_plus == l1 + l2
    assert rep.order_intersection == rep.order_H


def test_fiber_product_rejects_swaps():
    with pytest.raises(ValidationError, match="not-type-l1l2"):
        analyze_type_l1l2(fx.twisted_triple(3, 0, 0))


# --- six-point towers -----------------------------------------------------------


@pytest.mark.parametrize("l", [1, 2])
def test_lrr_round_trip(l):
    tower = fx.lrr_tower(l)
    t = lrr_build(tower)
    assert t.genus == 3 * l + 4
    assert all(set(p.cycle_type()) == {2} for p in t.covering.perms)
    order = t.covering.group.order()
    assert 72 % order == 0 and t.covering.group.is_transitive()
    rec = lrr_recover(t)
    assert rec.round_trip and rec.genus_base == l + 3
    assert rec.tower == tower
    assert len(tower.branch_points) == 2 * l + 8


@pytest.mark.parametrize("l", [1, 2])
def test_lrr_recovers_lattice_fixture(l):
    rec = lrr_recover(fx.lattice_triple(3, l))
    assert rec.round_trip
    blocks = ((0, 1, 2), (3, 4, 5))
    for b in rec.tower.branch_points:
        assert not induced_action(b.perm, blocks).is_identity()
        assert all(len(c) == 2 for c in b.perm.cycles(include_fixed=True))


def test_lrr_rejects_ramified_three_to_one():
    p, q = parse_cycles("(1 2)", 6), parse_cycles("(2 3)", 6)
    w = parse_cycles("(1 4)(2 5)(3 6)", 6)
    cov = validate_covering(6, [p, p, q, q, w, w])
    with pytest.raises(ValidationError, match="not-etale"):
        lrr_build(cov)


def test_lrr_recover_rejects_non_swapping():
    with pytest.raises(ValidationError, match="not-type-l"):
        lrr_recover(fx.exponent_triple(3, 1, 0))


@given(st.lists(st.integers(0, 3), min_size=0, max_size=3))
@settings(max_examples=15, deadline=None)
def test_lrr_image_structure(extra):
    ph = [phi(3, h) for h in range(4)]
    perms = []
    for h in [0, 1, 2, 3] + extra:
        perms += [ph[h], ph[h]]
    t = build_triple(lattice_graph(3), 1, validate_covering(9, perms))
    rec = lrr_recover(t)
    assert rec.round_trip
    G = PermGroup(lrr_build(rec.tower).covering.perms)
    assert 72 % G.order() == 0 and G.is_transitive()
