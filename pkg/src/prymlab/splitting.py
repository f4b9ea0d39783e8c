"""Canonical splittings, two-step towers, and the conversions between the
lattice-graph constructions on nine points.

Blocks are always runs of consecutive indices: block s holds the letters
s*d .. s*d + d - 1, matching the layout of a repeated matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .coverings import BranchPoint, CoveringData, galois_closure, quotient_covering, validate_covering
from .errors import ValidationError
from .graphs import PrymGraph, lattice_complement, lattice_graph
from .permgroups import Perm, PermGroup, block_stabilizer, induced_action, parse_cycles
from .prym import build_triple, dimensions


# ---------------------------------------------------------------------------
# canonical splitting


def _components(M):
    n = M.shape[0]
    seen = [-1] * n
    comps = []
    for start in range(n):
        if seen[start] >= 0:
            continue
        comp = [start]
        seen[start] = len(comps)
        i = 0
        while i < len(comp):
            x = comp[i]
            for y in np.nonzero(M[x])[0].tolist():
                if seen[y] < 0:
                    seen[y] = len(comps)
                    comp.append(y)
            i += 1
        comps.append(tuple(sorted(comp)))
    return comps


@dataclass(frozen=True, eq=False)
class SplitResult:
    blocks: tuple
    quotient: CoveringData  # h, of degree m
    block_actions: tuple  # induced block permutation of each branch point
    d: int
    genus_total: int
    genus_quotient: int
    complete_blocks: bool  # A = J_d - I_d
    simple: bool

    @property
    def m(self):
        return len(self.blocks)


def _relative_ramification(perm, block_perm, d):
    """Ramification of f over one branch point: sum of (|c|/e - 1) over the
    cycles c, where e is the length of the block cycle under c."""
    total = 0
    for c in perm.cycles(include_fixed=True):
        e = _block_cycle_length(block_perm, c[0] // d)
        if len(c) % e:
            raise AssertionError("cycle length is not a multiple of its block cycle length")
        total += len(c) // e - 1
    return total


def _block_cycle_length(block_perm, b):
    n, x = 1, block_perm(b)
    while x != b:
        x = block_perm(x)
        n += 1
    return n


def canonical_split(triple):
    """Split the covering along the connected components of the matrix graph."""
    A = triple.graph.matrix
    if triple.m < 2:
        raise ValidationError("preconditions-violated", "canonical splitting needs m >= 2")
    if not np.isin(A, (0, 1)).all() or np.any(np.diag(A)):
        raise ValidationError("preconditions-violated", "canonical splitting needs a 0/1 matrix with zero diagonal")
    if len(_components(A)) != 1:
        raise ValidationError("preconditions-violated", "eigenvalue k is not simple (A is disconnected)")
    d, m = triple.d, triple.m
    blocks = tuple(_components(triple.matrix))
    expected = tuple(tuple(range(s * d, s * d + d)) for s in range(m))
    if blocks != expected:
        raise AssertionError("components of a repeated matrix are its diagonal blocks")
    actions = []
    lower = []
    ram_f = 0
    for b in triple.covering.branch_points:
        act = induced_action(b.perm, blocks)
        if act is None:
            raise ValidationError("block-action-broken", f"branch point {b.label} does not permute the blocks")
        actions.append(act)
        if not act.is_identity():
            lower.append(BranchPoint(b.label, act))
        ram_f += _relative_ramification(b.perm, act, d)
    quotient = validate_covering(m, lower)
    g_low = quotient.genus
    if ram_f % 2:
        raise AssertionError("odd relative ramification")
    g_total = triple.genus
    if d * (g_low - 1) + 1 + ram_f // 2 != g_total:
        raise AssertionError("genus does not recompose through the tower")
    complete = bool(np.array_equal(A, np.ones((d, d), dtype=np.int64) - np.eye(d, dtype=np.int64)))
    res = SplitResult(blocks, quotient, tuple(actions), d, g_total, g_low, complete, False)
    object.__setattr__(res, "simple", is_simple_split(res, triple))
    return res


def usual_prym_dims(split, genus_C):
    """(d+, d-) for (J_d - I_d)^{+m}: d- is the quotient genus."""
    if not split.complete_blocks:
        raise ValidationError("preconditions-violated", "matrix part is not (J_d - I_d) repeated")
    return genus_C - split.genus_quotient, split.genus_quotient


def classify_branch(perm, block_perm, d):
    """'double' for a block transposition lifting to d disjoint 2-cycles,
    'simple' for a single transposition inside one block, else 'other'."""
    cyc = perm.cycles()
    if block_perm.is_identity():
        if len(cyc) == 1 and len(cyc[0]) == 2:
            return "simple"
        return "other"
    bc = block_perm.cycles()
    if len(bc) == 1 and len(bc[0]) == 2 and len(cyc) == d and all(len(c) == 2 for c in cyc):
        return "double"
    return "other"


def branch_type_counts(split, triple):
    counts = {"simple": 0, "double": 0, "other": 0}
    for b, act in zip(triple.covering.branch_points, split.block_actions):
        counts[classify_branch(b.perm, act, split.d)] += 1
    return counts


def is_simple_split(split, triple):
    return all(
        classify_branch(b.perm, act, split.d) != "other"
        for b, act in zip(triple.covering.branch_points, split.block_actions)
    )


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class TowerBranch:
    label: str
    kind: str  # "block" or "inner"
    perm: Perm


@dataclass(frozen=True, eq=False)
class TowerSpec:
    d: int
    m: int
    branch_points: tuple

    def __post_init__(self):
        object.__setattr__(self, "branch_points", tuple(self.branch_points))
        if self.d < 2 or self.m < 2:
            raise ValidationError("tower-invalid", f"tower needs d, m >= 2, got d={self.d}, m={self.m}")
        blocks = self.blocks
        for b in self.branch_points:
            if b.kind not in ("block", "inner"):
                raise ValidationError("tower-invalid", f"branch point {b.label}: unknown kind {b.kind!r}")
            if b.perm.degree != self.d * self.m:
                raise ValidationError("tower-invalid", f"branch point {b.label} has degree {b.perm.degree}")
            act = induced_action(b.perm, blocks)
            if act is None:
                raise ValidationError("tower-invalid", f"branch point {b.label} does not permute the blocks")
            if (b.kind == "inner") != act.is_identity():
                raise ValidationError("tower-invalid", f"branch point {b.label} is tagged {b.kind} but acts {'trivially' if act.is_identity() else 'nontrivially'} on blocks")
        validate_covering(self.d * self.m, [(b.label, b.perm) for b in self.branch_points])

    @property
    def blocks(self):
        return tuple(tuple(range(s * self.d, s * self.d + self.d)) for s in range(self.m))

    @cached_property
    def covering(self):
        return validate_covering(self.d * self.m, [(b.label, b.perm) for b in self.branch_points])

    def __eq__(self, other):
        return (
            isinstance(other, TowerSpec)
            and (self.d, self.m) == (other.d, other.m)
            and self.branch_points == other.branch_points
        )

    def to_spec(self):
        from .permgroups import format_cycles

        return {
            "d": self.d,
            "m": self.m,
            "branch_points": [{"label": b.label, "kind": b.kind, "perm": format_cycles(b.perm)} for b in self.branch_points],
        }


def complete_block_graph(d):
    """J_d - I_d with the full symmetric group as generators."""
    M = np.ones((d, d), dtype=np.int64) - np.eye(d, dtype=np.int64)
    gens = [Perm.from_cycles([[0, 1]], d)]
    if d > 2:
        gens.append(Perm.from_cycles([list(range(d))], d))
    return PrymGraph(f"J{d}-I{d}", M, gens)


def from_tower(tower, tag="plus"):
    """The (J_d - I_d)^{+m} triple of a tower.  Letters in one block lie in
    one fiber of f, so the labelling is block compatible by construction."""
    return build_triple(complete_block_graph(tower.d), tower.m, tower.covering, tag)


def tower_from_split(split, triple):
    branches = []
    for b, act in zip(triple.covering.branch_points, split.block_actions):
        branches.append(TowerBranch(b.label, "inner" if act.is_identity() else "block", b.perm))
    return TowerSpec(split.d, split.m, branches)


# ---------------------------------------------------------------------------
# the nine-point lattice and its complement


def _residue_label(r):
    """Residue mod 3 to a 1-based label, with 0 read as 3."""
    return 3 if r % 3 == 0 else r % 3


def xi_isomorphism():
    """(i, j) -> (i - j, i + j) over residues mod 3, as a permutation of the
    row-major indices; carries L2(3) adjacency to complement adjacency."""

    def f(x):
        i, j = x // 3 + 1, x % 3 + 1
        a, b = _residue_label(i - j), _residue_label(i + j)
        return (a - 1) * 3 + (b - 1)

    xi = Perm.from_function(9, f)
    L, C = lattice_graph(3).matrix, lattice_complement(3).matrix
    idx = np.array(xi.images)
    if not np.array_equal(C[np.ix_(idx, idx)], L):
        raise AssertionError("xi does not carry L2(3) onto its complement")
    return xi


def grid_perm(n, alpha, beta):
    """(i, j) -> (alpha(i), beta(j)) on the row-major n x n grid."""
    return Perm.from_function(n * n, lambda x: alpha(x // n) * n + beta(x % n))


def swap_reflection(n, tau):
    """(i, j) -> (tau(j), tau^-1(i)), the reflection (tau, tau^-1) after the
    coordinate swap."""
    inv = ~tau
    return Perm.from_function(n * n, lambda x: tau(x % n) * n + inv(x // n))


def phi(n, h):
    """phi_0..phi_3: swap reflections for tau = id, (1 n), (2 n), (1 2 ... n)."""
    taus = ["()", f"(1 {n})", f"(2 {n})", "(" + " ".join(str(i) for i in range(1, n + 1)) + ")"]
    return swap_reflection(n, parse_cycles(taus[h], n))


def sigma_factor(n, factor, h):
    """sigma_{factor,h}: the transposition (1 h+1) on one coordinate."""
    t = Perm.from_cycles([[0, h]], n)
    ident = Perm.identity(n)
    return grid_perm(n, t, ident) if factor == 1 else grid_perm(n, ident, t)


def decompose_grid(n, perm):
    """(alpha, beta, swapped) with perm = (alpha, beta) or (alpha, beta) after
    the swap; None if perm is neither."""
    img = perm.images

    def coords(x):
        return divmod(img[x], n)

    # straight: row index depends only on i, column only on j
    alpha = [coords(i * n)[0] for i in range(n)]
    beta = [coords(j)[1] for j in range(n)]
    if sorted(alpha) == list(range(n)) and sorted(beta) == list(range(n)):
        if all(img[i * n + j] == alpha[i] * n + beta[j] for i in range(n) for j in range(n)):
            return Perm(alpha), Perm(beta), False
    # swapped: (i, j) -> (alpha(j), beta(i))
    alpha = [coords(j)[0] for j in range(n)]
    beta = [coords(i * n)[1] for i in range(n)]
    if sorted(alpha) == list(range(n)) and sorted(beta) == list(range(n)):
        if all(img[i * n + j] == alpha[j] * n + beta[i] for i in range(n) for j in range(n)):
            return Perm(alpha), Perm(beta), True
    return None


def swap_reflection_tau(n, perm):
    """tau if perm = (tau, tau^-1) after the swap, else None."""
    dec = decompose_grid(n, perm)
    if dec is None or not dec[2]:
        return None
    alpha, beta, _ = dec
    if beta != ~alpha:
        return None
    return alpha


def factor_transposition(n, perm):
    """1 or 2 if perm is a transposition on one coordinate only, else None."""
    dec = decompose_grid(n, perm)
    if dec is None or dec[2]:
        return None
    alpha, beta, _ = dec
    if beta.is_identity() and alpha.cycle_type() == (2,):
        return 1
    if alpha.is_identity() and beta.cycle_type() == (2,):
        return 2
    return None


@dataclass(frozen=True)
class ConversionResult:
    source: object
    target: object
    direction: str  # "to_complement" or "to_lattice"
    l: int
    l1: int
    l2: int
    identities: tuple  # (name, holds) for the four conjugation identities


def conjugation_identities():
    """The four identities relating the reflections phi_h on L2(3) and the
    sigma_{m,h} on the complement, conjugated by xi (p-then-q)."""
    xi = xi_isomorphism()
    p = [phi(3, h) for h in range(4)]
    s11, s12 = sigma_factor(3, 1, 1), sigma_factor(3, 1, 2)
    s21, s22 = sigma_factor(3, 2, 1), sigma_factor(3, 2, 2)

    def tr(x):
        return ~xi * x * xi

    return (
        ("sigma_11 ~ phi_0", tr(p[0]) == s11),
        ("sigma_12 ~ phi_0 phi_3 phi_0^-1", tr(~p[0] * p[3] * p[0]) == s12),
        ("sigma_21 ~ phi_1 phi_2 phi_1^-1", tr(~p[1] * p[2] * p[1]) == s21),
        ("sigma_22 ~ phi_2", tr(p[2]) == s22),
    )


def _type_l_count(triple):
    if triple.degree != 9 or triple.m != 1:
        raise ValidationError("not-type-l", "type l lives on nine points with m = 1")
    for b in triple.covering.branch_points:
        if swap_reflection_tau(3, b.perm) is None:
            raise ValidationError("not-type-l", f"branch point {b.label} is not a swap reflection")
    nb = len(triple.covering.branch_points)
    if nb < 8 or nb % 2:
        raise ValidationError("not-type-l", f"{nb} branch points; type l needs 2l + 8")
    return (nb - 8) // 2


def _type_l1l2_counts(triple, n):
    counts = {1: 0, 2: 0}
    for b in triple.covering.branch_points:
        f = factor_transposition(n, b.perm)
        if f is None:
            raise ValidationError("not-type-l1l2", f"branch point {b.label} is not a one-coordinate transposition")
        counts[f] += 1
    l1 = counts[1] / 2 - (n - 1)
    l2 = counts[2] / 2 - (n - 1)
    if l1 < 0 or l2 < 0 or l1 != int(l1) or l2 != int(l2):
        raise ValidationError("not-type-l1l2", f"branch counts {counts[1]}, {counts[2]} are not 2(l + n - 1)")
    return int(l1), int(l2)


def convert_type_l(triple, direction="to_complement"):
    """Transport a type-l triple over L2(3) to a type-(l1, l2) triple over the
    complement by xi (or back), relabelling every branch permutation."""
    xi = xi_isomorphism()
    idents = conjugation_identities()
    if not all(ok for _, ok in idents):
        raise AssertionError("conjugation identities fail")
    if direction == "to_complement":
        l = _type_l_count(triple)
        graph = lattice_complement(3)
        conj = lambda p: ~xi * p * xi  # noqa: E731
    elif direction == "to_lattice":
        graph = lattice_graph(3)
        conj = lambda p: xi * p * ~xi  # noqa: E731
    else:
        raise ValidationError("invalid-parameter", f"unknown direction {direction!r}")
    cov = validate_covering(9, [BranchPoint(b.label, conj(b.perm)) for b in triple.covering.branch_points])
    out = build_triple(graph, 1, cov, triple.tag)
    if direction == "to_complement":
        l1, l2 = _type_l1l2_counts(out, 3)
    else:
        l1, l2 = _type_l1l2_counts(triple, 3)
        l = _type_l_count(out)
    if l1 + l2 != l:
        raise AssertionError("l1 + l2 differs from l")
    return ConversionResult(triple, out, direction, l, l1, l2, idents)


# ---------------------------------------------------------------------------
# fiber products over the complement lattice


@dataclass(frozen=True, eq=False)
class FiberProductReport:
    n: int
    l1: int
    l2: int
    h1: CoveringData
    h2: CoveringData
    genus1: int
    genus2: int
    order_G: int
    order_H: int
    order_intersection: int
    intersection_is_stabilizer: bool
    join_is_G: bool
    d_plus: int

    @property
    def dimension_matches(self):
        return self.d_plus == self.genus1 + self.genus2


def analyze_type_l1l2(triple):
    """Quotients of a type-(l1, l2) triple on the complement of L2(n) by the
    row and column block stabilizers."""
    d = triple.degree
    n = int(round(d**0.5))
    if n * n != d or triple.m != 1:
        raise ValidationError("not-type-l1l2", "needs a single n x n grid")
    l1, l2 = _type_l1l2_counts(triple, n)
    model = galois_closure(triple.covering)
    G = model.group
    rows = [tuple(i * n + j for j in range(n)) for i in range(n)]
    cols = [tuple(i * n + j for i in range(n)) for j in range(n)]
    H1 = block_stabilizer(G, rows, 0)
    H2 = block_stabilizer(G, cols, 0)
    h1 = quotient_covering(model, H1)
    h2 = quotient_covering(model, H2)
    inter = block_stabilizer(H1, cols, 0)
    H = model.stabilizer
    same = inter.order() == H.order() and all(inter.contains(g) for g in H.generators)
    join = PermGroup(list(H1.generators) + list(H2.generators), d)
    dims = dimensions(triple)
    return FiberProductReport(
        n=n, l1=l1, l2=l2, h1=h1, h2=h2, genus1=h1.genus, genus2=h2.genus,
        order_G=G.order(), order_H=H.order(), order_intersection=inter.order(),
        intersection_is_stabilizer=same, join_is_G=join.order() == G.order(), d_plus=dims.d_plus,
    )


# ---------------------------------------------------------------------------
# six-point towers and nine-point coverings
#
# On six letters, 0..2 are y_1..y_3 and 3..5 are z_1..z_3.  A nine-point
# letter (i, j) stands for the pair {y_i, z_j}.


def _pair_action(perm):
    """Action of a six-point permutation on the pairs {y_i, z_j}."""

    def f(x):
        i, j = divmod(x, 3)
        a, b = perm(i), perm(3 + j)
        if a < 3:  # sides preserved
            if b < 3:
                raise ValidationError("lrr-invalid", f"{perm} does not preserve the y/z sides")
            return a * 3 + (b - 3)
        if b >= 3:
            raise ValidationError("lrr-invalid", f"{perm} does not preserve the y/z sides")
        return b * 3 + (a - 3)

    return Perm.from_function(9, f)


def _check_etale(covering):
    blocks = ((0, 1, 2), (3, 4, 5))
    for b in covering.branch_points:
        act = induced_action(b.perm, blocks)
        if act is None:
            raise ValidationError("lrr-invalid", f"branch point {b.label} does not preserve the sides")
        e = 1 if act.is_identity() else 2
        if any(len(c) != e for c in b.perm.cycles(include_fixed=True)):
            raise ValidationError("not-etale", f"branch point {b.label} ramifies in the 3:1 part")


def lrr_build(tower):
    """Nine-point type-l triple over L2(3) from a six-point tower whose 3:1
    part is étale."""
    cov = tower.covering if isinstance(tower, TowerSpec) else tower
    if cov.degree != 6:
        raise ValidationError("lrr-invalid", f"expected degree 6, got {cov.degree}")
    _check_etale(cov)
    out = validate_covering(9, [BranchPoint(b.label, _pair_action(b.perm)) for b in cov.branch_points])
    return build_triple(lattice_graph(3), 1, out)


@dataclass(frozen=True, eq=False)
class LrrTower:
    tower: TowerSpec
    genus_base: int  # genus of the double-cover base X
    genus_total: int
    round_trip: bool


def lrr_recover(triple):
    """Six-point tower of a type-l triple.

    Each branch permutation (i, j) -> (tau(j), tau^-1(i)) yields the
    side-swapping permutation y_i -> z_{tau^-1(i)}, z_j -> y_{tau(j)}.
    """
    _type_l_count(triple)
    branches = []
    for b in triple.covering.branch_points:
        tau = swap_reflection_tau(3, b.perm)
        inv = ~tau
        img = [0] * 6
        for i in range(3):
            img[i] = 3 + inv(i)
            img[3 + i] = tau(i)
        branches.append(TowerBranch(b.label, "block", Perm(img)))
    tower = TowerSpec(3, 2, branches)
    _check_etale(tower.covering)
    rebuilt = lrr_build(tower)
    same = rebuilt.covering.same_monodromy(triple.covering)
    quotient = validate_covering(2, [(b.label, Perm([1, 0])) for b in branches])
    return LrrTower(tower, quotient.genus, tower.covering.genus, same)
