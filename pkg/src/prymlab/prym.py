"""Prym triples: a certified Prym matrix, a repetition count m and a
covering of degree m*d whose monodromy preserves the repeated matrix.

The abelian varieties attached to a triple are represented only by integer
invariants (genus, dimensions, exponent).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .coverings import CoveringData, galois_closure
from .errors import ValidationError
from .graphs import PrymGraph, first_violation, quadratic_identity_violation
from .permgroups import orbits

TAGS = ("plus", "minus")


@dataclass(frozen=True, eq=False)
class PrymTriple:
    graph: PrymGraph  # the single block A, carrying its certificate
    m: int
    covering: CoveringData
    tag: str = "plus"

    @property
    def d(self):
        return self.graph.d

    @property
    def degree(self):
        return self.m * self.graph.d

    @property
    def certificate(self):
        return self.graph.certificate

    @property
    def r(self):
        return self.certificate.eigenvalue(self.tag)

    @cached_property
    def matrix(self):
        """A repeated m times along the diagonal."""
        big = np.kron(np.eye(self.m, dtype=np.int64), self.graph.matrix)
        big.setflags(write=False)
        return big

    @property
    def genus(self):
        return self.covering.genus

    def with_covering(self, covering):
        return build_triple(self.graph, self.m, covering, self.tag)


def build_triple(graph, m, covering, tag="plus"):
    """Check that every branch permutation is an automorphism of A^{+m}."""
    if tag not in TAGS:
        raise ValidationError("invalid-parameter", f"eigenvalue tag must be plus or minus, got {tag!r}")
    if not isinstance(m, int) or m < 1:
        raise ValidationError("invalid-parameter", f"repetition count must be >= 1, got {m}")
    graph.certificate  # raises if A is not a Prym matrix
    if covering.degree != m * graph.d:
        raise ValidationError("degree-mismatch", f"covering degree {covering.degree} != m*d = {m * graph.d}")
    triple = PrymTriple(graph, m, covering, tag)
    M = triple.matrix
    for b in covering.branch_points:
        bad = first_violation(M, b.perm)
        if bad is not None:
            i, j = bad
            raise ValidationError(
                "monodromy-not-automorphic",
                f"branch point {b.label}: entry ({i + 1},{j + 1}) = {M[i, j]} is sent to "
                f"({b.perm(i) + 1},{b.perm(j) + 1}) = {M[b.perm(i), b.perm(j)]}",
            )
    return triple


# ---------------------------------------------------------------------------
# fiber matrix and Galois-level weights


@dataclass(frozen=True, eq=False)
class CorrespondenceMatrix:
    matrix: np.ndarray

    @property
    def bidegree(self):
        rows = set(self.matrix.sum(axis=1).tolist())
        cols = set(self.matrix.sum(axis=0).tolist())
        if len(rows) != 1 or len(cols) != 1:
            raise AssertionError("fiber matrix is not of constant bidegree")
        return rows.pop(), cols.pop()

    def shifted(self, r):
        """The weight matrix M - r I."""
        return self.matrix - r * np.eye(self.matrix.shape[0], dtype=np.int64)

    def is_symmetric(self):
        return bool(np.array_equal(self.matrix, self.matrix.T))


def fiber_matrix(triple):
    """Multiplicities of the correspondence on an unramified labelled fiber."""
    return CorrespondenceMatrix(triple.matrix)


@dataclass(frozen=True)
class DoubleCosetWeight:
    representative: object  # a group element g
    point: int  # the image of letter 0 under g
    points: tuple  # H-orbit of that point
    size: int  # |HgH|
    weight: int


def double_coset_weights(triple):
    """Weights (g e_1, e_1)_r on the H-H double cosets of G, H = Stab(0).

    Since H\\G is the fiber, double cosets are the H-orbits on letters; the
    weight of HgH is S[0^g, 0] - r [0^g = 0].  Also replays the fiber
    identity: for every letter i and any g with 0^g = i, row i of S - rI has
    the entry w(p) at position p^g.
    """
    model = galois_closure(triple.covering)
    G, H = model.group, model.stabilizer
    S = triple.matrix
    r = triple.r
    h_order = H.order()
    out = []
    weight_of = {}
    for orb in orbits(H.generators, triple.degree):
        ws = {int(S[p, 0]) - r * (p == 0) for p in orb}
        if len(ws) != 1:
            raise AssertionError(f"weight not constant on the double coset through letter {orb[0] + 1}")
        w = ws.pop()
        for p in orb:
            weight_of[p] = w
        rep = G.transversal_element(0, orb[0])
        out.append(DoubleCosetWeight(rep, orb[0], tuple(orb), h_order * len(orb), w))
    shifted = fiber_matrix(triple).shifted(r)
    for i in range(triple.degree):
        g = G.transversal_element(0, i)
        row = np.zeros(triple.degree, dtype=np.int64)
        for p, w in weight_of.items():
            row[g(p)] += w
        if not np.array_equal(row, shifted[i]):
            raise AssertionError(f"weighted fiber identity fails in row {i + 1}")
    if sum(x.size for x in out) != G.order():
        raise AssertionError("double coset sizes do not partition G")
    return out


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    witness: tuple | None = None  # (i, j, lhs, rhs), 0-based, on failure
    which: str = ""

    def __bool__(self):
        return self.ok


def check_matrix_identities(M, d, k, r_plus, r_minus, complement=None):
    """Quadratic identity (M - r+ I)(M - r- I) = c J^{+m} with blocks of size
    d, and, if ``complement`` is given, (M - r+ I) + (M' + (r+ + 1) I) = J^{+m}.
    """
    c = Fraction((k - r_plus) * (k - r_minus), d)
    bad = quadratic_identity_violation(M, r_plus, r_minus, c, blocks_of=d)
    if bad is not None:
        return IdentityCheck(False, bad, "quadratic")
    if complement is not None:
        n = M.shape[0]
        eye = np.eye(n, dtype=np.int64)
        J = np.kron(np.eye(n // d, dtype=np.int64), np.ones((d, d), dtype=np.int64))
        total = (M - r_plus * eye) + (complement + (r_plus + 1) * eye)
        wrong = np.argwhere(total != J)
        if len(wrong):
            i, j = (int(x) for x in wrong[0])
            return IdentityCheck(False, (i, j, int(total[i, j]), int(J[i, j])), "complement")
    return IdentityCheck(True)


def check_quadratic_identity(triple):
    cert = triple.certificate
    M = fiber_matrix(triple).matrix
    comp = None
    A = triple.graph.matrix
    if np.isin(A, (0, 1)).all() and not np.any(np.diag(A)):
        comp = np.kron(np.eye(triple.m, dtype=np.int64), 1 - A - np.eye(triple.d, dtype=np.int64))
    return check_matrix_identities(M, triple.d, cert.k, cert.r_plus, cert.r_minus, comp)


# ---------------------------------------------------------------------------
# fixed points and intersection numbers


@dataclass(frozen=True)
class CycleFixedPoints:
    cycle: tuple  # letters of the cycle factor, 0-based
    sets: dict  # entry value s -> sorted tuple of t with S[j, tau^t j] = s

    @property
    def length(self):
        return len(self.cycle)

    @property
    def contribution(self):
        return sum(s * len(ts) for s, ts in self.sets.items())


@dataclass(frozen=True)
class BranchFixedPoints:
    label: str
    cycles: tuple

    @property
    def contribution(self):
        return sum(c.contribution for c in self.cycles)


@dataclass(frozen=True)
class FixedPointReport:
    branches: tuple
    s_diag: int

    @property
    def intersection_number(self):
        return sum(b.contribution for b in self.branches)

    @property
    def fixed_point_free(self):
        return all(not c.sets for b in self.branches for c in b.cycles)

    def nonempty(self):
        """(label, cycle, s, ts) for every nonempty set."""
        return [(b.label, c.cycle, s, ts) for b in self.branches for c in b.cycles for s, ts in sorted(c.sets.items())]


def _constant_diagonal(M):
    diag = set(np.diag(M).tolist())
    if len(diag) != 1:
        raise ValidationError("diagonal-not-constant", f"diagonal values {sorted(diag)}")
    return diag.pop()


def fixed_point_analysis(triple):
    """Local fixed-point sets of the diagonal-stripped correspondence.

    For each cycle tau of a branch permutation and each 1 <= t < len(tau), the
    entry S[j, tau^t j] is the same for all j in the cycle (the permutation
    is an automorphism); t belongs to the set for that value when it is
    nonzero.
    """
    M = triple.matrix
    s_diag = _constant_diagonal(M)
    branches = []
    for b in triple.covering.branch_points:
        cyc_reports = []
        for cyc in b.perm.cycles():
            l = len(cyc)
            pos = {x: i for i, x in enumerate(cyc)}
            sets = {}
            for t in range(1, l):
                vals = {int(M[j, cyc[(pos[j] + t) % l]]) for j in cyc}
                if len(vals) != 1:
                    raise AssertionError(f"entry not constant along a cycle of {b.label}")
                s = vals.pop()
                if s:
                    sets.setdefault(s, []).append(t)
            cyc_reports.append(CycleFixedPoints(tuple(cyc), {s: tuple(ts) for s, ts in sets.items()}))
        branches.append(BranchFixedPoints(b.label, tuple(cyc_reports)))
    return FixedPointReport(tuple(branches), s_diag)


# ---------------------------------------------------------------------------
# dimensions


@dataclass(frozen=True)
class DimensionReport:
    genus: int
    eta: int
    d0: int
    s_diag: int
    d_plus: int
    d_minus: int
    intersection_number: int
    fixed_point_free: bool
    k: int
    r_plus: int
    r_minus: int
    tag: str = "plus"
    exponent: int | None = None
    warnings: tuple = field(default=())

    @property
    def prym_tyurin(self):
        return self.exponent is not None

    @property
    def d_tagged(self):
        """Dimension of the variety attached to the triple's eigenvalue tag."""
        return self.d_plus if self.tag == "plus" else self.d_minus


def _solve_dimension(sign, r, r_plus, r_minus, k, eta, d0, s, g, inter):
    rhs = (k - r) * eta * d0 + (r - s) * g - k + s + Fraction(inter, 2)
    val = rhs / (sign * (r_plus - r_minus))
    if val.denominator != 1:
        raise ValidationError("non-integer-dimension", f"d_{'plus' if sign > 0 else 'minus'} = {val}")
    if val < 0:
        raise ValidationError("negative-dimension", f"d_{'plus' if sign > 0 else 'minus'} = {val}")
    return int(val)


def dimensions(triple, d0=None, fixed_points=None):
    """Dimensions d+ and d- of the two complementary varieties.

    Solves +-(r+ - r-) d+- = (k - r+-) eta d0 + (r+- - s) g - k + s + I/2
    where s is the constant diagonal, I the intersection number of the
    diagonal-stripped correspondence and eta = 1 unless k equals r+ or r-.
    For m = 1, d0 is 0; for m >= 2 it defaults to the genus of the canonical
    quotient curve.
    """
    cert = triple.certificate
    k, rp, rm = cert.k, cert.r_plus, cert.r_minus
    eta = 0 if k in (rp, rm) else 1
    warnings = []
    if triple.m == 1:
        if d0 not in (None, 0):
            raise ValidationError("invalid-parameter", "d0 is 0 when m = 1")
        d0 = 0
    elif d0 is None:
        if eta:
            from .splitting import canonical_split

            d0 = canonical_split(triple).genus_quotient
            warnings.append(f"d0 defaulted to the quotient genus {d0}")
        else:
            d0 = 0
    fp = fixed_points or fixed_point_analysis(triple)
    inter = fp.intersection_number
    g = triple.genus
    s = fp.s_diag
    d_plus = _solve_dimension(1, rp, rp, rm, k, eta, d0, s, g, inter)
    d_minus = _solve_dimension(-1, rm, rp, rm, k, eta, d0, s, g, inter)
    if d_plus + d_minus + eta * d0 != g:
        raise AssertionError("dimension sum differs from the genus")
    exponent = None
    if rp == 1 and fp.fixed_point_free and (triple.m == 1 or eta == 0):
        exponent = 1 - rm
    if not fp.fixed_point_free:
        warnings.append(f"correspondence has fixed points (intersection number {inter})")
    return DimensionReport(
        genus=g, eta=eta, d0=d0, s_diag=s, d_plus=d_plus, d_minus=d_minus,
        intersection_number=inter, fixed_point_free=fp.fixed_point_free,
        k=k, r_plus=rp, r_minus=rm, tag=triple.tag, exponent=exponent, warnings=tuple(warnings),
    )


def complement_dual(triple):
    """The triple over J - I - A with the tag swapped (r -> -r - 1).

    The covering is unchanged.  The tagged dimension is preserved; d+ of the
    dual equals d- of the original and vice versa.
    """
    if triple.m != 1:
        raise ValidationError("preconditions-violated", "complement duality needs m = 1")
    comp = triple.graph.complement()
    dual = build_triple(comp, 1, triple.covering, "minus" if triple.tag == "plus" else "plus")
    c1, c2 = triple.certificate, dual.certificate
    if c2.eigenvalue(dual.tag) != -c1.eigenvalue(triple.tag) - 1:
        raise AssertionError("complement eigenvalue is not -r-1")
    return dual


def branch_intersection_total(triple):
    """Sum over branch points of (N - number of cycles)."""
    return triple.covering.ramification()
