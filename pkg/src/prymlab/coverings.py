"""Coverings of the line as monodromy data.

A covering of degree N is an ordered list of branch points, each carrying a
non-trivial permutation of {0..N-1}.  The product of the branch permutations,
taken left to right in list order with the p-then-q composition of
:mod:`prymlab.permgroups`, must be the identity, and the permutations must
generate a transitive group.

A product written right to left as ``s_n ... s_1 = 1`` under function
composition is the same condition as our left-to-right product of
``[s_1, ..., s_n]``; the left-to-right form ``s_1 ... s_n = 1`` under
function composition corresponds to the reversed list.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod

from .errors import BudgetExceeded, ValidationError
from .permgroups import CosetAction, Perm, PermGroup, format_cycles, orbits

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class BranchPoint:
    label: str
    perm: Perm

    def __post_init__(self):
        if self.perm.is_identity():
            raise ValidationError("trivial-permutation", f"branch point {self.label} has trivial monodromy")


def _as_branch(item, index):
    if isinstance(item, BranchPoint):
        return item
    if isinstance(item, Perm):
        return BranchPoint(f"b{index + 1}", item)
    label, perm = item
    return BranchPoint(str(label), perm)


@dataclass(frozen=True, eq=False)
class CoveringData:
    """Certified monodromy data.  Build it through :func:`validate_covering`."""

    degree: int
    branch_points: tuple

    @property
    def perms(self):
        return [b.perm for b in self.branch_points]

    @property
    def labels(self):
        return [b.label for b in self.branch_points]

    def __len__(self):
        return len(self.branch_points)

    @cached_property
    def group(self):
        return PermGroup(self.perms, self.degree)

    @cached_property
    def genus(self):
        return genus(self)

    def ramification(self):
        return sum(self.degree - b.perm.cycle_count() for b in self.branch_points)

    def relabel(self, perm):
        """Conjugate every branch permutation: the labelling x -> perm(x)."""
        return validate_covering(self.degree, [BranchPoint(b.label, b.perm.conjugate(perm)) for b in self.branch_points])

    def same_monodromy(self, other):
        return self.degree == other.degree and self.perms == other.perms

    def to_spec(self):
        return {
            "degree": self.degree,
            "branch_points": [{"label": b.label, "perm": format_cycles(b.perm)} for b in self.branch_points],
        }


def validate_covering(degree, branch_list):
    if not isinstance(degree, int) or degree < 1:
        raise ValidationError("invalid-degree", f"degree must be a positive integer, got {degree!r}")
    branches = tuple(_as_branch(item, i) for i, item in enumerate(branch_list))
    acc = Perm.identity(degree)
    for b in branches:
        if b.perm.degree != degree:
            raise ValidationError("degree-mismatch", f"branch point {b.label} has degree {b.perm.degree}, expected {degree}")
        acc = acc * b.perm
    if not acc.is_identity():
        raise ValidationError("product-not-identity", f"ordered product of the branch permutations is {acc}")
    orbs = orbits([b.perm for b in branches], degree)
    if len(orbs) != 1:
        parts = " ".join("{" + ",".join(str(x + 1) for x in o) + "}" for o in orbs)
        raise ValidationError("not-transitive", f"orbits {parts}")
    return CoveringData(degree, branches)


def genus(covering):
    """Riemann-Hurwitz: g = 1 - N + R/2 with R = sum of (N - cycles)."""
    ram = covering.ramification()
    if ram % 2:
        raise AssertionError(f"odd ramification {ram}: product identity violated")
    g = 1 - covering.degree + ram // 2
    if g < 0:
        raise AssertionError(f"negative genus {g}")
    return g


@dataclass(frozen=True, eq=False)
class GaloisModel:
    """Galois closure data: G, H = Stab(0), and the regular branch orders."""

    covering: CoveringData
    group: PermGroup
    stabilizer: PermGroup
    orders: tuple

    @property
    def order(self):
        return self.group.order()

    @property
    def index(self):
        return self.order // self.stabilizer.order()

    @cached_property
    def closure_genus(self):
        n = self.order
        ram = sum(n - n // o for o in self.orders)
        return 1 - n + ram // 2

    def regular_cycle_counts(self):
        return tuple(self.order // o for o in self.orders)


def galois_closure(covering):
    G = covering.group
    H = G.stabilizer(0)
    model = GaloisModel(covering, G, H, tuple(b.perm.order() for b in covering.branch_points))
    if model.index != covering.degree:
        raise AssertionError("point stabilizer index differs from the degree")
    return model


def quotient_covering(model, subgroup, action=None):
    """Covering of degree [G:H'] induced on the cosets of ``subgroup``.

    Branch points whose induced permutation is trivial are dropped.
    """
    act = action or CosetAction(model.group, subgroup)
    out = []
    for b in model.covering.branch_points:
        img = act.image(b.perm)
        if not img.is_identity():
            out.append(BranchPoint(b.label, img))
    if act.degree == 1:
        return CoveringData(1, ())
    return validate_covering(act.degree, out)


# ---------------------------------------------------------------------------
# Hurwitz enumeration


@dataclass(frozen=True)
class HurwitzCount:
    tuples: int  # tuples with trivial product that pass the filter
    classes: int  # the same up to simultaneous conjugation by G
    explored: int  # partial products enumerated

    def __int__(self):
        return self.classes


def _passes(tuple_, group, transitive, generating, target_order):
    if transitive and len(orbits(tuple_, group.degree)) != 1:
        return False
    if generating and PermGroup(tuple_, group.degree).order() != target_order:
        return False
    return True


def count_hurwitz_classes(group, class_representatives, transitive=False, generating=False, budget=DEFAULT_BUDGET):
    """Count tuples (t_1..t_n), t_i conjugate in G to the i-th representative,
    whose ordered product is trivial.

    Enumerates t_1..t_{n-1} and solves for t_n, so the search space is the
    product of the first n-1 class sizes; this must not exceed ``budget``.
    Returns both the raw tuple count and the number of orbits under
    simultaneous conjugation.  ``transitive`` keeps tuples generating a
    transitive subgroup, ``generating`` keeps tuples generating all of G.
    """
    reps = list(class_representatives)
    if not reps:
        raise ValidationError("invalid-parameter", "need at least one class representative")
    for r in reps:
        if not group.contains(r):
            raise ValidationError("representative-not-in-group", f"{r} is not in the group")
    classes = [group.conjugacy_class(r) for r in reps]
    required = prod(len(c) for c in classes[:-1])
    if required > budget:
        raise BudgetExceeded(required, budget, "Hurwitz enumeration")
    last = set(classes[-1])
    target = group.order()
    found = []
    explored = 0

    def rec(i, acc, chosen):
        nonlocal explored
        if i == len(classes) - 1:
            explored += 1
            t = ~acc
            if t in last:
                cand = chosen + [t]
                if _passes(cand, group, transitive, generating, target):
                    found.append(tuple(cand))
            return
        for x in classes[i]:
            rec(i + 1, acc * x, chosen + [x])

    rec(0, group.identity(), [])
    # orbits under simultaneous conjugation
    seen = set()
    n_classes = 0
    for tup in found:
        if tup in seen:
            continue
        n_classes += 1
        seen.add(tup)
        stack = [tup]
        while stack:
            cur = stack.pop()
            for s in group.generators:
                nxt = tuple(x.conjugate(s) for x in cur)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return HurwitzCount(len(found), n_classes, explored)


def search_tuple(group, class_representatives, generating=True, budget=DEFAULT_BUDGET):
    """Lexicographically least tuple (in the order of each sorted class) with
    trivial product, t_i conjugate to the i-th representative; optionally
    required to generate G.  Bounded depth-first search; None if none exists.
    """
    reps = list(class_representatives)
    classes = [sorted(group.conjugacy_class(r)) for r in reps]
    last = set(classes[-1])
    target = group.order()
    steps = 0

    def rec(i, acc, chosen):
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(steps, budget, "witness search")
        if i == len(classes) - 1:
            t = ~acc
            if t in last:
                cand = chosen + [t]
                if not generating or PermGroup(cand, group.degree).order() == target:
                    return cand
            return None
        for x in classes[i]:
            res = rec(i + 1, acc * x, chosen + [x])
            if res is not None:
                return res
        return None

    return rec(0, group.identity(), [])
