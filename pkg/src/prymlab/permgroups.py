"""Permutations and permutation groups.

Points are 0-based internally; the cycle text format is 1-based.

Composition convention: ``p * q`` means "apply p, then q", i.e.
``(p * q)(x) == q(p(x))``.  Groups therefore act on the right, and a right
coset ``H g`` is sent to ``H (g s)`` by an element ``s``.
"""
from __future__ import annotations

import re
import threading
from collections import deque
from math import lcm

from .errors import SpecError, ValidationError


class Perm:
    """An immutable bijection of ``range(degree)``."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images):
        img = tuple(int(x) for x in images)
        if sorted(img) != list(range(len(img))):
            raise ValidationError("not-a-permutation", f"{list(img)!r}")
        self._img = img
        self._hash = None

    @classmethod
    def _raw(cls, img):
        p = object.__new__(cls)
        p._img = img
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree):
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_function(cls, degree, f):
        return cls([f(x) for x in range(degree)])

    @classmethod
    def from_cycles(cls, cycles, degree):
        """Build from 0-based cycles (an iterable of point sequences)."""
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValidationError("point-out-of-range", f"{x + 1} not in 1..{degree}")
                if x in seen:
                    raise ValidationError("repeated-point", f"point {x + 1} appears twice")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls._raw(tuple(img))

    # -- basic protocol -------------------------------------------------
    @property
    def degree(self):
        return len(self._img)

    @property
    def images(self):
        return self._img

    def __call__(self, x):
        return self._img[x]

    def __eq__(self, other):
        return isinstance(other, Perm) and self._img == other._img

    def __lt__(self, other):
        return self._img < other._img

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._img)
        return self._hash

    def __mul__(self, other):
        q = other._img
        if len(q) != len(self._img):
            raise ValidationError("degree-mismatch", f"{len(self._img)} vs {len(q)}")
        return Perm._raw(tuple([q[i] for i in self._img]))

    def inverse(self):
        inv = [0] * len(self._img)
        for i, j in enumerate(self._img):
            inv[j] = i
        return Perm._raw(tuple(inv))

    __invert__ = inverse

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = Perm.identity(self.degree)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self, g):
        """Return ``g^-1 p g`` (relabel the points of p by g)."""
        return ~g * self * g

    def __repr__(self):
        return f"Perm({format_cycles(self)!r}, {self.degree})"

    def __str__(self):
        return format_cycles(self)

    # -- structure ------------------------------------------------------
    def is_identity(self):
        return all(i == x for i, x in enumerate(self._img))

    def support(self):
        return [i for i, x in enumerate(self._img) if i != x]

    def first_moved(self):
        for i, x in enumerate(self._img):
            if i != x:
                return i
        return None

    def cycles(self, include_fixed=False):
        """Disjoint cycles as tuples, each starting at its smallest point."""
        seen = [False] * len(self._img)
        out = []
        for start in range(len(self._img)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self._img[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self._img[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_count(self):
        """Number of cycles including fixed points."""
        return len(self.cycles(include_fixed=True))

    def cycle_type(self):
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self):
        return lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self._img else 1


def compose(p, q):
    """p then q."""
    return p * q


def inverse(p):
    return p.inverse()


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, degree):
    """Parse 1-based disjoint cycle notation such as ``"(1 2)(4 5 6)"``."""
    if not isinstance(text, str):
        raise SpecError("malformed-cycles", f"expected a string, got {type(text).__name__}")
    stripped = text.strip()
    if _CYCLE_RE.sub("", stripped).strip():
        raise SpecError("malformed-cycles", f"cannot parse {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            pts = [int(t) - 1 for t in tokens]
        except ValueError:
            raise SpecError("malformed-cycles", f"non-integer point in {text!r}") from None
        cycles.append(pts)
    return Perm.from_cycles(cycles, degree)


def format_cycles(p):
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


def orbit(generators, point):
    """Orbit of ``point`` as a sorted list (breadth-first closure)."""
    seen = {point}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = g(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def orbits(generators, degree):
    left = set(range(degree))
    out = []
    while left:
        o = orbit(generators, min(left))
        out.append(o)
        left.difference_update(o)
    return out


class _Level:
    __slots__ = ("base", "gens", "trans", "trans_inv")

    def __init__(self, base, gens):
        self.base = base
        self.gens = gens
        self.trans = {}
        self.trans_inv = {}
        self._close()

    def _close(self):
        b = self.base
        ident = Perm.identity(self.gens[0].degree) if self.gens else None
        self.trans = {b: ident}
        queue = deque([b])
        while queue:
            p = queue.popleft()
            up = self.trans[p]
            for s in self.gens:
                q = s(p)
                if q not in self.trans:
                    self.trans[q] = up * s
                    queue.append(q)
        self.trans_inv = {}

    def inv(self, p):
        u = self.trans_inv.get(p)
        if u is None:
            u = self.trans_inv[p] = self.trans[p].inverse()
        return u


class PermGroup:
    """A permutation group given by generators, with a lazily built
    stabilizer chain (deterministic Schreier-Sims).

    ``base`` optionally fixes a prefix of the base; further base points are
    chosen as the smallest point moved by the element that needs them.
    """

    def __init__(self, generators, degree=None, base=()):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValidationError("degree-unknown", "empty generator list needs a degree")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValidationError("degree-mismatch", f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = tuple(g for g in gens if not g.is_identity())
        self._base_prefix = tuple(base)
        self._levels = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, gens={[str(g) for g in self.generators]})"

    # -- stabilizer chain ----------------------------------------------
    @property
    def chain(self):
        if self._levels is None:
            with self._lock:
                if self._levels is None:
                    self._levels = self._schreier_sims()
        return self._levels

    def _schreier_sims(self):
        base = list(self._base_prefix)
        strong = list(self.generators)
        for g in strong:
            if all(g(b) == b for b in base):
                base.append(g.first_moved())
        if not strong:
            return []

        def level_gens(i):
            fixed = base[:i]
            return [g for g in strong if all(g(b) == b for b in fixed)]

        levels = [_Level(base[i], level_gens(i)) for i in range(len(base))]

        def sift(g, start):
            for j in range(start, len(levels)):
                lv = levels[j]
                p = g(lv.base)
                if p not in lv.trans:
                    return g, j
                if p != lv.base:
                    g = g * lv.inv(p)
            return g, len(levels)

        i = len(levels) - 1
        while i >= 0:
            lv = levels[i]
            done = True
            for p, up in list(lv.trans.items()):
                for s in lv.gens:
                    q = s(p)
                    sch = up * s * lv.inv(q)
                    if sch.is_identity():
                        continue
                    h, j = sift(sch, i + 1)
                    if j < len(levels) or not h.is_identity():
                        strong.append(h)
                        if j == len(levels):
                            base.append(h.first_moved())
                            levels.append(_Level(base[j], [h]))
                        for ll in range(i + 1, j + 1):
                            levels[ll] = _Level(base[ll], level_gens(ll))
                        i = j
                        done = False
                        break
                if not done:
                    break
            if done:
                i -= 1
        # drop levels whose orbit is trivial (prefix base points fixed by the group)
        return [lv for lv in levels if len(lv.trans) > 1 or lv.base in self._base_prefix]

    @property
    def base(self):
        return [lv.base for lv in self.chain]

    def strong_generators(self):
        seen = []
        for lv in self.chain:
            for g in lv.gens:
                if g not in seen:
                    seen.append(g)
        return seen

    def sift(self, g):
        for lv in self.chain:
            p = g(lv.base)
            if p not in lv.trans:
                return g, False
            if p != lv.base:
                g = g * lv.inv(p)
        return g, g.is_identity()

    # -- queries --------------------------------------------------------
    def order(self):
        n = 1
        for lv in self.chain:
            n *= len(lv.trans)
        return n

    def identity(self):
        return Perm.identity(self.degree)

    def contains(self, g):
        if g.degree != self.degree:
            return False
        return self.sift(g)[1]

    __contains__ = contains

    def orbit(self, point):
        return orbit(self.generators, point)

    def orbits(self):
        return orbits(self.generators, self.degree)

    def is_transitive(self):
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    def is_trivial(self):
        return not self.generators

    def is_subgroup_of(self, other):
        return all(other.contains(g) for g in self.generators)

    def transversal_element(self, point, to):
        """Some element mapping ``point`` to ``to`` (breadth-first word)."""
        trans = {point: self.identity()}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            if x == to:
                return trans[x]
            for s in self.generators:
                y = s(x)
                if y not in trans:
                    trans[y] = trans[x] * s
                    queue.append(y)
        return None

    def stabilizer(self, point):
        """Full point stabilizer, generated by the reduced Schreier generators."""
        chained = PermGroup(self.generators, self.degree, base=(point,))
        levels = chained.chain
        if not levels:
            return PermGroup([], self.degree)
        gens = [g for g in levels[0].gens if g(point) == point]
        for lv in levels[1:]:
            for g in lv.gens:
                if g not in gens:
                    gens.append(g)
        return PermGroup(gens, self.degree)

    def elements(self):
        """Iterate over all elements (products of transversal elements)."""
        levels = self.chain
        ident = self.identity()

        def rec(i, acc):
            if i < 0:
                yield acc
                return
            for u in levels[i].trans.values():
                yield from rec(i - 1, acc * u)

        # g = u_{k-1} ... u_1 u_0 ranges over the group exactly once
        yield from rec(len(levels) - 1, ident) if levels else iter([ident])

    def canonical_coset_rep(self, g):
        """Canonical element of the right coset ``self * g``.

        Greedy minimisation of the images of this group's base points; two
        elements give the same result iff they lie in the same right coset.
        """
        x = g
        for lv in self.chain:
            best_p, best_v = None, None
            for p in lv.trans:
                v = x(p)
                if best_v is None or v < best_v:
                    best_p, best_v = p, v
            if best_p != lv.base:
                x = lv.trans[best_p] * x
        return x

    def conjugacy_class(self, x):
        """Conjugacy class of x under this group, as a list (BFS order)."""
        seen = {x}
        out = [x]
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for s in self.generators:
                z = ~s * y * s
                if z not in seen:
                    seen.add(z)
                    out.append(z)
                    queue.append(z)
        return out


def symmetric_group(n):
    if n < 2:
        return PermGroup([], n)
    return PermGroup([Perm.from_cycles([[0, 1]], n), Perm.from_cycles([list(range(n))], n)], n)


def group_order(group):
    return group.order()


def stabilizer(group, point):
    return group.stabilizer(point)


def is_transitive(group):
    return group.is_transitive()


def is_subgroup_element(group, perm):
    return group.contains(perm)


def _check_subgroup(group, subgroup):
    for h in subgroup.generators:
        if not group.contains(h):
            raise ValidationError("subgroup-not-contained", f"{h} is not in the group")


class CosetAction:
    """Action of ``group`` on the right cosets of ``subgroup`` by right
    multiplication.  Coset index 0 is the trivial coset ``H``.
    """

    def __init__(self, group, subgroup, limit=2_000_000):
        _check_subgroup(group, subgroup)
        self.group = group
        self.subgroup = subgroup
        index = group.order() // subgroup.order()
        if index > limit:
            raise ValidationError("index-too-large", f"[G:H] = {index} exceeds {limit}")
        canon = subgroup.canonical_coset_rep
        first = canon(group.identity())
        self.reps = [first]
        self.lookup = {first: 0}
        i = 0
        while i < len(self.reps):
            r = self.reps[i]
            for s in group.generators:
                c = canon(r * s)
                if c not in self.lookup:
                    self.lookup[c] = len(self.reps)
                    self.reps.append(c)
            i += 1
        if len(self.reps) != index:
            raise ValidationError("coset-enumeration", f"found {len(self.reps)} cosets, expected {index}")
        self.generator_images = tuple(self.image(s) for s in group.generators)

    @property
    def degree(self):
        return len(self.reps)

    def coset_of(self, g):
        return self.lookup[self.subgroup.canonical_coset_rep(g)]

    def image(self, g):
        """Permutation of coset indices induced by any element g of the group."""
        canon = self.subgroup.canonical_coset_rep
        return Perm._raw(tuple(self.lookup[canon(r * g)] for r in self.reps))

    def is_transitive(self):
        return len(orbit(self.generator_images, 0)) == self.degree


def coset_action(group, subgroup):
    return CosetAction(group, subgroup)


def double_cosets(group, subgroup):
    """H-H double cosets as ``[(representative, size), ...]``.

    Computed as H-orbits on the coset indices, so the group is never
    materialised element by element.
    """
    act = CosetAction(group, subgroup)
    h_images = [act.image(h) for h in subgroup.generators]
    h_order = subgroup.order()
    out = []
    for orb in orbits(h_images, act.degree):
        out.append((act.reps[orb[0]], h_order * len(orb)))
    return out


def induced_action(perm, blocks):
    """Permutation of block indices induced by ``perm``; None if it does not
    permute the blocks setwise."""
    where = {}
    for bi, blk in enumerate(blocks):
        for x in blk:
            where[x] = bi
    img = []
    for blk in blocks:
        targets = {where[perm(x)] for x in blk}
        if len(targets) != 1:
            return None
        img.append(targets.pop())
    if sorted(img) != list(range(len(blocks))):
        return None
    return Perm._raw(tuple(img))


def block_stabilizer(group, blocks, index=0):
    """Setwise stabilizer of ``blocks[index]`` in a group preserving the
    block system (Schreier generators over the block orbit)."""
    images = {}
    for s in group.generators:
        act = induced_action(s, blocks)
        if act is None:
            raise ValidationError("blocks-not-preserved", f"{s} does not permute the blocks")
        images[s] = act
    trans = {index: group.identity()}
    queue = deque([index])
    while queue:
        b = queue.popleft()
        for s in group.generators:
            c = images[s](b)
            if c not in trans:
                trans[c] = trans[b] * s
                queue.append(c)
    gens = []
    for b, u in trans.items():
        for s in group.generators:
            sch = u * s * ~trans[images[s](b)]
            if not sch.is_identity() and sch not in gens:
                gens.append(sch)
    return PermGroup(gens, group.degree)
