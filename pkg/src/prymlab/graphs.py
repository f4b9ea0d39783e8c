"""Graph catalog, strongly regular parameters and Prym certificates.

Vertices are 0-based.  Grid-type graphs use a row-major layout: the 1-based
vertex (i, j) of an n x n grid sits at index (i-1)*n + (j-1); the Latin square
graph uses residues, (i, j) -> i*n + j.

All matrix identities are checked exactly over the integers (after clearing
the denominator d), never in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .permgroups import Perm, PermGroup, orbit


# ---------------------------------------------------------------------------
# exact quadratic surds


def _squarefree(n):
    """Split n >= 0 as (f, r) with n = f*f*r and r squarefree."""
    if n == 0:
        return 0, 1
    f, r, p = 1, n, 2
    while p * p <= r:
        while r % (p * p) == 0:
            r //= p * p
            f *= p
        p += 1
    return f, r


def _sign_surd(p, q, D):
    """Sign of p + q*sqrt(D) for integers p, q and D >= 0."""
    if q == 0 or D == 0:
        return (p > 0) - (p < 0)
    if p >= 0 and q >= 0:
        return 1 if (p or q) else 0
    if p <= 0 and q <= 0:
        return -1
    # opposite signs: compare p^2 with q^2 D
    lhs, rhs = p * p, q * q * D
    if lhs == rhs:
        return 0
    return (1 if p > 0 else -1) if lhs > rhs else (1 if q > 0 else -1)


@total_ordering
@dataclass(frozen=True)
class QuadSurd:
    """The number (a + b*sqrt(D)) / 2 with D squarefree (D = 1 means rational)."""

    a: int
    b: int = 0
    D: int = 1

    @classmethod
    def make(cls, a, b, radicand):
        f, r = _squarefree(radicand)
        b *= f
        if r == 1 or b == 0:
            return cls(a + b, 0, 1)
        return cls(a, b, r)

    @classmethod
    def of(cls, n):
        return cls(2 * n, 0, 1)

    @property
    def is_integer(self):
        return self.b == 0 and self.a % 2 == 0

    @property
    def is_rational(self):
        return self.b == 0

    def to_fraction(self):
        if self.b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, 2)

    def __int__(self):
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.a // 2

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.D)) / 2

    def _diff_sign(self, other):
        if not isinstance(other, QuadSurd):
            other = QuadSurd.of(other)
        if self.b and other.b and self.D != other.D:
            return (float(self) > float(other)) - (float(self) < float(other))
        D = self.D if self.b else other.D
        return _sign_surd(self.a - other.a, self.b - other.b, D)

    def __eq__(self, other):
        if isinstance(other, (int, QuadSurd)):
            return self._diff_sign(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return self._diff_sign(other) < 0

    def __str__(self):
        if self.b == 0:
            v = Fraction(self.a, 2)
            return str(v)
        sign = "+" if self.b > 0 else "-"
        coef = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        return f"({self.a} {sign} {coef}sqrt({self.D}))/2"


# ---------------------------------------------------------------------------
# parameters and spectra


@dataclass(frozen=True)
class SrgParams:
    d: int
    k: int
    lam: int
    mu: int

    def __post_init__(self):
        if min(self.d, self.k, self.lam, self.mu) < 0:
            raise ValidationError("invalid-parameter", f"negative entry in {self.as_tuple()}")
        if self.k <= 0:
            raise ValidationError("invalid-parameter", "k must be positive")
        if self.k * (self.k - self.lam - 1) != (self.d - self.k - 1) * self.mu:
            raise ValidationError("infeasible-parameters", f"k(k-lambda-1) != (d-k-1)mu for {self.as_tuple()}")

    def as_tuple(self):
        return (self.d, self.k, self.lam, self.mu)

    @property
    def nontrivial(self):
        return 0 < self.mu < self.k < self.d - 1

    def __iter__(self):
        return iter(self.as_tuple())


@dataclass(frozen=True)
class Spectrum:
    k: int
    r_plus: QuadSurd
    r_minus: QuadSurd
    multiplicities: dict = field(compare=False)

    @property
    def integral(self):
        return self.r_plus.is_integer and self.r_minus.is_integer


def spectrum_of(params):
    """Eigenvalues of any graph with the given SRG parameters."""
    d, k, lam, mu = params.as_tuple()
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    if disc < 0:
        raise ValidationError("negative-discriminant", f"{params.as_tuple()}")
    r_plus = QuadSurd.make(lam - mu, 1, disc)
    r_minus = QuadSurd.make(lam - mu, -1, disc)
    if r_plus == k:
        # disjoint union of complete graphs K_{k+1}
        comps, rem = divmod(d, k + 1)
        if rem:
            raise ValidationError("infeasible-parameters", f"{d} is not a multiple of {k + 1}")
        mult = {QuadSurd.of(k): comps, r_minus: d - comps}
    else:
        root = math.isqrt(disc)
        numer = 2 * k + (d - 1) * (lam - mu)
        if root * root == disc:
            f = Fraction((d - 1) * root - numer, 2 * root)
        else:
            if numer != 0:
                raise ValidationError("infeasible-parameters", "irrational eigenvalues need 2k + (d-1)(lambda-mu) = 0")
            f = Fraction(d - 1, 2)
        g = (d - 1) - f
        if f.denominator != 1 or g.denominator != 1 or f < 0 or g < 0:
            raise ValidationError("infeasible-parameters", f"multiplicities {f}, {g} are not non-negative integers")
        mult = {QuadSurd.of(k): 1, r_plus: int(f), r_minus: int(g)}
    return Spectrum(k, r_plus, r_minus, mult)


def complement_params(params):
    d, k, lam, mu = params.as_tuple()
    out = (d, d - k - 1, d - 2 * k + mu - 2, d - 2 * k + lam)
    if min(out) < 0 or out[1] == 0:
        raise ValidationError("complement-infeasible", f"complement of {params.as_tuple()} would be {out}")
    return SrgParams(*out)


# ---------------------------------------------------------------------------
# graphs with verified automorphisms


def _as_matrix(entries):
    a = np.array(entries, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("not-square", f"matrix of shape {a.shape}")
    return a


def stabilizes(matrix, perm):
    """True iff a[perm(i), perm(j)] == a[i, j] for all i, j."""
    idx = np.array(perm.images)
    return bool(np.array_equal(matrix[np.ix_(idx, idx)], matrix))


def first_violation(matrix, perm):
    idx = np.array(perm.images)
    bad = np.argwhere(matrix[np.ix_(idx, idx)] != matrix)
    if len(bad) == 0:
        return None
    i, j = (int(x) for x in bad[0])
    return i, j


@dataclass(frozen=True, eq=False)
class PrymGraph:
    """A symmetric integer matrix with named vertices and a list of
    automorphism generators (each verified on construction)."""

    name: str
    matrix: np.ndarray
    generators: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        if not np.array_equal(m, m.T):
            raise ValidationError("not-symmetric", self.name)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(m.shape[0])))
        for g in self.generators:
            if g.degree != self.d:
                raise ValidationError("degree-mismatch", f"generator {g} has degree {g.degree}, graph has {self.d}")
            bad = first_violation(m, g)
            if bad is not None:
                i, j = bad
                raise ValidationError(
                    "generator-not-automorphism",
                    f"{self.name}: {g} sends entry ({i + 1},{j + 1}) to a different value",
                )

    @property
    def d(self):
        return self.matrix.shape[0]

    def __len__(self):
        return self.d

    def adjacent(self, u, v):
        return bool(self.matrix[u, v])

    @cached_property
    def group(self):
        return PermGroup(self.generators, self.d)

    @cached_property
    def certificate(self):
        return certify_prym(self.matrix, self.generators)

    def is_binary(self):
        return bool(np.isin(self.matrix, (0, 1)).all())

    def complement(self, name=None):
        if not self.is_binary() or np.any(np.diag(self.matrix)):
            raise ValidationError("not-binary", "complement needs a 0/1 matrix with zero diagonal")
        comp = 1 - self.matrix - np.eye(self.d, dtype=np.int64)
        return PrymGraph(name or f"complement({self.name})", comp, self.generators, self.labels)


def _grid_index(n, i, j):
    return i * n + j


def lattice_map(n, sigma=None, tau=None, swap=False):
    """Automorphism of the n x n grid: (i, j) -> (sigma(i), tau(j)), or with
    ``swap`` the map (sigma, tau) after exchanging coordinates,
    (i, j) -> (sigma(j), tau(i)).  sigma/tau are Perms of degree n (0-based)."""
    ident = Perm.identity(n)
    sigma = sigma or ident
    tau = tau or ident

    def f(x):
        i, j = divmod(x, n)
        if swap:
            return _grid_index(n, sigma(j), tau(i))
        return _grid_index(n, sigma(i), tau(j))

    return Perm.from_function(n * n, f)


def _grid_generators(n):
    transp = Perm.from_cycles([[0, 1]], n)
    cycle = Perm.from_cycles([list(range(n))], n)
    return [
        lattice_map(n, sigma=transp),
        lattice_map(n, sigma=cycle),
        lattice_map(n, tau=transp),
        lattice_map(n, tau=cycle),
        lattice_map(n, swap=True),
    ]


def _grid_labels(n):
    return tuple(f"({i + 1},{j + 1})" for i in range(n) for j in range(n))


def lattice_graph(n):
    """L2(n): vertices (i, j) adjacent iff they share exactly one coordinate."""
    if not isinstance(n, int) or n < 3:
        raise ValidationError("invalid-parameter", f"lattice graph needs n >= 3, got {n}")
    N = n * n
    a = np.zeros((N, N), dtype=np.int64)
    for x in range(N):
        i, j = divmod(x, n)
        for y in range(N):
            l, m = divmod(y, n)
            if x != y and (i == l or j == m):
                a[x, y] = 1
    return PrymGraph(f"L2({n})", a, _grid_generators(n), _grid_labels(n))


def lattice_complement(n):
    if not isinstance(n, int) or n < 3:
        raise ValidationError("invalid-parameter", f"lattice complement needs n >= 3, got {n}")
    return lattice_graph(n).complement(name=f"complement(L2({n}))")


def latin_square_graph(n):
    """L3(n) on (Z/n)^2: adjacent iff same row, same column or same i+j."""
    if not isinstance(n, int) or n < 3:
        raise ValidationError("invalid-parameter", f"Latin square graph needs n >= 3, got {n}")
    N = n * n
    a = np.zeros((N, N), dtype=np.int64)
    for x in range(N):
        i, j = divmod(x, n)
        for y in range(N):
            l, m = divmod(y, n)
            if x != y and (i == l or j == m or (i + j - l - m) % n == 0):
                a[x, y] = 1

    def affine(f):
        return Perm.from_function(N, lambda x: _grid_index(n, *f(*divmod(x, n))))

    gens = [
        latin_translation(n, 1, 1),
        latin_translation(n, 1, 2),
        affine(lambda i, j: ((-i - j) % n, j)),  # s
        affine(lambda i, j: (j, i)),  # t
    ]
    labels = tuple(f"({i},{j})" for i in range(n) for j in range(n))
    return PrymGraph(f"L3({n})", a, gens, labels)


def latin_translation(n, u, v):
    return Perm.from_function(n * n, lambda x: _grid_index(n, (x // n + u) % n, (x % n + v) % n))


# Schlaefli graph: a1..a6, b1..b6, then c_ij for i<j in lexicographic order.
_PAIRS = list(combinations(range(6), 2))
_PAIR_INDEX = {p: 12 + k for k, p in enumerate(_PAIRS)}


def _c(i, j):
    return _PAIR_INDEX[(min(i, j), max(i, j))]


def schlaefli_labels():
    return tuple([f"a{i + 1}" for i in range(6)] + [f"b{i + 1}" for i in range(6)] + [f"c{i + 1}{j + 1}" for i, j in _PAIRS])


def _schlaefli_matrix():
    a = np.zeros((27, 27), dtype=np.int64)

    def join(x, y):
        a[x, y] = a[y, x] = 1

    for i in range(6):
        for j in range(6):
            if i != j:
                join(i, 6 + j)
        for (p, q) in _PAIRS:
            if i in (p, q):
                join(i, _c(p, q))
                join(6 + i, _c(p, q))
    for (p, q), (r, s) in combinations(_PAIRS, 2):
        if not {p, q} & {r, s}:
            join(_c(p, q), _c(r, s))
    return a


def _double_six_swap(top, bottom):
    img = list(range(27))
    for x, y in zip(top, bottom):
        img[x], img[y] = y, x
    return Perm(img)


def schlaefli_generators():
    """tau_1..tau_5 swap the rows of the double-six M_{i,i+1}; tau_6 swaps the
    rows of M_{1,2,3}."""
    gens = []
    for i in range(5):
        j = i + 1
        rest = [x for x in range(6) if x not in (i, j)]
        top = [i, 6 + i] + [_c(j, x) for x in rest]
        bottom = [j, 6 + j] + [_c(i, x) for x in rest]
        gens.append(_double_six_swap(top, bottom))
    # M_{1,2,3}: (a1 a2 a3 c56 c46 c45 / c23 c13 c12 b4 b5 b6)
    top = [0, 1, 2, _c(4, 5), _c(3, 5), _c(3, 4)]
    bottom = [_c(1, 2), _c(0, 2), _c(0, 1), 9, 10, 11]
    gens.append(_double_six_swap(top, bottom))
    return gens


def schlaefli_graph():
    return PrymGraph("Schlaefli", _schlaefli_matrix(), schlaefli_generators(), schlaefli_labels())


def _is_prime(q):
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def paley_graph(q):
    if not isinstance(q, int) or not _is_prime(q) or q % 4 != 1:
        raise ValidationError("invalid-parameter", f"Paley graph needs a prime q = 1 mod 4, got {q}")
    squares = {(x * x) % q for x in range(1, q)}
    a = np.zeros((q, q), dtype=np.int64)
    for i in range(q):
        for j in range(q):
            if (i - j) % q in squares:
                a[i, j] = 1
    gens = [Perm.from_function(q, lambda x: (x + 1) % q)]
    # multiplication by a primitive root squared permutes the squares
    for g in range(2, q):
        if len({pow(g, e, q) for e in range(1, q)}) == q - 1:
            gens.append(Perm.from_function(q, lambda x, c=(g * g) % q: (c * x) % q))
            break
    return PrymGraph(f"P({q})", a, gens, tuple(str(x) for x in range(q)))


def complete_graph_union(m, k):
    """m disjoint copies of K_{k+1}, blocks of consecutive indices."""
    if m < 1 or k < 1:
        raise ValidationError("invalid-parameter", f"complete_graph_union needs m, k >= 1, got {m}, {k}")
    block = np.ones((k + 1, k + 1), dtype=np.int64) - np.eye(k + 1, dtype=np.int64)
    return repeat_matrix(PrymGraph(f"K{k + 1}", block, _symmetric_gens(k + 1)), m, certify=False)


def _symmetric_gens(n):
    if n < 2:
        return []
    gens = [Perm.from_cycles([[0, 1]], n)]
    if n > 2:
        gens.append(Perm.from_cycles([list(range(n))], n))
    return gens


def explicit_graph(entries, generators=(), name="explicit"):
    return PrymGraph(name, _as_matrix(entries), tuple(generators))


# ---------------------------------------------------------------------------
# validation and certificates


def validate_srg(graph):
    """Exhaustively verify the SRG conditions and return the parameters."""
    a = graph.matrix if isinstance(graph, PrymGraph) else _as_matrix(graph)
    d = a.shape[0]
    if not np.isin(a, (0, 1)).all() or np.any(np.diag(a)) or not np.array_equal(a, a.T):
        raise ValidationError("not-binary", "SRG validation needs a symmetric 0/1 matrix with zero diagonal")
    deg = a.sum(axis=1)
    if len(set(deg.tolist())) != 1:
        v = int(np.argmax(deg != deg[0]))
        raise ValidationError("not-regular", f"vertex 1 has degree {deg[0]}, vertex {v + 1} has degree {deg[v]}")
    k = int(deg[0])
    if k == 0:
        raise ValidationError("invalid-parameter", "k = 0 (empty graph)")
    common = a @ a
    lam = mu = None
    for i in range(d):
        for j in range(i + 1, d):
            c = int(common[i, j])
            if a[i, j]:
                if lam is None:
                    lam = c
                elif c != lam:
                    raise ValidationError("not-strongly-regular", f"adjacent pair ({i + 1},{j + 1}) has {c} common neighbours, expected {lam}")
            else:
                if mu is None:
                    mu = c
                elif c != mu:
                    raise ValidationError("not-strongly-regular", f"non-adjacent pair ({i + 1},{j + 1}) has {c} common neighbours, expected {mu}")
    # vacuous conditions (complete or edgeless graphs) default to 0
    return SrgParams(d, k, lam or 0, mu or 0)


@dataclass(frozen=True)
class PrymCertificate:
    k: int
    r_plus: int
    r_minus: int
    c: Fraction  # (k - r+)(k - r-)/d
    orbit_size: int

    @property
    def r_sum(self):
        return self.r_plus + self.r_minus

    def eigenvalue(self, tag):
        return self.r_plus if tag == "plus" else self.r_minus


def quadratic_identity_violation(matrix, r_plus, r_minus, c, blocks_of=None):
    """First entry where (M - r+ I)(M - r- I) != c * J (or c * J_d^{+m} with
    blocks of size ``blocks_of``); None if the identity holds exactly."""
    M = np.asarray(matrix, dtype=np.int64)
    n = M.shape[0]
    ident = np.eye(n, dtype=np.int64)
    lhs = (M - r_plus * ident) @ (M - r_minus * ident)
    if blocks_of is None:
        J = np.ones((n, n), dtype=np.int64)
    else:
        J = np.kron(np.eye(n // blocks_of, dtype=np.int64), np.ones((blocks_of, blocks_of), dtype=np.int64))
    c = Fraction(c)
    bad = np.argwhere(lhs * c.denominator != c.numerator * J)
    if len(bad) == 0:
        return None
    i, j = (int(x) for x in bad[0])
    return i, j, int(lhs[i, j]), c * int(J[i, j])


def certify_prym(matrix, generators):
    """Certify a symmetric integer matrix as a Prym matrix.

    Checks the generators are automorphisms and act transitively, then
    solves A^2 = (r+ + r-) A - r+ r- I + c J for integers and verifies the
    identity entrywise.
    """
    A = _as_matrix(matrix)
    d = A.shape[0]
    if not np.array_equal(A, A.T):
        raise ValidationError("not-symmetric", "matrix is not symmetric")
    gens = list(generators)
    for g in gens:
        bad = first_violation(A, g)
        if bad is not None:
            raise ValidationError("generator-not-automorphism", f"{g} moves entry ({bad[0] + 1},{bad[1] + 1})")
    orb = orbit(gens, 0) if d else []
    if len(orb) != d:
        raise ValidationError("not-transitive", f"orbit of vertex 1 has {len(orb)} of {d} vertices")
    rows = A.sum(axis=1)
    if len(set(rows.tolist())) != 1:
        raise ValidationError("row-sums-differ", f"row sums {sorted(set(rows.tolist()))}")
    k = int(rows[0])
    B = A @ A
    # off-diagonal entries: B_ij = (r+ + r-) a_ij + c
    off = {}
    for i in range(d):
        for j in range(d):
            if i != j and int(A[i, j]) not in off:
                off[int(A[i, j])] = (i, j)
    if len(off) >= 2:
        (a1, (i1, j1)), (a2, (i2, j2)) = sorted(off.items())[:2]
        r_sum = Fraction(int(B[i1, j1]) - int(B[i2, j2]), a1 - a2)
        c = int(B[i1, j1]) - r_sum * a1
        r_prod = r_sum * int(A[0, 0]) + c - int(B[0, 0])
    else:
        # A = a J + (b - a) I: only the eigenvalues k and b - a occur
        other = int(A[0, 0]) - (next(iter(off)) if off else 0)
        if other == k:
            raise ValidationError("no-integer-spectrum", "single eigenvalue; r+ > r- impossible")
        r_sum, r_prod = Fraction(k + other), Fraction(k * other)
    disc = r_sum * r_sum - 4 * r_prod
    if disc.denominator != 1 or r_sum.denominator != 1:
        raise ValidationError("no-integer-spectrum", f"r+ + r- = {r_sum}, r+ r- = {r_prod}")
    root = math.isqrt(int(disc)) if disc >= 0 else -1
    if root < 0 or root * root != disc or (int(r_sum) + root) % 2:
        raise ValidationError("no-integer-spectrum", f"x^2 - ({r_sum})x + ({r_prod}) has no integer roots")
    if root == 0:
        raise ValidationError("no-integer-spectrum", "r+ = r- (strict inequality required)")
    r_plus = (int(r_sum) + root) // 2
    r_minus = (int(r_sum) - root) // 2
    c = Fraction((k - r_plus) * (k - r_minus), d)
    bad = quadratic_identity_violation(A, r_plus, r_minus, c)
    if bad is not None:
        raise ValidationError("no-integer-spectrum", f"identity fails at entry ({bad[0] + 1},{bad[1] + 1})")
    return PrymCertificate(k, r_plus, r_minus, c, len(orb))


def repeat_matrix(graph, m, certify=True):
    """Block-diagonal m-fold repetition with a block-transitive generator set."""
    if not isinstance(m, int) or m < 1:
        raise ValidationError("invalid-parameter", f"repetition count must be >= 1, got {m}")
    if m == 1:
        return graph
    d = graph.d
    big = np.kron(np.eye(m, dtype=np.int64), graph.matrix)
    gens = []
    for g in graph.generators:
        gens.append(Perm([g(x) if x < d else x for x in range(m * d)]))
    gens.append(Perm.from_function(m * d, lambda x: (x + d) % (m * d)))
    labels = tuple(f"{s + 1}:{lab}" for s in range(m) for lab in graph.labels)
    rep = PrymGraph(f"{graph.name}^{m}", big, gens, labels)
    if certify:
        cert = graph.certificate
        bad = quadratic_identity_violation(big, cert.r_plus, cert.r_minus, cert.c, blocks_of=d)
        if bad is not None:
            raise ValidationError("repeat-identity", f"entry ({bad[0] + 1},{bad[1] + 1})")
    return rep


def classify_binary_prym(certificate, matrix):
    """SRG parameters predicted by a 0/1 Prym certificate, cross-checked by
    direct counting."""
    A = matrix.matrix if isinstance(matrix, PrymGraph) else _as_matrix(matrix)
    if not np.isin(A, (0, 1)).all() or A[0, 0] != 0:
        raise ValidationError("not-binary", "needs a 0/1 Prym matrix with a_11 = 0")
    k, rp, rm = certificate.k, certificate.r_plus, certificate.r_minus
    predicted = SrgParams(A.shape[0], k, k + rp * rm + rp + rm, k + rp * rm)
    counted = validate_srg(A)
    if counted != predicted:
        raise ValidationError("classification-mismatch", f"predicted {predicted.as_tuple()}, counted {counted.as_tuple()}")
    return predicted


def displacing_automorphism(graph, perm):
    """True iff no vertex is adjacent to its image under ``perm``."""
    bad = first_violation(graph.matrix, perm)
    if bad is not None:
        raise ValidationError("not-an-automorphism", f"{perm} moves entry ({bad[0] + 1},{bad[1] + 1})")
    idx = np.arange(graph.d)
    return not bool(graph.matrix[idx, np.array(perm.images)].any())


def build_graph(spec):
    """Construct a catalog graph from a graph-spec mapping."""
    from .specio import graph_from_spec

    return graph_from_spec(spec)
