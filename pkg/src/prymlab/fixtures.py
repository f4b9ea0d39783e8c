"""Witness coverings for the worked families, built constructively.

Every witness is a list of pairs (c, c) of involutions, so the ordered
product is trivial by construction; the distinct involutions generate the
intended monodromy group and extra pairs pad the branch count.  Built
coverings can be stored in a content-addressed cache so that reports can
cite exactly which tuple was analysed.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .coverings import BranchPoint, validate_covering
from .errors import SpecError, ValidationError
from .graphs import latin_square_graph, latin_translation, lattice_complement, lattice_graph, schlaefli_graph
from .permgroups import Perm, format_cycles, parse_cycles
from .prym import build_triple
from .splitting import TowerBranch, TowerSpec, phi, sigma_factor, swap_reflection

CACHE_VERSION = 1


def _paired(perms, prefix="b"):
    out = []
    for p in perms:
        out.extend([p, p])
    return [BranchPoint(f"{prefix}{i + 1}", p) for i, p in enumerate(out)]


def _require(cond, message):
    if not cond:
        raise ValidationError("param-out-of-range", message)


def schlaefli_witness(n):
    """2n reflection branch points on the 27 lines (n >= 6)."""
    _require(isinstance(n, int) and n >= 6, f"needs n >= 6, got {n}")
    gens = schlaefli_graph().generators
    return validate_covering(27, _paired(list(gens) + [gens[0]] * (n - 6)))


def lattice_witness(n, l):
    """2l + 8 swap reflections phi_0..phi_3 on L2(n)."""
    _require(n >= 3 and l >= 0, f"needs n >= 3, l >= 0, got n={n}, l={l}")
    ph = [phi(n, h) for h in range(4)]
    return validate_covering(n * n, _paired(ph + [ph[0]] * l))


def twisted_witness(n, l1, l2):
    """2(l1 + 1) coordinate swaps and 2(l2 + n - 1) row transpositions."""
    _require(n >= 3 and l1 >= 0 and l2 >= 0, f"needs n >= 3, l1, l2 >= 0, got {n}, {l1}, {l2}")
    t = swap_reflection(n, Perm.identity(n))
    rows = [sigma_factor(n, 1, h) for h in range(1, n)]
    branch = _paired([t] * (l1 + 1), "t") + _paired(rows + [rows[0]] * l2, "s")
    return validate_covering(n * n, branch)


def latin_witness(n, l):
    """ln translations: n(l-1) by (1,1) and n by (1,2)."""
    _require(n >= 4 and l >= 2, f"needs n >= 4, l >= 2, got n={n}, l={l}")
    a, b = latin_translation(n, 1, 1), latin_translation(n, 1, 2)
    perms = [a] * (n * (l - 1)) + [b] * n
    return validate_covering(n * n, [BranchPoint(f"b{i + 1}", p) for i, p in enumerate(perms)])


def exponent_witness(n, l1, l2):
    """2(l_m + n - 1) transpositions on coordinate m, m = 1, 2."""
    _require(n >= 3 and l1 >= 0 and l2 >= 0, f"needs n >= 3, l1, l2 >= 0, got {n}, {l1}, {l2}")
    first = [sigma_factor(n, 1, h) for h in range(1, n)]
    second = [sigma_factor(n, 2, h) for h in range(1, n)]
    branch = _paired(first + [first[0]] * l1, "u") + _paired(second + [second[0]] * l2, "v")
    return validate_covering(n * n, branch)


def _block_swap(m, d, a, b, crossed=False):
    img = list(range(m * d))
    for x in range(d):
        y = d - 1 - x if crossed else x
        img[a * d + x] = b * d + y
        img[b * d + y] = a * d + x
    return Perm(img)


def simple_tower(case):
    """Towers over (J_2 - I_2)^{+m}: case 1 has m = 3 with 10 double and
    4 simple branch points; case 2 has m = 4 with 18 double points."""
    if case == 1:
        m = 3
        swaps = [_block_swap(m, 2, 0, 1), _block_swap(m, 2, 1, 2), _block_swap(m, 2, 0, 1, crossed=True)]
        swaps += [swaps[0], swaps[0]]
        inner = [Perm.from_cycles([[0, 1]], 2 * m)] * 2
    elif case == 2:
        m = 4
        swaps = [_block_swap(m, 2, 0, 1), _block_swap(m, 2, 1, 2), _block_swap(m, 2, 2, 3), _block_swap(m, 2, 0, 1, crossed=True)]
        swaps += [swaps[0]] * 5
        inner = []
    else:
        raise ValidationError("param-out-of-range", f"case must be 1 or 2, got {case}")
    branches = []
    for p in swaps:
        for _ in range(2):
            branches.append(TowerBranch(f"h{len(branches) + 1}", "block", p))
    for p in inner:
        for _ in range(2):
            branches.append(TowerBranch(f"f{len(branches) + 1}", "inner", p))
    return TowerSpec(2, m, branches)


def _side_swap(a):
    """y_i <-> z_{a(i)} on six letters."""
    img = [0] * 6
    for i in range(3):
        img[i] = 3 + a(i)
        img[3 + a(i)] = i
    return Perm(img)


def lrr_tower(l):
    """Six-point tower with 2l + 8 side swaps and étale 3:1 part."""
    _require(l >= 0, f"needs l >= 0, got {l}")
    # a = tau^-1 for tau = id, (1 3), (2 3), (1 2 3): the pair action is phi_0..phi_3
    ws = [_side_swap(~parse_cycles(c, 3)) for c in ("()", "(1 3)", "(2 3)", "(1 2 3)")]
    perms = ws + [ws[0]] * l
    branches = []
    for p in perms:
        for _ in range(2):
            branches.append(TowerBranch(f"w{len(branches) + 1}", "block", p))
    return TowerSpec(3, 2, branches)


# ---------------------------------------------------------------------------
# triples


def schlaefli_triple(n):
    return build_triple(schlaefli_graph(), 1, schlaefli_witness(n))


def lattice_triple(n, l):
    return build_triple(lattice_graph(n), 1, lattice_witness(n, l))


def twisted_triple(n, l1, l2):
    return build_triple(lattice_complement(n), 1, twisted_witness(n, l1, l2))


def latin_triple(n, l):
    return build_triple(latin_square_graph(n), 1, latin_witness(n, l))


def exponent_triple(n, l1, l2):
    return build_triple(lattice_complement(n), 1, exponent_witness(n, l1, l2))


# ---------------------------------------------------------------------------
# content-addressed cache


def cache_dir():
    return Path(os.environ.get("PRYMLAB_CACHE", Path.home() / ".cache" / "prymlab"))


def cache_key(example, params):
    blob = json.dumps({"example": example, "params": params, "version": CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _atomic_write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_covering(example, params, build):
    """Load the covering for (example, params) from the cache, or build and
    store it.  Returns (covering, path, hit)."""
    key = cache_key(example, params)
    path = cache_dir() / f"{key}.json"
    if path.exists():
        try:
            data = json.loads(path.read_text())
            cov = validate_covering(
                data["degree"], [BranchPoint(b["label"], parse_cycles(b["perm"], data["degree"])) for b in data["branch_points"]]
            )
            return cov, path, True
        except (OSError, ValueError, KeyError, SpecError, ValidationError):
            pass  # corrupt entry: rebuild below
    cov = build()
    record = {"example": example, "params": params, "key": key, **cov.to_spec()}
    try:
        _atomic_write(path, json.dumps(record, sort_keys=True, indent=1))
    except OSError:
        return cov, None, False
    return cov, path, False


def covering_digest(covering):
    text = ";".join(f"{b.label}={format_cycles(b.perm)}" for b in covering.branch_points)
    return hashlib.sha256(f"{covering.degree}|{text}".encode()).hexdigest()[:16]
