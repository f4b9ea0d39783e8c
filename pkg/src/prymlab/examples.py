"""Parametric runner for the worked families: build the witness, run the
whole pipeline, and compare each quantity with its closed form."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import fixtures as fx
from .errors import ValidationError
from .graphs import latin_square_graph, lattice_complement, lattice_graph, schlaefli_graph, validate_srg
from .prym import build_triple, dimensions, fixed_point_analysis
from .report import fiber_product_section, split_section, triple_report
from .splitting import analyze_type_l1l2, branch_type_counts, canonical_split, from_tower

EXAMPLE_IDS = ("5.1", "5.2", "5.3", "5.4", "6.4a", "6.4b", "7.1")

PARAMS = {
    "5.1": ("n",),
    "5.2": ("n", "l"),
    "5.3": ("n", "l1", "l2"),
    "5.4": ("n", "l"),
    "6.4a": (),
    "6.4b": (),
    "7.1": ("n", "l1", "l2"),
}

DEFAULTS = {
    "5.1": {"n": 12},
    "5.2": {"n": 3, "l": 2},
    "5.3": {"n": 6, "l1": 0, "l2": 6},
    "5.4": {"n": 5, "l": 2},
    "6.4a": {},
    "6.4b": {},
    "7.1": {"n": 3, "l1": 1, "l2": 0},
}


@dataclass
class Check:
    quantity: str
    computed: object
    expected: object
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "PASS" if self.computed == self.expected else "FAIL"


@dataclass
class ExampleRun:
    example: str
    params: dict
    checks: list
    report: dict
    warnings: list = field(default_factory=list)
    cache_path: str | None = None

    @property
    def passed(self):
        return all(c.status != "FAIL" for c in self.checks)

    def lines(self):
        head = " ".join(f"{k}={v}" for k, v in self.params.items())
        out = [f"example {self.example} {head}".rstrip()]
        for c in self.checks:
            out.append(f"  {c.quantity:<28} computed={c.computed!s:<10} expected={c.expected!s:<10} {c.status}")
        for w in self.warnings:
            out.append(f"  WARNING: {w}")
        return out


def _half(x):
    v = Fraction(x, 2)
    if v.denominator != 1:
        raise ValidationError("param-out-of-range", "closed form is not an integer for these parameters")
    return int(v)


def _resolve(example, params):
    if example not in EXAMPLE_IDS:
        raise ValidationError("unknown-example", f"{example!r} is not one of {', '.join(EXAMPLE_IDS)}")
    merged = dict(DEFAULTS[example])
    for k, v in params.items():
        if v is None:
            continue
        if k not in PARAMS[example]:
            raise ValidationError("param-out-of-range", f"example {example} takes no parameter {k}")
        merged[k] = v
    return merged


def _triple_checks(triple, expected, fp=None):
    fp = fp or fixed_point_analysis(triple)
    dims = dimensions(triple, fixed_points=fp)
    got = {
        "genus": dims.genus,
        "d_plus": dims.d_plus,
        "d_minus": dims.d_minus,
        "exponent": dims.exponent,
        "intersection_number": dims.intersection_number,
        "fixed_point_free": dims.fixed_point_free,
    }
    return [Check(k, got[k], v) for k, v in expected.items()], dims


def run_example(example, use_cache=True, **params):
    p = _resolve(example, params)
    checks, warnings, extra = [], [], {}
    cache_path = None

    def covering(builder, *args):
        nonlocal cache_path
        if not use_cache:
            return builder(*args)
        cov, path, _ = fx.cached_covering(example, p, lambda: builder(*args))
        cache_path = str(path) if path else None
        return cov

    if example == "5.1":
        n = p["n"]
        graph = schlaefli_graph()
        checks.append(Check("srg_params", validate_srg(graph).as_tuple(), (27, 10, 1, 5)))
        checks.append(Check("group_order", graph.group.order(), 51840))
        triple = build_triple(graph, 1, covering(fx.schlaefli_witness, n))
        c, _ = _triple_checks(triple, {"genus": 6 * n - 26, "d_plus": n - 6, "exponent": 6, "fixed_point_free": True})
        checks += c
    elif example == "5.2":
        n, l = p["n"], p["l"]
        triple = build_triple(lattice_graph(n), 1, covering(fx.lattice_witness, n, l))
        exp = {
            "genus": (n - 1) ** 2 + _half(l * n * (n - 1)),
            "d_plus": (n - 1) * (n - 3) + _half(l * (n - 1) * (n - 2)),
            "fixed_point_free": True,
        }
        if n == 3:
            exp["exponent"] = 3
        c, _ = _triple_checks(triple, exp)
        checks += c
        if n == 3:
            checks.append(Check("genus = 3l + 4", triple.genus, 3 * l + 4))
    elif example == "5.3":
        n, l1, l2 = p["n"], p["l1"], p["l2"]
        triple = build_triple(lattice_complement(n), 1, covering(fx.twisted_witness, n, l1, l2))
        exp = {
            "genus": _half((n - 1) * (n - 2) + l1 * n * (n - 1)) + l2 * n,
            "intersection_number": (l1 + 1) * (n - 1) * n,
            "d_plus": l1 * (n - 1) + l2,
        }
        c, _ = _triple_checks(triple, exp)
        checks += c
    elif example == "5.4":
        n, l = p["n"], p["l"]
        triple = build_triple(latin_square_graph(n), 1, covering(fx.latin_witness, n, l))
        fp = fixed_point_analysis(triple)
        exp_genus = 1 - n * n + _half(l * n * n * (n - 1))
        exp_dplus = -(n - 1) * (n - 2) + _half(l * n * (n - 1) * (n - 3))
        c, dims = _triple_checks(triple, {"genus": exp_genus}, fp)
        checks += c
        if fp.fixed_point_free:
            checks.append(Check("fixed_point_free", True, True))
            checks.append(Check("d_plus", dims.d_plus, exp_dplus))
        else:
            # the closed form presumes no fixed points; report the gap instead of failing
            warnings.append(
                f"n={n}: translation cycles meet adjacent vertices, so the correspondence has fixed points "
                f"(intersection number {fp.intersection_number}); the closed form for d_plus assumes none"
            )
            checks.append(Check("fixed_point_free", False, True, "WARN"))
            checks.append(Check("d_plus (closed form)", dims.d_plus, exp_dplus, "WARN" if dims.d_plus != exp_dplus else "PASS"))
            sample = fp.nonempty()[0]
            extra["first_fixed_point_set"] = {"branch": sample[0], "s": sample[2], "t": list(sample[3])}
    elif example in ("6.4a", "6.4b"):
        case = 1 if example == "6.4a" else 2
        tower = fx.simple_tower(case)
        triple = from_tower(tower)
        split = canonical_split(triple)
        counts = branch_type_counts(split, triple)
        dims = dimensions(triple)
        if case == 1:
            exp = {"simple": 4, "double": 10, "genus": 7, "genus_quotient": 3, "d_plus": 4, "d_minus": 3}
        else:
            exp = {"simple": 0, "double": 18, "genus": 11, "genus_quotient": 6, "d_plus": 5, "d_minus": 6}
        got = {
            "simple": counts["simple"], "double": counts["double"], "genus": triple.genus,
            "genus_quotient": split.genus_quotient, "d_plus": dims.d_plus, "d_minus": dims.d_minus,
        }
        checks += [Check(k, got[k], v) for k, v in exp.items()]
        checks.append(Check("simple_split", split.simple, True))
        extra["split"] = split_section(split, triple)
    elif example == "7.1":
        n, l1, l2 = p["n"], p["l1"], p["l2"]
        triple = build_triple(lattice_complement(n), 1, covering(fx.exponent_witness, n, l1, l2))
        c, _ = _triple_checks(
            triple,
            {"genus": (n - 1) ** 2 + (l1 + l2) * n, "d_plus": l1 + l2, "exponent": n, "fixed_point_free": True},
        )
        checks += c
        fpr = analyze_type_l1l2(triple)
        checks += [
            Check("genus_C1", fpr.genus1, l1),
            Check("genus_C2", fpr.genus2, l2),
            Check("H1_cap_H2 = Stab(1)", fpr.intersection_is_stabilizer, True),
            Check("<H1,H2> = G", fpr.join_is_G, True),
        ]
        extra["fiber_product"] = fiber_product_section(fpr)
    report = triple_report(triple)
    report.update(extra)
    report["example"] = {"id": example, "params": p}
    report["checks"] = [{"quantity": c.quantity, "computed": c.computed, "expected": c.expected, "status": c.status} for c in checks]
    report["warnings"] = sorted(set(report["warnings"] + warnings))
    return ExampleRun(example, p, checks, report, report["warnings"], cache_path)
