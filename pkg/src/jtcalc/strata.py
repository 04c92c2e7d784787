"""
Parameter charts for commuting tuples, point sweeps, Jordan-type tabulation,
determinantal rank loci, semicontinuity along curves, and constant-rank
audits on strata.

A chart names polynomial templates for the tuple entries plus constraint
polynomials; points are evaluated exactly over the swept finite field.  All
locus comparisons are by evaluation over finite point sweeps; no ideal
machinery is involved.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import CapExceededError, ChartError, JTCalcError
from .fields import FiniteField, GF, PolyRing, RationalFunctionField
from .jordan import dominance_leq, jt_rank
from .linalg import ExactMatrix
from .parsing import parse_field_spec, parse_polynomial
from .theta import (
    KIND_GA,
    KIND_GL,
    KIND_MULTI_GA,
    CommutingTuple,
    homotopy_theta,
    jt_at_point,
    scale_tuple,
    theta_exp,
    theta_full,
)

SYMBOLIC_DIM_CAP = 64
EXHAUSTIVE_DEFAULT_BUDGET = 10**6
SAMPLE_DEFAULT = 10**4


def _thread_count():
    try:
        return max(1, int(os.environ.get("JTCALC_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    """Map preserving input order; JTCALC_THREADS caps worker parallelism."""
    workers = _thread_count()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Chart:
    """Polynomial parametrization of commuting tuples with constraints."""

    name: str
    kind: str
    p: int
    r: int
    size: int
    ring: PolyRing
    templates: tuple
    constraints: tuple

    @property
    def params(self):
        return self.ring.variables

    @property
    def weights(self):
        return self.ring.weights

    def satisfies(self, values):
        return all(c.evaluate(list(values)).is_zero() for c in self.constraints)

    def tuple_at(self, values, validated=True):
        values = list(values)
        field = values[0].field if values else GF(self.p)
        mats = []
        for tmpl in self.templates:
            rows = [
                [tmpl.entry(i, j).evaluate(values) for j in range(tmpl.cols)]
                for i in range(tmpl.rows)
            ]
            mats.append(ExactMatrix.from_rows(field, rows))
        if self.kind == KIND_GL:
            return CommutingTuple.gl(mats, validated=validated)
        scalars = [m.entry(0, 0) for m in mats]
        return CommutingTuple._scalar_tuple(self.kind, scalars, field)

    def symbolic_tuple(self):
        if self.kind == KIND_GL:
            return CommutingTuple(KIND_GL, self.ring, self.r, self.size, self.templates, False)
        scalars = [t.entry(0, 0) for t in self.templates]
        return CommutingTuple._scalar_tuple(self.kind, scalars, self.ring)

    def generic_tuple(self, substitution):
        """Tuple over a one-variable polynomial ring via a curve substitution."""
        values = [substitution[v] for v in self.params]
        ring1 = values[0].ring
        mats = []
        for tmpl in self.templates:
            rows = [
                [tmpl.entry(i, j).evaluate_in(ring1, values) for j in range(tmpl.cols)]
                for i in range(tmpl.rows)
            ]
            mats.append(ExactMatrix.from_rows(ring1, rows))
        if self.kind == KIND_GL:
            return CommutingTuple(KIND_GL, ring1, self.r, self.size, tuple(mats), False)
        scalars = [m.entry(0, 0) for m in mats]
        return CommutingTuple._scalar_tuple(self.kind, scalars, ring1)

    def to_text(self):
        lines = [
            f"name {self.name}",
            f"field GF({self.p})",
            f"kind {self.kind}",
            f"r {self.r}",
            f"N {self.size}",
            "params " + " ".join(f"{v}:{w}" for v, w in zip(self.params, self.weights)),
        ]
        for tmpl in self.templates:
            lines.append("template")
            for i in range(tmpl.rows):
                lines.append(" ".join(tmpl.entry(i, j).compact_str() for j in range(tmpl.cols)))
        for c in self.constraints:
            lines.append("constraint " + c.compact_str())
        return "\n".join(lines) + "\n"


def parse_chart(text):
    """Parse the plain-text chart config emitted by Chart.to_text."""
    name = "chart"
    field = None
    kind = KIND_GL
    r = None
    size = None
    params = []
    weights = []
    template_rows = []
    constraints_text = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        head, _, rest = ln.partition(" ")
        rest = rest.strip()
        if head == "name":
            name = rest
        elif head == "field":
            field = parse_field_spec(rest)
        elif head == "kind":
            if rest not in (KIND_GL, KIND_GA, KIND_MULTI_GA):
                raise ChartError(f"unknown chart kind {rest!r} (line {lineno})")
            kind = rest
        elif head == "r":
            r = int(rest)
        elif head == "N":
            size = int(rest)
        elif head == "params":
            for chunk in rest.split():
                v, _, w = chunk.partition(":")
                params.append(v)
                weights.append(int(w) if w else 1)
        elif head == "template":
            current = []
            template_rows.append(current)
        elif head == "constraint":
            constraints_text.append(rest)
        else:
            if current is None:
                raise ChartError(f"unexpected line {lineno}: {raw!r}")
            current.append(ln.split())
    if field is None or r is None or size is None or not params:
        raise ChartError("chart config needs field, r, N and params lines")
    if field.n != 1:
        raise ChartError("chart template coefficients live over the prime field")
    ring = PolyRing(field, params, weights)
    templates = []
    for rows in template_rows:
        if len(rows) != size or any(len(row) != size for row in rows):
            raise ChartError(f"template grid must be {size} x {size}")
        templates.append(
            ExactMatrix.from_rows(ring, [[parse_polynomial(ring, cell) for cell in row] for row in rows])
        )
    if len(templates) != r:
        raise ChartError(f"expected {r} templates, found {len(templates)}")
    constraints = tuple(parse_polynomial(ring, c) for c in constraints_text)
    return Chart(name, kind, field.p, r, size, ring, tuple(templates), constraints)


# -- builtin charts ------------------------------------------------------------


def builtin_chart(name, p, r=1, N=2, s=2):
    """Charts shipped with the package: ga_r, multi_ga, sl2_line, upper_glN."""
    if name == "ga_r":
        ring = PolyRing(GF(p), tuple(f"a{i}" for i in range(r)), tuple(p**i for i in range(r)))
        templates = tuple(ExactMatrix.from_rows(ring, [[ring.var(f"a{i}")]]) for i in range(r))
        return Chart("ga_r", KIND_GA, p, r, 1, ring, templates, ())
    if name == "multi_ga":
        ring = PolyRing(GF(p), tuple(f"a{i}" for i in range(s)))
        templates = tuple(ExactMatrix.from_rows(ring, [[ring.var(f"a{i}")]]) for i in range(s))
        return Chart("multi_ga", KIND_MULTI_GA, p, s, 1, ring, templates, ())
    if name == "sl2_line":
        if p < 3:
            raise ChartError("sl2_line is defined for p >= 3")
        names = ("a", "b", "c") + tuple(f"l{i}" for i in range(r))
        weights = (1, 1, 1) + tuple(p**i for i in range(r))
        ring = PolyRing(GF(p), names, weights)
        a, b, c = ring.var("a"), ring.var("b"), ring.var("c")
        templates = []
        for i in range(r):
            l = ring.var(f"l{i}")
            templates.append(ExactMatrix.from_rows(ring, [[l * a, l * b], [l * c, -(l * a)]]))
        return Chart("sl2_line", KIND_GL, p, r, 2, ring, tuple(templates), (a * a + b * c,))
    if name == "upper_glN":
        if N > p:
            raise ChartError("upper_glN needs N <= p so strictly upper matrices are p-nilpotent")
        names = []
        weights = []
        for sidx in range(r):
            for i in range(N):
                for j in range(i + 1, N):
                    names.append(f"b{sidx}_{i}{j}")
                    weights.append(p**sidx)
        ring = PolyRing(GF(p), tuple(names), tuple(weights))
        templates = []
        for sidx in range(r):
            rows = [[ring.zero() for _ in range(N)] for _ in range(N)]
            for i in range(N):
                for j in range(i + 1, N):
                    rows[i][j] = ring.var(f"b{sidx}_{i}{j}")
            templates.append(ExactMatrix.from_rows(ring, rows))
        constraints = []
        for s1 in range(r):
            for s2 in range(s1 + 1, r):
                comm = templates[s1] @ templates[s2] - templates[s2] @ templates[s1]
                for i in range(N):
                    for j in range(i + 1, N):
                        constraints.append(comm.entry(i, j))
        return Chart("upper_glN", KIND_GL, p, r, N, ring, tuple(templates), tuple(constraints))
    raise ChartError(f"unknown builtin chart {name!r}")


# -- point enumeration ---------------------------------------------------------


def enumerate_points(chart, field, budget=EXHAUSTIVE_DEFAULT_BUDGET, seed=0,
                     samples=SAMPLE_DEFAULT):
    """Yield (values, tuple) pairs over the chart, exhaustively or sampled.

    Exhaustive when |field|^#params <= budget, else seeded rejection
    sampling emitting exactly `samples` constraint-satisfying points.
    Deterministic order either way.
    """
    if field.p != chart.p:
        raise ChartError("field characteristic differs from the chart's")
    if budget <= 0:
        raise ChartError("budget must be positive")
    k = len(chart.params)
    total = field.order**k
    if total <= budget:
        for combo in itertools.product(list(field.elements()), repeat=k):
            values = list(combo)
            if chart.satisfies(values):
                yield values, chart.tuple_at(values)
        return
    rng = random.Random(seed)
    emitted = 0
    attempts = 0
    limit = max(100 * samples, 1000)
    while emitted < samples and attempts < limit:
        attempts += 1
        values = [field.random_element(rng) for _ in range(k)]
        if chart.satisfies(values):
            yield values, chart.tuple_at(values)
            emitted += 1
    if emitted < samples:
        raise ChartError("rejection sampling failed to find enough chart points")


def sweep_mode(chart, field, budget=EXHAUSTIVE_DEFAULT_BUDGET):
    return "exhaustive" if field.order ** len(chart.params) <= budget else "sampled"


# -- tabulation ------------------------------------------------------------------


@dataclass
class StratumEntry:
    count: int = 0
    representatives: list = dc_field(default_factory=list)


@dataclass
class StrataTable:
    chart_name: str
    module_text: str
    field_desc: str
    variant: str
    mode: str
    seed: int
    entries: dict
    zero_count: int
    swept: int

    def types(self):
        return sorted(self.entries, key=lambda a: (a.blocks(),), reverse=True)

    def to_jsonl_records(self):
        recs = []
        for a in self.types():
            entry = self.entries[a]
            recs.append(
                {
                    "type": a.to_text(),
                    "count": entry.count,
                    "representatives": entry.representatives,
                }
            )
        return recs

    def to_csv_lines(self):
        lines = ["type,count,representatives"]
        for a in self.types():
            entry = self.entries[a]
            reps = ";".join("|".join(rep) for rep in entry.representatives)
            lines.append(f"\"{a.to_text()}\",{entry.count},\"{reps}\"")
        return lines


def _serialize_values(values):
    return [str(v) for v in values]


def tabulate_jt(chart, e, field, variant="full", budget=EXHAUSTIVE_DEFAULT_BUDGET,
                seed=0, samples=SAMPLE_DEFAULT, max_reps=4, orbit_dedupe=False):
    """Group swept points by Jordan type; the zero tuple is reported separately."""
    entries = {}
    zero_count = 0
    swept = 0
    points = list(enumerate_points(chart, field, budget, seed, samples))

    def work(item):
        values, tup = item
        if tup.is_zero():
            return values, None
        if orbit_dedupe:
            tup = orbit_reduce(tup)
        return values, jt_at_point(e, tup, variant)

    for values, jt in _ordered_map(work, points):
        swept += 1
        if jt is None:
            zero_count += 1
            continue
        entry = entries.setdefault(jt, StratumEntry())
        entry.count += 1
        if len(entry.representatives) < max_reps:
            entry.representatives.append(_serialize_values(values))
    return StrataTable(
        chart_name=chart.name,
        module_text=e.to_text(),
        field_desc=field.descriptor(),
        variant=variant,
        mode=sweep_mode(chart, field, budget),
        seed=seed,
        entries=entries,
        zero_count=zero_count,
        swept=swept,
    )


# -- determinantal rank loci -------------------------------------------------------


def rank_locus_minors(chart, e, variant, j, d):
    """Generators of the j-th power rank <= d locus: all (d+1)-minors of theta^j."""
    m = e.dim()
    if m > SYMBOLIC_DIM_CAP:
        raise CapExceededError(f"symbolic dimension {m} exceeds cap {SYMBOLIC_DIM_CAP}")
    if not 1 <= j < chart.p:
        raise JTCalcError(f"power {j} outside 1..p-1")
    if not 0 <= d <= m:
        raise JTCalcError(f"rank bound {d} outside 0..{m}")
    if d >= m:
        return []
    tup = chart.symbolic_tuple()
    theta = theta_full(e, tup) if variant == "full" else theta_exp(e, tup)
    power = theta.matrix.pow(j)
    return power.minors(d + 1)


@dataclass
class ClosedStratumReport:
    chart_name: str
    type_text: str
    variant: str
    checked: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches


def verify_closed_stratum(chart, e, a, field, variant="full",
                          budget=EXHAUSTIVE_DEFAULT_BUDGET, seed=0, samples=SAMPLE_DEFAULT):
    """Check {x : JT(x) <= a} equals the common zero set of the rank-locus minors."""
    m = e.dim()
    if a.dim != m:
        raise ChartError("stratum type dimension differs from the module dimension")
    p = chart.p
    minor_sets = {}
    for s in range(1, p):
        d_s = jt_rank(a, s)
        minor_sets[s] = rank_locus_minors(chart, e, variant, s, d_s)
    mismatches = []
    checked = 0
    for values, tup in enumerate_points(chart, field, budget, seed, samples):
        if tup.is_zero():
            continue
        checked += 1
        jt = jt_at_point(e, tup, variant)
        lhs = dominance_leq(jt, a)
        rhs = all(
            poly.evaluate(values).is_zero()
            for polys in minor_sets.values()
            for poly in polys
        )
        if lhs != rhs:
            mismatches.append(
                {
                    "point": _serialize_values(values),
                    "jordan_type": jt.to_text(),
                    "in_downset": lhs,
                    "minors_vanish": rhs,
                }
            )
    return ClosedStratumReport(chart.name, a.to_text(), variant, checked, mismatches)


# -- curves and semicontinuity --------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    """A 1-parameter family inside a chart: each parameter becomes a polynomial in t."""

    chart: Chart
    substitution: dict
    label: str = "curve"

    def __post_init__(self):
        ring1 = None
        for v in self.chart.params:
            if v not in self.substitution:
                raise ChartError(f"curve misses a value for parameter {v!r}")
            ring1 = self.substitution[v].ring
        values = [self.substitution[v] for v in self.chart.params]
        for c in self.chart.constraints:
            if not c.evaluate_in(ring1, values).is_zero():
                raise ChartError("curve violates a chart constraint identically in t")

    def special_values(self, field):
        zero = [field.zero()]
        return [field.embed(self.substitution[v].evaluate(zero)) for v in self.chart.params]


def curve_from_coeffs(chart, field, coeff_map, label="curve"):
    """Build a curve from {param: [c0, c1, ...]} integer coefficient lists."""
    ring1 = PolyRing(field, ("t",))
    t = ring1.var("t")
    subs = {}
    for v in chart.params:
        coeffs = coeff_map.get(v, [0])
        poly = ring1.zero()
        for i, cv in enumerate(coeffs):
            term = ring1.constant(cv) * t**i
            poly = poly + term
        subs[v] = poly
    return Curve(chart, subs, label)


@dataclass
class SemicontReport:
    curve_label: str
    variant: str
    generic_type: str
    special_type: str
    ok: bool


def _poly_to_ratfunc(poly, ratfield):
    terms = {}
    for e, c in poly.terms.items():
        terms[e[0]] = c
    size = max(terms) + 1 if terms else 0
    num = [terms.get(i, ratfield.field.zero()) for i in range(size)]
    return ratfield.from_coeffs(num)


def semicontinuity_check(curve, e, variant="full"):
    """JT at the special point t=0 must lie below JT at the generic point of the curve."""
    from .jordan import jt_of_nilpotent

    chart = curve.chart
    generic_tup = chart.generic_tuple(curve.substitution)
    theta = theta_full(e, generic_tup) if variant == "full" else theta_exp(e, generic_tup)
    ring1 = generic_tup.domain
    ratfield = RationalFunctionField(ring1.field, ring1.variables[0])
    generic_matrix = theta.matrix.map_entries(ratfield, lambda v: _poly_to_ratfunc(v, ratfield))
    generic_jt = jt_of_nilpotent(generic_matrix, chart.p)

    field = ring1.field
    special_vals = curve.special_values(field)
    special_tup = chart.tuple_at(special_vals)
    special_jt = jt_at_point(e, special_tup, variant)

    ok = dominance_leq(special_jt, generic_jt)
    return SemicontReport(curve.label, variant, generic_jt.to_text(), special_jt.to_text(), ok)


def builtin_curves(chart, seed, count):
    """Seeded random curves satisfying the chart constraints identically."""
    field = GF(chart.p)
    ring1 = PolyRing(field, ("t",))
    t = ring1.var("t")
    rng = random.Random(seed)

    def rand_poly(max_deg=2):
        poly = ring1.zero()
        for i in range(max_deg + 1):
            poly = poly + ring1.constant(rng.randrange(chart.p)) * t**i
        return poly

    curves = []
    for idx in range(count):
        subs = {}
        if chart.name == "sl2_line":
            b = rand_poly()
            d = rand_poly()
            subs["a"] = b * d
            subs["b"] = b
            subs["c"] = -(b * d * d)
            for i in range(chart.r):
                subs[f"l{i}"] = rand_poly()
        elif chart.name == "upper_glN":
            # all B_s are polynomial multiples of one strictly upper C(t)
            n = chart.size
            centries = {
                (i, j): rand_poly(1) for i in range(n) for j in range(i + 1, n)
            }
            for sidx in range(chart.r):
                f = rand_poly(1)
                for i in range(n):
                    for j in range(i + 1, n):
                        subs[f"b{sidx}_{i}{j}"] = f * centries[(i, j)]
        else:
            for v in chart.params:
                subs[v] = rand_poly()
        curves.append(Curve(chart, subs, label=f"{chart.name}-curve-{seed}-{idx}"))
    return curves


# -- constant rank audits ---------------------------------------------------------------


@dataclass
class ConstantRankReport:
    module_text: str
    j: int
    per_stratum: dict
    global_constant: bool
    homotopy_checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def constant_rank_on_strata(table, chart, e, j, field, homotopy_samples=((1, 0), (0, 1), (1, 1))):
    """Audit rank/kernel/cokernel constancy of theta^j on each stratum.

    When the whole table shares one j-rank, additionally verify the
    homotopy-family operator has that same j-rank at sampled (s:t).
    """
    failures = []
    per_stratum = {}
    m = e.dim()
    jranks = set()
    homotopy_checked = 0
    for a, entry in table.entries.items():
        expected_rank = jt_rank(a, j)
        jranks.add(expected_rank)
        audited = []
        for rep in entry.representatives:
            values = _parse_values(rep, field)
            tup = chart.tuple_at(values)
            theta = theta_full(e, tup) if table.variant == "full" else theta_exp(e, tup)
            rk = theta.matrix.pow(j).rank()
            ker = m - rk
            coker = m - rk
            audited.append({"point": rep, "rank": rk, "kernel": ker, "cokernel": coker})
            if rk != expected_rank:
                failures.append(
                    {"stratum": a.to_text(), "point": rep, "rank": rk, "expected": expected_rank}
                )
        per_stratum[a.to_text()] = audited
    global_constant = len(jranks) == 1
    if global_constant and jranks:
        the_rank = jranks.pop()
        for a, entry in table.entries.items():
            for rep in entry.representatives:
                values = _parse_values(rep, field)
                tup = chart.tuple_at(values)
                for (sv, tv) in homotopy_samples:
                    hm = homotopy_theta(e, tup, field.from_int(sv), field.from_int(tv))
                    rk = hm.matrix.pow(j).rank()
                    homotopy_checked += 1
                    if rk != the_rank:
                        failures.append(
                            {
                                "stratum": a.to_text(),
                                "point": rep,
                                "homotopy": f"({sv}:{tv})",
                                "rank": rk,
                                "expected": the_rank,
                            }
                        )
    return ConstantRankReport(e.to_text(), j, per_stratum, global_constant, homotopy_checked, failures)


def _parse_values(texts, field):
    out = []
    for s in texts:
        out.append(_parse_element(s, field))
    return out


def _parse_element(text, field):
    text = text.strip()
    if field.n == 1:
        return field.from_int(int(text))
    # forms like "2g+1", "g^2", "0"
    coeffs = [0] * field.n
    for chunk in text.replace("-", "+-").split("+"):
        if not chunk:
            continue
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:]
        if "g" in chunk:
            head, _, tail = chunk.partition("g")
            c = int(head) if head else 1
            exp = int(tail[1:]) if tail.startswith("^") else 1
        else:
            c = int(chunk)
            exp = 0
        coeffs[exp] += -c if neg else c
    return field.element(coeffs)


# -- weighted orbit normalization ----------------------------------------------------------


def orbit_reduce(tup):
    """Canonical representative of the weighted scaling orbit of a nonzero tuple."""
    if tup.is_zero():
        raise JTCalcError("the zero tuple has no projective representative")
    field = tup.domain
    if not isinstance(field, FiniteField):
        raise JTCalcError("orbit reduction works over finite fields")
    lead = None
    for s, m in enumerate(tup.mats):
        for i in range(m.rows):
            for j in range(m.cols):
                v = m.entry(i, j)
                if not v.is_zero():
                    lead = (s, i, j, v)
                    break
            if lead:
                break
        if lead:
            break
    s, i, j, v = lead
    beta = v.inverse()
    # solve alpha^(p^s) = beta: invert the Frobenius, which is bijective
    alpha = beta.frobenius((-s) % field.n) if field.n > 1 else beta
    scaled = scale_tuple(tup, alpha)
    if scaled.mats[s].entry(i, j) == field.one():
        return scaled
    # unreachable over finite fields; kept for contract completeness
    best = None
    for alpha in field.nonzero_elements():
        cand = scale_tuple(tup, alpha)
        key = [x for m2 in cand.serialize() for row in m2 for x in row]
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]
