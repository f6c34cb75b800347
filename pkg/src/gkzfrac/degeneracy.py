"""Canonical coordinates on regular maximal cones and the degeneracy
certificate.

A chart is a unimodular basis of the relation lattice sitting inside the
dual of a smooth maximal cone; its monomial coordinates carry the parity
sign of the auxiliary slots.  On such a chart the period series re-indexes
to a plain power series, and among the solution pairings exactly one is free
of logarithms, which is the executable content of the degeneracy statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import exact_linalg as xl
from . import series as se
from .errors import CertificateFailed, NegativeExponent, SubdivisionFailed
from .gkz import canonical_alpha, indicial_ideal_zero_locus

SUBDIVISION_DEPTH_CAP = 32


@dataclass(frozen=True)
class CanonicalChart:
    """A smooth maximal cone with its canonical monomial coordinates.

    ``basis_vectors`` are the relation-lattice vectors dual to the cone's
    extreme rays; coordinate k is the monomial of basis vector k times the
    sign ``signs[k]``.
    """
    cone_rays: tuple
    basis_vectors: tuple
    signs: tuple


@dataclass
class ChartSeries:
    """Truncated series in chart coordinates with optional log slots.

    ``terms`` maps (monomial exponents, log multidegree) to rationals, both
    indexed by the chart coordinates.
    """
    dim: int
    order: object
    terms: dict = field(default_factory=dict)

    def add_term(self, expo, logdeg, coeff):
        if coeff == 0:
            return
        key = (tuple(expo), tuple(logdeg))
        value = self.terms.get(key, Fraction(0)) + coeff
        if value == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = value

    def coefficient(self, expo, logdeg=None):
        if logdeg is None:
            logdeg = (0,) * self.dim
        return self.terms.get((tuple(expo), tuple(logdeg)), Fraction(0))

    def is_log_free(self):
        return all(all(m == 0 for m in logdeg) for _, logdeg in self.terms)

    def sorted_items(self):
        return sorted(self.terms.items())


def _chart_from_simplicial_cone(sys, rays):
    """Chart of a smooth maximal cone given by its extreme rays."""
    dim = len(sys.basis)
    u = tuple(rays)
    d = xl.det(u)
    if abs(d) != 1:
        return None
    inv = _integer_inverse(u)
    basis_vectors = []
    for k in range(dim):
        col = tuple(inv[i][k] for i in range(dim))
        basis_vectors.append(sys.from_basis_coords(col))
    assert xl.is_unimodular_lattice_basis(basis_vectors, sys.basis)
    aux = sys.aux_positions()
    signs = tuple((-1) ** (sum(v[j] for j in aux) % 2) for v in basis_vectors)
    return CanonicalChart(cone_rays=tuple(u),
                          basis_vectors=tuple(basis_vectors), signs=signs)


def _integer_inverse(m):
    k = len(m)
    cols = []
    for i in range(k):
        e = tuple(1 if j == i else 0 for j in range(k))
        col = xl.solve_unique(m, e)
        assert col is not None and all(c.denominator == 1 for c in col)
        cols.append(tuple(int(c) for c in col))
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def _triangulate_cone(rays, dim):
    """Split a pointed cone into simplicial cones (rank <= 3)."""
    if len(rays) == dim:
        return [tuple(rays)]
    if dim == 2:
        raise SubdivisionFailed(
            f"two-dimensional cone with {len(rays)} extreme rays")
    if dim != 3:
        raise SubdivisionFailed(f"cone splitting unsupported in rank {dim}")
    # fan out from the first ray across the facets not containing it
    facets = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            pair = (rays[i], rays[j])
            rows, pivots = xl.rref(pair)
            if len(pivots) != 2:
                continue
            normal = _facet_normal(pair, rays)
            if normal is not None:
                facets.append(frozenset((rays[i], rays[j])))
    base = rays[0]
    cones = []
    for facet in facets:
        if base in facet:
            continue
        cones.append(tuple(sorted(facet)) + (base,))
    if not cones:
        raise SubdivisionFailed("could not facet the cone")
    return cones


def _facet_normal(pair, rays):
    rows, pivots = xl.rref(pair)
    free = [c for c in range(3) if c not in pivots]
    if len(free) != 1:
        return None
    normal = [Fraction(0)] * 3
    normal[free[0]] = Fraction(1)
    for i, col in enumerate(pivots):
        normal[col] = -rows[i][free[0]]
    vals = [xl.dot(normal, r) for r in rays]
    if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
        return tuple(normal)
    return None


def _stellar_refine(sys, cones, depth=0):
    """Make every cone unimodular by stellar subdivision at short witnesses."""
    if depth > SUBDIVISION_DEPTH_CAP:
        raise SubdivisionFailed("stellar subdivision did not terminate")
    out = []
    for rays in cones:
        if abs(xl.det(rays)) == 1:
            out.append(rays)
            continue
        witness = _parallelepiped_witness(rays)
        if witness is None:
            raise SubdivisionFailed(f"no witness for cone {rays}")
        pieces = []
        for drop in range(len(rays)):
            new = tuple(witness if i == drop else r
                        for i, r in enumerate(rays))
            if xl.det(new) != 0:
                pieces.append(new)
        out.extend(_stellar_refine(sys, pieces, depth + 1))
    return out


def _parallelepiped_witness(rays):
    """Shortest nonzero lattice point in the half-open span of the rays."""
    dim = len(rays)
    bound = sum(max(abs(x) for x in r) for r in rays)
    candidates = []
    for point in xl.lattice_points(
            [(tuple(1 if i == j else 0 for i in range(dim)), bound)
             for j in range(dim)]
            + [(tuple(-1 if i == j else 0 for i in range(dim)), bound)
               for j in range(dim)], dim):
        if all(x == 0 for x in point):
            continue
        coeffs = xl.solve_unique(tuple(zip(*rays)), point)
        if coeffs is None:
            continue
        if all(0 <= c < 1 for c in coeffs):
            candidates.append(point)
    if not candidates:
        return None
    return min(candidates, key=lambda v: (max(abs(x) for x in v), v))


def subdivide_kahler_cone(sys):
    """Charts covering the closed ample cone by smooth maximal subcones.

    For a simplicial unimodular ample cone the subdivision is trivial and a
    single chart is returned.
    """
    cone = sys.kahler
    dim = cone.dim
    if len(cone.rays) == dim and abs(xl.det(cone.rays)) == 1:
        return [_chart_from_simplicial_cone(sys, cone.rays)]
    pieces = _triangulate_cone(list(cone.rays), dim)
    pieces = _stellar_refine(sys, pieces)
    charts = []
    for rays in sorted(pieces):
        chart = _chart_from_simplicial_cone(sys, rays)
        if chart is None:
            raise SubdivisionFailed(f"cone {rays} is not unimodular")
        charts.append(chart)
    return charts


# --- chart re-expansion -------------------------------------------------------------

def chart_coordinates(chart, ell):
    """Nonnegative integer exponents of x^ell in the chart monomials."""
    cols = tuple(zip(*chart.basis_vectors))
    sol = xl.solve_unique(cols, ell)
    assert sol is not None and all(c.denominator == 1 for c in sol), \
        f"{ell} is not an integer combination of the chart basis"
    m = tuple(int(c) for c in sol)
    if any(x < 0 for x in m):
        raise NegativeExponent(
            f"{ell} needs negative chart exponents {m}")
    return m


def period_in_chart(chart, series, order=None):
    """Re-index a log-free series by the chart monomials.

    Every stored exponent must decompose with nonnegative integer
    coefficients over the chart basis; a violation raises NegativeExponent
    and falsifies holomorphy of the extension.
    """
    dim = len(chart.basis_vectors)
    out = ChartSeries(dim=dim, order=order if order is not None
                      else series.order)
    for (ell, logdeg), coeff in series.sorted_items():
        assert all(x == 0 for x in logdeg), "chart transport needs log-free input"
        m = chart_coordinates(chart, ell)
        sign = 1
        for s, e in zip(chart.signs, m):
            if s == -1 and e % 2:
                sign = -sign
        out.add_term(m, (0,) * dim, sign * coeff)
    return out


def _dual_divisor_classes(sys, ring, chart):
    """Classes pairing as a dual basis against the chart basis vectors."""
    dim = len(chart.basis_vectors)
    d_classes = [ring.divisor_class(i, j) for (i, j) in sys.j_indices()]
    w_classes = []
    rows = tuple(chart.basis_vectors)
    for k in range(dim):
        target = tuple(Fraction(1 if i == k else 0) for i in range(dim))
        sol = xl.solve_linear(rows, target)
        assert sol is not None, "chart basis does not span the dual"
        particular, _null = sol
        cls = ring.zero()
        for j, w in enumerate(particular):
            if w:
                cls = cls + w * d_classes[j]
        w_classes.append(cls)
    # the divisor classes must re-assemble from the duals
    for j in range(sys.nvars):
        recomposed = ring.zero()
        for k, v in enumerate(chart.basis_vectors):
            if v[j]:
                recomposed = recomposed + v[j] * w_classes[k]
        assert recomposed == d_classes[j], "dual classes are inconsistent"
    return w_classes


def chart_pairings(sys, ring, chart, omega, order):
    """Solution pairings written in chart coordinates.

    Output k pairs the cohomology-valued series against the k-th dual basis
    functional; log slots are the chart coordinates (their number equals the
    relation-lattice rank), and all coefficients are exact rationals.
    """
    omega = se.check_weight(sys, omega)
    dim = len(chart.basis_vectors)
    w_classes = _dual_divisor_classes(sys, ring, chart)
    log_part = []
    for m in se._log_multidegrees(dim, sys.n):
        cls = ring.one()
        for k, e in enumerate(m):
            for _ in range(e):
                cls = cls * w_classes[k]
            if cls.is_zero():
                break
        if cls.is_zero():
            continue
        denom = 1
        for e in m:
            denom *= factorial(e)
        log_part.append((m, Fraction(1, denom) * cls))
    outputs = [ChartSeries(dim=dim, order=order) for _ in range(ring.dim)]
    for ell in se.mori_slab(sys, omega, order):
        base = se.o_class(sys, ring, ell)
        if base.is_zero():
            continue
        m = chart_coordinates(chart, ell)
        # The quotient-coordinate parity is already part of the product-form
        # coefficients, so no extra sign enters here (unlike period_in_chart,
        # whose input carries the untwisted coefficients).
        for logdeg, cls in log_part:
            total = base * cls
            if total.is_zero():
                continue
            for h in range(ring.dim):
                coeff = total.coords[h]
                if coeff:
                    outputs[h].add_term(m, logdeg, coeff)
    return outputs


# --- the certificate -----------------------------------------------------------------

@dataclass
class CertificateReport:
    """Per-clause outcome of the degeneracy check on one chart."""
    order: int
    clauses: list = field(default_factory=list)

    def add(self, name, ok, detail):
        self.clauses.append({"clause": name, "ok": bool(ok),
                             "detail": detail})

    @property
    def passed(self):
        return all(c["ok"] for c in self.clauses)

    def as_dict(self):
        return {"order": self.order, "passed": self.passed,
                "clauses": self.clauses}


def maximal_degeneracy_check(sys, ring, chart, order, omega=None,
                             strict=False):
    """Certify the degeneracy behaviour of the chart at truncation order.

    Three clauses: the period series extends as a genuine power series; the
    space of log-free solutions among the dual-basis pairings is exactly one
    dimensional and matches the transported period up to one scalar; the
    indicial locus is the single canonical exponent.  With ``strict`` a
    failing clause raises CertificateFailed instead of only being reported.
    """
    report = CertificateReport(order=order)
    if omega is None:
        omega = se.default_weight(sys)
    period = se.normalized_period_series(sys, omega, order)
    try:
        chart_period = period_in_chart(chart, period)
        report.add("holomorphic_extension", True,
                   f"{len(chart_period.terms)} monomials, all exponents "
                   "nonnegative")
    except NegativeExponent as exc:
        chart_period = None
        report.add("holomorphic_extension", False, str(exc))

    pairings = chart_pairings(sys, ring, chart, omega, order)
    log_keys = sorted({key for s in pairings for key in s.terms
                       if any(key[1])})
    matrix = [tuple(s.terms.get(key, Fraction(0)) for key in log_keys)
              for s in pairings]
    transposed = tuple(zip(*matrix)) if log_keys else ()
    if log_keys:
        sol = xl.solve_linear(transposed,
                              tuple(Fraction(0) for _ in log_keys))
        _particular, null = sol
    else:
        null = [tuple(Fraction(1 if i == j else 0) for i in range(ring.dim))
                for j in range(ring.dim)]
    if len(null) == 1:
        combo = null[0]
        log_free = ChartSeries(dim=len(chart.basis_vectors), order=order)
        for c, s in zip(combo, pairings):
            if c == 0:
                continue
            for (expo, logdeg), coeff in s.terms.items():
                log_free.add_term(expo, logdeg, c * coeff)
        ok = log_free.is_log_free() and bool(log_free.terms)
        report.add("unique_log_free_solution", ok,
                   "one-dimensional log-free subspace" if ok else
                   "log-free combination degenerates")
        if chart_period is not None and ok:
            ratio = None
            consistent = True
            for key, value in chart_period.sorted_items():
                other = log_free.terms.get(key, Fraction(0))
                if ratio is None:
                    if value == 0:
                        continue
                    if other == 0:
                        consistent = False
                        break
                    ratio = other / value
                elif other != ratio * value:
                    consistent = False
                    break
            extra = set(log_free.terms) - set(chart_period.terms)
            consistent = consistent and ratio is not None and not extra
            report.add("log_free_matches_period", consistent,
                       f"global scalar {se.fraction_str(ratio)}"
                       if consistent else "coefficient mismatch")
    else:
        report.add("unique_log_free_solution", False,
                   f"log-free subspace has dimension {len(null)}")

    locus = indicial_ideal_zero_locus(sys, tau=None)
    expected = [canonical_alpha(sys)]
    report.add("indicial_locus_is_canonical", locus == expected,
               "single canonical exponent" if locus == expected
               else f"locus {locus}")
    if strict and not report.passed:
        failed = [c["clause"] for c in report.clauses if not c["ok"]]
        raise CertificateFailed(f"violated clauses: {failed}")
    return report
