from fractions import Fraction

import pytest

from conftest import p1_fan, p1xp1_fan_r2, p2_fan
from gkzfrac import degeneracy as dg
from gkzfrac import gkz, series as se, toric
from gkzfrac import exact_linalg as xl
from gkzfrac.errors import NegativeExponent


def system(fan_maker):
    return gkz.build_system(fan_maker())


# --- charts -----------------------------------------------------------------------

def test_chart_p2_sign():
    sys = system(p2_fan)
    charts = dg.subdivide_kahler_cone(sys)
    assert len(charts) == 1
    assert charts[0].basis_vectors == ((-3, 1, 1, 1),)
    assert charts[0].signs == (-1,)


def test_chart_p1_sign():
    sys = system(p1_fan)
    charts = dg.subdivide_kahler_cone(sys)
    assert len(charts) == 1
    assert charts[0].basis_vectors == ((-2, 1, 1),)
    assert charts[0].signs == (1,)


def test_chart_p1xp1_signs():
    sys = system(p1xp1_fan_r2)
    charts = dg.subdivide_kahler_cone(sys)
    assert len(charts) == 1
    assert set(charts[0].basis_vectors) == {
        (-2, 1, 1, 0, 0, 0), (0, 0, 0, -2, 1, 1)}
    assert charts[0].signs == (1, 1)


def test_chart_basis_unimodular(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    for chart in dg.subdivide_kahler_cone(sys):
        assert xl.is_unimodular_lattice_basis(
            list(chart.basis_vectors), sys.basis)
        # basis vectors lie in the dual of the chart cone
        for v in chart.basis_vectors:
            coords = sys.basis_coords(v)
            for ray in chart.cone_rays:
                assert xl.dot(ray, coords) >= 0


# --- period transport ------------------------------------------------------------------

def test_period_in_chart_p1():
    sys = system(p1_fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    period = se.normalized_period_series(sys, se.default_weight(sys), 8)
    z = dg.period_in_chart(chart, period)
    assert z.coefficient((0,)) == 1
    assert z.coefficient((1,)) == Fraction(3, 4)
    assert z.coefficient((2,)) == Fraction(105, 64)
    assert z.coefficient((3,)) == Fraction(1155, 256)
    assert z.coefficient((4,)) == Fraction(225225, 16384)


def test_period_in_chart_p2_signs():
    sys = system(p2_fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    period = se.normalized_period_series(sys, se.default_weight(sys), 6)
    z = dg.period_in_chart(chart, period)
    assert z.coefficient((0,)) == 1
    assert z.coefficient((1,)) == Fraction(-15, 8)
    assert z.coefficient((2,)) == Fraction(10395, 512)


def test_period_in_chart_trivial_series():
    sys = system(p1_fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    s = se.LogSeries(alpha=gkz.canonical_alpha(sys),
                     weight=tuple(Fraction(x) for x in se.default_weight(sys)),
                     order=0)
    s.add_term((0, 0, 0), (0, 0, 0), Fraction(1))
    z = dg.period_in_chart(chart, s)
    assert z.terms == {((0,), (0,)): Fraction(1)}


def test_period_in_chart_negative_exponent():
    sys = system(p1_fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    s = se.LogSeries(alpha=gkz.canonical_alpha(sys),
                     weight=tuple(Fraction(x) for x in se.default_weight(sys)),
                     order=4)
    s.add_term((2, -1, -1), (0, 0, 0), Fraction(1))
    with pytest.raises(NegativeExponent):
        dg.period_in_chart(chart, s)


def test_region_decomposes_in_chart(corpus_fan):
    """Every summation-region vector has nonnegative chart coordinates."""
    sys = gkz.build_system(corpus_fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    omega = se.default_weight(sys)
    for ell in se.region_slab(sys, omega, 8):
        m = dg.chart_coordinates(chart, ell)
        assert all(x >= 0 for x in m)


# --- chart pairings ------------------------------------------------------------------------

def test_chart_pairings_unit_matches_period_p1():
    sys = system(p1_fan)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    omega = se.default_weight(sys)
    pairings = dg.chart_pairings(sys, ring, chart, omega, 6)
    period = dg.period_in_chart(
        chart, se.normalized_period_series(sys, omega, 6))
    unit = pairings[0]
    assert unit.is_log_free()
    assert unit.terms == period.terms


def test_chart_pairings_log_stratification_p2():
    sys = system(p2_fan)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    pairings = dg.chart_pairings(sys, ring, chart, se.default_weight(sys), 5)
    max_log = [max((sum(logdeg) for _, logdeg in s.terms), default=0)
               for s in pairings]
    assert sorted(max_log) == [0, 1, 2]


def test_chart_pairings_bidegrees_p1xp1():
    sys = system(p1xp1_fan_r2)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    pairings = dg.chart_pairings(sys, ring, chart, se.default_weight(sys), 5)
    assert len(pairings) == 4
    max_log = sorted(max((sum(logdeg) for _, logdeg in s.terms), default=0)
                     for s in pairings)
    assert max_log == [0, 1, 1, 2]


# --- the certificate ---------------------------------------------------------------------------

def test_certificate_p1():
    sys = system(p1_fan)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    report = dg.maximal_degeneracy_check(sys, ring, chart, 8)
    assert report.passed
    names = [c["clause"] for c in report.clauses]
    assert names == ["holomorphic_extension", "unique_log_free_solution",
                     "log_free_matches_period",
                     "indicial_locus_is_canonical"]


def test_certificate_corpus(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    ring = toric.cohomology_ring(corpus_fan)
    for chart in dg.subdivide_kahler_cone(sys):
        report = dg.maximal_degeneracy_check(sys, ring, chart, 8)
        assert report.passed, report.as_dict()


def test_certificate_json_shape():
    sys = system(p2_fan)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    report = dg.maximal_degeneracy_check(sys, ring, chart, 6)
    data = report.as_dict()
    assert data["passed"] is True
    assert all({"clause", "ok", "detail"} <= set(c) for c in data["clauses"])


def test_certificate_strict_mode():
    from gkzfrac.errors import CertificateFailed
    sys = system(p1_fan)
    ring = toric.cohomology_ring(sys.fan)
    chart = dg.subdivide_kahler_cone(sys)[0]
    report = dg.maximal_degeneracy_check(sys, ring, chart, 6, strict=True)
    assert report.passed  # no raise on a passing chart


# --- cone-splitting helpers (defensive paths) -------------------------------------

def test_triangulate_square_cone():
    rays = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]
    pieces = dg._triangulate_cone(rays, 3)
    assert len(pieces) == 2
    total = sum(abs(xl.det(piece)) for piece in pieces)
    assert total == 4  # normalized volume of the cone over the diamond


def test_stellar_refinement_of_index_two_cone():
    sys = system(p1xp1_fan_r2)  # only used for the recursion context
    pieces = dg._stellar_refine(sys, [((1, 0), (1, 2))])
    assert sorted(abs(xl.det(p)) for p in pieces) == [1, 1]
    rays = sorted({r for piece in pieces for r in piece})
    assert (1, 1) in rays  # the parallelepiped witness


def test_parallelepiped_witness():
    assert dg._parallelepiped_witness(((1, 0), (1, 2))) == (1, 1)
    assert dg._parallelepiped_witness(((1, 0), (0, 1))) is None
