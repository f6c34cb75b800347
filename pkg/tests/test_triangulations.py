import pytest

from conftest import CORPUS, f1_fan, p1_fan, p1xp1_fan_r2, p2_fan
from gkzfrac import gkz, series as se, toric, triangulations as tr
from gkzfrac import exact_linalg as xl
from gkzfrac.errors import DegenerateSimplex, NotRegular


def system(fan_maker):
    return gkz.build_system(fan_maker())


def tmax(sys):
    return tr.maximal_triangulation(sys, sys.fan)


# --- maximal triangulation -------------------------------------------------------

def test_tmax_p1():
    sys = system(p1_fan)
    tri = tmax(sys)
    assert tri.simplices == ((0, 1), (0, 2))


def test_tmax_p2():
    sys = system(p2_fan)
    tri = tmax(sys)
    assert tri.simplices == ((0, 1, 2), (0, 1, 3), (0, 2, 3))


def test_tmax_p1xp1():
    sys = system(p1xp1_fan_r2)
    tri = tmax(sys)
    assert len(tri.simplices) == 4
    for s in tri.simplices:
        assert len(s) == 4
        assert 0 in s and 3 in s  # both auxiliary points


def test_tmax_contains_aux(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    tri = tmax(sys)
    aux = set(sys.aux_positions())
    for s in tri.simplices:
        assert aux <= set(s)


# --- normalized volume --------------------------------------------------------------

@pytest.mark.parametrize("name,expected", [
    ("p1", 2), ("p2", 3), ("p1xp1", 4), ("p1xp1_r1", 4), ("f1", 4),
])
def test_volume(name, expected):
    sys = gkz.build_system(CORPUS[name]())
    pc = tr.PointConfiguration.from_system(sys)
    assert tr.normalized_volume(pc, tmax(sys)) == expected
    assert expected == len(sys.fan.max_cones)


def test_volume_equals_ring_dimension(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    ring = toric.cohomology_ring(corpus_fan)
    pc = tr.PointConfiguration.from_system(sys)
    assert tr.normalized_volume(pc, tmax(sys)) == ring.dim


# --- regular subdivisions -------------------------------------------------------------

def test_subdivision_p1_ample_weight():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    result = tr.regular_subdivision(pc, (0, 1, 1))
    assert isinstance(result, tr.Triangulation)
    assert result.simplex_set() == tmax(sys).simplex_set()


def test_subdivision_p1_other_chamber():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    result = tr.regular_subdivision(pc, (1, 0, 0))
    assert isinstance(result, tr.Triangulation)
    assert result.simplices == ((1, 2),)
    assert tr.nonvertex_points(pc, result) == [0]


def test_subdivision_zero_weight():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    result = tr.regular_subdivision(pc, (0, 0, 0))
    assert isinstance(result, tr.Subdivision)
    assert result.cells == ((0, 1, 2),)


def test_ample_weight_induces_tmax(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    pc = tr.PointConfiguration.from_system(sys)
    omega = se.default_weight(sys)
    result = tr.regular_subdivision(pc, omega)
    assert isinstance(result, tr.Triangulation)
    assert result.simplex_set() == tmax(sys).simplex_set()


# --- secondary cones ---------------------------------------------------------------------

def test_secondary_cone_p1_tmax():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    cone = tr.secondary_cone(sys, pc, tmax(sys))
    assert cone.inequalities == ((1,),)
    assert cone.rays == ((1,),)


def test_secondary_cone_p1_other():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    other = tr.regular_subdivision(pc, (1, 0, 0))
    cone = tr.secondary_cone(sys, pc, other)
    assert cone.rays == ((-1,),)


def test_secondary_cone_p2():
    sys = system(p2_fan)
    pc = tr.PointConfiguration.from_system(sys)
    cone = tr.secondary_cone(sys, pc, tmax(sys))
    assert cone.rays == ((1,),)


def test_secondary_cone_contains_kahler(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    pc = tr.PointConfiguration.from_system(sys)
    cone = tr.secondary_cone(sys, pc, tmax(sys))
    for ray in sys.kahler.rays:
        assert cone.contains(ray)


def test_secondary_cone_not_regular():
    sys = system(p1_fan)
    pc = tr.PointConfiguration.from_system(sys)
    bogus = tr.Triangulation(simplices=((0, 1), (1, 2)))
    with pytest.raises(NotRegular):
        tr.secondary_cone(sys, pc, bogus)


def test_nonvertex_clause_vacuous_for_tmax(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    pc = tr.PointConfiguration.from_system(sys)
    assert tr.nonvertex_points(pc, tmax(sys)) == []


def test_volume_rejects_degenerate_simplex():
    sys = system(p2_fan)
    pc = tr.PointConfiguration.from_system(sys)
    # points 1 and 2 together with the midpoint-carrier 0 are dependent
    # only if repeated; force degeneracy by repeating an index
    bogus = tr.Triangulation(simplices=((0, 1, 1),))
    with pytest.raises(DegenerateSimplex):
        tr.normalized_volume(pc, bogus)


# --- binomial Groebner bases -----------------------------------------------------------------

def test_gb_p1():
    sys = system(p1_fan)
    omega = se.default_weight(sys)
    ideal = tr.toric_groebner_basis(sys, omega)
    assert ideal.generators == (((0, 1, 1), (2, 0, 0)),)
    assert ideal.leading_exponents() == [(0, 1, 1)]


def test_gb_p2():
    sys = system(p2_fan)
    ideal = tr.toric_groebner_basis(sys, se.default_weight(sys))
    assert ideal.generators == (((0, 1, 1, 1), (3, 0, 0, 0)),)


def test_gb_p1xp1():
    sys = system(p1xp1_fan_r2)
    ideal = tr.toric_groebner_basis(sys, se.default_weight(sys))
    assert set(ideal.leading_exponents()) == {
        (0, 1, 1, 0, 0, 0), (0, 0, 0, 0, 1, 1)}
    assert len(ideal.generators) == 2


def test_gb_f1():
    sys = system(f1_fan)
    ideal = tr.toric_groebner_basis(sys, se.default_weight(sys))
    gens = set(ideal.generators)
    assert ((0, 1, 0, 1, 0), (1, 0, 1, 0, 0)) in gens
    assert ((0, 0, 1, 0, 1), (2, 0, 0, 0, 0)) in gens
    assert len(gens) == 2


def test_gb_matches_primitive_collections(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    omega = se.default_weight(sys)
    ideal = tr.toric_groebner_basis(sys, omega)
    candidates = tr.primitive_collection_binomials(sys, omega)
    assert sorted(ideal.generators) == sorted(candidates)


def test_minimal_gb_check(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    omega = se.default_weight(sys)
    assert tr.minimal_gb_is_primitive_collections(sys, sys.fan, omega)


def test_leading_term_is_collection_side(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    omega = se.default_weight(sys)
    for pc in sys.collections:
        assert xl.dot(omega, pc.ell_ext) > 0


def test_buchberger_reduces_spair_disjoint_supports():
    sys = system(p1xp1_fan_r2)
    omega = se.default_weight(sys)
    order = tr.weight_order(omega, sys.nvars)
    gens = [xl.split_positive_negative(b) for b in sys.basis]
    basis = tr.buchberger(gens, order)
    assert len(basis) == 2


# --- full fan enumeration (rank <= 2) --------------------------------------------------

def chambers_tile_circle(chambers):
    """Consecutive chambers share a wall and the chain closes up."""
    if len(chambers) == 2 and all(c.dim == 1 for c, _ in chambers):
        return {c.rays for c, _ in chambers} == {((1,),), ((-1,),)}
    for (cone, _), (nxt, _) in zip(chambers, chambers[1:] + chambers[:1]):
        if tr._ccw_ray(cone.rays) != tr._cw_ray(nxt.rays):
            return False
    return True


def kahler_chamber(sys, chambers):
    interior = tuple(sum(col) for col in zip(*sys.kahler.rays))
    hits = [(cone, label) for cone, label in chambers
            if cone.contains(interior, strict=True)]
    assert len(hits) == 1
    return hits[0]


def test_secondary_fan_rank_one():
    sys = system(p1_fan)
    chambers = tr.secondary_fan(sys)
    assert len(chambers) == 2
    assert chambers_tile_circle(chambers)
    cone, t = kahler_chamber(sys, chambers)
    assert t.simplex_set() == tmax(sys).simplex_set()
    other = next(t2 for c2, t2 in chambers if c2.rays != cone.rays)
    assert other.simplices == ((1, 2),)


def test_secondary_fan_p1xp1_quadrants():
    sys = system(p1xp1_fan_r2)
    chambers = tr.secondary_fan(sys)
    assert len(chambers) == 4
    assert chambers_tile_circle(chambers)
    ray_sets = {c.rays for c, _ in chambers}
    assert ray_sets == {((0, 1), (1, 0)), ((-1, 0), (0, 1)),
                        ((-1, 0), (0, -1)), ((0, -1), (1, 0))}
    _, t = kahler_chamber(sys, chambers)
    assert t.simplex_set() == tmax(sys).simplex_set()


def test_groebner_fan_strictly_refines_on_f1():
    sys = system(f1_fan)
    secondary = tr.secondary_fan(sys)
    groebner = tr.groebner_fan(sys)
    assert len(secondary) == 4
    assert len(groebner) == 7
    assert chambers_tile_circle(secondary)
    assert chambers_tile_circle(groebner)


def test_groebner_refines_secondary(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    if len(sys.basis) > 2:
        return
    secondary = tr.secondary_fan(sys)
    for gcone, _label in tr.groebner_fan(sys):
        inside = tuple(sum(col) for col in zip(*gcone.rays)) \
            if gcone.dim == 2 else gcone.rays[0]
        carriers = [scone for scone, _ in secondary
                    if all(scone.contains(r) for r in gcone.rays)
                    and scone.contains(inside)]
        assert carriers, f"groebner chamber {gcone.rays} not carried"


def test_groebner_fan_matches_secondary_for_product():
    sys = system(p1xp1_fan_r2)
    sec_rays = {c.rays for c, _ in tr.secondary_fan(sys)}
    gro_rays = {c.rays for c, _ in tr.groebner_fan(sys)}
    assert sec_rays == gro_rays


def test_kahler_chamber_leading_terms_are_stanley_reisner(corpus_fan):
    sys = gkz.build_system(corpus_fan)
    if len(sys.basis) > 2:
        return
    chambers = tr.groebner_fan(sys)
    _, leading = kahler_chamber(sys, chambers)
    sr = set()
    for pc in sys.collections:
        indicator = [0] * sys.nvars
        for i_ray in pc.rays:
            indicator[sys.fan.j_position_of_ray(i_ray)] = 1
        sr.add(tuple(indicator))
    assert set(leading) == sr


def test_leading_term_ideal_oracle():
    sys = system(f1_fan)
    inside_kahler = sys.lift_weight_class((1, 1))
    also_kahler = sys.lift_weight_class((2, 3))
    opposite = sys.lift_weight_class((-1, -1))
    assert tr.leading_term_ideal_equal(sys, inside_kahler, also_kahler)
    assert not tr.leading_term_ideal_equal(sys, inside_kahler, opposite)


def test_fan_enumeration_rank_cap():
    from gkzfrac.errors import DimensionTooLarge
    from gkzfrac.toric import make_fan
    rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
            (0, 0, 1), (0, 0, -1)]
    cones = [[i, j, k] for i in (0, 1) for j in (2, 3) for k in (4, 5)]
    fan = make_fan(3, rays, cones, [[0, 1, 2, 3, 4, 5]], name="p1cubed")
    sys = gkz.build_system(fan)
    assert len(sys.basis) == 3
    with pytest.raises(DimensionTooLarge):
        tr.secondary_fan(sys)
    with pytest.raises(DimensionTooLarge):
        tr.groebner_fan(sys)
