"""Triangulations of the extended configuration, secondary cones, and the
binomial Groebner machinery of the toric ideal.

Points live in Z^(n+r) on the height-one slice, so top cells have n+r
points and normalized volumes are plain determinants.  The Groebner engine
works entirely with binomials: S-pairs of binomials are binomials, and the
lattice ideal is reached from a kernel basis by saturating one variable at a
time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import exact_linalg as xl
from .errors import (DegenerateSimplex, DimensionTooLarge, NonTermination,
                     NotRegular, NotUnimodular)

GB_PAIR_CAP = 20000
GB_BASIS_CAP = 2000


@dataclass(frozen=True)
class PointConfiguration:
    """The extended point set, indexed like the columns of the lifted matrix."""
    points: tuple

    @classmethod
    def from_system(cls, sys):
        cols = tuple(zip(*sys.a_ext))
        return cls(points=cols)

    @property
    def dim(self):
        return len(self.points[0])

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class Triangulation:
    """Top-dimensional simplices given by point index tuples."""
    simplices: tuple
    weight: tuple = None

    def simplex_set(self):
        return {frozenset(s) for s in self.simplices}

    def vertex_indices(self):
        return sorted({i for s in self.simplices for i in s})


@dataclass(frozen=True)
class Subdivision:
    """A regular subdivision with at least one non-simplex cell."""
    cells: tuple
    weight: tuple = None


def maximal_triangulation(sys, fan):
    """The triangulation induced by the fan of the total bundle space.

    Every simplex consists of the lifted rays of one maximal cone together
    with all auxiliary points, and is unimodular by smoothness.
    """
    pc = PointConfiguration.from_system(sys)
    aux = sys.aux_positions()
    simplices = []
    for cone in sorted(fan.max_cones, key=sorted):
        idx = sorted(aux + [fan.j_position_of_ray(i) for i in cone])
        simplices.append(tuple(idx))
    tri = Triangulation(simplices=tuple(sorted(simplices)))
    for s in tri.simplices:
        mat = [pc.points[i] for i in s]
        d = xl.det(mat)
        if abs(d) != 1:
            raise NotUnimodular(
                f"simplex {list(s)} has determinant {d}; input fan cannot be "
                "smooth")
        assert all(a in s for a in aux)
    return tri


def normalized_volume(pc, tri):
    """Sum of absolute determinants of the simplices."""
    total = 0
    for s in tri.simplices:
        mat = [pc.points[i] for i in s]
        d = xl.det(mat)
        if d == 0:
            raise DegenerateSimplex(f"simplex {list(s)} is degenerate")
        total += abs(d)
    return total


def regular_subdivision(pc, omega):
    """Lower-hull subdivision of the lifted cone for the given weight.

    Returns a Triangulation when every cell is a simplex; otherwise a
    Subdivision carrying the cells.
    """
    omega = tuple(Fraction(w) for w in omega)
    m = pc.dim
    npts = len(pc.points)
    cells = {}
    for subset in combinations(range(npts), m):
        mat = tuple(pc.points[i] for i in subset)
        rhs = tuple(omega[i] for i in subset)
        u = xl.solve_unique(mat, rhs)
        if u is None:
            continue
        values = [xl.dot(u, p) for p in pc.points]
        if any(v > w for v, w in zip(values, omega)):
            continue
        cell = tuple(i for i in range(npts) if values[i] == omega[i])
        cells[cell] = u
    ordered = tuple(sorted(cells))
    if all(len(c) == m for c in ordered):
        return Triangulation(simplices=ordered, weight=omega)
    return Subdivision(cells=ordered, weight=omega)


def nonvertex_points(pc, tri):
    """Indices that are not vertices of any simplex of the triangulation."""
    used = set(tri.vertex_indices())
    return sorted(set(range(len(pc.points))) - used)


def secondary_cone(sys, pc, tri):
    """Inequality description of the weights inducing the triangulation.

    One covector per (simplex, outside point) pair: the value the simplex's
    linear interpolation assigns to the point must not exceed the point's own
    weight.  This covers both the wall-folding conditions and the condition
    on points that are vertices of no simplex; the latter clause is vacuous
    exactly when ``nonvertex_points`` is empty.  Covectors are kernel
    vectors, reported in coordinates dual to the relation-lattice basis.
    Raises NotRegular when the cone has empty interior.
    """
    npts = len(pc.points)
    covectors = set()
    for s in tri.simplices:
        mat = tuple(zip(*(pc.points[i] for i in s)))
        for outside in range(npts):
            if outside in s:
                continue
            coeffs = xl.solve_unique(mat, pc.points[outside])
            if coeffs is None:
                raise DegenerateSimplex(f"simplex {list(s)} is degenerate")
            lam = [Fraction(0)] * npts
            lam[outside] = Fraction(1)
            for i, c in zip(s, coeffs):
                lam[i] -= c
            den = 1
            for x in lam:
                den = den * x.denominator // gcd(den, x.denominator)
            lam = xl.primitive_vector(tuple(int(x * den) for x in lam))
            assert sys.in_kernel(lam)
            covectors.add(lam)
    from .toric import ConeDescription, dual_cone_extreme_rays
    ineqs = set()
    for lam in sorted(covectors):
        coords = sys.basis_coords(lam)
        ineqs.add(xl.primitive_vector(coords))
    ineqs = tuple(sorted(ineqs))
    dim = len(sys.basis)
    strict_rows = [(tuple(-Fraction(x) for x in g), Fraction(0), True)
                   for g in ineqs]
    if not xl.fm_feasible(strict_rows, dim):
        raise NotRegular("triangulation admits no strictly convex weight")
    rays = dual_cone_extreme_rays(ineqs, dim)
    return ConeDescription(dim=dim, inequalities=ineqs, rays=tuple(rays))


# --- binomial Groebner bases -----------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    """Matrix term order: compare weight rows lexicographically."""
    rows: tuple

    def key(self, mono):
        return tuple(xl.dot(row, mono) for row in self.rows)

    def greater(self, a, b):
        return self.key(a) > self.key(b)


def weight_order(omega, nvars):
    """Weight first, then lexicographic on the slot order (documented
    tie-break)."""
    rows = [tuple(Fraction(w) for w in omega)]
    for j in range(nvars):
        rows.append(tuple(1 if i == j else 0 for i in range(nvars)))
    return TermOrder(rows=tuple(rows))


def grevlex_last_order(nvars, last):
    """Graded reverse lexicographic order with the given variable cheapest."""
    sequence = [j for j in range(nvars) if j != last] + [last]
    rows = [tuple(1 for _ in range(nvars))]
    for var in reversed(sequence):
        rows.append(tuple(-1 if i == var else 0 for i in range(nvars)))
    return TermOrder(rows=tuple(rows))


@dataclass(frozen=True)
class BinomialIdeal:
    """Reduced Groebner generators y^u - y^v with u the leading exponent."""
    generators: tuple
    weight: tuple
    nvars: int

    def leading_exponents(self):
        return [u for u, _v in self.generators]


def _orient(u, v, order):
    if u == v:
        return None
    return (u, v) if order.greater(u, v) else (v, u)


def _divides(u, a):
    return all(x <= y for x, y in zip(u, a))


def _reduce(binomial, basis, order):
    """Full reduction; returns an oriented binomial or None when it drops to
    zero."""
    if binomial is None:
        return None
    a, b = binomial
    changed = True
    while changed:
        changed = False
        for u, v in basis:
            if _divides(u, a):
                a = tuple(x - y + z for x, y, z in zip(a, u, v))
                ori = _orient(a, b, order)
                if ori is None:
                    return None
                a, b = ori
                changed = True
                break
    # tail reduction
    changed = True
    while changed:
        changed = False
        for u, v in basis:
            if _divides(u, b):
                b = tuple(x - y + z for x, y, z in zip(b, u, v))
                changed = True
                break
    return _orient(a, b, order)


def _spair(g1, g2):
    (u1, v1), (u2, v2) = g1, g2
    w = tuple(max(a, b) for a, b in zip(u1, u2))
    t1 = tuple(x - y + z for x, y, z in zip(w, u1, v1))
    t2 = tuple(x - y + z for x, y, z in zip(w, u2, v2))
    return t1, t2


def buchberger(generators, order):
    """Buchberger specialized to binomials, with an iteration guard."""
    basis = []
    for u, v in generators:
        ori = _orient(tuple(u), tuple(v), order)
        red = _reduce(ori, basis, order)
        if red is not None:
            basis.append(red)
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    processed = 0
    while pairs:
        i, j = pairs.pop(0)
        processed += 1
        if processed > GB_PAIR_CAP:
            raise NonTermination(
                f"more than {GB_PAIR_CAP} S-pairs; instance too large")
        u1, _ = basis[i]
        u2, _ = basis[j]
        if all(a == 0 or b == 0 for a, b in zip(u1, u2)):
            continue  # coprime leading terms reduce to zero
        s = _orient(*_spair(basis[i], basis[j]), order=order)
        red = _reduce(s, basis, order)
        if red is None:
            continue
        basis.append(red)
        if len(basis) > GB_BASIS_CAP:
            raise NonTermination(
                f"basis grew past {GB_BASIS_CAP} binomials")
        pairs.extend((len(basis) - 1, k) for k in range(len(basis) - 1))
    return reduce_basis(basis, order)


def reduce_basis(basis, order):
    """Minimalize and inter-reduce to the unique reduced basis.

    Repeatedly reduces every element against the others until nothing
    changes; elements that drop to zero are removed.
    """
    work = sorted(set(basis), key=lambda g: order.key(g[0]))
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            rest = work[:i] + work[i + 1:]
            red = _reduce(work[i], rest, order)
            if red is None:
                work = rest
                changed = True
                break
            if red != work[i]:
                work = sorted(set(rest + [red]),
                              key=lambda g: order.key(g[0]))
                changed = True
                break
    return sorted(work, key=lambda g: order.key(g[0]))


def _saturate_variable(basis, nvars, var):
    """Divide out the cheapest variable after a grevlex-last basis."""
    order = grevlex_last_order(nvars, var)
    gb = buchberger(basis, order)
    out = []
    for u, v in gb:
        m = min(u[var], v[var])
        if m:
            u = tuple(x - m if j == var else x for j, x in enumerate(u))
            v = tuple(x - m if j == var else x for j, x in enumerate(v))
        if u != v:
            out.append((u, v))
    return out


def lattice_ideal_generators(sys):
    """Generators of the saturated lattice ideal from the kernel basis.

    The basis binomials generate the ideal only up to saturation by the
    product of all variables; saturating one variable at a time (each via a
    graded reverse-lex basis with that variable cheapest) reaches the full
    toric ideal.
    """
    gens = [xl.split_positive_negative(b) for b in sys.basis]
    for var in range(sys.nvars):
        gens = _saturate_variable(gens, sys.nvars, var)
    return gens


def toric_groebner_basis(sys, omega):
    """Reduced Groebner basis of the toric ideal for the weight order."""
    order = weight_order(omega, sys.nvars)
    gens = lattice_ideal_generators(sys)
    basis = buchberger(gens, order)
    return BinomialIdeal(generators=tuple(basis),
                         weight=tuple(Fraction(w) for w in omega),
                         nvars=sys.nvars)


def primitive_collection_binomials(sys, omega):
    """The candidate basis y^(plus) - y^(minus) over primitive collections.

    With a weight from the ample cone the collection side always leads.
    """
    order = weight_order(omega, sys.nvars)
    out = []
    for pc in sys.collections:
        plus, minus = xl.split_positive_negative(pc.ell_ext)
        assert xl.dot(omega, pc.ell_ext) > 0, \
            "weight is not ample: collection side does not lead"
        out.append(_orient(plus, minus, order))
    return sorted(out, key=lambda g: order.key(g[0]))


def leading_term_ideal_equal(sys, omega1, omega2):
    """Whether two weights induce the same leading-term ideal.

    This is the defining equivalence of the Groebner fan; the oracle works
    at any relation-lattice rank, while full fan enumeration is offered for
    rank at most 2 only.
    """
    lt1 = set(toric_groebner_basis(sys, omega1).leading_exponents())
    lt2 = set(toric_groebner_basis(sys, omega2).leading_exponents())
    return lt1 == lt2


# --- full fan enumeration in rank <= 2 ----------------------------------------------

def _cross(u, w):
    return u[0] * w[1] - u[1] * w[0]


def _rot_ccw(v):
    return (-v[1], v[0])


def _ccw_ray(cone_rays):
    """The counterclockwise boundary ray of a 2d pointed cone."""
    u, w = cone_rays
    return w if _cross(u, w) > 0 else u


def _cw_ray(cone_rays):
    u, w = cone_rays
    return u if _cross(u, w) > 0 else w


def _strictly_inside(cone, direction):
    return all(xl.dot(g, direction) > 0 for g in cone.inequalities)


def _walk_plane_fan(sys, chamber_of, start):
    """Enumerate a complete fan of pointed 2d cones by walking the circle.

    ``chamber_of(direction)`` returns (label, ConeDescription) for a
    direction strictly inside a maximal cone; the walk starts at ``start``
    and steps just past the counterclockwise boundary of each chamber.
    """
    chambers = []
    label, cone = chamber_of(start)
    assert _strictly_inside(cone, start), "start direction lies on a wall"
    first = cone
    guard = 0
    while True:
        guard += 1
        if guard > 200:
            raise NonTermination("fan walk did not close up")
        chambers.append((cone, label))
        boundary = _ccw_ray(cone.rays)
        scale = 2
        while True:
            probe = xl.primitive_vector(
                tuple(scale * b + p
                      for b, p in zip(boundary, _rot_ccw(boundary))))
            try:
                next_label, next_cone = chamber_of(probe)
            except NotRegular:
                next_cone = None
            if (next_cone is not None
                    and _strictly_inside(next_cone, probe)
                    and _cw_ray(next_cone.rays) == boundary):
                break
            scale *= 4
            if scale > 4 ** 12:
                raise NonTermination("could not step across a chamber wall")
        if next_cone.rays == first.rays:
            break
        label, cone = next_label, next_cone
    return chambers


def _check_rank_le_2(sys):
    if len(sys.basis) > 2:
        raise DimensionTooLarge(
            "full fan enumeration supports relation-lattice rank at most 2; "
            "use per-cone queries instead")


def _rank_one_chambers(sys, chamber_of):
    out = []
    for direction in ((1,), (-1,)):
        label, cone = chamber_of(direction)
        out.append((cone, label))
    return out


def secondary_fan(sys):
    """All maximal secondary cones with their regular triangulations.

    Returns a list of (ConeDescription, Triangulation) covering the whole
    relation-lattice dual; limited to rank at most 2.
    """
    _check_rank_le_2(sys)
    pc = PointConfiguration.from_system(sys)

    def chamber_of(direction):
        omega = sys.lift_weight_class(direction)
        result = regular_subdivision(pc, omega)
        if not isinstance(result, Triangulation):
            raise NotRegular(
                f"direction {direction} lies on a wall of the secondary fan")
        return result, secondary_cone(sys, pc, result)

    if len(sys.basis) == 1:
        return _rank_one_chambers(sys, chamber_of)
    start = tuple(sum(col) for col in zip(*sys.kahler.rays))
    return _walk_plane_fan(sys, chamber_of, start)


def groebner_fan(sys):
    """All maximal leading-term cones with their leading exponent sets.

    Each chamber is cut out by the exponent differences of the reduced
    basis computed at an interior direction; the result refines the
    secondary fan.  Limited to rank at most 2.
    """
    _check_rank_le_2(sys)
    from .toric import ConeDescription, dual_cone_extreme_rays

    def chamber_of(direction):
        omega = sys.lift_weight_class(direction)
        ideal = toric_groebner_basis(sys, omega)
        ineqs = set()
        for u, v in ideal.generators:
            diff = tuple(a - b for a, b in zip(u, v))
            ineqs.add(xl.primitive_vector(sys.basis_coords(diff)))
        ineqs = tuple(sorted(ineqs))
        dim = len(sys.basis)
        rays = dual_cone_extreme_rays(ineqs, dim)
        cone = ConeDescription(dim=dim, inequalities=ineqs, rays=tuple(rays))
        return frozenset(ideal.leading_exponents()), cone

    if len(sys.basis) == 1:
        return _rank_one_chambers(sys, chamber_of)
    start = tuple(sum(col) for col in zip(*sys.kahler.rays))
    return _walk_plane_fan(sys, chamber_of, start)


def minimal_gb_is_primitive_collections(sys, fan, omega):
    """Do the collection binomials form a Groebner basis with Stanley-Reisner
    leading terms?

    Checks that every S-pair of the candidate set reduces to zero against it
    and that the leading exponents are exactly the square-free collection
    indicators.
    """
    order = weight_order(omega, sys.nvars)
    candidates = primitive_collection_binomials(sys, omega)
    for i in range(len(candidates)):
        for j in range(i):
            u1, _ = candidates[i]
            u2, _ = candidates[j]
            if all(a == 0 or b == 0 for a, b in zip(u1, u2)):
                continue
            s = _orient(*_spair(candidates[i], candidates[j]), order=order)
            if _reduce(s, candidates, order) is not None:
                return False
    sr = set()
    for pc in sys.collections:
        indicator = [0] * sys.nvars
        for i_ray in pc.rays:
            indicator[sys.fan.j_position_of_ray(i_ray)] = 1
        sr.add(tuple(indicator))
    leading = {u for u, _v in candidates}
    return leading == sr
