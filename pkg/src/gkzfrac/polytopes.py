"""Lattice polytope operations for nef-partition duality.

Hulls are computed by brute force over vertex subsets with exact rational
solves; ambient rank is capped at 4, which keeps the combinatorics trivial
at desk scale.  Polytopes of lower dimension than their ambient space are
allowed and carry their affine hull implicitly through the vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import exact_linalg as xl
from .errors import (DimensionMismatch, DimensionTooLarge, NotReflexive,
                     OriginNotInterior)

MAX_RANK = 4


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many points, stored by its exact vertex set.

    ``facets`` lists pairs (a, c) meaning a.x <= c with primitive integer a;
    it is populated only for full-dimensional polytopes.
    """
    rank: int
    vertices: tuple
    dim: int
    facets: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.rank == other.rank and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash((self.rank, frozenset(self.vertices)))

    def is_lattice(self):
        return all(Fraction(x).denominator == 1 for v in self.vertices for x in v)

    def contains(self, point):
        """Exact membership test (works for degenerate polytopes too)."""
        if self.dim == self.rank:
            return all(xl.dot(a, point) <= c for a, c in self.facets)
        return _in_hull(list(self.vertices), point)

    def has_interior_origin(self):
        if self.dim != self.rank:
            return False
        origin = (0,) * self.rank
        return all(xl.dot(a, origin) < c for a, c in self.facets)


def _dedupe(points):
    seen, out = set(), []
    for p in points:
        t = tuple(Fraction(x) for x in p)
        t = tuple(int(x) if x.denominator == 1 else x for x in t)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _in_hull(points, q):
    """Is q a convex combination of points?  Exact feasibility check.

    The equality block (weights sum to 1 and reproduce q) is solved first;
    Fourier-Motzkin then only sees the nonnegativity constraints in the
    remaining free parameters.
    """
    n = len(points)
    if n == 0:
        return False
    eq_rows = [tuple(Fraction(1) for _ in range(n))]
    rhs = [Fraction(1)]
    for k in range(len(q)):
        eq_rows.append(tuple(Fraction(p[k]) for p in points))
        rhs.append(Fraction(q[k]))
    sol = xl.solve_linear(eq_rows, rhs)
    if sol is None:
        return False
    particular, null = sol
    if not null:
        return all(x >= 0 for x in particular)
    # lambda_i = particular_i + sum_j t_j null_j_i >= 0
    rows = []
    for i in range(n):
        coeffs = tuple(-v[i] for v in null)
        rows.append((coeffs, Fraction(particular[i]), False))
    return xl.fm_feasible(rows, len(null))


def _primitive_normal(diffs, rank):
    """Primitive integer normal of the hyperplane spanned by diffs, or None."""
    scaled = []
    for d in diffs:
        den = 1
        for x in d:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        scaled.append(tuple(int(Fraction(x) * den) for x in d))
    rows, pivots = xl.rref(scaled) if scaled else ([], [])
    if len(pivots) != rank - 1:
        return None
    free = [c for c in range(rank) if c not in pivots]
    normal = [Fraction(0)] * rank
    normal[free[0]] = Fraction(1)
    for i, col in enumerate(pivots):
        normal[col] = -rows[i][free[0]]
    den = 1
    for x in normal:
        den = den * x.denominator // _gcd(den, x.denominator)
    return xl.primitive_vector(tuple(int(x * den) for x in normal))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a if a else 1


def _affine_dim(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    diffs = [xl.vec_sub(p, p0) for p in points[1:]]
    return xl.rank(diffs)


def convex_hull(points):
    """Convex hull with minimal vertex set (ambient rank <= 4).

    Accepts integer or rational points; facet data is attached when the hull
    is full-dimensional in its ambient space.
    """
    points = _dedupe(points)
    if not points:
        raise DimensionMismatch("convex_hull: no points")
    rank = len(points[0])
    if rank > MAX_RANK:
        raise DimensionTooLarge(f"ambient rank {rank} > {MAX_RANK}")
    if any(len(p) != rank for p in points):
        raise DimensionMismatch("convex_hull: mixed ambient ranks")
    dim = _affine_dim(points)
    if dim == 0:
        return LatticePolytope(rank, (points[0],), 0)
    if dim < rank:
        return _hull_degenerate(points, rank, dim)
    if rank == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        verts = ((lo,),) if lo == hi else ((lo,), (hi,))
        return LatticePolytope(1, verts, 1, (((1,), hi), ((-1,), -lo)))
    facets = set()
    for subset in combinations(points, rank):
        p0 = subset[0]
        diffs = [xl.vec_sub(p, p0) for p in subset[1:]]
        a = _primitive_normal(diffs, rank)
        if a is None:
            continue
        c = xl.dot(a, p0)
        vals = [xl.dot(a, p) for p in points]
        if all(v <= c for v in vals):
            facets.add((a, c))
        elif all(v >= c for v in vals):
            facets.add((tuple(-x for x in a), -c))
    facets = sorted(facets)
    vertices = []
    for p in points:
        active = [a for a, c in facets if xl.dot(a, p) == c]
        if len(active) >= rank and xl.rank(active) == rank:
            vertices.append(p)
    return LatticePolytope(rank, tuple(sorted(vertices)), rank, tuple(facets))


def _hull_degenerate(points, rank, dim):
    """Hull of points spanning a proper affine subspace: reduce coordinates."""
    p0 = points[0]
    diffs = [xl.vec_sub(p, p0) for p in points]
    rows, pivots = xl.rref(diffs)
    basis = rows[:dim]
    coords = []
    bmat = tuple(zip(*basis))
    for d in diffs:
        sol = xl.solve_unique(bmat, d)
        if sol is None:
            raise DimensionMismatch("point outside its own affine hull")
        coords.append(sol)
    inner = convex_hull(coords)
    keep = {tuple(c) for c in inner.vertices}
    vertices = tuple(sorted(p for p, c in zip(points, coords) if tuple(c) in keep))
    return LatticePolytope(rank, vertices, dim)


def minkowski_sum(p, q):
    """Hull of pairwise vertex sums."""
    if p.rank != q.rank:
        raise DimensionMismatch(f"minkowski_sum: rank {p.rank} vs {q.rank}")
    sums = [xl.vec_add(u, v) for u in p.vertices for v in q.vertices]
    return convex_hull(sums)


def polar_dual(p):
    """The polytope {y : <y, x> >= -1 for all x in p}.

    Requires the origin strictly inside p; vertices of the dual are read off
    the facets of p and may be rational.
    """
    if p.dim != p.rank or not p.has_interior_origin():
        raise OriginNotInterior("polar dual needs the origin strictly inside")
    dual_vertices = []
    for a, c in p.facets:
        dual_vertices.append(tuple(Fraction(-ai, c) for ai in a))
    return convex_hull(dual_vertices)


def is_reflexive(p):
    """Lattice polytope with interior origin whose polar dual is again one."""
    if p.dim != p.rank or not p.has_interior_origin() or not p.is_lattice():
        return False
    dual = polar_dual(p)
    if not dual.is_lattice():
        return False
    return polar_dual(dual) == p


def vertices_from_inequalities(ineqs, rank):
    """Vertex set of the bounded region {x : a.x <= c} by basic solutions."""
    verts = set()
    for subset in combinations(ineqs, rank):
        m = tuple(a for a, _ in subset)
        b = tuple(c for _, c in subset)
        sol = xl.solve_unique(m, b)
        if sol is None:
            continue
        if all(xl.dot(a, sol) <= c for a, c in ineqs):
            verts.add(tuple(sol))
    return sorted(verts)


def section_polytope(fan, block):
    """Lattice polytope of sections of the block's nef divisor sum.

    Cut out by <m, ray> >= -1 for rays in the block and >= 0 for the rest.
    """
    ineqs = []
    for i_ray, ray in enumerate(fan.rays):
        rhs = 1 if fan.block_of_ray[i_ray] == block else 0
        ineqs.append((tuple(-x for x in ray), Fraction(rhs)))
    verts = vertices_from_inequalities(ineqs, fan.rank)
    if not verts:
        raise NotReflexive(f"section polytope of block {block} is empty")
    out = []
    for v in verts:
        if any(Fraction(x).denominator != 1 for x in v):
            raise NotReflexive(
                f"section polytope of block {block} has non-lattice vertex {v}")
        out.append(tuple(int(x) for x in v))
    return convex_hull(out)


def dual_nef_partition(fan):
    """The polytopes conv({0} u I_k) of the partner partition, with checks.

    Verifies that their Minkowski sum is reflexive and that its polar dual is
    the hull of the section polytopes of the input partition; failure of
    either check signals an invalid nef-partition.
    """
    nablas = []
    for k in range(fan.r):
        pts = [(0,) * fan.rank] + [fan.rays[i] for i in fan.blocks[k]]
        nablas.append(convex_hull(pts))
    nabla = nablas[0]
    for q in nablas[1:]:
        nabla = minkowski_sum(nabla, q)
    if not is_reflexive(nabla):
        raise NotReflexive("Minkowski sum of the partner polytopes is not reflexive")
    deltas = [section_polytope(fan, k) for k in range(fan.r)]
    hull_deltas = convex_hull([v for d in deltas for v in d.vertices])
    if polar_dual(nabla) != hull_deltas:
        raise NotReflexive(
            "polar dual of the Minkowski sum differs from the hull of the "
            "section polytopes")
    return nablas
