"""Fans, primitive collections, Mori/Kaehler cones and the cohomology ring.

Rays carry double indices (i, j): block i of the nef-partition, position j
inside the block.  The flattened ray list follows block order, and the
extended point configuration appends one auxiliary point per block at j = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import exact_linalg as xl
from .errors import (EmptyInterior, NotComplete, NotSmooth, RayNotPrimitive,
                     SemanticError)


# --- fan data ------------------------------------------------------------------

@dataclass(frozen=True)
class FanData:
    """A complete smooth fan with rays grouped into nef-partition blocks.

    ``rays`` is the flattened block-ordered list; ``blocks[k]`` holds the ray
    indices of block k (consecutive by construction).  ``max_cones`` are
    frozensets of ray indices.
    """
    rank: int
    rays: tuple
    blocks: tuple
    max_cones: tuple
    name: str = ""
    ample_weight: tuple = None

    @property
    def p(self):
        return len(self.rays)

    @property
    def r(self):
        return len(self.blocks)

    @property
    def block_of_ray(self):
        out = [None] * self.p
        for k, block in enumerate(self.blocks):
            for i in block:
                out[i] = k
        return out

    def block_sizes(self):
        return [len(b) for b in self.blocks]

    def double_index_of_ray(self, i_ray):
        """Ray index -> (i, j) with 1 <= j (0-based block i)."""
        k = self.block_of_ray[i_ray]
        j = self.blocks[k].index(i_ray) + 1
        return (k, j)

    def j_indices(self):
        """The ordered double-index set: (i,0), (i,1), ..., per block."""
        out = []
        for k, block in enumerate(self.blocks):
            out.append((k, 0))
            out.extend((k, j + 1) for j in range(len(block)))
        return out

    def j_position(self, i, j):
        pos = 0
        for k in range(i):
            pos += len(self.blocks[k]) + 1
        return pos + j

    def ray_of_double_index(self, i, j):
        """(i, j) with j >= 1 -> flat ray index."""
        return self.blocks[i][j - 1]

    def j_position_of_ray(self, i_ray):
        i, j = self.double_index_of_ray(i_ray)
        return self.j_position(i, j)


def make_fan(rank, rays, max_cones, nef_partition, name="", ample_weight=None):
    """Canonical FanData: rays reordered block by block, cones remapped."""
    p = len(rays)
    seen = sorted(i for block in nef_partition for i in block)
    if seen != list(range(p)):
        dup = [i for i in seen if seen.count(i) > 1]
        if dup:
            raise SemanticError(f"nef partition repeats ray index {dup[0]}")
        missing = sorted(set(range(p)) - set(seen))
        raise SemanticError(f"nef partition misses ray indices {missing}")
    order = [i for block in nef_partition for i in block]
    position = {old: new for new, old in enumerate(order)}
    new_rays = tuple(tuple(int(x) for x in rays[old]) for old in order)
    new_cones = tuple(frozenset(position[i] for i in cone) for cone in max_cones)
    blocks, start = [], 0
    for block in nef_partition:
        blocks.append(tuple(range(start, start + len(block))))
        start += len(block)
    return FanData(rank=rank, rays=new_rays, blocks=tuple(blocks),
                   max_cones=tuple(sorted(new_cones, key=sorted)),
                   name=name,
                   ample_weight=tuple(ample_weight) if ample_weight else None)


def nu_vector(fan, i, j):
    """Lifted point of the double index (i, j) in Z^(n+r)."""
    if j == 0:
        ray = (0,) * fan.rank
    else:
        ray = fan.rays[fan.ray_of_double_index(i, j)]
    tail = tuple(1 if k == i else 0 for k in range(fan.r))
    return ray + tail


def a_ext_matrix(fan):
    """The (n+r) x (p+r) matrix whose columns are the lifted points."""
    cols = [nu_vector(fan, i, j) for (i, j) in fan.j_indices()]
    return tuple(zip(*cols))


def a_matrix(fan):
    """The n x p ray matrix (columns are the primitive ray generators)."""
    return tuple(zip(*fan.rays))


# --- validation ------------------------------------------------------------------

@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    def add(self, name, detail):
        self.checks.append((name, detail))

    def as_dict(self):
        return {name: detail for name, detail in self.checks}


def _cone_coefficients(fan, cone_rays, v):
    """Exact expansion of v over the rays of a simplicial cone, or None."""
    cols = tuple(zip(*(fan.rays[i] for i in cone_rays)))
    return xl.solve_unique(cols, v)


def validate_fan(fan):
    """Check primitivity, smoothness, simpliciality and completeness.

    Raises a typed error naming the offending ray or cone; returns a report
    when everything passes.
    """
    report = ValidationReport()
    for idx, ray in enumerate(fan.rays):
        if xl.vec_is_zero(ray):
            raise RayNotPrimitive(f"ray {idx} is zero")
        g = 0
        for x in ray:
            g = gcd(g, abs(x))
        if g != 1:
            raise RayNotPrimitive(f"ray {idx} = {ray} has entry gcd {g}")
    report.add("primitivity", f"{fan.p} rays primitive")

    for cone in fan.max_cones:
        if len(cone) != fan.rank:
            raise NotSmooth(
                f"cone {sorted(cone)} has {len(cone)} rays, expected {fan.rank}")
        d = xl.det([fan.rays[i] for i in sorted(cone)])
        if d == 0:
            raise NotSmooth(f"cone {sorted(cone)} is degenerate")
        if abs(d) != 1:
            raise NotSmooth(f"cone {sorted(cone)} has determinant {d}")
    report.add("smoothness", f"{len(fan.max_cones)} maximal cones unimodular")
    report.add("simpliciality", "all maximal cones simplicial")

    _check_complete(fan)
    report.add("completeness", "ridges paired and sampled directions covered")
    return report


def _check_complete(fan):
    n = fan.rank
    if n == 1:
        rays = set(fan.rays)
        if rays != {(1,), (-1,)} or len(fan.max_cones) != 2:
            raise NotComplete("rank-1 fan must consist of both half-lines")
        return
    ridges = {}
    for cone in fan.max_cones:
        for ridge in combinations(sorted(cone), n - 1):
            ridges[ridge] = ridges.get(ridge, 0) + 1
    for ridge, count in sorted(ridges.items()):
        if count != 2:
            raise NotComplete(
                f"ridge {list(ridge)} lies in {count} maximal cones, expected 2")
    rng = random.Random(914)
    accepted = 0
    while accepted < 40:
        v = tuple(rng.randint(-9, 9) for _ in range(n))
        if xl.vec_is_zero(v):
            continue
        interior, boundary = 0, False
        for cone in fan.max_cones:
            coeffs = _cone_coefficients(fan, sorted(cone), v)
            if coeffs is None or any(c < 0 for c in coeffs):
                continue
            if any(c == 0 for c in coeffs):
                boundary = True
                break
            interior += 1
        if boundary:
            continue
        if interior == 0:
            raise NotComplete(f"direction {v} lies in no maximal cone")
        if interior > 1:
            raise NotComplete(f"direction {v} lies in {interior} maximal cones")
        accepted += 1


# --- primitive collections --------------------------------------------------------

@dataclass(frozen=True)
class PrimitiveCollection:
    """A minimal non-face together with its relation data.

    ``rays`` and ``sigma`` hold flat ray indices; ``coeffs`` maps sigma rays
    to their positive integer coefficients; ``c0[i]`` is the coefficient of
    the auxiliary point of block i.  ``ell`` lives in the ray relation
    lattice, ``ell_ext`` in the extended one.
    """
    rays: frozenset
    sigma: frozenset
    coeffs: tuple
    c0: tuple
    ell: tuple
    ell_ext: tuple


def _is_face(fan, subset):
    return any(subset <= cone for cone in fan.max_cones)


def primitive_collections(fan):
    """All minimal non-faces with exact primitive-relation data."""
    out = []
    indices = range(fan.p)
    for size in range(2, fan.p + 1):
        for combo in combinations(indices, size):
            s = frozenset(combo)
            if _is_face(fan, s):
                continue
            if not all(_is_face(fan, s - {x}) for x in s):
                continue
            out.append(_build_collection(fan, s))
    out.sort(key=lambda pc: (len(pc.rays), sorted(pc.rays)))
    return out


def _build_collection(fan, collection):
    total = (0,) * fan.rank
    for i in collection:
        total = xl.vec_add(total, fan.rays[i])
    sigma, coeffs = frozenset(), {}
    if not xl.vec_is_zero(total):
        for cone in fan.max_cones:
            sol = _cone_coefficients(fan, sorted(cone), total)
            if sol is not None and all(c >= 0 for c in sol):
                rays_sorted = sorted(cone)
                sigma = frozenset(i for i, c in zip(rays_sorted, sol) if c > 0)
                coeffs = {i: c for i, c in zip(rays_sorted, sol) if c > 0}
                break
        else:
            raise NotComplete(f"sum of collection {sorted(collection)} "
                              "lies in no maximal cone")
        assert all(c.denominator == 1 for c in coeffs.values()), \
            "non-integer relation coefficients contradict smoothness"
        coeffs = {i: int(c) for i, c in coeffs.items()}
    assert not (collection & sigma), \
        "collection meets the carrier cone, contradicting smoothness"
    block_of = fan.block_of_ray
    c0 = []
    for k in range(fan.r):
        count = sum(1 for i in collection if block_of[i] == k)
        drop = sum(c for i, c in coeffs.items() if block_of[i] == k)
        c0.append(count - drop)
    assert all(c >= 0 for c in c0), \
        (f"auxiliary coefficient negative for collection {sorted(collection)};"
         " the block sums of the given partition are not all nef")
    ell = [0] * fan.p
    for i in collection:
        ell[i] += 1
    for i, c in coeffs.items():
        ell[i] -= c
    ell_ext = [0] * (fan.p + fan.r)
    for i_ray in range(fan.p):
        if ell[i_ray]:
            ell_ext[fan.j_position_of_ray(i_ray)] = ell[i_ray]
    for k in range(fan.r):
        ell_ext[fan.j_position(k, 0)] = -c0[k]
    ell_ext = tuple(ell_ext)
    assert xl.vec_is_zero(xl.mat_vec(a_ext_matrix(fan), ell_ext)), \
        "lifted relation is not in the kernel"
    return PrimitiveCollection(
        rays=frozenset(collection), sigma=sigma,
        coeffs=tuple(sorted(coeffs.items())), c0=tuple(c0),
        ell=tuple(ell), ell_ext=ell_ext)


def mori_cone_generators(fan):
    """Relation vectors of the primitive collections: generators of NE(X)."""
    return [pc.ell for pc in primitive_collections(fan)]


def mori_cone_lifted_generators(fan):
    """The same generators lifted to the extended relation lattice."""
    return [pc.ell_ext for pc in primitive_collections(fan)]


def stanley_reisner_ideal(fan):
    """Square-free generator monomials, one per primitive collection."""
    return [tuple(sorted(pc.rays)) for pc in primitive_collections(fan)]


# --- cones in the relation lattice -------------------------------------------------

@dataclass(frozen=True)
class ConeDescription:
    """Rational polyhedral cone given by inequalities and extreme rays.

    Vectors are coordinates relative to the dual of the canonical relation
    lattice basis: a weight class y satisfies y . g >= 0 for each inequality
    generator g, and ``rays`` are the primitive extreme generators.
    """
    dim: int
    inequalities: tuple
    rays: tuple

    def contains(self, y, strict=False):
        if strict:
            return all(xl.dot(g, y) > 0 for g in self.inequalities)
        return all(xl.dot(g, y) >= 0 for g in self.inequalities)


def relation_lattice_basis(fan):
    """Canonical basis of ker(A_ext), the extended relation lattice."""
    return xl.kernel_basis(a_ext_matrix(fan))


def coords_in_basis(basis, v):
    """Coordinates of a lattice vector in the given basis (must be exact)."""
    bmat = tuple(zip(*basis))
    sol = xl.solve_unique(bmat, v)
    assert sol is not None and all(c.denominator == 1 for c in sol), \
        f"{v} is not an integer combination of the basis"
    return tuple(int(c) for c in sol)


def dual_cone_extreme_rays(inequalities, dim):
    """Extreme rays of {y : g . y >= 0} by desk-scale double description."""
    if dim == 1:
        rays = set()
        for cand in ((1,), (-1,)):
            if all(xl.dot(g, cand) >= 0 for g in inequalities):
                rays.add(cand)
        if len(rays) == 2:
            raise EmptyInterior("cone is a full line, not pointed")
        return sorted(rays)
    rays = set()
    for subset in combinations(range(len(inequalities)), dim - 1):
        m = [inequalities[i] for i in subset]
        rows, pivots = xl.rref(m)
        if len(pivots) != dim - 1:
            continue
        free = [c for c in range(dim) if c not in pivots][0]
        cand = [Fraction(0)] * dim
        cand[free] = Fraction(1)
        for i, col in enumerate(pivots):
            cand[col] = -rows[i][free]
        den = 1
        for x in cand:
            den = den * x.denominator // gcd(den, x.denominator)
        cand = xl.primitive_vector(tuple(int(x * den) for x in cand))
        for signed in (cand, tuple(-x for x in cand)):
            if all(xl.dot(g, signed) >= 0 for g in inequalities):
                rays.add(signed)
    return sorted(rays)


def kahler_cone(fan):
    """Closure of the ample cone, dual to the Mori cone.

    Returned in coordinates dual to the canonical relation-lattice basis;
    raises EmptyInterior when the input admits no ample class.
    """
    basis = relation_lattice_basis(fan)
    dim = len(basis)
    gens = []
    seen = set()
    for pc in primitive_collections(fan):
        g = xl.primitive_vector(coords_in_basis(basis, pc.ell_ext))
        if g not in seen:
            seen.add(g)
            gens.append(g)
    rays = dual_cone_extreme_rays(tuple(gens), dim)
    if not rays:
        raise EmptyInterior("no extreme rays: ample cone is empty")
    candidate = tuple(sum(col) for col in zip(*rays))
    if not all(xl.dot(g, candidate) > 0 for g in gens):
        raise EmptyInterior("dual of the curve cone has empty interior")
    return ConeDescription(dim=dim, inequalities=tuple(gens), rays=tuple(rays))


# --- cohomology ring ----------------------------------------------------------------

def _monomials_of_degree(p, d):
    """Exponent tuples of total degree d over p variables, lex order."""
    if d == 0:
        return [(0,) * p]
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], d, p)
    return out


def _monomial_key(expo):
    """Sorted variable sequence of a monomial, for earliest-first ordering."""
    seq = []
    for var, e in enumerate(expo):
        seq.extend([var] * e)
    return tuple(seq)


class CohomologyRing:
    """Finite-dimensional graded quotient housing the toric divisor classes.

    Basis monomials are square-free, chosen greedily as the lexicographically
    earliest independent ones degree by degree; the intersection pairing is
    normalised so the class of a point integrates to 1.
    """

    def __init__(self, fan):
        self.fan = fan
        self.p = fan.p
        self.top = fan.rank
        self._sr = [tuple(sorted(pc.rays)) for pc in primitive_collections(fan)]
        self._linear = [tuple(ray[k] for ray in fan.rays)
                        for k in range(fan.rank)]
        self._echelon = {}     # degree -> list of (pivot_col, row vector)
        self._basis = {}       # degree -> list of exponent tuples
        self._mons = {}        # degree -> ordered monomial list
        self._mon_pos = {}     # degree -> {expo: column}
        self._solve_mat = {}   # degree -> rows of the basis-residue matrix
        self._build()
        self.basis_monomials = []
        self.basis_degrees = []
        for d in range(self.top + 1):
            for m in self._basis[d]:
                self.basis_monomials.append(m)
                self.basis_degrees.append(d)
        self.dim = len(self.basis_monomials)
        self._global_pos = {m: i for i, m in enumerate(self.basis_monomials)}
        self._point = self._point_class()
        self._mul_cache = {}

    # -- construction --

    def _build(self):
        for d in range(self.top + 1):
            mons = _monomials_of_degree(self.p, d)
            mons.sort(key=_monomial_key)
            pos = {m: i for i, m in enumerate(mons)}
            self._mons[d] = mons
            self._mon_pos[d] = pos
            rows = []
            for s in self._sr:
                k = len(s)
                if k > d:
                    continue
                base = [0] * self.p
                for i in s:
                    base[i] += 1
                for mu in _monomials_of_degree(self.p, d - k):
                    expo = tuple(b + m for b, m in zip(base, mu))
                    vec = [Fraction(0)] * len(mons)
                    vec[pos[expo]] = Fraction(1)
                    rows.append(vec)
            if d >= 1:
                for lam in self._linear:
                    for mu in _monomials_of_degree(self.p, d - 1):
                        vec = [Fraction(0)] * len(mons)
                        for var, c in enumerate(lam):
                            if c:
                                expo = list(mu)
                                expo[var] += 1
                                vec[pos[tuple(expo)]] += Fraction(c)
                        rows.append(vec)
            echelon = []
            for vec in rows:
                self._reduce_vec(vec, echelon)
                piv = next((i for i, x in enumerate(vec) if x != 0), None)
                if piv is not None:
                    inv = Fraction(1) / vec[piv]
                    echelon.append((piv, [x * inv for x in vec]))
            echelon.sort(key=lambda t: t[0])
            self._echelon[d] = echelon
            basis = []
            chosen = list(echelon)
            candidates = [m for m in mons if all(e <= 1 for e in m)]
            candidates += [m for m in mons if any(e > 1 for e in m)]
            for m in candidates:
                vec = [Fraction(0)] * len(mons)
                vec[pos[m]] = Fraction(1)
                self._reduce_vec(vec, chosen)
                piv = next((i for i, x in enumerate(vec) if x != 0), None)
                if piv is not None:
                    inv = Fraction(1) / vec[piv]
                    chosen.append((piv, [x * inv for x in vec]))
                    chosen.sort(key=lambda t: t[0])
                    basis.append(m)
            assert all(all(e <= 1 for e in m) for m in basis), \
                "square-free monomials do not span; input fan not smooth projective?"
            self._basis[d] = basis
            resid = []
            for m in basis:
                bvec = [Fraction(0)] * len(mons)
                bvec[pos[m]] = Fraction(1)
                self._reduce_vec(bvec, echelon)
                resid.append(bvec)
            self._solve_mat[d] = [tuple(col) for col in zip(*resid)] if resid else []

    @staticmethod
    def _reduce_vec(vec, echelon):
        for piv, row in echelon:
            if vec[piv] != 0:
                c = vec[piv]
                for i in range(piv, len(vec)):
                    if row[i]:
                        vec[i] -= c * row[i]

    def reduce_monomial(self, expo):
        """Coordinates of a monomial over the selected basis of its degree."""
        d = sum(expo)
        if d > self.top:
            return {}
        mons, pos = self._mons[d], self._mon_pos[d]
        vec = [Fraction(0)] * len(mons)
        vec[pos[tuple(expo)]] = Fraction(1)
        self._reduce_vec(vec, self._echelon[d])
        if not self._basis[d]:
            assert all(x == 0 for x in vec)
            return {}
        sol = xl.solve_unique(self._solve_mat[d], tuple(vec))
        assert sol is not None, "monomial not expressible over the chosen basis"
        return {m: c for m, c in zip(self._basis[d], sol) if c != 0}

    def _point_class(self):
        ref = None
        for cone in self.fan.max_cones:
            expo = [0] * self.p
            for i in cone:
                expo[i] += 1
            coords = self.reduce_monomial(tuple(expo))
            vec = self._coords_to_global(coords)
            if ref is None:
                ref = vec
            else:
                assert vec == ref, \
                    "point classes of maximal cones disagree; fan not smooth?"
        return ref

    def _coords_to_global(self, coords):
        out = [Fraction(0)] * self.dim
        for m, c in coords.items():
            out[self._global_pos[m]] = c
        return tuple(out)

    # -- public interface --

    def zero(self):
        return CohClass(self, (Fraction(0),) * self.dim)

    def one(self):
        return self.class_from_poly({(0,) * self.p: Fraction(1)})

    def generator(self, i_ray):
        expo = [0] * self.p
        expo[i_ray] = 1
        return self.class_from_poly({tuple(expo): Fraction(1)})

    def divisor_class(self, i, j):
        """Class of the double-indexed divisor; j = 0 gives the block sum's
        negative."""
        if j == 0:
            out = self.zero()
            for i_ray in self.fan.blocks[i]:
                out = out - self.generator(i_ray)
            return out
        return self.generator(self.fan.ray_of_double_index(i, j))

    def class_from_poly(self, poly):
        """Class of a polynomial in the ray variables, given as expo -> coeff."""
        out = [Fraction(0)] * self.dim
        for expo, c in poly.items():
            if c == 0:
                continue
            key = tuple(expo)
            if key not in self._mul_cache:
                self._mul_cache[key] = self._coords_to_global(
                    self.reduce_monomial(key))
            red = self._mul_cache[key]
            for i, x in enumerate(red):
                if x:
                    out[i] += c * x
        return CohClass(self, tuple(out))

    def multiply(self, a, b):
        poly = {}
        for ma, ca in a.monomial_items():
            for mb, cb in b.monomial_items():
                expo = tuple(x + y for x, y in zip(ma, mb))
                poly[expo] = poly.get(expo, Fraction(0)) + ca * cb
        return self.class_from_poly(poly)

    def integral(self, cls):
        """Pairing with the fundamental class, point class normalised to 1."""
        top_idx = [i for i, d in enumerate(self.basis_degrees) if d == self.top]
        assert len(top_idx) == 1, "top degree is not one-dimensional"
        i = top_idx[0]
        assert self._point[i] != 0
        return cls.coords[i] / self._point[i]

    def basis_names(self):
        names = []
        for m in self.basis_monomials:
            if sum(m) == 0:
                names.append("1")
                continue
            parts = []
            for i_ray, e in enumerate(m):
                if e:
                    i, j = self.fan.double_index_of_ray(i_ray)
                    parts.extend([f"a_{i + 1}_{j}"] * e)
            names.append("*".join(parts))
        return names


class CohClass:
    """Element of a CohomologyRing, stored as coordinates over its basis."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = tuple(Fraction(c) for c in coords)

    def monomial_items(self):
        return [(m, c) for m, c in zip(self.ring.basis_monomials, self.coords)
                if c != 0]

    def __add__(self, other):
        if isinstance(other, CohClass):
            return CohClass(self.ring,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))
        return self + other * self.ring.one()

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, tuple(-a for a in self.coords))

    def __sub__(self, other):
        if isinstance(other, CohClass):
            return self + (-other)
        return self + (-other) * self.ring.one()

    def __rsub__(self, other):
        return (-self) + other * self.ring.one()

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return self.ring.multiply(self, other)
        c = Fraction(other)
        return CohClass(self.ring, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CohClass):
            return self.coords == other.coords
        return self == other * self.ring.one()

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def degree_part(self, d):
        coords = tuple(c if deg == d else Fraction(0)
                       for c, deg in zip(self.coords, self.ring.basis_degrees))
        return CohClass(self.ring, coords)

    def scalar_part(self):
        """Coefficient of the unit basis element."""
        return self.coords[0]

    def pair(self, functional):
        """Pairing with a dual-basis functional given as a coordinate vector."""
        return sum(c * f for c, f in zip(self.coords, functional))

    def __repr__(self):
        items = [f"{c}*{n}" for (m, c), n in
                 zip(zip(self.ring.basis_monomials, self.coords),
                     self.ring.basis_names()) if c != 0]
        return " + ".join(items) if items else "0"


def cohomology_ring(fan):
    """Quotient presentation of the even cohomology with its pairing."""
    ring = CohomologyRing(fan)
    assert ring.dim == len(fan.max_cones), \
        f"ring dimension {ring.dim} != {len(fan.max_cones)} maximal cones"
    return ring
