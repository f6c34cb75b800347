"""Truncated series with logarithms: period series, Gamma series and the
cohomology-valued solution family.

Exponents are stored as integer offsets against a fixed base exponent, so a
term (ell, m) -> c stands for c * x^(ell + alpha) * prod log(x_j)^(m_j).
Coefficients are exact rationals or cohomology classes.  Truncation keeps
offsets ell with weight degree at most the stated order; after applying an
operator, the ``shifts`` record which inputs feed each output so the reliable
region can be cut exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial

from . import exact_linalg as xl
from .errors import (InMoriCone, NotInKernel, NotInRegion, SchemaError,
                     TruncationTooLarge, WeightNotAmple)
from .gkz import BoxOperator, EulerOperator, canonical_alpha

DEFAULT_MAX_TERMS = 100000


def max_terms():
    """Enumeration cap, configurable through GKZFRAC_MAX_TERMS."""
    value = os.environ.get("GKZFRAC_MAX_TERMS")
    return int(value) if value else DEFAULT_MAX_TERMS


# --- rational protagonists -------------------------------------------------------

def binomial_sqrt_coefficients(k_max):
    """Coefficients r_k of the expansion of 1/sqrt(1+w), k = 0..k_max."""
    out = [Fraction(1)]
    for k in range(1, k_max + 1):
        out.append(out[-1] * (Fraction(-1, 2) - (k - 1)) / k)
    return out


def _region_split(sys, ell):
    """Per-block data (k_i, ray multidegrees) of a summation-region vector."""
    ell = tuple(ell)
    ks, rays = [], []
    for i in range(sys.r):
        pos0 = sys.j_position(i, 0)
        if ell[pos0] > 0:
            raise NotInRegion(
                f"slot ({i + 1},0) of {ell} is positive")
        ks.append(-ell[pos0])
        block = []
        for j in range(1, len(sys.fan.blocks[i]) + 1):
            e = ell[sys.j_position(i, j)]
            if e < 0:
                raise NotInRegion(
                    f"slot ({i + 1},{j}) of {ell} is negative")
            block.append(e)
        rays.append(tuple(block))
    return ks, rays


def period_coefficient_C(sys, ell):
    """Exact period coefficient of x^ell over the summation region."""
    ell = tuple(ell)
    if not sys.in_kernel(ell):
        raise NotInKernel(f"{ell} is not a relation of the configuration")
    ks, rays = _region_split(sys, ell)
    r = binomial_sqrt_coefficients(max(ks, default=0))
    out = Fraction(1)
    for k_i, block in zip(ks, rays):
        out *= r[k_i] * Fraction(-1) ** k_i * factorial(k_i)
        for e in block:
            out /= factorial(e)
    return out


def gamma_coefficient(sys, ell):
    """Gamma-series coefficient in fully rational product form."""
    ell = tuple(ell)
    ks, rays = _region_split(sys, ell)
    out = Fraction(1)
    for k_i, block in zip(ks, rays):
        for k in range(k_i):
            out *= Fraction(1, 2) + k
        for e in block:
            out /= factorial(e)
    sign = (-1) ** (sum(ks) % 2)
    return sign * out


def residue_oracle(sys, ell):
    """Constant-term extraction oracle for the period coefficients.

    Expands the product over blocks of (-x_{i,1} t^{rho} - ...)^{k_i} by
    iterated polynomial multiplication in the torus variables, then reads the
    torus-constant coefficient of x^ell.  No Gamma factors appear anywhere;
    this is an independent route to period_coefficient_C.
    """
    ell = tuple(ell)
    ks, targets = _region_split(sys, ell)
    cap = max_terms()
    r = binomial_sqrt_coefficients(max(ks, default=0))
    block_terms = []
    for i, k_i in enumerate(ks):
        n_i = len(sys.fan.blocks[i])
        terms = {((0,) * n_i, (0,) * sys.n): Fraction(1)}
        for _ in range(k_i):
            new = {}
            for (xdeg, texp), c in terms.items():
                for j in range(n_i):
                    rho = sys.fan.rays[sys.fan.blocks[i][j]]
                    nx = tuple(e + (1 if jj == j else 0)
                               for jj, e in enumerate(xdeg))
                    nt = tuple(a + b for a, b in zip(texp, rho))
                    key = (nx, nt)
                    new[key] = new.get(key, Fraction(0)) - c
            terms = new
            if len(terms) > cap:
                raise TruncationTooLarge(
                    f"residue expansion grew past {cap} monomials")
        block_terms.append(terms)
    total = Fraction(0)
    matches = [[(texp, c) for (xdeg, texp), c in terms.items()
                if xdeg == target]
               for terms, target in zip(block_terms, targets)]

    def combine(idx, texp, coeff):
        nonlocal total
        if idx == len(matches):
            if all(t == 0 for t in texp):
                total += coeff
            return
        for t, c in matches[idx]:
            combine(idx + 1, tuple(a + b for a, b in zip(texp, t)), coeff * c)

    combine(0, (0,) * sys.n, Fraction(1))
    for k_i in ks:
        total *= r[k_i]
    return total


# --- weights and slab enumeration ---------------------------------------------------

def default_weight(sys):
    """Integral lift of the sum of the ample-cone extreme rays."""
    target = tuple(sum(col) for col in zip(*sys.kahler.rays))
    return sys.lift_weight_class(target)


def weight_class(sys, omega):
    """Pairings of a weight vector with the relation-lattice basis."""
    return tuple(xl.dot(omega, b) for b in sys.basis)


def is_ample(sys, omega):
    return all(xl.dot(omega, pc.ell_ext) > 0 for pc in sys.collections)


def check_weight(sys, omega):
    omega = tuple(Fraction(x) for x in omega)
    if len(omega) != sys.nvars:
        raise WeightNotAmple(
            f"weight has {len(omega)} entries, expected {sys.nvars}")
    if not is_ample(sys, omega):
        raise WeightNotAmple(
            "weight is not strictly positive on the curve cone; "
            "series truncation would not terminate")
    return omega


def _slab(sys, omega, order, extra_rows):
    """Integer points of {ell in L_ext : constraints, weight deg <= order}."""
    k = len(sys.basis)
    wclass = weight_class(sys, omega)
    rows = [(tuple(wclass), Fraction(order))]
    rows.extend(extra_rows)
    points = xl.lattice_points(rows, k, cap=max_terms())
    ells = [sys.from_basis_coords(m) for m in points]
    ells.sort(key=lambda e: (xl.dot(omega, e), e))
    return ells


def region_slab(sys, omega, order):
    """Summation-region vectors up to the truncation order."""
    rows = []
    for i in range(sys.r):
        for j in range(1, len(sys.fan.blocks[i]) + 1):
            pos = sys.j_position(i, j)
            rows.append((tuple(-Fraction(b[pos]) for b in sys.basis),
                         Fraction(0)))
    return _slab(sys, omega, order, rows)


def mori_slab(sys, omega, order):
    """Curve-cone lattice vectors up to the truncation order."""
    rows = []
    for ray in sys.kahler.rays:
        rows.append((tuple(-Fraction(x) for x in ray), Fraction(0)))
    return _slab(sys, omega, order, rows)


def in_mori_cone(sys, ell):
    coords = sys.basis_coords(ell)
    return all(xl.dot(ray, coords) >= 0 for ray in sys.kahler.rays)


# --- the series container -------------------------------------------------------------

@dataclass
class LogSeries:
    """Truncated sum of c * x^(ell + alpha) * prod log(x_j)^(m_j)."""
    alpha: tuple
    weight: tuple
    order: object
    terms: dict = field(default_factory=dict)
    shifts: tuple = None
    cohomological: bool = False

    def __post_init__(self):
        if self.shifts is None:
            self.shifts = ((0,) * len(self.alpha),)

    def add_term(self, ell, logdeg, coeff):
        if _coeff_is_zero(coeff):
            return
        key = (tuple(ell), tuple(logdeg))
        if key in self.terms:
            merged = self.terms[key] + coeff
            if _coeff_is_zero(merged):
                del self.terms[key]
            else:
                self.terms[key] = merged
        else:
            self.terms[key] = coeff

    def sorted_items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (xl.dot(self.weight, kv[0][0]),
                                      kv[0][0], kv[0][1]))

    def coefficient(self, ell, logdeg=None):
        if logdeg is None:
            logdeg = (0,) * len(self.alpha)
        return self.terms.get((tuple(ell), tuple(logdeg)), 0)

    def is_log_free(self):
        return all(all(m == 0 for m in logdeg) for _, logdeg in self.terms)

    def reliable_items(self):
        out = []
        for (ell, logdeg), coeff in self.sorted_items():
            if all(xl.dot(self.weight, xl.vec_add(ell, s)) <= self.order
                   for s in self.shifts):
                out.append(((ell, logdeg), coeff))
        return out

    def is_zero_on_reliable_region(self):
        return not self.reliable_items()

    def scale(self, c):
        out = replace(self, terms={})
        for key, coeff in self.terms.items():
            out.add_term(key[0], key[1], coeff * c)
        return out

    def __sub__(self, other):
        assert self.alpha == other.alpha
        out = replace(self, terms=dict(self.terms))
        for (ell, logdeg), coeff in other.terms.items():
            out.add_term(ell, logdeg, -1 * coeff)
        return out


def _coeff_is_zero(c):
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


# --- series builders --------------------------------------------------------------------

def gamma_series(sys, alpha, omega, order):
    """Rational solution series with product-form coefficients."""
    omega = check_weight(sys, omega)
    assert tuple(alpha) == canonical_alpha(sys), \
        "only the canonical exponent is supported"
    s = LogSeries(alpha=tuple(alpha), weight=omega, order=order)
    for ell in region_slab(sys, omega, order):
        s.add_term(ell, (0,) * sys.nvars, gamma_coefficient(sys, ell))
    return s


def normalized_period_series(sys, omega, order):
    """Period series: coefficients C_ell over the summation region.

    The leading transcendental prefactor is dropped and the base exponent is
    recorded in ``alpha``; printed tables show the coefficients C_ell alone.
    """
    omega = check_weight(sys, omega)
    s = LogSeries(alpha=canonical_alpha(sys), weight=omega, order=order)
    for ell in region_slab(sys, omega, order):
        s.add_term(ell, (0,) * sys.nvars, period_coefficient_C(sys, ell))
    return s


def _ring_inverse(ring, cls, top):
    s = cls.scalar_part()
    assert s != 0, "class with vanishing scalar part is not invertible"
    nil = cls - s * ring.one()
    out = ring.one()
    power = ring.one()
    for k in range(1, top + 1):
        power = power * nil
        if power.is_zero():
            break
        out = out + Fraction(-1) ** k * (Fraction(1) / Fraction(s) ** k) * power
    return (Fraction(1) / Fraction(s)) * out


def _o_factor(ring, d_class, a, c, top):
    """The slot factor of the product-form coefficient.

    For c <= 0 this is the polynomial prod_{k=0}^{-c-1} (D + a - k); for
    c > 0 it is the inverse of prod_{m=1}^{c} (D + a + m), expanded through
    the nilpotent part.
    """
    if c <= 0:
        out = ring.one()
        for k in range(-c):
            out = out * (d_class + (a - k) * ring.one())
        return out
    out = ring.one()
    for m in range(1, c + 1):
        out = out * _ring_inverse(ring, d_class + (a + m) * ring.one(), top)
    return out


def o_class(sys, ring, ell):
    """Cohomology-valued coefficient of x^(ell + alpha) in product form."""
    ell = tuple(ell)
    alpha = canonical_alpha(sys)
    out = ring.one()
    for (i, j) in sys.j_indices():
        pos = sys.j_position(i, j)
        d_class = ring.divisor_class(i, j)
        out = out * _o_factor(ring, d_class, alpha[pos], ell[pos], sys.n)
        if out.is_zero():
            break
    return out


def _log_multidegrees(nvars, top):
    out = [[(0,) * nvars]]
    for d in range(1, top + 1):
        level = []
        for prev in out[d - 1]:
            start = next((i for i in range(nvars - 1, -1, -1)
                          if prev[i] > 0), 0) if any(prev) else 0
            for j in range(start, nvars):
                m = list(prev)
                m[j] += 1
                level.append(tuple(m))
        out.append(sorted(set(level)))
    return [m for level in out for m in level]


def b_series(sys, ring, omega, order):
    """Cohomology-valued solution series with explicit log multidegrees."""
    omega = check_weight(sys, omega)
    alpha = canonical_alpha(sys)
    d_classes = [ring.divisor_class(i, j) for (i, j) in sys.j_indices()]
    log_part = []
    for m in _log_multidegrees(sys.nvars, sys.n):
        cls = ring.one()
        for j, e in enumerate(m):
            for _ in range(e):
                cls = cls * d_classes[j]
            if cls.is_zero():
                break
        if cls.is_zero():
            continue
        denom = 1
        for e in m:
            denom *= factorial(e)
        log_part.append((m, (Fraction(1, denom)) * cls))
    s = LogSeries(alpha=alpha, weight=omega, order=order,
                  cohomological=True)
    for ell in mori_slab(sys, omega, order):
        base = o_class(sys, ring, ell)
        if base.is_zero():
            continue
        for m, cls in log_part:
            s.add_term(ell, m, base * cls)
    return s


def pair_with_dual(b, h):
    """Scalar series from pairing every coefficient against a functional.

    ``h`` is either the index of a basis monomial (its dual functional) or a
    full coordinate vector over the dual basis.
    """
    sample = next(iter(b.terms.values()), None)
    if sample is None:
        return LogSeries(alpha=b.alpha, weight=b.weight, order=b.order,
                         shifts=b.shifts)
    dim = sample.ring.dim
    if isinstance(h, int):
        vec = [Fraction(0)] * dim
        vec[h] = Fraction(1)
        h = tuple(vec)
    out = LogSeries(alpha=b.alpha, weight=b.weight, order=b.order,
                    shifts=b.shifts)
    for (ell, logdeg), cls in b.terms.items():
        out.add_term(ell, logdeg, cls.pair(h))
    return out


# --- formal operators -----------------------------------------------------------------

def differentiate(s, pos):
    """Formal partial derivative in slot ``pos``."""
    out = replace(s, terms={})
    for (ell, logdeg), coeff in s.terms.items():
        gamma = s.alpha[pos] + ell[pos]
        shifted = tuple(e - (1 if j == pos else 0) for j, e in enumerate(ell))
        if gamma != 0:
            out.add_term(shifted, logdeg, coeff * gamma)
        if logdeg[pos] > 0:
            lower = tuple(m - (1 if j == pos else 0)
                          for j, m in enumerate(logdeg))
            out.add_term(shifted, lower, coeff * logdeg[pos])
    return out


def apply_operator(op, s, twisted=False):
    """Apply an Euler or box operator to a truncated series.

    The result records the exponent shifts of the operator monomials so that
    zero tests can be restricted to the reliable region.  With ``twisted``
    the box operator carries the quotient-coordinate sign on its second
    monomial, matching series whose coefficients live on the sign-flipped
    chart.
    """
    if isinstance(op, EulerOperator):
        out = replace(s, terms={}, shifts=((0,) * len(s.alpha),))
        for (ell, logdeg), coeff in s.terms.items():
            scalar = sum(Fraction(c) * (s.alpha[j] + ell[j])
                         for j, c in enumerate(op.coeffs) if c)
            out.add_term(ell, logdeg, coeff * (scalar - op.eigenvalue))
            for j, c in enumerate(op.coeffs):
                if c and logdeg[j] > 0:
                    lower = tuple(m - (1 if jj == j else 0)
                                  for jj, m in enumerate(logdeg))
                    out.add_term(ell, lower, coeff * (Fraction(c) * logdeg[j]))
        return out
    if isinstance(op, BoxOperator):
        s_plus, s_minus = s, s
        for j, e in enumerate(op.plus):
            for _ in range(e):
                s_plus = differentiate(s_plus, j)
        for j, e in enumerate(op.minus):
            for _ in range(e):
                s_minus = differentiate(s_minus, j)
        sign = 1
        if twisted:
            aux = sum(op.ell[j] for j in _aux_positions_from_alpha(s.alpha))
            sign = (-1) ** (aux % 2)
        result = s_plus - s_minus.scale(sign)
        result.shifts = (op.plus, op.minus)
        return result
    raise TypeError(f"unsupported operator {op!r}")


def _aux_positions_from_alpha(alpha):
    return [j for j, a in enumerate(alpha) if a != 0]


def vanishing_check_outside_mori(sys, ring, ell):
    """Product-form coefficient vanishes for vectors outside the curve cone."""
    ell = tuple(ell)
    if not sys.in_kernel(ell):
        raise NotInKernel(f"{ell} is not a relation of the configuration")
    if in_mori_cone(sys, ell):
        raise InMoriCone(f"{ell} lies inside the curve cone")
    return o_class(sys, ring, ell).is_zero()


# --- serialization ------------------------------------------------------------------------

def fraction_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 \
        else str(x.numerator)


def parse_fraction(s):
    return Fraction(s)


def series_to_dict(s, ring=None):
    """JSON-ready dict; rationals appear as exact strings."""
    terms = []
    for (ell, logdeg), coeff in s.sorted_items():
        if hasattr(coeff, "coords"):
            names = coeff.ring.basis_names()
            payload = {name: fraction_str(c)
                       for name, c in zip(names, coeff.coords) if c != 0}
        else:
            payload = fraction_str(coeff)
        terms.append({"l": list(ell), "logdeg": list(logdeg),
                      "coeff": payload})
    return {
        "alpha": [fraction_str(a) for a in s.alpha],
        "weight": [fraction_str(w) for w in s.weight],
        "order": fraction_str(s.order),
        "terms": terms,
    }


def series_from_dict(data):
    """Rational-coefficient series from its JSON form."""
    alpha = tuple(parse_fraction(a) for a in data["alpha"])
    weight = tuple(parse_fraction(w) for w in data["weight"])
    s = LogSeries(alpha=alpha, weight=weight,
                  order=parse_fraction(data["order"]))
    for term in data["terms"]:
        coeff = term["coeff"]
        if isinstance(coeff, dict):
            raise SchemaError(
                "cohomology-valued series cannot be re-read without its ring")
        s.add_term(tuple(term["l"]), tuple(term["logdeg"]),
                   parse_fraction(coeff))
    return s
