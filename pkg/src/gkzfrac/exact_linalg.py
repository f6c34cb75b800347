"""Exact integer and rational linear algebra.

All matrices are tuples (or lists) of row tuples, vectors are flat tuples.
Entries are Python ints or fractions.Fraction; nothing here ever touches a
float.  Sizes are desk scale (a dozen rows or columns), so the algorithms
favour determinism and transparency over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, RankDeficient, TruncationTooLarge

Vec = tuple
Mat = tuple


# --- small vector helpers ----------------------------------------------------

def dot(u, v):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_is_zero(v):
    return all(a == 0 for a in v)


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for a in v:
        g = gcd(g, abs(int(a)))
    if g <= 1:
        return tuple(int(a) for a in v)
    return tuple(int(a) // g for a in v)


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m):
    return tuple(zip(*m)) if m else ()


def identity(k):
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


# --- determinants and rank ---------------------------------------------------

def det(m):
    """Exact determinant via fraction-free elimination on a copy."""
    k = len(m)
    if k == 0:
        return 1
    if any(len(row) != k for row in m):
        raise DimensionMismatch("det: matrix not square")
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for r in range(col + 1, k):
            factor = a[r][col] / a[col][col]
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    result = Fraction(sign)
    for i in range(k):
        result *= a[i][i]
    if result.denominator == 1:
        return int(result)
    return result


def rank(m):
    r, _pivots = rref(m)
    return len(_pivots)


# --- reduced row echelon form and linear solving ------------------------------

def rref(m):
    """Reduced row echelon form over the rationals.

    Returns (rows, pivots) where pivots[i] is the column of the i-th pivot.
    """
    a = [[Fraction(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        a[row] = [x / a[row][col] for x in a[row]]
        for r in range(nrows):
            if r != row and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return [tuple(row) for row in a], pivots


def solve_linear(m, b):
    """Solve m*x = b over the rationals.

    Returns (particular, nullspace_basis) or None when inconsistent.
    """
    if not m:
        return ((), [])
    ncols = len(m[0])
    aug = [tuple(row) + (bi,) for row, bi in zip(m, b)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    particular = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        particular[col] = rows[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    null = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -rows[i][f]
        null.append(tuple(v))
    return tuple(particular), null


def solve_unique(m, b):
    """Solve m*x = b expecting a unique solution; None if none or many."""
    sol = solve_linear(m, b)
    if sol is None or sol[1]:
        return None
    return sol[0]


# --- Hermite normal form ------------------------------------------------------

def _col_hnf(m, rows_order):
    """Column echelon form by unimodular column operations.

    Processes rows in ``rows_order``; returns (H, U) with H = m @ U,
    U unimodular.  Pivots are positive and off-pivot entries in a pivot row
    (in columns before the pivot) are reduced into [0, pivot).
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    cols = [[int(m[r][c]) for r in range(nrows)] for c in range(ncols)]
    ucols = [[1 if i == c else 0 for i in range(ncols)] for c in range(ncols)]

    def addmul(dst, src, q):
        cols[dst] = [a - q * b for a, b in zip(cols[dst], cols[src])]
        ucols[dst] = [a - q * b for a, b in zip(ucols[dst], ucols[src])]

    def swap(i, j):
        cols[i], cols[j] = cols[j], cols[i]
        ucols[i], ucols[j] = ucols[j], ucols[i]

    def negate(i):
        cols[i] = [-a for a in cols[i]]
        ucols[i] = [-a for a in ucols[i]]

    pivot_col = 0
    pivot_rows = []
    for row in rows_order:
        active = [c for c in range(pivot_col, ncols) if cols[c][row] != 0]
        if not active:
            continue
        # Euclid on the entries of this row across the active columns.
        while True:
            active = [c for c in range(pivot_col, ncols) if cols[c][row] != 0]
            if len(active) == 1:
                break
            cmin = min(active, key=lambda c: abs(cols[c][row]))
            for c in active:
                if c != cmin:
                    addmul(c, cmin, cols[c][row] // cols[cmin][row])
        keep = next(c for c in range(pivot_col, ncols) if cols[c][row] != 0)
        swap(pivot_col, keep)
        if cols[pivot_col][row] < 0:
            negate(pivot_col)
        piv = cols[pivot_col][row]
        for c in range(pivot_col):
            q = cols[c][row] // piv
            if q:
                addmul(c, pivot_col, q)
        pivot_rows.append(row)
        pivot_col += 1
        if pivot_col == ncols:
            break
    h = tuple(tuple(cols[c][r] for c in range(ncols)) for r in range(nrows))
    u = tuple(tuple(ucols[c][r] for c in range(ncols)) for r in range(ncols))
    return h, u, pivot_rows


def hermite_basis(m):
    """Column Hermite normal form of an integer matrix.

    Column span over the integers is preserved; pivots are positive, chosen
    top-down (lowest row index first), and entries left of a pivot in its row
    are reduced into [0, pivot).
    """
    if not m or not m[0]:
        raise DimensionMismatch("hermite_basis: empty matrix")
    h, _u, _rows = _col_hnf(m, range(len(m)))
    return h


def hermite_with_transform(m):
    """Column HNF together with the unimodular transform: H = m @ U."""
    if not m or not m[0]:
        raise DimensionMismatch("hermite_with_transform: empty matrix")
    h, u, _rows = _col_hnf(m, range(len(m)))
    return h, u


def kernel_basis(m):
    """Integer basis of the kernel lattice {v : m v = 0}.

    The matrix must have full row rank over the rationals, otherwise
    RankDeficient is raised.  The basis is saturated (it spans the full
    integer kernel, not a finite-index sublattice) and is put in a canonical
    form: bottom-up column HNF with positive pivots, columns ordered by the
    position of their last nonzero entry.
    """
    if not m or not m[0]:
        raise DimensionMismatch("kernel_basis: empty matrix")
    nrows, ncols = len(m), len(m[0])
    h, u, _ = _col_hnf(m, range(nrows))
    nonzero_cols = [c for c in range(ncols) if any(h[r][c] != 0 for r in range(nrows))]
    if len(nonzero_cols) < nrows:
        raise RankDeficient(
            f"kernel_basis: rank {len(nonzero_cols)} < rows {nrows}")
    kernel_cols = [c for c in range(ncols) if all(h[r][c] == 0 for r in range(nrows))]
    vecs = [tuple(u[r][c] for r in range(ncols)) for c in kernel_cols]
    if not vecs:
        return []
    # Canonicalise: column HNF processed bottom-up, then sort by last support.
    basis_mat = tuple(zip(*vecs))  # ncols x k, rows indexed by ambient coord
    h2, _u2, _ = _col_hnf(basis_mat, range(len(basis_mat) - 1, -1, -1))
    out = []
    for c in range(len(vecs)):
        v = tuple(h2[r][c] for r in range(len(basis_mat)))
        if not vec_is_zero(v):
            out.append(v)
    out.sort(key=lambda v: max(i for i, a in enumerate(v) if a != 0))
    return out


def split_positive_negative(v):
    """Write v = plus - minus with disjoint nonnegative supports."""
    plus = tuple(a if a > 0 else 0 for a in v)
    minus = tuple(-a if a < 0 else 0 for a in v)
    return plus, minus


def is_unimodular_lattice_basis(vs, lattice_basis):
    """True iff vs is a Z-basis of the lattice spanned by lattice_basis."""
    if len(vs) != len(lattice_basis):
        raise DimensionMismatch(
            f"is_unimodular_lattice_basis: {len(vs)} vs {len(lattice_basis)}")
    if not vs:
        return True
    bmat = tuple(zip(*lattice_basis))  # ambient x k
    change = []
    for v in vs:
        coeffs = solve_unique(bmat, v)
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            return False
        change.append(tuple(int(c) for c in coeffs))
    return abs(det(change)) == 1


def solve_integer(m, b):
    """One integer solution of m x = b, or None if none exists."""
    h, u = hermite_with_transform(m)
    nrows, ncols = len(m), len(m[0])
    # Forward-substitute through the column echelon structure of h.
    y = [0] * ncols
    residual = [int(x) for x in b]
    col = 0
    for row in range(nrows):
        if col < ncols and h[row][col] != 0:
            q, rem = divmod(residual[row], h[row][col])
            if rem != 0:
                return None
            y[col] = q
            for r in range(nrows):
                residual[r] -= q * h[r][col]
            col += 1
        elif residual[row] != 0:
            return None
    if any(residual):
        return None
    return mat_vec(u, tuple(y))


def in_integer_span(m_cols, v):
    """Whether v lies in the integer column span of m_cols (a matrix)."""
    return solve_integer(m_cols, v) is not None


# --- Fourier-Motzkin elimination ----------------------------------------------

def _fm_normalize(a, b, strict):
    scale = next((abs(x) for x in a if x != 0), None)
    if scale is None:
        return a, b, strict
    return tuple(x / scale for x in a), b / scale, strict


def fm_eliminate(rows, var):
    """Eliminate variable ``var`` from rows (a, b, strict) meaning a.x <= b
    (or < b when strict).  Duplicate rows are dropped to tame blowup."""
    keep, pos, neg = {}, [], []

    def add(a, b, strict):
        a, b, strict = _fm_normalize(a, b, strict)
        prev = keep.get(a)
        if prev is None or (b, not strict) < (prev[0], not prev[1]):
            keep[a] = (b, strict)

    for a, b, strict in rows:
        c = a[var]
        if c == 0:
            add(a, b, strict)
        elif c > 0:
            pos.append((a, b, strict))
        else:
            neg.append((a, b, strict))
    for ap, bp, sp in pos:
        cp = ap[var]
        for an, bn, sn in neg:
            cn = -an[var]
            a = tuple(cn * x + cp * y for x, y in zip(ap, an))
            b = cn * bp + cp * bn
            add(a, b, sp or sn)
    return [(a, b, s) for a, (b, s) in keep.items()]


def fm_feasible(rows, dim):
    """Exact feasibility of a system of rows (a, b, strict) over the reals."""
    rows = [(tuple(Fraction(x) for x in a), Fraction(b), s) for a, b, s in rows]
    for var in range(dim - 1, -1, -1):
        rows = fm_eliminate(rows, var)
    for a, b, strict in rows:
        if strict:
            if not Fraction(0) < b:
                return False
        else:
            if not Fraction(0) <= b:
                return False
    return True


def _ceil_frac(x):
    return -((-x.numerator) // x.denominator)


def _floor_frac(x):
    return x.numerator // x.denominator


def lattice_points(rows, dim, cap=None):
    """All integer points satisfying rows of (a, b) meaning a.x <= b.

    Bounded recursive search: Fourier-Motzkin gives exact per-variable
    bounds at each level.  The constraint region must be bounded; an
    unbounded direction surfaces as a missing bound and raises
    TruncationTooLarge, as does exceeding ``cap`` points.
    """
    systems = [None] * (dim + 1)
    systems[dim] = [(tuple(Fraction(x) for x in a), Fraction(b), False)
                    for a, b in rows]
    for var in range(dim - 1, -1, -1):
        systems[var] = fm_eliminate(systems[var + 1], var)
    for a, b, _ in systems[0]:
        if 0 > b:
            return []
    out = []

    def descend(prefix):
        k = len(prefix)
        if k == dim:
            out.append(tuple(prefix))
            if cap is not None and len(out) > cap:
                raise TruncationTooLarge(
                    f"enumeration exceeded cap of {cap} points")
            return
        lo, hi = None, None
        for a, b, _ in systems[k + 1]:
            c = a[k]
            if c == 0:
                continue
            rest = b - sum(a[i] * prefix[i] for i in range(k))
            bound = rest / c
            if c > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is None or hi is None:
            raise TruncationTooLarge(
                "enumeration region is unbounded; check the weight")
        # rows of systems[k + 1] only involve variables 0..k
        zero_rows = [(a, b) for a, b, _ in systems[k + 1] if a[k] == 0]
        for a, b in zero_rows:
            if sum(a[i] * prefix[i] for i in range(k)) > b:
                return
        for val in range(_ceil_frac(Fraction(lo)), _floor_frac(Fraction(hi)) + 1):
            descend(prefix + [val])

    descend([])
    return out
