"""Exact linear algebra kernels.

Three independent toolboxes, all exact (no floating point anywhere):

  * integer matrices as lists of rows: rank, one solution of M x = b over ZZ,
    and a basis of the full integer kernel lattice, via unimodular column
    reduction (column-style Hermite sweep);
  * GF(2) maps with bit-packed vectors (bit i of an int = coordinate i):
    apply/solve/kernel, echelon subspaces, quotient spaces;
  * integer points of rational polyhedra {t : A t + c >= 0} by
    Fourier-Motzkin elimination and interval DFS.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd


# ---------------------------------------------------------------------------
# integer matrices (lists of rows of python ints)


def mat_vec_int(mat, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in mat]


def _column_echelon(mat, ncols=None):
    """Column echelon form by unimodular column operations.

    Returns (hcols, ucols, pivots) with H = M U: hcols[j] / ucols[j] are the
    columns of H / U, and pivots is a list of (row, col) pairs with strictly
    increasing rows and cols = 0, 1, ... Pivot entries are positive, pivot
    columns vanish above their pivot row, and every column right of the last
    pivot is identically zero.
    """
    nrows = len(mat)
    if ncols is None:
        ncols = len(mat[0]) if nrows else 0
    cols = [[mat[i][j] for i in range(nrows)] for j in range(ncols)]
    ucols = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    pivots = []
    nfree = 0  # columns < nfree are frozen pivot columns
    for row in range(nrows):
        if nfree == ncols:
            break
        while True:
            live = [j for j in range(nfree, ncols) if cols[j][row] != 0]
            if not live:
                break
            if len(live) == 1:
                j = live[0]
                cols[nfree], cols[j] = cols[j], cols[nfree]
                ucols[nfree], ucols[j] = ucols[j], ucols[nfree]
                if cols[nfree][row] < 0:
                    cols[nfree] = [-v for v in cols[nfree]]
                    ucols[nfree] = [-v for v in ucols[nfree]]
                pivots.append((row, nfree))
                nfree += 1
                break
            jmin = min(live, key=lambda j: abs(cols[j][row]))
            p = cols[jmin][row]
            for j in live:
                if j == jmin:
                    continue
                q = cols[j][row] // p
                if q:
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[jmin])]
                    ucols[j] = [x - q * y for x, y in zip(ucols[j], ucols[jmin])]
    return cols, ucols, pivots


def int_rank(mat, ncols=None):
    return len(_column_echelon(mat, ncols)[2])


def integer_kernel_basis(mat, ncols=None):
    """Basis of the lattice {v in ZZ^n : M v = 0}, sorted, with positive
    leading entries.

    The basis spans the whole kernel lattice (not just a finite-index
    sublattice): the vectors are columns of a unimodular matrix.
    """
    cols, ucols, pivots = _column_echelon(mat, ncols)
    out = []
    for j in range(len(pivots), len(cols)):
        v = ucols[j]
        lead = next((x for x in v if x != 0), 0)
        if lead < 0:
            v = [-x for x in v]
        out.append(v)
    out.sort()
    return out


class IntSolver:
    """Prepared solver for M x = b over ZZ: echelonize once, solve many b."""

    def __init__(self, mat, ncols=None):
        self.nrows = len(mat)
        if ncols is None:
            ncols = len(mat[0]) if self.nrows else 0
        self.ncols = ncols
        self.hcols, self.ucols, self.pivots = _column_echelon(mat, ncols)

    def solve(self, b):
        """One integer solution, or None."""
        y = [0] * self.ncols
        resid = list(b)
        for row, col in self.pivots:
            r = resid[row]
            p = self.hcols[col][row]
            if r % p:
                return None
            q = r // p
            y[col] = q
            if q:
                hc = self.hcols[col]
                for i in range(self.nrows):
                    resid[i] -= q * hc[i]
        if any(resid):
            return None
        u = self.ucols
        return [
            sum(u[j][i] * y[j] for j in range(self.ncols) if y[j])
            for i in range(self.ncols)
        ]

    def kernel_basis(self):
        out = []
        for j in range(len(self.pivots), self.ncols):
            v = self.ucols[j]
            lead = next((x for x in v if x != 0), 0)
            if lead < 0:
                v = [-x for x in v]
            out.append(v)
        out.sort()
        return out

    def rank(self):
        return len(self.pivots)


def solve_integer(mat, b, ncols=None):
    """One solution of M x = b over the integers, or None."""
    return IntSolver(mat, ncols).solve(b)


# ---------------------------------------------------------------------------
# GF(2)


class F2Map:
    """GF(2)-linear map stored by columns; vectors are bit-packed ints.

    apply(x) xors together cols[j] over the set bits j of x, so the domain
    dimension is len(cols) and the codomain dimension is nrows.
    """

    def __init__(self, cols, nrows):
        self.cols = list(cols)
        self.nrows = nrows
        self._basis = None  # pivot bit -> (reduced column, column combo tag)
        self._kernel = None

    @property
    def ncols(self):
        return len(self.cols)

    def apply(self, x):
        out = 0
        while x:
            low = x & -x
            out ^= self.cols[low.bit_length() - 1]
            x ^= low
        return out

    def _reduce(self):
        if self._basis is not None:
            return
        basis = {}
        kernel = []
        for j, col in enumerate(self.cols):
            c, t = col, 1 << j
            while c:
                p = (c & -c).bit_length() - 1
                if p not in basis:
                    basis[p] = (c, t)
                    break
                bc, bt = basis[p]
                c ^= bc
                t ^= bt
            else:
                kernel.append(t)
        self._basis = basis
        self._kernel = kernel

    def rank(self):
        self._reduce()
        return len(self._basis)

    def kernel_basis(self):
        self._reduce()
        return list(self._kernel)

    def image_basis(self):
        self._reduce()
        return [c for c, _ in self._basis.values()]

    def solve(self, b):
        """Some x with apply(x) == b, or None."""
        self._reduce()
        r, t = b, 0
        while r:
            p = (r & -r).bit_length() - 1
            hit = self._basis.get(p)
            if hit is None:
                return None
            r ^= hit[0]
            t ^= hit[1]
        return t


class F2Subspace:
    """Subspace of GF(2)^n in reduced echelon form (pivot = lowest set bit,
    and no basis vector has a bit at another vector's pivot)."""

    def __init__(self, vectors=()):
        self.basis = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v):
        # sound in one pass: reduced basis vectors only touch non-pivot bits
        for p, w in self.basis.items():
            if (v >> p) & 1:
                v ^= w
        return v

    def add(self, v):
        v = self.reduce(v)
        if v:
            p = (v & -v).bit_length() - 1
            for q, w in self.basis.items():
                if (w >> p) & 1:
                    self.basis[q] = w ^ v
            self.basis[p] = v
        return v

    def contains(self, v):
        return self.reduce(v) == 0

    def dim(self):
        return len(self.basis)

    def vectors(self):
        return list(self.basis.values())

    def __eq__(self, other):
        return isinstance(other, F2Subspace) and self.basis == other.basis

    def __hash__(self):
        return hash(frozenset(self.basis.items()))


class F2Quotient:
    """GF(2)^n modulo a subspace.

    Classes live on the free (non-pivot) coordinates of the subspace and are
    re-packed into dim() contiguous bits; project o lift = identity.
    """

    def __init__(self, n, sub):
        self.n = n
        self.sub = sub
        self.free = [i for i in range(n) if i not in sub.basis]

    def dim(self):
        return len(self.free)

    def project(self, v):
        r = self.sub.reduce(v)
        out = 0
        for k, i in enumerate(self.free):
            if (r >> i) & 1:
                out |= 1 << k
        return out

    def lift(self, c):
        out = 0
        for k, i in enumerate(self.free):
            if (c >> k) & 1:
                out |= 1 << i
        return out


def f2_solve(cols, nrows, b):
    """Solve the bit-packed column system for b: (solution, kernel basis) or None."""
    f = F2Map(cols, nrows)
    x = f.solve(b)
    if x is None:
        return None
    return x, f.kernel_basis()


def affine_meets_subspace(offset, dirs, sub):
    """A point of the affine set offset + span(dirs) lying in sub, or None."""
    cols = list(dirs) + sub.vectors()
    s = F2Map(cols, nrows=0).solve(offset)
    if s is None:
        return None
    a = offset
    for j in range(len(dirs)):
        if (s >> j) & 1:
            a ^= dirs[j]
    return a


# ---------------------------------------------------------------------------
# lattice points of rational polyhedra


class UnboundedPolytopeError(Exception):
    """The feasible set is unbounded along some lattice direction."""


def _normalize_row(row):
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        row = tuple(v // g for v in row)
    return tuple(row)


def _eliminate_last(rows, nvars):
    """Fourier-Motzkin: drop variable t_{nvars-1} from rows (a..., c)."""
    out = set()
    pos, neg = [], []
    for row in rows:
        a = row[nvars - 1]
        if a == 0:
            out.add(_normalize_row(row[: nvars - 1] + row[nvars:]))
        elif a > 0:
            pos.append(row)
        else:
            neg.append(row)
    for rp in pos:
        p = rp[nvars - 1]
        for rn in neg:
            q = -rn[nvars - 1]
            comb = tuple(q * x + p * y for x, y in zip(rp, rn))
            out.add(_normalize_row(comb[: nvars - 1] + comb[nvars:]))
    return sorted(out)


def fm_chain(rows, nvars):
    """Projections S_nvars ... S_0 of the system; S_i involves t_0..t_{i-1}."""
    cur = sorted(set(_normalize_row(tuple(r)) for r in rows))
    chain = [None] * (nvars + 1)
    chain[nvars] = cur
    for i in range(nvars, 0, -1):
        cur = _eliminate_last(cur, i)
        chain[i - 1] = cur
    return chain


def lattice_points(rows, nvars, point_cap=None):
    """All integer points of {t in RR^nvars : a . t + c >= 0 for each row
    (a..., c)}, in lexicographic order.

    Raises UnboundedPolytopeError when the feasible set is unbounded in some
    coordinate over a feasible prefix (exact, via the projection chain).
    """
    chain = fm_chain(rows, nvars)
    if any(row[0] < 0 for row in chain[0]):
        return []
    if nvars == 0:
        return [()]
    out = []
    prefix = []

    def scan(level):
        lo = hi = None
        for row in chain[level + 1]:
            a = row[level]
            if a == 0:
                continue
            rhs = Fraction(
                -(row[-1] + sum(row[j] * prefix[j] for j in range(level))), a
            )
            if a > 0:
                if lo is None or rhs > lo:
                    lo = rhs
            else:
                if hi is None or rhs < hi:
                    hi = rhs
        if lo is None or hi is None:
            raise UnboundedPolytopeError(
                "coordinate t_%d is unbounded over a feasible prefix" % level
            )
        for t in range(math.ceil(lo), math.floor(hi) + 1):
            prefix.append(t)
            if level + 1 == nvars:
                out.append(tuple(prefix))
                if point_cap is not None and len(out) > point_cap:
                    prefix.pop()
                    raise RuntimeError(
                        "polytope holds more than %d lattice points" % point_cap
                    )
            else:
                scan(level + 1)
            prefix.pop()

    scan(0)
    return out


def polytope_box_bounds(rows, nvars):
    """Exact per-coordinate ranges of {t : a . t + c >= 0 for each row}.

    None when the polytope is empty; otherwise a list of (lo, hi) pairs of
    Fractions, a side being None when unbounded in that direction.
    """
    chain = fm_chain(rows, nvars)
    if any(row[0] < 0 for row in chain[0]):
        return None
    out = []
    for j in range(nvars):
        perm = [j] + [i for i in range(nvars) if i != j]
        rr = [tuple(row[i] for i in perm) + (row[-1],) for row in rows]
        proj = fm_chain(rr, nvars)[1] if nvars else []
        lo = hi = None
        for a, c in proj:
            if a > 0:
                v = Fraction(-c, a)
                lo = v if lo is None or v > lo else lo
            elif a < 0:
                v = Fraction(-c, a)
                hi = v if hi is None or v < hi else hi
        out.append((lo, hi))
    return out


def cone_is_trivial(ineq_rows, nvars):
    """True iff the cone {t : a . t >= 0 for every row a} is just the origin.

    A rational cone bigger than {0} has a nonzero rational ray, which the
    enumerator detects as an unbounded coordinate.
    """
    rows = [tuple(a) + (0,) for a in ineq_rows]
    try:
        pts = lattice_points(rows, nvars)
    except UnboundedPolytopeError:
        return False
    return pts == [tuple([0] * nvars)]
