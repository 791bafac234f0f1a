"""Exact integer and rational matrices.

IntMatrix / RatMatrix are immutable.  The module functions implement
the fraction-free kernels: Bareiss determinant, Faddeev-LeVerrier
characteristic polynomial, Smith and Hermite normal forms with
transforms, rational solving, and the Sturm-based signature of a
symmetric matrix.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import (
    IntPoly,
    cauchy_root_bound,
    count_real_roots,
    squarefree_decomposition,
    sturm_sequence,
)


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("data",)

    def __init__(self, rows):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must be nonempty")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @property
    def rows(self):
        return len(self.data)

    @property
    def cols(self):
        return len(self.data[0])

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(row[j] for row in self.data)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def _shape_match(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __add__(self, other):
        self._shape_match(other)
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        )

    def __sub__(self, other):
        self._shape_match(other)
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        )

    def __neg__(self):
        return IntMatrix([[-a for a in row] for row in self.data])

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        return IntMatrix([[scalar * a for a in row] for row in self.data])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in product")
        bt = other.transpose().data
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.data]
        )

    def transpose(self):
        return IntMatrix(list(zip(*self.data)))

    def is_symmetric(self):
        return self.is_square() and self.data == self.transpose().data

    def to_rational(self):
        return RatMatrix(self.data)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]})"


class RatMatrix:
    """Immutable matrix of Fractions (kept in lowest terms by Fraction)."""

    __slots__ = ("data",)

    def __init__(self, rows):
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must be nonempty")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self):
        return len(self.data)

    @property
    def cols(self):
        return len(self.data[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(row[j] for row in self.data)

    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in product")
        bt = tuple(zip(*other.data))
        return RatMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.data]
        )

    def transpose(self):
        return RatMatrix(list(zip(*self.data)))

    def is_integral(self):
        return all(x.denominator == 1 for row in self.data for x in row)

    def to_integer(self):
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntMatrix([[int(x) for x in row] for row in self.data])

    def __repr__(self):
        return f"RatMatrix({[[str(x) for x in r] for r in self.data]})"


def det(m):
    """Determinant by Bareiss fraction-free elimination."""
    if not m.is_square():
        raise ValueError("determinant needs a square matrix")
    n = m.rows
    a = [list(row) for row in m.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def charpoly(m):
    """Characteristic polynomial det(X*I - M) by Faddeev-LeVerrier."""
    if not m.is_square():
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.rows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    work = IntMatrix.identity(n)
    for k in range(1, n + 1):
        am = m @ work
        tr = sum(am[i, i] for i in range(n))
        q, r = divmod(tr, k)
        if r:
            raise AssertionError("Faddeev-LeVerrier trace division not exact")
        coeffs[n - k] = -q
        if k < n:
            work = am + coeffs[n - k] * IntMatrix.identity(n)
    return IntPoly(coeffs)


def poly_of_matrix(p, m):
    """Evaluate an integer polynomial at a square matrix (Horner)."""
    if not m.is_square():
        raise ValueError("need a square matrix")
    n = m.rows
    acc = IntMatrix.zeros(n, n)
    for c in reversed(p.coeffs):
        acc = acc @ m + c * IntMatrix.identity(n)
    return acc


def companion(p):
    """Companion matrix of a monic integer polynomial of degree >= 1."""
    if p.degree < 1 or not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
    n = p.degree
    return IntMatrix(
        [
            [
                -p.coeffs[i] if j == n - 1 else (1 if i == j + 1 else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


@dataclass(frozen=True)
class SnfResult:
    """U @ M @ V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self):
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))


def _snf_shape(m):
    """Diagonal, nonnegative, zeros trailing (divisibility not required)."""
    if any(m[i, j] for i in range(m.rows) for j in range(m.cols) if i != j):
        return False
    seen_zero = False
    for i in range(min(m.rows, m.cols)):
        d = m[i, i]
        if d < 0:
            return False
        if d == 0:
            seen_zero = True
        elif seen_zero:
            return False
    return True


def smith_normal_form(m):
    """Smith normal form with transforms.

    Diagonalizes by alternating row and column Hermite reductions (which
    keep every entry reduced modulo a pivot, avoiding the coefficient
    blow-up of naive elimination), then repairs the divisibility chain
    with explicit 2x2 Bezout blocks.
    """
    rows, cols = m.rows, m.cols
    a = m
    u = IntMatrix.identity(rows)
    v = IntMatrix.identity(cols)
    for _ in range(4 * (rows + cols) + 8):
        if _snf_shape(a):
            break
        h, u1 = hermite_normal_form(a)
        a, u = h, u1 @ u
        if _snf_shape(a):
            break
        ht, v1 = hermite_normal_form(a.transpose())
        a, v = ht.transpose(), v @ v1.transpose()
    else:
        raise AssertionError("alternating Hermite reduction did not converge")

    aa = [list(row) for row in a.data]
    uu = [list(row) for row in u.data]
    vv = [list(row) for row in v.data]
    size = min(rows, cols)
    # HNF pivots are positive and zero rows sink, so zeros already trail
    changed = True
    while changed:
        changed = False
        for i in range(size):
            p = aa[i][i]
            if p == 0:
                continue
            for j in range(i + 1, size):
                q = aa[j][j]
                if q % p == 0:
                    continue
                g = math.gcd(p, q)
                x, y = _bezout(p, q)
                # rows: (i, j) block <- [[x, y], [-q/g, p/g]], det 1
                ri, rj = aa[i], aa[j]
                aa[i] = [x * s + y * t for s, t in zip(ri, rj)]
                aa[j] = [(-q // g) * s + (p // g) * t for s, t in zip(ri, rj)]
                ri, rj = uu[i], uu[j]
                uu[i] = [x * s + y * t for s, t in zip(ri, rj)]
                uu[j] = [(-q // g) * s + (p // g) * t for s, t in zip(ri, rj)]
                # columns: col i += col j, then clear the (i, j) remainder
                for r in range(rows):
                    aa[r][i] += aa[r][j]
                for r in range(cols):
                    vv[r][i] += vv[r][j]
                w = y * q // g
                for r in range(rows):
                    aa[r][j] -= w * aa[r][i]
                for r in range(cols):
                    vv[r][j] -= w * vv[r][i]
                p = aa[i][i]
                changed = True

    seen_zero = False
    for i in range(size):
        if aa[i][i] == 0:
            seen_zero = True
        elif seen_zero:
            raise AssertionError("zero elementary divisor out of place")
    result = SnfResult(IntMatrix(uu), IntMatrix(aa), IntMatrix(vv))
    if result.U @ m @ result.V != result.D:
        raise AssertionError("Smith normal form transforms are inconsistent")
    return result


def _bezout(p, q):
    """(x, y) with x*p + y*q = gcd(p, q)."""
    r0, r1 = p, q
    x0, x1, y0, y1 = 1, 0, 0, 1
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if r0 < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def hermite_normal_form(m):
    """Row-style Hermite normal form.

    Returns (H, U) with H = U @ M, U unimodular, pivots positive, and
    entries above each pivot reduced into [0, pivot).
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]

    def row_op(i, j, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    r = 0
    for j in range(cols):
        if r == rows:
            break
        # euclidean passes: bring the smallest entry to row r, floor-reduce below
        while True:
            nz = [i for i in range(r, rows) if a[i][j]]
            if not nz:
                break
            i0 = min(nz, key=lambda k: (abs(a[k][j]), k))
            if i0 != r:
                a[r], a[i0] = a[i0], a[r]
                u[r], u[i0] = u[i0], u[r]
            clean = True
            for i in range(r + 1, rows):
                if a[i][j]:
                    row_op(i, r, a[i][j] // a[r][j])
                    if a[i][j]:
                        clean = False
            if clean:
                break
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                row_op(i, r, q)
        r += 1
    return IntMatrix(a), IntMatrix(u)


def kernel_basis(m):
    """Columns spanning the saturated integer kernel {x : M x = 0}.

    Returns None when the kernel is trivial.
    """
    snf = smith_normal_form(m)
    diag = snf.diagonal
    keep = [j for j in range(m.cols) if j >= len(diag) or diag[j] == 0]
    if not keep:
        return None
    return IntMatrix([[snf.V[i, j] for j in keep] for i in range(m.cols)])


def solve_rational(a, b):
    """Exact solution x of A x = b for invertible A; b is a sequence."""
    n = a.rows
    if not a.is_square():
        raise ValueError("solve needs a square matrix")
    if len(b) != n:
        raise ValueError("dimension mismatch")
    aug = [[Fraction(a[i, j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return tuple(row[n] for row in aug)


def rational_inverse(m):
    """Exact inverse of a square matrix over Q."""
    n = m.rows
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    aug = [
        [Fraction(m[i, j]) for j in range(n)]
        + [Fraction(1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return RatMatrix([row[n:] for row in aug])


def signature_symmetric(g):
    """Signature (n_plus, n_minus) of a nondegenerate symmetric matrix.

    Exact: square-free decomposition of the characteristic polynomial,
    then Sturm counts of positive and negative roots per factor,
    weighted by multiplicity.
    """
    if not g.is_symmetric():
        raise ValueError("signature needs a symmetric matrix")
    p = charpoly(g)
    if p.coeffs[0] == 0:
        raise ValueError("singular matrix has no signature")
    n_plus = n_minus = 0
    zero = Fraction(0)
    for factor, mult in squarefree_decomposition(p):
        bound = Fraction(cauchy_root_bound(factor))
        seq = sturm_sequence(factor)
        n_plus += mult * count_real_roots(factor, zero, bound, seq)
        n_minus += mult * count_real_roots(factor, -bound, zero, seq)
    if n_plus + n_minus != g.rows:
        raise AssertionError("eigenvalue counts do not sum to the dimension")
    return (n_plus, n_minus)
