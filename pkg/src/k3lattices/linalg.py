"""Exact linear algebra over Z and Q for small dense matrices.

Matrices are tuples/lists of rows; vectors are flat sequences.  All
arithmetic uses Python integers and fractions.Fraction, never floats:
the point of this package is that every computation is a proof step.
"""

from fractions import Fraction
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# scalar helpers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % p == 0:
            return n == p
    d = 37
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def isqrt_exact(n: int) -> int | None:
    """Integer square root of n, or None if n is not a perfect square."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# basic matrix utilities


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a, b):
    if not a or not b:
        return []
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_symmetric(a) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def dot(v, w):
    return sum(x * y for x, y in zip(v, w))


# ---------------------------------------------------------------------------
# determinants, inverses, signatures


def det(a) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a):
    """Inverse of a nonsingular matrix, as a matrix of Fractions."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        d = m[col][col]
        m[col] = [x / d for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def integer_inverse(a):
    """Inverse of a unimodular integer matrix, with integrality asserted."""
    inv = rational_inverse(a)
    out = []
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def signature(gram) -> tuple[int, int]:
    """Signature (n+, n-) of a nondegenerate symmetric matrix, exactly.

    Symmetric Gaussian elimination over Q with congruence pivoting: when
    every remaining diagonal entry vanishes, a row+column addition makes
    one nonzero (2*a_jk) before pivoting.  Raises on degenerate input.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    for i in range(n):
        piv = next((k for k in range(i, n) if a[k][k] != 0), None)
        if piv is None:
            off = next(
                ((j, k) for j in range(i, n) for k in range(j + 1, n) if a[j][k] != 0),
                None,
            )
            if off is None:
                raise ValueError("degenerate symmetric form")
            j, k = off
            for t in range(n):
                a[j][t] += a[k][t]
            for t in range(n):
                a[t][j] += a[t][k]
            piv = j
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            for row in a:
                row[i], row[piv] = row[piv], row[i]
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            if a[r][i] != 0:
                f = a[r][i] / d
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
        for c in range(i + 1, n):
            a[i][c] = Fraction(0)
    return pos, neg


# ---------------------------------------------------------------------------
# Smith normal form and consequences


def smith_normal_form(mat):
    """Smith normal form with transforms: returns (d, U, V), U*mat*V = diag(d).

    d is the full diagonal (length min(m, n)), nonnegative, each entry
    dividing the next; U and V are unimodular.
    """
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if a else 0
    u = identity(m)
    v = identity(n)

    def row_add(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def col_add(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block into the pivot slot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
            if a[t][t] < 0:
                row_neg(t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    row_add(i, t, -(a[i][t] // p))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    col_add(j, t, -(a[t][j] // p))
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            culprit = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p != 0),
                None,
            )
            if culprit is None:
                break
            row_add(t, culprit, 1)
    d = [a[i][i] for i in range(min(m, n))]
    return d, u, v


def invariant_factors(mat) -> tuple[int, ...]:
    """Invariant factors (> 1) of the cokernel Z^n / mat * Z^n."""
    d, _, _ = smith_normal_form(mat)
    return tuple(x for x in d if x > 1)


def rank(mat) -> int:
    d, _, _ = smith_normal_form(mat)
    return sum(1 for x in d if x != 0)


def kernel_basis(mat):
    """Basis (list of columns) of the integer kernel of mat; always saturated."""
    if not mat:
        return []
    d, _, v = smith_normal_form(mat)
    n = len(mat[0])
    cols = [j for j in range(n) if j >= len(d) or d[j] == 0]
    return [[v[i][j] for i in range(n)] for j in cols]


def saturation(columns):
    """Saturate the span of integer columns inside Z^n.

    Returns (basis_columns, index) where index is the index of the input
    span inside its saturation.  Raises ValueError on dependent input.
    """
    n = len(columns[0])
    k = len(columns)
    b = [[columns[j][i] for j in range(k)] for i in range(n)]
    d, u, _ = smith_normal_form(b)
    if sum(1 for x in d if x != 0) != k:
        raise ValueError("columns are linearly dependent")
    uinv = integer_inverse(u)
    basis = [[uinv[i][j] for i in range(n)] for j in range(k)]
    index = 1
    for x in d:
        index *= x
    return basis, index


def solve_linear_diophantine(w, c: int):
    """One integer solution x of sum(w_i * x_i) = c, or None."""
    n = len(w)
    g = 0
    coeff = [0] * n
    for i, wi in enumerate(w):
        if wi == 0:
            continue
        if g == 0:
            g = abs(wi)
            coeff = [0] * n
            coeff[i] = 1 if wi > 0 else -1
        else:
            g2, x, y = xgcd(g, wi)
            coeff = [x * cj for cj in coeff]
            coeff[i] += y
            g = g2
    if g == 0:
        return [0] * n if c == 0 else None
    if c % g != 0:
        return None
    q = c // g
    return [q * cj for cj in coeff]
