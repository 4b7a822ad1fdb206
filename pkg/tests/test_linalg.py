"""Exact linear algebra against independent oracles (sympy, brute force)."""

import random
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from k3lattices import linalg


def random_int_matrix(rng, n, m, bound=6):
    return [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)]


def test_xgcd():
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randint(-50, 50), rng.randint(-50, 50)
        g, x, y = linalg.xgcd(a, b)
        assert a * x + b * y == g
        assert g >= 0
        if a or b:
            assert a % g == 0 and b % g == 0


def test_det_matches_sympy():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 5)
        m = random_int_matrix(rng, n, n)
        assert linalg.det(m) == int(sympy.Matrix(m).det())


def test_det_empty():
    assert linalg.det([]) == 1


def test_rational_inverse():
    rng = random.Random(3)
    done = 0
    while done < 30:
        n = rng.randint(1, 4)
        m = random_int_matrix(rng, n, n)
        if linalg.det(m) == 0:
            continue
        inv = linalg.rational_inverse(m)
        prod = [[sum(Fraction(m[i][k]) * inv[k][j] for k in range(n))
                 for j in range(n)] for i in range(n)]
        assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        done += 1


def test_signature_definite_and_mixed():
    assert linalg.signature([[2, 0], [0, 2]]) == (2, 0)
    assert linalg.signature([[-2, 1], [1, -2]]) == (0, 2)
    assert linalg.signature([[0, 1], [1, 0]]) == (1, 1)
    assert linalg.signature([[0, 3], [3, 0]]) == (1, 1)
    with pytest.raises(ValueError):
        linalg.signature([[1, 0], [0, 0]])


def test_signature_matches_eigenvalue_signs():
    rng = random.Random(4)
    done = 0
    while done < 25:
        n = rng.randint(1, 4)
        m = random_int_matrix(rng, n, n, bound=4)
        sym = [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]
        mat = sympy.Matrix(sym)
        if mat.det() == 0:
            continue
        eigs = mat.eigenvals()
        # eigenvalues of a symmetric integer matrix are real; evalf can
        # leave a spurious tiny imaginary part on radical expressions
        pos = sum(m_ for val, m_ in eigs.items() if sympy.re(val.evalf()) > 0)
        neg = sum(m_ for val, m_ in eigs.items() if sympy.re(val.evalf()) < 0)
        assert linalg.signature(sym) == (pos, neg)
        done += 1


def _naive_snf_diagonal(mat):
    """Independent elementary row/column reduction, no transforms."""
    a = [list(r) for r in mat]
    m, n = len(a), len(a[0])
    out = []
    t = 0
    while t < min(m, n):
        nonzero = [(i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nonzero:
            break
        i, j = min(nonzero, key=lambda ij: abs(a[ij[0]][ij[1]]))
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        p = a[t][t]
        clean = True
        for i in range(t + 1, m):
            q = a[i][t] // p
            a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            clean = clean and a[i][t] == 0
        for j in range(t + 1, n):
            q = a[t][j] // p
            for i in range(m):
                a[i][j] -= q * a[i][t]
            clean = clean and a[t][j] == 0
        if not clean:
            continue
        bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n)
               if a[i][j] % p]
        if bad:
            i, j = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            continue
        t += 1
    for i in range(min(m, n)):
        out.append(abs(a[i][i]) if i < t else 0)
    return out


def test_smith_form_small_cases():
    d, u, v = linalg.smith_normal_form([[0, 3], [3, 0]])
    assert d == [3, 3]
    d, _, _ = linalg.smith_normal_form([[-2, 1], [1, -2]])
    assert d == [1, 3]
    d, _, _ = linalg.smith_normal_form([[0, 1], [1, 0]])
    assert d == [1, 1]


def test_smith_form_properties_random():
    rng = random.Random(5)
    for _ in range(80):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = random_int_matrix(rng, m, n)
        d, u, v = linalg.smith_normal_form(a)
        assert abs(linalg.det(u)) == 1
        assert abs(linalg.det(v)) == 1
        prod = linalg.mat_mul(linalg.mat_mul(u, a), v)
        for i in range(m):
            for j in range(n):
                assert prod[i][j] == (d[i] if i == j and i < len(d) else 0)
        for i in range(len(d) - 1):
            assert d[i] >= 0
            if d[i] and d[i + 1]:
                assert d[i + 1] % d[i] == 0
        # two independent oracles
        assert d == _naive_snf_diagonal(a)
        sym = smith_normal_form(sympy.Matrix(a))
        sym_diag = sorted(abs(sym[i, i]) for i in range(min(m, n)))
        assert sym_diag == sorted(d)


def test_kernel_basis():
    k = linalg.kernel_basis([[1, 1]])
    assert len(k) == 1 and k[0][0] + k[0][1] == 0
    k = linalg.kernel_basis([[2, 4], [1, 2]])
    assert len(k) == 1
    rng = random.Random(6)
    for _ in range(40):
        m = rng.randint(1, 3)
        n = rng.randint(1, 4)
        a = random_int_matrix(rng, m, n)
        for col in linalg.kernel_basis(a):
            assert all(sum(a[i][j] * col[j] for j in range(n)) == 0
                       for i in range(m))


def test_saturation_index():
    basis, index = linalg.saturation([[2, 0]])
    assert index == 2
    basis, index = linalg.saturation([[1, 1], [0, 2]])
    assert index == 2
    with pytest.raises(ValueError):
        linalg.saturation([[1, 0], [2, 0]])


def test_solve_linear_diophantine():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 5)
        w = [rng.randint(-8, 8) for _ in range(n)]
        c = rng.randint(-20, 20)
        x = linalg.solve_linear_diophantine(w, c)
        from math import gcd
        g = 0
        for wi in w:
            g = gcd(g, wi)
        if x is None:
            assert g == 0 and c != 0 or (g != 0 and c % g != 0)
        else:
            assert sum(wi * xi for wi, xi in zip(w, x)) == c
