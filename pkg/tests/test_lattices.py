"""Lattice invariants: worked examples plus property tests."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3lattices import linalg
from k3lattices.lattices import (A2, A2_POS, BUILTIN_LATTICES, IntegralLattice,
                                 LatticeParseError, U, U3, lattice_from_json,
                                 load_lattice)

UA2 = BUILTIN_LATTICES["UA2"]
U3A2A2 = BUILTIN_LATTICES["U3A2A2"]


# -- construction -------------------------------------------------------------

def test_constructor_rejects_bad_grams():
    with pytest.raises(ValueError):
        IntegralLattice(((1, 0), (0, 2)))  # odd diagonal
    with pytest.raises(ValueError):
        IntegralLattice(((0, 1), (2, 0)))  # asymmetric
    with pytest.raises(ValueError):
        IntegralLattice(((2, 2), (2, 2)))  # degenerate
    IntegralLattice(((2, 2), (2, 2)), allow_degenerate=True)


def test_rank_zero_lattice():
    zero = IntegralLattice(())
    assert zero.rank == 0
    assert zero.det() == 1
    assert zero.discriminant_group().is_trivial()


# -- inner products -----------------------------------------------------------

def test_inner_product_examples():
    assert U.inner_product((1, 0), (0, 1)) == 1
    for d in (-3, 0, 1, 2, 7, 100):
        assert U.norm((1, d)) == 2 * d
    assert A2.inner_product((1, 0), (1, 0)) == -2


def test_inner_product_symmetric_and_checked():
    rng = random.Random(0)
    for _ in range(50):
        v = [rng.randint(-5, 5) for _ in range(4)]
        w = [rng.randint(-5, 5) for _ in range(4)]
        assert UA2.inner_product(v, w) == UA2.inner_product(w, v)
    with pytest.raises(ValueError):
        U.inner_product((1, 0, 0), (0, 1))


# -- determinant and signature ------------------------------------------------

def test_det_and_signature_examples():
    assert U.det_and_signature() == (-1, (1, 1))
    assert U3.det_and_signature() == (-9, (1, 1))
    assert A2.det_and_signature() == (3, (0, 2))
    assert A2_POS.det_and_signature() == (3, (2, 0))
    assert UA2.det_and_signature() == (-3, (1, 3))


def test_hyperbolic_flags():
    assert U.is_hyperbolic() and U3.is_hyperbolic() and UA2.is_hyperbolic()
    assert not A2.is_hyperbolic()
    assert A2.is_definite() and not U.is_definite()


# -- discriminant groups ------------------------------------------------------

def test_discriminant_group_examples():
    assert U.discriminant_group().invariant_factors == ()
    assert U3.discriminant_group().invariant_factors == (3, 3)
    assert A2.discriminant_group().invariant_factors == (3,)
    assert UA2.discriminant_group().invariant_factors == (3,)
    assert U3A2A2.discriminant_group().invariant_factors == (3, 3, 3, 3)


def test_discriminant_group_symbols():
    assert U.discriminant_group().symbol() == "1"
    assert A2.discriminant_group().symbol() == "Z/3"
    assert U3.discriminant_group().symbol() == "(Z/3)^2"
    assert A2.rescaled(2).discriminant_group().symbol() == "Z/2 + Z/6"


def test_discriminant_generators_have_right_order():
    for lat in (U3, A2, UA2, U3A2A2, A2.rescaled(2), A2.rescaled(3)):
        dg = lat.discriminant_group()
        assert dg.order == abs(lat.det())
        for d, gen in zip(dg.invariant_factors, dg.generators):
            # d * generator lands in the lattice, no smaller multiple does
            for mult in range(1, d):
                assert any((mult * c).denominator != 1 for c in gen)
            assert all((d * c).denominator == 1 for c in gen)


def test_discriminant_form_values_mod_2():
    dg = A2.discriminant_group()
    (q,) = dg.induced_form
    # the generator of A_{A2} has q = -2/3 mod 2, i.e. 4/3
    assert q % 2 == Fraction(4, 3)


def test_is_p_elementary():
    assert U3.is_p_elementary(3)
    assert UA2.is_p_elementary(3)
    assert U.is_p_elementary(2) and U.is_p_elementary(3)
    assert not A2.rescaled(2).is_p_elementary(3)
    assert not U3.is_p_elementary(2)
    with pytest.raises(ValueError):
        U.is_p_elementary(4)


def test_p_elementary_matches_dual_predicate():
    # p-elementary <=> p * (dual lattice) contained in the lattice,
    # i.e. p * gram^{-1} is an integer matrix
    rng = random.Random(1)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 3)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = 2 * rng.randint(-3, 3)
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = rng.randint(-3, 3)
        if linalg.det(g) == 0:
            continue
        lat = IntegralLattice(tuple(tuple(r) for r in g))
        for p in (2, 3, 5):
            inv = linalg.rational_inverse(g)
            dual_in = all((p * x).denominator == 1 for row in inv for x in row)
            assert lat.is_p_elementary(p) == dual_in
        checked += 1


def _unimodular_from_ops(ops, n):
    s = linalg.identity(n)
    for kind, i, j, sign in ops:
        i, j = i % n, j % n
        if kind == 0 and i != j:
            for r in range(n):
                s[r][i] += sign * s[r][j]
        elif kind == 1:
            for r in range(n):
                s[r][i], s[r][j] = s[r][j], s[r][i]
        else:
            for r in range(n):
                s[r][i] = -s[r][i]
    return s


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["U", "U3", "A2", "UA2", "U3A2"]),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 5),
                          st.integers(0, 5), st.sampled_from((-1, 1))),
                max_size=8))
def test_invariant_factors_basis_independent(label, ops):
    lat = BUILTIN_LATTICES[label]
    s = _unimodular_from_ops(ops, lat.rank)
    g2 = linalg.mat_mul(linalg.mat_mul(linalg.transpose(s),
                                       [list(r) for r in lat.gram]), s)
    lat2 = IntegralLattice(tuple(tuple(r) for r in g2))
    assert (lat2.discriminant_group().invariant_factors
            == lat.discriminant_group().invariant_factors)
    assert abs(lat2.det()) == abs(lat.det())
    assert lat2.signature() == lat.signature()


def test_invariant_factors_product_is_det():
    rng = random.Random(2)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 4)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = 2 * rng.randint(-4, 4)
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = rng.randint(-4, 4)
        if linalg.det(g) == 0:
            continue
        lat = IntegralLattice(tuple(tuple(r) for r in g))
        prod = 1
        for f in lat.discriminant_group().invariant_factors:
            prod *= f
        assert prod == abs(lat.det())
        checked += 1


# -- building -----------------------------------------------------------------

def test_rescale():
    assert U.rescaled(3).gram == ((0, 3), (3, 0))
    assert A2.rescaled(-1).gram == A2_POS.gram
    with pytest.raises(ValueError):
        U.rescaled(0)


def test_direct_sum_block_structure():
    s = U.direct_sum(A2)
    assert s.gram == ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 1), (0, 0, 1, -2))
    s2 = A2.direct_sum(A2)
    assert s2.rank == 4 and s2.det() == 9


def test_direct_sum_equals_fibration_gram_after_base_change():
    # basis change F = e, O = f - e, E1, E2 turns the block sum into the
    # Gram matrix of the section/fiber basis
    from k3lattices.polarization import UA2_FIBRATION_GRAM

    s = [[1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    g2 = linalg.mat_mul(linalg.mat_mul(linalg.transpose(s),
                                       [list(r) for r in UA2.gram]), s)
    assert tuple(tuple(r) for r in g2) == UA2_FIBRATION_GRAM


# -- orthogonal complements ---------------------------------------------------

def test_complement_of_u_block():
    comp, primitive = UA2.orthogonal_complement([(1, 0, 0, 0), (0, 1, 0, 0)])
    assert comp.gram == A2.gram
    assert primitive


def test_complement_of_isotropic_sum():
    comp, primitive = U.orthogonal_complement([(1, 1)])
    assert comp.gram == ((-2,),)
    assert primitive


def test_complement_of_imprimitive_span():
    comp, primitive = U.orthogonal_complement([(2, 0)])
    assert not primitive
    assert comp.gram == ((0,),)  # the complement of an isotropic line is itself


def test_complement_rejects_dependent_basis():
    with pytest.raises(ValueError):
        U.orthogonal_complement([(1, 0), (2, 0)])


def test_double_complement_recovers_primitive_sublattice():
    rng = random.Random(3)
    for _ in range(20):
        v = tuple(rng.randint(-3, 3) for _ in range(4))
        if v == (0, 0, 0, 0) or UA2.norm(v) == 0:
            continue
        sub = UA2.complement_sublattice([v])
        if sub.lattice.det() == 0:
            continue
        back = UA2.complement_sublattice(list(sub.basis))
        # the double complement is the saturation of the span of v
        assert back.rank == 1
        w = back.basis[0]
        assert linalg.saturation([list(w)])[1] == 1
        assert all(v[i] * w[j] == v[j] * w[i]  # same line as v
                   for i in range(4) for j in range(4))


# -- JSON ----------------------------------------------------------------------

def test_lattice_from_json():
    lat = lattice_from_json({"label": "test", "gram": [[0, 1], [1, 0]]})
    assert lat.gram == U.gram and lat.label == "test"
    with pytest.raises(LatticeParseError):
        lattice_from_json({"label": "missing"})
    with pytest.raises(LatticeParseError):
        lattice_from_json({"gram": [[1, 0], [0, 1]]})


def test_load_lattice_inline_and_labels(tmp_path):
    assert load_lattice("U3") is U3
    inline = load_lattice('{"label": "x", "gram": [[-2, 1], [1, -2]]}')
    assert inline.gram == A2.gram
    path = tmp_path / "lat.json"
    path.write_text('{"label": "filed", "gram": [[0, 3], [3, 0]]}')
    assert load_lattice(str(path)).gram == U3.gram
    with pytest.raises(LatticeParseError):
        load_lattice("nope")
    with pytest.raises(LatticeParseError):
        load_lattice('{"gram": [[0, 1], [1, 0]')  # truncated JSON
