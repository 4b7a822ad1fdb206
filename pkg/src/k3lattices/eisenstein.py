"""Order-3 isometries and Eisenstein lattices.

An Eisenstein lattice is a lattice together with a fixed-point-free
isometry of order 3 (equivalently, a module over Z[zeta_3]); if the
isometry also acts trivially on the discriminant group we call the pair
starred.  Two classical facts are exercised throughout: such a lattice
has even rank, and in the starred case it is 3-elementary.
"""

import json
from dataclasses import dataclass
from importlib import resources
from itertools import product

from . import linalg
from .lattices import BUILTIN_LATTICES, IntegralLattice, Sublattice

#: rank of the degree-2 cohomology lattice of a K3 surface
K3_LATTICE_RANK = 22

#: largest order of a finite purely non-symplectic automorphism group on a K3
MAX_AUTOMORPHISM_ORDER = 66

#: order-3 rotation of the hexagonal plane A2
A2_ROTATION = ((0, -1), (1, -1))


def _as_square(matrix, n: int):
    m = tuple(tuple(int(x) for x in row) for row in matrix)
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"matrix must be {n}x{n}")
    return m


def is_isometry(lattice: IntegralLattice, matrix) -> bool:
    """True iff matrix^T * gram * matrix == gram."""
    m = _as_square(matrix, lattice.rank)
    g = [list(r) for r in lattice.gram]
    mt = linalg.transpose(m)
    return linalg.mat_mul(linalg.mat_mul(mt, g), [list(r) for r in m]) == g


def order_of(matrix, cap: int = MAX_AUTOMORPHISM_ORDER):
    """Least m <= cap with matrix^m = 1, else the string 'exceeds cap'."""
    n = len(matrix)
    m = _as_square(matrix, n)
    if abs(linalg.det(m)) != 1:
        raise ValueError("matrix is not invertible over the integers")
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    power = ident
    for k in range(1, cap + 1):
        power = linalg.mat_mul(power, m)
        if power == ident:
            return k
    return "exceeds cap"


@dataclass(frozen=True)
class Isometry:
    """An integer matrix preserving the Gram form of its lattice."""

    lattice: IntegralLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = _as_square(self.matrix, self.lattice.rank)
        object.__setattr__(self, "matrix", m)
        if not is_isometry(self.lattice, m):
            raise ValueError("matrix does not preserve the Gram form")

    def order(self, cap: int = MAX_AUTOMORPHISM_ORDER):
        return order_of(self.matrix, cap)

    def apply(self, v):
        return tuple(linalg.mat_vec(self.matrix, list(v)))


def isometry_from_json(lattice: IntegralLattice, obj) -> Isometry:
    """Build an isometry from {"matrix": [[int]]}."""
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValueError("expected a JSON object with key 'matrix'")
    return Isometry(lattice, obj["matrix"])


def fixed_sublattice(lattice: IntegralLattice, matrix) -> Sublattice:
    """Saturated sublattice of vectors fixed by the isometry."""
    m = _as_square(matrix, lattice.rank)
    if not is_isometry(lattice, m):
        raise ValueError("matrix is not an isometry of the lattice")
    ident = linalg.identity(lattice.rank)
    kern = linalg.kernel_basis(linalg.mat_sub([list(r) for r in m], ident))
    return lattice.sublattice(kern)


def is_eisenstein_lattice(lattice: IntegralLattice, matrix) -> bool:
    """Order 3 and no nonzero fixed vector ("point-free")."""
    m = _as_square(matrix, lattice.rank)
    if not is_isometry(lattice, m):
        return False
    if order_of(m, cap=3) != 3:
        return False
    return fixed_sublattice(lattice, m).rank == 0


@dataclass(frozen=True)
class DiscriminantAction:
    """Induced action of an isometry on the discriminant group."""

    invariant_factors: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]  # images of generators, generator coords
    is_identity: bool


def discriminant_action(lattice: IntegralLattice, matrix) -> DiscriminantAction:
    m = _as_square(matrix, lattice.rank)
    if not is_isometry(lattice, m):
        raise ValueError("matrix is not an isometry of the lattice")
    dg = lattice.discriminant_group()
    rows = []
    identity = True
    for j, gen in enumerate(dg.generators):
        image = [sum(m[r][c] * gen[c] for c in range(lattice.rank))
                 for r in range(lattice.rank)]
        coords = dg.decompose(image)
        rows.append(coords)
        expected = tuple(
            1 % d if i == j else 0
            for i, d in enumerate(dg.invariant_factors)
        )
        if coords != expected:
            identity = False
    return DiscriminantAction(dg.invariant_factors, tuple(rows), identity)


def is_starred(lattice: IntegralLattice, matrix) -> bool:
    """Eisenstein lattice acting trivially on the discriminant group."""
    return (is_eisenstein_lattice(lattice, matrix)
            and discriminant_action(lattice, matrix).is_identity)


@dataclass(frozen=True)
class EisensteinReport:
    """Pass/fail record for the rank-parity and 3-elementarity facts."""

    rank: int
    rank_even: bool
    is_starred: bool
    three_elementary: bool | None  # only asserted for starred lattices
    passed: bool


def check_eisenstein_lemma(lattice: IntegralLattice, matrix) -> EisensteinReport:
    """Verify the two lemma clauses on a single Eisenstein lattice."""
    if not is_eisenstein_lattice(lattice, matrix):
        raise ValueError("(lattice, matrix) is not an Eisenstein lattice")
    rank_even = lattice.rank % 2 == 0
    starred = discriminant_action(lattice, matrix).is_identity
    three_elem = lattice.is_p_elementary(3) if starred else None
    passed = rank_even and (three_elem is not False)
    return EisensteinReport(lattice.rank, rank_even, starred, three_elem, passed)


# ---------------------------------------------------------------------------
# generated test instances


def random_unimodular(rng, n: int, entry_bound: int = 5, steps: int = 12):
    """Random element of GL_n(Z) with entries bounded by entry_bound.

    Built from elementary operations, discarding any step that would
    push an entry beyond the bound; deterministic given the rng state.
    """
    s = linalg.identity(n)
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == 0 and i != j:
            q = rng.choice((-1, 1))
            cand = [row[:] for row in s]
            for r in range(n):
                cand[r][i] += q * cand[r][j]
            if all(abs(x) <= entry_bound for row in cand for x in row):
                s = cand
        elif kind == 1 and i != j:
            for row in s:
                row[i], row[j] = row[j], row[i]
        elif kind == 2:
            for row in s:
                row[i] = -row[i]
    return s


def random_eisenstein_lattice(rng, max_blocks: int = 2, max_scale: int = 3,
                              entry_bound: int = 5):
    """A conjugated direct sum of scaled hexagonal planes with its rotation.

    Returns (lattice, matrix); the pair is an Eisenstein lattice by
    construction, with varied discriminants.
    """
    blocks = rng.randint(1, max_blocks)
    n = 2 * blocks
    gram = [[0] * n for _ in range(n)]
    rot = [[0] * n for _ in range(n)]
    for b in range(blocks):
        scale = rng.randint(1, max_scale)
        base = 2 * b
        a2 = ((-2 * scale, scale), (scale, -2 * scale))
        for i in range(2):
            for j in range(2):
                gram[base + i][base + j] = a2[i][j]
                rot[base + i][base + j] = A2_ROTATION[i][j]
    s = random_unimodular(rng, n, entry_bound=entry_bound)
    sinv = linalg.integer_inverse(s)
    gram2 = linalg.mat_mul(linalg.mat_mul(linalg.transpose(s), gram), s)
    rot2 = linalg.mat_mul(linalg.mat_mul(sinv, rot), s)
    lat = IntegralLattice(tuple(tuple(r) for r in gram2))
    assert is_eisenstein_lattice(lat, rot2)
    return lat, tuple(tuple(r) for r in rot2)


# ---------------------------------------------------------------------------
# isometry groups of definite lattices (small ranks)


def definite_isometries(lattice: IntegralLattice):
    """All isometries of a definite lattice, by short-vector column search.

    Column i of an isometry must be a vector of norm gram[i][i]; for a
    definite form there are finitely many, found by bounded enumeration.
    """
    pos, neg = lattice.signature()
    if pos and neg:
        raise ValueError("definite lattice required")
    sign = 1 if neg == 0 else -1
    g = [[sign * x for x in row] for row in lattice.gram]  # positive definite
    n = lattice.rank
    from .polarization import _enumerate_ellipsoid  # exact definite enumeration
    from fractions import Fraction

    candidates = {}
    for i in range(n):
        target = sign * lattice.gram[i][i]
        vecs = [v for v in _enumerate_ellipsoid(g, [Fraction(0)] * n, Fraction(target))
                if sum(v[r] * g[r][c] * v[c] for r in range(n) for c in range(n)) == target]
        candidates[i] = vecs
    out = []
    for cols in product(*[candidates[i] for i in range(n)]):
        m = [[cols[j][i] for j in range(n)] for i in range(n)]
        if is_isometry(lattice, m):
            out.append(tuple(tuple(r) for r in m))
    return out


def admits_eisenstein_structure(lattice: IntegralLattice) -> bool:
    """Whether a definite lattice has a point-free order-3 isometry."""
    return any(
        is_eisenstein_lattice(lattice, m) for m in definite_isometries(lattice)
    )


# ---------------------------------------------------------------------------
# small K3 numerology and the fixed-locus table


def k3_numerology(rank_t: int) -> tuple[int, int]:
    """(Picard number, moduli dimension) from the transcendental rank.

    rho = 22 - rank_t and the family of marked surfaces with the order-3
    symmetry has dimension rank_t/2 - 1 = 10 - rho/2.  The rank must be
    even: the transcendental lattice of such a surface is Eisenstein.
    """
    if rank_t % 2 != 0:
        raise ValueError("transcendental rank must be even")
    if not 2 <= rank_t <= 20:
        raise ValueError("transcendental rank must lie in 2..20")
    rho = K3_LATTICE_RANK - rank_t
    return rho, 10 - rho // 2


@dataclass(frozen=True)
class FixedLatticeRow:
    """One row of the fixed-locus table: n points, k curves, invariant lattice."""

    points: int
    curves: int
    lattice_label: str
    lattice: IntegralLattice
    model_kind: str


def _load_table() -> tuple[FixedLatticeRow, ...]:
    data = resources.files("k3lattices").joinpath("data/order3_fixed_table.json")
    rows = json.loads(data.read_text())
    out = []
    for row in rows:
        out.append(FixedLatticeRow(
            points=row["points"],
            curves=row["curves"],
            lattice_label=row["lattice"],
            lattice=BUILTIN_LATTICES[row["lattice"]],
            model_kind=row["model"],
        ))
    return tuple(out)


FIXED_LATTICE_TABLE = _load_table()


def fixed_lattice_table(points: int, curves: int) -> FixedLatticeRow | None:
    """Table row for a fixed locus of n points and k curves, or None."""
    for row in FIXED_LATTICE_TABLE:
        if row.points == points and row.curves == curves:
            return row
    return None
