"""Even integral lattices: Gram forms, discriminant groups, sublattices.

A lattice is a free Z-module with a symmetric integer-valued bilinear
form, represented by its Gram matrix in a fixed basis.  Vectors are
plain integer sequences of coordinates in that basis.  All invariants
(determinant, signature, discriminant group) are computed exactly.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json

from . import linalg


class LatticeParseError(ValueError):
    """Raised when a lattice description (JSON or label) cannot be parsed."""


def _as_gram(gram):
    g = tuple(tuple(int(x) for x in row) for row in gram)
    n = len(g)
    if any(len(row) != n for row in g):
        raise ValueError("Gram matrix must be square")
    if not linalg.is_symmetric(g):
        raise ValueError("Gram matrix must be symmetric")
    if any(g[i][i] % 2 != 0 for i in range(n)):
        raise ValueError("lattice must be even: odd diagonal entry in Gram matrix")
    return g


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite group L*/L with its induced quadratic form.

    invariant_factors: d_1 | d_2 | ... (each > 1); empty for unimodular L.
    generators: coordinates of lifted generators in the rational span of
    the lattice basis; d_i times the i-th generator lies in L.
    induced_form: value of the discriminant quadratic form on each
    generator, as a rational taken mod 2.
    """

    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    induced_form: tuple[Fraction, ...]
    _transform: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    _diagonal: tuple[int, ...] = field(repr=False, default=())
    _gram: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def symbol(self) -> str:
        """Human-readable shape, e.g. '1', 'Z/3', '(Z/3)^2', 'Z/2 + Z/6'."""
        if not self.invariant_factors:
            return "1"
        parts = []
        for d in sorted(set(self.invariant_factors)):
            k = self.invariant_factors.count(d)
            parts.append(f"Z/{d}" if k == 1 else f"(Z/{d})^{k}")
        return " + ".join(parts)

    def decompose(self, coords) -> tuple[int, ...]:
        """Residues of a dual vector (rational coords) on the generators."""
        g = self._gram
        m = [sum(Fraction(gij) * Fraction(x) for gij, x in zip(row, coords)) for row in g]
        ints = []
        for x in m:
            if x.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            ints.append(int(x))
        full = [sum(u * mi for u, mi in zip(row, ints)) for row in self._transform]
        return tuple(
            full[i] % self._diagonal[i]
            for i in range(len(self._diagonal))
            if self._diagonal[i] > 1
        )


@dataclass(frozen=True)
class IntegralLattice:
    """Even nondegenerate lattice given by a symmetric integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    label: str | None = None
    allow_degenerate: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        g = _as_gram(self.gram)
        object.__setattr__(self, "gram", g)
        if not self.allow_degenerate and g and linalg.det(g) == 0:
            raise ValueError("degenerate Gram matrix (use allow_degenerate to bypass)")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def __repr__(self):
        name = self.label or "lattice"
        return f"IntegralLattice({name}, rank={self.rank}, gram={list(map(list, self.gram))})"

    # -- basic form evaluations ------------------------------------------

    def _check_vec(self, v):
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise ValueError(f"vector has length {len(v)}, expected rank {self.rank}")
        return v

    def inner_product(self, v, w) -> int:
        v = self._check_vec(v)
        w = self._check_vec(w)
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, v) -> int:
        """Self-intersection v.v."""
        return self.inner_product(v, v)

    # -- invariants -------------------------------------------------------

    def det(self) -> int:
        return linalg.det(self.gram)

    def signature(self) -> tuple[int, int]:
        if self.rank == 0:
            return (0, 0)
        return linalg.signature(self.gram)

    def det_and_signature(self) -> tuple[int, tuple[int, int]]:
        d = self.det()
        if d == 0:
            raise ValueError("degenerate Gram matrix has no signature")
        return d, self.signature()

    def is_hyperbolic(self) -> bool:
        """Signature (1, rank-1)."""
        return self.rank >= 1 and self.signature() == (1, self.rank - 1)

    def is_definite(self) -> bool:
        pos, neg = self.signature()
        return pos == 0 or neg == 0

    def discriminant_group(self) -> DiscriminantGroup:
        if self.rank == 0:
            return DiscriminantGroup((), (), (), (), (), ())
        if self.det() == 0:
            raise ValueError("degenerate lattice has no discriminant group")
        d, u, _ = linalg.smith_normal_form(self.gram)
        uinv = linalg.integer_inverse(u)
        ginv = linalg.rational_inverse(self.gram)
        gens = []
        forms = []
        factors = []
        for i, di in enumerate(d):
            if di <= 1:
                continue
            factors.append(di)
            func = [uinv[r][i] for r in range(self.rank)]  # functional vector
            coords = tuple(
                sum(ginv[r][c] * func[c] for c in range(self.rank))
                for r in range(self.rank)
            )
            q = sum(
                coords[r] * self.gram[r][c] * coords[c]
                for r in range(self.rank) for c in range(self.rank)
            )
            gens.append(coords)
            forms.append(q % 2)
        return DiscriminantGroup(
            tuple(factors), tuple(gens), tuple(forms),
            tuple(tuple(row) for row in u), tuple(d), self.gram,
        )

    def is_p_elementary(self, p: int) -> bool:
        """True iff the discriminant group is a sum of copies of Z/p.

        The trivial group counts as p-elementary for every prime p.
        """
        if not linalg.is_prime(p):
            raise ValueError(f"{p} is not prime")
        return all(f == p for f in self.discriminant_group().invariant_factors)

    # -- constructions ----------------------------------------------------

    def rescaled(self, n: int) -> "IntegralLattice":
        if n == 0:
            raise ValueError("rescaling factor must be nonzero")
        g = tuple(tuple(n * x for x in row) for row in self.gram)
        label = f"{self.label}({n})" if self.label else None
        return IntegralLattice(g, label=label)

    def direct_sum(self, other: "IntegralLattice") -> "IntegralLattice":
        n, m = self.rank, other.rank
        g = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        label = None
        if self.label and other.label:
            label = f"{self.label}+{other.label}"
        return IntegralLattice(tuple(tuple(row) for row in g), label=label)

    # -- sublattices ------------------------------------------------------

    def sublattice(self, basis_columns, allow_degenerate=True) -> "Sublattice":
        cols = [self._check_vec(v) for v in basis_columns]
        induced = [
            [self.inner_product(v, w) for w in cols] for v in cols
        ]
        lat = IntegralLattice(tuple(tuple(r) for r in induced),
                              allow_degenerate=allow_degenerate)
        return Sublattice(self, tuple(cols), lat)

    def orthogonal_complement(self, basis) -> tuple["IntegralLattice", bool]:
        """Saturated orthogonal complement of the span of `basis`.

        Returns (complement with induced Gram, whether the input span was
        primitive).  The complement of a span containing isotropic
        directions can be degenerate; it is returned as-is.
        """
        sub = self.complement_sublattice(basis)
        cols = [self._check_vec(v) for v in basis]
        _, index = linalg.saturation(cols)
        return sub.lattice, index == 1

    def complement_sublattice(self, basis) -> "Sublattice":
        cols = [self._check_vec(v) for v in basis]
        b = [[col[i] for col in cols] for i in range(self.rank)]  # n x k
        if linalg.rank(b) != len(cols):
            raise ValueError("basis vectors are linearly dependent")
        bt_g = linalg.mat_mul(linalg.transpose(b), self.gram)  # k x n
        kern = linalg.kernel_basis(bt_g)
        return self.sublattice(kern)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of an ambient lattice, with basis in ambient coordinates."""

    ambient: IntegralLattice
    basis: tuple[tuple[int, ...], ...]
    lattice: IntegralLattice

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_primitive(self) -> bool:
        if not self.basis:
            return True
        _, index = linalg.saturation(list(self.basis))
        return index == 1


# ---------------------------------------------------------------------------
# standard lattices and the label registry


U = IntegralLattice(((0, 1), (1, 0)), label="U")
U3 = IntegralLattice(((0, 3), (3, 0)), label="U(3)")
# Negative definite convention: with this sign U+A2 is hyperbolic of
# signature (1, 3), the Picard lattice of an elliptic K3 with a type IV
# fiber.  The positive form is then called A2(-1).
A2 = IntegralLattice(((-2, 1), (1, -2)), label="A2")
A2_POS = IntegralLattice(((2, -1), (-1, 2)), label="A2(-1)")

BUILTIN_LATTICES = {
    "U": U,
    "U3": U3,
    "A2": A2,
    "A2(-1)": A2_POS,
    "UA2": U.direct_sum(A2),
    "UA2A2": U.direct_sum(A2).direct_sum(A2),
    "U3A2": U3.direct_sum(A2),
    "U3A2A2": U3.direct_sum(A2).direct_sum(A2),
}


def lattice_from_json(obj) -> IntegralLattice:
    """Build a lattice from {"label": ..., "gram": [[int]]}."""
    if not isinstance(obj, dict):
        raise LatticeParseError(f"expected a JSON object, got {type(obj).__name__}")
    if "gram" not in obj:
        raise LatticeParseError("missing required key 'gram'")
    try:
        return IntegralLattice(obj["gram"], label=obj.get("label"))
    except (TypeError, ValueError) as exc:
        raise LatticeParseError(f"invalid Gram matrix: {exc}") from exc


def load_lattice(spec: str) -> IntegralLattice:
    """Resolve a lattice from a registry label, a JSON file path, or inline JSON."""
    if spec in BUILTIN_LATTICES:
        return BUILTIN_LATTICES[spec]
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            with open(spec) as fh:
                text = fh.read()
        except OSError as exc:
            raise LatticeParseError(
                f"'{spec}' is not a built-in label ({', '.join(BUILTIN_LATTICES)}) "
                f"and could not be read as a file: {exc}"
            ) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeParseError(f"invalid JSON at position {exc.pos}: {exc.msg}") from exc
    return lattice_from_json(obj)
