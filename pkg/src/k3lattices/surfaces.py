"""The two explicit K3 models and their point counts over finite fields.

Counts target the stated affine/projective equations, not a smooth
resolution: every result is stamped with the convention it used.  The
kernels are pure functions of a slab of the point domain, so partitioned
runs combine by summation independently of the partition shape.
"""

import json
from dataclasses import dataclass

from .finitefield import ExtensionField, PrimeField, field_build
from .linalg import is_prime
from .polarization import BudgetExceeded

#: default cap on point evaluations per counting call
DEFAULT_EVAL_BUDGET = 10 ** 9


@dataclass(frozen=True)
class WeierstrassK3:
    """y^2 = x^3 + p(t) with deg p <= 12, over a prime field.

    coeffs holds p(t) low degree first.  A K3 needs degree 12 with
    simple roots; that is reported by `has_simple_roots`, not required.
    """

    p: int
    coeffs: tuple[int, ...]

    kind = "weierstrass"

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        c = tuple(int(x) for x in self.coeffs)
        if len(c) > 13:
            raise ValueError("p(t) must have degree <= 12")
        if all(x % self.p == 0 for x in c):
            raise ValueError("p(t) vanishes identically mod p")
        object.__setattr__(self, "coeffs", c)

    def rhs_poly(self, field):
        return [field.element(c) for c in self.coeffs]

    def has_simple_roots(self, field) -> bool:
        """gcd(p, p') trivial over the field, i.e. no repeated roots."""
        from .finitefield import _poly_gcd, _poly_trim

        if isinstance(field, ExtensionField):
            raise NotImplementedError("checked over the prime field only")
        c = [x % self.p for x in self.coeffs]
        dc = [(i * c[i]) % self.p for i in range(1, len(c))]
        return len(_poly_gcd(_poly_trim(c), _poly_trim(dc), self.p)) <= 1


@dataclass(frozen=True)
class DoubleSextic:
    """w^2 = f6(x0, x1, x2) with f6 homogeneous of degree 6, over F_p.

    coeffs maps exponent triples (i, j, k), i+j+k = 6, to integers.
    """

    p: int
    coeffs: tuple[tuple[tuple[int, int, int], int], ...]

    kind = "double_sextic"

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        norm = []
        for mono, c in sorted(dict(self.coeffs).items()):
            i, j, k = mono
            if i < 0 or j < 0 or k < 0 or i + j + k != 6:
                raise ValueError(f"monomial {mono} is not degree-6")
            norm.append(((i, j, k), int(c)))
        if all(c % self.p == 0 for _, c in norm):
            raise ValueError("sextic vanishes identically mod p")
        object.__setattr__(self, "coeffs", tuple(norm))


SurfaceModel = WeierstrassK3 | DoubleSextic


# -- the named surfaces ------------------------------------------------------

def x66(p: int) -> WeierstrassK3:
    """y^2 = x^3 + t^12 - t, the unique K3 with a cyclic symmetry of order 66."""
    coeffs = [0] * 13
    coeffs[12] = 1
    coeffs[1] = -1
    return WeierstrassK3(p, tuple(coeffs))


def x21(p: int) -> DoubleSextic:
    """The double plane branched over F6(x0,x1) + F3(x0,x1)*x2^3 + 2*x2^6."""
    f6 = {
        (6, 0): -1, (5, 1): 2, (4, 2): -1, (3, 3): -2,
        (2, 4): -1, (1, 5): 1, (0, 6): -1,
    }
    f3 = {(2, 1): 2, (0, 3): -1}
    coeffs = {}
    for (i, j), c in f6.items():
        coeffs[(i, j, 0)] = c
    for (i, j), c in f3.items():
        coeffs[(i, j, 3)] = c
    coeffs[(0, 0, 6)] = 2
    return DoubleSextic(p, tuple(sorted(coeffs.items())))


SURFACE_PRESETS = {"X66": x66, "X21": x21}


def surface_from_json(obj) -> SurfaceModel:
    """Build a surface from {"kind": ..., "p": ..., "coeffs": {...}}.

    Weierstrass coefficient keys are degree strings ("0".."12"); sextic
    keys are comma-separated exponent triples ("i,j,k").
    """
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    kind = obj.get("kind")
    p = obj.get("p")
    raw = obj.get("coeffs")
    if kind not in ("weierstrass", "double_sextic"):
        raise ValueError("kind must be 'weierstrass' or 'double_sextic'")
    if not isinstance(p, int) or not isinstance(raw, dict):
        raise ValueError("surface JSON needs integer 'p' and object 'coeffs'")
    if kind == "weierstrass":
        coeffs = [0] * 13
        for key, c in raw.items():
            coeffs[int(key)] = int(c)
        return WeierstrassK3(p, tuple(coeffs))
    coeffs = {}
    for key, c in raw.items():
        i, j, k = (int(x) for x in key.split(","))
        coeffs[(i, j, k)] = int(c)
    return DoubleSextic(p, tuple(sorted(coeffs.items())))


def load_surface(spec: str, p: int | None = None) -> SurfaceModel:
    """Resolve a surface from a preset name, a JSON file path, or inline JSON."""
    if spec in SURFACE_PRESETS:
        if p is None:
            raise ValueError(f"preset '{spec}' needs a prime p")
        return SURFACE_PRESETS[spec](p)
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            with open(spec) as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError(
                f"'{spec}' is not a preset ({', '.join(SURFACE_PRESETS)}) and "
                f"could not be read as a file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON at position {exc.pos}: {exc.msg}") from exc
    surface = surface_from_json(obj)
    if p is not None and surface.p != p:
        raise ValueError(f"surface JSON has p={surface.p}, flag says p={p}")
    return surface


def surface_to_json(s: SurfaceModel) -> dict:
    if isinstance(s, WeierstrassK3):
        return {"kind": s.kind, "p": s.p,
                "coeffs": {str(i): c for i, c in enumerate(s.coeffs) if c}}
    return {"kind": s.kind, "p": s.p,
            "coeffs": {f"{i},{j},{k}": c for (i, j, k), c in s.coeffs if c}}


# -- counting ----------------------------------------------------------------


@dataclass(frozen=True)
class CountResult:
    """A point count stamped with the convention that produced it."""

    value: int
    kind: str
    convention: str
    p: int
    k: int
    q: int
    evaluations: int

    def to_json(self):
        return {
            "count": self.value,
            "kind": self.kind,
            "convention": self.convention,
            "p": self.p,
            "k": self.k,
            "q": self.q,
            "evaluations": self.evaluations,
        }


def _check_partition(part, nparts):
    if nparts < 1 or not 0 <= part < nparts:
        raise ValueError("need 0 <= part < nparts")


def _chi_table(field):
    return {e: field.chi(e) for e in field.elements()}


def _projective_reps(field):
    """Fixed-order representatives of the projective plane over the field."""
    one = field.one
    zero = field.zero
    for y in field.elements():
        for z in field.elements():
            yield (one, y, z)
    for z in field.elements():
        yield (zero, one, z)
    yield (zero, zero, one)


def count_double_sextic(surface: DoubleSextic, field, part: int = 0,
                        nparts: int = 1, budget: int = DEFAULT_EVAL_BUDGET) -> CountResult:
    """Points of w^2 = f6 over the projective plane: sum of 1 + chi(f6(P)).

    chi(c^2 * v) = chi(v) makes the summand independent of the chosen
    representative.  With nparts > 1 only the slab part (mod nparts) of
    the fixed representative ordering is summed.
    """
    if field.p == 2:
        raise ValueError("character-sum counting needs odd characteristic")
    if field.p != surface.p:
        raise ValueError("field characteristic differs from the surface's prime")
    _check_partition(part, nparts)
    q = field.q
    total_pts = q * q + q + 1
    if total_pts > budget:
        raise BudgetExceeded(
            f"{total_pts} point evaluations exceed budget {budget}; "
            "pass a larger budget to run anyway")
    chi = _chi_table(field)
    consts = [(mono, field.element(c)) for mono, c in surface.coeffs]
    # per-coordinate power tables up to degree 6
    powers = {}
    for e in field.elements():
        row = [field.one]
        for _ in range(6):
            row.append(field.mul(row[-1], e))
        powers[e] = row
    value = 0
    evals = 0
    for idx, (a, b, c) in enumerate(_projective_reps(field)):
        if idx % nparts != part:
            continue
        pa, pb, pc = powers[a], powers[b], powers[c]
        acc = field.zero
        for (i, j, k), coeff in consts:
            term = field.mul(coeff, field.mul(pa[i], field.mul(pb[j], pc[k])))
            acc = field.add(acc, term)
        value += 1 + chi[acc]
        evals += 1
    return CountResult(value, surface.kind, "projective-character-sum",
                       field.p, field.k, q, evals)


def count_weierstrass(surface: WeierstrassK3, field, convention: str = "affine",
                      part: int = 0, nparts: int = 1,
                      budget: int = DEFAULT_EVAL_BUDGET) -> CountResult:
    """Count {(x, y, t) : y^2 = x^3 + p(t)}; fibers are swept in t-slabs.

    "affine" counts solutions in the affine cube; "with_infinity" adds
    the section point of each affine fiber (q extra points).  The fiber
    over t = infinity of the degree-12 model is excluded by both
    conventions.
    """
    if convention not in ("affine", "with_infinity"):
        raise ValueError("convention must be 'affine' or 'with_infinity'")
    if field.p in (2, 3):
        raise ValueError("counting needs characteristic at least 5")
    if field.p != surface.p:
        raise ValueError("field characteristic differs from the surface's prime")
    _check_partition(part, nparts)
    q = field.q
    if q * q > budget:
        raise BudgetExceeded(
            f"{q * q} point evaluations exceed budget {budget}; "
            "pass a larger budget to run anyway")
    chi = _chi_table(field)
    cubes = {e: field.mul(e, field.mul(e, e)) for e in field.elements()}
    rhs = surface.rhs_poly(field)
    value = 0
    evals = 0
    for idx, t in enumerate(field.elements()):
        if idx % nparts != part:
            continue
        pt = field.zero
        for coeff in reversed(rhs):
            pt = field.add(field.mul(pt, t), coeff)
        fiber = 0
        for x in field.elements():
            fiber += 1 + chi[field.add(cubes[x], pt)]
            evals += 1
        if convention == "with_infinity":
            fiber += 1
        value += fiber
    return CountResult(value, surface.kind, convention,
                       field.p, field.k, q, evals)


def count_surface(surface: SurfaceModel, field, convention: str = "affine",
                  part: int = 0, nparts: int = 1,
                  budget: int = DEFAULT_EVAL_BUDGET) -> CountResult:
    if isinstance(surface, DoubleSextic):
        return count_double_sextic(surface, field, part, nparts, budget)
    return count_weierstrass(surface, field, convention, part, nparts, budget)


def combine_counts(parts) -> CountResult:
    """Sum partial counts from a partitioned run (order-independent)."""
    parts = list(parts)
    first = parts[0]
    if any((p.kind, p.convention, p.q) != (first.kind, first.convention, first.q)
           for p in parts):
        raise ValueError("cannot combine counts with different conventions")
    return CountResult(sum(p.value for p in parts), first.kind,
                       first.convention, first.p, first.k, first.q,
                       sum(p.evaluations for p in parts))


def _count_slab(surface_json, k, convention, part, nparts, budget):
    """Process-pool worker: rebuild the surface and field, count one slab."""
    surface = surface_from_json(surface_json)
    field = field_build(surface.p, k)
    return count_surface(surface, field, convention, part, nparts, budget)


def count_parallel(surface: SurfaceModel, k: int, convention: str,
                   nparts: int, budget: int = DEFAULT_EVAL_BUDGET) -> CountResult:
    """Partition the point domain over a process pool and combine by sum."""
    if nparts < 2:
        return count_surface(surface, field_build(surface.p, k), convention,
                             budget=budget)
    from concurrent.futures import ProcessPoolExecutor

    sjson = surface_to_json(surface)
    with ProcessPoolExecutor(max_workers=nparts) as pool:
        futures = [pool.submit(_count_slab, sjson, k, convention, i, nparts, budget)
                   for i in range(nparts)]
        return combine_counts(f.result() for f in futures)
