"""Classification of even rank-2 lattices via binary quadratic forms.

An even rank-2 lattice with Gram matrix [[2a, b], [b, 2c]] is twice the
binary form f = (a, b, c); lattice equivalence is GL_2(Z)-equivalence of
forms.  Definite classes are handled by Gauss reduction, indefinite
classes of non-square discriminant by the classical cycle method, and
indefinite classes of square discriminant k^2 by the normal form
(a, k, 0) with 0 <= a < k.
"""

from dataclasses import dataclass
from math import gcd, isqrt

from . import linalg
from .lattices import IntegralLattice


Form = tuple[int, int, int]


def discriminant(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def form_to_gram(f: Form):
    a, b, c = f
    return ((2 * a, b), (b, 2 * c))


def gram_to_form(gram) -> Form:
    if len(gram) != 2:
        raise ValueError("rank-2 Gram matrix required")
    if gram[0][0] % 2 or gram[1][1] % 2:
        raise ValueError("lattice is not even")
    return (gram[0][0] // 2, gram[0][1], gram[1][1] // 2)


def apply_gl2(f: Form, m) -> Form:
    """Transform f by the substitution (x, y) -> m * (x, y)."""
    a, b, c = f
    (p, q), (r, s) = m
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


# ---------------------------------------------------------------------------
# definite reduction (Gauss)


def reduce_definite(f: Form) -> Form:
    """GL_2(Z)-reduced representative of a positive definite form.

    Unique normal form 0 <= b <= a <= c (taking |b| merges the two
    improperly equivalent SL_2 classes).
    """
    a, b, c = f
    if discriminant(f) >= 0 or a <= 0:
        raise ValueError("positive definite form required")
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            t = -((a - b) // (2 * a))  # ceil((b-a)/2a): shift b into (-a, a]
            c += t * t * a - t * b
            b -= 2 * t * a
            continue
        break
    return (a, abs(b), c)


# ---------------------------------------------------------------------------
# indefinite reduction: cycles (non-square discriminant)


def is_reduced_indefinite(f: Form) -> bool:
    """0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, exactly."""
    a, b, c = f
    d = discriminant(f)
    if b <= 0 or b * b >= d:
        return False
    t = 2 * abs(a)
    if t >= b + 1 and (t - b) * (t - b) >= d:  # need 2|a| - b < sqrt(D)
        return False
    if (t + b) * (t + b) <= d:  # need sqrt(D) < 2|a| + b
        return False
    return True


def _rho(f: Form, d: int, s: int) -> Form:
    """Reduction/neighbor step for indefinite forms of non-square disc d."""
    _, b, c = f
    ac = abs(c)
    r = (-b) % (2 * ac)
    if ac > s:
        if r > ac:
            r -= 2 * ac
    else:
        r += 2 * ac * ((s - r) // (2 * ac))
    return (c, r, (r * r - d) // (4 * c))


def reduce_indefinite(f: Form) -> Form:
    """Some reduced form in the proper cycle of f (non-square disc only)."""
    d = discriminant(f)
    if d <= 0 or linalg.isqrt_exact(d) is not None:
        raise ValueError("positive non-square discriminant required")
    s = isqrt(d)
    for _ in range(10000):
        if is_reduced_indefinite(f):
            return f
        f = _rho(f, d, s)
    raise RuntimeError(f"reduction of {f} did not terminate")


def cycle_of(f: Form) -> list[Form]:
    """The full cycle of reduced forms properly equivalent to f."""
    f0 = reduce_indefinite(f)
    d = discriminant(f0)
    s = isqrt(d)
    out = [f0]
    g = _rho(f0, d, s)
    while g != f0:
        out.append(g)
        g = _rho(g, d, s)
        if len(out) > 100000:
            raise RuntimeError("cycle did not close")
    return out


# ---------------------------------------------------------------------------
# indefinite square discriminant: normal form (a, k, 0), 0 <= a < k


def _primitive_isotropic_lines(f: Form) -> list[tuple[int, int]]:
    a, b, c = f
    k = isqrt(discriminant(f))
    lines = []
    if a == 0:
        lines.append((1, 0))
        g = gcd(c, b)
        lines.append((c // g, -b // g))
    else:
        for sign in (1, -1):
            x, y = -b + sign * k, 2 * a
            g = gcd(x, y)
            lines.append((x // g, y // g))
    return lines


def square_disc_canonical(f: Form) -> Form:
    """Canonical proper representative (a, k, 0), 0 <= a < k, disc = k^2."""
    d = discriminant(f)
    k = linalg.isqrt_exact(d)
    if k is None or k == 0:
        raise ValueError("positive square discriminant required")
    for x0, y0 in _primitive_isotropic_lines(f):
        # unimodular matrix with (x0, y0) as second column kills c
        g, u, v = linalg.xgcd(y0, -x0)  # u*y0 - v*x0 = g = 1
        assert g == 1 and u * y0 - v * x0 == 1
        a2, b2, c2 = apply_gl2(f, ((u, x0), (v, y0)))
        assert c2 == 0 and abs(b2) == k
        if b2 == k:
            return (a2 % k, k, 0)
    raise AssertionError(f"no orientation of {f} produced the +k normal form")


def canonical_indefinite(f: Form) -> Form:
    """Canonical GL_2(Z) representative of an indefinite form."""
    d = discriminant(f)
    if d <= 0:
        raise ValueError("indefinite form required")
    a, b, c = f
    mirror = (a, -b, c)
    if linalg.isqrt_exact(d) is not None:
        return min(square_disc_canonical(f), square_disc_canonical(mirror))
    return min(min(cycle_of(f)), min(cycle_of(mirror)))


# ---------------------------------------------------------------------------
# classes and classification


@dataclass(frozen=True)
class BinaryFormClass:
    """GL_2(Z)-equivalence class of an even rank-2 lattice."""

    reduced_gram: tuple[tuple[int, int], tuple[int, int]]
    definiteness: str  # "positive" | "negative" | "indefinite"

    @property
    def form(self) -> Form:
        return gram_to_form(self.reduced_gram)

    @property
    def det(self) -> int:
        return linalg.det(self.reduced_gram)

    def lattice(self) -> IntegralLattice:
        return IntegralLattice(self.reduced_gram, label=self.label())

    def label(self) -> str | None:
        known = {
            (0, 1, 0): "U",
            (0, 3, 0): "U(3)",
            (-1, -1, -1): "A2",
            (1, 1, 1): "A2(-1)",
        }
        return known.get(self.form)

    def fingerprint(self):
        """Equivalence invariants: (det, signature, discriminant form values)."""
        lat = IntegralLattice(self.reduced_gram)
        return (lat.det(), lat.signature(), discriminant_form_values(lat))


def discriminant_form_values(lat: IntegralLattice) -> tuple:
    """Sorted multiset of the discriminant quadratic form over the whole group."""
    from itertools import product

    dg = lat.discriminant_group()
    if not dg.invariant_factors:
        return ()
    vals = []
    for ts in product(*[range(d) for d in dg.invariant_factors]):
        coords = [sum(t * g[i] for t, g in zip(ts, dg.generators))
                  for i in range(lat.rank)]
        q = sum(coords[i] * lat.gram[i][j] * coords[j]
                for i in range(lat.rank) for j in range(lat.rank))
        vals.append(q % 2)
    return tuple(sorted(vals))


def canonical_class(lat: IntegralLattice) -> BinaryFormClass:
    """Canonical BinaryFormClass of an even nondegenerate rank-2 lattice."""
    f = gram_to_form(lat.gram)
    d = discriminant(f)
    if d == 0:
        raise ValueError("degenerate form")
    if d < 0:
        if f[0] > 0:
            return BinaryFormClass(form_to_gram(reduce_definite(f)), "positive")
        a, b, c = reduce_definite((-f[0], -f[1], -f[2]))
        return BinaryFormClass(form_to_gram((-a, -b, -c)), "negative")
    return BinaryFormClass(form_to_gram(canonical_indefinite(f)), "indefinite")


def rank2_equivalent(l1: IntegralLattice, l2: IntegralLattice) -> bool:
    return canonical_class(l1) == canonical_class(l2)


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _definite_classes(absdet: int) -> list[Form]:
    """Reduced positive definite forms with 4ac - b^2 = absdet."""
    out = []
    amax = isqrt(absdet // 3)
    for a in range(1, amax + 1):
        for b in range(0, a + 1):
            num = absdet + b * b
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c >= a:
                out.append((a, b, c))
    return out


def _indefinite_classes(d: int) -> list[Form]:
    """Canonical representatives of the GL_2 classes of discriminant d > 0."""
    k = linalg.isqrt_exact(d)
    if k is not None:
        reps = {min(square_disc_canonical((a, k, 0)),
                    square_disc_canonical((a, -k, 0))) for a in range(k)}
        return sorted(reps)
    s = isqrt(d)
    reduced = set()
    for b in range(1, s + 1):
        if (b - d) % 2:
            continue
        m = b * b - d  # = 4ac < 0
        if m % 4:
            continue
        ac = m // 4
        for div in _divisors(ac):
            for a in (div, -div):
                c = ac // a
                f = (a, b, c)
                if is_reduced_indefinite(f):
                    reduced.add(f)
    classes = set()
    seen = set()
    for f in sorted(reduced):
        if f in seen:
            continue
        cyc = cycle_of(f)
        seen.update(cyc)
        classes.add(canonical_indefinite(f))
    return sorted(classes)


def classify_rank2_even(det_bound: int, p_filter: int | None = None) -> list[BinaryFormClass]:
    """All even rank-2 lattices with |det| <= det_bound, up to equivalence.

    With p_filter set, only p-elementary classes are returned.  Output is
    deterministic: sorted by (|det|, definiteness, reduced form).
    """
    if det_bound < 1:
        raise ValueError("det_bound must be >= 1")
    out = []
    for absdet in range(1, det_bound + 1):
        if (-absdet) % 4 in (0, 1):  # definite lattices have det = absdet
            for f in _definite_classes(absdet):
                out.append(BinaryFormClass(form_to_gram(f), "positive"))
                a, b, c = f
                out.append(BinaryFormClass(form_to_gram((-a, -b, -c)), "negative"))
        if absdet % 4 in (0, 1):  # indefinite lattices have det = -absdet
            for f in _indefinite_classes(absdet):
                out.append(BinaryFormClass(form_to_gram(f), "indefinite"))
    if p_filter is not None:
        out = [cl for cl in out if IntegralLattice(cl.reduced_gram).is_p_elementary(p_filter)]
    order = {"indefinite": 0, "positive": 1, "negative": 2}
    out.sort(key=lambda cl: (abs(cl.det), order[cl.definiteness], cl.form))
    return out
