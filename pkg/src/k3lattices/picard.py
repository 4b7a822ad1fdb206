"""Frobenius traces and the point-counting upper bound for Picard numbers.

From counts N_k over F_{q^k} one gets traces t_k = N_k - 1 - q^{2k} of
Frobenius powers on the 22-dimensional degree-2 cohomology.  Newton's
identities plus the functional equation reconstruct the candidate
characteristic polynomials, and the number of roots of the form
q * (root of unity) bounds the Picard number of the reduction from
above.  Everything is exact; polynomials are integer coefficient lists,
low degree first.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

#: dimension of the degree-2 cohomology of a K3 surface
H2_RANK = 22

#: default bound on root-of-unity orders, the maximal K3 automorphism order
DEFAULT_CONDUCTOR = 66


class TraceError(ValueError):
    """Inconsistent counts or traces (Weil bound violation, bad input)."""


class ReconstructionError(ValueError):
    """Trace data does not come from an integral characteristic polynomial."""


@dataclass(frozen=True)
class TraceSequence:
    """Counts N_k over F_{q^k} with the derived Frobenius traces."""

    q: int
    counts: tuple[int, ...]
    traces: tuple[int, ...]

    def __len__(self):
        return len(self.traces)


def trace_sequence(counts, q: int) -> TraceSequence:
    """Derive traces t_k = N_k - 1 - q^{2k} and enforce the Weil bound.

    A violation of |t_k| <= 22 q^k flags an upstream counting bug or a
    model that is not smooth at this prime.
    """
    if q < 2:
        raise TraceError("q must be a prime power >= 2")
    counts = tuple(int(n) for n in counts)
    if not counts:
        raise TraceError("at least one count is required")
    traces = []
    for k, n in enumerate(counts, start=1):
        t = n - 1 - q ** (2 * k)
        if abs(t) > H2_RANK * q ** k:
            raise TraceError(
                f"|t_{k}| = {abs(t)} violates the Weil bound {H2_RANK} * q^{k} "
                f"= {H2_RANK * q ** k}: counting bug or non-smooth model")
        traces.append(t)
    return TraceSequence(q, counts, tuple(traces))


# ---------------------------------------------------------------------------
# integer polynomial helpers (low degree first)


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pow(a, n):
    out = [1]
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_divides(den, num):
    """Exact quotient num/den over Z, or None (den monic-leading assumed nonzero)."""
    num = list(num)
    den = list(den)
    while num and num[-1] == 0:
        num.pop()
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError
    if not num:
        return []
    if len(num) < len(den):
        return None
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        lead = num[i + len(den) - 1]
        if lead % den[-1]:
            return None
        c = lead // den[-1]
        out[i] = c
        for j, y in enumerate(den):
            num[i + j] -= c * y
    return out if all(x == 0 for x in num) else None


_CYCLOTOMIC_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic(n: int):
    """Coefficients of the n-th cyclotomic polynomial."""
    if n not in _CYCLOTOMIC_CACHE:
        # x^n - 1 divided by all proper cyclotomic factors
        num = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                num = poly_divides(cyclotomic(d), num)
        _CYCLOTOMIC_CACHE[n] = tuple(num)
    return list(_CYCLOTOMIC_CACHE[n])


def scaled_cyclotomic(n: int, q: int):
    """q^phi(n) * Phi_n(T/q): the integer polynomial with roots q * zeta_n."""
    c = cyclotomic(n)
    deg = len(c) - 1
    return [coeff * q ** (deg - i) for i, coeff in enumerate(c)]


def power_sums_from_poly(monic, r: int):
    """First r power sums of the roots of a monic integer polynomial.

    Newton's identities, run forward from the coefficients.
    """
    n = len(monic) - 1
    if monic[-1] != 1:
        raise ValueError("monic polynomial required")
    # a_i = coefficient of T^(n-i)
    a = [monic[n - i] for i in range(n + 1)]
    s = [0] * (r + 1)
    for k in range(1, r + 1):
        acc = -k * a[k] if k <= n else 0
        for i in range(1, min(k, n) + 1):
            if i < k:
                acc -= a[i] * s[k - i]
        s[k] = acc
    return s[1:]


def elementary_from_power_sums(s, m: int):
    """First m elementary symmetric functions from power sums, exactly."""
    e = [Fraction(1)] + [Fraction(0)] * m
    for k in range(1, m + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i - 1]
        e[k] = acc / k
    return e[1:]


def counts_from_charpoly(monic, q: int, r: int):
    """Synthetic counts N_k = 1 + q^{2k} + s_k from a degree-22 polynomial."""
    if len(monic) - 1 != H2_RANK:
        raise ValueError(f"characteristic polynomial must have degree {H2_RANK}")
    s = power_sums_from_poly(monic, r)
    return [1 + q ** (2 * k) + s[k - 1] for k in range(1, r + 1)]


# ---------------------------------------------------------------------------
# reconstruction and root-of-unity counting


@dataclass(frozen=True)
class PicardBoundReport:
    """Candidate characteristic polynomials and the resulting upper bound."""

    q: int
    upper_bound: int
    candidates: tuple[tuple[int, ...], ...]  # monic degree-22, low degree first
    candidate_counts: tuple[int, ...]
    parity_flagged: bool
    assumptions: tuple[str, ...]

    def to_json(self):
        return {
            "q": self.q,
            "upper_bound": self.upper_bound,
            "candidates": [list(c) for c in self.candidates],
            "candidate_counts": list(self.candidate_counts),
            "parity_flagged": self.parity_flagged,
            "assumptions": list(self.assumptions),
        }


def _known_factor(known_algebraic, q: int):
    """Integer polynomial with the supplied q*(root of unity) eigenvalues.

    known_algebraic lists (order, multiplicity): the full Galois orbit of
    a primitive order-th root of unity, each contributing phi(order)
    eigenvalues per multiplicity.
    """
    poly = [1]
    total = 0
    for order, mult in known_algebraic:
        if order < 1 or mult < 1:
            raise ValueError("orders and multiplicities must be positive")
        block = scaled_cyclotomic(order, q)
        for _ in range(mult):
            poly = poly_mul(poly, block)
            total += len(block) - 1
    return poly, total


def count_unity_scaled_roots(monic, q: int, conductor: int = DEFAULT_CONDUCTOR) -> int:
    """Number of roots of the form q * (root of unity of order <= conductor)."""
    total = 0
    for n in range(1, conductor + 1):
        block = scaled_cyclotomic(n, q)
        current = list(monic)
        while True:
            quotient = poly_divides(block, current)
            if quotient is None:
                break
            current = quotient
            total += len(block) - 1
    return total


def picard_upper_bound(traces: TraceSequence, known_algebraic=(),
                       conductor: int = DEFAULT_CONDUCTOR) -> PicardBoundReport:
    """Reconstruct Frobenius characteristic polynomials and bound rho.

    The functional equation T^22 P(q^2/T) = +- q^22 P(T) halves the
    number of unknown coefficients: with f known eigenvalues supplied,
    ceil((22 - f)/2) traces determine the rest.  One candidate is kept
    per admissible sign; the bound is the worst case over candidates.
    Known algebraic classes are never assumed: they are caller input.
    """
    q = traces.q
    known_poly, f = _known_factor(known_algebraic, q)
    if f > H2_RANK:
        raise ValueError("more known eigenvalues than the rank of H^2")
    n = H2_RANK - f
    r = len(traces)
    needed = (n + 1) // 2
    if r < needed:
        raise ReconstructionError(
            f"insufficient traces: have {r}, need {needed} "
            f"({needed - r} more extension-field count(s) required)")
    s_known = power_sums_from_poly(known_poly, r) if f else [0] * r
    s_b = [t - sk for t, sk in zip(traces.traces, s_known)]

    # Newton: leading coefficients of the unknown monic factor B
    e = elementary_from_power_sums(s_b, min(r, n))
    coeffs_low = []  # b_1 .. b_min(r, n) with B = T^n + b_1 T^(n-1) + ...
    for k, ek in enumerate(e, start=1):
        val = (-1) ** k * ek
        if val.denominator != 1:
            raise ReconstructionError(
                f"trace data is inconsistent: coefficient {k} of the "
                f"characteristic polynomial is the non-integer {val}")
        coeffs_low.append(int(val))

    candidates = []
    signs = []
    for eps in (1, -1):
        b = [None] * (n + 1)
        b[0] = 1
        ok = True
        for k in range(0, n // 2 + 1):
            bk = coeffs_low[k - 1] if k >= 1 else 1
            b[k] = bk
            mirror = eps * q ** (n - 2 * k) * bk
            if b[n - k] is None:
                b[n - k] = mirror
            elif b[n - k] != mirror:
                ok = False
                break
        if not ok or any(x is None for x in b):
            continue
        # every supplied trace must be reproduced, and Newton-range
        # coefficients beyond the reflection must agree
        for k in range(1, min(r, n) + 1):
            if b[k] != coeffs_low[k - 1]:
                ok = False
                break
        if not ok:
            continue
        monic_b = [b[n - i] for i in range(n + 1)]  # low degree first
        full = poly_mul(known_poly, monic_b)
        if power_sums_from_poly(full, r) != list(traces.traces):
            continue
        candidates.append(tuple(full))
        signs.append(eps)

    if not candidates:
        raise ReconstructionError(
            "no functional-equation sign is consistent with the traces")
    counts = tuple(count_unity_scaled_roots(c, q, conductor) for c in candidates)
    upper = max(counts)
    assumptions = (
        f"functional equation signs admitted: {signs}",
        f"known algebraic eigenvalue blocks (order, multiplicity): "
        f"{list(known_algebraic)}",
        f"root-of-unity orders tested up to conductor {conductor}",
        f"traces used: k = 1..{r} at q = {q}",
        "upper bound counts Frobenius eigenvalues of the form q * root of "
        "unity (point-counting bound for the Picard number of the reduction)",
    )
    parity_flagged = upper % 2 == 1
    return PicardBoundReport(q, upper, tuple(candidates), counts,
                             parity_flagged, assumptions)
