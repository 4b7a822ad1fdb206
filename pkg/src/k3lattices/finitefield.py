"""Prime and prime-power finite fields with exact arithmetic.

Elements of F_p are plain ints in [0, p); elements of F_{p^k} are
k-tuples of ints, coefficients (low degree first) modulo a monic
irreducible polynomial.  Fields expose add/mul/inv/pow, a multiplicative
generator, and the quadratic character chi (chi(0) = 0, otherwise +-1 by
Euler's criterion), which is what the point-counting kernels consume.
"""

from .linalg import is_prime


def _poly_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _poly_mulmod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce by the monic modulus
    k = len(modulus) - 1
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * modulus[j]) % p
    return _poly_trim(out)


def _poly_powmod(base, e, modulus, p):
    result = [1]
    base = _poly_trim([x % p for x in base])
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a, b, p):
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    while b:
        # a mod b with b made monic
        inv = pow(b[-1], p - 2, p)
        b_monic = [(x * inv) % p for x in b]
        r = list(a)
        while len(r) >= len(b_monic) and _poly_trim(r):
            shift = len(r) - len(b_monic)
            c = r[-1]
            for i, x in enumerate(b_monic):
                r[shift + i] = (r[shift + i] - c * x) % p
            r = _poly_trim(r)
        a, b = b, r
    return a


def _is_irreducible(modulus, p):
    """Monic degree-k polynomial irreducibility over F_p (Rabin's test)."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] != 1:
        return False
    x = [0, 1]
    xq = _poly_powmod(x, p ** k, modulus, p)
    if _poly_sub(xq, x, p):
        return False
    for ell in _prime_divisors(k):
        xe = _poly_powmod(x, p ** (k // ell), modulus, p)
        diff = _poly_sub(xe, x, p)
        if len(_poly_gcd(diff, modulus, p)) > 1:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _find_irreducible(p, k):
    """Deterministic search for a monic irreducible of degree k over F_p."""
    from itertools import product as iproduct

    for tail in iproduct(range(p), repeat=k):
        modulus = list(tail) + [1]
        if _is_irreducible(modulus, p):
            return tuple(modulus)
    raise AssertionError(f"no irreducible of degree {k} over F_{p}")


class PrimeField:
    """F_p with int elements."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.k = 1
        self.q = p
        self.zero = 0
        self.one = 1
        self.modulus = (0, 1)  # the identity representation t - 0 is implicit

    def __repr__(self):
        return f"PrimeField({self.p})"

    def element(self, n: int) -> int:
        return n % self.p

    def elements(self):
        return range(self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e: int):
        if e < 0:
            return self.inv(self.pow(a, -e))
        return pow(a, e, self.p)

    def chi(self, a) -> int:
        """Quadratic character: 0 on 0, else +1 for squares, -1 otherwise."""
        a %= self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def generator(self):
        for g in range(2, self.p):
            if all(pow(g, (self.p - 1) // ell, self.p) != 1
                   for ell in _prime_divisors(self.p - 1)):
                return g
        return 1 if self.p == 2 else None


class ExtensionField:
    """F_{p^k} as F_p[t] modulo a monic irreducible of degree k."""

    def __init__(self, p: int, k: int, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 2:
            raise ValueError("extension degree must be >= 2")
        self.p = p
        self.k = k
        self.q = p ** k
        if self.q > 10 ** 15:
            raise ValueError("field order exceeds the supported integer budget")
        if modulus is None:
            modulus = _find_irreducible(p, k)
        modulus = tuple(x % p for x in modulus[:-1]) + (modulus[-1],)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def __repr__(self):
        return f"ExtensionField({self.p}^{self.k})"

    def element(self, n) -> tuple:
        """Embed an integer (or pad a coefficient sequence) into the field."""
        if isinstance(n, int):
            return (n % self.p,) + (0,) * (self.k - 1)
        c = [x % self.p for x in n]
        return tuple(c[:self.k] + [0] * (self.k - len(c)))

    def elements(self):
        from itertools import product as iproduct

        for tup in iproduct(range(self.p), repeat=self.k):
            yield tup

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        c = _poly_mulmod(list(a), list(b), list(self.modulus), self.p)
        return tuple(c + [0] * (self.k - len(c)))

    def pow(self, a, e: int):
        if e < 0:
            return self.inv(self.pow(a, -e))
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def chi(self, a) -> int:
        if a == self.zero:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == self.one else -1

    def generator(self):
        for g in self.elements():
            if g == self.zero:
                continue
            if all(self.pow(g, (self.q - 1) // ell) != self.one
                   for ell in _prime_divisors(self.q - 1)):
                return g
        return None


def field_build(p: int, k: int = 1, modulus=None):
    """Construct F_{p^k}; for k = 1 the identity representation is used."""
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if k == 1:
        if modulus is not None and len(modulus) != 2:
            raise ValueError("degree-1 field takes no modulus")
        return PrimeField(p)
    return ExtensionField(p, k, modulus)
