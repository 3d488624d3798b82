"""Exact arithmetic in GF(p^f).

Elements are handled internally as integers in ``[0, q)`` via the encoding
``enc(a) = sum(coeffs[i] * p**i)``; :class:`FieldElement` wraps an encoded
value with operator overloading for readable call sites and tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime

DEFAULT_SIZE_LIMIT = 2**20
TABLE_LIMIT = 2**16  # log/antilog tables up to this order
ADD_TABLE_LIMIT = 2**10  # dense addition table for extension fields


class FieldError(ValueError):
    pass


class Square(enum.Enum):
    ZERO = "zero"
    NONZERO_SQUARE = "nonzero-square"
    NON_SQUARE = "non-square"


# --- polynomials over the prime field (coefficient lists, low degree first) ---

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(_trim(a)) > dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
    return a


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod(a, b, p))
    return a


def is_irreducible_mod_p(m, p):
    """Irreducibility of a monic polynomial over GF(p) (Ben-Or style gcd test).

    ``m`` is a coefficient list with ``m[-1] == 1``.
    """
    deg = len(m) - 1
    if deg <= 1:
        return deg == 1
    x = [0, 1]
    h = x
    for _ in range(deg // 2):
        # h <- h^p mod m
        r = [1]
        base, e = h, p
        while e:
            if e & 1:
                r = _pmulmod(r, base, m, p)
            base = _pmulmod(base, base, m, p)
            e >>= 1
        h = r
        if len(_pgcd(m, _psub(h, x, p), p)) > 1:
            return False
    return True


def least_irreducible(p, f):
    """Least monic irreducible of degree ``f`` under the coefficient encoding."""
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        m = low + [1]
        if is_irreducible_mod_p(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {f} over GF({p})")


# --- the field itself ---

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^f) with the least monic irreducible modulus.

    Construct through :func:`make_field`, which caches instances so that
    identity comparison between specs is meaningful.
    """

    p: int
    f: int
    modulus: tuple
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.f)
        q, p, f = self.q, self.p, self.f
        powers = [p**i for i in range(f)]
        object.__setattr__(self, "_powers", powers)
        digits = np.array([[(a // pw) % p for pw in powers] for a in range(q)], dtype=np.int64) \
            if f > 1 and q <= TABLE_LIMIT else None
        object.__setattr__(self, "_digits", digits)
        add_tab = None
        if f > 1 and q <= ADD_TABLE_LIMIT:
            s = (digits[:, None, :] + digits[None, :, :]) % p
            add_tab = (s @ np.array(powers, dtype=np.int64)).astype(np.int64)
        object.__setattr__(self, "_add_tab", add_tab)
        object.__setattr__(self, "_add_list", add_tab.tolist() if add_tab is not None else None)
        exp = log = None
        if f > 1 and q <= TABLE_LIMIT:
            exp, log = self._build_log_tables()
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    # -- encoding --

    def encode(self, coeffs):
        if len(coeffs) != self.f or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"bad coefficient vector {coeffs!r} for GF({self.q})")
        return sum(c * pw for c, pw in zip(coeffs, self._powers))

    def decode(self, a):
        return tuple((a // pw) % self.p for pw in self._powers)

    def __call__(self, value):
        """Wrap an encoded integer (or prime-field integer) as a :class:`FieldElement`."""
        if self.f == 1:
            return FieldElement(self, int(value) % self.p)
        if not 0 <= value < self.q:
            raise FieldError(f"encoding {value} out of range for GF({self.q})")
        return FieldElement(self, int(value))

    def elements(self):
        return range(self.q)

    def from_int(self, n):
        """Image of the integer ``n`` under Z -> GF(q)."""
        return int(n) % self.p

    def __repr__(self):
        return f"FieldSpec(p={self.p}, f={self.f}, modulus={self.modulus})"

    # -- slow polynomial path, used for table construction and large fields --

    def _poly_mul(self, a, b):
        r = _pmulmod(list(self.decode(a)), list(self.decode(b)), list(self.modulus), self.p)
        r = r + [0] * (self.f - len(r))
        return self.encode(r)

    def _build_log_tables(self):
        q = self.q
        order = q - 1
        primes = list(factorint(order))
        for g in range(2, q):
            if all(self._slow_pow(g, order // r) != 1 for r in primes):
                break
        else:  # pragma: no cover - GF(q)* is cyclic
            raise FieldError("no primitive element found")
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, g)
        exp[order:] = exp[:order]
        return exp, log

    def _slow_pow(self, a, e):
        r, b = 1, a
        while e:
            if e & 1:
                r = self._poly_mul(r, b)
            b = self._poly_mul(b, b)
            e >>= 1
        return r

    # -- arithmetic on encodings --

    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        if self._add_list is not None:
            return self._add_list[a][b]
        p = self.p
        return sum(((a // pw + b // pw) % p) * pw for pw in self._powers)

    def neg(self, a):
        if self.f == 1:
            return -a % self.p
        p = self.p
        return sum(((-(a // pw)) % p) * pw for pw in self._powers)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.f == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.q})")
        if self.f == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if self.f == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self._exp is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._slow_pow(a, e)

    def frobenius(self, a):
        return self.pow(a, self.p)

    # -- quadratic character --

    def is_square(self, a):
        if self.p == 2:
            raise FieldError("square classification is undefined use in characteristic 2")
        if a == 0:
            return Square.ZERO
        return Square.NONZERO_SQUARE if self.pow(a, (self.q - 1) // 2) == 1 else Square.NON_SQUARE

    def chi(self, a):
        """Quadratic character with chi(0) = 0."""
        s = self.is_square(a)
        return 0 if s is Square.ZERO else (1 if s is Square.NONZERO_SQUARE else -1)

    @property
    def chi_table(self):
        return _chi_table(self)

    def sqrt(self, a):
        """Square root of a nonzero square; the root with the smaller encoding."""
        if self.is_square(a) is not Square.NONZERO_SQUARE:
            raise FieldError(f"{a} is not a nonzero square in GF({self.q})")
        if self.q % 4 == 3:
            r = self.pow(a, (self.q + 1) // 4)
        else:
            r = self._tonelli_shanks(a)
        return min(r, self.neg(r))

    def _tonelli_shanks(self, a):
        q = self.q
        s, m = 0, q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        z = next(c for c in range(2, q) if self.is_square(c) is Square.NON_SQUARE)
        c = self.pow(z, m)
        x = self.pow(a, (m + 1) // 2)
        t = self.pow(a, m)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (s - i - 1))
            x = self.mul(x, b)
            c = self.mul(b, b)
            t = self.mul(t, c)
            s = i
        return x

    # -- vectorised helpers for graph construction --

    def _require_tables(self):
        if self.f > 1 and self._exp is None:
            raise FieldError(f"vectorised arithmetic needs tables; GF({self.q}) is too large")

    def vadd(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        self._require_tables()
        if self.f == 1:
            return (a + b) % self.p
        if self._add_tab is not None:
            return self._add_tab[a, b]
        s = (self._digits[a] + self._digits[b]) % self.p
        return s @ np.array(self._powers, dtype=np.int64)

    def vmul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        self._require_tables()
        if self.f == 1:
            return (a * b) % self.p
        exp = np.asarray(self._exp)
        log = np.asarray(self._log)
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)


@lru_cache(maxsize=None)
def _chi_table(F):
    table = np.zeros(F.q, dtype=np.int8)
    for a in range(1, F.q):
        table[a] = F.chi(a)
    return table


@dataclass(frozen=True, eq=False)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self):
        return self.spec.decode(self.value)

    def _other(self, b):
        if isinstance(b, FieldElement):
            if b.spec is not self.spec:
                raise FieldError("elements of different fields")
            return b.value
        return self.spec.from_int(b)

    def __add__(self, b):
        return FieldElement(self.spec, self.spec.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.spec, self.spec.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return FieldElement(self.spec, self.spec.sub(self._other(b), self.value))

    def __mul__(self, b):
        return FieldElement(self.spec, self.spec.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElement(self.spec, self.spec.div(self.value, self._other(b)))

    def __rtruediv__(self, b):
        return FieldElement(self.spec, self.spec.div(self._other(b), self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inv(self):
        return FieldElement(self.spec, self.spec.inv(self.value))

    def is_square(self):
        return self.spec.is_square(self.value)

    def sqrt(self):
        return FieldElement(self.spec, self.spec.sqrt(self.value))

    def __eq__(self, b):
        if isinstance(b, FieldElement):
            return b.spec is self.spec and b.value == self.value
        if isinstance(b, int):
            return self.value == self.spec.from_int(b)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.spec), self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.spec.q})({self.value})"


_FIELDS = {}


def make_field(p, f=1, size_limit=DEFAULT_SIZE_LIMIT):
    """Return GF(p^f) with a deterministic modulus.

    >>> make_field(3, 2).modulus
    (1, 0, 1)
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if f < 1:
        raise FieldError(f"extension degree must be >= 1, got {f}")
    if p**f > size_limit:
        raise FieldError(f"GF({p}^{f}) exceeds the size limit of {size_limit} elements")
    key = (p, f)
    if key not in _FIELDS:
        modulus = (0, 1) if f == 1 else least_irreducible(p, f)
        _FIELDS[key] = FieldSpec(p, f, modulus)
    return _FIELDS[key]


def prime_power(q):
    """Split ``q`` into ``(p, f)``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fac = factorint(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, f), = fac.items()
    return int(p), int(f)


def field_of_order(q, size_limit=DEFAULT_SIZE_LIMIT):
    return make_field(*prime_power(q), size_limit=size_limit)
