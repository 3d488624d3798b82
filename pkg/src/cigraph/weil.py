"""Polynomials over GF(q), exact point counts on y^2 = f(x) and Weil-bound audits.

The audited polynomials are the degree-8 products that appear in the
fingerprint-separation arguments: f_gamma * f_delta with
f_gamma(w) = w^4 + gamma w^2 + 1, and theta_{alpha,omega} * theta_{0,lambda}
obtained by pulling the q = 3 mod 4 discriminant back along a conic
parametrisation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .field import FieldError, FieldSpec, Square

MAX_DEGREE = 16


class HypothesisViolation(ValueError):
    """The curve y^2 = f(x) fails the hypotheses of the bound (f is a square)."""


class Poly:
    """Dense polynomial over a :class:`FieldSpec`, coefficients low degree first."""

    __slots__ = ("F", "c")

    def __init__(self, F: FieldSpec, coeffs, max_degree=MAX_DEGREE):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        if len(c) - 1 > max_degree:
            raise ValueError(f"degree {len(c) - 1} exceeds the limit {max_degree}")
        self.F = F
        self.c = c

    @classmethod
    def const(cls, F, a):
        return cls(F, [a])

    @classmethod
    def x(cls, F):
        return cls(F, [0, 1])

    @property
    def degree(self):
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.c

    @property
    def lead(self):
        return self.c[-1] if self.c else 0

    def __eq__(self, other):
        return isinstance(other, Poly) and other.F is self.F and other.c == self.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __repr__(self):
        return f"Poly(GF({self.F.q}), {self.c})"

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly(self.F, [self.F.from_int(other)])

    def __add__(self, other):
        other = self._lift(other)
        F = self.F
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return Poly(F, [F.add(x, y) for x, y in zip(a, b)], max_degree=10**6)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.F, [self.F.neg(x) for x in self.c], max_degree=10**6)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        F = self.F
        if not self.c or not other.c:
            return Poly(F, [])
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out, max_degree=10**6)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = Poly(self.F, [1])
        for _ in range(e):
            r = r * self
        return r

    def scale(self, k):
        return Poly(self.F, [self.F.mul(k, x) for x in self.c], max_degree=10**6)

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.F.inv(self.lead))

    def divmod(self, other):
        F = self.F
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(F, []), Poly(F, r)
        quot = [0] * (dq + 1)
        inv_lead = F.inv(other.lead)
        for k in range(dq, -1, -1):
            coef = F.mul(r[k + len(other.c) - 1], inv_lead)
            quot[k] = coef
            if coef:
                for j, b in enumerate(other.c):
                    r[k + j] = F.sub(r[k + j], F.mul(coef, b))
        return Poly(F, quot, max_degree=10**6), Poly(F, r, max_degree=10**6)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self):
        F = self.F
        return Poly(F, [F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:], max_degree=10**6)

    def __call__(self, x):
        F = self.F
        r = 0
        for a in reversed(self.c):
            r = F.add(F.mul(r, x), a)
        return r

    def pth_root(self):
        """g with g^p = self, assuming self only has exponents divisible by p."""
        F = self.F
        p = F.p
        if any(a for i, a in enumerate(self.c) if i % p):
            raise ValueError("not a p-th power")
        root = F.q // p  # a -> a^(q/p) inverts Frobenius
        return Poly(F, [F.pow(a, root) for a in self.c[::p]], max_degree=10**6)


def poly_gcd(a: Poly, b: Poly):
    """Monic gcd by Euclid's algorithm."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(f: Poly):
    """Yun's algorithm with the characteristic-p correction.

    Returns {multiplicity: monic squarefree factor} with f = lead * prod(g_i^i).
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    F = f.F
    f = f.monic()
    out = {}
    if f.degree == 0:
        return out
    df = f.derivative()
    if df.is_zero():
        for m, g in squarefree_decomposition(f.pth_root()).items():
            out[m * F.p] = g
        return out
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out[i] = z.monic()
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        # remaining c is a p-th power
        for m, g in squarefree_decomposition(c.pth_root()).items():
            out[m * F.p] = (out[m * F.p] * g).monic() if m * F.p in out else g
    return out


def squarefree_part_degree(f: Poly):
    """Number of distinct roots of f in its splitting field."""
    return sum(g.degree for g in squarefree_decomposition(f).values())


def is_perfect_square(f: Poly):
    """Whether f is the square of a polynomial over the algebraic closure."""
    if f.is_zero():
        return True
    return all(m % 2 == 0 for m in squarefree_decomposition(f))


@dataclass
class WeilInstance:
    f: Poly
    q: int
    m: int
    k: int
    d: int
    N: int
    bound_sq: int  # ((k-1)(d-1))^2 * q

    @property
    def bound(self):
        return math.sqrt(self.bound_sq)

    @property
    def holds(self):
        return (self.N - self.q) ** 2 <= self.bound_sq


def count_solutions(f: Poly, F: FieldSpec | None = None, m=2):
    """N = #{(x, y) in GF(q)^2 : y^2 = f(x)} = sum_x (1 + chi(f(x)))."""
    F = F or f.F
    if m != 2:
        raise NotImplementedError("only y^2 = f(x) is supported")
    if F.p == 2:
        raise FieldError("point counting needs odd q")
    chi = F.chi_table
    N = sum(1 + int(chi[f(x)]) for x in range(F.q))
    k = math.gcd(m, F.q - 1)
    d = squarefree_part_degree(f) if not f.is_zero() else 0
    bound_sq = ((k - 1) * max(d - 1, 0)) ** 2 * F.q
    return WeilInstance(f, F.q, m, k, d, N, bound_sq)


def brute_force_count(f: Poly):
    F = f.F
    squares = {}
    for y in range(F.q):
        s = F.mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    return sum(squares.get(f(x), 0) for x in range(F.q))


@dataclass
class WeilAudit:
    family: str
    params: dict
    N: int
    q: int
    d: int
    holds: bool
    holds_7sqrtq: bool
    checks: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "family": self.family, "params": self.params, "N": self.N, "q": self.q, "d": self.d,
            "holds": self.holds, "holds_7sqrtq": self.holds_7sqrtq, "checks": self.checks,
        }


def audit_weil_bound(f: Poly):
    """Exact-integer check of |N - q| <= (k-1)(d-1) sqrt(q); refuses perfect squares."""
    if is_perfect_square(f):
        raise HypothesisViolation("f is a square over the algebraic closure; the bound does not apply")
    inst = count_solutions(f)
    if inst.d < 2:
        raise HypothesisViolation(f"f has only {inst.d} distinct roots")
    return inst


# --- the polynomial families ---

def f_gamma(F, gamma):
    """w^4 + gamma w^2 + 1."""
    return Poly(F, [1, 0, gamma, 0, 1])


def gamma_of(F, tau):
    """gamma = -2 - 4/tau^2."""
    if tau == 0:
        raise ValueError("tau must be nonzero")
    return F.sub(F.neg(F.from_int(2)), F.div(F.from_int(4), F.mul(tau, tau)))


def build_bound1_product(F, tau, mu):
    if tau == 0 or mu == 0:
        raise ValueError("tau and mu must be nonzero")
    if F.q % 4 != 1:
        raise FieldError("the bound1 family needs q = 1 mod 4")
    return f_gamma(F, gamma_of(F, tau)) * f_gamma(F, gamma_of(F, mu))


def on_conic(F, sigma, tau):
    return F.add(F.mul(sigma, sigma), F.mul(tau, tau)) == F.neg(1)


def conic_points(F):
    return [(s, t) for s in range(F.q) for t in range(F.q) if on_conic(F, s, t)]


def conic_base_point(F):
    return conic_points(F)[0]


def parametrize_conic(F, sigma0, tau0, zeta):
    """Point of sigma^2 + tau^2 = -1 with parameter zeta, from the base point (sigma0, tau0)."""
    if not on_conic(F, sigma0, tau0):
        raise ValueError("base point is not on sigma^2 + tau^2 = -1")
    z2 = F.mul(zeta, zeta)
    den = F.add(z2, 1)
    if den == 0:
        raise ValueError("zeta^2 + 1 = 0")
    two = F.from_int(2)
    tau = F.add(F.sub(F.neg(tau0), F.mul(F.mul(two, sigma0), zeta)), F.mul(tau0, z2))
    sigma = F.sub(F.sub(sigma0, F.mul(F.mul(two, tau0), zeta)), F.mul(sigma0, z2))
    inv = F.inv(den)
    return F.mul(sigma, inv), F.mul(tau, inv)


def _check_omega(F, w):
    if w == 0 or w == 1 or w == F.neg(1):
        raise ValueError("omega must differ from 0 and +-1")


def omega_term(F, w):
    """w^2 + w^-2 - 2."""
    w2 = F.mul(w, w)
    return F.sub(F.add(w2, F.inv(w2)), F.from_int(2))


def poly2_coefficients(F, alpha, w):
    """(A, B, C) with the discriminant equal to A*sigma*tau + B*tau^2 + C."""
    a2 = F.mul(alpha, alpha)
    a4 = F.mul(a2, a2)
    n = F.from_int
    om = omega_term(F, w)
    w2 = F.mul(w, w)
    A = F.mul(F.mul(F.mul(n(4), alpha), F.sub(a2, 1)), om)
    B = F.mul(F.add(F.sub(a4, F.mul(n(6), a2)), 1), om)
    C = F.mul(n(-4), F.add(F.add(F.add(a4, F.mul(a2, w2)), F.mul(a2, F.inv(w2))), 1))
    return A, B, C


def build_theta(F, alpha, w, sigma0, tau0):
    """theta_{alpha,omega}(zeta); with alpha = 0 it is theta_{0,lambda} for lambda = omega."""
    if F.q % 4 != 3:
        raise FieldError("theta polynomials need q = 3 mod 4")
    _check_omega(F, w)
    if not on_conic(F, sigma0, tau0):
        raise ValueError("base point is not on sigma^2 + tau^2 = -1")
    two = F.from_int(2)
    S = Poly(F, [sigma0, F.neg(F.mul(two, tau0)), F.neg(sigma0)])  # sigma0 - 2 tau0 z - sigma0 z^2
    T = Poly(F, [tau0, F.mul(two, sigma0), F.neg(tau0)])  # tau0 + 2 sigma0 z - tau0 z^2
    Z = Poly(F, [1, 0, 1])
    A, B, C = poly2_coefficients(F, alpha, w)
    return (S * T).scale(F.neg(A)) + (T * T).scale(B) + (Z * Z).scale(C)


def theta0_factors(F, lam, sigma0, tau0):
    """The two quadratic factors of theta_{0,lambda} (difference of two squares)."""
    ell = F.sub(lam, F.inv(lam))
    two = F.from_int(2)
    lt = F.mul(ell, tau0)
    mid = F.mul(F.mul(two, ell), sigma0)
    first = Poly(F, [F.sub(lt, two), mid, F.neg(F.add(lt, two))])
    second = Poly(F, [F.add(lt, two), mid, F.neg(F.sub(lt, two))])
    return first, second


def eq3_discriminant(F, lam):
    """Discriminant of (l2+2) W^2 + 2(l2-6) W + (l2+2) in W, where l2 = lam^2 + lam^-2."""
    l2 = F.add(F.mul(lam, lam), F.inv(F.mul(lam, lam)))
    a = F.add(l2, F.from_int(2))
    b = F.mul(F.from_int(2), F.sub(l2, F.from_int(6)))
    return F.sub(F.mul(b, b), F.mul(F.from_int(4), F.mul(a, a)))


def eq3_closed_form(F, lam):
    """-2^6 (lam - 1/lam)^2."""
    ell = F.sub(lam, F.inv(lam))
    return F.mul(F.neg(F.from_int(64)), F.mul(ell, ell))


# --- sampling of valid parameters ---

def valid_taus(F):
    """tau != 0 with -1 - tau^2 a nonzero square (so some sigma != 0 completes the conic)."""
    return [t for t in range(1, F.q)
            if F.is_square(F.sub(F.neg(1), F.mul(t, t))) is Square.NONZERO_SQUARE]


def sample_bound1(F, rng: random.Random):
    taus = valid_taus(F)
    if len({min(t, F.neg(t)) for t in taus}) < 2:
        raise ValueError(f"GF({F.q}) has no pair tau, mu with mu != +-tau")
    while True:
        tau, mu = rng.choice(taus), rng.choice(taus)
        if mu not in (tau, F.neg(tau)):
            return tau, mu


def sample_bound2(F, rng: random.Random):
    minus1 = F.neg(1)
    omegas = [w for w in range(2, F.q) if w != minus1]
    while True:
        alpha = rng.randrange(F.q)
        w, lam = rng.choice(omegas), rng.choice(omegas)
        lam_class = {lam, F.neg(lam), F.inv(lam), F.neg(F.inv(lam))}
        if alpha == 0 and w in lam_class:
            continue
        return alpha, w, lam


def audit_bound1(F, tau, mu):
    gamma, delta = gamma_of(F, tau), gamma_of(F, mu)
    fg, fd = f_gamma(F, gamma), f_gamma(F, delta)
    f = fg * fd
    inst = audit_weil_bound(f)
    checks = {
        "coprime": poly_gcd(fg, fd).degree == 0,
        "separable_f_gamma": squarefree_part_degree(fg) == fg.degree,
        "separable_f_delta": squarefree_part_degree(fd) == fd.degree,
        "gamma_not_pm2": not {gamma, delta} & {F.from_int(2), F.from_int(-2)},
        "N_ge_2q_minus_8": inst.N >= 2 * F.q - 8,
    }
    return WeilAudit("bound1", {"tau": tau, "mu": mu}, inst.N, F.q, inst.d, inst.holds,
                     (inst.N - F.q) ** 2 <= 49 * F.q, checks)


def audit_bound2(F, alpha, w, lam, base_point=None):
    sigma0, tau0 = base_point or conic_base_point(F)
    th = build_theta(F, alpha, w, sigma0, tau0)
    th0 = build_theta(F, 0, lam, sigma0, tau0)
    f = th * th0
    inst = audit_weil_bound(f)
    checks = {
        "theta0_separable": squarefree_part_degree(th0) == th0.degree,
        "degree": f.degree,
        "N_ge_2q_minus_8": inst.N >= 2 * F.q - 8,
    }
    return WeilAudit("bound2", {"alpha": alpha, "omega": w, "lambda": lam,
                                "sigma0": sigma0, "tau0": tau0},
                     inst.N, F.q, inst.d, inst.holds, (inst.N - F.q) ** 2 <= 49 * F.q, checks)


def run_audits(F, family, samples, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        if family == "bound1":
            out.append(audit_bound1(F, *sample_bound1(F, rng)))
        elif family == "bound2":
            out.append(audit_bound2(F, *sample_bound2(F, rng)))
        else:
            raise ValueError(f"unknown family {family!r}")
    return out
