"""2x2 matrices over GF(q), the involution class of PSL(2, q) and PGammaL actions.

Matrices are :class:`Mat2` tuples of encoded field elements.  Involutions of
PSL(2, q), q odd, are trace-zero determinant-one matrices taken modulo +-I and
stored in a sign-canonical form.
"""

from __future__ import annotations

from typing import NamedTuple

from sympy import factorint

from .field import FieldError, FieldSpec


class Mat2(NamedTuple):
    a: int
    b: int
    c: int
    d: int


class Involution(NamedTuple):
    rep: Mat2
    vertex_id: int


class ProjAction(NamedTuple):
    """Either conjugation by a PGL(2, q) element or the Frobenius x -> x^p."""

    kind: str  # "conjugation" | "frobenius"
    payload: object  # Mat2 for conjugation, the exponent p for frobenius


def mat_mul(F: FieldSpec, x, y):
    add, mul = F.add, F.mul
    return Mat2(
        add(mul(x.a, y.a), mul(x.b, y.c)),
        add(mul(x.a, y.b), mul(x.b, y.d)),
        add(mul(x.c, y.a), mul(x.d, y.c)),
        add(mul(x.c, y.b), mul(x.d, y.d)),
    )


def mat_neg(F, x):
    return Mat2(*(F.neg(e) for e in x))


def mat_scale(F, k, x):
    return Mat2(*(F.mul(k, e) for e in x))


def det(F, x):
    return F.sub(F.mul(x.a, x.d), F.mul(x.b, x.c))


def trace(F, x):
    return F.add(x.a, x.d)


def mat_inv(F, x):
    dinv = F.inv(det(F, x))
    return mat_scale(F, dinv, Mat2(x.d, F.neg(x.b), F.neg(x.c), x.a))


def conjugate(F, x, g):
    """x^g = g^-1 x g."""
    return mat_mul(F, mat_mul(F, mat_inv(F, g), x), g)


def canonicalize(F, x):
    """Choose between x and -x: the first nonzero entry e has enc(e) < enc(-e)."""
    if F.p == 2:
        return Mat2(*x)
    for e in x:
        if e:
            return Mat2(*x) if e < F.neg(e) else mat_neg(F, x)
    raise FieldError("zero matrix has no projective class")


def involution_matrix(F, a, b, c):
    """Canonical trace-zero matrix [[a, b], [c, -a]], checked to have det 1."""
    m = Mat2(a, b, c, F.neg(a))
    if det(F, m) != 1:
        raise FieldError(f"{m} does not have determinant 1")
    return canonicalize(F, m)


def enumerate_involutions(F):
    """All involutions of PSL(2, q) as canonical matrices, sorted by encoding.

    For odd q these are the trace-zero elements of SL(2, q) modulo +-I; for
    even q (where PSL = SL) the non-identity matrices [[a, b], [c, a]] with
    a^2 + bc = 1.
    """
    q = F.q
    found = set()
    for a in range(q):
        # bc = det-target
        target = F.sub(F.neg(1), F.mul(a, a)) if F.p != 2 else F.add(1, F.mul(a, a))
        for b in range(q):
            if b:
                cs = [F.div(target, b)]
            else:
                cs = range(q) if target == 0 else []
            for c in cs:
                if F.p == 2:
                    if a == 1 and b == 0 and c == 0:
                        continue
                    found.add(Mat2(a, b, c, a))
                else:
                    found.add(canonicalize(F, Mat2(a, b, c, F.neg(a))))
    return sorted(found)


def involution_count(q):
    if q % 2 == 0:
        return q * q - 1
    return q * (q + 1) // 2 if q % 4 == 1 else q * (q - 1) // 2


def iota(F):
    """The square root of -1 with smaller encoding (q = 1 mod 4)."""
    if F.q % 4 != 1:
        raise FieldError(f"-1 is not a square in GF({F.q})")
    return F.sqrt(F.neg(1))


def base_vertex(F):
    """The fixed vertex t: diag(i, -i) for q = 1 mod 4, [[0, 1], [-1, 0]] for q = 3 mod 4."""
    if F.p == 2:
        raise FieldError("base vertex is defined for odd q only")
    if F.q % 4 == 1:
        i = iota(F)
        return canonicalize(F, Mat2(i, 0, 0, F.neg(i)))
    return canonicalize(F, Mat2(0, 1, F.neg(1), 0))


def t_omega(F, w):
    """[[0, w], [-1/w, 0]]."""
    return canonicalize(F, Mat2(0, w, F.neg(F.inv(w)), 0))


def commutes_in_L(F, x, y):
    """Distinct x, y commute in PSL(2, q) iff xy = -yx in SL(2, q)."""
    x, y = canonicalize(F, x), canonicalize(F, y)
    if x == y:
        raise ValueError("self-adjacency is undefined")
    return mat_mul(F, x, y) == mat_neg(F, mat_mul(F, y, x))


def trace_product(F, x, y):
    """tr(xy) for trace-zero matrices: 2ae + bg + cf."""
    return F.add(F.add(F.mul(F.from_int(2), F.mul(x.a, y.a)), F.mul(x.b, y.c)), F.mul(x.c, y.b))


# --- PGammaL(2, q) ---

def primitive_element(F):
    order = F.q - 1
    primes = list(factorint(order)) if order > 1 else []
    for g in range(1, F.q):
        if all(F.pow(g, order // r) != 1 for r in primes):
            return g
    raise FieldError("no primitive element")  # pragma: no cover


def pgammal_generators(F):
    """Generators of PGammaL(2, q): diag(nu, 1), [[-1, 1], [-1, 0]] and Frobenius if f > 1."""
    nu = primitive_element(F)
    minus1 = F.neg(1)
    gens = [
        ProjAction("conjugation", Mat2(nu, 0, 0, 1)),
        ProjAction("conjugation", Mat2(minus1, 1, minus1, 0)),
    ]
    if F.f > 1:
        gens.append(ProjAction("frobenius", F.p))
    return gens


def apply_action(F, action, x):
    if action.kind == "conjugation":
        y = conjugate(F, x, action.payload)
    elif action.kind == "frobenius":
        y = Mat2(*(F.pow(e, action.payload) for e in x))
    else:
        raise ValueError(f"unknown action kind {action.kind!r}")
    return canonicalize(F, y)


def action_permutation(F, action, vertices, index):
    """The permutation of vertex ids induced by ``action``."""
    return [index[apply_action(F, action, x)] for x in vertices]


# --- centralizer of t (q = 3 mod 4) and Delta_3 orbit representatives ---

def g_alpha(F, alpha):
    return Mat2(1, alpha, F.neg(alpha), 1)


def h_alpha(F, alpha):
    return Mat2(alpha, 1, 1, F.neg(alpha))


def centralizer_elements(F):
    """Representatives of G_t = C_{PGL}(t) for t = [[0, 1], [-1, 0]]."""
    if F.q % 4 != 3:
        raise FieldError("G_t representatives are implemented for q = 3 mod 4")
    return [g_alpha(F, a) for a in range(F.q)] + [h_alpha(F, a) for a in range(F.q)]


def omega_class(F, w):
    """{+-w, +-1/w}."""
    wi = F.inv(w)
    return {w, F.neg(w), wi, F.neg(wi)}


def gt_orbit_reps_delta3(F):
    """One t_omega per G_t-orbit on Delta_3(t): least omega in each {+-w, +-1/w} class."""
    if F.p == 2 or F.q % 4 != 3:
        raise FieldError(f"Delta_3 orbit representatives need q = 3 mod 4, got {F.q}")
    minus1 = F.neg(1)
    seen = set()
    reps = []
    for w in range(1, F.q):
        if w in (1, minus1) or w in seen:
            continue
        seen |= omega_class(F, w)
        reps.append(t_omega(F, w))
    return reps


def s_alpha_omega(F, alpha, w):
    """The Delta_3 vertex t_w^{g_alpha} (q = 3 mod 4), built from the explicit formula."""
    one_a2 = F.add(1, F.mul(alpha, alpha))
    if one_a2 == 0:
        # -1 is a non-square when q = 3 mod 4
        raise FieldError("1 + alpha^2 vanished; q is not 3 mod 4")
    k = F.inv(one_a2)
    wi = F.inv(w)
    a2 = F.mul(alpha, alpha)
    top_left = F.mul(alpha, F.sub(wi, w))
    m = Mat2(
        top_left,
        F.add(F.mul(a2, wi), w),
        F.neg(F.add(F.mul(a2, w), wi)),
        F.neg(top_left),
    )
    return canonicalize(F, mat_scale(F, k, m))


def is_involution_matrix(F, x):
    return trace(F, x) == 0 and det(F, x) == 1 and (F.p != 2 or x != Mat2(1, 0, 0, 1))

