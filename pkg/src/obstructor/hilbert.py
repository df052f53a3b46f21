"""Quadratic Hilbert symbols over R, Q_p, and finite extensions S/Q_p.

Values live in Q/Z: the symbol of (a, b) at a place is 0 when the conic
z^2 = a*u^2 + b*w^2 has a point over the completion and 1/2 otherwise.
Over Q_p the classical closed formulas apply; over an extension S the
decision routes through a square test, the unramified-quadratic norm
parity rule, or an exhaustive residue search on the conic with Newton
certification.
"""

from __future__ import annotations

from fractions import Fraction

from obstructor.localfields import (
    InconclusiveError,
    LocalField,
    LocalFieldElement,
    NormHypothesisError,
    is_norm_unramified_quadratic,
    is_square,
)
from obstructor.padic import (
    HALF,
    PadicNumber,
    Prime,
    QmodZ,
    ZERO_QZ,
    valuation,
)

CONIC_DEPTH_SLACK = 6  # search cap is 4e + this many pi-digits


class Place:
    """A place of Q: the real place or a finite prime."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        self.p = Prime(p) if p is not None else None

    @classmethod
    def real(cls):
        return cls(None)

    @classmethod
    def finite(cls, p):
        return cls(p)

    @property
    def is_real(self):
        return self.p is None

    def __eq__(self, other):
        return isinstance(other, Place) and self.p == other.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return "real" if self.is_real else f"p={self.p}"

    def label(self):
        return "real" if self.is_real else str(int(self.p))

    @classmethod
    def parse(cls, token):
        if isinstance(token, Place):
            return token
        if token in ("real", "oo", "infinity"):
            return cls.real()
        return cls.finite(int(token))


def hilbert_real(a, b) -> QmodZ:
    """Symbol at the real place: 1/2 iff both arguments are negative."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroDivisionError("symbol arguments must be nonzero")
    return HALF if (a < 0 and b < 0) else ZERO_QZ


def _unit_residue(x: Fraction, p: int, k: int) -> int:
    """The p-unit part of a nonzero rational, modulo p^k."""
    n, d = x.numerator, x.denominator
    n //= p ** valuation(n, p)
    d //= p ** valuation(d, p)
    m = p ** k
    return n * pow(d, -1, m) % m


def _symbol_bit(p, alpha, ua, beta, ub) -> int:
    """Classical local symbol as a bit; ua, ub are unit parts mod 8 (p = 2)
    or mod p (p odd)."""
    if p == 2:
        eps_a, eps_b = (ua - 1) // 2 % 2, (ub - 1) // 2 % 2
        om_a, om_b = (ua * ua - 1) // 8 % 2, (ub * ub - 1) // 8 % 2
        return (eps_a * eps_b + alpha * om_b + beta * om_a) % 2
    chi_a = 0 if pow(ua % p, (p - 1) // 2, p) == 1 else 1
    chi_b = 0 if pow(ub % p, (p - 1) // 2, p) == 1 else 1
    eps_p = (p - 1) // 2 % 2
    return (alpha * beta * eps_p + beta * chi_a + alpha * chi_b) % 2


def hilbert_qp(a, b, p) -> QmodZ:
    """Classical symbol (a, b)_p for nonzero rationals."""
    p = Prime(p)
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroDivisionError("symbol arguments must be nonzero")
    alpha = valuation(a.numerator, p) - valuation(a.denominator, p)
    beta = valuation(b.numerator, p) - valuation(b.denominator, p)
    k = 3 if p == 2 else 1
    bit = _symbol_bit(p, alpha % 2, _unit_residue(a, p, k),
                      beta % 2, _unit_residue(b, p, k))
    return HALF if bit else ZERO_QZ


def hilbert_qp_padic(a, x: PadicNumber) -> QmodZ:
    """Symbol (a, x)_p with a rational and x a certified p-adic value."""
    p = x.p
    a = Fraction(a)
    alpha = valuation(a.numerator, p) - valuation(a.denominator, p)
    k = 3 if p == 2 else 1
    bit = _symbol_bit(p, alpha % 2, _unit_residue(a, p, k),
                      x.valuation % 2, x.unit_mod(k))
    return HALF if bit else ZERO_QZ


def product_formula_check(a, b) -> bool:
    """Reciprocity self-test: the symbols of (a, b) over R and over Q_p for
    p dividing 2ab sum to zero in Q/Z."""
    a, b = Fraction(a), Fraction(b)
    total = hilbert_real(a, b)
    support = abs(2 * a.numerator * a.denominator
                  * b.numerator * b.denominator)
    for p in _prime_divisors(support):
        total = total + hilbert_qp(a, b, p)
    return total == ZERO_QZ


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


# ---------------------------------------------------------------------------
# symbols over extensions
# ---------------------------------------------------------------------------

def hilbert_ext(a, x: LocalFieldElement, S: LocalField | None = None) -> QmodZ:
    """Symbol of (a, x) over the extension S, for rational a and x in S.

    Routes through, in order: the square tests, the unramified-quadratic
    parity rule, and the exhaustive projective conic search with Newton
    lifting.  Raises InconclusiveError when the conic search hits its depth
    cap without a certificate (never observed at the default caps).
    """
    if S is None:
        S = x.field
    a = Fraction(a)
    if a == 0:
        raise ZeroDivisionError("symbol arguments must be nonzero")
    if S.degree == 1:
        return hilbert_qp_padic(a, x.coeffs[0])
    a_elt = S.embed(a)
    if is_square(a_elt):
        return ZERO_QZ
    if is_square(x):
        return ZERO_QZ
    try:
        even = is_norm_unramified_quadratic(x, a)
        return ZERO_QZ if even else HALF
    except NormHypothesisError:
        pass
    return conic_symbol(a_elt, x, S)


def _strip_even_valuation(x: LocalFieldElement, S: LocalField):
    v = x.valuation()
    half = v // 2 if v >= 0 else -((-v + 1) // 2)
    if half > 0:
        return x / S.pi_pow(2 * half)
    if half < 0:
        return x * S.pi_pow(-2 * half)
    return x


def conic_symbol(a_elt: LocalFieldElement, x: LocalFieldElement,
                 S: LocalField, depth_cap=None) -> QmodZ:
    """Decide (a, x) by breadth-first residue refinement of the projective
    conic z^2 = a u^2 + x w^2.

    Nodes are canonical chart forms (first unit coordinate scaled to 1);
    a node is certified liftable as soon as some coordinate satisfies the
    univariate Hensel criterion, which certifies symbol 0; an empty level
    certifies symbol 1/2.
    """
    A = _strip_even_valuation(a_elt, S)
    X = _strip_even_valuation(x, S)
    if A.valuation() % 2 and X.valuation() % 2:
        # (a, x) = (a, -a*x) since (a, -a) = 0; the product has even
        # valuation, so afterwards at most one coefficient is a non-unit
        # and the residue conic is nondegenerate in two coordinates.
        X = _strip_even_valuation(-A * X, S)
    if depth_cap is None:
        depth_cap = 4 * S.e + CONIC_DEPTH_SLACK
    digits = S.residue_digits()
    one = S.one()
    zero = S.zero()
    two = S.from_int(2)

    def F(c):
        z, u, w = c
        return z * z - A * u * u - X * w * w

    def grads(c):
        z, u, w = c
        return (two * z, -two * A * u, -two * X * w)

    def newton_fires(c):
        fv = F(c).val_floor()
        for g in grads(c):
            if g.is_nonzero and fv > 2 * g.valuation():
                return True
        return False

    # level 1: canonical chart forms modulo pi
    nodes = []  # (coords tuple, free indexes)
    for j in range(3):
        free = [i for i in range(3) if i != j]
        fixed = [zero, zero, zero]
        fixed[j] = one
        # coords before j are pinned to digit 0 at depth 1
        tails = [i for i in free if i > j]
        stack = [tuple(fixed)]
        for i in tails:
            new_stack = []
            for base in stack:
                for d in digits:
                    c = list(base)
                    c[i] = d
                    new_stack.append(tuple(c))
            stack = new_stack
        for c in stack:
            if F(c).val_floor() >= 1:
                nodes.append((c, free))

    for k in range(1, depth_cap + 1):
        survivors = []
        for c, free in nodes:
            if newton_fires(c):
                return ZERO_QZ
            survivors.append((c, free))
        if not survivors:
            return HALF
        # extend every free coordinate by a digit at pi^k
        pik = S.pi_pow(k)
        nxt = []
        for c, free in survivors:
            stack = [c]
            for i in free:
                new_stack = []
                for base in stack:
                    for d in digits:
                        cc = list(base)
                        cc[i] = cc[i] + d * pik
                        new_stack.append(tuple(cc))
                stack = new_stack
            for cc in stack:
                if F(cc).val_floor() >= k + 1:
                    nxt.append((cc, free))
        if not nxt:
            return HALF
        if len(nxt) > 20000:
            raise InconclusiveError("conic search level exploded")
        nodes = nxt
    raise InconclusiveError(
        f"conic search inconclusive at depth cap {depth_cap}")
