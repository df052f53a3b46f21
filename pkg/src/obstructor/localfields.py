"""Finite extensions S/Q_p as unramified-then-Eisenstein towers.

A field is described by a monic integer polynomial f_poly (degree f,
irreducible mod p) cutting out the unramified part U, and a monic Eisenstein
polynomial e_poly (degree e) over U whose root pi uniformizes S.  Elements
are stored as integer coordinate vectors in the power basis pi^i * omega^j,
exact modulo p^M for a working digit count M, together with a denominator
exponent ("shift"): the value is (sum of coordinates) / p^shift.

Because the valuations of the basis monomials are pairwise distinct modulo
e, the normalized valuation of an element is read off coordinate-wise with
no cancellation: val = min over nonzero coordinates of e*val_p(coord) + i.
Core arithmetic is exact integer arithmetic mod p^M, so absolute precision
is only lost through explicit divisions by p, which is what the shift
records.
"""

from __future__ import annotations

from fractions import Fraction

from obstructor.padic import (
    DEFAULT_DIGITS,
    PadicNumber,
    PrecisionError,
    Prime,
    valuation,
)

WORK_SLACK = 20  # extra p-digits carried beyond the requested precision


class FieldError(ValueError):
    """Invalid field description (reducible f_poly, non-Eisenstein e_poly)."""


class LiftError(ArithmeticError):
    """Newton/Hensel criterion not satisfied."""


class InconclusiveError(RuntimeError):
    """A bounded search ended without a certificate either way."""


# ---------------------------------------------------------------------------
# polynomials over F_p (for irreducibility and residue-field work)
# ---------------------------------------------------------------------------

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, g, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce modulo monic g
    dg = len(g) - 1
    while len(out) > dg:
        top = out.pop()
        if top:
            for k in range(dg):
                out[-dg + k] = (out[-dg + k] - top * g[k]) % p
    return _fp_trim(out)


def _fp_powmod(a, n, g, p):
    result = [1]
    base = _fp_mulmod(a, [1], g, p)
    while n:
        if n & 1:
            result = _fp_mulmod(result, base, g, p)
        base = _fp_mulmod(base, base, g, p)
        n >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # a mod b with b made monic
        inv = pow(b[-1], -1, p)
        b = [c * inv % p for c in b]
        while len(a) >= len(b):
            top = a[-1]
            if top:
                for k in range(len(b)):
                    a[len(a) - len(b) + k] = (
                        a[len(a) - len(b) + k] - top * b[k]) % p
            a.pop()
            _fp_trim(a)
            if not a:
                break
        a, b = b, a
    return a


def is_irreducible_mod_p(coeffs, p) -> bool:
    """Rabin test for a monic integer polynomial modulo p."""
    g = [c % p for c in coeffs]
    f = len(g) - 1
    if f < 1 or g[-1] != 1:
        return False
    if f == 1:
        return True
    x = [0, 1]
    xq = _fp_powmod(x, p ** f, g, p)
    if _fp_trim([(a - b) % p for a, b in
                 zip(xq + [0] * 2, x + [0] * len(xq))][:max(len(xq), 2)]):
        return False
    for r in {r for r in range(2, f + 1) if f % r == 0 and _is_prime(r)}:
        xr = _fp_powmod(x, p ** (f // r), g, p)
        diff = [(a - b) % p for a, b in zip(
            xr + [0] * max(0, 2 - len(xr)), x + [0] * max(0, len(xr) - 2))]
        d = _fp_gcd(g, _fp_trim(diff), p)
        if len(d) > 1:
            return False
    return True


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_irreducible(p, f):
    """Deterministic unramified defining polynomial: the lexicographically
    smallest monic irreducible of degree f mod p (constant coefficient
    first)."""
    if f == 1:
        return (0, 1)
    from itertools import product
    for lower in product(range(p), repeat=f):
        coeffs = tuple(lower) + (1,)
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible of degree {f} mod {p}")  # unreachable


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

def _as_uvec(c, f):
    """Coerce an e_poly coefficient (int or length-f vector) to a tuple."""
    if isinstance(c, (int,)):
        return (c,) + (0,) * (f - 1)
    c = tuple(int(x) for x in c)
    if len(c) != f:
        raise FieldError(f"coefficient vector must have length {f}")
    return c


def _uvec_val(vec, p, cap):
    """min p-valuation over entries (None when all vanish mod p^cap)."""
    best = None
    for c in vec:
        c %= p ** cap
        if c:
            v = valuation(c, p)
            if best is None or v < best:
                best = v
    return best


class LocalField:
    """Descriptor of a finite extension of Q_p; immutable and shareable."""

    def __init__(self, p, f_poly=None, e_poly=None, digits=DEFAULT_DIGITS):
        p = Prime(p)
        self.p = p
        self.digits = digits
        self.work = digits + WORK_SLACK
        self.modulus = p ** self.work
        if f_poly is None:
            f_poly = (0, 1)
        f_poly = tuple(int(c) for c in f_poly)
        if len(f_poly) < 2 or f_poly[-1] != 1:
            raise FieldError("f_poly must be monic of degree >= 1")
        self.f = len(f_poly) - 1
        if not is_irreducible_mod_p(f_poly, p):
            raise FieldError(f"f_poly {f_poly} reducible mod {p}")
        self.f_poly = f_poly
        if e_poly is None:
            e_poly = (-p, 1)
        epv = tuple(_as_uvec(c, self.f) for c in e_poly)
        if len(epv) < 2 or epv[-1] != (1,) + (0,) * (self.f - 1):
            raise FieldError("e_poly must be monic of degree >= 1")
        self.e = len(epv) - 1
        for i in range(self.e):
            v = _uvec_val(epv[i], p, self.work)
            if v is not None and v < 1:
                raise FieldError("e_poly not Eisenstein: "
                                 f"coefficient {i} has valuation < 1")
        if _uvec_val(epv[0], p, self.work) != 1:
            raise FieldError("e_poly not Eisenstein: "
                             "constant term must have valuation exactly 1")
        self.e_poly = epv
        self.degree = self.e * self.f
        self.q = p ** self.f
        self._init_tables()
        self._pi_pows = None
        self._pi_inv = None

    # -- construction helpers -------------------------------------------

    @classmethod
    def qp(cls, p, digits=DEFAULT_DIGITS):
        return cls(p, None, None, digits)

    def _init_tables(self):
        p, f, e, mod = self.p, self.f, self.e, self.modulus
        # omega^b for b in [f, 2f-2], as length-f vectors
        omega = []
        if f > 1:
            cur = tuple((-self.f_poly[j]) % mod for j in range(f))
            omega.append(cur)
            for _ in range(f, 2 * f - 2):
                shifted = (0,) + cur[:-1]
                top = cur[-1]
                cur = tuple((shifted[j] + top * omega[0][j]) % mod
                            for j in range(f))
                omega.append(cur)
        self._omega = omega
        # pi^a for a in [e, 2e-2], as lists of e U-vectors
        pred = {}
        if e > 1:
            base = [tuple((-c) % mod for c in self.e_poly[i])
                    for i in range(e)]
            pred[e] = base
            for a in range(e + 1, 2 * e - 1):
                prev = pred[a - 1]
                top = prev[e - 1]
                row = [self._umul(top, base[0])]
                for i in range(1, e):
                    row.append(self._uadd(
                        prev[i - 1], self._umul(top, base[i])))
                pred[a] = row
        self._pired = pred

    # -- U-coefficient arithmetic ----------------------------------------

    def _uadd(self, a, b):
        mod = self.modulus
        return tuple((x + y) % mod for x, y in zip(a, b))

    def _umul(self, a, b):
        mod, f = self.modulus, self.f
        if f == 1:
            return (a[0] * b[0] % mod,)
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % mod
        for b_ix in range(2 * f - 2, f - 1, -1):
            top = conv[b_ix]
            if top:
                red = self._omega[b_ix - f]
                for j in range(f):
                    conv[j] = (conv[j] + top * red[j]) % mod
            conv[b_ix] = 0
        return tuple(conv[:f])

    def _mul_core(self, A, B):
        e, f, mod = self.e, self.f, self.modulus
        Au = [A[i * f:(i + 1) * f] for i in range(e)]
        Bu = [B[i * f:(i + 1) * f] for i in range(e)]
        zero = (0,) * f
        C = [zero] * (2 * e - 1) if e > 1 else [zero]
        for i, au in enumerate(Au):
            if any(au):
                for j, bu in enumerate(Bu):
                    if any(bu):
                        C[i + j] = self._uadd(C[i + j], self._umul(au, bu))
        for a in range(2 * e - 2, e - 1, -1):
            ca = C[a]
            if any(ca):
                red = self._pired[a]
                for i in range(e):
                    C[i] = self._uadd(C[i], self._umul(ca, red[i]))
            C[a] = zero
        out = []
        for i in range(e):
            out.extend(C[i])
        return tuple(out)

    # -- element constructors ---------------------------------------------

    def element(self, vec, shift=0, exact_zero=False):
        return LocalFieldElement(self, tuple(c % self.modulus for c in vec),
                                 shift, exact_zero)

    def zero(self):
        return self.element((0,) * self.degree, exact_zero=True)

    def one(self):
        return self.from_int(1)

    def from_int(self, c):
        vec = (c % self.modulus,) + (0,) * (self.degree - 1)
        return LocalFieldElement(self, vec, 0, exact_zero=(c == 0))

    def from_rational(self, x, den=None):
        if den is not None:
            x = Fraction(x, den)
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        if n == 0:
            return self.zero()
        vd = valuation(d, self.p)
        du = d // self.p ** vd
        c = n * pow(du, -1, self.modulus) % self.modulus
        vec = (c,) + (0,) * (self.degree - 1)
        return LocalFieldElement(self, vec, vd)._normalized()

    def embed(self, x):
        """Embed an int, Fraction or PadicNumber; preserves valuation up to
        the ramification factor e."""
        if isinstance(x, LocalFieldElement):
            if x.field is self or x.field == self:
                return x
            if x.field.degree == 1 and x.field.p == self.p:
                # base-field element: reinterpret the integer core
                core = self.from_int(x.vec[0])
                return core / self.from_int(x.field.p ** x.shift) \
                    if x.shift else core
            raise ValueError("cross-field embedding only supported "
                             "from the base field")
        if isinstance(x, PadicNumber):
            if x.p != self.p:
                raise ValueError("mixed primes")
            if x.is_exact_zero:
                return self.zero()
            if x.is_zero_at_precision:
                raise PrecisionError("cannot embed zero-at-precision value")
            unit = self.from_int(x.unit_mod(min(x.digits, self.work)))
            return unit * self.pi_pow(self.e * x.valuation) \
                if x.valuation >= 0 else \
                unit * self.pi_pow(-self.e * x.valuation).inverse()
        return self.from_rational(x)

    def uniformizer(self):
        if self.e == 1:
            b0 = self.e_poly[0]
            vec = tuple((-c) % self.modulus for c in b0) + \
                (0,) * (self.degree - self.f)
            return self.element(vec)
        vec = [0] * self.degree
        vec[self.f] = 1
        return self.element(vec)

    def pi_pow(self, k):
        """pi^k for k >= 0 (cached)."""
        if k < 0:
            raise ValueError("negative power; use inverse()")
        if self._pi_pows is None:
            self._pi_pows = [self.one(), self.uniformizer()]
        while len(self._pi_pows) <= k:
            self._pi_pows.append(self._pi_pows[-1] * self._pi_pows[1])
        return self._pi_pows[k]

    def pi_inverse(self):
        if self._pi_inv is None:
            self._pi_inv = self.uniformizer().inverse()
        return self._pi_inv

    def residue_digits(self):
        """All q residue representatives as elements (coefficients of the
        omega-powers in [0, p))."""
        from itertools import product
        out = []
        for c in product(range(self.p), repeat=self.f):
            vec = tuple(c) + (0,) * (self.degree - self.f)
            out.append(self.element(vec))
        return out

    def residue_vectors(self):
        from itertools import product
        return list(product(range(self.p), repeat=self.f))

    # -- residue field F_q --------------------------------------------------

    def gf_mul(self, a, b):
        p, f = self.p, self.f
        if f == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        for b_ix in range(2 * f - 2, f - 1, -1):
            top = conv[b_ix]
            if top:
                red = tuple(r % p for r in self._omega[b_ix - f]) \
                    if f > 1 else ()
                for j in range(f):
                    conv[j] = (conv[j] + top * red[j]) % p
            conv[b_ix] = 0
        return tuple(conv[:f])

    def gf_pow(self, a, n):
        out = (1,) + (0,) * (self.f - 1)
        base = a
        while n:
            if n & 1:
                out = self.gf_mul(out, base)
            base = self.gf_mul(base, base)
            n >>= 1
        return out

    # -- identity -----------------------------------------------------------

    def descriptor(self):
        return {"p": int(self.p),
                "f_poly": [int(c) for c in self.f_poly],
                "e_poly": [[int(x) for x in c] for c in self.e_poly]}

    def _key(self):
        return (int(self.p), self.f_poly, self.e_poly)

    def __eq__(self, other):
        return isinstance(other, LocalField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_qp(self):
        return self.degree == 1

    def __repr__(self):
        if self.is_qp:
            return f"Q_{self.p}"
        return f"Ext(p={self.p}, e={self.e}, f={self.f})"


class LocalFieldElement:
    """Immutable element of a LocalField (integer core / p^shift)."""

    __slots__ = ("field", "vec", "shift", "exact_zero")

    def __init__(self, field, vec, shift=0, exact_zero=False):
        self.field = field
        self.vec = vec
        self.shift = shift
        self.exact_zero = exact_zero

    # -- normalization and state -------------------------------------------

    def _normalized(self):
        if self.shift == 0 or self.exact_zero:
            return self
        p = self.field.p
        vec, shift = self.vec, self.shift
        while shift > 0 and all(c % p == 0 for c in vec):
            vec = tuple(c // p for c in vec)
            shift -= 1
        if vec is self.vec:
            return self
        return LocalFieldElement(self.field, vec, shift, self.exact_zero)

    def core_val(self):
        """pi-valuation of the integer core (None when core vanishes)."""
        e, f, p = self.field.e, self.field.f, self.field.p
        best = None
        for k, c in enumerate(self.vec):
            if c:
                i = k // f
                v = e * valuation(c, p) + i
                if best is None or v < best:
                    best = v
        return best

    def val_floor(self):
        """Certified lower bound for the valuation (always defined)."""
        cv = self.core_val()
        bound = self.field.e * (self.field.work - self.shift)
        if cv is None:
            return bound
        return min(cv, bound) - self.field.e * self.shift

    @property
    def is_exact_zero(self):
        return self.exact_zero

    @property
    def is_zero_at_precision(self):
        return not self.exact_zero and self.core_val() is None

    @property
    def is_nonzero(self):
        return self.core_val() is not None

    def valuation(self):
        if self.exact_zero:
            raise ZeroDivisionError("valuation of exact zero")
        cv = self.core_val()
        if cv is None:
            raise PrecisionError(
                "value indistinguishable from zero "
                f"(val >= {self.val_floor()})")
        return cv - self.field.e * self.shift

    def abs_precision(self):
        """The element is certified modulo pi^abs_precision."""
        return self.field.e * (self.field.work - self.shift)

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LocalFieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other
        return self.field.embed(other)

    def __add__(self, other):
        other = self._coerce(other)
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        p, mod = self.field.p, self.field.modulus
        s = max(self.shift, other.shift)
        a = p ** (s - self.shift)
        b = p ** (s - other.shift)
        vec = tuple((x * a + y * b) % mod
                    for x, y in zip(self.vec, other.vec))
        return LocalFieldElement(self.field, vec, s)._normalized()

    def __neg__(self):
        if self.exact_zero:
            return self
        mod = self.field.modulus
        return LocalFieldElement(self.field,
                                 tuple((-c) % mod for c in self.vec),
                                 self.shift, self.exact_zero)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.exact_zero or other.exact_zero:
            return self.field.zero()
        vec = self.field._mul_core(self.vec, other.vec)
        return LocalFieldElement(self.field, vec,
                                 self.shift + other.shift)._normalized()

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __radd__(self, other):
        return self._coerce(other) + self

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _unit_core_inverse(self, vec):
        """Inverse of a unit integer core by solving the multiplication
        matrix modulo p^work (pivots are p-units because the norm is)."""
        field = self.field
        n, p, mod = field.degree, field.p, field.modulus
        cols = []
        for k in range(n):
            basis = [0] * n
            basis[k] = 1
            cols.append(field._mul_core(vec, tuple(basis)))
        # rows of augmented system M a = e0
        A = [[cols[k][r] for k in range(n)] + [1 if r == 0 else 0]
             for r in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if A[r][col] % p), None)
            if piv is None:
                raise ZeroDivisionError("core is not a unit")
            A[col], A[piv] = A[piv], A[col]
            inv = pow(A[col][col], -1, mod)
            A[col] = [x * inv % mod for x in A[col]]
            for r in range(n):
                if r != col and A[r][col]:
                    fac = A[r][col]
                    A[r] = [(x - fac * y) % mod
                            for x, y in zip(A[r], A[col])]
        return tuple(A[k][n] for k in range(n))

    def inverse(self):
        if self.exact_zero:
            raise ZeroDivisionError("inversion of exact zero")
        cv = self.core_val()
        if cv is None:
            raise PrecisionError("inversion of a value indistinguishable "
                                 "from zero")
        field = self.field
        e, p = field.e, field.p
        m0, r = divmod(cv, e)
        vec = self.vec
        if m0:
            q = p ** m0
            vec = tuple(c // q for c in vec)
        extra_shift = 0
        pi_fac = None
        if r:
            lifted = field._mul_core(vec, field.pi_pow(e - r).vec)
            vec = tuple(c // p for c in lifted)
            extra_shift = 1
            pi_fac = field.pi_pow(e - r)
        inv_core = self._unit_core_inverse(vec)
        out = LocalFieldElement(field, inv_core, 0)
        if pi_fac is not None:
            out = out * pi_fac
            out = LocalFieldElement(field, out.vec, out.shift + extra_shift)
        # net power of p: multiply by p^(shift - m0)
        net = self.shift - m0
        if net > 0:
            mod = field.modulus
            q = p ** net
            out = LocalFieldElement(field,
                                    tuple(c * q % mod for c in out.vec),
                                    out.shift)
        elif net < 0:
            out = LocalFieldElement(field, out.vec, out.shift - net)
        return out._normalized()

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # -- views ---------------------------------------------------------------

    @property
    def coeffs(self):
        """Power-basis coordinates as PadicNumbers (the type's public view)."""
        field = self.field
        p, work = field.p, field.work
        out = []
        for c in self.vec:
            if c == 0:
                out.append(PadicNumber.zero_at_precision(p, work - self.shift)
                           if not self.exact_zero else PadicNumber.zero(p))
            else:
                v = valuation(c, p)
                unit = (c // p ** v) % p ** (work - v)
                out.append(PadicNumber(p, v - self.shift, unit, work - v))
        return tuple(out)

    def residue(self):
        """Image in F_q for integral elements, as a length-f vector."""
        if self.shift:
            norm = self._normalized()
            if norm.shift:
                raise ValueError("residue of a non-integral element")
            return norm.residue()
        p, f = self.field.p, self.field.f
        return tuple(c % p for c in self.vec[:f])

    def digits(self, k):
        """First k pi-adic digits (each a residue vector); requires an
        integral element."""
        x = self._normalized()
        if x.shift:
            raise ValueError("digits of a non-integral element")
        out = []
        pi_inv = self.field.pi_inverse()
        for _ in range(k):
            d = x.residue()
            out.append(d)
            rep = self.field.element(d + (0,) * (self.field.degree -
                                                 self.field.f))
            x = (x - rep) * pi_inv
            x = x._normalized()
            if x.shift:  # subtraction was exact; division by pi is too
                raise AssertionError("digit extraction lost integrality")
        return tuple(out)

    def canonical_mod(self, k):
        """Hashable canonical form of the value modulo pi^k."""
        return self.digits(k)

    def __eq__(self, other):
        if not isinstance(other, LocalFieldElement):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).core_val() is None

    __hash__ = None

    def __repr__(self):
        try:
            v = self.valuation()
            return f"<elt val={v} of {self.field!r}>"
        except (ZeroDivisionError, PrecisionError):
            return f"<zero-ish elt of {self.field!r}>"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def val(x: LocalFieldElement) -> int:
    """Normalized valuation (val(pi) = 1).  Errors on zero-at-precision."""
    return x.valuation()


def poly_eval(coeffs, x):
    """Horner evaluation; coeffs from constant upward, coerced into x's
    field."""
    field = x.field
    acc = field.zero()
    for c in reversed([field.embed(c) if not isinstance(c, LocalFieldElement)
                       else c for c in coeffs]):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    return [i * c if isinstance(c, int) else c * i
            for i, c in enumerate(coeffs)][1:]


def hensel_lift(coeffs, a: LocalFieldElement,
                target: int | None = None) -> LocalFieldElement:
    """Newton-lift a root of the univariate polynomial from the approximation
    a, under the criterion val(f(a)) > 2 val(f'(a)).

    Returns r with val(f(r)) >= target (default: the field's certified
    digits) and val(r - a) > val(f'(a)).
    """
    field = a.field
    coeffs = [c if isinstance(c, LocalFieldElement) else field.embed(c)
              for c in coeffs]
    if len(coeffs) == 2:  # linear: exact solve from any start
        return -coeffs[0] / coeffs[1]
    deriv = poly_derivative(coeffs)
    fa = poly_eval(coeffs, a)
    fpa = poly_eval(deriv, a)
    if fpa.core_val() is None:
        raise LiftError("derivative indistinguishable from zero")
    dv = fpa.valuation()
    fv = fa.val_floor()
    if fv <= 2 * dv:
        raise LiftError(f"criterion failed: val(f(a)) = {fv} "
                        f"<= 2*val(f'(a)) = {2 * dv}")
    if target is None:
        target = field.e * field.digits
    r = a
    fr = fa
    for _ in range(64):
        if fr.val_floor() >= target:
            return r
        fpr = poly_eval(deriv, r)
        r = r - fr / fpr
        new_fr = poly_eval(coeffs, r)
        if new_fr.val_floor() <= fr.val_floor() and new_fr.is_nonzero:
            raise PrecisionError("Newton iteration stalled before reaching "
                                 f"precision {target}")
        fr = new_fr
    raise PrecisionError("Newton iteration did not converge")


def _two_val(field):
    """val_S(2): e * val_p(2)."""
    return field.e if field.p == 2 else 0


def _unit_candidates(field, depth):
    """Unit representatives modulo pi^(depth+1): unit first digit, free
    digits above."""
    from itertools import product
    digits = field.residue_digits()
    unit_digits = [d for d, vecr in zip(digits, field.residue_vectors())
                   if any(vecr)]
    if depth == 0:
        for d in unit_digits:
            yield d
        return
    higher = field.residue_digits()
    for d0 in unit_digits:
        for rest in product(higher, repeat=depth):
            x = d0
            for k, dk in enumerate(rest, start=1):
                x = x + dk * field.pi_pow(k)
            yield x


def _max_square_proximity(field, u, cap):
    """max over units t of min(val(u - t^2), cap), scanning t modulo
    pi^(E2+1) which determines t^2 modulo pi^(2*E2+1)."""
    e2 = _two_val(field)
    best = 0
    for t in _unit_candidates(field, e2):
        v = (u - t * t).val_floor()
        if v >= cap:
            return cap, t
        if v > best:
            best = v
    return best, None


def is_square(x: LocalFieldElement, with_root=False):
    """Square test in S*: even valuation and unit part a square modulo
    pi^(2*val_S(2)+1), confirmed by a Hensel lift."""
    v = x.valuation()
    field = x.field
    e2 = _two_val(field)
    threshold = 2 * e2 + 1
    if x.abs_precision() - v < threshold:
        raise PrecisionError("square test needs "
                             f"{threshold} digits beyond the unit part")
    if v % 2:
        return (False, None) if with_root else False
    u = x / field.pi_pow(v) if v >= 0 else x * field.pi_pow(-v)
    if field.p != 2:
        # Euler criterion in the residue field
        r = u.residue()
        if field.gf_pow(r, (field.q - 1) // 2) != (1,) + (0,) * (field.f - 1):
            return (False, None) if with_root else False
        t = _residue_sqrt(field, r)
    else:
        prox, t = _max_square_proximity(field, u, threshold)
        if prox < threshold:
            return (False, None) if with_root else False
    root_u = hensel_lift([-u, field.zero(), field.one()], t)
    if not with_root:
        return True
    half_v = v // 2
    root = root_u * field.pi_pow(half_v) if half_v >= 0 else \
        root_u * field.pi_pow(-half_v).inverse()
    return True, root


def _residue_sqrt(field, r):
    """A square root of r in F_q, returned as a digit element."""
    for d, vecr in zip(field.residue_digits(), field.residue_vectors()):
        if field.gf_mul(vecr, vecr) == r:
            return d
    raise ArithmeticError("residue square root not found")


def sqrt_element(x: LocalFieldElement) -> LocalFieldElement:
    ok, root = is_square(x, with_root=True)
    if not ok:
        raise ValueError("element is not a square")
    return root


def nth_root_element(x: LocalFieldElement, d: int):
    """A d-th root of x in S, or None when there is none.

    Tame d (p not dividing d): residue-field root plus Hensel.  Wild d:
    proximity search modulo pi^(2*val_S(d)+1), which the unit part of a
    d-th power must meet, then Hensel on T^d - u.
    """
    if d < 1:
        raise ValueError("root order must be positive")
    if d == 1:
        return x
    field = x.field
    v = x.valuation()
    if v % d:
        return None
    ew = field.e * valuation(d, field.p) if d % field.p == 0 else 0
    threshold = 2 * ew + 1
    if x.abs_precision() - v < threshold:
        raise PrecisionError(f"root test needs {threshold} digits "
                             "beyond the unit part")
    u = x / field.pi_pow(v) if v >= 0 else x * field.pi_pow(-v)
    t = None
    if ew == 0:
        r = u.residue()
        for dig, vecr in zip(field.residue_digits(),
                             field.residue_vectors()):
            if any(vecr) and field.gf_pow(vecr, d) == r:
                t = dig
                break
    else:
        for cand in _unit_candidates(field, ew):
            if (u - cand ** d).val_floor() >= threshold:
                t = cand
                break
    if t is None:
        return None
    coeffs = [-u] + [field.zero()] * (d - 1) + [field.one()]
    root_u = hensel_lift(coeffs, t)
    w = v // d
    return root_u * field.pi_pow(w) if w >= 0 else \
        root_u * field.pi_pow(-w).inverse()


class NormHypothesisError(ValueError):
    """The unramified-quadratic norm rule was invoked outside its scope."""


def is_norm_unramified_quadratic(x: LocalFieldElement, a) -> bool:
    """Norm test for the unramified quadratic extension S(sqrt a)/S: x is a
    norm iff val(x) is even.  Raises NormHypothesisError unless a is a
    non-square whose square root generates an unramified extension."""
    field = x.field
    emb = field.embed(Fraction(a))
    va = emb.valuation()
    if va % 2:
        raise NormHypothesisError(
            "sqrt(a) generates a ramified extension (odd valuation)")
    u = emb / field.pi_pow(va) if va >= 0 else emb * field.pi_pow(-va)
    e2 = _two_val(field)
    threshold = 2 * e2 + 1
    prox, _ = _max_square_proximity(field, u, threshold)
    if prox >= threshold:
        raise NormHypothesisError("a is a square in S")
    if prox < 2 * e2:
        raise NormHypothesisError(
            "sqrt(a) generates a ramified extension")
    return x.valuation() % 2 == 0


# ---------------------------------------------------------------------------
# extension catalogs
# ---------------------------------------------------------------------------

class ExtensionCatalog:
    """Pairwise non-isomorphic extensions of Q_p of a fixed degree."""

    def __init__(self, p, degree, entries, complete):
        self.p = Prime(p)
        self.degree = degree
        self.entries = list(entries)
        self.complete = complete

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return (f"ExtensionCatalog(p={self.p}, degree={self.degree}, "
                f"n={len(self.entries)}, complete={self.complete})")


def _root_search_depth(field):
    e, p = field.e, field.p
    return 4 * e * (1 + valuation(e, p) if e % p == 0 else 1) + 8


def has_root(coeffs, field: LocalField) -> bool:
    """Whether the monic polynomial (integral coefficients, given as field
    elements or coercibles) has a root in the ring of integers of field.

    Breadth-first refinement over pi-adic digits; a node is kept while the
    polynomial vanishes to the depth explored, and certified by the Hensel
    criterion as soon as it fires.  An empty level certifies non-existence.
    """
    coeffs = [c if isinstance(c, LocalFieldElement) else field.embed(c)
              for c in coeffs]
    # pure slope-1 Newton polygon: every root has valuation 1, so substitute
    # x = pi*y and divide; the transformed polynomial has unit roots and the
    # search prunes at depth 1 instead of drifting through levels where every
    # term already vanishes.
    deg = len(coeffs) - 1
    vals = [c.val_floor() if not c.is_nonzero else c.valuation()
            for c in coeffs]
    if (deg >= 1 and vals[-1] == 0 and vals[0] == deg
            and all(vals[i] >= deg - i for i in range(deg))):
        pi_inv = field.pi_inverse()
        coeffs = [c * field.pi_pow(i) * pi_inv ** deg if i < deg else c
                  for i, c in enumerate(coeffs)]
    deriv = poly_derivative(coeffs)
    depth_cap = _root_search_depth(field)
    nodes = [field.zero()]
    digits = field.residue_digits()
    for k in range(depth_cap):
        nxt = []
        pik = field.pi_pow(k)
        for x in nodes:
            for d in digits:
                y = x + d * pik if k else d
                fy = poly_eval(coeffs, y)
                if fy.val_floor() < k + 1:
                    continue
                fpy = poly_eval(deriv, y)
                if fpy.is_nonzero and \
                        fy.val_floor() > 2 * fpy.valuation():
                    hensel_lift(coeffs, y)
                    return True
                nxt.append(y)
        if not nxt:
            return False
        if len(nxt) > 4096:
            raise InconclusiveError("root search level exploded")
        nodes = nxt
    raise InconclusiveError("root search hit the depth cap")


def _power_coset_reps(p, k, e):
    """Lexicographically smallest representatives of (Z/p^k)* modulo e-th
    powers."""
    m = p ** k
    units = [u for u in range(1, m) if u % p]
    powers = {pow(u, e, m) for u in units}
    reps = []
    covered = set()
    for u in units:
        if u not in covered:
            reps.append(u)
            covered |= {u * w % m for w in powers}
    return reps


def _eisenstein_candidates(p, e, f, m_prec, budget):
    """Eisenstein coefficient tuples modulo the Krasner-style bound
    p^m_prec, in lexicographic order; truncated at budget.

    Substituting pi -> u*pi (u a unit) maps the coefficient box to itself
    and rescales the constant term by u^(-e), so over Q_p the constant term
    only needs to range over p times coset representatives of units modulo
    e-th powers.
    """
    from itertools import product
    span = p ** (m_prec - 1)
    free = [tuple(pc * p for pc in c)
            for c in product(range(span), repeat=f)]
    if f == 1:
        unit_const = [(p * u,) for u in _power_coset_reps(p, m_prec - 1, e)]
    else:
        unit_const = [v for v in free
                      if any(x % p ** 2 for x in v)]  # val exactly 1
    total = len(unit_const) * len(free) ** (e - 1)
    combos = product(unit_const, *([free] * (e - 1)))
    out = []
    for combo in combos:
        out.append(tuple(combo))
        if len(out) >= budget:
            return out, total <= budget
    return out, True


_catalog_cache = {}


def enumerate_extensions(p, d, digits=DEFAULT_DIGITS, cap=4,
                         budget=8192) -> ExtensionCatalog:
    """All extensions of Q_p of degree d up to isomorphism.

    For each factorization d = e*f the unramified part is canonical and the
    Eisenstein polynomials are enumerated with coefficients modulo
    p^(2*val_p(e)+2), which pins the generated field; duplicates are removed
    by the two-sided root test.  The completeness flag drops when the
    coefficient budget truncated the enumeration.
    """
    p = Prime(p)
    key = (int(p), d, digits, budget)
    if key in _catalog_cache:
        return _catalog_cache[key]
    if d > cap:
        raise ValueError(f"degree {d} exceeds the enumeration cap {cap}")
    entries = []
    complete = True
    for f in range(1, d + 1):
        if d % f:
            continue
        e = d // f
        f_poly = smallest_irreducible(p, f)
        if e == 1:
            entries.append(LocalField(p, f_poly, None, digits))
            continue
        m_prec = 2 * valuation(e, p) + 2 if e % p == 0 else 2
        cands, full = _eisenstein_candidates(p, e, f, m_prec, budget)
        complete = complete and full
        reps = []
        rep_invariant = []
        seen_keys = set()
        for lower in cands:
            e_poly = list(lower) + [(1,) + (0,) * (f - 1)]
            cand = LocalField(p, f_poly, e_poly, digits)
            # sharp per-candidate Krasner key: coefficients truncated at
            # p^(floor(2*val(g'(pi))/e) + 1) pin the field, so an already
            # seen key needs no root test.
            dv = _epoly_derivative_val(cand)
            m_sharp = min(2 * dv // e + 1, m_prec)
            key = (dv, tuple(tuple(x % p ** m_sharp for x in c)
                             for c in e_poly))
            if key in seen_keys:
                continue
            seen_keys.add(key)
            new = True
            for rep, inv in zip(reps, rep_invariant):
                if inv != dv:
                    continue
                if has_root(_epoly_elements(rep, cand), cand):
                    # same degree over the same unramified part, so a root
                    # either way already forces isomorphism; check the
                    # reverse direction as a consistency assertion
                    assert has_root(_epoly_elements(cand, rep), rep)
                    new = False
                    break
            if new:
                reps.append(cand)
                rep_invariant.append(dv)
        entries.extend(reps)
    catalog = ExtensionCatalog(p, d, entries, complete)
    _catalog_cache[key] = catalog
    return catalog


def _epoly_derivative_val(field: LocalField) -> int:
    """val(g'(pi)) for the field's own Eisenstein polynomial; an isomorphism
    invariant used to bucket root tests."""
    coeffs = _epoly_elements(field, field)
    return poly_eval(poly_derivative(coeffs),
                     field.uniformizer()).valuation()


def _epoly_elements(source: LocalField, target: LocalField):
    """Coefficients of source.e_poly as elements of target (same canonical
    unramified part)."""
    if source.f != target.f or source.f_poly != target.f_poly:
        raise ValueError("root test requires a common unramified part")
    out = []
    for c in source.e_poly:
        vec = tuple(x % target.modulus for x in c) + \
            (0,) * (target.degree - target.f)
        out.append(target.element(vec))
    return out
