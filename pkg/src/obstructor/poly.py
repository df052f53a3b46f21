"""Integer multivariate polynomials over named variables.

Terms map exponent vectors to integer coefficients.  Input strings use a
minimal infix grammar over declared variables: integer literals, + - * ^
and parentheses.  Evaluation is generic over any ring whose elements
support +, * and integer right-multiplication, with fast paths for plain
integers modulo m.
"""

from __future__ import annotations

import ast
from fractions import Fraction


class PolyError(ValueError):
    """Malformed polynomial expression or grading violation."""


class MultiPolynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms):
        self.variables = tuple(variables)
        clean = {}
        for ev, c in terms.items():
            c = int(c)
            if c:
                ev = tuple(int(e) for e in ev)
                if len(ev) != len(self.variables):
                    raise PolyError("exponent vector length mismatch")
                clean[ev] = clean.get(ev, 0) + c
        self.terms = {ev: c for ev, c in sorted(clean.items()) if c}

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c, variables):
        n = len(variables)
        return cls(variables, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, name, variables):
        i = tuple(variables).index(name)
        ev = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {ev: 1})

    @classmethod
    def parse(cls, text, variables):
        """Parse the grammar: integers, declared variables, + - * ^, ()."""
        try:
            node = ast.parse(text.replace("^", "**"), mode="eval").body
        except SyntaxError as exc:
            raise PolyError(f"cannot parse {text!r}: {exc}") from None
        return cls._from_ast(node, tuple(variables), text)

    @classmethod
    def _from_ast(cls, node, variables, text):
        rec = lambda n: cls._from_ast(n, variables, text)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return rec(node.left) + rec(node.right)
            if isinstance(node.op, ast.Sub):
                return rec(node.left) - rec(node.right)
            if isinstance(node.op, ast.Mult):
                return rec(node.left) * rec(node.right)
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant)
                        and isinstance(exp.value, int) and exp.value >= 0):
                    raise PolyError(
                        f"exponent must be a non-negative integer in {text!r}")
                return rec(node.left) ** exp.value
            raise PolyError(f"operator not in grammar in {text!r}")
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -rec(node.operand)
            if isinstance(node.op, ast.UAdd):
                return rec(node.operand)
            raise PolyError(f"operator not in grammar in {text!r}")
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise PolyError(f"unknown variable {node.id!r} in {text!r}")
            return cls.variable(node.id, variables)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int):
                raise PolyError(f"only integer literals allowed in {text!r}")
            return cls.constant(node.value, variables)
        raise PolyError(f"unsupported syntax in {text!r}")

    # -- ring structure ----------------------------------------------------

    def _check(self, other):
        if isinstance(other, int):
            return MultiPolynomial.constant(other, self.variables)
        if other.variables != self.variables:
            raise PolyError("mixed variable sets")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for ev, c in other.terms.items():
            terms[ev] = terms.get(ev, 0) + c
        return MultiPolynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPolynomial(self.variables,
                               {ev: -c for ev, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for ev1, c1 in self.terms.items():
            for ev2, c2 in other.terms.items():
                ev = tuple(a + b for a, b in zip(ev1, ev2))
                terms[ev] = terms.get(ev, 0) + c1 * c2
        return MultiPolynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = MultiPolynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, MultiPolynomial)
                and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def degree(self, weights=None):
        if not self.terms:
            return None
        if weights is None:
            weights = (1,) * len(self.variables)
        return max(sum(w * e for w, e in zip(weights, ev))
                   for ev in self.terms)

    def homogeneous_degree(self, weights=None):
        """The common weighted degree of all terms, or None if mixed."""
        if not self.terms:
            return 0
        if weights is None:
            weights = (1,) * len(self.variables)
        degs = {sum(w * e for w, e in zip(weights, ev)) for ev in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def derivative(self, var):
        i = self.variables.index(var) if isinstance(var, str) else var
        terms = {}
        for ev, c in self.terms.items():
            if ev[i]:
                nev = tuple(e - 1 if j == i else e for j, e in enumerate(ev))
                terms[nev] = terms.get(nev, 0) + c * ev[i]
        return MultiPolynomial(self.variables, terms)

    def variables_used(self):
        used = set()
        for ev in self.terms:
            for i, e in enumerate(ev):
                if e:
                    used.add(i)
        return used

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, values):
        """Evaluate at ring elements (one per variable, in order)."""
        values = list(values)
        if len(values) != len(self.variables):
            raise PolyError("value count mismatch")
        maxdeg = [0] * len(values)
        for ev in self.terms:
            for i, e in enumerate(ev):
                maxdeg[i] = max(maxdeg[i], e)
        pows = []
        for v, d in zip(values, maxdeg):
            row = [None, v]
            for k in range(2, d + 1):
                row.append(row[-1] * v)
            pows.append(row)
        acc = None
        for ev, c in self.terms.items():
            term = None
            for i, e in enumerate(ev):
                if e:
                    term = pows[i][e] if term is None else term * pows[i][e]
            term = c if term is None else term * c
            acc = term if acc is None else acc + term
        if acc is None:
            return 0
        return acc

    def evaluate_int_mod(self, values, m):
        """Fast path: integer values modulo m."""
        acc = 0
        for ev, c in self.terms.items():
            t = c % m
            for v, e in zip(values, ev):
                if e:
                    t = t * pow(v, e, m) % m
            acc = (acc + t) % m
        return acc

    def evaluate_fraction(self, values):
        return self.evaluate([Fraction(v) for v in values])

    def substitute(self, replacements):
        """Compose with polynomials over a new variable set (one replacement
        per variable, all sharing the same variables)."""
        if len(replacements) != len(self.variables):
            raise PolyError("replacement count mismatch")
        new_vars = replacements[0].variables
        for r in replacements:
            if r.variables != new_vars:
                raise PolyError("replacements must share one variable set")
        acc = MultiPolynomial.constant(0, new_vars)
        for ev, c in self.terms.items():
            term = MultiPolynomial.constant(c, new_vars)
            for r, e in zip(replacements, ev):
                if e:
                    term = term * r ** e
            acc = acc + term
        return acc

    def specialize(self, assignments):
        """Substitute integer constants for some variables (dict name->int),
        keeping the full variable set."""
        acc = {}
        idx = {name: self.variables.index(name) for name in assignments}
        for ev, c in self.terms.items():
            coef = c
            nev = list(ev)
            for name, value in assignments.items():
                i = idx[name]
                coef *= value ** ev[i]
                nev[i] = 0
            key = tuple(nev)
            acc[key] = acc.get(key, 0) + coef
        return MultiPolynomial(self.variables, acc)

    def kernel_form(self, variable_order=None):
        """(coeffs, exps) arrays for the enumeration kernel."""
        if variable_order is None:
            variable_order = self.variables
        index = [self.variables.index(v) for v in variable_order]
        coeffs, exps = [], []
        for ev, c in self.terms.items():
            coeffs.append(c)
            exps.append([ev[i] for i in index])
        if not coeffs:
            coeffs, exps = [0], [[0] * len(variable_order)]
        return coeffs, exps

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for ev, c in self.terms.items():
            factors = []
            if abs(c) != 1 or not any(ev):
                factors.append(str(abs(c)))
            for v, e in zip(self.variables, ev):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            s = "*".join(factors)
            parts.append(("- " if c < 0 else "+ ") + s)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    __repr__ = __str__
