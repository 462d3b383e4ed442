"""Sparse multivariate polynomials with complex coefficients.

Monomials are exponent tuples over a fixed variable list.  Just enough
arithmetic for deriving and normalizing the Rota-Baxter polynomial systems;
no division, no symbolic solving.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Poly:
    """Map from exponent tuples to complex coefficients over `variables`."""

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], complex], ...]

    @staticmethod
    def from_dict(variables, d) -> "Poly":
        items = tuple(sorted((m, complex(c)) for m, c in d.items() if c != 0))
        return Poly(tuple(variables), items)

    @staticmethod
    def const(variables, c) -> "Poly":
        if c == 0:
            return Poly(tuple(variables), ())
        return Poly.from_dict(variables, {(0,) * len(variables): complex(c)})

    @staticmethod
    def var(variables, name) -> "Poly":
        variables = tuple(variables)
        mono = tuple(1 if v == name else 0 for v in variables)
        if sum(mono) != 1:
            raise KeyError(f"unknown variable {name!r}")
        return Poly.from_dict(variables, {mono: 1.0})

    def _dict(self):
        return dict(self.terms)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        d = self._dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0j) + c
        return Poly.from_dict(self.variables, d)

    def __neg__(self) -> "Poly":
        return Poly(self.variables, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                d[m] = d.get(m, 0j) + c1 * c2
        return Poly.from_dict(self.variables, d)

    __rmul__ = __mul__
    __radd__ = __add__

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return Poly.const(self.variables, other)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for _, c in self.terms)

    def evaluate(self, values: dict[str, complex]) -> complex:
        out = 0j
        for mono, coeff in self.terms:
            v = coeff
            for name, e in zip(self.variables, mono):
                if e:
                    v *= values[name] ** e
            out += v
        return out

    def sign_normalized(self, tol: float = 0.0) -> "Poly":
        """Flip the overall sign so the leading (lowest exponent-tuple)
        coefficient has (re, im) lexicographically positive.  Zero terms below
        tol are dropped first."""
        terms = tuple((m, c) for m, c in self.terms if abs(c) > tol)
        if not terms:
            return Poly(self.variables, ())
        lead = terms[0][1]
        if (lead.real, lead.imag) < (0.0, 0.0):
            terms = tuple((m, -c) for m, c in terms)
        return Poly(self.variables, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.terms:
            factors = []
            for name, e in zip(self.variables, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = _fmt_coeff(coeff, bare=not factors)
            if cs:
                factors.insert(0, cs)
            parts.append("*".join(factors))
        return " + ".join(parts)


def _fmt_coeff(c: complex, bare: bool) -> str:
    def fmt_real(x: float) -> str:
        return repr(int(x)) if x == int(x) else repr(x)

    if c.imag == 0:
        if c.real == 1 and not bare:
            return ""
        return fmt_real(c.real)
    if c.real == 0:
        if c.imag == 1:
            return "i" if bare else "i"
        return f"{fmt_real(c.imag)}*i"
    sign = "+" if c.imag > 0 else "-"
    return f"({fmt_real(c.real)}{sign}{fmt_real(abs(c.imag))}*i)"


# --- tiny parser for polynomial equations ------------------------------------
#
# Accepts "lhs = rhs" or a bare polynomial; +, -, *, ^, parentheses, integer
# and decimal coefficients, the imaginary unit "i", and the given variable
# names.  Used to ingest equation systems written as text.


def parse_equation(text: str, variables) -> Poly:
    """Parse an equation into its left-minus-right difference polynomial."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        return parse_poly(lhs, variables) - parse_poly(rhs, variables)
    return parse_poly(text, variables)


def parse_poly(text: str, variables) -> Poly:
    variables = tuple(variables)
    toks = _ptokens(text)
    p = _PExprParser(toks, variables)
    out = p.parse_expr()
    if p.peek()[0] != "end":
        raise ValueError(f"trailing input in polynomial {text!r}")
    return out


def _ptokens(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            toks.append(("num", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j]))
            i = j
        elif ch in "+-*^()":
            toks.append((ch, ch))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in polynomial")
    toks.append(("end", ""))
    return toks


class _PExprParser:
    def __init__(self, toks, variables):
        self.toks = toks
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse_expr(self) -> Poly:
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self) -> Poly:
        node = self.parse_factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.next()
                node = node * self.parse_factor()
            elif kind in ("num", "name", "("):  # implicit multiplication: 2a, a(b+c)
                node = node * self.parse_factor()
            else:
                return node

    def parse_factor(self) -> Poly:
        if self.peek()[0] == "-":
            self.next()
            return -self.parse_factor()
        if self.peek()[0] == "+":
            self.next()
            return self.parse_factor()
        return self.parse_power()

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            kind, text = self.next()
            if kind != "num" or "." in text:
                raise ValueError("exponent must be a nonnegative integer")
            e = int(text)
            out = Poly.const(self.variables, 1)
            for _ in range(e):
                out = out * base
            return out
        return base

    def parse_atom(self) -> Poly:
        kind, text = self.next()
        if kind == "num":
            return Poly.const(self.variables, float(text))
        if kind == "name":
            return self._name_product(text)
        if kind == "(":
            node = self.parse_expr()
            if self.next()[0] != ")":
                raise ValueError("missing closing parenthesis")
            return node
        raise ValueError(f"unexpected token {text!r} in polynomial")

    def _name_product(self, text: str) -> Poly:
        # "bdy" means b*d*y: split a run of letters into known one-letter
        # variables (and the imaginary unit) unless it names a variable as is
        def single(ch):
            if ch == "i":
                return Poly.const(self.variables, 1j)
            return Poly.var(self.variables, ch)

        if text == "i":
            return Poly.const(self.variables, 1j)
        if text in self.variables:
            return Poly.var(self.variables, text)
        out = Poly.const(self.variables, 1.0)
        for ch in text:
            try:
                out = out * single(ch)
            except KeyError:
                raise ValueError(f"unknown name {text!r} in polynomial") from None
        return out
