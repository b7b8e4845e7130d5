"""Sparse multivariate polynomials and rational functions over Q.

Polynomials are immutable maps from packed monomials to nonzero
coefficients and carry a :class:`VariableTable` fixing the variable order.
Coefficients are :class:`~fractions.Fraction`; partial substitution of
values from Q(sqrt3) may produce :class:`~curvlie.exact.QSqrt3`
coefficients, which the arithmetic handles transparently.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as igcd, lcm as ilcm
from typing import Iterable, Mapping

from . import kernels
from . import monomial as mono
from .exact import QSqrt3, format_rational, to_fraction, to_qs3_or_fraction
from .monomial import LEX, MonomialOrder, get_order

STANDARD_VARIABLES = (
    "l",
    "x1", "y1", "z1", "x2", "y2", "z2",
    "u1", "v1", "w1", "u2", "v2", "w2",
    "a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3",
)


class VariableMismatch(ValueError):
    """Raised when polynomials over different variable tables are combined."""


class MissingVariable(KeyError):
    pass


class VariableTable:
    """An ordered, immutable list of variable names.

    Earlier names are larger in the lexicographic order.
    """

    __slots__ = ("names", "index", "nvars", "gmask", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n):
                raise ValueError(f"invalid variable name {n!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "nvars", len(names))
        object.__setattr__(self, "gmask", mono.guard_mask(len(names)))
        object.__setattr__(self, "_hash", hash(names))

    def __setattr__(self, name, value):
        raise AttributeError("VariableTable is immutable")

    def __eq__(self, other):
        return isinstance(other, VariableTable) and other.names == self.names

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.nvars

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    def __repr__(self):
        return f"VariableTable({list(self.names)!r})"

    def extend(self, extra: Iterable[str]) -> "VariableTable":
        """A new table with ``extra`` names appended (lowest in lex order)."""
        extra = [n for n in extra if n not in self.index]
        return VariableTable(self.names + tuple(extra))

    def var_shift(self, name: str) -> int:
        return mono.shift_of(self.index[name], self.nvars)


DEFAULT_TABLE = VariableTable(STANDARD_VARIABLES)


def _clean_coeff(c):
    if isinstance(c, QSqrt3):
        return to_qs3_or_fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Fraction):
        return c
    return to_fraction(c)


class Polynomial:
    """Sparse polynomial ``{packed monomial: coefficient}`` over a table."""

    __slots__ = ("terms", "table", "_hash")

    def __init__(self, terms: Mapping[int, object] | None, table: VariableTable):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _clean_coeff(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, terms: dict, table: VariableTable) -> "Polynomial":
        # terms already clean: nonzero coefficients of canonical type
        p = object.__new__(cls)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "table", table)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, table: VariableTable = DEFAULT_TABLE) -> "Polynomial":
        return cls._raw({}, table)

    @classmethod
    def constant(cls, c, table: VariableTable = DEFAULT_TABLE) -> "Polynomial":
        return cls({0: c}, table)

    @classmethod
    def var(cls, name: str, table: VariableTable = DEFAULT_TABLE) -> "Polynomial":
        if name not in table:
            raise MissingVariable(name)
        return cls._raw({1 << table.var_shift(name): Fraction(1)}, table)

    @classmethod
    def from_exponents(cls, terms: Mapping[tuple, object], table: VariableTable = DEFAULT_TABLE):
        return cls({mono.pack(e): c for e, c in terms.items()}, table)

    @classmethod
    def parse(cls, text: str, table: VariableTable = DEFAULT_TABLE) -> "Polynomial":
        return parse_polynomial(text, table)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, Fraction(0))

    def has_irrational_coefficients(self) -> bool:
        return any(isinstance(c, QSqrt3) for c in self.terms.values())

    def __len__(self):
        return len(self.terms)

    def exponent_items(self) -> list[tuple[tuple[int, ...], object]]:
        n = self.table.nvars
        return [(mono.unpack(m, n), c) for m, c in self.terms.items()]

    def variables(self) -> set[str]:
        acc = 0
        for m in self.terms:
            acc |= m
        n = self.table.nvars
        return {self.table.names[i] for i, e in enumerate(mono.unpack(acc, n)) if e}

    def variable_indices(self) -> set[int]:
        acc = 0
        for m in self.terms:
            acc |= m
        n = self.table.nvars
        return {i for i, e in enumerate(mono.unpack(acc, n)) if e}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        n = self.table.nvars
        if name is None:
            return max(mono.total_degree(m, n) for m in self.terms)
        i = self.table.index[name]
        return max(mono.exponent(m, i, n) for m in self.terms)

    def leading_term(self, order: MonomialOrder | str = LEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = get_order(order)
        if order is LEX:
            m = max(self.terms)
        else:
            n = self.table.nvars
            m = max(self.terms, key=lambda t: order.encode(t, n))
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder | str = LEX) -> int:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder | str = LEX):
        return self.leading_term(order)[1]

    def sorted_terms(self, order: MonomialOrder | str = LEX) -> list:
        order = get_order(order)
        n = self.table.nvars
        return sorted(self.terms.items(), key=lambda t: order.encode(t[0], n), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.table is not self.table and other.table != self.table:
            raise VariableMismatch("polynomials use different variable tables")

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, QSqrt3)):
            return Polynomial.constant(other, self.table)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = _clean_coeff(v)
                else:
                    del out[m]
        return Polynomial._raw(out, self.table)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()}, self.table)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        c = _clean_coeff(c)
        if not c:
            return Polynomial.zero(self.table)
        if c == 1:
            return self
        return Polynomial._raw({m: _clean_coeff(v * c) for m, v in self.terms.items()}, self.table)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QSqrt3)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.table)
        if len(other.terms) == 1 and 0 in other.terms:
            return self.scale(other.terms[0])
        if len(self.terms) == 1 and 0 in self.terms:
            return other.scale(self.terms[0])
        return _multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(1, self.table)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, m: int, c=1) -> "Polynomial":
        c = _clean_coeff(c)
        out = {k + m: _clean_coeff(v * c) for k, v in self.terms.items()}
        if any(k & self.table.gmask for k in out):
            raise mono.ExponentOverflow("monomial exponent overflow")
        return Polynomial._raw(out, self.table)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QSqrt3)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            inv = 1 / QSqrt3.coerce(other) if isinstance(other, QSqrt3) else 1 / Fraction(other)
            return self.scale(inv)
        return NotImplemented

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.table == other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction, QSqrt3)):
            return self.is_constant() and self.terms.get(0, 0) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.table, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- normalisation ----------------------------------------------------
    def integer_terms(self) -> tuple[dict, int]:
        """Integer numerator terms and the common denominator ``d``.

        Only valid for rational coefficients: ``self == terms / d``.
        """
        d = 1
        for c in self.terms.values():
            d = ilcm(d, c.denominator)
        return {m: c.numerator * (d // c.denominator) for m, c in self.terms.items()}, d

    def primitive(self, order: MonomialOrder | str = LEX) -> "Polynomial":
        """Integer coefficients, content 1, positive leading coefficient."""
        if not self.terms:
            return self
        self._require_rational()
        ints, _ = self.integer_terms()
        g = 0
        for c in ints.values():
            g = igcd(g, c)
        lm, lc = self.leading_term(order)
        if lc < 0:
            g = -g
        return Polynomial._raw({m: Fraction(c // g) for m, c in ints.items()}, self.table)

    def monic(self, order: MonomialOrder | str = LEX) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        return self.scale(1 / lc if not isinstance(lc, QSqrt3) else lc.inverse())

    def _require_rational(self):
        if self.has_irrational_coefficients():
            raise TypeError("operation requires rational coefficients")

    def with_table(self, table: VariableTable) -> "Polynomial":
        """Re-express over ``table``, which must contain every used variable."""
        if table == self.table:
            return self
        n_old, n_new = self.table.nvars, table.nvars
        mapping = []
        for i in self.variable_indices():
            name = self.table.names[i]
            if name not in table:
                raise VariableMismatch(f"variable {name!r} missing from target table")
            mapping.append((i, table.index[name]))
        out = {}
        for m, c in self.terms.items():
            e = mono.unpack(m, n_old)
            new = [0] * n_new
            for i, j in mapping:
                new[j] = e[i]
            out[mono.pack(new)] = c
        return Polynomial._raw(out, table)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, object]):
        """Exact value under a full assignment of the used variables."""
        used = self.variable_indices()
        names = self.table.names
        n = self.table.nvars
        vals = {}
        for i in used:
            name = names[i]
            if name not in assignment:
                raise MissingVariable(name)
            vals[i] = _as_scalar(assignment[name])
        total = Fraction(0)
        pow_cache: dict = {}
        for m, c in self.terms.items():
            e = mono.unpack(m, n)
            term = c
            for i in used:
                k = e[i]
                if k:
                    key = (i, k)
                    pv = pow_cache.get(key)
                    if pv is None:
                        pv = vals[i] ** k
                        pow_cache[key] = pv
                    term = term * pv
            total = total + term
        if isinstance(total, QSqrt3):
            return total
        return QSqrt3(total)

    def substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute scalar values for some variables."""
        names = self.table.names
        n = self.table.nvars
        idx = {self.table.index[k]: _as_scalar(v) for k, v in assignment.items() if k in self.table}
        if not idx:
            return self
        out: dict = {}
        for m, c in self.terms.items():
            e = list(mono.unpack(m, n))
            coeff = c
            for i, v in idx.items():
                if e[i]:
                    coeff = coeff * v ** e[i]
                    e[i] = 0
            if not coeff:
                continue
            k = mono.pack(e)
            prev = out.get(k)
            out[k] = coeff if prev is None else prev + coeff
        return Polynomial(out, self.table)

    def compose(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (same table)."""
        n = self.table.nvars
        subs = {}
        for k, v in mapping.items():
            if k in self.table:
                subs[self.table.index[k]] = v if isinstance(v, Polynomial) else Polynomial.constant(v, self.table)
        if not subs:
            return self
        result = Polynomial.zero(self.table)
        pow_cache: dict = {}
        for m, c in self.terms.items():
            e = list(mono.unpack(m, n))
            term = Polynomial.constant(c, self.table)
            for i, p in subs.items():
                k = e[i]
                if k:
                    key = (i, k)
                    pk = pow_cache.get(key)
                    if pk is None:
                        pk = p ** k
                        pow_cache[key] = pk
                    term = term * pk
                    e[i] = 0
            result = result + term.mul_monomial(mono.pack(e))
        return result

    def differentiate(self, name: str) -> "Polynomial":
        i = self.table.index[name]
        n = self.table.nvars
        shift = mono.shift_of(i, n)
        out = {}
        for m, c in self.terms.items():
            k = mono.exponent(m, i, n)
            if k:
                out[m - (1 << shift)] = c * k
        return Polynomial(out, self.table)

    # -- printing ---------------------------------------------------------
    def to_string(self, order: MonomialOrder | str = LEX) -> str:
        if not self.terms:
            return "0"
        names = self.table.names
        n = self.table.nvars
        parts = []
        for m, c in self.sorted_terms(order):
            e = mono.unpack(m, n)
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            if isinstance(c, QSqrt3):
                cs = f"({c})"
                neg = False
            else:
                neg = c < 0
                cs = format_rational(abs(c))
            if factors:
                body = "*".join(factors)
                text = body if cs == "1" else f"{cs}*{body}"
            else:
                text = cs
            parts.append(("-" if neg else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


def _as_scalar(v):
    if isinstance(v, QSqrt3):
        return to_qs3_or_fraction(v)
    if isinstance(v, Polynomial):
        return to_qs3_or_fraction(QSqrt3.coerce(v.constant_value()))
    return to_fraction(v)


def _multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    table = f.table
    if f.has_irrational_coefficients() or g.has_irrational_coefficients():
        out: dict = {}
        for ma, ca in f.terms.items():
            for mb, cb in g.terms.items():
                m = ma + mb
                prev = out.get(m)
                out[m] = ca * cb if prev is None else prev + ca * cb
        if any(m & table.gmask for m in out):
            raise mono.ExponentOverflow("monomial exponent overflow")
        return Polynomial(out, table)
    fi, fd = f.integer_terms()
    gi, gd = g.integer_terms()
    try:
        prod = kernels.mul_terms(list(fi.items()), list(gi.items()), table.gmask)
    except OverflowError as exc:
        raise mono.ExponentOverflow(str(exc)) from None
    d = fd * gd
    if d == 1:
        return Polynomial._raw({m: Fraction(c) for m, c in prod.items()}, table)
    return Polynomial._raw({m: Fraction(c, d) for m, c in prod.items()}, table)


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if not isinstance(f, Polynomial) or not isinstance(g, Polynomial):
        raise TypeError("poly_arith expects two polynomials")
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(f: Polynomial, assignment: Mapping[str, object]) -> QSqrt3:
    return f.evaluate(assignment)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^/()]))")


class PolynomialSyntaxError(ValueError):
    pass


def parse_polynomial(text: str, table: VariableTable = DEFAULT_TABLE) -> Polynomial:
    """Parse strings such as ``"-2*x1*y2 + 3/4*l"`` or ``"(x1+1)^2"``.

    Accepts integer and rational literals, variables of ``table``, ``+``,
    ``-``, ``*``, ``^`` (or ``**``) and parentheses. A ``/`` is only allowed
    with a constant right-hand side. ``sqrt3`` is not a variable; use a
    table that contains a dedicated name when an irrational is needed.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected input at {text[pos:]!r}")
        pos = m.end()
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", Fraction(num)))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
    if not tokens:
        raise PolynomialSyntaxError("empty polynomial")
    parser = _Parser(tokens, table)
    result = parser.expr()
    if parser.i != len(tokens):
        raise PolynomialSyntaxError(f"trailing input in {text!r}")
    return result


class _Parser:
    def __init__(self, tokens, table):
        self.tokens = tokens
        self.i = 0
        self.table = table

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self):
        result = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    raise PolynomialSyntaxError("division only by nonzero constants")
                result = result.scale(1 / d.constant_value())
            else:
                return result

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                raise PolynomialSyntaxError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(val, self.table)
        if kind == "var":
            if val not in self.table:
                raise PolynomialSyntaxError(f"unknown variable {val!r}")
            return Polynomial.var(val, self.table)
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolynomialSyntaxError("missing ')'")
            return inner
        if kind == "op" and val == "-":
            return -self.atom()
        raise PolynomialSyntaxError(f"unexpected token {val!r}")


# ---------------------------------------------------------------------------
# Division


def divide(f: Polynomial, divisors: list[Polynomial], order: MonomialOrder | str = LEX):
    """Classical multivariate division.

    Returns ``(quotients, remainder)`` with
    ``f == sum(q*g) + remainder`` and no term of the remainder divisible by
    a leading monomial of ``divisors``.
    """
    order = get_order(order)
    table = f.table
    for g in divisors:
        f._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
    n = table.nvars
    gmask = table.gmask
    leads = [g.leading_term(order) for g in divisors]
    quotients: list[dict] = [{} for _ in divisors]
    remainder: dict = {}
    p = dict(f.terms)
    key = (lambda m: m) if order is LEX else (lambda m: order.encode(m, n))
    while p:
        m = max(p, key=key)
        c = p[m]
        for k, (lm, lc) in enumerate(leads):
            if mono.divides(lm, m, gmask):
                q = _clean_coeff(c / lc)
                shift = m - lm
                quotients[k][shift] = _clean_coeff(quotients[k].get(shift, 0) + q)
                for gm, gc in divisors[k].terms.items():
                    t = gm + shift
                    v = p.get(t, 0) - q * gc
                    if v:
                        p[t] = _clean_coeff(v)
                    else:
                        p.pop(t, None)
                break
        else:
            remainder[m] = c
            del p[m]
    return [Polynomial(q, table) for q in quotients], Polynomial(remainder, table)


def poly_reduce(f: Polynomial, G: list[Polynomial], order: MonomialOrder | str = LEX) -> Polynomial:
    """Normal form of ``f`` modulo ``G`` by the division algorithm."""
    return divide(f, G, order)[1]


def exact_quotient(f: Polynomial, g: Polynomial) -> Polynomial | None:
    """``f / g`` if ``g`` divides ``f`` exactly, else None."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if g.is_constant():
        return f.scale(1 / g.constant_value())
    (q,), r = divide(f, [g], LEX)
    return q if r.is_zero() else None


# ---------------------------------------------------------------------------
# GCD


def _content_in(f: Polynomial, i: int) -> tuple[dict[int, Polynomial], int]:
    """Coefficients of ``f`` viewed as univariate in variable ``i``."""
    n = f.table.nvars
    shift = mono.shift_of(i, n)
    field = mono.FIELD_MASK << shift
    groups: dict[int, dict] = {}
    for m, c in f.terms.items():
        k = (m & field) >> shift
        groups.setdefault(k, {})[m & ~field] = c
    return {k: Polynomial._raw(v, f.table) for k, v in groups.items()}, shift


def _monomial_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """gcd when ``g`` is a single term: the common monomial part."""
    n = f.table.nvars
    (gm,) = g.terms
    common = mono.unpack(gm, n)
    for m in f.terms:
        e = mono.unpack(m, n)
        common = tuple(min(a, b) for a, b in zip(common, e))
        if not any(common):
            break
    return Polynomial._raw({mono.pack(common): Fraction(1)}, f.table)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Greatest common divisor over Q, normalised primitive with positive lead.

    Recursive content / primitive-part scheme on one main variable at a
    time, using primitive pseudo-remainder sequences.
    """
    f._check(g)
    f._require_rational()
    g._require_rational()
    if f.is_zero():
        return g.primitive() if not g.is_zero() else g
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return Polynomial.constant(1, f.table)
    if len(g.terms) == 1:
        return _monomial_gcd(f, g)
    if len(f.terms) == 1:
        return _monomial_gcd(g, f)
    if f == g:
        return f.primitive()
    vf, vg = f.variable_indices(), g.variable_indices()
    common = vf & vg
    if not common:
        return Polynomial.constant(1, f.table)
    # a variable present in only one argument cannot occur in the gcd
    only_f = vf - vg
    if only_f:
        i = min(only_f)
        coeffs, _ = _content_in(f, i)
        return _gcd_many(list(coeffs.values()) + [g])
    only_g = vg - vf
    if only_g:
        i = min(only_g)
        coeffs, _ = _content_in(g, i)
        return _gcd_many(list(coeffs.values()) + [f])
    # main variable: the one of lowest degree keeps remainders small
    i = min(common, key=lambda k: (max(f.degree(f.table.names[k]), g.degree(f.table.names[k])), k))
    return _gcd_main(f, g, i)


def _gcd_many(polys: list[Polynomial]) -> Polynomial:
    polys = sorted((p for p in polys if not p.is_zero()), key=len)
    if not polys:
        raise ValueError("gcd of nothing")
    acc = polys[0].primitive()
    for p in polys[1:]:
        if acc.is_constant():
            return Polynomial.constant(1, acc.table)
        q = exact_quotient(p, acc)
        if q is None:
            acc = poly_gcd(acc, p)
    return acc.primitive() if not acc.is_constant() else Polynomial.constant(1, acc.table)


def _split_content(f: Polynomial, i: int):
    coeffs, shift = _content_in(f, i)
    cont = _gcd_many(list(coeffs.values()))
    if cont.is_constant():
        return cont, f
    prim = exact_quotient(f, cont)
    assert prim is not None
    return cont, prim


def _univariate_view(f: Polynomial, i: int):
    coeffs, shift = _content_in(f, i)
    deg = max(coeffs)
    return deg, coeffs, shift


def _lead_in(f: Polynomial, i: int):
    deg, coeffs, shift = _univariate_view(f, i)
    return deg, coeffs[deg], shift


def _pseudo_remainder(f: Polynomial, g: Polynomial, i: int) -> Polynomial:
    """prem(f, g) in variable ``i``: lc(g)^(df-dg+1) * f mod g."""
    dg, lg, shift = _lead_in(g, i)
    df, _, _ = _lead_in(f, i)
    r = f
    unit = 1 << shift
    while not r.is_zero():
        dr, lr, _ = _lead_in(r, i)
        if dr < dg:
            break
        r = r * lg - (g * lr).mul_monomial(unit * (dr - dg))
    return r


def _gcd_main(f: Polynomial, g: Polynomial, i: int) -> Polynomial:
    cf, pf = _split_content(f, i)
    cg, pg = _split_content(g, i)
    c = poly_gcd(cf, cg) if not (cf.is_constant() or cg.is_constant()) else Polynomial.constant(1, f.table)
    a, b = pf, pg
    if _lead_in(a, i)[0] < _lead_in(b, i)[0]:
        a, b = b, a
    while True:
        if _lead_in(b, i)[0] == 0:
            # b free of the main variable and primitive in it
            h = Polynomial.constant(1, f.table)
            break
        q = exact_quotient(a, b)
        if q is not None:
            h = b
            break
        r = _pseudo_remainder(a, b, i)
        if r.is_zero():
            h = b
            break
        _, r = _split_content(r, i)
        a, b = b, r.primitive()
    if not h.is_constant():
        _, h = _split_content(h, i)
    return (h * c).primitive()


# ---------------------------------------------------------------------------
# Rational functions


class RationalFunction:
    """A quotient ``num/den`` kept in lowest terms.

    ``den`` has integer coefficients with content 1 and a positive leading
    coefficient (lex); all rational scaling lives in ``num``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, normalized: bool = False):
        if den is None:
            den = Polynomial.constant(1, num.table)
        if not normalized:
            num, den = _normalize_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def table(self):
        return self.num.table

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def __add__(self, other):
        other = _as_rf(other, self.table)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        return self + (-_as_rf(other, self.table))

    def __rsub__(self, other):
        return _as_rf(other, self.table) - self

    def __mul__(self, other):
        other = _as_rf(other, self.table)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other, self.table)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = _as_rf(other, self.table)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, assignment):
        d = self.den.evaluate(assignment)
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(assignment) / d

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _as_rf(x, table) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x, normalized=True)
    return RationalFunction(Polynomial.constant(x, table), normalized=True)


def _normalize_pair(num: Polynomial, den: Polynomial):
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return num, Polynomial.constant(1, num.table)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = exact_quotient(num, g)
        den = exact_quotient(den, g)
    # move all rational scaling into the numerator
    dp = den.primitive()
    (m0, c0) = next(iter(dp.terms.items()))
    factor = den.terms[m0] / c0
    return num.scale(1 / factor), dp


def rf_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    return RationalFunction(num, den)
