"""Buchberger's algorithm, ideal membership and a triangular back-solver.

Internally polynomials are primitive integer term lists sorted by the
order encoding of their monomials (see :mod:`curvlie.monomial`); the hot
reduction loop lives in :mod:`curvlie.kernels`.
"""

from __future__ import annotations

import hashlib
import os
import time
from math import gcd
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from . import monomial as mono
from . import univariate as uv
from .exact import QSqrt3, format_rational
from .monomial import LEX, MonomialOrder, get_order
from .poly import Polynomial, VariableTable

DEFAULT_BUDGET_PAIRS = 200_000
DEFAULT_BUDGET_MONOMIALS = 5_000_000


# ---------------------------------------------------------------------------
# Conversions


def _to_internal(p: Polynomial, order: MonomialOrder):
    if p.has_irrational_coefficients():
        raise TypeError("Groebner computations require rational coefficients")
    ints, _ = p.integer_terms()
    n = p.table.nvars
    items = sorted(((order.encode(m, n), c) for m, c in ints.items()), reverse=True)
    return kernels.primitive([m for m, _ in items], [c for _, c in items])


def _from_internal(t, table: VariableTable, order: MonomialOrder, monic: bool = True) -> Polynomial:
    monos, coeffs = t
    n = table.nvars
    lc = coeffs[0] if monic else 1
    return Polynomial(
        {order.decode(m, n): Fraction(c, lc) for m, c in zip(monos, coeffs)}, table
    )


def _enc_lcm(a: int, b: int, order: MonomialOrder, n: int) -> int:
    return order.encode(mono.lcm(order.decode(a, n), order.decode(b, n), n), n)


def _enc_coprime(a: int, b: int, order: MonomialOrder, n: int) -> bool:
    return mono.coprime(order.decode(a, n), order.decode(b, n), n)


# ---------------------------------------------------------------------------
# Public types


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic, inter-reduced, sorted by leading term."""

    polynomials: tuple[Polynomial, ...]
    order: MonomialOrder
    table: VariableTable
    stats: dict = field(default_factory=dict, compare=False)
    cofactors: tuple | None = field(default=None, compare=False)

    def __iter__(self):
        return iter(self.polynomials)

    def __len__(self):
        return len(self.polynomials)

    def __getitem__(self, i):
        return self.polynomials[i]

    def is_unit(self) -> bool:
        return len(self.polynomials) == 1 and self.polynomials[0].is_constant()

    def leading_monomials(self) -> list[int]:
        return [p.leading_monomial(self.order) for p in self.polynomials]

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, list(self.polynomials), self.order)

    def to_strings(self) -> list[str]:
        return [p.to_string(self.order) for p in self.polynomials]


class BudgetExceeded(RuntimeError):
    """Raised when a Groebner computation exceeds its resource budget.

    ``partial`` holds the polynomials gathered so far (they generate the same
    ideal, but need not be a Groebner basis), ``pairs_processed`` the number
    of reduced S-pairs and ``pairs_pending`` the number still queued.
    """

    def __init__(self, message, partial, pairs_processed, pairs_pending):
        super().__init__(message)
        self.partial = partial
        self.pairs_processed = pairs_processed
        self.pairs_pending = pairs_pending


@dataclass
class Budget:
    max_pairs: int = DEFAULT_BUDGET_PAIRS
    max_monomials: int = DEFAULT_BUDGET_MONOMIALS
    max_megabytes: float | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_pairs <= 0 or self.max_monomials <= 0:
            raise ValueError("budgets must be positive")
        for limit in (self.max_megabytes, self.max_seconds):
            if limit is not None and limit <= 0:
                raise ValueError("budgets must be positive")

    @classmethod
    def from_env(cls, max_pairs=None, max_monomials=None) -> "Budget":
        mb = os.environ.get("CURVLIE_BUDGET_MB")
        return cls(
            max_pairs=max_pairs or DEFAULT_BUDGET_PAIRS,
            max_monomials=max_monomials or DEFAULT_BUDGET_MONOMIALS,
            max_megabytes=float(mb) if mb else None,
        )


def _estimate_bytes(polys) -> int:
    # rough CPython footprint: two list slots plus the two int objects per term
    total = 0
    for monos, coeffs in polys:
        for m, c in zip(monos, coeffs):
            total += 16 + 56 + (m.bit_length() + c.bit_length()) // 8
    return total


# ---------------------------------------------------------------------------
# S-polynomials and reduction


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | str = LEX) -> Polynomial:
    """``(L/LT(f))*f - (L/LT(g))*g`` with ``L`` the lcm of the leading monomials."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    f._check(g)
    order = get_order(order)
    n = f.table.nvars
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    L = mono.lcm(mf, mg, n)
    return f.mul_monomial(L - mf, 1 / cf if not isinstance(cf, QSqrt3) else cf.inverse()) - \
        g.mul_monomial(L - mg, 1 / cg if not isinstance(cg, QSqrt3) else cg.inverse())


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder | str = LEX) -> Polynomial:
    """Fully reduced remainder of ``f`` modulo ``G``, up to a rational unit.

    The remainder is made monic, so it is zero exactly when the classical
    division remainder is zero.
    """
    order = get_order(order)
    if f.is_zero():
        return f
    G = [g for g in G if not g.is_zero()]
    if not G:
        return f.monic(order)
    basis = [_to_internal(g, order) for g in G]
    pm, pc = _to_internal(f, order)
    rm, rc = kernels.normal_form(pm, pc, basis, f.table.gmask)
    if not rm:
        return Polynomial.zero(f.table)
    return _from_internal((rm, rc), f.table, order)


def ideal_membership(f: Polynomial, B: GroebnerBasis) -> bool:
    if f.is_zero():
        return True
    if B.is_unit():
        return True
    return normal_form(f, B.polynomials, B.order).is_zero()


# ---------------------------------------------------------------------------
# Buchberger


def _reduce_job(args):
    sm, sc, basis, gmask = args
    return kernels.normal_form(sm, sc, basis, gmask)


class _Engine:
    def __init__(self, gens, table, order, budget, jobs):
        self.table = table
        self.order = order
        self.n = table.nvars
        self.gmask = table.gmask
        self.budget = budget
        self.jobs = max(1, int(jobs))
        self.polys: list = []  # every polynomial ever added
        self.G: list[int] = []  # indices of the current basis
        self.pairs: list[tuple] = []  # (lcm, i, j)
        self.processed = 0
        self.zero_reductions = 0
        self.skipped = 0
        self.terms = 0
        self.gens = gens
        self.started = time.monotonic()

    # -- bookkeeping ------------------------------------------------------
    def _check_budget(self, extra_terms=0):
        b = self.budget
        if self.processed > b.max_pairs:
            self._fail(f"pair budget of {b.max_pairs} exceeded")
        if self.terms + extra_terms > b.max_monomials:
            self._fail(f"monomial budget of {b.max_monomials} exceeded")
        if b.max_megabytes is not None and self.processed % 16 == 0:
            used = _estimate_bytes(self.polys[i] for i in self.G) / 2 ** 20
            if used > b.max_megabytes:
                self._fail(f"memory budget of {b.max_megabytes} MB exceeded")
        if b.max_seconds is not None and time.monotonic() - self.started > b.max_seconds:
            self._fail(f"time budget of {b.max_seconds} s exceeded")

    def _fail(self, msg):
        partial = [_from_internal(self.polys[i], self.table, self.order) for i in self.G]
        raise BudgetExceeded(msg, partial, self.processed, len(self.pairs))

    def lm(self, i):
        return self.polys[i][0][0]

    # -- Gebauer-Moeller update ---------------------------------------------
    def add(self, h):
        k = len(self.polys)
        self.polys.append(h)
        self.terms += len(h[0])
        order, n, gmask = self.order, self.n, self.gmask
        lh = h[0][0]
        cands = [(g, _enc_lcm(lh, self.lm(g), order, n)) for g in self.G]
        kept = []
        for idx, (g, L) in enumerate(cands):
            if _enc_coprime(lh, self.lm(g), order, n):
                kept.append((g, L, True))
                continue
            dominated = False
            for g2, L2 in cands[idx + 1:]:
                if mono.divides(L2, L, gmask):
                    dominated = True
                    break
            if not dominated:
                for g2, L2, _ in kept:
                    if mono.divides(L2, L, gmask):
                        dominated = True
                        break
            if not dominated:
                kept.append((g, L, False))
            else:
                self.skipped += 1
        new_pairs = []
        for g, L, coprime in kept:
            if coprime:
                self.skipped += 1
            else:
                new_pairs.append((L, g, k))
        old = []
        for L, i, j in self.pairs:
            if (
                mono.divides(lh, L, gmask)
                and _enc_lcm(self.lm(i), lh, order, n) != L
                and _enc_lcm(self.lm(j), lh, order, n) != L
            ):
                self.skipped += 1
                continue
            old.append((L, i, j))
        self.pairs = sorted(old + new_pairs)
        self.G = [g for g in self.G if not mono.divides(lh, self.lm(g), gmask)] + [k]

    def basis_terms(self):
        return [self.polys[i] for i in self.G]

    def spoly(self, L, i, j):
        fm, fc = self.polys[i]
        gm, gc = self.polys[j]
        return kernels.spoly(fm, fc, gm, gc, L)

    def run(self):
        for g in self.gens:
            rm, rc = kernels.normal_form(g[0], g[1], self.basis_terms(), self.gmask) if self.G else g
            if rm:
                self.add((rm, rc))
                if self._is_unit():
                    return
        pool = ProcessPoolExecutor(self.jobs) if self.jobs > 1 else None
        try:
            while self.pairs:
                batch = self.pairs[: self.jobs]
                self.pairs = self.pairs[self.jobs:]
                basis = self.basis_terms()
                svals = [self.spoly(L, i, j) for L, i, j in batch]
                if pool is not None and len(batch) > 1:
                    results = list(pool.map(_reduce_job, [(sm, sc, basis, self.gmask) for sm, sc in svals]))
                else:
                    results = [kernels.normal_form(sm, sc, basis, self.gmask) for sm, sc in svals]
                for r in results:
                    self.processed += 1
                    if r[0] and len(self.G) != len(basis):
                        # basis grew inside this batch; finish the reduction
                        r = kernels.normal_form(r[0], r[1], self.basis_terms(), self.gmask)
                    if not r[0]:
                        self.zero_reductions += 1
                        continue
                    self._check_budget(len(r[0]))
                    self.add(r)
                    if self._is_unit():
                        self.pairs = []
                        return
                self._check_budget()
        finally:
            if pool is not None:
                pool.shutdown()

    def _is_unit(self):
        return any(self.polys[i][0][0] == 0 for i in self.G)

    def reduced(self):
        order, gmask = self.order, self.gmask
        if self._is_unit():
            return [([0], [1])]
        G = sorted(self.basis_terms(), key=lambda t: t[0][0])
        minimal = []
        for t in G:
            if not any(mono.divides(s[0][0], t[0][0], gmask) for s in minimal):
                minimal.append(t)
        out = []
        for idx, t in enumerate(minimal):
            others = minimal[:idx] + minimal[idx + 1:]
            rm, rc = kernels.normal_form(t[0], t[1], others, gmask)
            out.append((rm, rc))
        out.sort(key=lambda t: t[0][0], reverse=True)
        return out


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder | str = LEX,
    *,
    budget: Budget | None = None,
    jobs: int = 1,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Uses the normal selection strategy with ties broken by insertion index,
    and the Gebauer-Moeller criteria (coprime leading monomials and chain
    criterion). With ``jobs > 1`` the S-polynomials of a batch of pairs are
    reduced in worker processes; the reduced basis is unique, so the result
    does not depend on ``jobs``.
    """
    order = get_order(order)
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    table = gens[0].table
    for g in gens:
        gens[0]._check(g)
    budget = budget or Budget.from_env()
    internal = [_to_internal(g, order) for g in gens]
    engine = _Engine(internal, table, order, budget, jobs)
    engine.run()
    red = engine.reduced()
    polys = tuple(_from_internal(t, table, order) for t in red)
    stats = {
        "pairs_processed": engine.processed,
        "zero_reductions": engine.zero_reductions,
        "pairs_skipped": engine.skipped,
        "polynomials_added": len(engine.polys),
    }
    return GroebnerBasis(polys, order, table, stats)


# ---------------------------------------------------------------------------
# Certificates


def _traced_reduction(t, basis, gmask):
    """Division of ``t`` by ``basis`` recording every step into a hash."""
    h = hashlib.sha256()
    lms = [g[0][0] for g in basis]
    pm, pc = list(t[0]), list(t[1])
    rm, rc = [], []
    start = 0
    while start < len(pm):
        m = pm[start]
        idx = kernels.find_reducer(m, lms, gmask)
        if idx < 0:
            rm.append(m)
            rc.append(pc[start])
            start += 1
            continue
        gm, gc = basis[idx]
        c, lc = pc[start], gc[0]
        d = gcd(c, lc)
        a, b = lc // d, c // d
        if a < 0:
            a, b = -a, -b
        shift = m - gm[0]
        h.update(f"{idx}:{shift:x};".encode())
        pm, pc = kernels.sub_mul(pm, pc, start, a, gm, gc, b, shift)
        start = 0
        if a != 1:
            rc = [a * x for x in rc]
    rm.extend(pm[start:])
    rc.extend(pc[start:])
    rm, rc = kernels.primitive(rm, rc)
    h.update(("R" + ",".join(f"{x:x}" for x in rm)).encode())
    return h.hexdigest(), (rm, rc)


def certificate(B: GroebnerBasis, generators: Sequence[Polynomial]) -> dict:
    """Transcript hashes proving Buchberger's criterion and ideal inclusion.

    For every pair of basis elements the S-polynomial is reduced with a
    recorded step sequence; pairs with coprime leading monomials are marked
    as skipped by the product criterion (their S-polynomials reduce to 0 by
    a standard lemma). Every generator is reduced the same way.
    """
    order, table = B.order, B.table
    n, gmask = table.nvars, table.gmask
    basis = [_to_internal(p, order) for p in B.polynomials]
    spairs = []
    ok = True
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            a, b = basis[i][0][0], basis[j][0][0]
            if _enc_coprime(a, b, order, n):
                spairs.append({"i": i, "j": j, "criterion": "coprime"})
                continue
            L = _enc_lcm(a, b, order, n)
            s = kernels.spoly(basis[i][0], basis[i][1], basis[j][0], basis[j][1], L)
            digest, (rm, _) = _traced_reduction(s, basis, gmask)
            zero = not rm
            ok = ok and zero
            spairs.append({"i": i, "j": j, "sha256": digest, "zero": zero})
    gens = []
    for k, g in enumerate(generators):
        if g.is_zero():
            continue
        digest, (rm, _) = _traced_reduction(_to_internal(g, order), basis, gmask)
        zero = not rm
        ok = ok and zero
        gens.append({"generator": k, "sha256": digest, "zero": zero})
    lms = [t[0][0] for t in basis]
    interreduced = all(
        not mono.divides(lms[i], lms[j], gmask) for i in range(len(lms)) for j in range(len(lms)) if i != j
    )
    ok = ok and interreduced
    body = {"s_pairs": spairs, "generators": gens, "interreduced": interreduced}
    digest = hashlib.sha256(repr(body).encode()).hexdigest()
    return {**body, "valid": ok, "sha256": digest}


def verify_certificate(B: GroebnerBasis, generators: Sequence[Polynomial]) -> bool:
    return certificate(B, generators)["valid"]


# ---------------------------------------------------------------------------
# Back-solving lex bases


@dataclass
class Branch:
    """One solution branch.

    ``values`` maps variables to exact numbers or, when free parameters
    occur, to polynomials in them. ``free`` lists free-parameter variables.
    ``constraints`` are leftover polynomial conditions (not solved).
    """

    values: dict = field(default_factory=dict)
    free: list = field(default_factory=list)
    constraints: list = field(default_factory=list)

    def is_determined(self) -> bool:
        return not self.free and not self.constraints and all(
            isinstance(v, (Fraction, QSqrt3)) for v in self.values.values()
        )

    def numeric_assignment(self) -> dict:
        return {k: QSqrt3.coerce(v) for k, v in self.values.items() if isinstance(v, (Fraction, QSqrt3, int))}

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, QSqrt3):
                return v.to_json() if v.b else format_rational(v.a)
            if isinstance(v, Fraction):
                return format_rational(v)
            return str(v)

        return {
            "values": {k: enc(v) for k, v in self.values.items()},
            "free": list(self.free),
            "constraints": [str(c) for c in self.constraints],
        }


@dataclass
class BackSolveResult:
    branches: list[Branch]
    residuals: list[Polynomial]

    @property
    def complete(self) -> bool:
        return not self.residuals


def _main_index(p: Polynomial) -> int:
    """Index of the lex-largest variable used by ``p`` (smallest index)."""
    return min(p.variable_indices())


def _univariate(p: Polynomial, i: int):
    n = p.table.nvars
    coeffs: dict[int, object] = {}
    for m, c in p.terms.items():
        coeffs[mono.exponent(m, i, n)] = c
    d = max(coeffs)
    return uv.trim([coeffs.get(k, Fraction(0)) for k in range(d + 1)])


def back_solve(B: GroebnerBasis) -> BackSolveResult:
    """Solve a lex Groebner basis triangularly, lowest variable first.

    Handles linear steps, univariate polynomials whose real roots all lie in
    Q(sqrt3) (found exactly and confirmed by Sturm counting), and variables
    left unconstrained (free parameters). Non-real roots are discarded.
    Anything else becomes a residual together with its partial branch.
    """
    if B.order is not LEX:
        raise ValueError("back_solve needs a lexicographic basis")
    table = B.table
    if B.is_unit():
        return BackSolveResult([], [])
    polys = list(B.polynomials)
    used = set()
    for p in polys:
        used |= p.variable_indices()
    if not used:
        return BackSolveResult([Branch()], [])
    by_main: dict[int, list] = {}
    for p in polys:
        by_main.setdefault(_main_index(p), []).append(p)
    levels = sorted(used, reverse=True)

    branches: list[Branch] = []
    residuals: list[Polynomial] = []

    def recurse(k: int, branch: Branch):
        if k == len(levels):
            branches.append(branch)
            return
        i = levels[k]
        name = table.names[i]
        assign = branch.numeric_assignment()
        raw = [p.substitute(assign) for p in by_main.get(i, [])]
        subs = [p for p in raw if not p.is_zero()]
        if any(p.is_constant() for p in subs):
            return  # inconsistent branch
        if not subs:
            branch.free.append(name)
            recurse(k + 1, branch)
            return
        free_set = set(branch.free)
        if free_set:
            for p in subs:
                if p.degree(name) == 1:
                    lead = _univariate_lead(p, i)
                    if lead.is_constant():
                        rest = p - lead * Polynomial.var(name, table)
                        expr = -rest.scale(1 / lead.constant_value())
                        vals = dict(branch.values)
                        vals[name] = expr
                        others = [q for q in subs if not q.compose({name: expr}).is_zero()]
                        nb = Branch(vals, list(branch.free), branch.constraints + others)
                        recurse(k + 1, nb)
                        return
            residuals.extend(subs)
            return
        univ = [_univariate(p, i) for p in subs]
        g = univ[0]
        for u in univ[1:]:
            g = uv.gcd(g, u)
        if uv.degree(g) < 1:
            return
        roots, complete = uv.real_roots_in_qsqrt3(g)
        if not complete:
            residuals.append(_from_univariate(g, name, table))
        for r in roots:
            vals = dict(branch.values)
            vals[name] = r
            recurse(k + 1, Branch(vals, list(branch.free), list(branch.constraints)))

    recurse(0, Branch())
    return BackSolveResult(branches, residuals)


def _univariate_lead(p: Polynomial, i: int) -> Polynomial:
    n = p.table.nvars
    shift = mono.shift_of(i, n)
    field_ = mono.FIELD_MASK << shift
    out = {}
    for m, c in p.terms.items():
        if (m & field_) >> shift == 1:
            out[m & ~field_] = c
    return Polynomial(out, p.table)


def _from_univariate(coeffs, name, table) -> Polynomial:
    x = Polynomial.var(name, table)
    out = Polynomial.zero(table)
    for k, c in enumerate(coeffs):
        out = out + (x ** k).scale(c)
    return out


def check_branch(B: GroebnerBasis, branch: Branch) -> bool:
    """Every basis polynomial vanishes on a fully determined branch."""
    if not branch.is_determined():
        return False
    assign = branch.numeric_assignment()
    return all(p.evaluate(assign).is_zero() for p in B.polynomials)
