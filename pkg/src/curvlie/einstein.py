"""Invariant metrics and the Einstein system on sl(2,R) + sl(2,R).

Pipeline for one generator ``A``: the metrics for which ``ad_A`` is skew
(:func:`invariant_tensor_space`), the polynomial system ``Ric - l*g = 0``
with ``det(g) = +-1`` (:func:`assemble_einstein_system`), its lex Groebner
basis, triangular back-solving and exact verification (:func:`solve_case`).
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .curvature import CurvatureEngine, DegenerateMetric, MetricAnsatz, signature_index
from .exact import QSqrt3, SqrtExt, exact_sign, format_rational, parse_rational, simplify_scalar
from .groebner import Budget, BudgetExceeded, back_solve, buchberger
from .liealg import E1, E3, N, ZERO3, LieAlgebra, ad_matrix, sl2_sum
from .poly import DEFAULT_TABLE, STANDARD_VARIABLES, Polynomial, RationalFunction, VariableTable

LAMBDA = "l"
METRIC_VARIABLES = STANDARD_VARIABLES[1:]

# position (row, col), row <= col, of each metric variable
VARIABLE_POSITIONS: dict[str, tuple[int, int]] = {
    "x1": (0, 0), "y1": (1, 1), "z1": (2, 2),
    "x2": (3, 3), "y2": (4, 4), "z2": (5, 5),
    "u1": (0, 1), "v1": (1, 2), "w1": (0, 2),
    "u2": (3, 4), "v2": (4, 5), "w2": (3, 5),
}
for _row, _digit in enumerate("123"):
    for _col, _letter in enumerate("abc"):
        VARIABLE_POSITIONS[f"{_letter}{_digit}"] = (_row, 3 + _col)
POSITION_VARIABLES = {pos: name for name, pos in VARIABLE_POSITIONS.items()}


class CaseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Generator cases


FAMILIES = ("(E1,rE1)", "(E1,rE3)", "(E1,N)", "(E3,rE3)", "(E3,N)", "(N,0)", "(N,N)")
Q_BLOCK_FAMILIES = ("(E1,0)", "(E3,0)", "(N,0)")

_NAMED = {"E1": E1, "E3": E3, "N": N, "0": ZERO3}


@dataclass(frozen=True)
class GeneratorCase:
    """An infinitesimal generator ``(X, Y)`` of sl(2,R) + sl(2,R).

    ``family`` is the family label (e.g. ``"(E1,rE1)"``), ``label`` the
    concrete case (e.g. ``"(E1,2E1)"``). ``q_index`` selects the Q-block
    representative for the second factor when the generator is ``(X, 0)``.
    """

    family: str
    label: str
    element: tuple
    r: Fraction | None = None
    q_index: int | None = None

    def with_q(self, i: int) -> "GeneratorCase":
        if self.label not in Q_BLOCK_FAMILIES:
            raise CaseError(f"{self.label} has no Q-block representatives")
        return GeneratorCase(self.family, self.label, self.element, self.r, i)

    @property
    def uses_q_block(self) -> bool:
        return self.label in Q_BLOCK_FAMILIES


def _format_multiple(r: Fraction, name: str) -> str:
    if r == 0:
        return "0"
    if r == 1:
        return name
    return f"{format_rational(r)}{name}"


def make_case(family: str, r=None) -> GeneratorCase:
    """Instantiate a family label, substituting ``r`` where it occurs."""
    family = family.replace(" ", "")
    if family not in FAMILIES:
        return parse_case(family)
    first, second = family[1:-1].split(",")
    if "r" in second:
        if r is None:
            raise CaseError(f"{family} needs a value for r")
        r = parse_rational(str(r))
        if r < 0:
            raise CaseError("r must be non-negative")
        base = second[1:]
        label = f"({first},{_format_multiple(r, base)})"
        Y = tuple(r * x for x in _NAMED[base])
    else:
        label = family
        Y = _NAMED[second]
        r = None
    return GeneratorCase(family, label, tuple(_NAMED[first]) + tuple(Y), r)


_TOKEN = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(E1|E3|N|0)$")


def parse_case(label: str, r=None) -> GeneratorCase:
    """Parse ``"(E1,rE1)"`` (with ``r``), ``"(E1,2E1)"``, ``"(N,0)"`` and so on."""
    text = label.replace(" ", "")
    if text in FAMILIES and ("r" in text):
        return make_case(text, r)
    m = re.fullmatch(r"\((.+),(.+)\)", text)
    if not m:
        raise CaseError(f"cannot parse generator {label!r}")
    parts = []
    for tok in m.groups():
        t = _TOKEN.match(tok)
        if not t:
            raise CaseError(f"cannot parse generator component {tok!r}")
        coef = parse_rational(t.group(1)) if t.group(1) else Fraction(1)
        parts.append((coef, t.group(2)))
    (c1, n1), (c2, n2) = parts
    if c1 != 1 and n1 != "0":
        raise CaseError("the first component must be E1, E3 or N")
    if n1 == "N" and n2 not in ("0", "N") or (n2 == "N" and c2 != 1):
        raise CaseError(f"{label!r} is not a generator of the classification")
    if n2 == "0":
        c2 = Fraction(0)
    element = tuple(_NAMED[n1]) + tuple(c2 * x for x in _NAMED[n2])
    if n1 == "N" or n2 == "N":
        family = f"({n1},{n2})"
        rr = None
    else:
        base = n2 if n2 != "0" else n1
        family = f"({n1},r{base})"
        rr = c2
    lbl = f"({n1},{_format_multiple(c2, n2) if n2 != '0' else '0'})"
    return GeneratorCase(family, lbl, element, rr)


def generator_catalog(r_samples: Sequence = ()) -> list[GeneratorCase]:
    """The seven families, their ``r = 0`` and ``r = 1`` specialisations and any sampled ``r``."""
    out = []
    for fam in FAMILIES:
        if "r" in fam:
            for r in (0, 1, *r_samples):
                case = make_case(fam, r)
                if case.label not in [c.label for c in out]:
                    out.append(case)
        else:
            out.append(make_case(fam))
    return out


TABLE_CASES = (
    "(E1,2E1)", "(E1,E1)", "(E1,0)", "(E1,2E3)", "(E1,N)",
    "(E3,2E3)", "(E3,E3)", "(E3,0)", "(E3,N)", "(N,0)", "(N,N)",
)


# ---------------------------------------------------------------------------
# Invariant symmetric tensors


@dataclass
class InvariantSpace:
    """Solutions of ``ad_A^T g + g ad_A = 0`` among symmetric matrices.

    ``basis`` holds one matrix per free variable; ``template`` expresses the
    general solution with the free variables named as in the general
    21-parameter metric.
    """

    element: tuple
    free: list[str]
    basis: list[list[list[Fraction]]]
    template: list[list[Polynomial]]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, g) -> bool:
        return is_invariant(self.element, g)


def is_invariant(A, g) -> bool:
    L = _algebra_for(len(A))
    ad = ad_matrix(L, A)
    lhs = la.add(la.matmul(la.transpose(ad), g), la.matmul(g, ad))
    return la.is_zero(lhs)


def _algebra_for(n: int) -> LieAlgebra:
    from .liealg import sl2

    if n == 6:
        return sl2_sum()
    if n == 3:
        return sl2()
    raise CaseError("elements must live in sl(2,R) or sl(2,R) + sl(2,R)")


def invariant_tensor_space(A, table: VariableTable = DEFAULT_TABLE) -> InvariantSpace:
    """Basis of the ``ad_A``-invariant symmetric bilinear forms.

    The linear system is solved with the unknowns ordered from the last
    variable name to the first, so free parameters are the earliest names
    of ``x1, y1, z1, x2, ..., c3`` and pivots are expressed through them.
    Works for 3-dimensional input too, with names ``x, y, z, u, v, w``.
    """
    A = tuple(Fraction(x) for x in A)
    n = len(A)
    L = _algebra_for(n)
    if n == 6:
        names = list(METRIC_VARIABLES)
        positions = [VARIABLE_POSITIONS[v] for v in names]
    else:
        names = ["x", "y", "z", "u", "v", "w"]
        positions = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]
    order = list(range(len(names)))[::-1]
    ad = ad_matrix(L, A)
    rows = []
    for p in range(n):
        for q in range(p, n):
            row = []
            for idx in order:
                i, j = positions[idx]
                E = [[Fraction(0)] * n for _ in range(n)]
                E[i][j] = E[j][i] = Fraction(1)
                # (ad^T E + E ad)[p][q]
                v = sum((ad[a][p] * E[a][q] for a in range(n)), Fraction(0)) + \
                    sum((E[p][a] * ad[a][q] for a in range(n)), Fraction(0))
                row.append(v)
            rows.append(row)
    R, pivots = la.rref(rows)
    free_cols = [c for c in range(len(order)) if c not in pivots]
    free_names = [names[order[c]] for c in free_cols]
    free_names.sort(key=names.index)
    if n == 6:
        tbl = table
    else:
        tbl = VariableTable(names)
    value: dict[str, Polynomial] = {nm: Polynomial.var(nm, tbl) for nm in free_names}
    for r_idx, pc in enumerate(pivots):
        expr = Polynomial.zero(tbl)
        for c in free_cols:
            coef = R[r_idx][c]
            if coef:
                expr = expr - Polynomial.var(names[order[c]], tbl).scale(coef)
        value[names[order[pc]]] = expr
    template = [[Polynomial.zero(tbl)] * n for _ in range(n)]
    template = [list(r) for r in template]
    for nm, (i, j) in zip(names, positions):
        template[i][j] = template[j][i] = value[nm]
    basis = []
    for f in free_names:
        assign = {x: Fraction(int(x == f)) for x in free_names}
        basis.append([[Fraction(p.evaluate(assign).a) for p in row] for row in template])
    return InvariantSpace(A, free_names, basis, template)


# ---------------------------------------------------------------------------
# Q-block representatives for the second factor


Q5_SYMBOL = "s"


def q_block_ansatz(i: int, table: VariableTable | None = None, names=("x2", "y2", "z2")):
    """Symmetric 3x3 representative ``Q_i`` in the parameters ``names``.

    ``Q_5`` uses the symbol ``s`` for the entry whose square is 1/2; the
    caller adjoins ``2*s^2 - 1``.
    """
    if i not in range(1, 6):
        raise CaseError("Q-block index must be in 1..5")
    if table is None:
        table = DEFAULT_TABLE.extend([Q5_SYMBOL]) if i == 5 else DEFAULT_TABLE
    x, y, z = (Polynomial.var(v, table) for v in names)
    half = Fraction(1, 2)
    zero = Polynomial.zero(table)
    if i == 1:
        return [[x, zero, zero], [zero, y, zero], [zero, zero, z]]
    if i == 2:
        return [[-x, y, zero], [y, x, zero], [zero, zero, z]]
    if i == 3:
        return [[-x - half, zero - half, zero], [zero - half, x - half, zero], [zero, zero, y]]
    if i == 4:
        return [[half - x, zero + half, zero], [zero + half, x + half, zero], [zero, zero, y]]
    s = Polynomial.var(Q5_SYMBOL, table)
    return [[-x, zero, s], [zero, x, s], [s, s, x]]


def q_block_relations(i: int, table: VariableTable) -> list[Polynomial]:
    if i == 5:
        s = Polynomial.var(Q5_SYMBOL, table)
        return [s * s * 2 - 1]
    return []


def case_ansatz(case: GeneratorCase) -> tuple[list[list[Polynomial]], VariableTable, list[Polynomial]]:
    """Metric template for a case plus extra relations among its symbols."""
    space = invariant_tensor_space(case.element)
    template = space.template
    if not case.uses_q_block or case.q_index is None:
        return template, DEFAULT_TABLE, []
    table = DEFAULT_TABLE.extend([Q5_SYMBOL]) if case.q_index == 5 else DEFAULT_TABLE
    template = [[p.with_table(table) for p in row] for row in template]
    Q = q_block_ansatz(case.q_index, table)
    for i in range(3):
        for j in range(3):
            template[3 + i][3 + j] = Q[i][j]
    # the remaining variables of the second block are replaced by Q_i
    return template, table, q_block_relations(case.q_index, table)


# ---------------------------------------------------------------------------
# Einstein system


@dataclass
class EinsteinSystem:
    """``Ric - l*g`` numerators for ``i <= j`` plus ``det(g) - det_sign``."""

    numerators: list[Polynomial]
    det_constraint: Polynomial
    relations: list[Polynomial]
    table: VariableTable
    det_sign: int
    case: GeneratorCase | None = None
    ansatz: list = field(default_factory=list)

    @property
    def polynomials(self) -> list[Polynomial]:
        return list(self.numerators) + [self.det_constraint]

    def generators(self) -> list[Polynomial]:
        """Nonzero polynomials handed to the Groebner engine."""
        return [p for p in self.polynomials + self.relations if not p.is_zero()]

    def __len__(self):
        return len(self.polynomials)


def assemble_einstein_system(ansatz, det_sign: int, algebra: LieAlgebra | None = None,
                             relations: Sequence[Polynomial] = (), case=None,
                             reduce_fractions: bool = True) -> EinsteinSystem:
    """Numerators of ``Ric_ij - l*g_ij`` (``i <= j``) and ``det(g) - det_sign``.

    Each ``Ric_ij`` is brought to lowest terms ``n/d`` first (when
    ``reduce_fractions`` is set), and the numerator ``n - l*g_ij*d`` is
    made primitive.
    """
    if det_sign not in (1, -1):
        raise ValueError("det_sign must be +1 or -1")
    algebra = algebra or sl2_sum()
    if isinstance(ansatz, MetricAnsatz):
        matrix = ansatz.matrix
    else:
        matrix = ansatz
    table = next((x.table for row in matrix for x in row if isinstance(x, Polynomial)), DEFAULT_TABLE)
    matrix = [[x if isinstance(x, Polynomial) else Polynomial.constant(x, table) for x in row] for row in matrix]
    if LAMBDA not in table:
        raise CaseError("variable table must contain the Einstein constant 'l'")
    lam = Polynomial.var(LAMBDA, table)
    try:
        engine = CurvatureEngine(algebra, matrix)
    except DegenerateMetric:
        raise DegenerateMetric("ansatz is identically degenerate") from None
    d4 = engine.det * engine.det * 4
    n = algebra.dim
    nums = []
    for i in range(n):
        for j in range(i, n):
            num = engine.ricci.numerator(i, j)
            den = d4
            if reduce_fractions and not num.is_zero():
                rf = RationalFunction(num, den)
                num, den = rf.num, rf.den
            elif num.is_zero():
                den = Polynomial.constant(1, table)
            eq = num - den * matrix[i][j] * lam
            nums.append(eq.primitive() if not eq.is_zero() else eq)
    det_eq = engine.det - det_sign
    det_eq = det_eq.primitive() if not det_eq.is_zero() else det_eq
    return EinsteinSystem(nums, det_eq, list(relations), table, det_sign, case, matrix)


# ---------------------------------------------------------------------------
# Solution records


@dataclass
class SolutionRecord:
    case: str
    metric: list
    lam: object
    det: object
    index: int
    parameters: dict = field(default_factory=dict)
    verified: bool = False
    name: str = ""

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "name": self.name,
            "metric": [[scalar_to_json(x) for x in row] for row in self.metric],
            "lambda": scalar_to_json(self.lam),
            "det": scalar_to_json(self.det),
            "index": self.index,
            "parameters": {k: _param_to_json(v) for k, v in self.parameters.items()},
            "verified": self.verified,
        }


def scalar_to_json(x):
    x = simplify_scalar(x)
    if isinstance(x, SqrtExt):
        return {"a": scalar_to_json(x.a), "b": scalar_to_json(x.b), "sqrt": scalar_to_json(x.d)}
    if isinstance(x, QSqrt3):
        return x.to_json()
    if isinstance(x, Polynomial):
        return str(x)
    return format_rational(x)


def _param_to_json(v):
    if isinstance(v, (str, int, dict, list)) and not isinstance(v, bool):
        return v
    return scalar_to_json(v)


def scalar_from_json(v):
    if isinstance(v, dict):
        if "sqrt" in v:
            return SqrtExt(scalar_from_json(v["a"]), scalar_from_json(v["b"]), scalar_from_json(v["sqrt"]))
        return simplify_scalar(QSqrt3.from_json(v))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        if isinstance(v, float):
            raise ValueError("floating point entries are not exact; use 'p/q' strings")
        return Fraction(v)
    return parse_rational(str(v))


def verify_einstein(g, lam, algebra: LieAlgebra | None = None) -> bool:
    """Exact test of ``Ric(g) = lam * g``; raises on a degenerate metric."""
    algebra = algebra or sl2_sum()
    g = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in g]
    engine = CurvatureEngine(algebra, g)
    return engine.is_einstein(lam)


def metric_index(g) -> int:
    neg, pos, zero = signature_index(g)
    if zero:
        raise DegenerateMetric("metric is degenerate")
    return neg


def make_record(case: str, g, lam, parameters=None, name="", algebra=None) -> SolutionRecord:
    det = simplify_scalar(la.det(g))
    ok = verify_einstein(g, lam, algebra)
    return SolutionRecord(case, g, simplify_scalar(lam), det, metric_index(g), dict(parameters or {}), ok, name)


def negate_metric(s: SolutionRecord) -> SolutionRecord:
    n = len(s.metric)
    g = [[simplify_scalar(-x) for x in row] for row in s.metric]
    det = s.det if n % 2 == 0 else simplify_scalar(-s.det)
    return SolutionRecord(s.case, g, simplify_scalar(-s.lam), det, n - s.index, dict(s.parameters),
                          s.verified, s.name)


# ---------------------------------------------------------------------------
# Solving one case


@dataclass
class CaseResult:
    case: str
    det_sign: int
    solutions: list[SolutionRecord]
    residuals: list[str]
    status: str
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "det_sign": self.det_sign,
            "status": self.status,
            "solutions": [s.to_json() for s in self.solutions],
            "residuals": list(self.residuals),
            "stats": self.stats,
        }


def _solve_ansatz(label, template, table, relations, det_sign, budget, jobs, stats):
    system = assemble_einstein_system(template, det_sign, relations=relations)
    gens = system.generators()
    records: list[SolutionRecord] = []
    residuals: list[str] = []
    try:
        gb = buchberger(gens, "lex", budget=budget, jobs=jobs)
    except BudgetExceeded as exc:
        residuals.append(f"budget exceeded: {exc}; {len(exc.partial)} partial generators, "
                         f"{exc.pairs_processed} pairs processed")
        residuals.extend(str(p) for p in exc.partial)
        return records, residuals
    stats.setdefault("basis_sizes", []).append(len(gb))
    if gb.is_unit():
        return records, residuals
    result = back_solve(gb)
    residuals.extend(str(p) for p in result.residuals)
    used = set()
    for p in gens:
        used |= p.variables()
    for branch in result.branches:
        if not branch.is_determined():
            residuals.append("parametric branch " + repr(branch.to_json()))
            continue
        assign = {k: v for k, v in branch.values.items()}
        missing = [v for v in used if v not in assign]
        if missing:
            residuals.append(f"branch leaves {sorted(missing)} undetermined")
            continue
        lam = assign[LAMBDA]
        g = [[simplify_scalar(p.evaluate(assign)) for p in row] for row in template]
        try:
            rec = make_record(label, g, lam, {"branch": {k: scalar_to_json(v) for k, v in assign.items()}})
        except DegenerateMetric:
            continue
        if not rec.verified or rec.det != det_sign:
            residuals.append("unverified branch " + repr(branch.to_json()))
            continue
        records.append(rec)
    return records, residuals


def solve_case(case: GeneratorCase, det_sign: int = 1, r_value=None, *,
               budget: Budget | None = None, jobs: int = 1, normalize: bool = True) -> CaseResult:
    """Run the full pipeline for one generator case.

    Every returned record is verified exactly. With ``normalize`` solutions
    with positive Einstein constant are replaced by their negatives and
    duplicates removed.
    """
    if isinstance(case, str):
        case = parse_case(case, r_value) if "r" not in case or r_value is not None else make_case(case, r_value)
    budget = budget or Budget.from_env()
    stats: dict = {}
    records: list[SolutionRecord] = []
    residuals: list[str] = []
    variants = [case.with_q(i) for i in range(1, 6)] if case.uses_q_block else [case]
    for variant in variants:
        template, table, relations = case_ansatz(variant)
        recs, res = _solve_ansatz(variant.label, template, table, relations, det_sign, budget, jobs, stats)
        if variant.q_index is not None:
            for r in recs:
                r.parameters["q_block"] = variant.q_index
            res = [f"Q{variant.q_index}: {x}" for x in res]
        records.extend(recs)
        residuals.extend(res)
    if normalize:
        normed = []
        for r in sorted(records, key=lambda rec: exact_sign(rec.lam) > 0):
            if exact_sign(r.lam) > 0:
                r = negate_metric(r)
                r.parameters["negated"] = True
            if not any(r.metric == o.metric and r.lam == o.lam for o in normed):
                normed.append(r)
        records = normed
    status = "solved" if not residuals and all(r.verified for r in records) else "partial"
    return CaseResult(case.label, det_sign, records, residuals, status, stats)


def einstein_system_for_case(case: GeneratorCase | str, det_sign: int = 1, r_value=None) -> EinsteinSystem:
    if isinstance(case, str):
        case = parse_case(case, r_value)
    return _cached_system(case, det_sign)


@lru_cache(maxsize=32)
def _cached_system(case: GeneratorCase, det_sign: int) -> EinsteinSystem:
    template, table, relations = case_ansatz(case)
    return assemble_einstein_system(template, det_sign, relations=relations, case=case)
