"""Known Einstein metrics on sl(2,R) + sl(2,R) and the maps relating them.

Every table row is a :class:`CatalogFamily`. Entries of the form
``+-sqrt(D)`` are carried by one table variable (``b2`` or ``a1``) tied to
its free parameter by a polynomial relation, and the discrete parameter
``k in {0, 1}`` by ``k^2 - k``. Symbolic verification reduces the Einstein
residuals modulo these relations; sample verification substitutes exact
square roots, leaving Q(sqrt3) through :class:`~curvlie.exact.SqrtExt` when
needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import linalg as la
from .curvature import CurvatureEngine, pullback_curvature, pullback_symmetric, tensors_equal
from .einstein import (
    LAMBDA,
    SolutionRecord,
    einstein_system_for_case,
    make_record,
    metric_index,
)
from .exact import QSqrt3, SqrtExt, rational_sqrt, simplify_scalar, sqrt_in_qs3
from .liealg import Automorphism, is_in_so21, preserves_bracket, sl2, sl2_sum
from .poly import Polynomial, VariableTable, poly_reduce

ONE = Fraction(1)
ZERO = Fraction(0)
SQRT3 = QSqrt3(0, 1)
INV_SQRT3 = QSqrt3(0, Fraction(1, 3))
LAMBDA_B = Fraction(-2)
LAMBDA_NK = QSqrt3(0, Fraction(-10, 9))  # -10/(3*sqrt3)


def exact_sqrt(x):
    """Non-negative square root of an exact non-negative number."""
    x = simplify_scalar(x)
    if isinstance(x, Fraction):
        if x < 0:
            raise ValueError("square root of a negative number")
        r = rational_sqrt(x)
        if r is not None:
            return r
    r = sqrt_in_qs3(x)
    if r is not None:
        return simplify_scalar(r)
    return SqrtExt(0, 1, x)


def _blocks(G1, U, G2):
    return la.block(G1, U, la.transpose(U), G2)


def _diag3(a, b, c):
    return [[a, ZERO, ZERO], [ZERO, b, ZERO], [ZERO, ZERO, c]]


# ---------------------------------------------------------------------------
# Matrix builders; arguments may be numbers or polynomials


def killing_metric(_=None):
    """``B/8``: diag(-1, 1, 1, -1, 1, 1)."""
    return [[Fraction(-1 if i == j and i % 3 == 0 else int(i == j)) for j in range(6)] for i in range(6)]


def g1_metric(_=None):
    G1 = _diag3(-ONE, ONE, ONE)
    G2 = _diag3(Fraction(-2), Fraction(2), Fraction(2))
    return _blocks(G1, la.identity(3), G2)


def g2_metric(_=None):
    a = 2 * INV_SQRT3
    G = _diag3(-a, a, a)
    return [[simplify_scalar(x) for x in row] for row in _blocks(G, la.scale(la.identity(3), INV_SQRT3), G)]


def _split_diagonal(k):
    return _diag3(-(1 + k), 1 + k, 1 + k), _diag3(-(2 - k), 2 - k, 2 - k)


def e1e1_first(v):
    G1, G2 = _split_diagonal(v["k"])
    c, b = v["c2"], v["b2"]
    U = [[ONE, ZERO, ZERO], [ZERO, b, c], [ZERO, -c, b]]
    return _blocks(G1, U, G2)


def _nk_diagonal():
    a = 2 * INV_SQRT3
    return _diag3(-a, a, a)


def e1e1_second(v):
    G = _nk_diagonal()
    c, b = v["c2"], v["b2"]
    U = [[INV_SQRT3, ZERO, ZERO], [ZERO, b, c], [ZERO, -c, b]]
    return _blocks(G, U, G)


def e3e3_first(v):
    G1, G2 = _split_diagonal(v["k"])
    a, b = v["a1"], v["b1"]
    U = [[a, b, ZERO], [-b, -a, ZERO], [ZERO, ZERO, -ONE]]
    return _blocks(G1, U, G2)


def e3e3_second(v):
    G = _nk_diagonal()
    a, b = v["a1"], v["b1"]
    U = [[a, b, ZERO], [-b, -a, ZERO], [ZERO, ZERO, -INV_SQRT3]]
    return _blocks(G, U, G)


def nn_first(v):
    G1, G2 = _split_diagonal(v["k"])
    c = v["c1"]
    h = c * c * Fraction(1, 2)
    U = [[h + 1, h, c], [h, h - 1, c], [-c, -c, -ONE]]
    return _blocks(G1, U, G2)


def nn_second(v):
    G = _nk_diagonal()
    c = v["c1"]
    s = SQRT3 * Fraction(1, 6)
    h = c * c * (SQRT3 * Fraction(1, 2))
    U = [[s * (3 * c * c + 2), h, c], [h, s * (3 * c * c - 2), c], [-c, -c, -INV_SQRT3]]
    return _blocks(G, U, G)


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class CatalogFamily:
    """One table row.

    ``free`` are the continuous parameters, ``discrete`` maps a parameter to
    its allowed values, ``radical`` names the entry equal to
    ``branch * sqrt(radicand(params))``; ``branch_sign`` flips it for ``-``.
    """

    name: str
    case: str
    build: Callable
    lam: object
    free: tuple = ()
    discrete: Mapping = field(default_factory=dict)
    radical: str | None = None
    radicand: Callable | None = None
    radicand_text: str = ""
    target: str = "B/8"

    @property
    def branches(self) -> tuple:
        return (1, -1) if self.radical else (None,)

    @property
    def symbols(self) -> tuple:
        out = list(self.discrete) + list(self.free)
        if self.radical:
            out.append(self.radical)
        return tuple(out)

    def table(self) -> VariableTable:
        return VariableTable(self.symbols or ("t",))

    def relations(self, table: VariableTable | None = None) -> list[Polynomial]:
        """Defining relations among the symbols, as polynomials."""
        table = table or self.table()
        rel = []
        for name, allowed in self.discrete.items():
            p = Polynomial.constant(1, table)
            for a in allowed:
                p = p * (Polynomial.var(name, table) - a)
            rel.append(p)
        if self.radical:
            syms = {s: Polynomial.var(s, table) for s in self.free}
            r = Polynomial.var(self.radical, table)
            rel.append(r * r - self.radicand(syms))
        return rel

    def symbolic_metric(self, table: VariableTable | None = None):
        table = table or self.table()
        syms = {s: Polynomial.var(s, table) for s in self.symbols}
        M = self.build(syms)
        return [[x if isinstance(x, Polynomial) else Polynomial.constant(x, table) for x in row] for row in M]

    def values(self, params: Mapping, branch=None) -> dict:
        """Exact values of all symbols for given parameters and branch sign."""
        v = {}
        for name, allowed in self.discrete.items():
            x = Fraction(params.get(name, allowed[0]))
            if x not in allowed:
                raise ValueError(f"{name} must be one of {allowed}")
            v[name] = x
        for name in self.free:
            x = params.get(name, 0)
            v[name] = x if isinstance(x, (QSqrt3, SqrtExt)) else Fraction(x)
        if self.radical:
            D = simplify_scalar(self.radicand(v))
            root = exact_sqrt(D)
            v[self.radical] = simplify_scalar(root if (branch or 1) > 0 else -root)
        return v

    def metric(self, params: Mapping | None = None, branch=None):
        M = self.build(self.values(params or {}, branch))
        return [[simplify_scalar(x) for x in row] for row in M]

    def instantiate(self, params: Mapping | None = None, branch=None) -> SolutionRecord:
        params = dict(params or {})
        g = self.metric(params, branch)
        info = {k: v for k, v in self.values(params, branch).items()}
        if branch is not None:
            info["branch"] = "+" if branch > 0 else "-"
        return make_record(self.case, g, self.lam, info, self.name)

    def verify_symbolic(self) -> bool:
        """``Ric = lam*g`` and ``det = 1`` modulo the defining relations."""
        table = self.table()
        g = self.symbolic_metric(table)
        rel = self.relations(table)
        engine = CurvatureEngine(sl2_sum(), g)
        if not _reduces_to_zero(engine.det - 1, rel):
            return False
        res = engine.einstein_residual_numerators(self.lam)
        return all(_reduces_to_zero(res[i][j], rel) for i in range(6) for j in range(i, 6))

    def sample_grid(self, samples: Mapping[str, Sequence]) -> list[tuple[dict, object]]:
        """All combinations of the sampled parameters with every branch."""
        from itertools import product

        names = list(self.discrete) + list(self.free)
        pools = [list(samples.get(n, self.discrete.get(n, (0,)))) for n in names]
        out = []
        for combo in product(*pools):
            p = dict(zip(names, combo))
            if self.radical and simplify_scalar(self.radicand({k: Fraction(v) for k, v in p.items()
                                                              if k in self.free})) < 0:
                continue
            for b in self.branches:
                out.append((p, b))
        return out

    def to_record(self) -> SolutionRecord:
        """Symbolic catalog record; ``verified`` reflects :meth:`verify_symbolic`."""
        g = self.symbolic_metric()
        params = {"symbols": list(self.symbols),
                  "relations": [str(r) for r in self.relations()]}
        for n, allowed in self.discrete.items():
            params[n] = [str(a) for a in allowed]
        ok = self.verify_symbolic()
        return SolutionRecord(self.case, g, self.lam, Fraction(1), 2, params, ok, self.name)


def _reduces_to_zero(p, relations) -> bool:
    if not isinstance(p, Polynomial):
        return not p
    if p.is_zero():
        return True
    return poly_reduce(p, relations).is_zero()


B_ROW_CASES = (
    "(E1,rE1)", "(E1,E1)", "(E1,0)", "(E1,rE3)", "(E1,N)",
    "(E3,rE3)", "(E3,E3)", "(E3,0)", "(E3,N)", "(N,0)", "(N,N)",
)


def catalog_families() -> list[CatalogFamily]:
    """Every table row, in table order, followed by ``g1`` and ``g2``."""
    k01 = {"k": (ZERO, ONE)}
    fams = []
    for case in B_ROW_CASES:
        if case == "(E1,E1)":
            fams.append(CatalogFamily(
                "(E1,E1) family-1", case, e1e1_first, LAMBDA_B, ("c2",), k01, "b2",
                lambda v: 1 - v["c2"] * v["c2"], "1 - c2^2", "g1"))
            fams.append(CatalogFamily(
                "(E1,E1) family-2", case, e1e1_second, LAMBDA_NK, ("c2",), {}, "b2",
                lambda v: Fraction(1, 3) - v["c2"] * v["c2"], "1/3 - c2^2", "g2"))
        elif case == "(E3,E3)":
            fams.append(CatalogFamily(
                "(E3,E3) family-1", case, e3e3_first, LAMBDA_B, ("b1",), k01, "a1",
                lambda v: 1 + v["b1"] * v["b1"], "1 + b1^2", "g1"))
            fams.append(CatalogFamily(
                "(E3,E3) family-2", case, e3e3_second, LAMBDA_NK, ("b1",), {}, "a1",
                lambda v: Fraction(1, 3) + v["b1"] * v["b1"], "1/3 + b1^2", "g2"))
        elif case == "(N,N)":
            fams.append(CatalogFamily("(N,N) family-1", case, nn_first, LAMBDA_B, ("c1",), k01, target="g1"))
            fams.append(CatalogFamily("(N,N) family-2", case, nn_second, LAMBDA_NK, ("c1",), {}, target="g2"))
        fams.append(CatalogFamily(f"{case} B/8", case, killing_metric, LAMBDA_B))
    fams.append(CatalogFamily("g1", "(E1,E1)", g1_metric, LAMBDA_B, target="g1"))
    fams.append(CatalogFamily("g2", "(E1,E1)", g2_metric, LAMBDA_NK, target="g2"))
    return fams


def family(name: str) -> CatalogFamily:
    for f in catalog_families():
        if f.name == name:
            return f
    raise KeyError(name)


def known_solution_catalog(symbolic: bool = False) -> list[SolutionRecord]:
    """One record per table row and branch sign.

    By default parametric rows are instantiated at their base point (free
    parameters 0, ``k = 0``); ``symbolic=True`` returns the polynomial
    templates verified modulo their relations.
    """
    out = []
    for fam in catalog_families():
        if symbolic:
            out.append(fam.to_record())
            continue
        for b in fam.branches:
            out.append(fam.instantiate({}, b))
    return out


SAMPLE_VALUES = {"k": (0, 1), "c2": (0, Fraction(1, 2)), "b1": (0, 1), "c1": (0, 1)}


def verify_family_samples(fam: CatalogFamily, samples: Mapping = SAMPLE_VALUES) -> list[SolutionRecord]:
    return [fam.instantiate(p, b) for p, b in fam.sample_grid(samples)]


# ---------------------------------------------------------------------------
# Catalog families annihilate the assembled Einstein system


_FAMILY_VARIABLE_MAP = {
    # table variables of the invariant template expressed through catalog symbols
    "(E1,E1) family-1": lambda s: {"x1": -(1 + s["k"]), "y1": 1 + s["k"], "x2": s["k"] - 2,
                                   "y2": 2 - s["k"], "a1": 1, "b2": s["b2"], "c2": s["c2"]},
    "(E1,E1) family-2": lambda s: {"x1": -2 * INV_SQRT3, "y1": 2 * INV_SQRT3, "x2": -2 * INV_SQRT3,
                                   "y2": 2 * INV_SQRT3, "a1": INV_SQRT3, "b2": s["b2"], "c2": s["c2"]},
}


def family_annihilates_system(fam: CatalogFamily, det_sign: int = 1) -> bool:
    """Substitute a family into the assembled Einstein system of its case.

    Direct substitution of the family's entries (and its ``lambda``) into
    the template variables, then reduction modulo the family relations.
    """
    system = einstein_system_for_case(fam.case, det_sign)
    names = list(system.table.names) + [s for s in fam.symbols if s not in system.table]
    table = VariableTable(names)
    syms = {s: Polynomial.var(s, table) for s in fam.symbols}
    if fam.name in _FAMILY_VARIABLE_MAP:
        mapping = _FAMILY_VARIABLE_MAP[fam.name](syms)
    else:
        mapping = _mapping_from_template(system, fam, table, syms)
    mapping[LAMBDA] = fam.lam
    mapping = {k: v if isinstance(v, Polynomial) else Polynomial.constant(simplify_scalar(v), table)
               for k, v in mapping.items()}
    rel = fam.relations(table)
    for p in system.generators():
        q = p.with_table(table).compose(mapping)
        if not _reduces_to_zero(q, rel):
            return False
    return True


def _mapping_from_template(system, fam, table, syms):
    """Read template variables off the family matrix where they appear bare."""
    target = fam.build(syms)
    mapping = {}
    for i, row in enumerate(system.ansatz):
        for j, p in enumerate(row):
            if p.is_zero() or len(p.terms) != 1:
                continue
            names = p.variables()
            if len(names) == 1:
                (name,) = names
                (_, coef), = p.terms.items()
                if name not in mapping and coef == 1 and p.degree() == 1:
                    mapping[name] = target[i][j]
    return mapping


# ---------------------------------------------------------------------------
# Orbit reduction by automorphisms


J_FLIP = ((ONE, ZERO, ZERO), (ZERO, -ONE, ZERO), (ZERO, ZERO, -ONE))


def t_matrix(c1, which: int = 1):
    """``T_1`` or ``T_2`` for the (N,N) families."""
    c = Fraction(c1) if not isinstance(c1, (QSqrt3, SqrtExt)) else c1
    if which == 1:
        h, s = c * c / 2, c
    elif which == 2:
        h, s = c * c * Fraction(3, 2), SQRT3 * c
    else:
        raise ValueError("which must be 1 or 2")
    M = [[1 + h, h, -s], [-h, 1 - h, s], [-s, -s, ONE]]
    return [[simplify_scalar(x) for x in row] for row in M]


def lower_left_block(g):
    return [[g[3 + i][j] for j in range(3)] for i in range(3)]


def upper_left_block(g):
    return [[g[i][j] for j in range(3)] for i in range(3)]


def orbit_block_product(c1, which: int = 1):
    """``T_i`` times the lower-left block of the (N,N) family member at ``c1``."""
    fam = family(f"(N,N) family-{which}")
    return la.matmul(t_matrix(c1, which), lower_left_block(fam.metric({"c1": c1})))


def block_product_is_identity(c1, which: int = 1) -> bool:
    """Whether ``T_1 M = I`` (``T_2 M = I/sqrt3``) holds with the product taken as written."""
    scale = ONE if which == 1 else INV_SQRT3
    return la.is_zero(la.sub(orbit_block_product(c1, which), la.scale(la.identity(3), scale)))


def transposed_block_product_is_flip(c1, which: int = 1) -> bool:
    """``T_i^T M = J`` (resp. ``J/sqrt3``) with ``J = diag(1, -1, -1)``."""
    fam = family(f"(N,N) family-{which}")
    M = lower_left_block(fam.metric({"c1": c1}))
    scale = ONE if which == 1 else INV_SQRT3
    lhs = la.matmul(la.transpose(t_matrix(c1, which)), M)
    return la.is_zero(la.sub(lhs, la.scale([list(r) for r in J_FLIP], scale)))


@dataclass
class OrbitWitness:
    family: str
    params: dict
    branch: object
    target: str
    automorphism: Automorphism
    maps_to_target: bool
    valid_automorphism: bool

    @property
    def ok(self) -> bool:
        return self.maps_to_target and self.valid_automorphism


def target_metric(name: str):
    return {"g1": g1_metric, "g2": g2_metric, "B/8": killing_metric}[name]()


def orbit_reduction_witness(fam: CatalogFamily | str, params: Mapping | None = None,
                            branch=None) -> OrbitWitness:
    """An automorphism pulling a family member back to ``g1`` or ``g2``.

    The factors are exchanged when the first diagonal block does not
    match the target, the first factor is left alone and the second is
    acted on by ``Q = (L^-1)^T C`` with ``L`` the lower-left block and ``C``
    the target's. For the (N,N) families this ``Q`` equals ``T_i J``.
    """
    if isinstance(fam, str):
        fam = family(fam)
    params = dict(params or {})
    g = fam.metric(params, branch)
    target = target_metric(fam.target)
    swap = upper_left_block(g) != upper_left_block(target)
    if swap:
        S = la.block(la.zeros(3), la.identity(3), la.identity(3), la.zeros(3))
        g_sw = la.pullback(S, g)
    else:
        g_sw = g
    L = lower_left_block(g_sw)
    C = lower_left_block(target)
    if fam.name.startswith("(N,N)") and not swap:
        which = int(fam.name[-1])
        Q = la.matmul(t_matrix(params.get("c1", 0), which), [list(r) for r in J_FLIP])
    else:
        Q = la.transpose(la.matmul(C, la.inverse(L)))
    Q = [[simplify_scalar(x) for x in row] for row in Q]
    aut = Automorphism(tuple(tuple(r) for r in la.identity(3)), tuple(tuple(r) for r in Q), swap)
    pulled = [[simplify_scalar(x) for x in row] for row in aut.pullback(g)]
    return OrbitWitness(fam.name, params, branch, fam.target, aut, pulled == target, aut.is_valid())


def sl2_automorphism_ok(Q) -> bool:
    return is_in_so21(Q) and preserves_bracket(sl2(), Q)


# ---------------------------------------------------------------------------
# Isometry witnesses


ISOMETRY_WITNESS = [[Fraction(int(i == j)) for j in range(6)] for i in range(6)]
ISOMETRY_WITNESS[0][3] = Fraction(-1)
ISOMETRY_WITNESS[1][4] = Fraction(1)
ISOMETRY_WITNESS[2][5] = Fraction(1)


def check_isometry_candidate(g_src, g_dst, M, algebra=None) -> bool:
    """``M^* g_src == g_dst`` and ``M^* R^{g_src} == R^{g_dst}``, exactly."""
    algebra = algebra or sl2_sum()
    if la.det(M) == 0:
        raise ValueError("candidate map is singular")
    pulled = [[simplify_scalar(x) for x in row] for row in pullback_symmetric(g_src, M)]
    dst = [[simplify_scalar(x) for x in row] for row in g_dst]
    if pulled != dst:
        return False
    R_src = CurvatureEngine(algebra, g_src).riemann_values()
    R_dst = CurvatureEngine(algebra, g_dst).riemann_values()
    return tensors_equal(pullback_curvature(R_src, M), R_dst)


def check_so21(M) -> bool:
    return is_in_so21(M)


__all__ = [
    "CatalogFamily", "OrbitWitness", "ISOMETRY_WITNESS", "SAMPLE_VALUES",
    "catalog_families", "check_isometry_candidate", "check_so21", "transposed_block_product_is_flip",
    "family", "family_annihilates_system", "g1_metric", "g2_metric", "killing_metric",
    "known_solution_catalog", "orbit_block_product", "block_product_is_identity", "metric_index",
    "orbit_reduction_witness", "t_matrix", "verify_family_samples",
]
