"""Curvature of left-invariant metrics from structure constants.

For a metric ``g`` on a Lie algebra with constants ``c[k][i][j]`` the
Levi-Civita connection in the frame ``F_i`` is ``nabla_{F_i} F_j =
omega[k][i][j] F_k`` with

    omega^k_ij = 1/2 (-g_il g^mk c^l_jm - g_jl g^mk c^l_im + c^k_ij)

and ``R^l_ijk = omega^m_jk omega^l_im - omega^m_ik omega^l_jm -
c^m_ij omega^l_mk``, ``Ric_ij = R^l_lij``.

All tensors are kept as numerators over a power of ``det(g)``, writing
``g^mk = adj(g)[m][k] / det``; the computation is then division free and
runs unchanged over rationals, Q(sqrt3), its quadratic extensions and
polynomial rings. Components are produced lazily and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .exact import QSqrt3, SqrtExt, exact_sign, simplify_scalar, to_fraction
from .liealg import LieAlgebra
from .poly import Polynomial, RationalFunction, VariableTable, DEFAULT_TABLE


class DegenerateMetric(ZeroDivisionError):
    """The metric has vanishing determinant where a value was requested."""


def _is_poly(x) -> bool:
    return isinstance(x, Polynomial)


def _quotient(num, den):
    if _is_poly(num) or _is_poly(den):
        if not _is_poly(den):
            return RationalFunction(num, Polynomial.constant(den, num.table))
        if not _is_poly(num):
            num = Polynomial.constant(num, den.table)
        return RationalFunction(num, den)
    return simplify_scalar(num / den) if num else Fraction(0)


def _zero_like(x):
    return x * 0


# ---------------------------------------------------------------------------
# Metric ansatz


class MetricAnsatz:
    """A symmetric matrix whose entries are polynomials or exact scalars.

    ``parameters`` lists the variables the entries may use; ``algebra`` is
    the Lie algebra the metric lives on.
    """

    def __init__(self, matrix, algebra: LieAlgebra, parameters: Sequence[str] = (),
                 table: VariableTable | None = None):
        n = algebra.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise ValueError(f"metric must be {n}x{n}")
        self.table = table
        rows = []
        for row in matrix:
            out = []
            for x in row:
                if isinstance(x, str):
                    x = Polynomial.parse(x, table or DEFAULT_TABLE)
                elif isinstance(x, int):
                    x = Fraction(x)
                out.append(x)
            rows.append(out)
        if any(_is_poly(x) for r in rows for x in r):
            tbl = next(x.table for r in rows for x in r if _is_poly(x))
            rows = [[x if _is_poly(x) else Polynomial.constant(x, tbl) for x in r] for r in rows]
            self.table = tbl
        if not la.is_symmetric(rows):
            raise ValueError("metric must be symmetric")
        self.matrix = rows
        self.algebra = algebra
        self.parameters = tuple(parameters)

    @property
    def dim(self):
        return self.algebra.dim

    def is_symbolic(self) -> bool:
        return self.table is not None and any(_is_poly(x) for r in self.matrix for x in r)

    def evaluate(self, assignment: Mapping[str, object]) -> "MetricAnsatz":
        if not self.is_symbolic():
            return self
        rows = [[simplify_scalar(x.evaluate(assignment)) for x in r] for r in self.matrix]
        return MetricAnsatz(rows, self.algebra)

    def determinant(self):
        return la.det(self.matrix)


# ---------------------------------------------------------------------------
# Tensors as numerators over a shared denominator


class FractionTensor:
    """Components ``numerator(idx) / denominator`` with lazily computed numerators."""

    def __init__(self, rank: int, n: int, compute, denominator):
        self.rank = rank
        self.n = n
        self._compute = compute
        self._cache: dict = {}
        self.denominator = denominator

    def numerator(self, *idx):
        v = self._cache.get(idx)
        if v is None:
            v = self._compute(*idx)
            self._cache[idx] = v
        return v

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return _quotient(self.numerator(*idx), self.denominator)

    def indices(self):
        from itertools import product

        return product(range(self.n), repeat=self.rank)

    def is_zero(self) -> bool:
        return all(not self.numerator(*i) for i in self.indices())

    def nonzero_components(self, limit: int | None = None):
        out = []
        for i in self.indices():
            if self.numerator(*i):
                out.append((i, self[i]))
                if limit is not None and len(out) >= limit:
                    break
        return out

    def values(self) -> dict:
        return {i: self[i] for i in self.indices()}


class CurvatureEngine:
    """Connection, Riemann, Ricci and nabla-R of one metric.

    ``P[k][i][j] = 2 det(g) omega^k_ij``,
    ``NR[l][i][j][k] = 4 det(g)^2 R^l_ijk``,
    ``NRic[i][j] = 4 det(g)^2 Ric_ij`` and
    ``NDR[m][l][i][j][k] = 8 det(g)^3 (nabla_m R)^l_ijk``.
    """

    def __init__(self, algebra: LieAlgebra, metric):
        if isinstance(metric, MetricAnsatz):
            g = metric.matrix
        else:
            g = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in metric]
        n = algebra.dim
        self.n = n
        self.algebra = algebra
        self.g = g
        self.c = algebra.c
        self.det = la.det(g)
        if not self.det:
            raise DegenerateMetric("metric is degenerate")
        self.adj = la.adjugate(g)
        # sparse structure constants
        self.c_entries = [(k, i, j, algebra.c[k][i][j])
                          for k in range(n) for i in range(n) for j in range(n) if algebra.c[k][i][j]]
        self._by_jm: dict = {}
        for k, i, j, v in self.c_entries:
            self._by_jm.setdefault((i, j), []).append((k, v))
        self._S: dict = {}
        self._P: dict = {}
        self._T: list | None = None
        self.two_det = self.det * 2
        self.omega = FractionTensor(3, n, self._p, self.two_det)
        self.riemann = FractionTensor(4, n, self._nr, self.det * self.det * 4)
        self.ricci = FractionTensor(2, n, self._nric, self.det * self.det * 4)
        self.nabla_riemann = FractionTensor(5, n, self._ndr, self.det * self.det * self.det * 8)

    # S_ijm = sum_l g_il c^l_jm
    def _s(self, i, j, m):
        key = (i, j, m)
        v = self._S.get(key)
        if v is None:
            v = _zero_like(self.det)
            for l, cv in self._by_jm.get((j, m), ()):
                gil = self.g[i][l]
                if gil:
                    v = v + gil * cv
            self._S[key] = v
        return v

    def _p(self, k, i, j):
        key = (k, i, j)
        v = self._P.get(key)
        if v is not None:
            return v
        acc = _zero_like(self.det)
        for m in range(self.n):
            a = self.adj[m][k]
            if not a:
                continue
            s = self._s(i, j, m) + self._s(j, i, m)
            if s:
                acc = acc - a * s
        cij = self.c[k][i][j]
        if cij:
            acc = acc + self.det * cij
        acc = simplify_scalar(acc) if not _is_poly(acc) else acc
        self._P[key] = acc
        return acc

    def _nr(self, l, i, j, k):
        P = self._p
        acc = _zero_like(self.det)
        for m in range(self.n):
            a = P(m, j, k)
            if a:
                b = P(l, i, m)
                if b:
                    acc = acc + a * b
            a = P(m, i, k)
            if a:
                b = P(l, j, m)
                if b:
                    acc = acc - a * b
            cm = self.c[m][i][j]
            if cm:
                b = P(l, m, k)
                if b:
                    acc = acc - self.two_det * cm * b
        return simplify_scalar(acc) if not _is_poly(acc) else acc

    def _trace_vector(self):
        if self._T is None:
            self._T = []
            for m in range(self.n):
                acc = _zero_like(self.det)
                for l in range(self.n):
                    acc = acc + self._p(l, l, m)
                self._T.append(acc)
        return self._T

    def _nric(self, i, j):
        P = self._p
        T = self._trace_vector()
        n = self.n
        acc = _zero_like(self.det)
        for m in range(n):
            a = P(m, i, j)
            if a and T[m]:
                acc = acc + a * T[m]
        for l in range(n):
            for m in range(n):
                a = P(m, l, j)
                if a:
                    b = P(l, i, m)
                    if b:
                        acc = acc - a * b
        for l in range(n):
            for m in range(n):
                cm = self.c[m][l][i]
                if cm:
                    b = P(l, m, j)
                    if b:
                        acc = acc - self.two_det * cm * b
        return simplify_scalar(acc) if not _is_poly(acc) else acc

    def _ndr(self, m, l, i, j, k):
        P = self._p
        R = self.riemann.numerator
        n = self.n
        acc = _zero_like(self.det)
        for q in range(n):
            a = P(l, m, q)
            if a:
                b = R(q, i, j, k)
                if b:
                    acc = acc + a * b
            a = P(q, m, i)
            if a:
                b = R(l, q, j, k)
                if b:
                    acc = acc - a * b
            a = P(q, m, j)
            if a:
                b = R(l, i, q, k)
                if b:
                    acc = acc - a * b
            a = P(q, m, k)
            if a:
                b = R(l, i, j, q)
                if b:
                    acc = acc - a * b
        return simplify_scalar(acc) if not _is_poly(acc) else acc

    # -- convenience --------------------------------------------------------
    def ricci_matrix(self):
        n = self.n
        return [[self.ricci[i, j] for j in range(n)] for i in range(n)]

    def ricci_numerators(self):
        n = self.n
        return [[self.ricci.numerator(i, j) for j in range(n)] for i in range(n)]

    def riemann_values(self) -> dict:
        return self.riemann.values()

    def einstein_residual_numerators(self, lam):
        """Numerators of ``Ric - lam*g`` over ``4 det^2``."""
        n = self.n
        d4 = self.det * self.det * 4
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                v = self.ricci.numerator(i, j) - d4 * self.g[i][j] * lam
                row.append(v if _is_poly(v) else simplify_scalar(v))
            out.append(row)
        return out

    def is_einstein(self, lam) -> bool:
        n = self.n
        res = self.einstein_residual_numerators(lam)
        return all(not res[i][j] for i in range(n) for j in range(i, n))


# ---------------------------------------------------------------------------
# Operation-level API


def inverse_metric(g) -> list[list]:
    """``g^{-1}`` as ``adj(g)/det(g)``; rational functions for symbolic metrics."""
    matrix = g.matrix if isinstance(g, MetricAnsatz) else g
    d = la.det(matrix)
    if not d:
        raise DegenerateMetric("metric is identically degenerate")
    adj = la.adjugate(matrix)
    return [[_quotient(a, d) for a in row] for row in adj]


@dataclass
class ConnectionCoefficients:
    engine: CurvatureEngine

    def __getitem__(self, kij):
        return self.engine.omega[kij]

    def numerator(self, k, i, j):
        return self.engine.omega.numerator(k, i, j)

    @property
    def denominator(self):
        return self.engine.omega.denominator


@dataclass
class RiemannTensor:
    engine: CurvatureEngine

    def __getitem__(self, lijk):
        return self.engine.riemann[lijk]

    def is_zero(self):
        return self.engine.riemann.is_zero()

    def values(self):
        return self.engine.riemann.values()


@dataclass
class CovDerivCurvature:
    engine: CurvatureEngine

    def __getitem__(self, idx):
        return self.engine.nabla_riemann[idx]

    def is_zero(self) -> bool:
        return self.engine.nabla_riemann.is_zero()

    def nonzero_components(self, limit=None):
        return self.engine.nabla_riemann.nonzero_components(limit)


def connection_coefficients(L: LieAlgebra, g) -> ConnectionCoefficients:
    return ConnectionCoefficients(CurvatureEngine(L, g))


def riemann_tensor(L: LieAlgebra, omega: ConnectionCoefficients) -> RiemannTensor:
    return RiemannTensor(omega.engine)


def ricci_tensor(R: RiemannTensor) -> list[list]:
    return R.engine.ricci_matrix()


def cov_deriv_riemann(L: LieAlgebra, g, omega: ConnectionCoefficients, R: RiemannTensor) -> CovDerivCurvature:
    return CovDerivCurvature(R.engine)


def ricci(L: LieAlgebra, g) -> list[list]:
    return CurvatureEngine(L, g).ricci_matrix()


# ---------------------------------------------------------------------------
# Signature and pullbacks


def signature_index(g) -> tuple[int, int, int]:
    """``(negatives, positives, zeros)`` of a symmetric exact matrix."""
    matrix = g.matrix if isinstance(g, MetricAnsatz) else g
    pos, neg, zero = la.symmetric_ldl_signature(matrix)
    return neg, pos, zero


def pullback_symmetric(T, M):
    if len(M) != len(T):
        raise ValueError("dimension mismatch")
    return la.pullback(M, T)


def pullback_curvature(R: Mapping[tuple, object], M) -> dict:
    """``(M^* R)^l_ijk = (M^-1)^l_a R^a_bcd M^b_i M^c_j M^d_k``."""
    n = len(M)
    Minv = la.inverse(M)
    nz = {idx: v for idx, v in R.items() if v}
    out = {}
    # contract one slot at a time to keep the cost at n^5
    step = {}
    for (a, b, c, d), v in nz.items():
        for k in range(n):
            w = M[d][k]
            if w:
                key = (a, b, c, k)
                step[key] = step.get(key, 0) + v * w
    step2 = {}
    for (a, b, c, k), v in step.items():
        for j in range(n):
            w = M[c][j]
            if w:
                key = (a, b, j, k)
                step2[key] = step2.get(key, 0) + v * w
    step3 = {}
    for (a, b, j, k), v in step2.items():
        for i in range(n):
            w = M[b][i]
            if w:
                key = (a, i, j, k)
                step3[key] = step3.get(key, 0) + v * w
    for (a, i, j, k), v in step3.items():
        for l in range(n):
            w = Minv[l][a]
            if w:
                key = (l, i, j, k)
                out[key] = out.get(key, 0) + v * w
    from itertools import product

    return {idx: simplify_scalar(out.get(idx, Fraction(0))) if out.get(idx, 0) else Fraction(0)
            for idx in product(range(n), repeat=4)}


def tensors_equal(A: Mapping, B: Mapping) -> bool:
    keys = set(A) | set(B)
    return all((A.get(k) or 0) == (B.get(k) or 0) for k in keys)


def scale_metric(g, c):
    return la.scale(g, c)
