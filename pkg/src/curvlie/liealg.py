"""Lie algebras given by structure constants, with sl(2,R) specifics.

Structure constants are stored as ``c[k][i][j]`` with
``[e_i, e_j] = sum_k c[k][i][j] e_k``. The sl(2,R) basis is

    E1 = [[0, -1], [1, 0]],  E2 = [[0, 1], [1, 0]],  E3 = [[1, 0], [0, -1]],

with ``[E1, E2] = -2 E3``, ``[E1, E3] = 2 E2`` and ``[E2, E3] = 2 E1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import linalg as la
from .exact import QSqrt3, format_rational, parse_rational, rational_sqrt, to_fraction

Vector = tuple  # tuple of Fractions


class LieAlgebraError(ValueError):
    pass


def _zero_tensor(n):
    return [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]


class LieAlgebra:
    """A finite-dimensional real Lie algebra in a fixed basis.

    ``killing_normalization`` is ``"4tr"`` for the sl(2,R) constructor (the
    form ``4 tr(XY)`` of the 2x2 realisation, which equals the ad-trace form
    on sl(2,R)), ``"ad-trace"`` for generic algebras and ``"blocks"`` for
    direct sums, whose form is assembled from the summands.
    """

    def __init__(self, c, names: Sequence[str] | None = None, *,
                 killing_normalization: str = "ad-trace", summands=None, validate: bool = True):
        n = len(c)
        if n == 0:
            raise LieAlgebraError("dimension must be positive")
        self.dim = n
        self.c = [[[to_fraction(c[k][i][j]) for j in range(n)] for i in range(n)] for k in range(n)]
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.names) != n:
            raise LieAlgebraError("one name per basis vector required")
        self.killing_normalization = killing_normalization
        self.summands = tuple(summands) if summands else ()
        if validate:
            if not self.is_antisymmetric():
                raise LieAlgebraError("structure constants are not antisymmetric")
            if not self.satisfies_jacobi():
                raise LieAlgebraError("structure constants violate the Jacobi identity")

    # -- checks -----------------------------------------------------------
    def is_antisymmetric(self) -> bool:
        return structure_is_antisymmetric(self.c)

    def satisfies_jacobi(self) -> bool:
        return jacobi_defect(self.c) == 0

    # -- elements ---------------------------------------------------------
    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def element(self, coeffs) -> Vector:
        v = tuple(to_fraction(x) for x in coeffs)
        if len(v) != self.dim:
            raise LieAlgebraError(f"element needs {self.dim} coefficients")
        return v

    def bracket(self, X, Y) -> Vector:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not X[i]:
                continue
            for j in range(n):
                if not Y[j]:
                    continue
                xy = X[i] * Y[j]
                for k in range(n):
                    ck = self.c[k][i][j]
                    if ck:
                        out[k] += ck * xy
        return tuple(out)

    def ad_matrix(self, X) -> list[list[Fraction]]:
        return ad_matrix(self, X)

    def killing_form(self):
        return killing_form(self)

    # -- I/O --------------------------------------------------------------
    def to_json(self) -> dict:
        n = self.dim
        entries = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = self.c[k][i][j]
                    if v:
                        entries.append([i, j, k, format_rational(v)])
        return {"dim": n, "basis": list(self.names), "c": entries}

    @classmethod
    def from_json(cls, data) -> "LieAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["dim"])
            names = data.get("basis")
            entries = data["c"]
        except (KeyError, TypeError, ValueError) as exc:
            raise LieAlgebraError(f"malformed structure-constants document: {exc}") from None
        if n <= 0:
            raise LieAlgebraError("dimension must be positive")
        c = _zero_tensor(n)
        for entry in entries:
            if len(entry) != 4:
                raise LieAlgebraError(f"entry {entry!r} must be [i, j, k, value]")
            i, j, k, v = entry
            if not all(isinstance(x, int) and 0 <= x < n for x in (i, j, k)):
                raise LieAlgebraError(f"index out of range in {entry!r}")
            if not i < j:
                raise LieAlgebraError(f"entries must satisfy i < j, got {entry!r}")
            q = parse_rational(str(v))
            c[k][i][j] = q
            c[k][j][i] = -q
        return cls(c, names)

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.c == other.c

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, basis={list(self.names)})"


def structure_is_antisymmetric(c) -> bool:
    n = len(c)
    return all(c[k][i][j] == -c[k][j][i] for k in range(n) for i in range(n) for j in range(n))


def jacobi_defect(c) -> Fraction:
    """Largest absolute Jacobi-identity residual over all index quadruples."""
    n = len(c)
    worst = Fraction(0)
    for i, j, k, l in product(range(n), repeat=4):
        v = Fraction(0)
        for m in range(n):
            v += c[m][i][j] * c[l][m][k] + c[m][j][k] * c[l][m][i] + c[m][k][i] * c[l][m][j]
        if abs(v) > worst:
            worst = abs(v)
    return worst


# ---------------------------------------------------------------------------
# Constructors


SL2_NAMES = ("E1", "E2", "E3")
SL2_MATRICES = (
    ((0, -1), (1, 0)),
    ((0, 1), (1, 0)),
    ((1, 0), (0, -1)),
)


def _sl2_constants():
    c = _zero_tensor(3)

    def put(k, i, j, v):
        c[k][i][j] = Fraction(v)
        c[k][j][i] = Fraction(-v)

    put(2, 0, 1, -2)
    put(1, 0, 2, 2)
    put(0, 1, 2, 2)
    return c


def sl2() -> LieAlgebra:
    return LieAlgebra(_sl2_constants(), SL2_NAMES, killing_normalization="4tr")


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(_zero_tensor(n), killing_normalization="ad-trace")


def direct_sum(L1: LieAlgebra, L2: LieAlgebra, names: Sequence[str] | None = None) -> LieAlgebra:
    n1, n2 = L1.dim, L2.dim
    n = n1 + n2
    c = _zero_tensor(n)
    for k in range(n1):
        for i in range(n1):
            for j in range(n1):
                c[k][i][j] = L1.c[k][i][j]
    for k in range(n2):
        for i in range(n2):
            for j in range(n2):
                c[n1 + k][n1 + i][n1 + j] = L2.c[k][i][j]
    if names is None:
        names = [f"F{i + 1}" for i in range(n)]
    return LieAlgebra(c, names, killing_normalization="blocks", summands=(L1, L2), validate=False)


def sl2_sum() -> LieAlgebra:
    """sl(2,R) + sl(2,R) with basis F1..F6 = (E1,0), (E2,0), (E3,0), (0,E1), (0,E2), (0,E3)."""
    return direct_sum(sl2(), sl2())


# distinguished sl(2,R) elements in the E basis
E1: Vector = (Fraction(1), Fraction(0), Fraction(0))
E2: Vector = (Fraction(0), Fraction(1), Fraction(0))
E3: Vector = (Fraction(0), Fraction(0), Fraction(1))
N: Vector = (Fraction(-1, 2), Fraction(1, 2), Fraction(0))
ZERO3: Vector = (Fraction(0),) * 3

SL2_ELEMENTS = {"E1": E1, "E2": E2, "E3": E3, "N": N, "0": ZERO3}


def pair(X: Vector, Y: Vector) -> Vector:
    """The element ``(X, Y)`` of sl(2,R) + sl(2,R)."""
    return tuple(X) + tuple(Y)


# ---------------------------------------------------------------------------
# Operators and forms


def ad_matrix(L: LieAlgebra, X) -> list[list[Fraction]]:
    """Matrix of ``ad_X`` (column ``j`` holds ``[X, e_j]``)."""
    n = L.dim
    X = tuple(to_fraction(x) for x in X)
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if not X[i]:
            continue
        for j in range(n):
            for k in range(n):
                ck = L.c[k][i][j]
                if ck:
                    M[k][j] += X[i] * ck
    return M


def ad_trace_form(L: LieAlgebra) -> list[list[Fraction]]:
    """``tr(ad_X ad_Y)`` on basis vectors."""
    ads = [ad_matrix(L, L.basis_vector(i)) for i in range(L.dim)]
    n = L.dim
    return [[sum((ads[i][a][b] * ads[j][b][a] for a in range(n) for b in range(n)), Fraction(0))
             for j in range(n)] for i in range(n)]


def sl2_matrix(X) -> list[list[Fraction]]:
    """2x2 matrix realisation of ``X`` given in the E basis."""
    a, b, c = (to_fraction(x) for x in X)
    return [[c, b - a], [a + b, -c]]


def sl2_from_matrix(M) -> Vector:
    """Inverse of :func:`sl2_matrix`; requires a traceless 2x2 matrix."""
    (p, q), (r, s) = [[to_fraction(x) for x in row] for row in M]
    if p + s:
        raise LieAlgebraError("matrix is not traceless")
    return ((r - q) / 2, (r + q) / 2, p)


def _four_trace_form() -> list[list[Fraction]]:
    mats = [sl2_matrix(v) for v in (E1, E2, E3)]
    out = []
    for A in mats:
        row = []
        for B in mats:
            P = la.matmul(A, B)
            row.append(4 * (P[0][0] + P[1][1]))
        out.append(row)
    return out


def killing_form(L: LieAlgebra) -> list[list[Fraction]]:
    if L.killing_normalization == "4tr":
        return _four_trace_form()
    if L.killing_normalization == "blocks" and len(L.summands) == 2:
        B1 = killing_form(L.summands[0])
        B2 = killing_form(L.summands[1])
        n1, n2 = len(B1), len(B2)
        return la.block(B1, la.zeros(n1, n2), la.zeros(n2, n1), B2)
    return ad_trace_form(L)


KILLING_SL2 = la.diag([Fraction(-8), Fraction(8), Fraction(8)])
KILLING_SUM = la.block(KILLING_SL2, la.zeros(3), la.zeros(3), KILLING_SL2)
ETA = la.diag([Fraction(-1), Fraction(1), Fraction(1)])


# ---------------------------------------------------------------------------
# Canonical forms


@dataclass(frozen=True)
class CanonicalForm:
    """Conjugacy type of an sl(2,R) element.

    ``kind`` is ``"zero"``, ``"elliptic"``, ``"hyperbolic"`` or
    ``"nilpotent"``. ``r_squared`` is exact; ``r`` is filled in when it is
    rational.
    """

    kind: str
    r_squared: Fraction = Fraction(0)
    r: Fraction | None = None

    def label(self) -> str:
        if self.kind in ("zero", "nilpotent"):
            return {"zero": "0", "nilpotent": "N"}[self.kind]
        base = "E1" if self.kind == "elliptic" else "E3"
        coef = format_rational(self.r) if self.r is not None else f"sqrt({format_rational(self.r_squared)})"
        return base if self.r == 1 else f"{coef}{base}"


def sl2_canonical_form(X) -> CanonicalForm:
    """Classify ``X`` (E-basis coordinates) by the eigenvalues of its matrix."""
    a, b, c = (to_fraction(x) for x in X)
    # eigenvalues of the traceless matrix satisfy t^2 = -det = b^2 + c^2 - a^2
    ev2 = b * b + c * c - a * a
    if not a and not b and not c:
        return CanonicalForm("zero")
    if ev2 == 0:
        return CanonicalForm("nilpotent")
    if ev2 < 0:
        return CanonicalForm("elliptic", -ev2, rational_sqrt(-ev2))
    return CanonicalForm("hyperbolic", ev2, rational_sqrt(ev2))


# ---------------------------------------------------------------------------
# Constructions on the diagonal embedding


def induced_diagonal_structure_constants(c) -> list:
    """Six-dimensional constants assembled blockwise from a 3-dim array.

    For an output index ``k`` the ``(i, j)`` array is split into four 3x3
    blocks (rows: first or second factor of ``i``; columns: of ``j``), each a
    fixed rational multiple of ``c[k mod 3]``: ``1/3, -1/3 / 1/3, -2/3``
    when ``k`` is in the first factor and ``-2/3, -1/3 / 1/3, 1/3`` when it
    is in the second. The array is returned literally as assembled; it is
    not antisymmetric, see :func:`structure_is_antisymmetric`.
    """
    m = len(c)
    if m != 3:
        raise LieAlgebraError("expects a 3-dimensional structure-constant array")
    first = ((Fraction(1, 3), Fraction(-1, 3)), (Fraction(1, 3), Fraction(-2, 3)))
    second = ((Fraction(-2, 3), Fraction(-1, 3)), (Fraction(1, 3), Fraction(1, 3)))
    out = _zero_tensor(6)
    for k in range(6):
        coef = first if k < 3 else second
        ck = c[k % 3]
        for bi in range(2):
            for bj in range(2):
                f = coef[bi][bj]
                for i in range(3):
                    for j in range(3):
                        out[k][3 * bi + i][3 * bj + j] = f * to_fraction(ck[i][j])
    return out


def diagonal_pullback_metric(B) -> list[list[Fraction]]:
    """``[[2B, B], [B, 2B]]``."""
    B = [[to_fraction(x) for x in row] for row in B]
    B2 = la.scale(B, 2)
    return la.block(B2, B, B, B2)


# ---------------------------------------------------------------------------
# Automorphisms


def is_in_o21(M, eta=ETA) -> bool:
    return la.pullback(M, eta) == [list(r) for r in eta]


def is_in_so21(M) -> bool:
    return is_in_o21(M) and la.det(M) == 1


def preserves_bracket(L: LieAlgebra, M) -> bool:
    """True if the linear map ``M`` satisfies ``M[x, y] = [Mx, My]`` on basis vectors."""
    n = L.dim
    cols = [[M[r][j] for r in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = la.matvec(M, list(L.bracket(L.basis_vector(i), L.basis_vector(j))))
            rhs = _bracket_generic(L, cols[i], cols[j])
            if lhs != rhs:
                return False
    return True


def _bracket_generic(L, X, Y):
    n = L.dim
    out = [Fraction(0)] * n
    for i in range(n):
        for j in range(n):
            if X[i] and Y[j]:
                xy = X[i] * Y[j]
                for k in range(n):
                    if L.c[k][i][j]:
                        out[k] = out[k] + L.c[k][i][j] * xy
    return [x.a if isinstance(x, QSqrt3) and not x.b else x for x in out]


@dataclass(frozen=True)
class Automorphism:
    """An automorphism of sl(2,R) + sl(2,R) acting blockwise, optionally swapping factors.

    As a 6x6 matrix it is ``diag(P, Q)``, followed by the factor exchange
    when ``swap`` is set.
    """

    P: tuple
    Q: tuple
    swap: bool = False

    def matrix(self):
        P = [list(r) for r in self.P]
        Q = [list(r) for r in self.Q]
        D = la.block(P, la.zeros(3), la.zeros(3), Q)
        if self.swap:
            S = la.block(la.zeros(3), la.identity(3), la.identity(3), la.zeros(3))
            D = la.matmul(S, D)
        return D

    def is_valid(self, orientation: bool = True) -> bool:
        check = is_in_so21 if orientation else is_in_o21
        if not (check(self.P) and check(self.Q)):
            return False
        return preserves_bracket(sl2_sum(), self.matrix())

    def pullback(self, g):
        return la.pullback(self.matrix(), g)
