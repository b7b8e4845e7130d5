"""Small exact matrix helpers over any commutative scalar ring.

Matrices are lists of row lists. Scalars may be ``Fraction``, ``QSqrt3``
or :class:`~curvlie.poly.Polynomial`; only ring operations are used unless a
function says otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .exact import QSqrt3, exact_inverse, exact_sign, to_qs3_or_fraction


def zeros(n: int, m: int | None = None, zero=Fraction(0)) -> list[list]:
    return [[zero] * (n if m is None else m) for _ in range(n)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def diag(values) -> list[list]:
    values = list(values)
    n = len(values)
    zero = values[0] * 0 if values else Fraction(0)
    return [[values[i] if i == j else zero for j in range(n)] for i in range(n)]


def to_fractions(M) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = row[0] * col[0]
            for a, b in zip(row[1:], col[1:]):
                acc = acc + a * b
            out_row.append(_clean(acc))
        out.append(out_row)
    return out


def matvec(A, v):
    return [_clean(sum((a * x for a, x in zip(row, v)), start=row[0] * 0)) for row in A]


def add(A, B):
    return [[_clean(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[_clean(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A, c):
    return [[_clean(a * c) for a in row] for row in A]


def is_symmetric(M) -> bool:
    n = len(M)
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def is_zero(M) -> bool:
    return all(not x for row in M for x in row)


def block(A, B, C, D):
    """``[[A, B], [C, D]]`` as one matrix."""
    return [ra + rb for ra, rb in zip(A, B)] + [rc + rd for rc, rd in zip(C, D)]


def pullback(M, g):
    """``M^T g M``: the bilinear form ``g`` pulled back along ``M``."""
    return matmul(transpose(M), matmul(g, M))


def _clean(x):
    return to_qs3_or_fraction(x) if isinstance(x, QSqrt3) else x


def det(M):
    """Determinant by cofactor expansion with memoised minors.

    Division free, so it works over polynomial rings; the memo keeps a
    6x6 expansion at 2**6 distinct minors.
    """
    n = len(M)
    if n == 0:
        return Fraction(1)
    rows = tuple(tuple(r) for r in M)
    return _det_minor(rows, tuple(range(n)))


def _det_minor(rows, cols):
    cache: dict = {}

    def rec(r, cs):
        if len(cs) == 1:
            return rows[r][cs[0]]
        key = cs
        hit = cache.get(key)
        if hit is not None:
            return hit
        acc = None
        for idx, c in enumerate(cs):
            a = rows[r][c]
            if not a:
                continue
            sub_ = rec(r + 1, cs[:idx] + cs[idx + 1:])
            term = a * sub_
            if idx % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = rows[r][cs[0]] * 0
        acc = _clean(acc)
        cache[key] = acc
        return acc

    return rec(0, cols)


def adjugate(M):
    """Classical adjoint, so that ``M @ adj(M) == det(M) * I``."""
    n = len(M)
    if n == 1:
        return [[M[0][0] * 0 + 1]]
    rows = tuple(tuple(r) for r in M)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        others_r = [r for r in range(n) if r != i]
        sub_rows = tuple(rows[r] for r in others_r)
        cache = _minor_cache(sub_rows)
        for j in range(n):
            cols = tuple(c for c in range(n) if c != j)
            m = cache(cols)
            out[j][i] = -m if (i + j) % 2 else m
    return out


def _minor_cache(sub_rows):
    memo: dict = {}
    rows = sub_rows

    def rec(r, cs):
        if len(cs) == 1:
            return rows[r][cs[0]]
        hit = memo.get((r, cs))
        if hit is not None:
            return hit
        acc = None
        for idx, c in enumerate(cs):
            a = rows[r][c]
            if not a:
                continue
            term = a * rec(r + 1, cs[:idx] + cs[idx + 1:])
            if idx % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = rows[r][cs[0]] * 0
        acc = _clean(acc)
        memo[(r, cs)] = acc
        return acc

    return lambda cols: rec(0, cols)


# ---------------------------------------------------------------------------
# Field-only helpers (Fraction or QSqrt3 entries)


def _inv(x):
    return exact_inverse(x)


def inverse(M):
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = _inv(A[col][col])
        A[col] = [_clean(x * inv) for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [_clean(a - f * b) for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def rref(M):
    """Reduced row echelon form and pivot columns."""
    A = [list(row) for row in M]
    rows = len(A)
    cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = _inv(A[r][c])
        A[r] = [_clean(x * inv) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [_clean(a - f * b) for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def nullspace(M, ncols: int | None = None):
    """Basis of the right kernel, one vector per free column."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    A, pivots = rref(M)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(A, pivots):
            v[p] = _clean(-row[f])
        basis.append(v)
    return basis


def rank(M) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def symmetric_ldl_signature(M) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts of a symmetric matrix over a field.

    Symmetric Gaussian elimination with exact pivots; a zero diagonal with a
    nonzero off-diagonal entry is handled by the congruence that adds row
    and column ``j`` to ``i``.
    """
    A = [list(row) for row in M]
    n = len(A)
    pos = neg = 0
    idx = list(range(n))
    while idx:
        p = next((i for i in idx if A[i][i]), None)
        if p is None:
            pair = next(((i, j) for i, j in combinations(idx, 2) if A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2*A[i][j] != 0
            for k in range(n):
                A[i][k] = _clean(A[i][k] + A[j][k])
            for k in range(n):
                A[k][i] = _clean(A[k][i] + A[k][j])
            p = i
        d = A[p][p]
        if exact_sign(d) > 0:
            pos += 1
        else:
            neg += 1
        inv = _inv(d)
        rest = [i for i in idx if i != p]
        for i in rest:
            f = _clean(A[i][p] * inv)
            if f:
                for k in rest:
                    A[i][k] = _clean(A[i][k] - f * A[p][k])
        idx = rest
    zero = n - pos - neg
    return pos, neg, zero
