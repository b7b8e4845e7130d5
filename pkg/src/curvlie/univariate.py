"""Dense univariate polynomials over Q and Q(sqrt3).

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros; ``[]`` is zero. These helpers back the triangular solver:
exact gcds, squarefree parts, Sturm real-root counts and the search for
roots lying in Q(sqrt3).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .exact import QSqrt3, rational_sqrt, to_qs3_or_fraction


def trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p: list) -> int:
    return len(p) - 1


def is_rational(p: list) -> bool:
    return all(not isinstance(c, QSqrt3) or not c.b for c in p)


def _c(x):
    return to_qs3_or_fraction(x)


def add(p, q):
    n = max(len(p), len(q))
    return trim([_c((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)) for i in range(n)])


def scale(p, c):
    return trim([_c(a * c) for a in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim([_c(x) for x in out])


def divmod_poly(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = trim(p)
    lc = q[-1]
    inv = lc.inverse() if isinstance(lc, QSqrt3) else 1 / Fraction(lc)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    r = list(p)
    while len(r) >= len(q) and r:
        k = len(r) - len(q)
        c = _c(r[-1] * inv)
        quot[k] = c
        for i, b in enumerate(q):
            r[i + k] = _c(r[i + k] - c * b)
        r = trim(r)
    return trim(quot), r


def monic(p):
    if not p:
        return p
    lc = p[-1]
    inv = lc.inverse() if isinstance(lc, QSqrt3) else 1 / Fraction(lc)
    return scale(p, inv)


def gcd(p, q):
    p, q = trim(p), trim(q)
    while q:
        p, q = q, divmod_poly(p, q)[1]
    return monic(p)


def derivative(p):
    return trim([_c(p[i] * i) for i in range(1, len(p))])


def squarefree(p):
    p = trim(p)
    if degree(p) < 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(divmod_poly(p, g)[0])


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return _c(acc)


def conjugate(p):
    return [c.conjugate() if isinstance(c, QSqrt3) else c for c in p]


def norm_polynomial(p):
    """``p * conj(p)``, which has rational coefficients."""
    n = mul(p, conjugate(p))
    return [QSqrt3.coerce(c).a for c in n]


# ---------------------------------------------------------------------------
# Real roots over Q


def sturm_sequence(p):
    p = [Fraction(c) for c in trim(p)]
    seq = [p, derivative(p)]
    while seq[-1] and degree(seq[-1]) > 0:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(values):
    signs = [v for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p) -> int:
    """Number of distinct real roots of a rational polynomial (Sturm)."""
    p = trim(p)
    if degree(p) < 1:
        return 0
    seq = sturm_sequence(p)
    at_neg = [(c[-1] if degree(c) % 2 == 0 else -c[-1]) for c in seq if c]
    at_pos = [c[-1] for c in seq if c]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def _numeric_real_roots(p, dps: int):
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p)]
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
    eps = mpmath.mpf(10) ** (-(dps // 3))
    return [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < eps]


def _to_fraction(x, max_den: int) -> Fraction:
    return Fraction(mpmath.nstr(x, 60, min_fixed=-10**9, max_fixed=10**9)).limit_denominator(max_den)


def roots_in_qsqrt3(p) -> tuple[list, list]:
    """Real roots of a rational polynomial that lie in Q(sqrt3).

    Candidates come from high-precision numeric roots, rounded to small
    rationals (roots and sums/products of root pairs); every candidate is
    then confirmed by exact evaluation, so the returned roots are certain.
    Returns ``(roots, cofactor)`` where ``cofactor`` is ``p`` with the
    found roots divided out. The caller decides completeness with
    :func:`count_real_roots` on the cofactor.
    """
    p = squarefree([Fraction(c) for c in p])
    if degree(p) < 1:
        return [], p
    found: list = []
    rest = p
    if degree(rest) <= 2:
        found, rest = _quadratic_roots(rest)
    else:
        dps = 60 + 4 * degree(p)
        numeric = _numeric_real_roots(rest, dps)
        max_den = 10 ** 12
        for x in numeric:
            q = _to_fraction(x, max_den)
            if evaluate(rest, q) == 0:
                found.append(q)
                rest = divmod_poly(rest, [-q, Fraction(1)])[0]
        numeric = _numeric_real_roots(rest, dps) if degree(rest) >= 2 else []
        for i in range(len(numeric)):
            for j in range(i + 1, len(numeric)):
                s = _to_fraction(numeric[i] + numeric[j], max_den)
                pr = _to_fraction(numeric[i] * numeric[j], max_den)
                quad = [pr, -s, Fraction(1)]
                if degree(rest) >= 2 and not divmod_poly(rest, quad)[1]:
                    rs, _ = _quadratic_roots(quad)
                    if rs:
                        found.extend(rs)
                        rest = divmod_poly(rest, quad)[0]
        if 1 <= degree(rest) <= 2:
            rs, rest2 = _quadratic_roots(rest)
            if rs:
                found.extend(rs)
                rest = rest2
    found = sorted(set(found), key=lambda r: QSqrt3.coerce(r))
    return found, monic(rest)


def _quadratic_roots(p):
    """Roots in Q(sqrt3) of a polynomial of degree at most 2."""
    p = trim(p)
    if degree(p) == 1:
        return [_c(-p[0] / p[1])], [Fraction(1)]
    if degree(p) != 2:
        return [], p
    c, b, a = p
    disc = b * b - 4 * a * c
    if disc < 0:
        return [], p
    root = rational_sqrt(disc)
    if root is not None:
        sq = QSqrt3(root)
    else:
        root = rational_sqrt(disc / 3)
        if root is None:
            return [], p
        sq = QSqrt3(0, root)
    r1 = _c((-b + sq) / (2 * a))
    r2 = _c((-b - sq) / (2 * a))
    return sorted({r1, r2}, key=QSqrt3.coerce), [Fraction(1)]


def real_roots_in_qsqrt3(p) -> tuple[list, bool]:
    """Real roots of ``p`` (coefficients in Q(sqrt3)) lying in Q(sqrt3).

    The second value is True when these are provably all real roots.
    """
    p = trim(p)
    if degree(p) < 1:
        return [], True
    if is_rational(p):
        roots, rest = roots_in_qsqrt3([QSqrt3.coerce(c).a for c in p])
        return roots, count_real_roots(rest) == 0
    n = norm_polynomial(p)
    cands, rest = roots_in_qsqrt3(n)
    roots = [r for r in cands if evaluate(p, r) == 0]
    # every real root of p is a real root of the norm polynomial
    return roots, count_real_roots(rest) == 0
