"""Pure-Python hot kernels.

Polynomials handed to these functions are sparse term lists over packed
(order-encoded) monomials, see :mod:`curvlie.monomial`. Reduction works on
integer coefficients, fraction-free, with periodic removal of the integer
content. ``curvlie._kernels`` is a compiled drop-in replacement.
"""

from math import gcd

BACKEND = "python"

_CONTENT_EVERY = 8
_CONTENT_BITS = 256


def mul_terms(a, b, gmask):
    """Product of two term lists ``[(mono, coeff), ...]`` as a dict.

    Raises OverflowError if any exponent field overflows.
    """
    out = {}
    get = out.get
    for ma, ca in a:
        for mb, cb in b:
            m = ma + mb
            out[m] = get(m, 0) + ca * cb
    for m in out:
        if m & gmask:
            raise OverflowError("monomial exponent overflow")
    return {m: c for m, c in out.items() if c}


def content(coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def primitive(monos, coeffs):
    """Divide by the integer content and make the leading coefficient positive."""
    if not coeffs:
        return monos, coeffs
    g = content(coeffs)
    if coeffs[0] < 0:
        g = -g
    if g != 1:
        coeffs = [c // g for c in coeffs]
    return monos, coeffs


def sub_mul(pm, pc, pstart, a, gm, gc, b, shift):
    """Return ``a*p[pstart:] - b*shift*g[1:]`` with ``p[pstart]`` dropped.

    The caller guarantees that the leading terms cancel, so both heads are
    skipped. Both inputs are sorted descending; so is the output.
    """
    rm = []
    rc = []
    i = pstart + 1
    j = 1
    np_ = len(pm)
    ng = len(gm)
    while i < np_ and j < ng:
        mp = pm[i]
        mg = gm[j] + shift
        if mp > mg:
            rm.append(mp)
            rc.append(a * pc[i])
            i += 1
        elif mp < mg:
            rm.append(mg)
            rc.append(-b * gc[j])
            j += 1
        else:
            c = a * pc[i] - b * gc[j]
            if c:
                rm.append(mp)
                rc.append(c)
            i += 1
            j += 1
    while i < np_:
        rm.append(pm[i])
        rc.append(a * pc[i])
        i += 1
    while j < ng:
        rm.append(gm[j] + shift)
        rc.append(-b * gc[j])
        j += 1
    return rm, rc


def find_reducer(t, lms, gmask):
    tg = t | gmask
    for idx in range(len(lms)):
        if (tg - lms[idx]) & gmask == gmask:
            return idx
    return -1


def normal_form(pm, pc, basis, gmask, full=True):
    """Fraction-free normal form of ``p`` modulo ``basis``.

    ``basis`` is a list of ``(monos, coeffs)`` term lists with nonzero
    leading terms. The result is a primitive term list (content removed,
    positive leading coefficient), equal up to a nonzero rational factor to
    the remainder of the classical division algorithm. With ``full`` false
    only the leading term is reduced.
    """
    lms = [g[0][0] for g in basis]
    rm = []
    rc = []
    pm = list(pm)
    pc = list(pc)
    start = 0
    steps = 0
    while start < len(pm):
        t = pm[start]
        idx = find_reducer(t, lms, gmask)
        if idx < 0:
            if not full:
                break
            rm.append(t)
            rc.append(pc[start])
            start += 1
            continue
        gm, gc = basis[idx]
        c = pc[start]
        lc = gc[0]
        g = gcd(c, lc)
        a = lc // g
        b = c // g
        if a < 0:
            a = -a
            b = -b
        pm, pc = sub_mul(pm, pc, start, a, gm, gc, b, t - gm[0])
        start = 0
        if a != 1 and rc:
            rc = [a * x for x in rc]
        steps += 1
        if steps % _CONTENT_EVERY == 0 or (pc and abs(pc[0]).bit_length() > _CONTENT_BITS):
            g = 0
            for x in rc:
                g = gcd(g, x)
            if g != 1:
                for x in pc:
                    g = gcd(g, x)
                    if g == 1:
                        break
                if g > 1:
                    rc = [x // g for x in rc]
                    pc = [x // g for x in pc]
    rm.extend(pm[start:])
    rc.extend(pc[start:])
    return primitive(rm, rc)


def spoly(fm, fc, gm, gc, lcm_mono):
    """Fraction-free S-polynomial of two term lists."""
    f_lc = fc[0]
    g_lc = gc[0]
    g = gcd(f_lc, g_lc)
    a = g_lc // g
    b = f_lc // g
    fshift = lcm_mono - fm[0]
    # a * (lcm/lm f) * f - b * (lcm/lm g) * g, heads cancel
    sm = [m + fshift for m in fm]
    return sub_mul(sm, fc, 0, a, gm, gc, b, lcm_mono - gm[0])
