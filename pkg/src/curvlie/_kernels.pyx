# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled hot kernels; same contract as :mod:`curvlie._kernels_py`."""

from math import gcd

BACKEND = "cython"

cdef int _CONTENT_EVERY = 8
cdef int _CONTENT_BITS = 256


def mul_terms(list a, list b, object gmask):
    cdef dict out = {}
    cdef Py_ssize_t i, j, na = len(a), nb = len(b)
    cdef object ma, ca, mb, cb, m, prev
    cdef list bm = [t[0] for t in b]
    cdef list bc = [t[1] for t in b]
    for i in range(na):
        ma, ca = a[i]
        for j in range(nb):
            m = ma + bm[j]
            prev = out.get(m)
            if prev is None:
                out[m] = ca * bc[j]
            else:
                out[m] = prev + ca * bc[j]
    for m in out:
        if m & gmask:
            raise OverflowError("monomial exponent overflow")
    return {m: c for m, c in out.items() if c}


def content(coeffs):
    cdef object g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def primitive(list monos, list coeffs):
    if not coeffs:
        return monos, coeffs
    cdef object g = content(coeffs)
    if coeffs[0] < 0:
        g = -g
    if g != 1:
        coeffs = [c // g for c in coeffs]
    return monos, coeffs


def sub_mul(list pm, list pc, Py_ssize_t pstart, object a, list gm, list gc,
            object b, object shift):
    cdef list rm = []
    cdef list rc = []
    cdef Py_ssize_t i = pstart + 1, j = 1
    cdef Py_ssize_t np_ = len(pm), ng = len(gm)
    cdef object mp, mg, c
    cdef bint a_one = a == 1
    while i < np_ and j < ng:
        mp = pm[i]
        mg = gm[j] + shift
        if mp > mg:
            rm.append(mp)
            rc.append(pc[i] if a_one else a * pc[i])
            i += 1
        elif mp < mg:
            rm.append(mg)
            rc.append(-b * gc[j])
            j += 1
        else:
            c = (pc[i] if a_one else a * pc[i]) - b * gc[j]
            if c:
                rm.append(mp)
                rc.append(c)
            i += 1
            j += 1
    while i < np_:
        rm.append(pm[i])
        rc.append(pc[i] if a_one else a * pc[i])
        i += 1
    while j < ng:
        rm.append(gm[j] + shift)
        rc.append(-b * gc[j])
        j += 1
    return rm, rc


cdef Py_ssize_t _find_reducer(object t, list lms, object gmask):
    cdef object tg = t | gmask
    cdef Py_ssize_t idx, n = len(lms)
    for idx in range(n):
        if (tg - lms[idx]) & gmask == gmask:
            return idx
    return -1


def find_reducer(t, list lms, gmask):
    return _find_reducer(t, lms, gmask)


def normal_form(pm, pc, list basis, object gmask, bint full=True):
    cdef list lms = [g[0][0] for g in basis]
    cdef list rm = []
    cdef list rc = []
    cdef list pm_ = list(pm)
    cdef list pc_ = list(pc)
    cdef list gm, gc
    cdef Py_ssize_t start = 0, idx
    cdef long steps = 0
    cdef object t, c, lc, g, a, b, x
    while start < len(pm_):
        t = pm_[start]
        idx = _find_reducer(t, lms, gmask)
        if idx < 0:
            if not full:
                break
            rm.append(t)
            rc.append(pc_[start])
            start += 1
            continue
        gm, gc = basis[idx]
        c = pc_[start]
        lc = gc[0]
        g = gcd(c, lc)
        a = lc // g
        b = c // g
        if a < 0:
            a = -a
            b = -b
        pm_, pc_ = sub_mul(pm_, pc_, start, a, gm, gc, b, t - gm[0])
        start = 0
        if a != 1 and rc:
            rc = [a * x for x in rc]
        steps += 1
        if steps % _CONTENT_EVERY == 0 or (pc_ and abs(pc_[0]).bit_length() > _CONTENT_BITS):
            g = 0
            for x in rc:
                g = gcd(g, x)
            if g != 1:
                for x in pc_:
                    g = gcd(g, x)
                    if g == 1:
                        break
                if g > 1:
                    rc = [x // g for x in rc]
                    pc_ = [x // g for x in pc_]
    rm.extend(pm_[start:])
    rc.extend(pc_[start:])
    return primitive(rm, rc)


def spoly(list fm, list fc, list gm, list gc, object lcm_mono):
    cdef object f_lc = fc[0], g_lc = gc[0]
    cdef object g = gcd(f_lc, g_lc)
    cdef object a = g_lc // g, b = f_lc // g
    cdef object fshift = lcm_mono - fm[0]
    cdef list sm = [m + fshift for m in fm]
    return sub_mul(sm, fc, 0, a, gm, gc, b, lcm_mono - gm[0])
