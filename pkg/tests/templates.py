"""Invariant-metric templates written out by hand, as an oracle independent of the RREF construction.

Each builder takes a dict of parameter values and returns a 6x6 matrix;
``Q`` is a 3x3 block used for the (X, 0) rows.
"""

from fractions import Fraction

H = Fraction(1, 2)


def _sym(upper_left, upper_right, lower_right):
    top = [list(a) + list(b) for a, b in zip(upper_left, upper_right)]
    lower_left = [list(r) for r in zip(*upper_right)]
    bottom = [list(a) + list(b) for a, b in zip(lower_left, lower_right)]
    return top + bottom


def e1_re1(p):
    return _sym([[p["x1"], 0, 0], [0, p["y1"], 0], [0, 0, p["y1"]]],
                [[p["a1"], 0, 0], [0, 0, 0], [0, 0, 0]],
                [[p["x2"], 0, 0], [0, p["y2"], 0], [0, 0, p["y2"]]])


def e1_e1(p):
    return _sym([[p["x1"], 0, 0], [0, p["y1"], 0], [0, 0, p["y1"]]],
                [[p["a1"], 0, 0], [0, p["b2"], p["c2"]], [0, -p["c2"], p["b2"]]],
                [[p["x2"], 0, 0], [0, p["y2"], 0], [0, 0, p["y2"]]])


def e1_0(p, Q):
    return _sym([[p["x1"], 0, 0], [0, p["y1"], 0], [0, 0, p["y1"]]],
                [[p["a1"], p["b1"], p["c1"]], [0, 0, 0], [0, 0, 0]], Q)


def e1_re3(p):
    return _sym([[p["x1"], 0, 0], [0, p["y1"], 0], [0, 0, p["y1"]]],
                [[0, 0, p["c1"]], [0, 0, 0], [0, 0, 0]],
                [[p["x2"], 0, 0], [0, -p["x2"], 0], [0, 0, p["z2"]]])


def e1_n(p):
    x2, y2 = p["x2"], p["y2"]
    return _sym([[p["x1"], 0, 0], [0, p["y1"], 0], [0, 0, p["y1"]]],
                [[p["a1"], p["a1"], 0], [0, 0, 0], [0, 0, 0]],
                [[x2, (x2 + y2) * H, 0], [(x2 + y2) * H, y2, 0], [0, 0, (y2 - x2) * H]])


def e3_re3(p):
    return _sym([[p["x1"], 0, 0], [0, -p["x1"], 0], [0, 0, p["z1"]]],
                [[0, 0, 0], [0, 0, 0], [0, 0, p["c3"]]],
                [[p["x2"], 0, 0], [0, -p["x2"], 0], [0, 0, p["z2"]]])


def e3_e3(p):
    return _sym([[p["x1"], 0, 0], [0, -p["x1"], 0], [0, 0, p["z1"]]],
                [[p["a1"], p["b1"], 0], [-p["b1"], -p["a1"], 0], [0, 0, p["c3"]]],
                [[p["x2"], 0, 0], [0, -p["x2"], 0], [0, 0, p["z2"]]])


def e3_0(p, Q):
    return _sym([[p["x1"], 0, 0], [0, -p["x1"], 0], [0, 0, p["z1"]]],
                [[0, 0, 0], [0, 0, 0], [p["a3"], p["b3"], p["c3"]]], Q)


def e3_n(p):
    x2, y2 = p["x2"], p["y2"]
    return _sym([[p["x1"], 0, 0], [0, -p["x1"], 0], [0, 0, p["z1"]]],
                [[0, 0, 0], [0, 0, 0], [p["a3"], p["a3"], 0]],
                [[x2, (x2 + y2) * H, 0], [(x2 + y2) * H, y2, 0], [0, 0, (y2 - x2) * H]])


def n_0(p, Q):
    x1, y1 = p["x1"], p["y1"]
    return _sym([[x1, (x1 + y1) * H, 0], [(x1 + y1) * H, y1, 0], [0, 0, (y1 - x1) * H]],
                [[p["a1"], p["b1"], p["c1"]], [p["a1"], p["b1"], p["c1"]], [0, 0, 0]], Q)


def n_n(p):
    x1, y1, x2, y2 = p["x1"], p["y1"], p["x2"], p["y2"]
    a, b, c = p["a1"], p["b1"], p["c1"]
    return _sym([[x1, (x1 + y1) * H, 0], [(x1 + y1) * H, y1, 0], [0, 0, (y1 - x1) * H]],
                [[a, b, c], [b, -a + 2 * b, c], [-c, -c, -a + b]],
                [[x2, (x2 + y2) * H, 0], [(x2 + y2) * H, y2, 0], [0, 0, (y2 - x2) * H]])


def q_block(i, x, y, z):
    """Q_1..Q_5 with the 1/sqrt2 entry of Q_5 given as ``z`` (any value works for containment)."""
    if i == 1:
        return [[x, 0, 0], [0, y, 0], [0, 0, z]]
    if i == 2:
        return [[-x, y, 0], [y, x, 0], [0, 0, z]]
    if i == 3:
        return [[-H - x, -H, 0], [-H, -H + x, 0], [0, 0, y]]
    if i == 4:
        return [[H - x, H, 0], [H, H + x, 0], [0, 0, y]]
    return [[-x, 0, z], [0, x, z], [z, z, x]]


TEMPLATES = {
    "(E1,2E1)": e1_re1, "(E1,E1)": e1_e1, "(E1,0)": e1_0, "(E1,2E3)": e1_re3,
    "(E1,N)": e1_n, "(E3,2E3)": e3_re3, "(E3,E3)": e3_e3, "(E3,0)": e3_0,
    "(E3,N)": e3_n, "(N,0)": n_0, "(N,N)": n_n,
}
NEEDS_Q = {"(E1,0)", "(E3,0)", "(N,0)"}
