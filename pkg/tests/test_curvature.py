from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from curvlie import linalg as la
from curvlie.curvature import (
    CurvatureEngine,
    DegenerateMetric,
    MetricAnsatz,
    connection_coefficients,
    cov_deriv_riemann,
    pullback_curvature,
    pullback_symmetric,
    ricci,
    riemann_tensor,
    signature_index,
    tensors_equal,
)
from curvlie.einstein import negate_metric, make_record, verify_einstein
from curvlie.catalog import g1_metric, g2_metric, killing_metric, ISOMETRY_WITNESS
from curvlie.exact import QSqrt3
from curvlie.liealg import sl2, sl2_sum

import oracle

S6 = sl2_sum()
LAM_G2 = QSqrt3(0, Fraction(-10, 9))


def sym_matrix(n, lo=-3, hi=3):
    entries = st.lists(st.integers(lo, hi), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2)

    def build(v):
        M = [[Fraction(0)] * n for _ in range(n)]
        it = iter(v)
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = Fraction(next(it))
        return M

    return entries.map(build).filter(lambda M: la.det(M) != 0)


def as_sympy(M):
    return sympy.Matrix(len(M), len(M), lambda i, j: oracle.to_sympy(M[i][j]))


@settings(max_examples=20)
@given(sym_matrix(3))
def test_ricci_matches_oracle_sl2(g):
    ours = CurvatureEngine(sl2(), g).ricci_matrix()
    assert as_sympy(ours) == oracle.ricci(sl2().c, g)


@settings(max_examples=4)
@given(sym_matrix(6, -2, 2))
def test_ricci_matches_oracle_sum(g):
    ours = CurvatureEngine(S6, g).ricci_matrix()
    assert as_sympy(ours) == oracle.ricci(S6.c, g)


def test_g2_ricci_matches_oracle():
    g = g2_metric()
    ours = CurvatureEngine(S6, g).ricci_matrix()
    diff = (as_sympy(ours) - oracle.ricci(S6.c, g)).applyfunc(sympy.simplify)
    assert diff == sympy.zeros(6, 6)


def test_killing_metric_einstein():
    g = killing_metric()
    e = CurvatureEngine(S6, g)
    assert e.is_einstein(Fraction(-2))
    assert la.det(g) == 1
    assert signature_index(g) == (2, 4, 0)


def test_g1_g2_einstein():
    assert verify_einstein(g1_metric(), Fraction(-2))
    assert verify_einstein(g2_metric(), LAM_G2)
    assert not verify_einstein(g2_metric(), Fraction(-2))


def test_nabla_riemann_separates():
    assert CurvatureEngine(S6, killing_metric()).nabla_riemann.is_zero()
    assert CurvatureEngine(S6, g1_metric()).nabla_riemann.is_zero()
    assert not CurvatureEngine(S6, g2_metric()).nabla_riemann.is_zero()


def test_operation_api_chain():
    g = g1_metric()
    om = connection_coefficients(S6, g)
    R = riemann_tensor(S6, om)
    assert la.sub(ricci(S6, g), la.scale(g, Fraction(-2))) == la.zeros(6)
    assert cov_deriv_riemann(S6, g, om, R) is not None


@settings(max_examples=10)
@given(sym_matrix(3))
def test_riemann_symmetries(g):
    e = CurvatureEngine(sl2(), g)
    # R(X,Y) = -R(Y,X) in the antisymmetric pair of slots
    vals = e.riemann_values()
    pairs = [(1, 2), (2, 3), (1, 3)]
    anti = [p for p in pairs if all(
        vals[tuple(idx)] == -vals[tuple(_swap(idx, *p))] for idx in vals)]
    assert anti, "curvature has no antisymmetric slot pair"
    ric = e.ricci_matrix()
    assert la.is_symmetric(ric)


def _swap(idx, a, b):
    idx = list(idx)
    idx[a], idx[b] = idx[b], idx[a]
    return idx


def test_degenerate_metric_rejected():
    g = [[Fraction(1), Fraction(1), 0], [Fraction(1), Fraction(1), 0], [0, 0, Fraction(1)]]
    with pytest.raises(DegenerateMetric):
        CurvatureEngine(sl2(), [[Fraction(x) for x in r] for r in g])


@pytest.mark.parametrize("c", [Fraction(2), Fraction(1, 3), Fraction(5, 7)])
@pytest.mark.parametrize("name", ["B", "g1", "g2"])
def test_scaling_law(c, name):
    g, lam = {"B": (killing_metric(), Fraction(-2)), "g1": (g1_metric(), Fraction(-2)),
              "g2": (g2_metric(), LAM_G2)}[name]
    assert verify_einstein(la.scale(g, c), lam / c)
    assert not verify_einstein(la.scale(g, c), lam * c * c) or c == 1


def test_negation_law():
    rec = make_record("B", g1_metric(), Fraction(-2))
    neg = negate_metric(rec)
    assert neg.metric == la.scale(g1_metric(), -1)
    assert neg.lam == 2 and neg.index == 6 - rec.index
    assert verify_einstein(neg.metric, neg.lam)


@settings(max_examples=10)
@given(sym_matrix(3), st.sampled_from([
    [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
    [[Fraction(5, 3), Fraction(4, 3), 0], [Fraction(4, 3), Fraction(5, 3), 0], [0, 0, 1]],
    [[1, 0, 0], [0, 0, -1], [0, 1, 0]],
]))
def test_curvature_natural_under_automorphisms(g, M):
    M = [[Fraction(x) for x in r] for r in M]
    L = sl2()
    e = CurvatureEngine(L, g)
    pulled = pullback_symmetric(g, M)
    e2 = CurvatureEngine(L, pulled)
    assert e2.ricci_matrix() == pullback_symmetric(e.ricci_matrix(), M)
    assert tensors_equal(pullback_curvature(e.riemann_values(), M), e2.riemann_values())


def test_isometry_witness_maps_curvature():
    A = ISOMETRY_WITNESS
    assert pullback_symmetric(killing_metric(), A) == g1_metric()
    RB = CurvatureEngine(S6, killing_metric()).riemann_values()
    R1 = CurvatureEngine(S6, g1_metric()).riemann_values()
    R2 = CurvatureEngine(S6, g2_metric()).riemann_values()
    assert tensors_equal(pullback_curvature(RB, A), R1)
    assert not tensors_equal(pullback_curvature(RB, A), R2)


def test_polynomial_metric_ansatz():
    from curvlie.poly import Polynomial, VariableTable

    T = VariableTable(["l", "t"])
    t = Polynomial.var("t", T)
    g = [[t * -1, 0, 0], [0, t, 0], [0, 0, t]]
    g = [[x if isinstance(x, Polynomial) else Polynomial.constant(x, T) for x in r] for r in g]
    e = CurvatureEngine(sl2(), g)
    ric = e.ricci_matrix()
    for v in (1, 2, 5):
        num = [[r.evaluate({"t": v}) for r in row] for row in ric]
        fixed = CurvatureEngine(sl2(), [[Fraction(-v), 0, 0], [0, Fraction(v), 0], [0, 0, Fraction(v)]])
        assert [[QSqrt3.coerce(x) for x in row] for row in fixed.ricci_matrix()] == num


def test_metric_ansatz_parses_strings():
    m = MetricAnsatz([["-x1", "0", "0"], ["0", "x1", "0"], ["0", "0", "x1"]], sl2(), ["x1"])
    assert m.evaluate({"x1": 1}).matrix == [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]
