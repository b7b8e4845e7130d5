from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from curvlie import linalg as la
from curvlie.einstein import (
    FAMILIES,
    TABLE_CASES,
    CaseError,
    assemble_einstein_system,
    case_ansatz,
    einstein_system_for_case,
    generator_catalog,
    invariant_tensor_space,
    is_invariant,
    make_case,
    negate_metric,
    parse_case,
    q_block_ansatz,
    scalar_from_json,
    scalar_to_json,
    solve_case,
)
from curvlie.exact import QSqrt3, SqrtExt
from curvlie.liealg import E1, E3, N

import templates
from strategies import rationals

# counted from the free parameters of each table row, Q_i counted as a full
# symmetric 3x3 block
EXPECTED_DIMENSIONS = {
    "(E1,2E1)": 5, "(E1,E1)": 7, "(E1,0)": 11, "(E1,2E3)": 5, "(E1,N)": 5,
    "(E3,2E3)": 5, "(E3,E3)": 7, "(E3,0)": 11, "(E3,N)": 5, "(N,0)": 11, "(N,N)": 7,
}

PARAMS = ["x1", "y1", "z1", "x2", "y2", "z2", "a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"]


def test_case_parsing():
    c = parse_case("(E1,2E1)")
    assert c.family == "(E1,rE1)" and c.r == 2
    assert c.element == tuple(E1) + tuple(2 * x for x in E1)
    assert parse_case("(E1,rE1)", 3).label == "(E1,3E1)"
    assert parse_case("(N,N)").element == tuple(N) + tuple(N)
    assert parse_case("(E3,0)").label == "(E3,0)"
    assert make_case("(E1,rE3)", "1/2").label == "(E1,1/2E3)"
    with pytest.raises(CaseError):
        make_case("(E1,rE1)")
    with pytest.raises(CaseError):
        parse_case("(E2,E1)")
    with pytest.raises(CaseError):
        parse_case("(N,2N)")


def test_generator_catalog_covers_families():
    labels = [c.label for c in generator_catalog([2])]
    for fam in FAMILIES:
        if "r" not in fam:
            assert fam in labels
    for lbl in ("(E1,0)", "(E1,E1)", "(E1,2E1)", "(E3,E3)", "(E3,0)", "(E1,2E3)"):
        assert lbl in labels


@pytest.mark.parametrize("label", TABLE_CASES)
def test_invariant_dimensions(label):
    space = invariant_tensor_space(parse_case(label).element)
    assert space.dimension == EXPECTED_DIMENSIONS[label]


@pytest.mark.parametrize("label", TABLE_CASES)
def test_basis_is_invariant(label):
    case = parse_case(label)
    space = invariant_tensor_space(case.element)
    for B in space.basis:
        assert is_invariant(case.element, B)
        assert la.is_symmetric(B)


@pytest.mark.parametrize("label", TABLE_CASES)
@settings(max_examples=15)
@given(values=st.lists(rationals, min_size=len(PARAMS) + 3, max_size=len(PARAMS) + 3),
       qi=st.integers(1, 5))
def test_table_templates_lie_in_space(label, values, qi):
    p = dict(zip(PARAMS, values))
    build = templates.TEMPLATES[label]
    if label in templates.NEEDS_Q:
        Q = templates.q_block(qi, *values[-3:])
        g = build(p, Q)
    else:
        g = build(p)
    g = [[Fraction(x) for x in row] for row in g]
    case = parse_case(label)
    assert invariant_tensor_space(case.element).contains(g)


@pytest.mark.parametrize("label", TABLE_CASES)
@settings(max_examples=10)
@given(coeffs=st.lists(rationals, min_size=11, max_size=11))
def test_random_combinations_are_invariant(label, coeffs):
    case = parse_case(label)
    space = invariant_tensor_space(case.element)
    g = la.zeros(6)
    for c, B in zip(coeffs, space.basis):
        g = la.add(g, la.scale(B, c))
    assert is_invariant(case.element, g)


def test_template_names_follow_table():
    space = invariant_tensor_space(parse_case("(E1,E1)").element)
    assert space.free == ["x1", "y1", "x2", "y2", "a1", "b2", "c2"]
    T = space.template
    assert str(T[1][4]) == "b2" and str(T[2][4]) == "-c2" and str(T[2][5]) == "b2"


def test_three_dimensional_space():
    space = invariant_tensor_space(E1)
    assert space.dimension == 2
    assert invariant_tensor_space(N).dimension == 2
    assert invariant_tensor_space((0, 0, 0)).dimension == 6


def test_system_has_22_polynomials():
    system = einstein_system_for_case("(E1,2E1)", 1)
    assert len(system) == 22
    assert len(system.numerators) == 21


def test_q5_adds_relation():
    case = parse_case("(E1,0)").with_q(5)
    template, table, relations = case_ansatz(case)
    assert "s" in table
    assert [str(r) for r in relations] == ["2*s^2 - 1"]
    Q = q_block_ansatz(5, table)
    assert str(Q[0][2]) == "s"


def test_q_block_needs_zero_second_component():
    with pytest.raises(CaseError):
        parse_case("(N,N)").with_q(1)


def test_killing_metric_annihilates_system():
    system = einstein_system_for_case("(E3,N)", 1)
    template = system.ansatz
    values = {"l": -2}
    # read the template variables off B/8
    for i, row in enumerate(template):
        for j, p in enumerate(row):
            if len(p.terms) == 1 and p.degree() == 1 and p.variables() and list(p.terms.values())[0] == 1:
                (name,) = p.variables()
                values[name] = [-1, 1, 1, -1, 1, 1][i] if i == j else 0
    for p in system.generators():
        assert p.evaluate(values) == 0


def test_solve_e1_2e1_gives_killing_metric():
    res = solve_case(make_case("(E1,rE1)", 2), 1)
    assert res.status == "solved" and not res.residuals
    assert len(res.solutions) == 1
    s = res.solutions[0]
    assert s.metric == la.diag([Fraction(x) for x in (-1, 1, 1, -1, 1, 1)])
    assert s.lam == -2 and s.det == 1 and s.index == 2 and s.verified


@pytest.mark.parametrize("label", ["(E1,2E3)", "(E3,2E3)", "(E3,N)", "(E1,3E1)"])
def test_generic_cases_only_killing_metric(label):
    res = solve_case(parse_case(label), 1)
    assert res.status == "solved"
    assert [s.lam for s in res.solutions] == [-2]
    res_neg = solve_case(parse_case(label), -1)
    assert res_neg.status == "solved" and res_neg.solutions == []


def test_normalisation_can_be_disabled():
    res = solve_case(parse_case("(E1,2E1)"), 1, normalize=False)
    assert sorted(s.lam for s in res.solutions) == [-2, 2]


def test_negate_record():
    res = solve_case(parse_case("(E1,2E1)"), 1)
    s = res.solutions[0]
    n = negate_metric(s)
    assert n.lam == 2 and n.index == 4 and n.det == 1
    assert n.metric == la.scale(s.metric, -1)


def test_budget_exhaustion_is_partial():
    from curvlie.groebner import Budget

    res = solve_case(parse_case("(N,N)"), 1, budget=Budget(max_pairs=5))
    assert res.status == "partial" and res.residuals


@pytest.mark.parametrize("x", [Fraction(3, 4), QSqrt3(1, Fraction(-2, 3)), SqrtExt(1, 2, 2)])
def test_scalar_json_roundtrip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_scalar_json_rejects_float():
    with pytest.raises(ValueError):
        scalar_from_json(0.5)
