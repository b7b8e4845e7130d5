"""Acceptance criteria 1-10, each run at its stated tolerance and time limit.

Every check prints one ``criterion N: PASS|FAIL`` line (collected into the
terminal summary as well). Run directly with ``python tests/test_acceptance.py``.
"""

import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from curvlie import linalg as la  # noqa: E402
from curvlie.catalog import (  # noqa: E402
    SAMPLE_VALUES,
    catalog_families,
    check_isometry_candidate,
    check_so21,
    family,
    family_annihilates_system,
    g1_metric,
    g2_metric,
    orbit_reduction_witness,
)
from curvlie.curvature import CurvatureEngine, scale_metric  # noqa: E402
from curvlie.einstein import (  # noqa: E402
    TABLE_CASES,
    invariant_tensor_space,
    make_case,
    make_record,
    metric_index,
    negate_metric,
    parse_case,
    solve_case,
    verify_einstein,
)
from curvlie.exact import QSqrt3, simplify_scalar  # noqa: E402
from curvlie.groebner import Budget  # noqa: E402
from curvlie.liealg import sl2_sum  # noqa: E402

import templates  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

F = Fraction
SQRT3 = QSqrt3(0, 1)
INV_SQRT3 = QSqrt3(0, F(1, 3))
KILLING_OVER_8 = la.diag([F(x) for x in (-1, 1, 1, -1, 1, 1)])

# the nearly pseudo-Kaehler metric, transcribed entry by entry
NEARLY_KAEHLER = [[INV_SQRT3 * x for x in row] for row in (
    (-2, 0, 0, 1, 0, 0), (0, 2, 0, 0, 1, 0), (0, 0, 2, 0, 0, 1),
    (1, 0, 0, -2, 0, 0), (0, 1, 0, 0, 2, 0), (0, 0, 1, 0, 0, 2),
)]
G1 = [[F(x) for x in row] for row in (
    (-1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1),
    (1, 0, 0, -2, 0, 0), (0, 1, 0, 0, 2, 0), (0, 0, 1, 0, 0, 2),
)]
ISOMETRY_A = [[F(x) for x in row] for row in (
    (1, 0, 0, -1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1),
    (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1),
)]
LAMBDA_NK = simplify_scalar(F(-10, 3) * INV_SQRT3)


def t1(c):
    c = F(c)
    return [[1 + c * c / 2, c * c / 2, -c], [-c * c / 2, 1 - c * c / 2, c], [-c, -c, F(1)]]


def t2(c):
    c = F(c)
    h = 3 * c * c / 2
    return [[simplify_scalar(x) for x in row] for row in
            [[1 + h, h, -SQRT3 * c], [-h, 1 - h, SQRT3 * c], [-SQRT3 * c, -SQRT3 * c, F(1)]]]


def orbit_block_1(c):
    c = F(c)
    h = c * c / 2
    return [[1 + h, h, -c], [h, h - 1, -c], [c, c, F(-1)]]


def orbit_block_2(c):
    c = F(c)
    return [[simplify_scalar(x) for x in row] for row in [
        [SQRT3 * (2 + 3 * c * c) / 6, SQRT3 * c * c / 2, -c],
        [SQRT3 * c * c / 2, SQRT3 * (-2 + 3 * c * c) / 6, -c],
        [c, c, -INV_SQRT3],
    ]]


def mat_eq(A, B):
    return all(simplify_scalar(a - b) == 0 for ra, rb in zip(A, B) for a, b in zip(ra, rb))


@contextmanager
def criterion(n, limit=None):
    """Time a block and record one pass/fail line for criterion ``n``."""
    notes = []
    start = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        dt = time.perf_counter() - start
        if limit is not None and dt >= limit:
            ok = False
            notes.append(f"exceeded {limit} s")
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({dt:.2f} s){' ' + '; '.join(notes) if notes else ''}"
        print(line)
        ACCEPTANCE_LINES.append(line)
    if limit is not None:
        assert dt < limit, f"criterion {n} took {dt:.1f} s (limit {limit} s)"


def test_criterion_1_killing_form():
    with criterion(1, limit=1.0):
        g = KILLING_OVER_8
        assert verify_einstein(g, -2)
        assert la.det(g) == 1
        assert metric_index(g) == 2


def test_criterion_2_g1_g2():
    with criterion(2, limit=5.0):
        assert mat_eq(g1_metric(), G1)
        assert mat_eq(g2_metric(), NEARLY_KAEHLER)
        ric1 = CurvatureEngine(sl2_sum(), G1).ricci_matrix()
        assert mat_eq(ric1, la.scale(G1, F(-2)))
        ric2 = CurvatureEngine(sl2_sum(), NEARLY_KAEHLER).ricci_matrix()
        assert mat_eq(ric2, la.scale(NEARLY_KAEHLER, LAMBDA_NK))


def test_criterion_3_family_samples():
    with criterion(3, limit=60.0) as notes:
        count = 0
        for fam in catalog_families():
            for params, branch in fam.sample_grid(SAMPLE_VALUES):
                rec = fam.instantiate(params, branch)
                assert rec.verified, (fam.name, params, branch)
                assert rec.det == 1 and rec.index == 2, (fam.name, params, branch)
                assert rec.lam == fam.lam
                count += 1
        notes.append(f"{count} instances")


def test_criterion_4_nabla_riemann():
    with criterion(4, limit=60.0):
        assert CurvatureEngine(sl2_sum(), KILLING_OVER_8).nabla_riemann.is_zero()
        assert CurvatureEngine(sl2_sum(), G1).nabla_riemann.is_zero()
        assert not CurvatureEngine(sl2_sum(), NEARLY_KAEHLER).nabla_riemann.is_zero()


def test_criterion_5_isometry_witness():
    with criterion(5):
        assert check_isometry_candidate(KILLING_OVER_8, G1, ISOMETRY_A)


def test_criterion_6_orbit_reduction():
    with criterion(6) as notes:
        for c in (0, 1, -2):
            assert check_so21(t1(c)) and check_so21(t2(c))
        witnesses_ok = True
        for fam in catalog_families():
            if not fam.symbols:
                continue
            for params, branch in fam.sample_grid(SAMPLE_VALUES):
                w = orbit_reduction_witness(fam, params, branch)
                target = g1_metric() if w.target == "g1" else g2_metric()
                pulled = w.automorphism.pullback(fam.metric(params, branch))
                witnesses_ok &= w.valid_automorphism and mat_eq(pulled, target)
        notes.append(f"orbit witnesses {'ok' if witnesses_ok else 'FAILED'}")
        assert witnesses_ok
        products_ok = True
        for c in (0, 1, -2):
            p1 = la.matmul(t1(c), orbit_block_1(c))
            p2 = la.matmul(t2(c), orbit_block_2(c))
            ok1 = mat_eq(p1, la.identity(3))
            ok2 = mat_eq(p2, la.scale(la.identity(3), INV_SQRT3))
            if not (ok1 and ok2):
                products_ok = False
                notes.append(f"T1*M=I {ok1}, T2*M=I/sqrt3 {ok2} at c1={c}")
        assert products_ok, "T_i * M is not a multiple of the identity"


def test_criterion_7_invariant_spaces():
    import random

    expected = {"(E1,2E1)": 5, "(E1,E1)": 7, "(E1,0)": 11, "(E1,2E3)": 5, "(E1,N)": 5,
                "(E3,2E3)": 5, "(E3,E3)": 7, "(E3,0)": 11, "(E3,N)": 5, "(N,0)": 11, "(N,N)": 7}
    names = ["x1", "y1", "z1", "x2", "y2", "z2", "a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"]
    rng = random.Random(7)
    with criterion(7) as notes:
        assert set(TABLE_CASES) == set(expected)
        for label in TABLE_CASES:
            space = invariant_tensor_space(parse_case(label).element)
            assert space.dimension == expected[label], label
            build = templates.TEMPLATES[label]
            for _ in range(20):
                p = {n: F(rng.randint(-50, 50), rng.randint(1, 9)) for n in names}
                if label in templates.NEEDS_Q:
                    q = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
                    g = build(p, templates.q_block(rng.randint(1, 5), *q))
                else:
                    g = build(p)
                assert space.contains([[F(x) for x in row] for row in g]), label
        notes.append("11 dimensions match, 220 template instances contained")


def _random_ideal(rng):
    from curvlie.poly import Polynomial, VariableTable

    table = VariableTable(["x", "y", "z"])
    polys = []
    for _ in range(rng.randint(2, 3)):
        terms = {}
        for _ in range(rng.randint(2, 4)):
            e = (rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3))
            if sum(e) <= 3:
                terms[e] = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        if terms:
            polys.append(Polynomial.from_exponents(terms, table))
    return polys or [Polynomial.from_exponents({(1, 0, 0): F(1)}, table)]


def test_criterion_8_groebner_soundness():
    import random

    from curvlie.groebner import buchberger, certificate
    from curvlie.poly import VariableTable, parse_polynomial

    with criterion(8) as notes:
        rng = random.Random(20240601)
        ideals = [_random_ideal(rng) for _ in range(5)]
        xy = VariableTable(["x", "y"])
        fixed = [parse_polynomial("x^2 - 1", xy), parse_polynomial("x*y - 1", xy)]
        B = buchberger(fixed, "lex")
        assert B.to_strings() == ["x - y", "y^2 - 1"]
        ideals.append(fixed)
        for gens in ideals:
            for order in ("lex", "grevlex"):
                runs = [buchberger(gens, order, jobs=j) for j in (1, 2)]
                certs = [certificate(b, gens) for b in runs]
                assert all(c["valid"] for c in certs)
                assert all(c["interreduced"] for c in certs)
                assert runs[0].to_strings() == runs[1].to_strings()
                assert certs[0]["sha256"] == certs[1]["sha256"]
        notes.append(f"{len(ideals)} ideals x 2 orders, jobs 1 and 2 agree")


@pytest.mark.slow
def test_criterion_9_end_to_end():
    with criterion(9, limit=600.0 + 3600.0) as notes:
        start = time.perf_counter()
        res = solve_case(make_case("(E1,rE1)", 2), 1)
        assert time.perf_counter() - start < 600
        assert res.status == "solved" and not res.residuals
        assert len(res.solutions) == 1
        s = res.solutions[0]
        assert s.metric == KILLING_OVER_8 and s.lam == -2
        notes.append("(E1,2E1) -> B/8")

        full = solve_case(parse_case("(E1,E1)"), 1, budget=Budget(max_seconds=3600))
        if full.status == "solved":
            got = {tuple(map(tuple, r.metric)) for r in full.solutions}
            assert all(r.verified for r in full.solutions)
            notes.append(f"(E1,E1) solved, {len(got)} solutions")
        else:
            notes.append(f"(E1,E1) Groebner: {full.residuals[0] if full.residuals else full.status}; fallback")
            for name in ("(E1,E1) family-1", "(E1,E1) family-2"):
                assert family_annihilates_system(family(name)), name
            notes.append("every (E1,E1) family annihilates the 22-polynomial system")


def test_criterion_10_negation_and_scaling():
    with criterion(10):
        for g, lam in ((KILLING_OVER_8, F(-2)), (G1, F(-2)), (NEARLY_KAEHLER, LAMBDA_NK)):
            rec = make_record("test", g, lam)
            neg = negate_metric(rec)
            assert mat_eq(neg.metric, la.scale(g, F(-1)))
            assert neg.lam == -lam and neg.index == 6 - rec.index
            assert verify_einstein(neg.metric, neg.lam)
            for c in (F(2), F(1, 3)):
                assert verify_einstein(scale_metric(g, c), lam / c) == verify_einstein(g, lam)
                assert verify_einstein(scale_metric(g, c), lam / c)
        # a non-Einstein metric stays non-Einstein under scaling
        h = la.diag([F(x) for x in (-1, 2, 1, -1, 1, 3)])
        for c in (F(2), F(1, 3)):
            assert verify_einstein(scale_metric(h, c), F(-2) / c) == verify_einstein(h, F(-2)) is False


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
