import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeenergy.polynomials import (
    MatchingPolynomial,
    closed_form_path,
    eval_mplus,
    log_closed_form_path,
    matching_polynomial,
    matching_polynomial_edge_recursion,
    matching_polynomial_vertex_recursion,
    padd,
    path_lambdas,
    path_mplus,
    path_ratio,
    path_ratio_bounds_exact,
    path_ratio_bounds_sweep,
    pmul,
    ppow,
    pshift,
    psub,
)
from treeenergy.trees import Tree, all_trees, build_path, build_star, build_Ta, build_Tb

from conftest import brute_matchings, random_tree


def test_poly_helpers():
    assert padd((1, 2), (0, 0, 3)) == (1, 2, 3)
    assert psub((1, 2), (1, 2)) == ()
    assert pmul((1, 1), (1, 1)) == (1, 2, 1)
    assert ppow((1, 1), 0) == (1,)
    assert ppow((1, 1), 4) == (1, 4, 6, 4, 1)
    assert pshift((1, 2)) == (0, 1, 2)


def test_small_known_values():
    assert matching_polynomial(build_path(4)).coeffs == (1, 3, 1)
    assert matching_polynomial(build_star(5)).coeffs == (1, 4, 0)
    assert matching_polynomial(Tree(1)).coeffs == (1,)
    assert matching_polynomial(build_Ta(3, 3)).coeffs == (1, 10, 34, 48, 29, 6)


@pytest.mark.parametrize("n", range(1, 10))
def test_matches_brute_force_on_all_trees(n):
    for tr in all_trees(n):
        assert list(matching_polynomial(tr).coeffs) == brute_matchings(tr)


@pytest.mark.parametrize("n", range(1, 10))
def test_three_routes_agree(n):
    for tr in all_trees(n):
        ref = matching_polynomial(tr)
        assert matching_polynomial_vertex_recursion(tr) == ref
        assert matching_polynomial_edge_recursion(tr) == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_three_routes_agree_random(n, seed):
    tr = random_tree(np.random.default_rng(seed), n)
    ref = matching_polynomial(tr)
    assert matching_polynomial_vertex_recursion(tr) == ref
    assert matching_polynomial_edge_recursion(tr) == ref
    if n <= 12:
        assert list(ref.coeffs) == brute_matchings(tr)


def test_disjoint_union_is_product():
    a, b = matching_polynomial(build_path(5)), matching_polynomial(build_star(4))
    # (1 + 4y + 3y^2)(1 + 3y), padded to order 9
    assert (a * b).n == 9
    assert (a * b).coeffs == (1, 7, 15, 9, 0)


def test_edge_deletion_identity():
    # m+(P_5) = m+(P_4) + x^2 m+(P_3) via the operator forms
    p5 = path_mplus(5)
    assert path_mplus(4) + path_mplus(3).shift_x2() == p5


def test_matching_polynomial_validation():
    with pytest.raises(ValueError):
        MatchingPolynomial((2, 1), 3)
    with pytest.raises(ValueError):
        MatchingPolynomial((1, -1), 3)
    with pytest.raises(ValueError):
        MatchingPolynomial((1, 2, 3), 3)
    with pytest.raises(ValueError):
        MatchingPolynomial((1,), -2)
    z = MatchingPolynomial.zero()
    assert z.is_zero and z.coeffs == ()


def test_json_roundtrip():
    p = matching_polynomial(build_Tb(7, 30))
    assert MatchingPolynomial.from_json(p.to_json()) == p
    assert MatchingPolynomial.from_json(MatchingPolynomial.zero().to_json()).is_zero


def test_path_mplus_recurrences():
    p = {t: path_mplus(t).coeffs for t in range(-1, 40)}
    assert p[-1] == () and p[0] == (1,) and p[1] == (1,)
    for t in range(1, 40):
        assert p[t] == padd(p[t - 1], pshift(p[t - 2]))
    for t in range(2, 40):
        assert p[t] == padd(pmul((1, 1), p[t - 2]), pshift(p[t - 3]))
    for t in range(1, 30):
        assert path_mplus(t) == matching_polynomial(build_path(t))


def test_eval_mplus_exact():
    mant, e = eval_mplus(path_mplus(4), 1.0)
    assert mant * 2**e == 5.0 and 0.5 <= mant < 1
    assert eval_mplus(MatchingPolynomial.zero(), 3.0) == (0.0, 0)
    # huge value with no overflow
    mant, e = eval_mplus(path_mplus(3000), 10.0)
    ref = sum(c * 100**k for k, c in enumerate(path_mplus(3000).coeffs))  # exact integer
    assert abs(math.log2(mant) + e - math.log2(ref)) < 1e-12


def test_lambdas():
    for x in (1e-8, 1e-3, 0.7, 5.0, 1e6):
        l1, l2 = path_lambdas(x)
        assert abs(l1 + l2 - 1.0) <= 4 * np.finfo(float).eps * l1
        assert math.isclose(l1 * l2, -x * x, rel_tol=1e-14)


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3])
def test_closed_form_matches_exact(x):
    for t in range(0, 150):
        mant, e = eval_mplus(path_mplus(t), x)
        exact_log = math.log(mant) + e * math.log(2.0)
        assert abs(log_closed_form_path(t, x) - exact_log) <= 1e-12 * max(1.0, abs(exact_log))


def test_closed_form_small_cases():
    assert closed_form_path(-1, 0.3) == 0.0
    assert math.isclose(closed_form_path(5, 1.0), 8.0, rel_tol=1e-14)
    with pytest.raises(ValueError):
        log_closed_form_path(3, 0.0)


def test_path_ratio():
    assert path_ratio(5, 1.0).rho == pytest.approx(0.5, rel=1e-15)
    for t in range(4, 30):
        for x in (0.2, 1.0, 3.0):
            a = eval_mplus(path_mplus(t - 4), x)
            b = eval_mplus(path_mplus(t - 3), x)
            assert path_ratio(t, x).rho == pytest.approx(a[0] / b[0] * 2.0 ** (a[1] - b[1]), rel=1e-13)
    with pytest.raises(ValueError):
        path_ratio(3, 1.0)


@pytest.mark.parametrize("x", [1e-3, 0.5, 2.0, 1e3])
def test_parity_bounds_exact_sweep(x):
    assert all(lo and hi for _, (lo, hi) in path_ratio_bounds_sweep(200, x))


def test_parity_bounds_against_float_where_resolvable():
    # for small t the gap to 1/lambda_1 (about r**(t-3)) is far above rounding
    for x in (0.3, 1.0, 4.0):
        s = math.sqrt(1 + 4 * x * x)
        for t in range(4, 11):
            rho = path_ratio(t, x).rho
            if t % 2 == 0:
                assert 2 / (1 + s) < rho <= 1
            else:
                assert 1 / (1 + x * x) <= rho < 2 / (1 + s)
            assert path_ratio_bounds_exact(t, x) == (True, True)
