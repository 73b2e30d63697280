import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as spi

from treeenergy import comparator as cmp
from treeenergy.quadrature import QuadratureConfig
from treeenergy.trees import build_Ta, build_Tb

X_GRID = np.logspace(-3, 3, 400)


def lapack_margin(delta, t):
    e = lambda tr: np.abs(np.linalg.eigvalsh(tr.adjacency_matrix())).sum()
    return float(e(build_Ta(delta, t)) - e(build_Tb(delta, t)))


# ---------------------------------------------------------------------------
# exact identities
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("delta,t", [(3, 3), (3, 4), (7, 12), (10, 40), (5, 89)])
def test_family_identity(delta, t):
    assert cmp.family_identity_check(delta, t)


def test_family_identity_mutations():
    q = cmp.CoefficientQuadruple.for_delta(3)
    assert not cmp.family_identity_check(3, 3, q.replace(A1=(2,) + q.A1[1:]))
    assert not cmp.family_identity_check(3, 6, q.replace(B2=q.B2[:-1] + (q.B2[-1] + 1,)))
    assert not cmp.family_identity_check(4, 6, cmp.CoefficientQuadruple.for_delta(5))


@pytest.mark.parametrize("delta,t", [(3, 5), (5, 89), (10, 3), (2, 3), (2, 11)])
def test_difference_identity(delta, t):
    assert cmp.difference_identity_check(delta, t)


def test_identity_guards():
    with pytest.raises(ValueError):
        cmp.family_identity_check(2, 5)
    with pytest.raises(ValueError):
        cmp.difference_identity_check(1, 5)
    with pytest.raises(ValueError):
        cmp.energy_difference(3, 2)


def test_quadruple_shape():
    for d in range(3, 101):
        q = cmp.CoefficientQuadruple.for_delta(d)
        assert q.A2 == q.B2
        assert all(c >= 0 for p in (q.A1, q.A2, q.B1, q.B2) for c in p)
        assert all(cmp.expanded_form_checks(d).values())
    q = cmp.CoefficientQuadruple.for_delta(3)
    # A1(x=1) = 2 * 4 * 8
    assert q.evaluate("A1", 1.0) == 64.0


# ---------------------------------------------------------------------------
# energy difference and verdicts
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("delta,t", [(3, 3), (3, 17), (4, 4), (4, 6), (5, 87), (5, 89),
                                     (5, 91), (5, 93), (6, 7), (6, 9), (7, 3), (10, 60)])
def test_margin_matches_lapack(delta, t):
    v = cmp.energy_difference(delta, t)
    assert abs(v.margin - lapack_margin(delta, t)) < 1e-10
    assert v.decisive and v.winner == cmp.expected_winner(delta, t)


def test_margin_independent_of_split_point():
    a = cmp.energy_difference(5, 89, QuadratureConfig(1e-13, split_point=1.0)).margin
    b = cmp.energy_difference(5, 89, QuadratureConfig(1e-13, split_point=7.0)).margin
    assert abs(a - b) < 1e-12


def test_boundary_cells_at_tight_tolerance():
    tight = QuadratureConfig(1e-15)
    signs = {t: cmp.energy_difference(5, t, tight).margin for t in (87, 89, 91, 93)}
    assert signs[87] > 0 and signs[89] > 0 and signs[91] < 0 and signs[93] < 0
    # frozen from an independent scipy evaluation of the same integral
    assert signs[89] == pytest.approx(8.5998e-6, rel=1e-4)
    assert signs[91] == pytest.approx(-1.43462e-5, rel=1e-4)


@pytest.mark.parametrize("delta,t,want", [(7, 3, "Tb"), (6, 7, "Ta"), (6, 9, "Tb"), (4, 6, "Ta"),
                                          (4, 4, "Tb"), (3, 20, "Ta"), (8, 3, "Tb")])
def test_maximal_tree_examples(delta, t, want):
    v = cmp.maximal_tree(delta, t)
    assert v.winner == want
    for method in ("eigen", "coulson"):
        assert v.secondary[method]["resolved"]
        assert (v.secondary[method]["margin"] > 0) == (want == "Ta")


def test_cross_check_disagreement_raises(monkeypatch):
    monkeypatch.setattr(cmp, "_full_margins", lambda d, t, cfg: {"eigen": (1.0, 1e-12)})
    with pytest.raises(cmp.CrossCheckError, match="eigen"):
        cmp.maximal_tree(7, 3)


def test_indecisive_after_escalation(monkeypatch):
    monkeypatch.setattr(cmp, "DECISIVE_FACTOR", 1e30)
    with pytest.raises(cmp.IndecisiveVerdictError) as info:
        cmp.energy_difference(5, 89)
    assert not info.value.verdict.decisive
    rows = cmp.verdict_sweep([(5, 89)], cross_check=False)
    assert rows[0].decisive is False


def test_verdict_serialisation():
    v = cmp.maximal_tree(5, 89)
    d = v.to_dict()
    assert json.loads(json.dumps(d))["winner"] == "Ta"
    row = v.csv_row()
    assert len(row) == len(cmp.VERDICT_CSV_COLUMNS)
    assert row[:3] == ["5", "89", "Ta"] and row[-1] == "true"
    assert cmp.Verdict(**{k: d[k] for k in cmp.VERDICT_CSV_COLUMNS}) == v


def test_sweep_is_sorted_and_parallel_matches():
    pairs = [(6, 9), (3, 4), (6, 3), (3, 3)]
    serial = cmp.verdict_sweep(pairs, cross_check=False)
    assert [(v.delta, v.t) for v in serial] == sorted(pairs)
    par = cmp.verdict_sweep(pairs, cross_check=False, workers=2)
    assert [v.csv_row() for v in par] == [v.csv_row() for v in serial]


@pytest.mark.parametrize("delta", range(3, 11))
def test_sign_structure_and_uniform_bound(delta):
    for t in (3, 4, 9, 40):
        assert cmp.sign_structure_holds(delta, t, X_GRID)
        assert cmp.uniform_bound_holds(delta, t, X_GRID)


# ---------------------------------------------------------------------------
# bound integrals
# ---------------------------------------------------------------------------

def scipy_table1(delta):
    q = cmp.CoefficientQuadruple.for_delta(delta)
    P = lambda c, y: sum(a * y**k for k, a in enumerate(c))
    d2 = delta - 2

    def tail(x):
        y = x * x
        return d2 * y * y * (y - d2) / (P(q.B1, y) + P(q.B2, y) / (1 + y))

    def head(x):
        y = x * x
        return d2 * y * y * (d2 - y) / (P(q.B1, y) + P(q.B2, y))

    c = math.sqrt(d2)
    a, _ = spi.quad(tail, c, np.inf, epsabs=1e-13, limit=200)
    b, _ = spi.quad(head, 0, c, epsabs=1e-13, limit=200)
    return a - b


@pytest.mark.parametrize("delta,frozen", [(8, -0.0037741), (9, -0.0241789), (20, -0.1806286),
                                          (23, -0.2079234), (67, -0.3879834)])
def test_table1_entry(delta, frozen):
    cert = cmp.table1_entry(delta)
    assert cert.integral_value == pytest.approx(frozen, abs=1e-7)
    assert abs(cert.integral_value - scipy_table1(delta)) < 1e-10
    assert cert.integral_value == pytest.approx(cert.parts[0] - cert.parts[1], abs=1e-15)
    assert abs(cert.integral_value - cmp.table1_reference()[delta]) <= 5e-5


def test_table1_reference_fixture():
    ref = cmp.table1_reference()
    assert sorted(ref) == list(range(8, 68))
    assert all(v < 0 for v in ref.values())
    assert ref[8] == -0.00377 and ref[67] == -0.38798


def test_analytic_bounds():
    up, _ = cmp.analytic_bounds(3)
    assert up == pytest.approx(2 / (9 * math.pi), rel=1e-15)
    for d in range(65, 101):
        up, lo = cmp.analytic_bounds(d)
        assert up - lo < 0
    up, lo = cmp.analytic_bounds(64)
    assert up - lo >= 0
    up, lo = cmp.analytic_bounds(8)
    assert up - lo >= 0


def test_delta3_bound_against_printed_polynomials():
    num_tail = lambda x: x**4 * (x**2 - 1) / (x**10 + 18 * x**8 + 41 * x**6 + 33 * x**4 + 10 * x**2 + 1)
    num_head = lambda x: x**4 * (1 - x**2) / (7 * x**8 + 34 * x**6 + 32 * x**4 + 10 * x**2 + 1)
    ref = spi.quad(num_tail, 1, np.inf, epsabs=1e-13)[0] - spi.quad(num_head, 0, 1, epsabs=1e-13)[0]
    pb = next(p for p in cmp.PROOF_BOUNDS if p.delta == 3)
    assert abs(cmp.bounded_integral(3, pb.pieces, pb.form, pb.pair).value - ref) < 1e-11


@pytest.mark.parametrize("pb", cmp.PROOF_BOUNDS, ids=lambda p: f"d{p.delta}-{p.case}")
def test_proof_bounds(pb):
    value, ok = cmp.check_proof_bound(pb)
    assert ok, value


def test_proof_bound_matches_actual_margins():
    # the lower bound for delta=3 must sit below every actual margin
    pb = next(p for p in cmp.PROOF_BOUNDS if p.delta == 3)
    v, _ = cmp.check_proof_bound(pb)
    for t in range(4, 30):
        assert cmp.energy_difference(3, t).margin > 2 / math.pi * v
    # delta = 7 upper bounds, both parities
    for pb in (p for p in cmp.PROOF_BOUNDS if p.delta == 7):
        v, _ = cmp.check_proof_bound(pb)
        par = 0 if pb.case.startswith("even") else 1
        for t in range(4 + par, 40, 2):
            assert cmp.energy_difference(7, t).margin < 2 / math.pi * v


# ---------------------------------------------------------------------------
# thresholds and the log inequality
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("delta,parity,t_min,printed", [(4, "even", 15, 23), (5, "even", 10, 13),
                                                        (5, "odd", 2339, 4671), (6, "odd", 27, 48)])
def test_parity_threshold(delta, parity, t_min, printed):
    d = cmp.parity_threshold_details(delta, parity)
    assert cmp.parity_threshold(delta, parity) == t_min
    assert d.printed_bound == printed
    assert 2 * t_min - 6 > d.log_threshold >= 2 * (t_min - 1) - 6


def test_parity_threshold_unsupported():
    with pytest.raises(ValueError):
        cmp.parity_threshold(7, "odd")
    with pytest.raises(ValueError):
        cmp.parity_threshold(5, "both")


def test_ratio_condition_flips_at_threshold():
    xs = np.linspace(math.sqrt(3), 390, 400)
    assert cmp.ratio_condition_holds(5, "odd", 2339, xs).all()
    assert not cmp.ratio_condition_holds(5, "odd", 2337, [390.0])[0]


@pytest.mark.parametrize("X", [0.0, 1.0, -0.5, 1e-300, -1 + 1e-15, 1e300])
def test_log_inequality_examples(X):
    assert cmp.log_inequality_check(X)


@given(st.floats(min_value=-1.0, max_value=1e12, exclude_min=True, allow_nan=False))
def test_log_inequality_property(X):
    assert cmp.log_inequality_check(X)


def test_log_inequality_domain():
    for X in (-1.0, -2.0, float("nan")):
        with pytest.raises(ValueError):
            cmp.log_inequality_check(X)
