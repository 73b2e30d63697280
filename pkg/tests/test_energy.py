import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as spi

from treeenergy.energy import EIGEN_CAP, energy_coulson, energy_eigen, path_energy_closed, tree_energy
from treeenergy.polynomials import MatchingPolynomial, matching_polynomial
from treeenergy.quadrature import QuadratureConfig
from treeenergy.trees import Tree, all_trees, build_path, build_star, build_Ta, build_Tb

from conftest import random_tree


def eigvalsh_energy(tree):
    return float(np.abs(np.linalg.eigvalsh(tree.adjacency_matrix())).sum())


def scipy_coulson(tree):
    c = matching_polynomial(tree).coeffs

    def f(x):
        return math.log(sum(v * x ** (2 * k) for k, v in enumerate(c))) / (x * x)

    head, _ = spi.quad(f, 0, 1, epsabs=1e-13, limit=200)
    tail, _ = spi.quad(f, 1, np.inf, epsabs=1e-13, limit=200)
    return 2 / math.pi * (head + tail)


def test_known_energies():
    assert energy_eigen(build_path(2)).value == pytest.approx(2.0, abs=1e-14)
    assert energy_coulson(build_path(2)).value == pytest.approx(2.0, abs=1e-12)
    assert energy_coulson(build_path(3)).value == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert energy_eigen(build_star(5)).value == pytest.approx(4.0, abs=1e-14)
    assert energy_coulson(build_star(5)).value == pytest.approx(4.0, abs=1e-12)
    assert energy_coulson(Tree(1)).value == 0.0
    assert energy_eigen(Tree(1)).value == 0.0


@pytest.mark.parametrize("n", range(2, 11))
def test_eigen_matches_lapack(n):
    for tr in all_trees(n):
        assert abs(energy_eigen(tr).value - eigvalsh_energy(tr)) < 1e-12


@pytest.mark.parametrize("tree", [build_Ta(3, 3), build_Tb(4, 6), build_star(9), build_path(17)])
def test_coulson_matches_scipy(tree):
    assert abs(energy_coulson(tree).value - scipy_coulson(tree)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_routes_agree_random(n, seed):
    tr = random_tree(np.random.default_rng(seed), n)
    a, b = energy_coulson(tr), energy_eigen(tr)
    assert abs(a.value - b.value) < 1e-9
    assert abs(b.value - eigvalsh_energy(tr)) < 1e-11


def test_large_family_trees():
    for tr in (build_Ta(5, 120), build_Tb(5, 120), build_Tb(10, 200)):
        assert abs(energy_coulson(tr).value - energy_eigen(tr).value) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 10, 57, 200])
def test_path_closed_form(n):
    ref = path_energy_closed(n)
    assert abs(energy_eigen(build_path(n)).value - ref) < 1e-10
    assert abs(energy_coulson(build_path(n)).value - ref) < 1e-10


def test_result_fields_and_dispatch():
    r = tree_energy(build_Ta(3, 4), "coulson")
    assert r.method == "coulson" and r.evaluations > 0 and r.abs_error_estimate < 1e-11
    assert set(r.to_dict()) == {"value", "abs_error_estimate", "method", "evaluations"}
    assert tree_energy(build_Ta(3, 4)).method == "eigen"
    with pytest.raises(ValueError):
        tree_energy(build_Ta(3, 4), "spectral")


def test_guards():
    with pytest.raises(ValueError):
        energy_coulson(MatchingPolynomial.zero())
    big = build_path(EIGEN_CAP + 1)
    with pytest.raises(ValueError):
        energy_eigen(big)
    with pytest.raises(ValueError):
        path_energy_closed(0)


def test_split_point_does_not_matter():
    tr = build_Tb(6, 11)
    ref = energy_eigen(tr).value
    for s in (0.25, 1.0, 3.0):
        assert abs(energy_coulson(tr, QuadratureConfig(1e-12, split_point=s)).value - ref) < 1e-10
