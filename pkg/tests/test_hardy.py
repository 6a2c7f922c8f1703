"""Torus grids, analytic subspaces, and the interpolation-ratio experiment."""

import math

import numpy as np
import pytest

from regnorm.errors import DomainError, StructuralError
from regnorm.extension import extension_min_norm
from regnorm.hardy import (AnalyticSubspace, TorusGrid, build_analytic_subspace,
                           hardy_experiment, with_images)
from regnorm.norms import vector_p_norm


def test_torus_grid_nodes_and_weight():
    grid = TorusGrid(4)
    assert np.allclose(grid.nodes, [0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert grid.weight == 0.25
    assert grid.weight * grid.points == 1.0
    with pytest.raises(DomainError):
        TorusGrid(0)


def test_analytic_subspace_characters():
    space = AnalyticSubspace(TorusGrid(8), 2)
    assert space.basis.shape == (3, 8)
    assert np.allclose(space.basis[0], np.ones(8))
    assert np.allclose(space.basis[2], np.exp(2j * TorusGrid(8).nodes))


def test_analytic_subspace_aliasing_rejected():
    with pytest.raises(DomainError):
        AnalyticSubspace(TorusGrid(4), 4)
    with pytest.raises(DomainError):
        AnalyticSubspace(TorusGrid(4), -1)


def test_build_constant_subspace():
    tpl = build_analytic_subspace(4, 0, 2)
    assert tpl.basis.shape == (1, 4)
    assert np.allclose(tpl.basis[0], np.full(4, 0.25 ** 0.5))
    assert math.isclose(vector_p_norm(tpl.basis[0], 2), 1.0, rel_tol=1e-12)


def test_build_subspace_rows_are_unit_and_orthogonal():
    tpl = build_analytic_subspace(8, 1, 2)
    v0, v1 = tpl.basis
    assert math.isclose(vector_p_norm(v0, 2), 1.0, rel_tol=1e-12)
    assert math.isclose(vector_p_norm(v1, 2), 1.0, rel_tol=1e-12)
    assert abs(np.vdot(v0, v1)) <= 1e-12


@pytest.mark.parametrize("p", [1, 3, "inf"])
def test_build_subspace_norm_matches_measure(p):
    # the folded weight makes the coordinate p-norm equal the normalized
    # L_p norm of the character, which is 1 at every exponent
    tpl = build_analytic_subspace(6, 2, p)
    for row in tpl.basis:
        assert math.isclose(vector_p_norm(row, p), 1.0, rel_tol=1e-12)


def test_with_images_replaces_target():
    tpl = build_analytic_subspace(6, 1, 2)
    images = np.ones((2, 3), dtype=complex)
    prob = with_images(tpl, images)
    assert prob.target_m == 3
    assert np.array_equal(prob.images, images)
    with pytest.raises(StructuralError):
        with_images(tpl, np.ones((3, 3), dtype=complex))


def test_experiment_rejects_endpoints_and_bad_kinds():
    with pytest.raises(DomainError):
        hardy_experiment(8, 3, 2, 1, 1, 0)
    with pytest.raises(DomainError):
        hardy_experiment(8, 3, 2, "inf", 1, 0)
    with pytest.raises(DomainError):
        hardy_experiment(8, 3, 2, 2, 1, 0, trial_kind="weird")
    with pytest.raises(DomainError):
        hardy_experiment(8, 3, 2, 2, 0, 0)


def test_identity_restriction_extends_by_identity():
    result = hardy_experiment(6, 2, 1, 2, 1, 0, trial_kind="identity")
    row = result["rows"][0]
    for key in ("r_p", "r_inf", "r_1"):
        assert abs(row[key] - 1.0) <= 1e-6
    assert abs(row["ratio"] - 1.0) <= 1e-6
    assert result["parameters"]["m"] == 6


def test_positive_diagonal_trials_have_ratio_one():
    result = hardy_experiment(6, 2, 1, 3, 2, 1, trial_kind="diagonal")
    for row in result["rows"]:
        assert abs(row["ratio"] - 1.0) <= 1e-6


def test_random_trial_table_shape_and_summary():
    result = hardy_experiment(8, 3, 2, 2, 3, 0)
    rows = result["rows"]
    assert [row["trial"] for row in rows] == [0, 1, 2]
    ratios = sorted(row["ratio"] for row in rows)
    assert result["summary"]["min_ratio"] == ratios[0]
    assert result["summary"]["max_ratio"] == ratios[-1]
    assert result["summary"]["median_ratio"] == ratios[1]
    for row in rows:
        expect = row["r_inf"] ** 0.5 * row["r_1"] ** 0.5
        assert math.isclose(row["interpolated_bound"], expect, rel_tol=1e-12)
        assert math.isclose(row["ratio"], row["r_p"] / expect, rel_tol=1e-12)


def test_grid_refinement_stability():
    """Doubling the grid moves the extension norm of a fixed
    smooth-coefficient operator by well under 5%."""
    rng = np.random.default_rng(5)
    images = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    images /= np.linalg.norm(images, axis=1, keepdims=True)
    values = []
    for N in (8, 16):
        tpl = build_analytic_subspace(N, 2, 2)
        value, _ = extension_min_norm(with_images(tpl, images), budget=600)
        values.append(value)
    assert abs(values[1] - values[0]) <= 0.05 * values[0]
