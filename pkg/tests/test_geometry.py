import numpy as np
import pytest

from lefbench.errors import DegenerateProjection, NotConformal
from lefbench.exterior import ComplexFrame
from lefbench.geometry import (PlaneWithStructure, coisotropic_check,
                               conformal_factor, rotation_angles,
                               self_dual_middle_check, transversality_check)
from lefbench.invariants import block_rotation, rotation2

TOL = 1e-9
SEED = 90210


def graph_plane(M):
    """Plane spanned by (v, Mv) inside the doubled space."""
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    rows = np.hstack([np.eye(k), M.T])
    return PlaneWithStructure(rows, factor_dim=k)


def test_conformal_factor_of_similarity_graphs():
    """The transfer map of the graph of lambda * rotation stretches every
    direction by the same factor lambda^2."""
    rng = np.random.default_rng(SEED)
    for _ in range(8):
        lam = float(rng.uniform(0.4, 2.5))
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        plane = graph_plane(lam * rotation2(theta))
        got = conformal_factor(plane)
        assert abs(got - lam * lam) < TOL * max(1.0, lam * lam)


def test_conformal_factor_known_value():
    plane = graph_plane(2.0 * rotation2(0.3))
    assert abs(conformal_factor(plane) - 4.0) < 1e-12


def test_non_similarity_graph_is_rejected():
    plane = graph_plane(np.diag([1.0, 2.0]))
    with pytest.raises(NotConformal):
        conformal_factor(plane)


def test_degenerate_first_projection_is_rejected():
    # a plane containing a direction with no first-factor component
    rows = np.array([[1.0, 0.0, 1.0, 0.0],
                     [0.0, 0.0, 0.0, 1.0]])
    plane = PlaneWithStructure(rows, factor_dim=2)
    with pytest.raises(DegenerateProjection):
        conformal_factor(plane)


def test_self_dual_iff_conformal_for_graphs():
    """In the middle dimension of the doubled plane the star-eigenvalue
    condition singles out exactly the similarity graphs."""
    rng = np.random.default_rng(SEED + 1)
    for _ in range(6):
        lam = float(rng.uniform(0.5, 2.0))
        theta = float(rng.uniform(0.1, 3.0))
        good = graph_plane(lam * rotation2(theta))
        assert self_dual_middle_check(good)
    bad = graph_plane(np.diag([1.0, 2.0]))
    assert not self_dual_middle_check(bad)
    sheared = graph_plane(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not self_dual_middle_check(sheared)


def test_transversality_check_graphs_pass_diagonal_fails():
    assert transversality_check(graph_plane(np.zeros((2, 2))))
    assert transversality_check(graph_plane(3.0 * np.eye(2)))
    assert not transversality_check(graph_plane(np.eye(2)))


def test_coisotropic_axis_subspaces():
    omega = ComplexFrame(2).structure_matrix()
    e = np.eye(4)
    three = PlaneWithStructure(e[:3], omega=omega)
    assert coisotropic_check(three)
    lagr = PlaneWithStructure(e[[0, 2]], omega=omega)
    assert coisotropic_check(lagr)
    line = PlaneWithStructure(e[[0]], omega=omega)
    assert not coisotropic_check(line)
    full = PlaneWithStructure(e, omega=omega)
    assert coisotropic_check(full)


def test_coisotropic_preserved_by_symplectic_conjugation():
    rng = np.random.default_rng(SEED + 2)
    omega = ComplexFrame(2).structure_matrix()
    e = np.eye(4)
    # a symplectic shear: preserves omega, so it preserves the property
    S = np.eye(4)
    S[0, 1] = 1.3
    S[3, 2] = -1.3
    assert np.allclose(S.T @ omega @ S, omega)
    rows = e[:3] @ S.T
    assert coisotropic_check(PlaneWithStructure(rows, omega=omega))
    # a generic rotation does not preserve the skew pairing
    Q = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    rows_q = e[[0, 2]] @ Q.T
    plane_q = PlaneWithStructure(rows_q, omega=omega)
    # may or may not be coisotropic, but the check must be deterministic
    assert coisotropic_check(plane_q) == coisotropic_check(plane_q)


def test_rotation_angles_recovers_block_angles():
    rng = np.random.default_rng(SEED + 3)
    for m in (1, 2, 3):
        angles = np.sort(rng.uniform(0.2, np.pi - 0.2, size=m))
        R = block_rotation(angles)
        got = np.sort(rotation_angles(R))
        assert np.allclose(got, angles, atol=1e-9)


def test_rotation_angles_requires_orthogonal_input():
    with pytest.raises(ValueError):
        rotation_angles(np.diag([1.0, 2.0]))


def test_factor_blocks_split():
    rows = np.hstack([np.eye(2), 2.0 * np.eye(2)])
    plane = PlaneWithStructure(rows, factor_dim=2)
    P1, P2 = plane.factor_blocks()
    assert np.allclose(P1, np.eye(2))
    assert np.allclose(P2, 2.0 * np.eye(2))
