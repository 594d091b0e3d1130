from fractions import Fraction

import numpy as np
import pytest

from lefbench.errors import NonTransverse, NotCoisotropic, NotLagrangian
from lefbench.lattice import (compensated_sum, determinant,
                              dual_vectors_in_ball, row_kernel_basis,
                              saturate_rows, smith_normal_form,
                              solve_congruence, unimodular_inverse)
from lefbench.torus import (AffineSubtorus, FlatTorus, TorusMap,
                            average_identity_check, coisotropic_pairing_check,
                            gb_identity_check, heat_supertrace,
                            holo_lefschetz_check, lefschetz_cohomological,
                            signature_pairing_check, slag_fixed_term,
                            slag_geometric_term, slag_identity_check,
                            slag_spectral_term)

SEED = 3177
EXACT = 1e-12
CLOSE = 1e-9


# -- integer lattice utilities ---------------------------------------------

def test_smith_normal_form_factorization():
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        m, n = rng.integers(1, 5, size=2)
        M = rng.integers(-6, 7, size=(m, n))
        U, D, V = smith_normal_form(M)
        assert np.array_equal(np.asarray(U @ M @ V, dtype=object), np.asarray(D, dtype=object))
        assert abs(determinant(U)) == 1
        assert abs(determinant(V)) == 1
        diag = [D[i][i] for i in range(min(m, n))]
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if a != 0 and b != 0:
                assert b % a == 0


def test_determinant_matches_numpy_and_handles_empty():
    rng = np.random.default_rng(SEED + 1)
    for n in (1, 2, 3, 4, 5):
        M = rng.integers(-9, 10, size=(n, n))
        assert determinant(M) == round(float(np.linalg.det(M.astype(float))))
    assert determinant(np.zeros((0, 0), dtype=int)) == 1


def test_unimodular_inverse_round_trip():
    U = np.array([[1, 2], [1, 3]])
    Ui = unimodular_inverse(U)
    got = np.asarray(U, dtype=object) @ np.asarray(Ui, dtype=object)
    assert np.array_equal(got, np.eye(2, dtype=object))
    with pytest.raises(ValueError):
        unimodular_inverse(np.array([[2, 0], [0, 1]]))


def test_row_kernel_and_saturation():
    M = np.array([[2, 4], [1, 2]])
    K = row_kernel_basis(M)
    assert K.shape[0] == 1
    assert all(int(x) == 0 for x in (np.asarray(K, dtype=object) @ np.asarray(M, dtype=object)).ravel())
    sat = saturate_rows(np.array([[2, 4]]))
    assert sat.shape == (1, 2)
    assert abs(int(sat[0][0])) == 1 and abs(int(sat[0][1])) == 2


def test_solve_congruence_counts_and_membership():
    # x - A x = 0 mod 1 for the doubling map on the circle: one fixed point
    count, pts = solve_congruence(np.array([[-1]]), [Fraction(0)])
    assert count == 1 and pts == [(Fraction(0),)]
    # three fixed points of the doubling-plus-one on Z^1: |det(I - A)| with A=4
    count, pts = solve_congruence(np.array([[-3]]), [Fraction(0)])
    assert count == 3
    assert set(pts) == {(Fraction(0),), (Fraction(1, 3),), (Fraction(2, 3),)}
    with pytest.raises(ValueError):
        solve_congruence(np.array([[0]]), [Fraction(0)])


def test_dual_vectors_in_ball_deterministic_and_symmetric():
    gram_inv = np.eye(2)
    shells = dual_vectors_in_ball(gram_inv, 1.5)
    ks = [k for _, k in shells]
    assert (0, 0) not in [tuple(k) for k in ks]
    tuples = [tuple(int(x) for x in k) for k in ks]
    for k in tuples:
        assert tuple(-x for x in k) in tuples
    assert shells == dual_vectors_in_ball(gram_inv, 1.5)


def test_compensated_sum_beats_naive_on_adversarial_input():
    vals = [1e16, 1.0, -1e16, 1.0]
    assert complex(compensated_sum(vals)) == 2.0 + 0.0j


# -- flat tori and their endomorphisms -------------------------------------

def test_standard_torus_shape():
    T = FlatTorus.standard(3)
    assert T.volume == 1.0
    assert T.is_standard
    assert np.allclose(T.dual_basis, np.eye(3))


def test_skew_torus_volume_and_dual():
    B = np.array([[2.0, 0.0], [1.0, 1.0]])
    T = FlatTorus(B)
    assert abs(T.volume - 2.0) < EXACT
    assert np.allclose(T.dual_basis @ B.T, np.eye(2))


def test_modes_cached_and_cut_by_radius():
    T = FlatTorus.standard(2)
    qs, ks = T.modes_upto(1.2)
    assert len(qs) == len(ks)
    assert {tuple(k) for k in ks} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    qs2, ks2 = T.modes_upto(1.2)
    assert np.array_equal(ks, ks2)


def test_torus_map_requires_integer_matrix():
    T = FlatTorus.standard(2)
    with pytest.raises(ValueError):
        TorusMap(T, np.array([[0.5, 0.0], [0.0, 1.0]]))


def test_fixed_point_count_is_lefschetz_determinant():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(12):
        n = int(rng.integers(1, 4))
        A = rng.integers(-3, 4, size=(n, n))
        d = determinant(np.eye(n, dtype=int) - A)
        T = FlatTorus.standard(n)
        tmap = TorusMap(T, A)
        if d == 0:
            with pytest.raises(NonTransverse):
                tmap.fixed_points()
            continue
        count, pts = tmap.fixed_points()
        assert count == abs(d)
        assert len(pts) == count
        # each point is genuinely fixed modulo the lattice
        for p in pts:
            x = np.array([float(c) for c in p])
            moved = (A.astype(float) @ x - x) % 1.0
            assert np.allclose(np.minimum(moved, 1.0 - moved), 0.0, atol=1e-9)


def test_lefschetz_cohomological_equals_characteristic_value():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(15):
        n = int(rng.integers(1, 5))
        A = rng.integers(-3, 4, size=(n, n))
        assert lefschetz_cohomological(A) == determinant(np.eye(n, dtype=int) - A)


def test_gb_identity_full_report():
    A = np.array([[2, 1], [1, 1]])
    rep = gb_identity_check(TorusMap(FlatTorus.standard(2), A))
    assert rep["cohomological"] == rep["determinant"] == -1
    assert abs(rep["fixed_point_sum"] - (-1.0)) < EXACT
    for t, v in rep["spectral"].items():
        assert abs(v - (-1.0)) < 1e-6
    assert rep["t_spread"] <= 1e-8


def test_heat_supertrace_exactly_flat_in_time():
    """With a finite fixed-point set only the constant mode survives the
    invariant-mode filter, so the supertrace carries no time dependence."""
    A = np.array([[0, -1], [1, 0]])
    tmap = TorusMap(FlatTorus.standard(2), A)
    vals = [heat_supertrace(tmap, t) for t in (0.01, 0.1, 1.0)]
    assert max(vals) - min(vals) == 0.0
    assert abs(vals[0] - 2.0) < EXACT  # det(I - quarter turn) = 2


def test_heat_supertrace_determinism():
    A = np.array([[2, 1], [1, 1]])
    a = heat_supertrace(TorusMap(FlatTorus.standard(2), A), 0.05)
    b = heat_supertrace(TorusMap(FlatTorus.standard(2), A), 0.05)
    assert a == b


# -- holomorphic torus identity --------------------------------------------

def test_holo_identity_gaussian_unit():
    res = holo_lefschetz_check(np.array([[1j]]))
    assert abs(res["lhs"] - (1 + 1j)) < EXACT
    assert abs(res["rhs"] - (1 + 1j)) < EXACT
    assert res["count"] == 2


def test_holo_identity_random_lattice_preserving():
    rng = np.random.default_rng(SEED + 4)
    done = 0
    while done < 8:
        m = 1 + done % 2
        a = rng.integers(-2, 3, size=(m, m)) + 1j * rng.integers(-2, 3, size=(m, m))
        if abs(np.linalg.det(np.eye(m) - a)) < 0.5:
            continue
        res = holo_lefschetz_check(a)
        assert abs(res["lhs"] - res["rhs"]) < 1e-10 * max(1.0, abs(res["lhs"]))
        done += 1


def test_holo_identity_rejects_non_lattice_matrix():
    with pytest.raises(ValueError):
        holo_lefschetz_check(np.array([[0.5 + 0.5j]]))


# -- middle-degree pairing identity ----------------------------------------

def test_signature_pairing_double_quarter_turn():
    A = np.kron(np.eye(2, dtype=int), np.array([[0, -1], [1, 0]]))
    res = signature_pairing_check(A)
    assert abs(res["lhs"] - (-4.0)) < CLOSE
    assert abs(res["lhs"] - res["rhs"]) < CLOSE
    assert res["count"] == 4


def test_signature_pairing_minus_identity_vanishes():
    res = signature_pairing_check(-np.eye(4, dtype=int))
    assert abs(res["lhs"]) < EXACT
    assert abs(res["rhs"]) < EXACT
    assert res["count"] == 16


def test_signature_pairing_rejects_non_isometry():
    with pytest.raises(ValueError):
        signature_pairing_check(np.diag([1, 1, 1, 2]))
    with pytest.raises(ValueError):
        # orientation-reversing isometry
        signature_pairing_check(np.diag([-1, 1, 1, 1]))


# -- affine subtori ---------------------------------------------------------

def test_affine_subtorus_requires_primitive_directions():
    T = FlatTorus.standard(2)
    with pytest.raises(ValueError):
        AffineSubtorus(T, [[2, 0]], (Fraction(0), Fraction(0)))
    sub = AffineSubtorus(T, [[2, 1]], (Fraction(0), Fraction(0)))
    assert sub.dim == 1


def test_affine_subtorus_covolume():
    T = FlatTorus.standard(2)
    line = AffineSubtorus(T, [[3, 4]], (Fraction(0), Fraction(0)))
    assert abs(line.covolume - 5.0) < EXACT
    point = AffineSubtorus(T, np.zeros((0, 2), dtype=int), (Fraction(1, 2), Fraction(0)))
    assert point.covolume == 1.0


def test_intersect_transverse_lines_point_count():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(T, [[1, 2]], (Fraction(0), Fraction(0)))
    pts = l1.intersect(l2)
    # |det [[1,0],[1,2]]| = 2 intersection points, each zero-dimensional
    assert len(pts) == 2
    for p in pts:
        assert p.dim == 0


def test_intersect_parallel_lines_disjoint_or_equal():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(1, 2)))
    assert l1.intersect(l2) == []
    same = l1.intersect(AffineSubtorus(T, [[1, 0]], (Fraction(1, 3), Fraction(0))))
    assert len(same) == 1
    assert same[0].dim == 1


def test_intersect_three_planes_in_t4():
    T = FlatTorus.standard(4)
    e = np.eye(4, dtype=int)
    v1 = AffineSubtorus(T, e[:3], (Fraction(0),) * 4)
    v2 = AffineSubtorus(T, e[[0, 1, 3]], (Fraction(0),) * 4)
    comps = v1.intersect(v2)
    assert len(comps) == 1
    assert comps[0].dim == 2


# -- special line pair identities ------------------------------------------

def test_slag_terms_reject_full_torus_input():
    T = FlatTorus.standard(2)
    with pytest.raises(NotLagrangian):
        slag_geometric_term(
            AffineSubtorus(T, np.eye(2, dtype=int), (Fraction(0), Fraction(0))),
            AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0))))


def test_slag_transverse_pair_exact():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(T, [[1, 2]], (Fraction(1, 3), Fraction(0)))
    geo = slag_geometric_term(l1, l2)
    fix = slag_fixed_term(l1, l2)
    assert slag_spectral_term(l1, l2, 100) == 0
    assert abs(geo - fix) < 1e-10


def test_slag_parallel_pair_residual_window():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(1, 2)))
    res = slag_identity_check(l1, l2, cutoffs=(50, 100, 200))
    for R in (50, 100, 200):
        gap = abs(res["geometric"] - (res["fixed"] + res["spectral"][R]))
        assert gap <= 2.0 / R
    assert res["decay_exponent"] is not None
    assert res["decay_exponent"] >= 0.9


def test_slag_coincident_pair_raises():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[1, 0]], (Fraction(0), Fraction(0)))
    with pytest.raises(NonTransverse):
        slag_fixed_term(l1, l1)


def test_average_identity_transverse_pairs():
    rng = np.random.default_rng(SEED + 5)
    T = FlatTorus.standard(2)
    dirs = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, -1), (3, 1)]
    done = 0
    for i, d1 in enumerate(dirs):
        for d2 in dirs[i + 1:]:
            if d1[0] * d2[1] - d1[1] * d2[0] == 0:
                continue
            off1 = (Fraction(int(rng.integers(0, 4)), 4), Fraction(int(rng.integers(0, 4)), 4))
            off2 = (Fraction(int(rng.integers(0, 8)), 8), Fraction(int(rng.integers(0, 8)), 8))
            l1 = AffineSubtorus(T, [list(d1)], off1)
            l2 = AffineSubtorus(T, [list(d2)], off2)
            res = average_identity_check(l1, l2)
            assert abs(res["lhs"] - res["rhs"]) < CLOSE * max(1.0, abs(res["lhs"]))
            assert res["count"] == abs(d1[0] * d2[1] - d1[1] * d2[0])
            done += 1
    assert done >= 15


def test_average_identity_parallel_counts_zero():
    T = FlatTorus.standard(2)
    l1 = AffineSubtorus(T, [[2, 1]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(T, [[2, 1]], (Fraction(0), Fraction(1, 3)))
    res = average_identity_check(l1, l2)
    assert res["count"] == 0
    assert res["rhs"] == 0


# -- coisotropic pairing ----------------------------------------------------

def test_coisotropic_pairing_axis_example():
    T = FlatTorus.standard(4)
    e = np.eye(4, dtype=int)
    v1 = AffineSubtorus(T, e[:3], (Fraction(0),) * 4)
    v2 = AffineSubtorus(T, e[[0, 1, 3]], (Fraction(0),) * 4)
    res = coisotropic_pairing_check(v1, v2)
    assert abs(res["lhs"] - res["rhs"]) < CLOSE
    assert res["components"] == 1
    assert res["q"] == 1


def test_coisotropic_pairing_rejects_non_coisotropic_input():
    T = FlatTorus.standard(4)
    e = np.eye(4, dtype=int)
    line = AffineSubtorus(T, e[[0]], (Fraction(0),) * 4)
    other = AffineSubtorus(T, e[:3], (Fraction(0),) * 4)
    with pytest.raises(NotCoisotropic):
        coisotropic_pairing_check(line, other)


def test_coisotropic_pairing_respects_translation_of_one_factor():
    T = FlatTorus.standard(4)
    e = np.eye(4, dtype=int)
    v1 = AffineSubtorus(T, e[:3], (Fraction(0),) * 4)
    base = coisotropic_pairing_check(
        v1, AffineSubtorus(T, e[[0, 1, 3]], (Fraction(0),) * 4))
    moved = coisotropic_pairing_check(
        v1, AffineSubtorus(T, e[[0, 1, 3]],
                           (Fraction(1, 4), Fraction(0), Fraction(0), Fraction(0))))
    # translating along a shared direction moves the components but not the
    # value of either side
    assert abs(base["lhs"] - moved["lhs"]) < CLOSE
    assert abs(moved["lhs"] - moved["rhs"]) < CLOSE
