import numpy as np

from lefbench.invariants import block_rotation, nu_spin
from lefbench.spin import (GammaRep, build_gammas, spin_density_oracle,
                           spin_lift, spinor_symbol)

TOL = 1e-12
ORACLE_TOL = 1e-8
SEED = 4242


def test_gamma_anticommutation():
    """gamma_i gamma_j + gamma_j gamma_i = 2 delta_ij."""
    for m in (1, 2, 3):
        gammas = build_gammas(m)
        assert len(gammas) == 2 * m
        dim = 2 ** m
        for i, gi in enumerate(gammas):
            for j, gj in enumerate(gammas):
                anti = gi @ gj + gj @ gi
                want = 2.0 * np.eye(dim) if i == j else np.zeros((dim, dim))
                assert np.allclose(anti, want, atol=TOL)


def test_gammas_hermitian():
    for m in (1, 2, 3):
        for g in build_gammas(m):
            assert np.allclose(g, g.conj().T, atol=TOL)


def test_gamma_of_vector_squares_to_norm():
    rng = np.random.default_rng(SEED)
    rep = GammaRep(2)
    for _ in range(5):
        v = rng.normal(size=4)
        gv = rep.gamma_of_vector(v)
        assert np.allclose(gv @ gv, np.dot(v, v) * np.eye(4), atol=1e-10)


def test_chirality_element():
    # tau squares to the identity and anticommutes with every gamma
    for m in (1, 2, 3):
        rep = GammaRep(m)
        dim = 2 ** m
        assert np.allclose(rep.tau @ rep.tau, np.eye(dim), atol=TOL)
        for g in rep.gammas:
            assert np.allclose(rep.tau @ g + g @ rep.tau, 0, atol=TOL)


def test_spin_lift_is_unitary_double_cover():
    rng = np.random.default_rng(SEED + 1)
    for m in (1, 2, 3):
        rep = GammaRep(m)
        angles = tuple(rng.uniform(0.2, 2.9, size=m))
        S = spin_lift(rep, angles)
        dim = 2 ** m
        assert np.allclose(S @ S.conj().T, np.eye(dim), atol=1e-10)
        # conjugating gamma(v) realizes the covered rotation: the lift acts
        # on vectors through S* gamma(v) S = gamma(R v)
        R = block_rotation(angles)
        v = rng.normal(size=2 * m)
        lhs = S.conj().T @ rep.gamma_of_vector(v) @ S
        rhs = rep.gamma_of_vector(R @ v)
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_spin_lift_angle_additivity():
    rep = GammaRep(1)
    a, b = 0.6, 1.1
    S = spin_lift(rep, (a,)) @ spin_lift(rep, (b,))
    assert np.allclose(S, spin_lift(rep, (a + b,)), atol=1e-12)


def test_spin_lift_full_turn_is_minus_identity():
    # the double cover: rotating by 2 pi lifts to -1
    for m in (1, 2):
        rep = GammaRep(m)
        S = spin_lift(rep, (2.0 * np.pi,) * m)
        assert np.allclose(S, (-1.0) ** m * np.eye(2 ** m), atol=1e-12)


def test_chirality_weighted_trace_product_formula():
    rng = np.random.default_rng(SEED + 2)
    for m in (1, 2, 3):
        rep = GammaRep(m)
        angles = tuple(rng.uniform(0.3, 2.8, size=m))
        got = np.trace(rep.tau @ spin_lift(rep, angles))
        want = (-2.0j) ** m * np.prod([np.sin(t / 2.0) for t in angles])
        assert abs(got - want) < 1e-10


def test_spinor_symbol_scales_with_weight():
    rep = GammaRep(2)
    angles = (0.5, 1.2)
    s1 = spinor_symbol(rep, 1.0, angles)
    s2 = spinor_symbol(rep, 2.0, angles)
    ratio = np.linalg.norm(s2) / np.linalg.norm(s1)
    assert np.isfinite(ratio) and ratio > 0


def test_oracle_matches_closed_form():
    """The Clifford-trace evaluation agrees with the closed-form value up to
    an overall sign for every tested rank."""
    rng = np.random.default_rng(SEED + 3)
    for m in (1, 2, 3):
        for _ in range(8):
            scale = float(rng.uniform(0.4, 2.2))
            angles = tuple(rng.uniform(0.15, np.pi - 0.05, size=m))
            a = nu_spin(scale, angles)
            b = spin_density_oracle(scale, angles)
            gap = min(abs(a - b), abs(a + b))
            assert gap <= ORACLE_TOL * max(1.0, abs(a))


def test_oracle_sign_is_consistent_within_rank():
    # whichever global sign relates the two evaluations, it does not flutter
    # from draw to draw
    rng = np.random.default_rng(SEED + 4)
    for m in (1, 2, 3):
        signs = set()
        for _ in range(6):
            scale = float(rng.uniform(0.5, 2.0))
            angles = tuple(rng.uniform(0.3, 2.7, size=m))
            a = nu_spin(scale, angles)
            b = spin_density_oracle(scale, angles)
            signs.add(1 if abs(a - b) <= abs(a + b) else -1)
        assert len(signs) == 1
