"""Named check suite with seeded inputs and uniform reporting.

Each check evaluates one family of identities both ways and returns
VerificationReport rows; the registry maps the stable check names used by
the command line.  All randomness flows through numpy Generators seeded
from the single run seed, so a fixed (seed, cutoff) pair reproduces every
row bit-for-bit.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np

from .errors import ConfigError, InfeasibleSpec, NotConformal
from .exterior import (ComplexFrame, ExteriorElement, hodge_star,
                       masks_of_degree, pullback)
from .geometry import (PlaneWithStructure, coisotropic_check, conformal_factor,
                       self_dual_middle_check)
from .invariants import (nu_gb, nu_gb_density, nu_rr, nu_rr_density, nu_sig,
                         nu_sig_density, nu_spin, gb_index_form,
                         sig_index_form, rotation2)
from .lattice import determinant
from .parametrix import localization_limit, spectral_kernel, torus_kernel_compare
from .reports import VerificationReport
from .spin import spin_density_oracle
from .torus import (AffineSubtorus, FlatTorus, TorusMap, average_identity_check,
                    coisotropic_pairing_check, gb_identity_check,
                    heat_supertrace, holo_lefschetz_check, slag_fixed_term,
                    slag_geometric_term, slag_identity_check,
                    slag_spectral_term)

DEFAULT_SEED = 0
DEFAULT_CUTOFF = 200


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed) ^ np.uint64(0x9E3779B97F4A7C15 * (salt + 1) % 2 ** 64))


# -- seeded input generators ------------------------------------------------

def random_integer_map(rng: np.random.Generator, n: int, bound: int = 3,
                       max_count: int = 400) -> np.ndarray:
    """Integer matrix with nonzero, bounded det(I - A)."""
    for _ in range(500):
        A = rng.integers(-bound, bound + 1, size=(n, n))
        d = determinant(np.eye(n, dtype=np.int64) - A)
        if d != 0 and abs(d) <= max_count:
            return A.astype(np.int64)
    raise InfeasibleSpec("no integer matrix with the requested fixed-point budget")


def random_gaussian_integer_matrix(rng: np.random.Generator, m: int,
                                   bound: int = 2, max_count: int = 200) -> np.ndarray:
    """Gaussian-integer matrix with nonzero det_C(I - a) and a bounded
    fixed-point count."""
    for _ in range(500):
        a = rng.integers(-bound, bound + 1, size=(m, m)) \
            + 1j * rng.integers(-bound, bound + 1, size=(m, m))
        d = complex(np.linalg.det(np.eye(m) - a))
        if abs(d) > 1e-9 and abs(d) ** 2 <= max_count:
            return a.astype(complex)
    raise InfeasibleSpec("no Gaussian-integer matrix with the requested budget")


def signed_permutations(n: int):
    """All integer orthogonal matrices of the standard lattice: signed
    permutation matrices, enumerated in a fixed order."""
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            M = np.zeros((n, n), dtype=np.int64)
            for i, (p, s) in enumerate(zip(perm, signs)):
                M[p, i] = s
            out.append(M)
    return out


def random_orthogonal_integer(rng: np.random.Generator, n: int,
                              special: bool = True,
                              transverse: bool = True) -> np.ndarray:
    """Seeded draw from the signed permutations, optionally restricted to
    determinant +1 and to maps with isolated fixed points."""
    pool = []
    for M in signed_permutations(n):
        if special and determinant(M) != 1:
            continue
        if transverse and determinant(np.eye(n, dtype=np.int64) - M) == 0:
            continue
        pool.append(M)
    if not pool:
        raise InfeasibleSpec("no signed permutation in dimension %d matches the "
                             "requested constraints" % n)
    return pool[int(rng.integers(0, len(pool)))]


def random_conformal_input(rng: np.random.Generator, m: int):
    """(scale, angles) with the rotation well separated from 1/scale."""
    for _ in range(500):
        scale = float(rng.uniform(0.4, 2.2))
        angles = rng.uniform(0.15, math.pi - 0.05, size=m)
        ok = all(abs(1.0 - scale * complex(math.cos(t), math.sin(t))) > 0.08
                 for t in angles)
        if ok and abs(scale - 1.0) + min(angles) > 0.1:
            return scale, np.asarray(angles, dtype=float)
    raise InfeasibleSpec("no well-separated conformal datum found")


def random_line(rng: np.random.Generator, torus: FlatTorus,
                bound: int = 3, denominator: int = 8) -> AffineSubtorus:
    """Closed geodesic with a primitive integer direction and a rational
    offset."""
    for _ in range(200):
        d = rng.integers(-bound, bound + 1, size=2)
        if not d.any():
            continue
        g = math.gcd(int(abs(d[0])), int(abs(d[1])))
        d = (d // g).astype(np.int64)
        off = tuple(Fraction(int(rng.integers(0, denominator)), denominator)
                    for _ in range(2))
        return AffineSubtorus(torus, d.reshape(1, 2), off)
    raise InfeasibleSpec("no primitive direction drawn")


def random_symplectic_integer(rng: np.random.Generator, m: int,
                              steps: int = 4) -> np.ndarray:
    """Integer symplectic matrix for the interleaved-coordinate form, built
    from shear generators in the block basis."""
    n = 2 * m
    Mb = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        S = rng.integers(-1, 2, size=(m, m))
        S = S + S.T
        G = np.eye(n, dtype=np.int64)
        if rng.integers(0, 2):
            G[:m, m:] = S
        else:
            G[m:, :m] = S
        Mb = Mb @ G
    E = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        E[2 * i, i] = 1
        E[2 * i + 1, m + i] = 1
    return E @ Mb @ E.T


def seeded_random_inputs(kind: str, seed: int, **params):
    """Uniform entry point for the seeded generators used by the checks."""
    rng = _rng(seed, hash(kind) % 1009)
    if kind == "integer_map":
        return random_integer_map(rng, int(params.get("n", 3)),
                                  int(params.get("bound", 3)))
    if kind == "gaussian_integer":
        return random_gaussian_integer_matrix(rng, int(params.get("m", 1)))
    if kind == "orthogonal_integer":
        return random_orthogonal_integer(rng, int(params.get("n", 4)))
    if kind == "conformal":
        return random_conformal_input(rng, int(params.get("m", 2)))
    if kind == "complex":
        m = int(params.get("m", 2))
        return (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / math.sqrt(m)
    if kind == "line":
        return random_line(rng, FlatTorus.standard(2))
    if kind == "symplectic":
        return random_symplectic_integer(rng, int(params.get("m", 2)))
    raise InfeasibleSpec("unknown input kind %r" % (kind,))


# -- individual checks ------------------------------------------------------

def check_gb(seed: int, cutoff: int):
    rng = _rng(seed, 1)
    worst = None
    trials = 48
    for i in range(trials):
        n = 1 + i % 6
        for _ in range(200):
            A = rng.normal(size=(n, n))
            if abs(np.linalg.det(np.eye(n) - A)) > 0.05:
                break
        closed = nu_gb(A)
        brute = nu_gb_density(A)
        if worst is None or abs(closed - brute) > worst[0]:
            worst = (abs(closed - brute), closed, brute, n)
    return [VerificationReport("gb/local-density", worst[1], worst[2], 1e-9,
                               {"trials": trials, "dims": "1..6",
                                "worst_dim": worst[3]})]


def check_rr(seed: int, cutoff: int):
    rng = _rng(seed, 2)
    worst = None
    trials = 30
    for i in range(trials):
        m = 1 + i % 3
        for _ in range(200):
            a = (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / math.sqrt(m)
            if abs(np.linalg.det(np.eye(m) - a)) > 0.05:
                break
        closed = nu_rr(a)
        brute = nu_rr_density(a)
        if worst is None or abs(closed - brute) > worst[0]:
            worst = (abs(closed - brute), closed, brute, m)
    return [VerificationReport("rr/local-density", worst[1], worst[2], 1e-9,
                               {"trials": trials, "dims": "1..3",
                                "worst_dim": worst[3]})]


def check_sig(seed: int, cutoff: int):
    rng = _rng(seed, 3)
    worst = None
    trials = 20
    for _ in range(trials):
        scale, angles = random_conformal_input(rng, 2)
        closed = nu_sig(scale, angles)
        brute = nu_sig_density(scale, angles)
        if worst is None or abs(closed - brute) > worst[0]:
            worst = (abs(closed - brute), closed, brute)
    return [VerificationReport("sig/local-density", worst[1], worst[2], 1e-8,
                               {"trials": trials, "m": 2})]


def check_spin(seed: int, cutoff: int):
    rng = _rng(seed, 4)
    worst = None
    trials = 24
    for i in range(trials):
        m = 1 + i % 3
        scale, angles = random_conformal_input(rng, m)
        closed = nu_spin(scale, angles)
        oracle = spin_density_oracle(scale, angles)
        sign = 1.0 if abs(closed - oracle) <= abs(closed + oracle) else -1.0
        d = abs(closed - sign * oracle)
        if worst is None or d > worst[0]:
            worst = (d, closed, sign * oracle, m, sign)
    return [VerificationReport("spin/local-density", worst[1], worst[2], 1e-8,
                               {"trials": trials, "dims": "1..3",
                                "worst_dim": worst[3], "sign": worst[4]})]


def check_torus_lefschetz(seed: int, cutoff: int):
    rng = _rng(seed, 5)
    t_grid = (0.05, 0.1, 0.2)
    worst_exact = None
    worst_spec = None
    worst_spread = 0.0
    trials = 8
    for i in range(trials):
        n = 1 + i % 4
        A = random_integer_map(rng, n)
        tmap = TorusMap(FlatTorus.standard(n), A)
        rep = gb_identity_check(tmap, t_grid)
        gap = abs(rep["cohomological"] - rep["fixed_point_sum"]) \
            + abs(rep["cohomological"] - rep["determinant"])
        if worst_exact is None or gap > worst_exact[0]:
            worst_exact = (gap, rep["cohomological"], rep["fixed_point_sum"])
        for t, v in rep["spectral"].items():
            d = abs(v - rep["determinant"])
            if worst_spec is None or d > worst_spec[0]:
                worst_spec = (d, float(rep["determinant"]), v)
        worst_spread = max(worst_spread, rep["t_spread"])
    return [
        VerificationReport("torus-lefschetz/exact", worst_exact[1],
                           worst_exact[2], 0.0, {"trials": trials}),
        VerificationReport("torus-lefschetz/spectral", worst_spec[1],
                           worst_spec[2], 1e-6, {"t_grid": list(t_grid)}),
        VerificationReport("torus-lefschetz/t-spread", worst_spread, 0.0,
                           1e-8, {"t_grid": list(t_grid)}),
    ]


def check_holo(seed: int, cutoff: int):
    rng = _rng(seed, 6)
    fixed = holo_lefschetz_check(np.array([[1j]]))
    rep0 = VerificationReport("holo/gauss-unit", fixed["lhs"], fixed["rhs"],
                              1e-12, {"matrix": "i", "count": fixed["count"]})
    worst = None
    trials = 10
    for i in range(trials):
        m = 1 + i % 2
        a = random_gaussian_integer_matrix(rng, m)
        res = holo_lefschetz_check(a)
        d = abs(res["lhs"] - res["rhs"])
        if worst is None or d > worst[0]:
            worst = (d, res["lhs"], res["rhs"], m, res["count"])
    rep1 = VerificationReport("holo/random-lattice", worst[1], worst[2], 1e-10,
                              {"trials": trials, "worst_m": worst[3],
                               "count": worst[4]})
    return [rep0, rep1]


def check_slag(seed: int, cutoff: int):
    torus = FlatTorus.standard(2)
    l1 = AffineSubtorus(torus, [[1, 0]], (Fraction(0), Fraction(0)))
    l2 = AffineSubtorus(torus, [[1, 0]], (Fraction(0), Fraction(1, 2)))
    # keep every cutoff even: at the half-period offset used here the
    # windowed lattice sum telescopes to zero at odd cutoffs, which would
    # leave nothing for the decay fit to measure
    cuts = sorted({c + c % 2 for c in (max(10, cutoff // 4),
                                       max(20, cutoff // 2), cutoff)})
    res = slag_identity_check(l1, l2, cutoffs=tuple(cuts))
    R = cutoff
    lhs = res["geometric"]
    rhs = res["fixed"] + res["spectral"][R]
    reports = [VerificationReport("slag/residual", lhs, rhs, 2.0 / R,
                                  {"cutoff": R, "offset": "1/2",
                                   "pair": "parallel"})]
    if res["decay_exponent"] is not None:
        reports.append(VerificationReport("slag/decay", res["decay_exponent"],
                                          1.0, 0.11,
                                          {"cutoffs": sorted(res["residual"])}))
    t1 = AffineSubtorus(torus, [[1, 0]], (Fraction(0), Fraction(0)))
    t2 = AffineSubtorus(torus, [[1, 2]], (Fraction(1, 3), Fraction(0)))
    geo = slag_geometric_term(t1, t2)
    fix = slag_fixed_term(t1, t2) + slag_spectral_term(t1, t2, R)
    reports.append(VerificationReport("slag/transverse", geo, fix, 1e-10,
                                      {"cutoff": R, "pair": "transverse"}))
    return reports


def check_average(seed: int, cutoff: int):
    rng = _rng(seed, 7)
    torus = FlatTorus.standard(2)
    worst = None
    trials = 12
    done = 0
    while done < trials:
        l1 = random_line(rng, torus)
        l2 = random_line(rng, torus)
        d1, d2 = l1.rows[0], l2.rows[0]
        if int(d1[0]) * int(d2[1]) - int(d1[1]) * int(d2[0]) == 0:
            continue
        res = average_identity_check(l1, l2)
        d = abs(res["lhs"] - res["rhs"])
        if worst is None or d > worst[0]:
            worst = (d, res["lhs"], res["rhs"], res["count"])
        done += 1
    par = average_identity_check(
        AffineSubtorus(torus, [[2, 1]], (Fraction(0), Fraction(0))),
        AffineSubtorus(torus, [[2, 1]], (Fraction(0), Fraction(1, 3))))
    return [
        VerificationReport("average/transverse", worst[1], worst[2], 1e-9,
                           {"trials": trials, "worst_count": worst[3]}),
        VerificationReport("average/parallel-count", float(par["count"]), 0.0,
                           0.0, {"pair": "parallel"}),
    ]


def _axis_coisotropic_pair(torus: FlatTorus):
    v1 = AffineSubtorus(torus, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
                        (Fraction(0),) * 4)
    v2 = AffineSubtorus(torus, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                        (Fraction(0), Fraction(0), Fraction(0), Fraction(0)))
    return v1, v2


def check_coisotropic(seed: int, cutoff: int):
    rng = _rng(seed, 8)
    torus = FlatTorus.standard(4)
    v1, v2 = _axis_coisotropic_pair(torus)
    base = coisotropic_pairing_check(v1, v2)
    reports = [VerificationReport("coisotropic/axis", base["lhs"], base["rhs"],
                                  1e-9, {"components": base["components"],
                                         "q": base["q"]})]
    worst = None
    trials = 4
    for _ in range(trials):
        M = random_symplectic_integer(rng, 2, steps=3)
        w1 = AffineSubtorus(torus, v1.rows @ M.T,
                            tuple(sum(Fraction(int(M[i][j])) * v1.offset[j]
                                      for j in range(4)) % 1 for i in range(4)))
        w2 = AffineSubtorus(torus, v2.rows @ M.T,
                            tuple(Fraction(int(rng.integers(0, 4)), 4) for _ in range(4)))
        res = coisotropic_pairing_check(w1, w2)
        d = abs(res["lhs"] - res["rhs"])
        if worst is None or d > worst[0]:
            worst = (d, res["lhs"], res["rhs"], res["components"])
    if worst is not None:
        reports.append(VerificationReport("coisotropic/conjugated", worst[1],
                                          worst[2], 1e-9,
                                          {"trials": trials,
                                           "components": worst[3]}))
    return reports


def check_parametrix(seed: int, cutoff: int):
    torus1 = FlatTorus.standard(1)
    t = 0.01
    trace = torus1.heat_trace(t)
    closed = (4.0 * math.pi * t) ** -0.5
    cmp1 = torus_kernel_compare(torus1, t, samples=8)
    uniform = spectral_kernel(torus1, [0.3], 10.0)
    loc_gb = localization_limit(gb_index_form(1),
                                TorusMap(torus1, [[2]]))
    torus4 = FlatTorus.standard(4)
    A = np.kron(np.eye(2, dtype=np.int64),
                np.array([[0, -1], [1, 0]], dtype=np.int64))
    loc_sig = localization_limit(sig_index_form(4), TorusMap(torus4, A))
    return [
        VerificationReport("parametrix/trace", trace, closed, 1e-8,
                           {"t": t, "torus": "circle"}),
        VerificationReport("parametrix/kernel-match", cmp1["max_abs_diff"],
                           0.0, 1e-10, {"t": t, "samples": 8}),
        VerificationReport("parametrix/long-time-uniform", uniform, 1.0,
                           1e-12, {"t": 10.0}),
        VerificationReport("parametrix/localization-gb",
                           loc_gb["extrapolated"], loc_gb["fixed_point_sum"],
                           1e-4, {"map": "[[2]]", "count": loc_gb["count"]}),
        VerificationReport("parametrix/localization-sig",
                           loc_sig["extrapolated"], loc_sig["fixed_point_sum"],
                           1e-4, {"map": "double-quarter-turn",
                                  "count": loc_sig["count"]}),
    ]


def check_geometry(seed: int, cutoff: int):
    rng = _rng(seed, 9)
    failures = []

    def expect(name, cond):
        if not cond:
            failures.append(name)

    # conformal planes are middle-degree self-dual, and the transfer factor
    # matches the squared differential
    for i in range(6):
        theta = float(rng.uniform(0.1, 3.0))
        lam = float(rng.uniform(0.3, 2.5))
        A = lam * rotation2(theta)
        rows = np.hstack([np.eye(2), A.T])
        plane = PlaneWithStructure(rows, factor_dim=2)
        try:
            fac = conformal_factor(plane)
            expect("conformal-factor-%d" % i, abs(fac - lam * lam) < 1e-9)
        except NotConformal:
            failures.append("conformal-raised-%d" % i)
        expect("self-dual-%d" % i, self_dual_middle_check(plane))
    # spread eigenvalues: both sides refuse
    bad = PlaneWithStructure(np.hstack([np.eye(2), np.diag([1.0, 2.0])]),
                             factor_dim=2)
    try:
        conformal_factor(bad)
        failures.append("conformal-accepted-spread")
    except NotConformal:
        pass
    expect("self-dual-rejects-spread", not self_dual_middle_check(bad))
    # coisotropic containment on the interleaved symplectic form
    frame = ComplexFrame(2)
    om = frame.structure_matrix()
    good = PlaneWithStructure(np.eye(4)[:3], omega=om)
    expect("coisotropic-axis", coisotropic_check(good))
    lag = PlaneWithStructure(np.eye(4)[[0, 2]], omega=om)
    expect("coisotropic-lagrangian", coisotropic_check(lag))
    bad_c = PlaneWithStructure(np.eye(4)[[0]], omega=om)
    expect("coisotropic-rejects-line", not coisotropic_check(bad_c))
    # star involution and pullback functoriality on random elements
    for i in range(4):
        n = 2 + i % 3
        coeffs = {}
        deg = 1 + i % n
        for I in masks_of_degree(n, deg):
            coeffs[I] = complex(rng.normal(), rng.normal())
        a = ExteriorElement(n, coeffs)
        sign = (-1.0) ** (deg * (n - deg))
        expect("star-involution-%d" % i,
               (hodge_star(hodge_star(a)) - sign * a).max_abs() < 1e-12)
        L1 = rng.normal(size=(n, n))
        L2 = rng.normal(size=(n, n))
        lhs = pullback(L1, pullback(L2, a))
        rhs = pullback(L1 @ L2, a)
        expect("pullback-functorial-%d" % i, (lhs - rhs).max_abs() < 1e-9)
    # determinism of spectral sums across fresh objects
    v1 = heat_supertrace(TorusMap(FlatTorus.standard(2), [[2, 1], [1, 1]]), 0.07)
    v2 = heat_supertrace(TorusMap(FlatTorus.standard(2), [[2, 1], [1, 1]]), 0.07)
    expect("spectral-deterministic", v1 == v2)
    return [VerificationReport("geometry/structural", float(len(failures)),
                               0.0, 0.0,
                               {"failed": failures, "seed": seed})]


CHECKS = {
    "gb": check_gb,
    "rr": check_rr,
    "sig": check_sig,
    "spin": check_spin,
    "torus-lefschetz": check_torus_lefschetz,
    "holo": check_holo,
    "slag": check_slag,
    "average": check_average,
    "coisotropic": check_coisotropic,
    "parametrix": check_parametrix,
    "geometry": check_geometry,
}


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("could not read run configuration %s: %s" % (path, exc))
    if not isinstance(cfg, dict):
        raise ConfigError("run configuration must be a JSON object")
    for key in cfg:
        if key not in ("checks", "seed", "cutoff"):
            raise ConfigError("unknown configuration key %r" % (key,))
    if "checks" in cfg and not isinstance(cfg["checks"], list):
        raise ConfigError("configuration field 'checks' must be a list of names")
    for name in cfg.get("checks", []):
        if name not in CHECKS:
            raise ConfigError("unknown check %r in configuration" % (name,))
    return cfg


def run_suite(checks=None, seed: int = DEFAULT_SEED,
              cutoff: int = DEFAULT_CUTOFF, config_path=None):
    """Run the named checks (all of them by default) and return the flat
    report list.  Configuration file values fill in whatever the caller did
    not set explicitly."""
    if config_path is not None:
        cfg = load_config(config_path)
        if checks is None and "checks" in cfg:
            checks = list(cfg["checks"])
        if "seed" in cfg and seed == DEFAULT_SEED:
            seed = int(cfg["seed"])
        if "cutoff" in cfg and cutoff == DEFAULT_CUTOFF:
            cutoff = int(cfg["cutoff"])
    if checks is None:
        checks = list(CHECKS)
    reports = []
    for name in checks:
        fn = CHECKS.get(name)
        if fn is None:
            raise ConfigError("unknown check %r" % (name,))
        start = time.perf_counter()
        rows = fn(int(seed), int(cutoff))
        elapsed = time.perf_counter() - start
        for row in rows:
            row.seconds = elapsed
        reports.extend(rows)
    return reports
