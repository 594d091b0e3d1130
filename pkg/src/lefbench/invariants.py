"""Local fixed-point densities: closed forms and the brute-force pairing.

The central object is a ``TangentConfiguration``: an (n+s)-dimensional plane
W inside R^n x R^n together with the s-dimensional core S = W intersect the
diagonal (given by its own basis).  The *density* of an index form q at such
a configuration is

    density(q, cfg) = <q, dV_W> / pi_gram_sqrt_det(cfg)

where dV_W is the oriented unit volume covector of W (orientation = the
order of the basis rows) and pi_gram_sqrt_det is the square-root Gram
determinant of the difference map Pi(u, v) = (u - v)/sqrt(2), doubled, on an
orthonormal complement of S inside W.  Transversality means exactly that
this complement has dimension n and Pi is injective on it.

Index forms supplied here (on R^{2n}, first factor slots 1..n):

* ``gb_index_form(n)``       -- alternating sum over degrees p of
                                sum_I pi1 mu^I ^ pi2 star(mu^I);
                                equals (-1)^n times ``difference_volume_form``.
* ``difference_volume_form`` -- wedge of (pi1 mu^i - pi2 mu^i), i = 1..n.
* ``sig_index_form(n)``      -- sum over middle-degree I of pi1 mu^I ^ pi2 mu^I.
* ``rr_pair_form(m)``        -- the Dolbeault pairing form on (C^m) x (C^m);
                                i^{-m} times it is the coincidence limit of
                                the alternating (0,q)-eigenform pairing sum.

Closed-form densities and their definitional (brute-force) counterparts are
exposed side by side so each can serve as the other's oracle.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import NonTransverse
from .exterior import (ComplexFrame, ExteriorElement, ProductSplit, conjugate,
                       frame_volume_covector, hodge_star, inner,
                       masks_of_degree, multigrade_project, pullback, wedge,
                       wedge_list)

NONTRANSVERSE_REL = 1e-12   # relative floor for the Gram eigenvalue product
RANK_TOL = 1e-10            # rank decisions in orthonormalization


def orthonormal_rows(rows, against=None, tol: float = RANK_TOL):
    """Orthonormal basis (rows) of the row space, after projecting out
    span(against) when given."""
    V = np.array(rows, dtype=float)
    if V.ndim != 2:
        V = V.reshape(len(rows), -1)
    if against is not None and len(against):
        A = np.asarray(against, dtype=float)
        Q, _ = np.linalg.qr(A.T)
        V = V - (V @ Q) @ Q.T
    U, s, Vt = np.linalg.svd(V, full_matrices=False)
    if s.size == 0:
        return Vt[:0]
    keep = s > tol * max(s[0], 1.0)
    return Vt[keep]


def oriented_volume_covector(rows) -> ExteriorElement:
    """Unit-volume covector of span(rows), oriented by the row order."""
    V = np.asarray(rows, dtype=float)
    Q = orthonormal_rows(V)
    if Q.shape[0] != V.shape[0]:
        raise ValueError("rows are not linearly independent")
    sign = float(np.sign(np.linalg.det(V @ Q.T)))
    return sign * frame_volume_covector(Q)


class TangentConfiguration:
    """Plane W in R^n x R^n (rows of W_basis, length 2n) with core
    S = W intersect diagonal spanned by S_basis rows."""

    def __init__(self, n: int, W_basis, S_basis=()):
        self.n = n
        self.W = np.array(W_basis, dtype=float).reshape(len(W_basis), 2 * n)
        if len(S_basis):
            self.S = np.array(S_basis, dtype=float).reshape(len(S_basis), 2 * n)
        else:
            self.S = np.zeros((0, 2 * n))

    @property
    def core_dim(self) -> int:
        return self.S.shape[0]


def difference_map(vectors):
    """Pi(u, v) = (u - v)/sqrt(2), applied to rows of length 2n."""
    V = np.asarray(vectors, dtype=float)
    n = V.shape[1] // 2
    return (V[:, :n] - V[:, n:]) / math.sqrt(2.0)


def pi_gram_sqrt_det(cfg: TangentConfiguration, rel_tol: float = NONTRANSVERSE_REL) -> float:
    """sqrt det of 2 * Pi Pi^T on an orthonormal complement of S inside W.

    Raises NonTransverse when the complement does not have dimension n or the
    Gram matrix is (relatively) singular."""
    U = orthonormal_rows(cfg.W, against=cfg.S if cfg.core_dim else None)
    if U.shape[0] != cfg.n:
        raise NonTransverse("complement of the core has dimension %d, expected %d"
                            % (U.shape[0], cfg.n))
    P = difference_map(U)
    G = 2.0 * (P @ P.T)
    ev = np.linalg.eigvalsh(G)
    # U is orthonormal, so the Gram eigenvalues live on an O(1) scale; a
    # tiny top eigenvalue means the whole complement hugs the diagonal and
    # the relative spread test below would compare noise against noise
    if ev[-1] < rel_tol or float(np.prod(ev)) / ev[-1] ** len(ev) < rel_tol:
        raise NonTransverse("difference-map Gram matrix is singular")
    return float(math.sqrt(float(np.prod(ev))))


def configuration_volume_covector(cfg: TangentConfiguration) -> ExteriorElement:
    return oriented_volume_covector(cfg.W)


def density(q: ExteriorElement, cfg: TangentConfiguration) -> complex:
    """<q, dV_W> / pi_gram_sqrt_det -- the definitional local density."""
    if q.dim != 2 * cfg.n:
        raise ValueError("form lives on R^%d, configuration on R^%d" % (q.dim, 2 * cfg.n))
    return inner(q, configuration_volume_covector(cfg)) / pi_gram_sqrt_det(cfg)


def graph_configuration(A) -> TangentConfiguration:
    """W = {(v, Av)}, oriented by the first-factor parametrization."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    rows = [np.concatenate([np.eye(n)[j], A[:, j]]) for j in range(n)]
    return TangentConfiguration(n, rows)


def trace_configuration(A) -> TangentConfiguration:
    """W = {(Av, v)}, oriented by the second-factor parametrization."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    rows = [np.concatenate([A[:, j], np.eye(n)[j]]) for j in range(n)]
    return TangentConfiguration(n, rows)


def realify(a) -> np.ndarray:
    """Complex m x m matrix as the real 2m x 2m matrix on interleaved
    coordinates (x1, y1, x2, y2, ...)."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0]
    A = np.zeros((2 * m, 2 * m))
    for i in range(m):
        for j in range(m):
            p, q = a[i, j].real, a[i, j].imag
            A[2 * i, 2 * j] = p
            A[2 * i, 2 * j + 1] = -q
            A[2 * i + 1, 2 * j] = q
            A[2 * i + 1, 2 * j + 1] = p
    return A


# -- index forms -----------------------------------------------------------

def difference_volume_form(n: int) -> ExteriorElement:
    """Wedge over i of (pi1 mu^i - pi2 mu^i) on R^{2n}; pairs to the
    transversal sign of a graph configuration."""
    facs = []
    for i in range(n):
        facs.append(ExteriorElement(2 * n, {1 << i: 1.0, 1 << (n + i): -1.0}))
    return wedge_list(facs)


def gb_index_form(n: int) -> ExteriorElement:
    """sum_p (-1)^p sum_{|I|=p} pi1 mu^I ^ pi2 star(mu^I)."""
    split = ProductSplit(n)
    out = ExteriorElement(2 * n)
    for p in range(n + 1):
        for I in masks_of_degree(n, p):
            a = ExteriorElement(n, {I: 1.0})
            out = out + (-1.0) ** p * split.pair(a, hodge_star(a))
    return out


def sig_index_form(n: int) -> ExteriorElement:
    """sum over middle-degree I of pi1 mu^I ^ pi2 mu^I (n even)."""
    if n % 2:
        raise ValueError("middle-degree pairing needs even dimension")
    split = ProductSplit(n)
    out = ExteriorElement(2 * n)
    for I in masks_of_degree(n, n // 2):
        a = ExteriorElement(n, {I: 1.0})
        out = out + split.pair(a, a)
    return out


def rr_pair_form(m: int) -> ExteriorElement:
    """Dolbeault pairing form on C^m x C^m (slots: 2m + 2m interleaved
    real coordinates):

        (-1)^{m(m+1)/2} prod_j (pi1 etabar^j - pi2 etabar^j) ^ prod_j pi2 eta^j.

    i^{-m} times this element equals the coincidence limit of the
    alternating (0,q)-eigenform pairing sum (checked in the test suite at
    m = 1 against the explicit two-term kernel)."""
    r2 = math.sqrt(2.0)
    N = 4 * m
    facs = []
    for j in range(m):
        a, b = 2 * j, 2 * j + 1
        coeffs = {1 << a: 1 / r2, 1 << b: -1j / r2,
                  1 << (2 * m + a): -1 / r2, 1 << (2 * m + b): 1j / r2}
        facs.append(ExteriorElement(N, coeffs))
    for j in range(m):
        a, b = 2 * j, 2 * j + 1
        facs.append(ExteriorElement(N, {1 << (2 * m + a): 1 / r2,
                                        1 << (2 * m + b): 1j / r2}))
    sgn = (-1.0) ** (m * (m + 1) // 2)
    return sgn * wedge_list(facs)


def second_factor_volume(n: int) -> ExteriorElement:
    """pi2 dvol on R^{2n}."""
    return ExteriorElement(2 * n, {((1 << n) - 1) << n: 1.0})


# -- closed forms ----------------------------------------------------------

def nu_gb(A) -> float:
    """Transversal index of the graph of A: sign det(I - A).

    Equals density(difference_volume_form, graph_configuration(A)) and
    density(gb_index_form, trace_configuration(A)); always +-1."""
    A = np.asarray(A, dtype=float)
    d = float(np.linalg.det(np.eye(A.shape[0]) - A))
    if d == 0.0:
        raise NonTransverse("det(I - A) = 0")
    return 1.0 if d > 0 else -1.0


def nu_gb_density(A) -> float:
    """Brute-force counterpart of nu_gb via the definitional pairing."""
    A = np.asarray(A, dtype=float)
    return float(np.real(density(difference_volume_form(A.shape[0]),
                                 graph_configuration(A))))


def nu_rr(a) -> complex:
    """Holomorphic fixed-point factor 1/det_C(I - a)."""
    a = np.asarray(a, dtype=complex)
    d = complex(np.linalg.det(np.eye(a.shape[0]) - a))
    if d == 0:
        raise NonTransverse("det_C(I - a) = 0")
    return 1.0 / d


def nu_rr_density(a) -> complex:
    """i^{-m} * density(rr_pair_form, trace_configuration(realify(a)));
    agrees with nu_rr."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0]
    return (1j) ** (-m) * density(rr_pair_form(m), trace_configuration(realify(a)))


def nu_sig(scale: float, angles) -> complex:
    """Middle-degree pairing density of the conformal map scale * k, where k
    is the block rotation with the given angles (m blocks, dimension 2m):

        i^{-m} scale^m |det(I - k)| / |det(I - scale*k)| * prod cot(angle/2).
    """
    angles = np.asarray(angles, dtype=float)
    m = len(angles)
    k = block_rotation(angles)
    I = np.eye(2 * m)
    denom = abs(np.linalg.det(I - scale * k))
    if denom < 1e-300:
        raise NonTransverse("1/scale is an eigenvalue of the rotation")
    val = (1j) ** (-m) * scale ** m * abs(np.linalg.det(I - k)) / denom
    for t in angles:
        s = math.sin(t / 2.0)
        if s == 0:
            raise NonTransverse("rotation block with angle 0")
        val *= math.cos(t / 2.0) / s
    return complex(val)


def nu_sig_density(scale: float, angles) -> complex:
    """density(sig_index_form, graph_configuration(scale * rotation));
    agrees with nu_sig (m = 2 exactly; at m = 1 the graph and transpose
    parametrizations differ by a phase, so only even m is contract-tested)."""
    angles = np.asarray(angles, dtype=float)
    m = len(angles)
    A = scale * block_rotation(angles)
    return density(sig_index_form(2 * m), graph_configuration(A))


def nu_spin(scale: float, angles) -> complex:
    """Half-spin pairing density for the conformal map scale * k:

        (-i)^m 2^{-m} scale^{1/2 - m} |det(I - k)| / |det(I - scale*k)|
            * prod 1/sin(angle/2).
    """
    angles = np.asarray(angles, dtype=float)
    m = len(angles)
    k = block_rotation(angles)
    I = np.eye(2 * m)
    denom = abs(np.linalg.det(I - scale * k))
    if denom < 1e-300:
        raise NonTransverse("1/scale is an eigenvalue of the rotation")
    val = (-1j) ** m * 2.0 ** (-m) * scale ** (0.5 - m) * abs(np.linalg.det(I - k)) / denom
    for t in angles:
        s = math.sin(t / 2.0)
        if s == 0:
            raise NonTransverse("rotation block with angle 0")
        val /= s
    return complex(val)


def rotation2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def block_rotation(angles) -> np.ndarray:
    from scipy.linalg import block_diag
    return block_diag(*[rotation2(t) for t in angles])


# -- excess-core variants --------------------------------------------------

def _core_factorization_pieces(cfg: TangentConfiguration):
    """(unit complement covector nu_S_W oriented so nu_S_W ^ dV_S = dV_W,
    oriented core covector dV_S)."""
    if cfg.core_dim:
        S_on = orthonormal_rows(cfg.S)
        sign = float(np.sign(np.linalg.det(cfg.S @ S_on.T)))
        dV_S = sign * frame_volume_covector(S_on)
    else:
        dV_S = ExteriorElement(2 * cfg.n, {0: 1.0})
    U = orthonormal_rows(cfg.W, against=cfg.S if cfg.core_dim else None)
    comp = frame_volume_covector(U)
    dV_W = configuration_volume_covector(cfg)
    test = wedge(comp, dV_S) if cfg.core_dim else comp
    key = max(test.coeffs, key=lambda k: abs(test.coeffs[k]))
    flip = float(np.sign((test.coeffs[key] * np.conj(dV_W.coeffs.get(key, 0.0))).real))
    return flip * comp, dV_S


def rr_core_component(z: ExteriorElement, cfg: TangentConfiguration, m: int) -> ExteriorElement:
    """The part of z that survives the core pairing: the sum over a of the
    multigrade (p, a; 0, p-a) components, p = half the core dimension."""
    p = cfg.core_dim // 2
    out = ExteriorElement(z.dim)
    for a in range(p + 1):
        out = out + multigrade_project(z, (p, a, 0, p - a), (m, m))
    return out


def nu_rr_excess(z: ExteriorElement, cfg: TangentConfiguration) -> tuple[complex, complex]:
    """Excess-core Dolbeault pairing.  Returns (direct, factored):

        direct   = <z ^ rr_pair_form, dV_W> / pi_gram_sqrt_det
        factored = 2^p <rr_pair_form, nu_S_W> / pi_gram_sqrt_det
                   * <core component of z, dV_S>

    (p = half the core dimension; nu_S_W the oriented unit complement
    covector with nu_S_W ^ dV_S = dV_W).  The two agree; with an empty core
    and scalar z this reduces to the transverse Dolbeault density."""
    if cfg.n % 2:
        raise ValueError("Dolbeault pairing needs even real dimension")
    m = cfg.n // 2
    if cfg.core_dim % 2:
        raise ValueError("core of a complex fixed set has even dimension")
    direct = inner(wedge(z, rr_pair_form(m)), configuration_volume_covector(cfg)) \
        / pi_gram_sqrt_det(cfg)
    comp, dV_S = _core_factorization_pieces(cfg)
    p = cfg.core_dim // 2
    z0 = rr_core_component(z, cfg, m)
    factored = 2.0 ** p * inner(rr_pair_form(m), comp) / pi_gram_sqrt_det(cfg) \
        * inner(z0, dV_S)
    return complex(direct), complex(factored)


def nu_sig_excess(z: ExteriorElement, cfg: TangentConfiguration) -> tuple[complex, complex]:
    """Excess-core middle-degree pairing, same shape as nu_rr_excess with
    sig_index_form in place of the Dolbeault pairing form.  The factored
    product uses the plain core pairing <z, dV_S>; the two returns agree
    when z is supported on the core directions (and trivially for z = 0 or
    an empty core)."""
    direct = inner(wedge(z, sig_index_form(cfg.n)), configuration_volume_covector(cfg)) \
        / pi_gram_sqrt_det(cfg)
    comp, dV_S = _core_factorization_pieces(cfg)
    p = cfg.core_dim // 2
    factored = 2.0 ** p * inner(sig_index_form(cfg.n), comp) / pi_gram_sqrt_det(cfg) \
        * inner(z, dV_S)
    return complex(direct), complex(factored)
