"""Flat tori and the global pairing checks.

A flat torus is R^n modulo an explicit lattice; every map considered here is
induced by an integer matrix in lattice coordinates, so fixed-point sets,
intersection counts and invariant Fourier modes are exact integer data
(Smith normal form), while the analytic sides (heat sums, truncated mode
sums) are evaluated with deterministic shell ordering and compensated
summation so that equal seeds give byte-identical output.

Conventions: lattice basis vectors are the ROWS of ``basis``; a lattice
coordinate column vector u corresponds to the ambient point basis^T u.  Dual
modes are integer row vectors k, with ambient momentum k @ dual_basis and
Laplace eigenvalue 4 pi^2 |momentum|^2 on e^{2 pi i k . u}.
"""
from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import NonTransverse, NotCoisotropic, NotLagrangian
from .exterior import (ComplexFrame, ExteriorElement, inner, j_action_inverse,
                       lefschetz_L, hodge_star, masks_of_degree, pullback,
                       volume_element, wedge)
from .geometry import PlaneWithStructure, coisotropic_check, rotation_angles
from .invariants import (TangentConfiguration, density, nu_gb, nu_rr, nu_sig,
                         oriented_volume_covector, pi_gram_sqrt_det, realify,
                         rr_pair_form)
from .lattice import (compensated_sum, determinant, dual_vectors_in_ball,
                      smith_normal_form, solve_congruence)

SPECTRAL_TAIL = 1e-18      # per-mode floor when truncating heat sums
DEFAULT_T_GRID = (0.05, 0.1, 0.2)
FOUR_PI_SQ = 4.0 * math.pi ** 2


class FlatTorus:
    """R^n modulo the integer span of the basis rows."""

    def __init__(self, basis):
        B = np.array(basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise ValueError("lattice basis must be a square row matrix")
        if abs(np.linalg.det(B)) < 1e-12:
            raise ValueError("lattice basis is degenerate")
        self.basis = B
        self.n = B.shape[0]
        self.volume = abs(float(np.linalg.det(B)))
        self.dual_basis = np.linalg.inv(B).T      # rows pair to delta_ij
        self.dual_gram = self.dual_basis @ self.dual_basis.T
        self._mode_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    @classmethod
    def standard(cls, n: int) -> "FlatTorus":
        return cls(np.eye(n))

    @property
    def is_standard(self) -> bool:
        return bool(np.allclose(self.basis, np.eye(self.n), atol=1e-12))

    def ambient_point(self, u) -> np.ndarray:
        uu = np.array([float(x) for x in u])
        return self.basis.T @ uu

    def heat_radius(self, t: float, tail: float = SPECTRAL_TAIL) -> float:
        """Momentum radius beyond which e^{-4 pi^2 r^2 t} < tail."""
        if t <= 0:
            raise ValueError("heat time must be positive")
        return math.sqrt(math.log(1.0 / tail) / (FOUR_PI_SQ * t))

    def modes_upto(self, radius: float):
        """(squared momenta, integer mode rows) for 0 < |momentum| <= radius,
        ordered by squared momentum then lexicographically."""
        key = round(float(radius), 9)
        hit = self._mode_cache.get(key)
        if hit is None:
            shell = dual_vectors_in_ball(self.dual_gram, radius)
            qs = np.array([q for q, _ in shell], dtype=float)
            ks = np.array([k for _, k in shell], dtype=np.int64).reshape(len(shell), self.n)
            hit = (qs, ks)
            self._mode_cache[key] = hit
        return hit

    def heat_trace(self, t: float, tail: float = SPECTRAL_TAIL) -> float:
        """Trace of the function heat semigroup: sum_k e^{-t lambda_k}."""
        qs, _ = self.modes_upto(self.heat_radius(t, tail))
        val = compensated_sum(math.exp(-FOUR_PI_SQ * q * t) for q in qs)
        return 1.0 + val.real


class TorusMap:
    """Endomorphism of a flat torus given by an integer matrix in lattice
    coordinates (u -> A u)."""

    def __init__(self, torus: FlatTorus, matrix):
        A = np.asarray(matrix)
        Ai = np.array(np.rint(np.asarray(A, dtype=float)), dtype=np.int64)
        if not np.allclose(np.asarray(A, dtype=float), Ai, atol=1e-9):
            raise ValueError("lattice endomorphisms need an integer matrix")
        if Ai.shape != (torus.n, torus.n):
            raise ValueError("matrix size does not match the torus dimension")
        self.torus = torus
        self.matrix = Ai
        Bt = torus.basis.T
        self.ambient = Bt @ Ai @ np.linalg.inv(Bt)

    @property
    def lefschetz_determinant(self) -> int:
        return determinant(np.eye(self.torus.n, dtype=np.int64) - self.matrix)

    def fixed_points(self):
        """(count, lattice-coordinate Fraction tuples) of the fixed-point
        set; raises NonTransverse when it is not finite."""
        if self.lefschetz_determinant == 0:
            raise NonTransverse("the fixed-point set is positive-dimensional")
        M = np.eye(self.torus.n, dtype=np.int64) - self.matrix
        return solve_congruence(M, [Fraction(0)] * self.torus.n)

    def invariant_modes(self, radius: float):
        """Modes k with A^T k = k and 0 < |momentum| <= radius, in the
        torus's deterministic order."""
        qs, ks = self.torus.modes_upto(radius)
        if len(qs) == 0:
            return qs, ks
        sel = np.all(ks @ self.matrix == ks, axis=1)
        return qs[sel], ks[sel]


# -- alternating trace and heat supertrace ---------------------------------

def lefschetz_cohomological(matrix) -> int:
    """Alternating sum over form degrees of the trace of the induced pullback
    on translation-invariant forms, as exact principal-minor arithmetic."""
    A = np.array(np.rint(np.asarray(matrix, dtype=float)), dtype=np.int64)
    n = A.shape[0]
    total = 0
    for k in range(n + 1):
        for rows in itertools.combinations(range(n), k):
            sub = A[np.ix_(rows, rows)]
            total += (-1) ** k * determinant(sub)
    return total


def gb_fixed_point_sum(tmap: TorusMap) -> float:
    """Sum of the transversal signs over the enumerated fixed points."""
    count, points = tmap.fixed_points()
    total = 0.0
    for _ in points:
        total += nu_gb(tmap.ambient)
    assert count == len(points)
    return total


def heat_supertrace(tmap: TorusMap, t: float, tail: float = SPECTRAL_TAIL) -> float:
    """Supertrace of (heat semigroup) composed with the pullback, summed over
    invariant Fourier modes of the form Laplacian, truncated at `tail`."""
    det_factor = float(tmap.lefschetz_determinant)
    qs, _ = tmap.invariant_modes(tmap.torus.heat_radius(t, tail))
    val = compensated_sum(math.exp(-FOUR_PI_SQ * q * t) for q in qs)
    return det_factor * (1.0 + val.real)


def gb_identity_check(tmap: TorusMap, t_values=DEFAULT_T_GRID) -> dict:
    """Cohomological trace, fixed-point sum and heat supertraces in one
    report.  On a flat torus the supertrace is exactly t-independent once the
    map is transverse, so the spread over t_values is a numerical-noise
    gauge, not a convergence rate."""
    spectral = {float(t): heat_supertrace(tmap, float(t)) for t in t_values}
    vals = list(spectral.values())
    return {
        "cohomological": lefschetz_cohomological(tmap.matrix),
        "fixed_point_sum": gb_fixed_point_sum(tmap),
        "determinant": tmap.lefschetz_determinant,
        "spectral": spectral,
        "t_spread": max(vals) - min(vals) if vals else 0.0,
    }


# -- holomorphic alternating trace on C^m / Z[i]^m -------------------------

def holo_lefschetz_check(a) -> dict:
    """Alternating antiholomorphic trace versus the fixed-point sum for a
    Gaussian-integer matrix acting on the product of square complex tori.

    lhs: sum_q (-1)^q tr Lambda^q(conj(a)) via exact principal minors.
    rhs: one factor 1/det_C(I - a) per enumerated fixed point.
    """
    a = np.asarray(a, dtype=complex)
    m = a.shape[0]
    Areal = realify(a)
    Aint = np.rint(Areal)
    if not np.allclose(Areal, Aint, atol=1e-9):
        raise ValueError("the matrix must preserve the Gaussian-integer lattice")
    tmap = TorusMap(FlatTorus.standard(2 * m), Aint)
    count, points = tmap.fixed_points()
    lhs = 0.0 + 0.0j
    abar = np.conj(a)
    for k in range(m + 1):
        for rows in itertools.combinations(range(m), k):
            sub = abar[np.ix_(rows, rows)]
            lhs += (-1) ** k * complex(np.linalg.det(sub)) if k else (-1) ** k
    rhs = 0.0 + 0.0j
    for _ in points:
        rhs += nu_rr(a)
    return {"lhs": complex(lhs), "rhs": complex(rhs), "count": count}


# -- middle-degree pairing against an isometry -----------------------------

def signature_pairing_check(matrix) -> dict:
    """Middle-degree wedge pairing of pulled-back basis forms against an
    orientation-preserving integer isometry of the square torus, versus the
    fixed-point sum of middle-degree densities.

    lhs: sum over middle-degree multi-indices I of the volume coefficient of
    (A* mu^I) ^ mu^I.  rhs: one nu_sig factor per enumerated fixed point,
    with rotation angles read off the matrix.
    """
    A = np.array(np.rint(np.asarray(matrix, dtype=float)), dtype=np.int64)
    n = A.shape[0]
    if n % 2:
        raise ValueError("middle-degree pairing needs an even dimension")
    Af = A.astype(float)
    if not np.allclose(Af.T @ Af, np.eye(n), atol=1e-9):
        raise ValueError("the matrix must be an isometry of the square torus")
    if np.linalg.det(Af) < 0:
        raise ValueError("the isometry must preserve orientation")
    dvol = volume_element(n)
    lhs = 0.0
    for I in masks_of_degree(n, n // 2):
        mu = ExteriorElement(n, {I: 1.0})
        lhs += inner(wedge(pullback(Af.T, mu), mu), dvol).real
    tmap = TorusMap(FlatTorus.standard(n), A)
    count, points = tmap.fixed_points()
    angles = rotation_angles(Af)
    rhs = 0.0 + 0.0j
    for _ in points:
        rhs += nu_sig(1.0, angles)
    return {"lhs": float(lhs), "rhs": complex(rhs), "count": count}


# -- affine subtori ---------------------------------------------------------

def _as_fraction_vector(x, n: int):
    if x is None:
        return tuple(Fraction(0) for _ in range(n))
    out = []
    for v in x:
        out.append(v if isinstance(v, Fraction) else Fraction(v).limit_denominator(10 ** 9))
    if len(out) != n:
        raise ValueError("offset length does not match the torus dimension")
    return tuple(out)


class AffineSubtorus:
    """Closed affine subtorus: offset + R-span of primitive integer
    direction rows, inside a flat torus."""

    def __init__(self, torus: FlatTorus, directions, offset=None):
        D = np.asarray(directions, dtype=np.int64)
        if D.size == 0:
            D = D.reshape(0, torus.n)
        if D.ndim != 2 or D.shape[1] != torus.n:
            raise ValueError("direction rows must live in the torus's lattice")
        if D.shape[0]:
            _, S, _ = smith_normal_form(D)
            diag = [int(S[i][i]) for i in range(min(S.shape))]
            rank = sum(1 for d in diag if d)
            if rank != D.shape[0]:
                raise ValueError("direction rows are dependent")
            if any(d not in (0, 1) for d in diag):
                raise ValueError("direction rows must form a primitive lattice basis")
        self.torus = torus
        self.rows = D
        self.offset = _as_fraction_vector(offset, torus.n)

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @property
    def ambient_rows(self) -> np.ndarray:
        return self.rows.astype(float) @ self.torus.basis

    @property
    def covolume(self) -> float:
        if self.dim == 0:
            return 1.0
        R = self.ambient_rows
        return float(math.sqrt(abs(np.linalg.det(R @ R.T))))

    def volume_covector(self) -> ExteriorElement:
        if self.dim == 0:
            raise ValueError("a point has no volume covector")
        return oriented_volume_covector(self.ambient_rows)

    def offset_ambient(self) -> np.ndarray:
        return self.torus.ambient_point([float(x) for x in self.offset])

    def integrate(self, form: ExteriorElement) -> complex:
        """Integral of a translation-invariant form over the subtorus."""
        if self.dim == 0:
            raise ValueError("integration needs a positive-dimensional subtorus")
        return inner(form, self.volume_covector()) * self.covolume

    def intersect(self, other: "AffineSubtorus") -> list["AffineSubtorus"]:
        """Connected components of the intersection, each returned with an
        exact rational offset and integer direction rows."""
        if other.torus is not self.torus and not np.array_equal(other.torus.basis, self.torus.basis):
            raise ValueError("subtori live on different tori")
        n = self.torus.n
        k1, k2 = self.dim, other.dim
        k = k1 + k2
        if k == 0:
            same = all((a - b) % 1 == 0 for a, b in zip(self.offset, other.offset))
            return [AffineSubtorus(self.torus, np.zeros((0, n), dtype=np.int64),
                                   self.offset)] if same else []
        M = np.vstack([self.rows, -other.rows]).astype(np.int64)
        U, D, V = smith_normal_form(M)
        r = sum(1 for i in range(min(D.shape)) if D[i][i] != 0)
        dp = [ob - sb for sb, ob in zip(self.offset, other.offset)]
        w = [sum(dp[i] * int(V[i][j]) for i in range(n)) for j in range(n)]
        for j in range(r, n):
            if w[j].denominator != 1:
                return []
        dirs = np.array([[int(sum(int(U[i][s]) * int(self.rows[s][j]) for s in range(k1)))
                          for j in range(n)] for i in range(r, k)], dtype=np.int64)
        if dirs.size == 0:
            dirs = dirs.reshape(0, n)
        dvals = [int(D[i][i]) for i in range(r)]
        comps = []
        for combo in itertools.product(*[range(abs(d)) for d in dvals]):
            cp = [Fraction(0)] * k
            for i in range(r):
                cp[i] = (w[i] + combo[i]) / dvals[i]
            c = [sum(cp[i] * int(U[i][j]) for i in range(k)) for j in range(k)]
            a = c[:k1]
            x = [(self.offset[j] + sum(a[i] * int(self.rows[i][j]) for i in range(k1))) % 1
                 for j in range(n)]
            comps.append(AffineSubtorus(self.torus, dirs, tuple(x)))
        return comps


# -- line pairings on the square two-torus ---------------------------------

def _require_line(sub: AffineSubtorus) -> None:
    if sub.torus.n != 2 or not sub.torus.is_standard:
        raise NotLagrangian("line pairings are defined on the square two-torus")
    if sub.dim != 1:
        raise NotLagrangian("expected a closed geodesic line, got dimension %d" % sub.dim)


def line_unit(sub: AffineSubtorus) -> complex:
    """Unit complex number of the oriented line direction."""
    _require_line(sub)
    d = sub.rows[0]
    z = complex(float(d[0]), float(d[1]))
    return z / abs(z)


def slag_phase(sub: AffineSubtorus) -> float:
    """Calibration phase of the oriented line (argument of its direction)."""
    return cmath.phase(line_unit(sub))


def _pair_density(l1: AffineSubtorus, l2: AffineSubtorus) -> complex:
    """Definitional coincidence density of a transverse line pair at an
    intersection point: the product-plane pairing against the Dolbeault
    coincidence element, normalized to e^{-i d_phase}/|sin(angle)|."""
    u1 = np.array([float(x) for x in l1.rows[0]])
    u2 = np.array([float(x) for x in l2.rows[0]])
    u1 = u1 / np.linalg.norm(u1)
    u2 = u2 / np.linalg.norm(u2)
    W = [np.concatenate([u1, [0.0, 0.0]]), np.concatenate([[0.0, 0.0], u2])]
    cfg = TangentConfiguration(2, W)
    rho = (1j) ** (-1) * density(rr_pair_form(1), cfg)
    return complex(-2j * rho)


def slag_geometric_term(l1: AffineSubtorus, l2: AffineSubtorus) -> complex:
    """Phase-weighted length product: e^{-i(phi1 - phi2)} len1 len2 / vol."""
    _require_line(l1)
    _require_line(l2)
    phase = cmath.exp(-1j * (slag_phase(l1) - slag_phase(l2)))
    return phase * l1.covolume * l2.covolume / l1.torus.volume


def slag_fixed_term(l1: AffineSubtorus, l2: AffineSubtorus) -> complex:
    """Sum of coincidence densities over the transverse intersection points
    (empty for distinct parallel lines)."""
    _require_line(l1)
    _require_line(l2)
    comps = l1.intersect(l2)
    if any(c.dim > 0 for c in comps):
        raise NonTransverse("the lines coincide")
    total = 0.0 + 0.0j
    for _ in comps:
        total += _pair_density(l1, l2)
    return total


def slag_spectral_term(l1: AffineSubtorus, l2: AffineSubtorus, cutoff: int) -> complex:
    """Cesaro-weighted truncated mode sum of the spectral pairing.

    Only modes perpendicular to both lines contribute; for a transverse pair
    that set is empty, for parallel lines it collapses to the rank-one
    lattice generated by the common normal, summed in the deterministic
    order n = 1, -1, 2, -2, ... with weights 1 - |n|/(cutoff + 1).
    """
    _require_line(l1)
    _require_line(l2)
    if cutoff < 1:
        raise ValueError("cutoff must be a positive integer")
    d1, d2 = l1.rows[0], l2.rows[0]
    if int(d1[0]) * int(d2[1]) - int(d1[1]) * int(d2[0]) != 0:
        return 0.0 + 0.0j
    # common normal of the parallel pair, primitive by construction
    normal = (-int(d1[1]), int(d1[0]))
    dp = [a - b for a, b in zip(l1.offset, l2.offset)]
    c = normal[0] * dp[0] + normal[1] * dp[1]
    amp = -np.conj(line_unit(l1)) * line_unit(l2) \
        * l1.covolume * l2.covolume / l1.torus.volume
    terms = []
    for nmode in range(1, cutoff + 1):
        w = 1.0 - nmode / (cutoff + 1.0)
        ph = cmath.exp(2j * math.pi * float((nmode * c) % 1))
        terms.append(w * ph)
        terms.append(w * ph.conjugate())
    return complex(amp * compensated_sum(terms))


def slag_identity_check(l1: AffineSubtorus, l2: AffineSubtorus,
                        cutoffs=(50, 100, 200)) -> dict:
    """Geometric term minus fixed-point term minus truncated spectral sum,
    per cutoff, with the fitted decay exponent of the residual."""
    geometric = slag_geometric_term(l1, l2)
    fixed = slag_fixed_term(l1, l2)
    spectral = {}
    residual = {}
    for R in cutoffs:
        s = slag_spectral_term(l1, l2, int(R))
        spectral[int(R)] = s
        residual[int(R)] = abs(geometric - fixed - s)
    decay = None
    rs = sorted(residual)
    if len(rs) >= 2 and all(residual[R] > 1e-13 for R in rs):
        slope = np.polyfit(np.log([float(R) for R in rs]),
                           np.log([residual[R] for R in rs]), 1)[0]
        decay = float(-slope)
    return {"geometric": geometric, "fixed": fixed, "spectral": spectral,
            "residual": residual, "decay_exponent": decay}


def average_identity_check(l1: AffineSubtorus, l2: AffineSubtorus) -> dict:
    """Translation-averaged pairing: phase-weighted length product against
    volume times the sum of coincidence densities.  For a distinct parallel
    pair the intersection count 0 is reported and the right side is the
    empty sum."""
    _require_line(l1)
    _require_line(l2)
    comps = l1.intersect(l2)
    if any(c.dim > 0 for c in comps):
        raise NonTransverse("the lines coincide")
    phase = cmath.exp(-1j * (slag_phase(l1) - slag_phase(l2)))
    lhs = phase * l1.covolume * l2.covolume
    rhs = 0.0 + 0.0j
    for _ in comps:
        rhs += l1.torus.volume * _pair_density(l1, l2)
    return {"lhs": complex(lhs), "rhs": complex(rhs), "count": len(comps)}


# -- coisotropic pairing ----------------------------------------------------

def coisotropic_pairing_check(sub1: AffineSubtorus, sub2: AffineSubtorus) -> dict:
    """Middle-dual pairing of two coisotropic subtori of the square
    symplectic torus against the component-by-component coincidence sum.

    lhs: (-1)^(m-q) sum over degree-(m-q) multi-indices I of the integral of
    omega^q ^ mu^I over the first subtorus times the integral of star mu^I
    over the second.

    rhs: over each intersection component, 2^(dim/2) times its volume times
    the pairing of the two unit volume covectors through the inverse complex
    structure, divided by the product-plane Gram normalizer with the
    diagonal of the component as core.
    """
    torus = sub1.torus
    if torus.n % 2:
        raise ValueError("the ambient torus dimension must be even")
    if not torus.is_standard:
        raise ValueError("the pairing is defined on the square torus")
    m = torus.n // 2
    frame = ComplexFrame(m)
    omega_mat = frame.structure_matrix()
    for sub in (sub1, sub2):
        plane = PlaneWithStructure(sub.ambient_rows, omega=omega_mat)
        if not coisotropic_check(plane):
            raise NotCoisotropic("subtorus of dimension %d is not coisotropic" % sub.dim)
    q1, q2 = sub1.dim - m, sub2.dim - m
    if q1 != q2 or q1 < 0:
        raise ValueError("the subtori must share a common coisotropy excess")
    q = q1
    omega = frame.kaehler_form()
    lhs = 0.0 + 0.0j
    for I in masks_of_degree(torus.n, m - q):
        mu = ExteriorElement(torus.n, {I: 1.0})
        form1 = mu
        for _ in range(q):
            form1 = lefschetz_L(form1, omega)
        lhs += sub1.integrate(form1) * sub2.integrate(hodge_star(mu))
    lhs *= (-1.0) ** (m - q)
    dv1 = sub1.volume_covector()
    dv2 = j_action_inverse(sub2.volume_covector(), frame)
    pairing = inner(dv1, dv2)
    comps = sub1.intersect(sub2)
    rhs = 0.0 + 0.0j
    for comp in comps:
        W = [np.concatenate([r, np.zeros(torus.n)]) for r in sub1.ambient_rows]
        W += [np.concatenate([np.zeros(torus.n), r]) for r in sub2.ambient_rows]
        S = [np.concatenate([r, r]) for r in comp.ambient_rows]
        cfg = TangentConfiguration(torus.n, W, S)
        rhs += 2.0 ** (comp.dim / 2.0) * comp.covolume * pairing / pi_gram_sqrt_det(cfg)
    return {"lhs": complex(lhs), "rhs": complex(rhs), "components": len(comps),
            "q": q}
