"""Pointwise admissibility tests for planes (tangent spaces of
correspondences, currents and subtori).

Everything here is linear algebra on a single plane; submanifold-level
checks sample tangent planes at caller-chosen points.  Rank/containment
decisions use a relative threshold of 1e-10 (dimensions are <= 16, so this
is comfortably conditioned).
"""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import DegenerateProjection, NotConformal
from .exterior import (ExteriorElement, ProductSplit, hodge_star, inner,
                       masks_of_degree, pullback, wedge)
from .invariants import difference_map, orthonormal_rows

RANK_TOL = 1e-10
CONFORMAL_TOL = 1e-10
TRANSVERSE_TOL = 1e-12


class PlaneWithStructure:
    """A plane given by basis rows, optionally decorated with a symplectic
    form, a complex structure and a companion form.

    For correspondence planes the ambient is R^n x R^n (factor_dim = n),
    possibly preceded by base_dims family-parameter slots, so each row has
    length base_dims + 2 * factor_dim.  For planes inside a single space
    set factor_dim = None and give omega / jmat on that space."""

    def __init__(self, basis_rows, factor_dim=None, base_dims=0,
                 omega=None, jmat=None, companion=None):
        self.basis = np.array(basis_rows, dtype=float)
        if self.basis.ndim != 2:
            self.basis = self.basis.reshape(len(basis_rows), -1)
        self.factor_dim = factor_dim
        self.base_dims = base_dims
        self.omega = None if omega is None else np.asarray(omega, dtype=float)
        self.jmat = None if jmat is None else np.asarray(jmat, dtype=float)
        self.companion = companion
        if factor_dim is not None:
            expected = base_dims + 2 * factor_dim
            if self.basis.shape[1] != expected:
                raise ValueError("rows have length %d, expected %d"
                                 % (self.basis.shape[1], expected))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def factor_blocks(self):
        """(first-factor block, second-factor block) of the basis rows."""
        if self.factor_dim is None:
            raise ValueError("plane has no product structure")
        b, n = self.base_dims, self.factor_dim
        return self.basis[:, b:b + n], self.basis[:, b + n:]


def transversality_check(plane: PlaneWithStructure) -> bool:
    """True when the difference map u - v has full rank factor_dim on the
    plane (threshold 1e-12 relative)."""
    if plane.base_dims:
        raise ValueError("transversality applies to correspondence planes only")
    U = orthonormal_rows(plane.basis)
    P = difference_map(U)
    s = np.linalg.svd(P, compute_uv=False)
    if s.size == 0:
        return False
    rank = int(np.sum(s > TRANSVERSE_TOL * max(s[0], 1.0)))
    return rank == plane.factor_dim


def conformal_factor(plane: PlaneWithStructure) -> float:
    """The common eigenvalue of f* f for the plane's transfer map f (covector
    transport from the second factor to the first through the plane; for the
    graph of g this is pullback by g, with eigenvalues |dg|^2).

    Raises DegenerateProjection when either factor projection is singular on
    the plane, NotConformal when the eigenvalues of f* f are spread."""
    P1, P2 = plane.factor_blocks()
    n = plane.factor_dim
    if P1.shape[0] != n:
        raise DegenerateProjection("plane dimension differs from the factor dimension")
    for name, P in (("first", P1), ("second", P2)):
        s = np.linalg.svd(P, compute_uv=False)
        if s[-1] <= RANK_TOL * max(s[0], 1.0):
            raise DegenerateProjection("%s-factor projection is singular" % name)
    transfer = np.linalg.solve(P1, P2)
    lam = np.linalg.svd(transfer, compute_uv=False) ** 2
    if lam[0] / lam[-1] - 1.0 > CONFORMAL_TOL:
        raise NotConformal("eigenvalues of f*f spread over [%g, %g]"
                           % (lam[-1], lam[0]))
    return float(lam.mean())


def self_dual_middle_check(plane: PlaneWithStructure, tol: float = RANK_TOL) -> bool:
    """Exhaustive middle-degree test: the pullback to the plane of
    star(f) ^ star(F) - f ^ F vanishes for every pair of middle-degree basis
    forms f (first factor), F (second factor).  Requires an even factor
    dimension and a plane of dimension factor_dim."""
    n = plane.factor_dim
    if n is None or n % 2 or plane.base_dims:
        raise ValueError("middle-degree self-duality needs a plain correspondence "
                         "plane over an even-dimensional factor")
    split = ProductSplit(n)
    scale = max(1.0, float(np.abs(plane.basis).max()) ** n)
    for I in masks_of_degree(n, n // 2):
        f = ExteriorElement(n, {I: 1.0})
        sf = hodge_star(f)
        for J in masks_of_degree(n, n // 2):
            F = ExteriorElement(n, {J: 1.0})
            form = split.pair(sf, hodge_star(F)) - split.pair(f, F)
            if pullback(plane.basis, form).max_abs() > tol * scale:
                return False
    return True


def coisotropic_check(plane: PlaneWithStructure, tol: float = RANK_TOL) -> bool:
    """True when the omega-annihilator of the plane is contained in it."""
    if plane.omega is None:
        raise ValueError("no symplectic form attached")
    V = plane.basis
    Om = plane.omega
    M = V @ Om.T
    _, s, Vt = np.linalg.svd(M)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    ann = Vt[rank:]
    if ann.shape[0] == 0:
        return True
    Q = orthonormal_rows(V)
    resid = ann - (ann @ Q.T) @ Q
    return bool(np.abs(resid).max() <= tol * max(1.0, np.abs(ann).max()))


def bitype_mm_check(plane: PlaneWithStructure, tol: float = RANK_TOL) -> bool:
    """True when the plane is invariant under the attached complex structure
    (for a middle-dimensional tangent plane: the associated current has pure
    middle bitype exactly in this case)."""
    if plane.jmat is None:
        raise ValueError("no complex structure attached")
    Q = orthonormal_rows(plane.basis)
    JQ = Q @ plane.jmat.T
    resid = JQ - (JQ @ Q.T) @ Q
    return bool(np.abs(resid).max() <= tol)


def extended_pair_check(plane: PlaneWithStructure, tol: float = RANK_TOL) -> bool:
    """For the attached companion form Q: the pullback to the plane of
    Q ^ (f ^ F - star f ^ star F) vanishes for all middle-degree basis pairs
    (f, F).  The plane may carry leading family-parameter slots; factor forms
    are lifted past them."""
    if plane.companion is None:
        raise ValueError("no companion form attached")
    n = plane.factor_dim
    if n is None or n % 2:
        raise ValueError("needs a correspondence plane over an even-dimensional factor")
    b = plane.base_dims
    N = plane.ambient_dim
    Qf = plane.companion
    if Qf.dim != N:
        raise ValueError("companion form lives on the wrong space")
    split = ProductSplit(n)
    scale = max(1.0, float(np.abs(plane.basis).max()) ** plane.basis.shape[0])
    scale *= max(1.0, Qf.max_abs())
    for I in masks_of_degree(n, n // 2):
        f = ExteriorElement(n, {I: 1.0})
        sf = hodge_star(f)
        for J in masks_of_degree(n, n // 2):
            F = ExteriorElement(n, {J: 1.0})
            bracket = split.pair(f, F) - split.pair(sf, hodge_star(F))
            lifted = ExteriorElement(N, {k << b: v for k, v in bracket.coeffs.items()})
            if pullback(plane.basis, wedge(Qf, lifted)).max_abs() > tol * scale:
                return False
    return True


def rotation_angles(k) -> np.ndarray:
    """Rotation angles of k in SO(2m), read in a positively oriented real
    Schur frame (det +1), so the angle list is well defined up to an even
    number of sign flips.  Real eigenvalues come out as angle 0 or pi."""
    k = np.asarray(k, dtype=float)
    n = k.shape[0]
    if n % 2:
        raise ValueError("even dimension required")
    if not np.allclose(k.T @ k, np.eye(n), atol=1e-10):
        raise ValueError("matrix is not orthogonal")
    if np.linalg.det(k) < 0:
        raise ValueError("matrix is orientation-reversing")
    T, Z = scipy.linalg.schur(k, output="real")
    if np.linalg.det(Z) < 0:
        # flip the frame of the final slot; adjusts a block angle's sign
        Z = Z.copy()
        Z[:, -1] = -Z[:, -1]
        T = Z.T @ k @ Z
    angles = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-12:
            angles.append(math.atan2(T[i + 1, i], T[i, i]))
            i += 2
        else:
            # real eigenvalue +-1; pair equal ones into angle 0 / pi blocks
            angles.append(0.0 if T[i, i] > 0 else math.pi)
            i += 1
    # 1x1 real blocks come in equal pairs for an SO matrix; merge them
    merged = []
    pending = {}
    for a in angles:
        if a in (0.0, math.pi):
            if pending.get(a):
                pending[a] = False
                merged.append(a)
            else:
                pending[a] = True
        else:
            merged.append(a)
    return np.asarray(merged)
