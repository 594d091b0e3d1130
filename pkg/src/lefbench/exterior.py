"""Sparse exterior algebra over R^N (N <= 16) with complex coefficients.

Conventions, fixed once here and relied on everywhere else:

* Basis covectors mu^1 .. mu^N are orthonormal; an ExteriorElement stores
  complex coefficients indexed by subsets of {1..N} (bitmask 1 << (i-1)
  internally, sorted 1-based tuples at the interface).
* ``hodge_star`` uses the orientation mu^1 ^ ... ^ mu^N:
  star(mu^I) = sgn * mu^{I^c} where mu^I ^ mu^{I^c} = sgn * dvol.
* ``inner`` is Hermitian and conjugate-linear in its SECOND argument.
* ``pullback(L, a)``: L is a K x N matrix whose ROWS are the images of the
  source basis vectors, i.e. the linear map sends the k-th source basis
  vector to the k-th row.  (pullback(L, a))_I = sum_J a_J det(L[I, J]).
* A ``ComplexFrame`` on R^{2m} pairs slots (2j-1, 2j) into
  eta^j = (mu^{2j-1} + i mu^{2j}) / sqrt(2), an orthonormal (1,0)-frame.
  The associated complex structure J maps e_{2j-1} -> e_{2j}, and
  j_action(alpha) = alpha o J, so j_action(eta^j) = i eta^j.
* A ``ProductSplit`` views R^{2n} as a product of two R^n factors occupying
  slots 1..n and n+1..2n.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

COEFF_CHOP = 1e-300  # drop exact-zero products only; never rounds real data

MAX_DIM = 16


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_indices(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _indices_to_mask(indices) -> int:
    mask = 0
    for i in indices:
        if not 1 <= i <= MAX_DIM:
            raise ValueError("index %r out of range" % (i,))
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError("repeated index %r" % (i,))
        mask |= bit
    return mask


def merge_sign(p: int, q: int) -> int:
    """Sign of sorting the concatenation (p ascending)(q ascending)."""
    sign = 1
    for j in range(q.bit_length()):
        if q >> j & 1 and _popcount(p >> (j + 1)) & 1:
            sign = -sign
    return sign


class ExteriorElement:
    """A sparse element of the complex exterior algebra of R^dim."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict | None = None):
        if not 0 < dim <= MAX_DIM:
            raise ValueError("dimension must be in 1..%d" % MAX_DIM)
        self.dim = dim
        self.coeffs = {} if coeffs is None else dict(coeffs)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_indices(cls, dim: int, table: dict) -> "ExteriorElement":
        """Build from {sorted 1-based index tuple: coefficient}."""
        coeffs = {}
        for indices, c in table.items():
            if tuple(sorted(indices)) != tuple(indices):
                raise ValueError("indices %r are not sorted" % (indices,))
            coeffs[_indices_to_mask(indices)] = complex(c)
        return cls(dim, coeffs)

    def as_indices(self) -> dict:
        return {tuple(i + 1 for i in _mask_indices(k)): v
                for k, v in sorted(self.coeffs.items())}

    # -- linear structure -------------------------------------------------
    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return ExteriorElement(self.dim, out)

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "ExteriorElement":
        s = complex(scalar)
        return ExteriorElement(self.dim, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "ExteriorElement":
        return (-1.0) * self

    # -- inspection -------------------------------------------------------
    def coefficient(self, indices) -> complex:
        return self.coeffs.get(_indices_to_mask(indices), 0.0)

    def degrees(self) -> set:
        return {_popcount(k) for k, v in self.coeffs.items() if v != 0}

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def chop(self, tol: float) -> "ExteriorElement":
        return ExteriorElement(self.dim,
                               {k: v for k, v in self.coeffs.items() if abs(v) > tol})

    def __repr__(self):
        return "ExteriorElement(%d, %r)" % (self.dim, self.as_indices())


def unit_scalar(dim: int) -> ExteriorElement:
    return ExteriorElement(dim, {0: 1.0})


def volume_element(dim: int) -> ExteriorElement:
    return ExteriorElement(dim, {(1 << dim) - 1: 1.0})


def basis_covector(dim: int, i: int) -> ExteriorElement:
    """mu^i (1-based)."""
    return ExteriorElement(dim, {_indices_to_mask((i,)): 1.0})


def masks_of_degree(dim: int, d: int):
    for comb in itertools.combinations(range(dim), d):
        m = 0
        for c in comb:
            m |= 1 << c
        yield m


def basis_elements(dim: int, degree: int):
    for m in masks_of_degree(dim, degree):
        yield ExteriorElement(dim, {m: 1.0})


# -- multiplication, star, inner ------------------------------------------

def wedge(a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    out = {}
    for p, ca in a.coeffs.items():
        for q, cb in b.coeffs.items():
            if p & q:
                continue
            k = p | q
            out[k] = out.get(k, 0.0) + merge_sign(p, q) * ca * cb
    return ExteriorElement(a.dim, {k: v for k, v in out.items() if abs(v) > COEFF_CHOP})


def wedge_list(elems) -> ExteriorElement:
    elems = list(elems)
    if not elems:
        raise ValueError("empty wedge")
    out = unit_scalar(elems[0].dim)
    for e in elems:
        out = wedge(out, e)
    return out


def hodge_star(a: ExteriorElement) -> ExteriorElement:
    full = (1 << a.dim) - 1
    out = {}
    for k, v in a.coeffs.items():
        kc = full & ~k
        out[kc] = out.get(kc, 0.0) + merge_sign(k, kc) * v
    return ExteriorElement(a.dim, out)


def conjugate(a: ExteriorElement) -> ExteriorElement:
    return ExteriorElement(a.dim, {k: np.conj(v) for k, v in a.coeffs.items()})


def inner(a: ExteriorElement, b: ExteriorElement) -> complex:
    """Hermitian inner product; conjugate-linear in the second slot."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    tot = 0.0 + 0.0j
    for k, v in a.coeffs.items():
        w = b.coeffs.get(k)
        if w is not None:
            tot += v * np.conj(w)
    return complex(tot)


def pullback(L, a: ExteriorElement) -> ExteriorElement:
    """Pull a back along the linear map whose k-th ROW of L is the image of
    the k-th source basis vector.  Shape (K, a.dim); the result lives on R^K."""
    L = np.asarray(L)
    K, N = L.shape
    if N != a.dim:
        raise ValueError("matrix maps into R^%d, element lives on R^%d" % (N, a.dim))
    if not 0 < K <= MAX_DIM:
        raise ValueError("source dimension out of range")
    out = {}
    for J, cJ in a.coeffs.items():
        cols = _mask_indices(J)
        d = len(cols)
        if d == 0:
            out[0] = out.get(0, 0.0) + cJ
            continue
        if d > K:
            continue
        sub = L[:, cols]
        for I in masks_of_degree(K, d):
            rows = _mask_indices(I)
            det = np.linalg.det(sub[rows, :])
            if abs(det) > COEFF_CHOP:
                out[I] = out.get(I, 0.0) + cJ * det
    return ExteriorElement(K, {k: v for k, v in out.items() if abs(v) > COEFF_CHOP})


def covector_of(dim: int, vector) -> ExteriorElement:
    """Metric-dual 1-form of a vector."""
    v = np.asarray(vector)
    coeffs = {}
    for i in range(dim):
        if v[i] != 0:
            coeffs[1 << i] = complex(v[i])
    return ExteriorElement(dim, coeffs)


def frame_volume_covector(rows) -> ExteriorElement:
    """Wedge of the metric-dual covectors of the given (row) vectors."""
    V = np.asarray(rows, dtype=float)
    k, N = V.shape
    out = {}
    for I in masks_of_degree(N, k):
        det = np.linalg.det(V[:, _mask_indices(I)])
        if abs(det) > COEFF_CHOP:
            out[I] = det
    return ExteriorElement(N, out)


# -- complex frames and gradings ------------------------------------------

class ComplexFrame:
    """Orthonormal (1,0)-frame eta^j = (mu^{2j-1} + i mu^{2j})/sqrt(2) on
    R^{2*pairs}.  Supplies the substitution matrices between the real and
    complex coefficient bases."""

    def __init__(self, pairs: int):
        if not 0 < 2 * pairs <= MAX_DIM:
            raise ValueError("pair count out of range")
        self.pairs = pairs
        self.dim = 2 * pairs
        N = self.dim
        r2 = math.sqrt(2.0)
        T = np.zeros((N, N), dtype=complex)
        Tinv = np.zeros((N, N), dtype=complex)
        for j in range(pairs):
            a, b = 2 * j, 2 * j + 1
            # mu^a = (eta + etabar)/sqrt2, mu^b = (eta - etabar)/(i sqrt2)
            T[a, a] = 1 / r2
            T[b, a] = 1 / r2
            T[a, b] = -1j / r2
            T[b, b] = 1j / r2
            Tinv[a, a] = 1 / r2
            Tinv[b, a] = 1j / r2
            Tinv[a, b] = 1 / r2
            Tinv[b, b] = -1j / r2
        self._to = T
        self._from = Tinv

    def eta(self, j: int) -> ExteriorElement:
        """eta^j, 1-based."""
        r2 = math.sqrt(2.0)
        a, b = 2 * (j - 1), 2 * (j - 1) + 1
        return ExteriorElement(self.dim, {1 << a: 1 / r2, 1 << b: 1j / r2})

    def eta_bar(self, j: int) -> ExteriorElement:
        r2 = math.sqrt(2.0)
        a, b = 2 * (j - 1), 2 * (j - 1) + 1
        return ExteriorElement(self.dim, {1 << a: 1 / r2, 1 << b: -1j / r2})

    def to_eta_coefficients(self, a: ExteriorElement) -> ExteriorElement:
        """Re-express in the eta/etabar coefficient basis: slot 2j-1 carries
        eta^j, slot 2j carries etabar^j."""
        return pullback(self._to, a)

    def from_eta_coefficients(self, a: ExteriorElement) -> ExteriorElement:
        return pullback(self._from, a)

    def structure_matrix(self) -> np.ndarray:
        """J with J e_{2j-1} = e_{2j}, J e_{2j} = -e_{2j-1}."""
        N = self.dim
        J = np.zeros((N, N))
        for j in range(self.pairs):
            J[2 * j, 2 * j + 1] = 1.0
            J[2 * j + 1, 2 * j] = -1.0
        return J

    def kaehler_form(self) -> ExteriorElement:
        """omega = sum_j mu^{2j-1} ^ mu^{2j}."""
        out = ExteriorElement(self.dim)
        for j in range(self.pairs):
            out = out + ExteriorElement(self.dim, {(1 << 2 * j) | (1 << (2 * j + 1)): 1.0})
        return out


def bitype_project(a: ExteriorElement, frame: ComplexFrame, ptype) -> ExteriorElement:
    """Component of holomorphic/antiholomorphic degree (p, q)."""
    p, q = ptype
    e = frame.to_eta_coefficients(a)
    keep = {}
    for k, v in e.coeffs.items():
        h = sum(1 for j in range(frame.pairs) if k >> (2 * j) & 1)
        ab = sum(1 for j in range(frame.pairs) if k >> (2 * j + 1) & 1)
        if (h, ab) == (p, q):
            keep[k] = v
    return frame.from_eta_coefficients(ExteriorElement(frame.dim, keep))


def multigrade_project(a: ExteriorElement, grades, factor_pairs) -> ExteriorElement:
    """Refined bitype on a product of complex factors.

    grades = (a1, b1, a2, b2, ...): holomorphic/antiholomorphic degree per
    factor; factor_pairs = complex dimensions (m1, m2, ...) occupying
    consecutive slot blocks of size 2*mi."""
    pairs = sum(factor_pairs)
    if 2 * pairs != a.dim:
        raise ValueError("factor pairs do not cover the element's slots")
    if len(grades) != 2 * len(factor_pairs):
        raise ValueError("need one (holo, antiholo) pair per factor")
    frame = ComplexFrame(pairs)
    e = frame.to_eta_coefficients(a)
    keep = {}
    for k, v in e.coeffs.items():
        off = 0
        ok = True
        for f, mf in enumerate(factor_pairs):
            h = ab = 0
            for j in range(mf):
                if k >> (off + 2 * j) & 1:
                    h += 1
                if k >> (off + 2 * j + 1) & 1:
                    ab += 1
            if (h, ab) != (grades[2 * f], grades[2 * f + 1]):
                ok = False
                break
            off += 2 * mf
        if ok:
            keep[k] = v
    return frame.from_eta_coefficients(ExteriorElement(frame.dim, keep))


def lefschetz_L(a: ExteriorElement, omega: ExteriorElement) -> ExteriorElement:
    """Exterior multiplication by the 2-form omega."""
    return wedge(omega, a)


def j_action(a: ExteriorElement, frame: ComplexFrame) -> ExteriorElement:
    """alpha -> alpha o J for the frame's complex structure;
    j_action(eta^j) = i eta^j."""
    return pullback(frame.structure_matrix(), a)


def j_action_inverse(a: ExteriorElement, frame: ComplexFrame) -> ExteriorElement:
    """alpha -> alpha o J^{-1}; equals (-1)^degree * j_action on pure degrees."""
    return pullback(-frame.structure_matrix(), a)


class ProductSplit:
    """R^{2n} viewed as a product of two R^n factors: slots 1..n and n+1..2n."""

    def __init__(self, n: int):
        if not 0 < 2 * n <= MAX_DIM:
            raise ValueError("factor dimension out of range")
        self.n = n
        self.dim = 2 * n

    def lift_first(self, a: ExteriorElement) -> ExteriorElement:
        """Pull a form on the factor back along the first projection."""
        if a.dim != self.n:
            raise ValueError("expected a form on the factor")
        return ExteriorElement(self.dim, dict(a.coeffs))

    def lift_second(self, a: ExteriorElement) -> ExteriorElement:
        if a.dim != self.n:
            raise ValueError("expected a form on the factor")
        return ExteriorElement(self.dim, {k << self.n: v for k, v in a.coeffs.items()})

    def pair(self, a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
        """lift_first(a) ^ lift_second(b)."""
        return wedge(self.lift_first(a), self.lift_second(b))
