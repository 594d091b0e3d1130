"""Clifford/half-spin machinery used as the independent oracle for the
half-spin density closed form.

Gamma matrices are built from Pauli blocks by Kronecker products:

    gamma_{2j-1} = sz^{(j-1)} (x) sx (x) I^{(m-j)}
    gamma_{2j}   = sz^{(j-1)} (x) sy (x) I^{(m-j)}

They are Hermitian, square to +1, and anticommute pairwise.  The chirality
element tau = i^m gamma_1 ... gamma_{2m} squares to the identity and is
traceless.  ``spin_lift`` realizes a block rotation upstairs:
conjugation by it rotates the gamma vector by the rotation itself, and a
full turn in one block lifts to -identity (the double cover)."""
from __future__ import annotations

import functools
import math

import numpy as np

from .errors import NonTransverse
from .invariants import (block_rotation, density, second_factor_volume,
                         trace_configuration)

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def build_gammas(m: int) -> list[np.ndarray]:
    """The 2m gamma matrices on C^{2^m}, 1 <= m <= 4."""
    if not 1 <= m <= 4:
        raise ValueError("m must be between 1 and 4")
    out = []
    for j in range(m):
        prefix = [_SZ] * j
        suffix = [_I2] * (m - j - 1)
        for s in (_SX, _SY):
            out.append(functools.reduce(np.kron, prefix + [s] + suffix))
    return out


class GammaRep:
    """Gamma matrices for R^{2m} plus the derived chirality element."""

    def __init__(self, m: int):
        self.m = m
        self.gammas = build_gammas(m)
        tau = np.eye(2 ** m, dtype=complex) * (1j) ** m
        for g in self.gammas:
            tau = tau @ g
        self.tau = tau

    def gamma_of_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = np.zeros((2 ** self.m, 2 ** self.m), dtype=complex)
        for i, g in enumerate(self.gammas):
            out = out + v[i] * g
        return out


def spin_lift(rep: GammaRep, angles) -> np.ndarray:
    """Lift of the block rotation with the given angles:
    prod_j (cos(t_j/2) I + sin(t_j/2) gamma_{2j-1} gamma_{2j})."""
    angles = np.asarray(angles, dtype=float)
    if len(angles) != rep.m:
        raise ValueError("need one angle per block")
    out = np.eye(2 ** rep.m, dtype=complex)
    for j, t in enumerate(angles):
        g1, g2 = rep.gammas[2 * j], rep.gammas[2 * j + 1]
        out = out @ (math.cos(t / 2.0) * np.eye(2 ** rep.m) + math.sin(t / 2.0) * (g1 @ g2))
    return out


def spinor_symbol(rep: GammaRep, scale: float, angles) -> np.ndarray:
    """Endomorphism coefficient scale^{(1-2m)/2} * spin_lift carried by the
    half-spin pairing of the conformal map scale * rotation."""
    return scale ** ((1 - 2 * rep.m) / 2.0) * spin_lift(rep, angles)


def spin_density_oracle(scale: float, angles) -> complex:
    """Independent evaluation of the half-spin density: the trace of
    chirality * spinor_symbol times the definitional density of the
    second-factor volume form at the transpose-graph configuration of
    scale * rotation."""
    angles = np.asarray(angles, dtype=float)
    m = len(angles)
    rep = GammaRep(m)
    tr = complex(np.trace(rep.tau @ spinor_symbol(rep, scale, angles)))
    A = scale * block_rotation(angles)
    if abs(np.linalg.det(np.eye(2 * m) - A)) < 1e-300:
        raise NonTransverse("graph of the conformal map meets the diagonal")
    d = density(second_factor_volume(2 * m), trace_configuration(A))
    return tr * complex(d)
