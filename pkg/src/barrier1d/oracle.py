"""Exact transfer-matrix solver for piecewise-constant potentials.

This is the reference solver every other scattering routine in the package
is validated against.  Conventions:

* incident wave exp(i k_left x) with x = 0 at the left edge of the first
  segment;
* the left-incident reflection R is referenced at x = 0 and the
  right-incident reflection R_rev at x = extent (local edge referencing);
* transmission amplitudes are referenced across the full extent: the
  transmitted wave is T * exp(i k_right (x - extent)), so a free region of
  length X has T = exp(i k X).

With the real-valued (psi, psi') transfer matrix M accumulated over the
slabs (see _kernels), the amplitude matrix is C_r^-1 M C_l with
C(k) = [[1, 1], [ik, -ik]], and

    T     = (k_left / k_right) / M_amp[1,1]        (left incident)
    R     = -M_amp[1,0] / M_amp[1,1]
    T_rev = 1 / M_amp[1,1]                          (right incident)
    R_rev =  M_amp[0,1] / M_amp[1,1]

Interior slabs may be evanescent or sit exactly at a turning point
(q^2 = 0); the slab entries degrade to the linear solution there.  A log
scale factor keeps arbitrarily opaque stacks finite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import _transfer_product
from .potential import Potential

__all__ = ["ScatterData", "ConditioningError", "solve_exact", "transmittance", "free_data"]


class ConditioningError(RuntimeError):
    """Raised when the slab product degenerates despite log scaling."""


@dataclass(frozen=True)
class ScatterData:
    """The four complex scattering coefficients of a barrier at fixed energy.

    ``T``/``R`` describe a wave incident from the left, ``T_rev``/``R_rev``
    one incident from the right.  ``extent`` is the barrier length the
    transmission phase is referenced across; ``loss`` is the flux deficit
    W in |T|^2 + |R|^2 = 1 - W (0 for any unitary solve).
    """

    T: complex
    R: complex
    T_rev: complex
    R_rev: complex
    k_left: float
    k_right: float
    extent: float = 0.0
    loss: float = 0.0

    @property
    def D(self) -> float:
        """Flux transmittance (k_right/k_left)|T|^2."""
        return (self.k_right / self.k_left) * abs(self.T) ** 2

    def flux_defect(self) -> float:
        """1 - (k_right/k_left)|T|^2 - |R|^2; 0 for a lossless barrier."""
        return 1.0 - self.D - abs(self.R) ** 2

    def reversed(self) -> "ScatterData":
        return replace(self, T=self.T_rev, R=self.R_rev, T_rev=self.T,
                       R_rev=self.R, k_left=self.k_right, k_right=self.k_left)


def transmittance(s: ScatterData) -> float:
    """Energy transmittance D = (k_right/k_left) |T|^2 (equals |T|^2 for
    matched media)."""
    return s.D


def free_data(k: float, length: float = 0.0) -> ScatterData:
    """Scattering data of a stretch of free medium (identity for length 0)."""
    ph = cmath.exp(1j * k * length)
    return ScatterData(T=ph, R=0.0 + 0.0j, T_rev=ph, R_rev=0.0 + 0.0j,
                       k_left=k, k_right=k, extent=length)


def _amplitude_m(m11, m12, m21, m22, k_l, k_r):
    """Convert the real (psi, psi') matrix to the amplitude basis."""
    p = m11 + (k_l / k_r) * m22
    q = m11 - (k_l / k_r) * m22
    u = k_l * m12 - m21 / k_r
    v = k_l * m12 + m21 / k_r
    a11 = 0.5 * (p + 1j * u)
    a12 = 0.5 * (q - 1j * v)
    a21 = 0.5 * (q + 1j * v)
    a22 = 0.5 * (p - 1j * u)
    return a11, a12, a21, a22


def solve_exact(p: Potential, E: float, n_slab: int = 2048) -> ScatterData:
    """Exact scattering coefficients of a piecewise potential at energy E.

    Non-constant segments are pre-discretised into ``n_slab`` constant
    slabs each (midpoint sampled).  Both media must be open channels
    (E above both floors).
    """
    if not (E > p.v_left and E > p.v_right):
        raise ValueError(f"E = {E} must lie above both media floors "
                         f"({p.v_left}, {p.v_right})")
    k_l = math.sqrt(E - p.v_left)
    k_r = math.sqrt(E - p.v_right)
    widths, heights = p.as_slabs(n_slab)
    if widths.size:
        m11, m12, m21, m22, log_scale = _transfer_product(widths, E - heights)
    else:
        m11, m12, m21, m22, log_scale = 1.0, 0.0, 0.0, 1.0, 0.0
    a11, a12, a21, a22 = _amplitude_m(m11, m12, m21, m22, k_l, k_r)
    if not (np.isfinite(a22) and abs(a22) > 0.0):
        raise ConditioningError(
            "slab product lost conditioning (very wide/high barrier); "
            "work with log-scaled quantities or split the potential")
    scale = math.exp(-log_scale) if log_scale < 700.0 else 0.0
    T = (k_l / k_r) * scale / a22
    T_rev = scale / a22
    R = -a21 / a22
    R_rev = a12 / a22
    return ScatterData(T=T, R=R, T_rev=T_rev, R_rev=R_rev,
                       k_left=k_l, k_right=k_r, extent=p.extent)
