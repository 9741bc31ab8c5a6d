"""Perturbed radial spinors and probability densities.

At an accepted root E the level matrix M(E) is singular; its null vector is
the spinor at the outer face of the shell, expressed in the rotated frame in
which the Green matrix lives (columns of G are [[0,1],[-1,0]]-rotated radial
solutions).  The spinor anywhere follows in closed form from the Green
matrix acting on the spinor jump across the shell,

    psi(r) = G(r, R; E) [[0,1],[-1,0]] (Rot(lam) - I) x,      x = null(M(E))

after which (f, g) = [[0,-1],[1,0]] psi undoes the frame rotation.  The two
one-sided limits at the shell satisfy  phi(R-) = Rot(lam) phi(R+)  with
Rot(lam) = [[cos lam, sin lam], [-sin lam, cos lam]]; away from the shell
(f, g) solves the homogeneous radial system.  The overall sign is fixed by
f(R+) >= 0 (g(R+) > 0 when f vanishes) and |phi|^2 = f^2 + g^2 integrates
to one by trapezoid on the profile grid, which carries the shell radius
twice so the density jump is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateNullSpaceError, TransparentCaseError
from .green import IKAPPA, OscillatorParams, Side, green_matrix
from .levels import ShellParams, level_matrix

_I2 = np.eye(2)


class RadialSpinor(NamedTuple):
    """Upper and lower radial components (f, g) at one point."""

    f: float
    g: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f, self.g])

    @property
    def density(self) -> float:
        return self.f * self.f + self.g * self.g


@dataclass
class DensityProfile:
    """|phi(r)|^2 on a radial grid, trapezoid-normalized to one.

    The shell radius appears twice in the grid (side_flags -1 then +1) to
    carry both one-sided limits of the discontinuous density.
    """

    grid: np.ndarray
    density: np.ndarray
    energy: float
    normalization: float
    shell_radius: float
    side_flags: np.ndarray


def _rotation(lam: float) -> np.ndarray:
    c, s = math.cos(lam), math.sin(lam)
    return np.array([[c, s], [-s, c]])


def _unrotate(psi: np.ndarray) -> np.ndarray:
    # inverse of the [[0,1],[-1,0]] frame rotation
    return np.array([-psi[1], psi[0]])


def _null_direction(osc: OscillatorParams, shell: ShellParams, energy: float,
                    sv_ratio_tol: float = 1e-6) -> np.ndarray:
    if shell.transparent:
        raise TransparentCaseError(
            "coupling is a multiple of pi; the shell supports no perturbed "
            "eigenvector")
    mat = level_matrix(osc, shell, energy)
    _, svals, vt = np.linalg.svd(mat)
    scale = max(1.0, float(np.abs(mat).max()))
    if svals[0] < 1e-8 * scale:
        raise DegenerateNullSpaceError(
            f"level matrix doubly degenerate at E = {energy}: "
            f"singular values {svals}")
    if svals[1] > sv_ratio_tol * svals[0]:
        raise ValueError(
            f"E = {energy} is not a root of the level condition "
            f"(singular values {svals})")
    x = vt[1]
    # sign convention on the physical (f, g): f(R+) >= 0, g(R+) > 0 if f ~ 0
    phi = _unrotate(x)
    if abs(phi[0]) > 1e-12 * np.linalg.norm(phi):
        if phi[0] < 0.0:
            x = -x
    elif phi[1] < 0.0:
        x = -x
    return x


def _reconstructor(osc: OscillatorParams, shell: ShellParams, energy: float
                   ) -> Callable[[float, Side], RadialSpinor]:
    """One-time null-vector solve, then pointwise closed-form evaluation."""
    x = _null_direction(osc, shell, energy)
    jump_rec = IKAPPA @ ((_rotation(shell.coupling) - _I2) @ x)

    def at(r: float, side: Side = Side.ABOVE) -> RadialSpinor:
        if r < 0.0:
            raise ValueError("radial coordinate must be nonnegative")
        if r == 0.0:
            return RadialSpinor(0.0, 0.0)
        g = green_matrix(osc, energy, r, shell.radius, side)
        return RadialSpinor(*_unrotate(g @ jump_rec))

    return at


def boundary_spinor(osc: OscillatorParams, shell: ShellParams, energy: float
                    ) -> tuple[RadialSpinor, RadialSpinor]:
    """Spinor just outside the shell (unit norm, sign-fixed) and the jump
    phi(R+) - phi(R-) = (I - Rot(lam)) phi(R+)."""
    x = _null_direction(osc, shell, energy)
    phi_above = _unrotate(x)
    jump = (_I2 - _rotation(shell.coupling)) @ phi_above
    return RadialSpinor(*phi_above), RadialSpinor(*jump)


def radial_spinor(osc: OscillatorParams, shell: ShellParams, energy: float,
                  r: float, side: Side = Side.ABOVE) -> RadialSpinor:
    """(f, g) at radius r for an accepted root; at r == R the requested
    one-sided limit is taken (ABOVE by default)."""
    return _reconstructor(osc, shell, energy)(r, side)


def density_profile(osc: OscillatorParams, shell: ShellParams, energy: float,
                    r_max: float | None = None, n_points: int = 2000
                    ) -> DensityProfile:
    """|phi|^2 sampled on a uniform grid with a doubled point at the shell,
    normalized to unit integral."""
    if n_points < 100:
        raise ValueError("n_points must be at least 100")
    if r_max is None:
        r_max = default_r_max(osc, shell, energy)
    if not r_max > shell.radius:
        raise ValueError("r_max must exceed the shell radius")
    at = _reconstructor(osc, shell, energy)
    base = np.linspace(0.0, r_max, n_points)
    below = base[base < shell.radius]
    above = base[base > shell.radius]
    grid = np.concatenate([below, [shell.radius, shell.radius], above])
    flags = np.zeros(len(grid), dtype=int)
    flags[len(below)] = -1
    flags[len(below) + 1] = +1
    dens = np.empty(len(grid))
    for i, (r, fl) in enumerate(zip(grid, flags)):
        side = Side.BELOW if fl < 0 else Side.ABOVE
        dens[i] = at(float(r), side).density
    raw = float(np.trapezoid(dens, grid))
    if not raw > 0.0:
        raise ValueError("density vanished on the whole grid")
    dens /= raw
    return DensityProfile(grid=grid, density=dens, energy=energy,
                          normalization=raw, shell_radius=shell.radius,
                          side_flags=flags)


def default_r_max(osc: OscillatorParams, shell: ShellParams,
                  energy: float) -> float:
    """Covers the Gaussian-like tail of the decaying Whittaker factor."""
    return max(4.0 * shell.radius,
               3.0 * (abs(energy) / osc.m + 2.0)
               / math.sqrt(osc.m * osc.omega))
