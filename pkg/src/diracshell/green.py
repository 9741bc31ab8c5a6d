"""Radial Green matrix of the unperturbed Dirac oscillator.

The 2x2 kernel G(r, r'; E) is assembled from Whittaker-function products

    G_pp = (E + m) / (2 m w) * Gamma(a+)/Gamma(b+) *
           M_{mu+,nu+}(m w r_<^2) W_{mu+,nu+}(m w r_>^2) / sqrt(r r')
    G_mm =  same with (E - m) and the (mu-, nu-) parameters

    G_pm = 1/(E - m) * [-d/dr + kappa/r + m w r] G_mm
    G_mp = 1/(E + m) * [+d/dr + kappa/r + m w r] G_pp

with  mu_pm = ((E^2 - m^2)/(m w) - 2 kappa +- 1)/4,  nu_pm = |kappa +- 1/2|/2,
a_pm = nu_pm - mu_pm + 1/2, b_pm = 2 nu_pm + 1, and the derivative acting on
the first argument.  The 1/(2 m w) normalisation is fixed by the jump
condition  G(r+0, r; E) - G(r-0, r; E) = [[0, 1], [-1, 0]]  and was validated
against direct numerical integration of the radial system (the Whittaker
Wronskian M W' - M' W = -Gamma(b)/Gamma(a) in z = m w r^2 makes the jump come
out as exactly twice the [[0,1],[-1,0]] target without the 1/2).

Columns of G, as functions of r, satisfy the first-order system
dG/dr = [[-gamma, E + m], [-(E - m), gamma]] G; they are the
[[0,1],[-1,0]]-rotated images of radial spinors (f, g).

All Gamma and Whittaker factors combine in the log domain; each entry is
exponentiated once.  Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import PoleError, SingularPrefactorError
from .logscale import SignedLog, signed_log_sum
from .specfun import (ln_gamma, whittaker_m, whittaker_m_dz, whittaker_w,
                      whittaker_w_dz)

#: i*sigma_y as a real matrix; the Green-matrix jump across r = r'.
IKAPPA = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class OscillatorParams:
    """Mass m, frequency omega (natural units, hbar = c = 1) and the
    relativistic angular quantum number kappa (nonzero integer)."""

    m: float
    omega: float
    kappa: int

    def __post_init__(self):
        if not self.m > 0.0:
            raise ValueError(f"mass must be positive, got {self.m}")
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if int(self.kappa) != self.kappa or self.kappa == 0:
            raise ValueError(
                f"kappa must be a nonzero integer, got {self.kappa}")

    def gamma(self, r: float) -> float:
        """Radial coefficient kappa/r + m*omega*r."""
        return self.kappa / r + self.m * self.omega * r


class Side(Enum):
    """One-sided limit selector at coincident arguments r = r'."""

    ABOVE = "above"
    BELOW = "below"


class GreenParams(NamedTuple):
    mu_plus: float
    mu_minus: float
    nu_plus: float
    nu_minus: float


def green_params(osc: OscillatorParams, energy: float) -> GreenParams:
    """Whittaker indices of the two diagonal channels."""
    x = (energy * energy - osc.m * osc.m) / (osc.m * osc.omega)
    return GreenParams(
        mu_plus=0.25 * (x - 2.0 * osc.kappa + 1.0),
        mu_minus=0.25 * (x - 2.0 * osc.kappa - 1.0),
        nu_plus=0.5 * abs(osc.kappa + 0.5),
        nu_minus=0.5 * abs(osc.kappa - 0.5),
    )


def radial_system_matrix(osc: OscillatorParams, energy: float, r: float,
                         potential: float = 0.0) -> np.ndarray:
    """Coefficient matrix of d(f,g)/dr for the radial equation, with an
    optional local potential entering through the energy."""
    g = osc.gamma(r)
    ev = energy - potential
    return np.array([[g, ev - osc.m], [-(ev + osc.m), -g]])


# ---------------------------------------------------------------------------
# assembly helpers
# ---------------------------------------------------------------------------

def _branch(osc: OscillatorParams, energy: float, plus: bool):
    """(mu, nu, prefactor) for one diagonal channel, log-scaled prefactor
    (E +- m)/(2 m w) * Gamma(a)/Gamma(b)."""
    p = green_params(osc, energy)
    mu = p.mu_plus if plus else p.mu_minus
    nu = p.nu_plus if plus else p.nu_minus
    a = nu - mu + 0.5
    b = 2.0 * nu + 1.0
    la, sa = ln_gamma(a)          # PoleError here marks an unperturbed level
    lb, sb = ln_gamma(b)
    scalar = (energy + osc.m if plus else energy - osc.m) \
        / (2.0 * osc.m * osc.omega)
    pref = SignedLog.from_value(scalar) * SignedLog(la - lb, sa * sb)
    return mu, nu, pref


def _carries_w(r: float, r_prime: float, side: Side) -> bool:
    """Does the first argument r ride the (decaying) W factor?"""
    if r == r_prime:
        return side is Side.ABOVE
    return r > r_prime


def _diag_sl(osc, energy, plus, r, r_prime, side) -> SignedLog:
    mu, nu, pref = _branch(osc, energy, plus)
    mw = osc.m * osc.omega
    z_lo = mw * min(r, r_prime) ** 2
    z_hi = mw * max(r, r_prime) ** 2
    root = SignedLog(-0.5 * (math.log(r) + math.log(r_prime)), 1.0)
    return pref * whittaker_m(mu, nu, z_lo) * whittaker_w(mu, nu, z_hi) * root


def _diag_dr_sl(osc, energy, plus, r, r_prime, side) -> SignedLog:
    """d/dr (first argument) of a diagonal entry:
    d/dr [F(m w r^2)/sqrt(r)] = [2 m w r F'(z) - F(z)/(2r)] / sqrt(r)."""
    mu, nu, pref = _branch(osc, energy, plus)
    mw = osc.m * osc.omega
    z_r = mw * r * r
    z_o = mw * r_prime * r_prime
    if _carries_w(r, r_prime, side):
        f, df = whittaker_w(mu, nu, z_r), whittaker_w_dz(mu, nu, z_r)
        other = whittaker_m(mu, nu, z_o)
    else:
        f, df = whittaker_m(mu, nu, z_r), whittaker_m_dz(mu, nu, z_r)
        other = whittaker_w(mu, nu, z_o)
    bracket = signed_log_sum([
        SignedLog.from_value(2.0 * mw * r) * df,
        SignedLog.from_value(-0.5 / r) * f,
    ])
    root = SignedLog(-0.5 * (math.log(r) + math.log(r_prime)), 1.0)
    return pref * bracket * other * root


def _check_args(r: float, r_prime: float) -> None:
    if not (r > 0.0 and r_prime > 0.0):
        raise ValueError("radial arguments must be positive")


def _to_float(sl: SignedLog, what: str) -> float:
    v = sl.value
    if not math.isfinite(v):
        raise PoleError(f"{what} overflows double precision "
                        "(energy too close to an unperturbed level)")
    return v


def green_diag(osc: OscillatorParams, energy: float, r: float,
               r_prime: float) -> tuple[float, float]:
    """Diagonal entries (G_pp, G_mm); symmetric under r <-> r'."""
    _check_args(r, r_prime)
    return (
        _to_float(_diag_sl(osc, energy, True, r, r_prime, Side.ABOVE), "G_pp"),
        _to_float(_diag_sl(osc, energy, False, r, r_prime, Side.ABOVE), "G_mm"),
    )


def _check_prefactors(osc: OscillatorParams, energy: float) -> None:
    tol = 1e-12 * osc.m
    if abs(energy - osc.m) < tol or abs(energy + osc.m) < tol:
        raise SingularPrefactorError(
            f"off-diagonal prefactor 1/(E -+ m) singular at E = {energy}")


def green_offdiag(osc: OscillatorParams, energy: float, r: float,
                  r_prime: float, side: Side = Side.ABOVE
                  ) -> tuple[float, float]:
    """Off-diagonal entries (G_pm, G_mp) via the analytic r-derivative of
    the opposite diagonal channel."""
    _check_args(r, r_prime)
    _check_prefactors(osc, energy)
    gam = osc.gamma(r)
    d_mm = _diag_dr_sl(osc, energy, False, r, r_prime, side)
    v_mm = _diag_sl(osc, energy, False, r, r_prime, side)
    g_pm = signed_log_sum([-d_mm, SignedLog.from_value(gam) * v_mm])
    d_pp = _diag_dr_sl(osc, energy, True, r, r_prime, side)
    v_pp = _diag_sl(osc, energy, True, r, r_prime, side)
    g_mp = signed_log_sum([d_pp, SignedLog.from_value(gam) * v_pp])
    return (
        _to_float(g_pm, "G_pm") / (energy - osc.m),
        _to_float(g_mp, "G_mp") / (energy + osc.m),
    )


def green_matrix(osc: OscillatorParams, energy: float, r: float,
                 r_prime: float, side: Side = Side.ABOVE) -> np.ndarray:
    """Full 2x2 Green matrix; `side` resolves the one-sided limit when
    r == r_prime (ABOVE treats r as r_> so the W factor carries it)."""
    g_pp, g_mm = green_diag(osc, energy, r, r_prime)
    g_pm, g_mp = green_offdiag(osc, energy, r, r_prime, side)
    return np.array([[g_pp, g_pm], [g_mp, g_mm]])
