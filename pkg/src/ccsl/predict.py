"""Measurable collapse-noise signatures.

* dns_ccsl      force-noise PSD hbar^2 eta f~(w), N^2 s
* dns_total     displacement PSD of a damped thermal oscillator plus the
                collapse force term (high-temperature form), m^2 s
* xray_rate     spontaneous photon emission rate density dGamma/dw
* lambda_eff    effective collapse rate driving bulk (phonon) heating
* heating_rate  energy gain per unit mass, W/kg
* cold_atom_diffusion  excess position variance of a free cloud, m^2

All operations vanish identically at lam = 0 and are homogeneous of degree
one in lam.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx as _erfcx

from .core import CONSTANTS, CollapseParams, validate_params
from .diffusion import eta as _eta
from .diffusion import DEFAULT_TOL
from .errors import (NonPositiveFrequency, QuadratureNotConverged,
                     UnsupportedDispersion, ValidationError)
from .geometry import MassDistribution
from .noise import NoiseSpec, spectrum
from .quadrature import integrate, merge_edges

_SQRT_PI = math.sqrt(math.pi)


# --- experiment-side value types ----------------------------------------------

@dataclass(frozen=True)
class MechanicalOscillator:
    """Trapped, damped oscillator in a thermal bath.

    gamma_m may be omitted when only force-noise (not displacement) spectra
    are needed.
    """

    mass: float                 # kg
    omega_m: float              # rad/s
    temperature: float          # K
    gamma_m: float | None = None  # s^-1

    def __post_init__(self):
        for name in ("mass", "omega_m", "temperature"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"oscillator.{name}", "must be > 0")
        if self.gamma_m is not None:
            if not (self.gamma_m > 0 and math.isfinite(self.gamma_m)):
                raise ValidationError("oscillator.gamma_m", "must be > 0")
            if self.gamma_m >= self.omega_m:
                warnings.warn("oscillator is overdamped (gamma_m >= omega_m); "
                              "resonant formulas may not apply", stacklevel=2)


@dataclass(frozen=True)
class FullSineDispersion:
    """Nearest-neighbour monoatomic-lattice dispersion
    w_L(q)^2 = (4 C / m_A) sin^2(q a / 2)."""

    force_constant: float  # N/m
    atom_mass: float       # kg
    plane_spacing: float   # m

    def sound_speed(self) -> float:
        return self.plane_spacing * math.sqrt(self.force_constant / self.atom_mass)


@dataclass(frozen=True)
class PhononModel:
    """Longitudinal phonon branch: linear (dispersion=None, w_L = v_s q) or
    the full sine form. When both are given they must agree at small q."""

    v_s: float  # m/s
    dispersion: FullSineDispersion | None = None

    def __post_init__(self):
        if not (self.v_s > 0 and math.isfinite(self.v_s)):
            raise ValidationError("phonon.v_s", "must be > 0")
        if self.dispersion is not None:
            for name in ("force_constant", "atom_mass", "plane_spacing"):
                v = getattr(self.dispersion, name)
                if not (v > 0 and math.isfinite(v)):
                    raise ValidationError(f"phonon.{name}", "must be > 0")
            if abs(self.dispersion.sound_speed() / self.v_s - 1.0) > 0.01:
                raise ValidationError(
                    "phonon.v_s", "inconsistent with a sqrt(C/m_A) beyond 1%")

    def omega_l(self, q):
        q = np.asarray(q, dtype=float)
        if self.dispersion is None:
            return self.v_s * np.abs(q)
        disp = self.dispersion
        wmax = 2.0 * math.sqrt(disp.force_constant / disp.atom_mass)
        return wmax * np.abs(np.sin(0.5 * np.abs(q) * disp.plane_spacing))


@dataclass(frozen=True)
class ColdAtomDescriptor:
    """Free-falling atom cloud: nucleon count A per atom, single-atom mass,
    and the ballistic expansion time."""

    mass_number: float     # dimensionless A
    atom_mass: float       # kg
    expansion_time: float  # s

    def __post_init__(self):
        for name in ("mass_number", "atom_mass"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"coldatom.{name}", "must be > 0")
        if not (self.expansion_time >= 0 and math.isfinite(self.expansion_time)):
            raise ValidationError("coldatom.expansion_time", "must be >= 0")


# --- optomechanical spectra ----------------------------------------------------

def dns_ccsl(d: MassDistribution, p: CollapseParams, n: NoiseSpec, omega,
             tol: float = DEFAULT_TOL):
    """Collapse contribution to the force-noise PSD, N^2 s:
    S(w) = hbar^2 eta f~(w). Constant in w for white noise."""
    validate_params(p)
    e = _eta(d, p, tol).value
    return CONSTANTS.hbar**2 * e * spectrum(n, omega)


def dns_total(osc: MechanicalOscillator, d: MassDistribution, p: CollapseParams,
              n: NoiseSpec, omega, tol: float = DEFAULT_TOL):
    """Displacement PSD, m^2 s, in the high-temperature approximation:

    S(w) = [2 m gamma kB T + S_ccsl(w)] / (m^2 [(wm^2-w^2)^2 + gamma^2 w^2])

    Valid for hbar w << kB T (not checked here).
    """
    if osc.gamma_m is None:
        raise ValidationError("oscillator.gamma_m", "required for displacement spectra")
    omega = np.asarray(omega, dtype=float)
    num = (2.0 * osc.mass * osc.gamma_m * CONSTANTS.kB * osc.temperature
           + dns_ccsl(d, p, n, omega, tol))
    den = osc.mass**2 * ((osc.omega_m**2 - omega**2) ** 2
                         + osc.gamma_m**2 * omega**2)
    out = num / den
    return out if out.ndim else float(out)


# --- X-ray emission -------------------------------------------------------------

def xray_rate(p: CollapseParams, n: NoiseSpec, omega, tol: float = DEFAULT_TOL):
    """Photon emission rate density dGamma/dw at angular frequency omega:

    dGamma/dw = e^2 hbar eta / (2 pi^2 eps0 c^3 me^2 w) * f~(w),

    with the point-electron eta = lam me^2/(2 m0^2 rc^2)."""
    validate_params(p)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0) or not np.all(np.isfinite(omega)):
        raise NonPositiveFrequency("xray_rate requires omega > 0")
    c = CONSTANTS
    eta_e = p.lam * c.me**2 / (2.0 * c.m0**2 * p.rc**2)
    pref = c.e_charge**2 * c.hbar * eta_e / (2.0 * math.pi**2 * c.eps0
                                             * c.c_light**3 * c.me**2)
    out = pref / omega * spectrum(n, omega)
    return out if out.ndim else float(out)


def normalized_xray_rate(p: CollapseParams, n: NoiseSpec, omega):
    """The detector-side combination 4 pi^2 eps0 c^3 m0^2 w (dGamma/dw)/(e^2 hbar),
    which reduces to lam f~(w) / rc^2 (units s^-1 m^-2)."""
    validate_params(p)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0) or not np.all(np.isfinite(omega)):
        raise NonPositiveFrequency("normalized_xray_rate requires omega > 0")
    out = np.asarray(p.lam * spectrum(n, omega) / p.rc**2)
    return out if out.ndim else float(out)


# --- phonon heating --------------------------------------------------------------

_BRACKET_SWITCH = 20.0


def _phonon_bracket(x: float) -> float:
    """[1/2 - x^2 + sqrt(pi) x^3 e^{x^2} erfc(x)] evaluated without overflow
    or cancellation: direct scaled-erfc form below x = 20, asymptotic series
    3/(4x^2) - 15/(8x^4) + ... above (direct subtraction loses ~x^4 eps)."""
    if x < _BRACKET_SWITCH:
        return 0.5 - x * x + _SQRT_PI * x**3 * float(_erfcx(x))
    inv2 = 1.0 / (x * x)
    total = 0.0
    term = 0.75 * inv2  # n = 1: 3/(4 x^2)
    n = 1
    while abs(term) > 1e-18 * abs(total) + 5e-324 and n < 60:
        total += term
        n += 1
        term *= -(2 * n + 1) * 0.5 * inv2
    return total


def lambda_eff_closed(p: CollapseParams, n: NoiseSpec, ph: PhononModel) -> float:
    """Effective collapse rate for linear dispersion:

    lam_eff = (4 lam rc^2 Wc^2 / 3 v_s^2) [1/2 - x^2 + sqrt(pi) x^3 e^{x^2} erfc(x)],
    x = rc Wc / v_s. Equals lam for white noise.
    """
    validate_params(p)
    if ph.dispersion is not None:
        raise UnsupportedDispersion("closed form exists for linear dispersion only")
    if n.is_white:
        return p.lam
    x = p.rc * n.omega_c / ph.v_s
    return p.lam * (4.0 * x * x / 3.0) * _phonon_bracket(x)


def lambda_eff_quad(p: CollapseParams, n: NoiseSpec, ph: PhononModel,
                    tol: float = DEFAULT_TOL) -> float:
    """lam_eff by radial quadrature of the phonon-sampled noise spectrum:

    lam_eff = (8 lam / (3 sqrt(pi))) Int_0^inf y^4 e^{-y^2} f~(w_L(y/rc)) dy

    Supports both dispersion forms; matches lambda_eff_closed for the linear
    one and returns lam (up to tol) for white noise."""
    validate_params(p)
    if not (0.0 < tol < 1e-2):
        raise ValueError(f"tol must lie in (0, 1e-2), got {tol!r}")
    if p.lam == 0.0:
        return 0.0
    rc = p.rc
    knee = []
    if not n.is_white:
        if ph.dispersion is None:
            y_knee = rc * n.omega_c / ph.v_s  # where w_L = Wc
            knee = y_knee * np.array([1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0])
        else:
            a = ph.dispersion.plane_spacing
            period = math.pi * rc / a
            if 40.0 / period > 20000:
                raise QuadratureNotConverged(
                    f"dispersion oscillations too fine: rc/a = {rc / a:.3e}")
            if period < 40.0:
                knee = period * np.arange(1, int(40.0 / period) + 1)
    edges = merge_edges(0.0, 40.0, np.linspace(0.0, 8.0, 17),
                        np.linspace(9.0, 40.0, 8), knee)
    f = lambda y: y**4 * np.exp(-(y * y)) * spectrum(n, ph.omega_l(y / rc))
    res = integrate(f, edges, rel_tol=0.1 * tol)
    return p.lam * (8.0 / (3.0 * _SQRT_PI)) * res.value


def heating_rate(p: CollapseParams, n: NoiseSpec, ph: PhononModel,
                 tol: float = DEFAULT_TOL) -> float:
    """Bulk energy gain rate per unit mass, W/kg:
    dE/(dt dM) = (3/4) (hbar^2 / rc^2 m0^2) lam_eff."""
    validate_params(p)
    if ph.dispersion is None:
        leff = lambda_eff_closed(p, n, ph)
    else:
        leff = lambda_eff_quad(p, n, ph, tol)
    c = CONSTANTS
    return 0.75 * c.hbar**2 / (p.rc**2 * c.m0**2) * leff


# --- cold atoms -------------------------------------------------------------------

_COLD_SERIES_SWITCH = 1e-3


def _cold_bracket(t: float, tau: float) -> float:
    """t^3/2 - t^2 tau/2 + tau^2 (tau - (t+tau) e^{-t/tau}).

    For s = t/tau below 1e-3 the three terms cancel to O(s^3); use the series
    tau^3 (s^3/6 + s^4/8 - s^5/30 + s^6/144 - ...)."""
    if tau == 0.0:
        return 0.5 * t**3
    s = t / tau
    if s < _COLD_SERIES_SWITCH:
        # coefficients of s^n for n >= 4 are (-1)^n (n-1)/n!
        return tau**3 * (s**3 / 6.0 + s**4 / 8.0 - s**5 / 30.0 + s**6 / 144.0)
    return (0.5 * t**3 - 0.5 * t * t * tau
            + tau * tau * (tau - (t + tau) * math.exp(-min(s, 745.0))))


def cold_atom_diffusion(p: CollapseParams, n: NoiseSpec, ca: ColdAtomDescriptor) -> float:
    """Excess position variance of the cloud after free expansion, m^2:

    (3 lam A^2 hbar^2 / 2 m^2 rc^2) [t^3/2 - t^2 tau/2 + tau^2(tau - (t+tau) e^{-t/tau})]

    with tau = 1/Wc; white noise is the tau -> 0 limit, bracket -> t^3/2."""
    validate_params(p)
    tau = 0.0 if n.is_white else 1.0 / n.omega_c
    bracket = _cold_bracket(ca.expansion_time, tau)
    c = CONSTANTS
    pref = 1.5 * p.lam * ca.mass_number**2 * c.hbar**2 / (ca.atom_mass**2 * p.rc**2)
    return pref * bracket
