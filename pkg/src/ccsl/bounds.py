"""Invert measured noise ceilings into upper bounds lam_max(rc; noise).

Each inversion solves prediction(lam_max, rc) = ceiling for lam_max, which
is exact because every prediction is linear in lam. A point is "washed out"
when the colored suppression drives the unit-lam prediction below any
useful level; such points are omitted from exclusion curves rather than
recorded as sentinels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import CONSTANTS, CollapseParams
from .diffusion import DEFAULT_TOL, eta_reduced
from .errors import EmptyInput, NonPositiveFrequency, ValidationError, WashedOut
from .geometry import MassDistribution
from .noise import NoiseSpec, spectrum
from .predict import (ColdAtomDescriptor, PhononModel, cold_atom_diffusion,
                      lambda_eff_closed, lambda_eff_quad)

FORCE_PSD = "force_psd"
XRAY_NORMALIZED = "xray_normalized"
HEATING_POWER = "heating_power"
POSITION_VARIANCE = "position_variance"

_WASHOUT_RATIO = 1e-30


@dataclass(frozen=True)
class Ceiling:
    """A measured maximum signal attributable to collapse noise.

    kind/value units: force_psd N^2/Hz, xray_normalized s^-1 m^-2,
    heating_power W/kg, position_variance m^2. probe is a single angular
    frequency (rad/s), or an (lo, hi) band for force_psd.
    """

    kind: str
    value: float
    probe: float | tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in (FORCE_PSD, XRAY_NORMALIZED, HEATING_POWER,
                             POSITION_VARIANCE):
            raise ValidationError("ceiling.kind", f"unknown kind {self.kind!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValidationError("ceiling.value", "must be > 0")
        if isinstance(self.probe, tuple):
            if self.kind != FORCE_PSD:
                raise ValidationError("ceiling.probe", "bands only for force_psd")
            lo, hi = self.probe
            if not (0 < lo < hi and math.isfinite(hi)):
                raise ValidationError("ceiling.probe", "band needs 0 < lo < hi")
        elif self.probe is not None:
            if not (self.probe > 0 and math.isfinite(self.probe)):
                raise ValidationError("ceiling.probe", "must be > 0")
        if self.kind == FORCE_PSD and self.probe is None:
            raise ValidationError("ceiling.probe", "force_psd needs a probe frequency")
        if self.kind == XRAY_NORMALIZED and (self.probe is None
                                             or isinstance(self.probe, tuple)):
            raise ValidationError("ceiling.probe",
                                  "xray_normalized needs a single observation frequency")


def effective_spectrum_factor(ceiling: Ceiling, n: NoiseSpec) -> float:
    """f~ at the probe. For a band the ceiling must hold at every measured
    frequency, and f~ is non-increasing in |w|, so the strongest justified
    bound uses the lower band edge."""
    if ceiling.probe is None:
        return 1.0
    w = ceiling.probe[0] if isinstance(ceiling.probe, tuple) else ceiling.probe
    return float(spectrum(n, w))


@dataclass(frozen=True)
class ExclusionCurve:
    """lam_max versus rc for one experiment and one noise model. Washed-out
    points are absent; rc strictly increases."""

    experiment_id: str
    noise: NoiseSpec
    points: tuple[tuple[float, float], ...]  # (rc m, lam_max s^-1)

    def rc_values(self) -> np.ndarray:
        return np.array([rc for rc, _ in self.points])

    def lambda_values(self) -> np.ndarray:
        return np.array([lm for _, lm in self.points])


# --- single-point inversions ---------------------------------------------------

def lambda_max_force(d: MassDistribution, ceiling: Ceiling, n: NoiseSpec,
                     rc: float, tol: float = DEFAULT_TOL) -> float:
    """Invert S_ccsl = hbar^2 lam eta_reduced f~ against a force-PSD ceiling."""
    if ceiling.kind != FORCE_PSD:
        raise ValidationError("ceiling.kind", "expected force_psd")
    f_eff = effective_spectrum_factor(ceiling, n)
    e1 = eta_reduced(d, rc, tol).value
    denom = CONSTANTS.hbar**2 * e1 * f_eff
    if denom <= 0 or not math.isfinite(denom):
        raise WashedOut(f"force response vanished at rc={rc:.3e}")
    return ceiling.value / denom


def lambda_max_xray(ceiling: Ceiling, n: NoiseSpec, rc: float,
                    omega_obs: float) -> float:
    """Invert the normalized emission rate lam f~(w_obs)/rc^2."""
    if ceiling.kind != XRAY_NORMALIZED:
        raise ValidationError("ceiling.kind", "expected xray_normalized")
    if not (omega_obs > 0 and math.isfinite(omega_obs)):
        raise NonPositiveFrequency("omega_obs must be > 0")
    f = float(spectrum(n, omega_obs))
    if f <= 0:
        raise WashedOut(f"spectrum vanished at omega_obs={omega_obs:.3e}")
    return ceiling.value * rc * rc / f


def lambda_max_heating(ceiling: Ceiling, n: NoiseSpec, ph: PhononModel,
                       rc: float, tol: float = DEFAULT_TOL) -> float:
    """Invert dE/(dt dM) = (3/4)(hbar^2/rc^2 m0^2) lam_eff."""
    if ceiling.kind != HEATING_POWER:
        raise ValidationError("ceiling.kind", "expected heating_power")
    unit = CollapseParams(lam=1.0, rc=rc)
    if ph.dispersion is None:
        ratio = lambda_eff_closed(unit, n, ph)
    else:
        ratio = lambda_eff_quad(unit, n, ph, tol)
    if ratio < _WASHOUT_RATIO:
        raise WashedOut(f"lambda_eff/lambda = {ratio:.3e} at rc={rc:.3e}")
    c = CONSTANTS
    return ceiling.value * 4.0 * rc * rc * c.m0**2 / (3.0 * c.hbar**2) / ratio


def lambda_max_coldatom(ceiling: Ceiling, n: NoiseSpec, ca: ColdAtomDescriptor,
                        rc: float) -> float:
    """Invert the free-expansion position variance."""
    if ceiling.kind != POSITION_VARIANCE:
        raise ValidationError("ceiling.kind", "expected position_variance")
    unit = cold_atom_diffusion(CollapseParams(lam=1.0, rc=rc), n, ca)
    if unit <= 0.0 or not math.isfinite(unit):
        raise WashedOut(f"unit-lam diffusion underflowed at rc={rc:.3e}")
    return ceiling.value / unit


# --- scans -----------------------------------------------------------------------

def lambda_max_for(exp, n: NoiseSpec, rc: float, tol: float = DEFAULT_TOL) -> float:
    """Dispatch on an ExperimentDescriptor-like object (registry module)."""
    kind = exp.kind
    if kind == "optomechanical":
        return lambda_max_force(exp.geometry, exp.ceiling, n, rc, tol)
    if kind == "xray":
        return lambda_max_xray(exp.ceiling, n, rc, exp.ceiling.probe)
    if kind == "bulk_heating":
        return lambda_max_heating(exp.ceiling, n, exp.phonon, rc, tol)
    if kind == "cold_atom":
        return lambda_max_coldatom(exp.ceiling, n, exp.coldatom, rc)
    raise ValidationError("experiment.kind", f"unknown kind {kind!r}")


def scan(experiments: Sequence, n: NoiseSpec, rc_grid, tol: float = DEFAULT_TOL,
         on_error: Callable[[str, float, Exception], None] | None = None
         ) -> list[ExclusionCurve]:
    """One exclusion curve per experiment over the rc grid. Washed-out or
    failed points are omitted from the curve; failures are reported through
    on_error(experiment_id, rc, exception) when given."""
    rc_grid = np.asarray(rc_grid, dtype=float)
    if rc_grid.ndim != 1 or rc_grid.size == 0:
        raise EmptyInput("rc_grid must be a non-empty 1-D array")
    if np.any(np.diff(rc_grid) <= 0):
        raise ValueError("rc_grid must be strictly increasing")
    curves = []
    for exp in experiments:
        pts = []
        for rc in rc_grid:
            try:
                lm = lambda_max_for(exp, n, float(rc), tol)
            except Exception as err:  # collected (washed out or failed), not fatal
                if on_error is not None:
                    on_error(exp.id, float(rc), err)
                continue
            if math.isfinite(lm) and lm > 0:
                pts.append((float(rc), lm))
        curves.append(ExclusionCurve(exp.id, n, tuple(pts)))
    return curves


def default_rc_grid(lo: float = 1e-9, hi: float = 1e-3, num: int = 60) -> np.ndarray:
    return np.geomspace(lo, hi, num)


def envelope(curves: Sequence[ExclusionCurve]) -> ExclusionCurve:
    """Pointwise minimum lam_max across curves sharing an rc grid; at each rc
    only the curves that kept the point participate."""
    if not curves:
        raise EmptyInput("envelope of no curves")
    best: dict[float, float] = {}
    for c in curves:
        for rc, lm in c.points:
            if rc not in best or lm < best[rc]:
                best[rc] = lm
    pts = tuple(sorted(best.items()))
    return ExclusionCurve("envelope", curves[0].noise, pts)
