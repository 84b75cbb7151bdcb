"""Rigid-body mass distributions and their Fourier-space form factors.

The form factor convention is mu~(k) = integral mu(x) e^{-i k.x} d^3x, so
mu~(0) equals the total mass. Squared moduli for the primitives:

* sphere   [3 m (sin kR - kR cos kR)/(kR)^3]^2
* cuboid   m^2 prod_i sinc^2(k_i L_i / 2)          (body axes = global axes)
* cylinder m^2 [2 J1(kp R)/(kp R)]^2 sinc^2(ka L/2)
* point    m^2
* composite |sum_j mu~_j(k) e^{-i k.a_j}|^2

kp/ka are the components of k across/along the cylinder axis. All kernels
switch to a 6th-order Taylor series below |x| = 1e-4: the removable
singularities at k -> 0 dominate the quadrature region when rc is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import j1 as _bessel_j1

from .errors import ValidationError

_SERIES_CUT = 1e-4


# --- shapes ------------------------------------------------------------------

@dataclass(frozen=True)
class Sphere:
    radius: float  # m


@dataclass(frozen=True)
class Cuboid:
    lx: float  # m; edges are parallel to the global axes
    ly: float
    lz: float


@dataclass(frozen=True)
class Cylinder:
    radius: float  # m
    length: float  # m
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)  # unit vector


@dataclass(frozen=True)
class PointMass:
    pass


@dataclass(frozen=True)
class Composite:
    # (part distribution, center offset in m); parts must be primitives
    parts: tuple[tuple["MassDistribution", tuple[float, float, float]], ...]


Shape = Sphere | Cuboid | Cylinder | PointMass | Composite


@dataclass(frozen=True)
class MassDistribution:
    """A rigid body: geometry plus density, and the axis the experiment
    measures displacement along.

    density is kg/m^3 for extended shapes, the total mass in kg for
    PointMass, and None for Composite (each part carries its own).
    """

    shape: Shape
    density: float | None
    measurement_axis: tuple[float, float, float] = (1.0, 0.0, 0.0)


# --- constructors ------------------------------------------------------------

def _unit(v, field: str) -> tuple[float, float, float]:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValidationError(field, "must be a 3-vector")
    norm = float(np.linalg.norm(a))
    if not np.isfinite(norm) or norm <= 0:
        raise ValidationError(field, "must have positive finite norm")
    a = a / norm
    return (float(a[0]), float(a[1]), float(a[2]))


def _density_from(volume_m3, density, mass, field):
    if (density is None) == (mass is None):
        raise ValidationError(field, "give exactly one of density or mass")
    if density is not None:
        return float(density)
    return float(mass) / volume_m3


def sphere(radius, *, density=None, mass=None,
           measurement_axis=(1.0, 0.0, 0.0)) -> MassDistribution:
    if not (radius > 0 and math.isfinite(radius)):
        raise ValidationError("geometry.radius", "must be > 0")
    vol = 4.0 / 3.0 * math.pi * radius**3
    rho = _density_from(vol, density, mass, "geometry")
    return MassDistribution(Sphere(float(radius)), rho, _unit(measurement_axis, "measurement_axis"))


def cuboid(lx, ly, lz, *, density=None, mass=None,
           measurement_axis=(1.0, 0.0, 0.0)) -> MassDistribution:
    for name, v in (("lx", lx), ("ly", ly), ("lz", lz)):
        if not (v > 0 and math.isfinite(v)):
            raise ValidationError(f"geometry.{name}", "must be > 0")
    rho = _density_from(lx * ly * lz, density, mass, "geometry")
    return MassDistribution(Cuboid(float(lx), float(ly), float(lz)), rho,
                            _unit(measurement_axis, "measurement_axis"))


def cylinder(radius, length, *, axis=(0.0, 0.0, 1.0), density=None, mass=None,
             measurement_axis=(0.0, 0.0, 1.0)) -> MassDistribution:
    if not (radius > 0 and math.isfinite(radius)):
        raise ValidationError("geometry.radius", "must be > 0")
    if not (length > 0 and math.isfinite(length)):
        raise ValidationError("geometry.length", "must be > 0")
    vol = math.pi * radius**2 * length
    rho = _density_from(vol, density, mass, "geometry")
    return MassDistribution(Cylinder(float(radius), float(length), _unit(axis, "geometry.axis")),
                            rho, _unit(measurement_axis, "measurement_axis"))


def point_mass(mass, *, measurement_axis=(1.0, 0.0, 0.0)) -> MassDistribution:
    if not (mass > 0 and math.isfinite(mass)):
        raise ValidationError("geometry.mass", "must be > 0")
    return MassDistribution(PointMass(), float(mass), _unit(measurement_axis, "measurement_axis"))


def composite(parts, *, measurement_axis=(1.0, 0.0, 0.0)) -> MassDistribution:
    """Assemble primitives into one rigid body.

    parts: iterable of (MassDistribution, offset 3-vector in m).
    """
    packed = []
    for part, offset in parts:
        off = np.asarray(offset, dtype=float)
        if off.shape != (3,) or not np.all(np.isfinite(off)):
            raise ValidationError("geometry.part.offset", "must be a finite 3-vector")
        packed.append((part, (float(off[0]), float(off[1]), float(off[2]))))
    if not packed:
        raise ValidationError("geometry.parts", "composite needs at least one part")
    return MassDistribution(Composite(tuple(packed)), None,
                            _unit(measurement_axis, "measurement_axis"))


# --- mass and volume ---------------------------------------------------------

def volume(shape: Shape) -> float:
    """Analytic volume in m^3 (0.0 for PointMass; parts summed for Composite
    would need densities, so Composite is rejected here)."""
    if isinstance(shape, Sphere):
        return 4.0 / 3.0 * math.pi * shape.radius**3
    if isinstance(shape, Cuboid):
        return shape.lx * shape.ly * shape.lz
    if isinstance(shape, Cylinder):
        return math.pi * shape.radius**2 * shape.length
    if isinstance(shape, PointMass):
        return 0.0
    raise TypeError(f"no single volume for {type(shape).__name__}")


def total_mass(d: MassDistribution) -> float:
    """Total mass in kg: density x analytic volume; Composite sums parts."""
    if isinstance(d.shape, Composite):
        return sum(total_mass(part) for part, _ in d.shape.parts)
    if isinstance(d.shape, PointMass):
        return d.density
    return d.density * volume(d.shape)


# --- scalar kernels ----------------------------------------------------------

def sinc_kernel(x):
    """sin(x)/x, with series 1 - x^2/6 + x^4/120 - x^6/5040 below 1e-4."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUT
    xs = np.where(small, 0.0, x)
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.where(small, 1.0, np.sin(xs) / np.where(small, 1.0, xs))
    return np.where(small, series, direct)


def sphere_kernel(x):
    """3 (sin x - x cos x)/x^3, series 1 - x^2/10 + x^4/280 - x^6/15120.

    The series window is 1e-2 rather than 1e-4: sin x - x cos x cancels to
    x^3/3, so the direct form carries a ~6 eps/x^2 relative error (1e-8 at
    x = 1e-4). At the 1e-2 switch the truncated series errs by x^8/1330560
    ~ 1e-22 and the direct branch by ~7e-12.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    xs = np.where(small, 1.0, x)
    x2 = x * x
    series = 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0
    direct = 3.0 * (np.sin(xs) - xs * np.cos(xs)) / xs**3
    return np.where(small, series, direct)


def disc_kernel(x):
    """2 J1(x)/x, series 1 - x^2/8 + x^4/192 - x^6/9216."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUT
    xs = np.where(small, 1.0, x)
    x2 = x * x
    series = 1.0 - x2 / 8.0 + x2 * x2 / 192.0 - x2 * x2 * x2 / 9216.0
    direct = 2.0 * _bessel_j1(xs) / xs
    return np.where(small, series, direct)


def bessel_j1(x):
    """Bessel J1. Thin alias over SciPy's Cephes implementation; accuracy is
    pinned by the high-precision fixtures in the test suite."""
    return _bessel_j1(x)


# --- form factor -------------------------------------------------------------

def form_amplitude(d: MassDistribution, k):
    """mu~(k) for k of shape (..., 3). Real for centered primitives, complex
    for composites (translation phases)."""
    k = np.asarray(k, dtype=float)
    if k.shape[-1] != 3:
        raise ValueError("k must have shape (..., 3)")
    shape = d.shape
    if isinstance(shape, PointMass):
        return np.broadcast_to(np.asarray(d.density), k.shape[:-1]).copy()
    if isinstance(shape, Sphere):
        m = total_mass(d)
        kr = np.linalg.norm(k, axis=-1) * shape.radius
        return m * sphere_kernel(kr)
    if isinstance(shape, Cuboid):
        m = total_mass(d)
        return (m * sinc_kernel(0.5 * k[..., 0] * shape.lx)
                * sinc_kernel(0.5 * k[..., 1] * shape.ly)
                * sinc_kernel(0.5 * k[..., 2] * shape.lz))
    if isinstance(shape, Cylinder):
        m = total_mass(d)
        axis = np.asarray(shape.axis)
        k_par = k @ axis
        k_perp = np.sqrt(np.maximum(np.sum(k * k, axis=-1) - k_par**2, 0.0))
        return (m * disc_kernel(k_perp * shape.radius)
                * sinc_kernel(0.5 * k_par * shape.length))
    if isinstance(shape, Composite):
        total = np.zeros(k.shape[:-1], dtype=complex)
        for part, offset in shape.parts:
            phase = np.exp(-1j * (k @ np.asarray(offset)))
            total = total + form_amplitude(part, k) * phase
        return total
    raise TypeError(f"unknown shape {type(shape).__name__}")


def form_factor_sq(d: MassDistribution, k):
    """|mu~(k)|^2 in kg^2 for k (m^-1) of shape (..., 3) or (3,)."""
    amp = form_amplitude(d, k)
    out = np.abs(amp) ** 2 if np.iscomplexobj(amp) else amp * amp
    return float(out) if out.ndim == 0 else out


# --- validation --------------------------------------------------------------

def circumradius(d: MassDistribution) -> float:
    """Radius of the smallest origin-centered ball containing the body."""
    s = d.shape
    if isinstance(s, Sphere):
        return s.radius
    if isinstance(s, Cuboid):
        return 0.5 * math.sqrt(s.lx**2 + s.ly**2 + s.lz**2)
    if isinstance(s, Cylinder):
        return math.sqrt(s.radius**2 + (0.5 * s.length) ** 2)
    if isinstance(s, PointMass):
        return 0.0
    if isinstance(s, Composite):
        return max(float(np.linalg.norm(off)) + circumradius(part)
                   for part, off in s.parts)
    raise TypeError(type(s).__name__)


def validate_distribution(d: MassDistribution) -> MassDistribution:
    """Check invariants: positive lengths and density, unit axes."""
    s = d.shape
    if isinstance(s, Composite):
        if d.density is not None:
            raise ValidationError("geometry.density", "composite parts carry densities")
        for part, _ in s.parts:
            if isinstance(part.shape, Composite):
                validate_distribution(part)
            else:
                validate_distribution(part)
        return d
    if d.density is None or not (d.density > 0 and math.isfinite(d.density)):
        field = "geometry.mass" if isinstance(s, PointMass) else "geometry.density"
        raise ValidationError(field, "must be > 0")
    if isinstance(s, Sphere) and not (s.radius > 0 and math.isfinite(s.radius)):
        raise ValidationError("geometry.radius", "must be > 0")
    if isinstance(s, Cuboid):
        for name, v in (("lx", s.lx), ("ly", s.ly), ("lz", s.lz)):
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"geometry.{name}", "must be > 0")
    if isinstance(s, Cylinder):
        if not (s.radius > 0 and math.isfinite(s.radius)):
            raise ValidationError("geometry.radius", "must be > 0")
        if not (s.length > 0 and math.isfinite(s.length)):
            raise ValidationError("geometry.length", "must be > 0")
        if abs(np.linalg.norm(s.axis) - 1.0) > 1e-9:
            raise ValidationError("geometry.axis", "must be a unit vector")
    if abs(np.linalg.norm(d.measurement_axis) - 1.0) > 1e-9:
        raise ValidationError("measurement_axis", "must be a unit vector")
    return d


def with_measurement_axis(d: MassDistribution, axis) -> MassDistribution:
    return replace(d, measurement_axis=_unit(axis, "measurement_axis"))
