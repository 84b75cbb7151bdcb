"""Experiment descriptors as data: bundled defaults plus user config files.

Config grammar (line oriented, UTF-8, '#' starts a comment outside quotes):

    key = value                  value: number | bare word | "string" | x y z
    [section]                    one of geometry, oscillator, ceiling,
                                 phonon, coldatom
    [[geometry.part]]            appends one composite part (primitives only)

Lengths, masses and densities are SI base units. Every frequency key must
carry a unit suffix, ``_hz`` (multiplied by 2*pi on load) or ``_rad_s``;
a bare ``probe =`` is rejected. Unknown keys and sections are errors
(strict mode).

Loaded descriptors are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .bounds import (FORCE_PSD, HEATING_POWER, POSITION_VARIANCE, XRAY_NORMALIZED,
                     Ceiling)
from .core import TWO_PI
from .errors import ParseError, ValidationError
from .geometry import (MassDistribution, composite, cuboid, cylinder, point_mass,
                       sphere, validate_distribution)
from .predict import (ColdAtomDescriptor, FullSineDispersion, MechanicalOscillator,
                      PhononModel)

OPTOMECHANICAL = "optomechanical"
XRAY = "xray"
BULK_HEATING = "bulk_heating"
COLD_ATOM = "cold_atom"

_KINDS = (OPTOMECHANICAL, XRAY, BULK_HEATING, COLD_ATOM)

_BUNDLED = ("auriga", "bulk-heating", "cantilever", "cold-atom", "ligo",
            "lisa-pathfinder", "xray")


@dataclass(frozen=True)
class ExperimentDescriptor:
    id: str
    kind: str
    ceiling: Ceiling
    geometry: MassDistribution | None = None
    oscillator: MechanicalOscillator | None = None
    phonon: PhononModel | None = None
    coldatom: ColdAtomDescriptor | None = None
    provenance: str = ""


def validate_descriptor(desc: ExperimentDescriptor) -> ExperimentDescriptor:
    """Exactly the fields demanded by the kind must be present."""
    if not desc.id:
        raise ValidationError("id", "must be non-empty")
    if desc.kind not in _KINDS:
        raise ValidationError("kind", f"unknown kind {desc.kind!r}")
    need = {
        OPTOMECHANICAL: (("geometry",), FORCE_PSD, ("phonon", "coldatom")),
        XRAY: ((), XRAY_NORMALIZED, ("geometry", "oscillator", "phonon", "coldatom")),
        BULK_HEATING: (("phonon",), HEATING_POWER,
                       ("geometry", "oscillator", "coldatom")),
        COLD_ATOM: (("coldatom",), POSITION_VARIANCE,
                    ("geometry", "oscillator", "phonon")),
    }
    required, ceiling_kind, forbidden = need[desc.kind]
    for field in required:
        if getattr(desc, field) is None:
            raise ValidationError(field, f"required for kind {desc.kind}")
    for field in forbidden:
        if getattr(desc, field) is not None:
            raise ValidationError(field, f"not allowed for kind {desc.kind}")
    if desc.ceiling.kind != ceiling_kind:
        raise ValidationError("ceiling.kind",
                              f"kind {desc.kind} requires {ceiling_kind}")
    if desc.geometry is not None:
        validate_distribution(desc.geometry)
    return desc


# --- parsing -------------------------------------------------------------------

_SECTIONS = ("geometry", "oscillator", "ceiling", "phonon", "coldatom")

_KEYS = {
    "": {"id", "kind", "provenance"},
    "geometry": {"shape", "radius", "length", "lx", "ly", "lz", "axis",
                 "density", "mass", "measurement_axis"},
    "geometry.part": {"shape", "radius", "length", "lx", "ly", "lz", "axis",
                      "density", "mass", "offset"},
    "oscillator": {"mass", "omega_m_hz", "omega_m_rad_s", "gamma_m_rad_s",
                   "temperature"},
    "ceiling": {"kind", "value", "probe_hz", "probe_rad_s", "band_lo_hz",
                "band_hi_hz", "band_lo_rad_s", "band_hi_rad_s"},
    "phonon": {"v_s", "dispersion", "force_constant", "atom_mass",
               "plane_spacing"},
    "coldatom": {"mass_number", "atom_mass", "expansion_time"},
}

_BARE_FREQ_KEYS = {"probe", "omega_m", "gamma_m", "band_lo", "band_hi", "omega_c"}


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def _parse_value(raw: str, line_no: int, col: int):
    raw = raw.strip()
    if not raw:
        raise ParseError(line_no, col, "missing value")
    if raw.startswith('"'):
        if not raw.endswith('"') or len(raw) < 2:
            raise ParseError(line_no, col, "unterminated string")
        return raw[1:-1]
    tokens = raw.split()
    if len(tokens) == 3:
        try:
            return tuple(float(t) for t in tokens)
        except ValueError:
            raise ParseError(line_no, col, f"bad vector {raw!r}") from None
    if len(tokens) != 1:
        raise ParseError(line_no, col, f"expected one value or a 3-vector, got {raw!r}")
    try:
        return float(tokens[0])
    except ValueError:
        return tokens[0]  # bare word


def parse_config(text: str) -> ExperimentDescriptor:
    top: dict = {}
    sections: dict[str, dict] = {}
    parts: list[dict] = []
    current = top
    current_name = ""
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if line.startswith("[["):
            if not line.endswith("]]"):
                raise ParseError(line_no, len(raw_line), "expected ']]'")
            name = line[2:-2].strip()
            if name != "geometry.part":
                raise ParseError(line_no, 3, f"unknown list section {name!r}")
            current = {}
            current_name = "geometry.part"
            parts.append(current)
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(line_no, len(raw_line), "expected ']'")
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ParseError(line_no, 2, f"unknown section {name!r}")
            if name in sections:
                raise ParseError(line_no, 2, f"duplicate section {name!r}")
            sections[name] = {}
            current = sections[name]
            current_name = name
            continue
        if "=" not in line:
            raise ParseError(line_no, 1, "expected 'key = value' or a section header")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError(line_no, 1, "empty key")
        if key in _BARE_FREQ_KEYS:
            raise ValidationError(f"{current_name or 'top'}.{key}",
                                  "frequency keys need an explicit _hz or _rad_s suffix")
        if key not in _KEYS[current_name]:
            raise ValidationError(f"{current_name or 'top'}.{key}", "unknown key")
        if key in current:
            raise ParseError(line_no, 1, f"duplicate key {key!r}")
        current[key] = _parse_value(raw_value, line_no, line.index("=") + 2)
    if parts:
        sections.setdefault("geometry", {})["_parts"] = parts
    return _build_descriptor(top, sections)


def _num(sec: dict, section: str, key: str, required=True):
    if key not in sec:
        if required:
            raise ValidationError(f"{section}.{key}", "missing")
        return None
    v = sec.pop(key)
    if not isinstance(v, float):
        raise ValidationError(f"{section}.{key}", "must be a number")
    return v


def _freq(sec: dict, section: str, base: str, required=True):
    """Angular frequency from the pair of suffixed keys; Hz scaled by 2*pi."""
    hz, rad = sec.pop(f"{base}_hz", None), sec.pop(f"{base}_rad_s", None)
    if hz is not None and rad is not None:
        raise ValidationError(f"{section}.{base}", "give _hz or _rad_s, not both")
    if hz is None and rad is None:
        if required:
            raise ValidationError(f"{section}.{base}", "missing (_hz or _rad_s)")
        return None
    v = rad if rad is not None else TWO_PI * hz
    if not isinstance(v, float):
        raise ValidationError(f"{section}.{base}", "must be a number")
    return v


def _check_consumed(sec: dict, section: str):
    for key in sec:
        if not key.startswith("_"):
            raise ValidationError(f"{section}.{key}", f"not valid for this {section}")


def _build_geometry(sec: dict, section="geometry") -> MassDistribution:
    shape = sec.pop("shape", None)
    if shape is None:
        raise ValidationError(f"{section}.shape", "missing")
    meas = sec.pop("measurement_axis", (1.0, 0.0, 0.0)) if section == "geometry" \
        else (1.0, 0.0, 0.0)
    density = _num(sec, section, "density", required=False)
    mass = _num(sec, section, "mass", required=False)
    try:
        if shape == "sphere":
            d = sphere(_num(sec, section, "radius"), density=density, mass=mass,
                       measurement_axis=meas)
        elif shape == "cuboid":
            d = cuboid(_num(sec, section, "lx"), _num(sec, section, "ly"),
                       _num(sec, section, "lz"), density=density, mass=mass,
                       measurement_axis=meas)
        elif shape == "cylinder":
            d = cylinder(_num(sec, section, "radius"), _num(sec, section, "length"),
                         axis=sec.pop("axis", (0.0, 0.0, 1.0)), density=density,
                         mass=mass, measurement_axis=meas)
        elif shape == "point_mass":
            if density is not None:
                raise ValidationError(f"{section}.density", "point_mass takes mass only")
            d = point_mass(mass if mass is not None else float("nan"),
                           measurement_axis=meas)
        elif shape == "composite":
            parts = sec.pop("_parts", None)
            if section != "geometry" or not parts:
                raise ValidationError(f"{section}.shape",
                                      "composite needs [[geometry.part]] sections")
            if density is not None or mass is not None:
                raise ValidationError(f"{section}.density",
                                      "composite parts carry densities")
            built = []
            for i, p in enumerate(parts):
                off = p.pop("offset", None)
                if not isinstance(off, tuple):
                    raise ValidationError(f"geometry.part[{i}].offset",
                                          "each part needs an offset 3-vector")
                child = _build_geometry(p, section="geometry.part")
                built.append((child, off))
            d = composite(built, measurement_axis=meas)
        else:
            raise ValidationError(f"{section}.shape", f"unknown shape {shape!r}")
    except TypeError as err:
        raise ValidationError(f"{section}.shape", str(err)) from None
    _check_consumed(sec, section)
    return validate_distribution(d)


def _build_ceiling(sec: dict) -> Ceiling:
    kind = sec.pop("kind", None)
    if kind is None:
        raise ValidationError("ceiling.kind", "missing")
    value = _num(sec, "ceiling", "value")
    lo = _freq(sec, "ceiling", "band_lo", required=False)
    hi = _freq(sec, "ceiling", "band_hi", required=False)
    single = _freq(sec, "ceiling", "probe", required=False)
    if (lo is None) != (hi is None):
        raise ValidationError("ceiling.band", "band needs both lo and hi edges")
    if lo is not None and single is not None:
        raise ValidationError("ceiling.probe", "give a single probe or a band, not both")
    probe = (lo, hi) if lo is not None else single
    _check_consumed(sec, "ceiling")
    return Ceiling(kind=kind, value=value, probe=probe)


def _build_descriptor(top: dict, sections: dict) -> ExperimentDescriptor:
    exp_id = top.pop("id", None)
    kind = top.pop("kind", None)
    provenance = top.pop("provenance", "")
    if not isinstance(exp_id, str) or not exp_id:
        raise ValidationError("id", "missing or not a string")
    if not isinstance(kind, str):
        raise ValidationError("kind", "missing")
    _check_consumed(top, "top")

    geometry = oscillator = phonon = coldatom = None
    if "geometry" in sections:
        geometry = _build_geometry(sections.pop("geometry"))
    if "oscillator" in sections:
        sec = sections.pop("oscillator")
        oscillator = MechanicalOscillator(
            mass=_num(sec, "oscillator", "mass"),
            omega_m=_freq(sec, "oscillator", "omega_m"),
            temperature=_num(sec, "oscillator", "temperature"),
            gamma_m=_freq(sec, "oscillator", "gamma_m", required=False),
        )
        _check_consumed(sec, "oscillator")
    if "phonon" in sections:
        sec = sections.pop("phonon")
        v_s = _num(sec, "phonon", "v_s")
        disp_name = sec.pop("dispersion", "linear")
        if disp_name == "linear":
            dispersion = None
        elif disp_name == "full_sine":
            dispersion = FullSineDispersion(
                force_constant=_num(sec, "phonon", "force_constant"),
                atom_mass=_num(sec, "phonon", "atom_mass"),
                plane_spacing=_num(sec, "phonon", "plane_spacing"),
            )
        else:
            raise ValidationError("phonon.dispersion", f"unknown {disp_name!r}")
        phonon = PhononModel(v_s=v_s, dispersion=dispersion)
        _check_consumed(sec, "phonon")
    if "coldatom" in sections:
        sec = sections.pop("coldatom")
        coldatom = ColdAtomDescriptor(
            mass_number=_num(sec, "coldatom", "mass_number"),
            atom_mass=_num(sec, "coldatom", "atom_mass"),
            expansion_time=_num(sec, "coldatom", "expansion_time"),
        )
        _check_consumed(sec, "coldatom")
    if "ceiling" not in sections:
        raise ValidationError("ceiling", "missing [ceiling] section")
    ceiling = _build_ceiling(sections.pop("ceiling"))

    desc = ExperimentDescriptor(id=exp_id, kind=kind, ceiling=ceiling,
                                geometry=geometry, oscillator=oscillator,
                                phonon=phonon, coldatom=coldatom,
                                provenance=provenance)
    return validate_descriptor(desc)


# --- serialization ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, tuple):
        return " ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _geometry_lines(d: MassDistribution, header: str, out: list,
                    offset=None) -> None:
    from .geometry import Composite, Cuboid, Cylinder, PointMass, Sphere
    s = d.shape
    out.append(header)
    if isinstance(s, Composite):
        out.append("shape = composite")
        out.append(f"measurement_axis = {_fmt(d.measurement_axis)}")
        for part, off in s.parts:
            out.append("")
            _geometry_lines(part, "[[geometry.part]]", out, offset=off)
        return
    if isinstance(s, Sphere):
        out.append("shape = sphere")
        out.append(f"radius = {_fmt(s.radius)}")
    elif isinstance(s, Cuboid):
        out.append("shape = cuboid")
        out.append(f"lx = {_fmt(s.lx)}")
        out.append(f"ly = {_fmt(s.ly)}")
        out.append(f"lz = {_fmt(s.lz)}")
    elif isinstance(s, Cylinder):
        out.append("shape = cylinder")
        out.append(f"radius = {_fmt(s.radius)}")
        out.append(f"length = {_fmt(s.length)}")
        out.append(f"axis = {_fmt(s.axis)}")
    elif isinstance(s, PointMass):
        out.append("shape = point_mass")
        out.append(f"mass = {_fmt(d.density)}")
    if not isinstance(s, PointMass):
        out.append(f"density = {_fmt(d.density)}")
    if offset is not None:
        out.append(f"offset = {_fmt(offset)}")
    if header == "[geometry]":
        out.append(f"measurement_axis = {_fmt(d.measurement_axis)}")


def serialize(desc: ExperimentDescriptor) -> str:
    """Canonical config text; load(serialize(d)) equals d field for field."""
    out = [f"id = {desc.id}", f"kind = {desc.kind}"]
    if desc.provenance:
        out.append(f'provenance = "{desc.provenance}"')
    if desc.geometry is not None:
        out.append("")
        _geometry_lines(desc.geometry, "[geometry]", out)
    if desc.oscillator is not None:
        o = desc.oscillator
        out.extend(["", "[oscillator]", f"mass = {_fmt(o.mass)}",
                    f"omega_m_rad_s = {_fmt(o.omega_m)}"])
        if o.gamma_m is not None:
            out.append(f"gamma_m_rad_s = {_fmt(o.gamma_m)}")
        out.append(f"temperature = {_fmt(o.temperature)}")
    if desc.phonon is not None:
        p = desc.phonon
        out.extend(["", "[phonon]", f"v_s = {_fmt(p.v_s)}"])
        if p.dispersion is None:
            out.append("dispersion = linear")
        else:
            out.append("dispersion = full_sine")
            out.append(f"force_constant = {_fmt(p.dispersion.force_constant)}")
            out.append(f"atom_mass = {_fmt(p.dispersion.atom_mass)}")
            out.append(f"plane_spacing = {_fmt(p.dispersion.plane_spacing)}")
    if desc.coldatom is not None:
        ca = desc.coldatom
        out.extend(["", "[coldatom]", f"mass_number = {_fmt(ca.mass_number)}",
                    f"atom_mass = {_fmt(ca.atom_mass)}",
                    f"expansion_time = {_fmt(ca.expansion_time)}"])
    c = desc.ceiling
    out.extend(["", "[ceiling]", f"kind = {c.kind}", f"value = {_fmt(c.value)}"])
    if isinstance(c.probe, tuple):
        out.append(f"band_lo_rad_s = {_fmt(c.probe[0])}")
        out.append(f"band_hi_rad_s = {_fmt(c.probe[1])}")
    elif c.probe is not None:
        out.append(f"probe_rad_s = {_fmt(c.probe)}")
    return "\n".join(out) + "\n"


# --- loading ---------------------------------------------------------------------

def list_bundled() -> list[str]:
    """Stable, alphabetical list of bundled experiment ids."""
    return list(_BUNDLED)


def load(source: str | Path) -> ExperimentDescriptor:
    """Load a bundled descriptor by id, or a config file by path."""
    if isinstance(source, str) and source in _BUNDLED:
        text = resources.files("ccsl").joinpath(f"data/{source}.cfg").read_text("utf-8")
        return parse_config(text)
    path = Path(source)
    if not path.is_file():
        raise ValidationError("source", f"no bundled experiment or file named {source!r}")
    return parse_config(path.read_text("utf-8"))


def load_all_bundled() -> list[ExperimentDescriptor]:
    return [load(name) for name in _BUNDLED]
