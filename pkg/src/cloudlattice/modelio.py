"""Plain-text model files.

Format: INI-style sections with key = value lines.

    [lattice]
    dimension = 1
    n_sites = 8
    g0 = 4e-10
    M_over_Mp = 30.0
    m_over_M = 0.001

    [elastic]
    0 = 20.0
    1 = -10.0
    -1 = -10.0

    [coupling]
    isotropic_scalar = yes
    1 = 2.0
    -1 = 2.0

Offset keys are comma-separated integers ("1,0" in 2D); values are the
d*d block entries row-major, whitespace-separated. Masses are stored as
ratios M/M_p and m/M. The writer emits shortest round-trip decimal
strings, so a file written by save_model reloads to bit-identical values
and rewriting it reproduces the bytes.
"""

from __future__ import annotations

import configparser
import math
import os

from .constants import CONSTANTS, PhysicalConstants
from .errors import ConfigFileError
from .model import CouplingConstants, ForceConstants, LatticeSpec, Model

_LATTICE_KEYS = ("dimension", "n_sites", "g0", "M_over_Mp", "m_over_M")


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",),
                                   interpolation=None)
    cp.optionxform = str  # keep key case (M_over_Mp)
    return cp


def _parse_offset(key: str, dimension: int):
    try:
        off = tuple(int(tok) for tok in key.split(","))
    except ValueError as exc:
        raise ConfigFileError(f"bad offset key {key!r}") from exc
    if len(off) != dimension:
        raise ConfigFileError(f"offset {key!r} does not match dimension {dimension}")
    return off


def _parse_block(key: str, raw: str, dimension: int):
    toks = raw.split()
    if len(toks) != dimension * dimension:
        raise ConfigFileError(
            f"offset {key!r} needs {dimension * dimension} entries, got {len(toks)}")
    try:
        vals = [float(t) for t in toks]
    except ValueError as exc:
        raise ConfigFileError(f"non-numeric entry at offset {key!r}") from exc
    return [vals[i * dimension:(i + 1) * dimension] for i in range(dimension)]


def load_model(path: str | os.PathLike, constants: PhysicalConstants = CONSTANTS) -> Model:
    cp = _parser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigFileError(f"cannot parse {path}: {exc}") from exc

    for section in ("lattice", "elastic", "coupling"):
        if not cp.has_section(section):
            raise ConfigFileError(f"missing [{section}] section in {path}")
    lat = cp["lattice"]
    for key in _LATTICE_KEYS:
        if key not in lat:
            raise ConfigFileError(f"missing lattice key {key!r} in {path}")

    try:
        dimension = int(lat["dimension"])
        n_sites = tuple(int(tok) for tok in lat["n_sites"].split(","))
        g0 = float(lat["g0"])
        atom_mass = float(lat["M_over_Mp"]) * constants.M_p
        cloud_mass = float(lat["m_over_M"]) * atom_mass
    except ValueError as exc:
        raise ConfigFileError(f"bad lattice value in {path}: {exc}") from exc
    if len(n_sites) == 1:
        n_sites = n_sites * dimension
    spec = LatticeSpec(dimension=dimension, n_sites=n_sites, g0=g0,
                       atom_mass=atom_mass, cloud_mass=cloud_mass)

    elastic = {
        _parse_offset(k, dimension): _parse_block(k, v, dimension)
        for k, v in cp["elastic"].items()
    }
    coupling_section = dict(cp["coupling"])
    isotropic = cp["coupling"].getboolean("isotropic_scalar", fallback=False)
    coupling_section.pop("isotropic_scalar", None)
    coupling = {
        _parse_offset(k, dimension): _parse_block(k, v, dimension)
        for k, v in coupling_section.items()
    }
    if not coupling:
        coupling = {(0,) * dimension: [[0.0] * dimension for _ in range(dimension)]}

    fc = ForceConstants(entries=elastic, dimension=dimension)
    cc = CouplingConstants(entries=coupling, dimension=dimension,
                           isotropic_scalar=isotropic)
    return Model(spec, fc, cc)


def _ratio_string(value: float, base: float) -> str:
    """Decimal string r such that float(r) * base reproduces value exactly,
    when such an r exists within 2 ulp of value / base."""
    r0 = value / base
    candidates = [r0]
    lo = hi = r0
    for _ in range(2):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
        candidates += [lo, hi]
    for cand in candidates:
        if cand * base == value:
            return repr(cand)
    return repr(r0)


def _offset_key(off) -> str:
    return ",".join(str(x) for x in off)


def _block_value(mat) -> str:
    return " ".join(repr(float(x)) for row in mat for x in row)


def save_model(model: Model, path: str | os.PathLike,
               constants: PhysicalConstants = CONSTANTS) -> None:
    spec, fc, cc = model
    cp = _parser()
    cp["lattice"] = {
        "dimension": str(spec.dimension),
        "n_sites": ",".join(str(n) for n in spec.n_sites),
        "g0": repr(spec.g0),
        "M_over_Mp": _ratio_string(spec.atom_mass, constants.M_p),
        "m_over_M": _ratio_string(spec.cloud_mass, spec.atom_mass),
    }
    cp["elastic"] = {_offset_key(off): _block_value(mat) for off, mat in fc.entries.items()}
    coupling = {"isotropic_scalar": "yes" if cc.isotropic_scalar else "no"}
    coupling.update({_offset_key(off): _block_value(mat) for off, mat in cc.entries.items()})
    cp["coupling"] = coupling
    with open(path, "w") as fh:
        cp.write(fh)
