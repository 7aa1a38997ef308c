"""Channel configuration files.

One UTF-8 JSON document describes one instance::

    {
      "schema_version": 1,
      "topology": "siso" | "simo" | "miso",
      "name": "optional label",
      "description": "optional free text",
      "gain": [[g11, g12], [g21, g22]],            # siso only, row-major
      "h": [[[[re, im], ...], ...], ...],          # simo/miso only
      "noise": 0.1,                                # scalar or per-user list
      "pmax": 3.0,                                 # scalar or per-user list
      "weights": 1.0,                              # scalar or per-user list
      "rmin": 0.5                                  # optional, scalar or list
    }

For SISO, ``gain[k][j]`` is the power gain from transmitter ``j`` to receiver
``k``. For SIMO and MISO, ``h[k][j]`` is the complex channel vector from
transmitter ``j`` to receiver ``k`` with each entry written as ``[re, im]``;
its length is the receive antenna count ``M_k`` (SIMO) or the transmit
antenna count ``N_j`` (MISO).

Syntax errors are reported with line and column, schema errors with the
JSON path of the offending value. Both raise :class:`ConfigError`.
"""
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import MinRateConstraint, MisoChannel, SimoChannel, SisoChannel
from .errors import ChannelError, ConfigError

__all__ = [
    "Instance",
    "SCHEMA_VERSION",
    "TOPOLOGIES",
    "parse_config",
    "load_config",
    "load_bundled",
    "bundled_names",
    "channel_to_dict",
    "dumps",
]

SCHEMA_VERSION = 1
TOPOLOGIES = ("siso", "simo", "miso")
_KNOWN = {"schema_version", "topology", "name", "description", "gain", "h", "noise",
          "pmax", "weights", "rmin"}


@dataclass(frozen=True)
class Instance:
    """A loaded configuration: channel plus optional minimum rates."""

    channel: object
    rmin: Optional[np.ndarray] = None
    name: str = ""
    description: str = ""

    def with_overrides(self, sigma2=None, rmin=None):
        """Copy with the noise variance and/or minimum rates replaced."""
        ch = self.channel
        if sigma2 is not None:
            if not np.all(np.asarray(sigma2, dtype=float) > 0):
                raise ConfigError("--sigma2 must be positive")
            try:
                ch = ch.replace(noise=sigma2)
            except ChannelError as exc:
                raise ConfigError(str(exc)) from exc
        r = self.rmin if rmin is None else _rmin(rmin, ch, "rmin")
        if r is not None:
            r = _rmin(r, ch, "rmin")
        return Instance(ch, r, self.name, self.description)


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _decode(text, source):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(x).__name__}")
    return float(x)


def _per_user(x, path):
    if isinstance(x, list):
        return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(x)])
    return _number(x, path)


def _complex(x, path):
    if not (isinstance(x, list) and len(x) == 2):
        raise ConfigError(f"{path}: expected a [re, im] pair")
    return complex(_number(x[0], f"{path}[0]"), _number(x[1], f"{path}[1]"))


def _gain(x):
    if not isinstance(x, list) or not x:
        raise ConfigError("gain: expected a non-empty K x K nested array")
    rows = []
    for k, row in enumerate(x):
        if not isinstance(row, list) or len(row) != len(x):
            raise ConfigError(f"gain[{k}]: expected a row of length {len(x)}")
        rows.append([_number(v, f"gain[{k}][{j}]") for j, v in enumerate(row)])
    return np.array(rows)


def _vectors(x):
    if not isinstance(x, list) or not x:
        raise ConfigError("h: expected a non-empty K x K nested array of vectors")
    out = []
    for k, row in enumerate(x):
        if not isinstance(row, list) or len(row) != len(x):
            raise ConfigError(f"h[{k}]: expected {len(x)} channel vectors")
        vecs = []
        for j, v in enumerate(row):
            if not isinstance(v, list) or not v:
                raise ConfigError(f"h[{k}][{j}]: expected a non-empty list of [re, im] pairs")
            vecs.append(np.array([_complex(c, f"h[{k}][{j}][{i}]") for i, c in enumerate(v)]))
        out.append(vecs)
    return out


def _rmin(r, ch, path):
    try:
        return MinRateConstraint(r, ch).rmin
    except ChannelError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_config(doc, source="<config>"):
    """Build an :class:`Instance` from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    unknown = sorted(set(doc) - _KNOWN)
    if unknown:
        raise ConfigError(f"{source}: unknown keys {unknown}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{source}: unsupported schema_version {version!r}")
    topo = doc.get("topology")
    if topo not in TOPOLOGIES:
        raise ConfigError(f"{source}: topology must be one of {list(TOPOLOGIES)}, got {topo!r}")
    kw = {key: _per_user(doc[key], key) for key in ("noise", "pmax", "weights") if key in doc}
    try:
        if topo == "siso":
            if "gain" not in doc or "h" in doc:
                raise ConfigError(f"{source}: siso configs need 'gain' and no 'h'")
            ch = SisoChannel(_gain(doc["gain"]), **kw)
        else:
            if "h" not in doc or "gain" in doc:
                raise ConfigError(f"{source}: {topo} configs need 'h' and no 'gain'")
            cls = SimoChannel if topo == "simo" else MisoChannel
            ch = cls(_vectors(doc["h"]), **kw)
    except ChannelError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    rmin = None
    if "rmin" in doc:
        rmin = _rmin(_per_user(doc["rmin"], "rmin"), ch, f"{source}: rmin")
    name = doc.get("name", "")
    desc = doc.get("description", "")
    if not isinstance(name, str) or not isinstance(desc, str):
        raise ConfigError(f"{source}: name and description must be strings")
    return Instance(ch, rmin, name, desc)


def load_config(path):
    """Read and validate a config file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{p}: cannot read config: {exc}") from exc
    return parse_config(_decode(text, str(p)), str(p))


def bundled_names():
    """Names of the configs shipped with the package."""
    files = resources.files("gicwsr") / "data"
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".json"))


def load_bundled(name):
    """Load a shipped config by name (without the .json suffix)."""
    f = resources.files("gicwsr") / "data" / f"{name}.json"
    if not f.is_file():
        raise ConfigError(f"no bundled config named {name!r}; have {bundled_names()}")
    return parse_config(_decode(f.read_text(encoding="utf-8"), name), name)


def _scalar_or_list(a):
    a = np.asarray(a, dtype=float)
    return float(a[0]) if np.all(a == a[0]) else a.tolist()


def channel_to_dict(ch, rmin=None, name="", description=""):
    """Inverse of :func:`parse_config`."""
    d = {"schema_version": SCHEMA_VERSION, "topology": ch.topology}
    if name:
        d["name"] = name
    if description:
        d["description"] = description
    if ch.topology == "siso":
        d["gain"] = np.asarray(ch.gain).tolist()
    else:
        d["h"] = [[[[float(c.real), float(c.imag)] for c in v] for v in row] for row in ch.h]
    d["noise"] = _scalar_or_list(ch.noise)
    d["pmax"] = _scalar_or_list(ch.pmax)
    d["weights"] = _scalar_or_list(ch.weights)
    if rmin is not None:
        d["rmin"] = _scalar_or_list(rmin)
    return d


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else repr(x)
    return x


def dumps(obj):
    """Deterministic JSON text: fixed key order, shortest round-trip floats.

    Complex numbers become ``[re, im]`` and non-finite floats the strings
    ``"inf"``, ``"-inf"`` or ``"nan"`` so the output stays strict JSON.
    """
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"
