"""Scenario files for the command-line tool.

A scenario is a small ``key = value`` file with ``[section]`` headers;
``#`` starts a comment. Recognized sections and keys::

    [input]             exactly one of
    p_in = 0.5          concurrence of the canonical diagonal input, or
    state = 0, 1; -1, 0 coefficient matrix a_HH, a_HV; a_VH, a_VV

    [media]             either explicit amplitude matrices
    t1 = 1, 0; 0, 0.5
    t2 = 0.9, 0.1i; 0, 0.8
                        or films, with the incident frequency given by
    omega0 = 2.8e15     rad/s, or
    resonant_lattice = 7e-7   (omega0 on that lattice's resonance)

    [film1], [film2]    lattice_a, lattice_b (m), order, gamma (rad/s),
                        t_peak, epsilon

Matrix rows are separated by ``;`` and entries by ``,``. Complex numbers
are written ``re+imi`` (``0.5-0.25i``, ``2i``, ``1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .biphoton import TwoPhotonState, canonical_state, make_state
from .errors import BellScatterError, DomainError
from .media import (PlasmonFilmSpec, TransmissionMatrix, film_pair, plasmon_resonance)

FILM_KEYS = ("lattice_a", "lattice_b", "order", "gamma", "t_peak", "epsilon")
KNOWN = {
    "input": {"p_in", "state"},
    "media": {"t1", "t2", "omega0", "resonant_lattice"},
    "film1": set(FILM_KEYS),
    "film2": set(FILM_KEYS),
}


class ConfigError(BellScatterError):
    """Malformed scenario file or command-line option."""


@dataclass(frozen=True)
class SweepGrid:
    """Sample points along one axis."""

    name: str
    lo: float
    hi: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ConfigError(f"sweep over {self.name}: need min < max")
        if self.steps < 2:
            raise ConfigError(f"sweep over {self.name}: need steps >= 2")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"sweep over {self.name}: scale must be linear or log")
        if self.scale == "log" and self.lo <= 0:
            raise ConfigError(f"sweep over {self.name}: log scale needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.exp(np.linspace(math.log(self.lo), math.log(self.hi), self.steps))
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class Scenario:
    t1: TransmissionMatrix | None = None
    t2: TransmissionMatrix | None = None
    films: tuple[PlasmonFilmSpec, PlasmonFilmSpec] | None = None
    omega0: float | None = None
    p_in: float | None = None
    state: TwoPhotonState | None = None

    def media(self) -> tuple[TransmissionMatrix, TransmissionMatrix]:
        if self.films is not None:
            return film_pair(self.films[0], self.films[1], self.omega0)
        if self.t1 is None:
            raise ConfigError("scenario defines no media")
        return self.t1, self.t2

    def input_state(self) -> TwoPhotonState:
        if self.state is not None:
            return self.state
        if self.p_in is None:
            raise ConfigError("scenario defines no input ([input] p_in or state)")
        return canonical_state(self.p_in)


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if "j" in s.lower():
        raise ValueError(f"bad complex number {text!r} (write the imaginary unit as i)")
    z = complex(s.replace("i", "j"))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite number {text!r}")
    return z


def parse_matrix(text: str) -> np.ndarray:
    rows = text.split(";")
    if len(rows) != 2:
        raise ValueError("expected two rows separated by ';'")
    out = []
    for r in rows:
        cells = r.split(",")
        if len(cells) != 2:
            raise ValueError("expected two entries per row separated by ','")
        out.append([parse_complex(c) for c in cells])
    return np.array(out, dtype=np.complex128)


def read_sections(text: str, source: str = "<scenario>") -> dict[str, dict[str, tuple[str, int]]]:
    """Split a scenario into ``{section: {key: (value, line_number)}}``."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{source}:{lineno}: malformed section header {raw.strip()!r}")
            current = line[1:-1].strip().lower()
            if current not in KNOWN:
                raise ConfigError(f"{source}:{lineno}: unknown section [{current}]")
            if current in sections:
                raise ConfigError(f"{source}:{lineno}: duplicate section [{current}]")
            sections[current] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        if current is None:
            raise ConfigError(f"{source}:{lineno}: key outside of any section")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN[current]:
            raise ConfigError(f"{source}:{lineno}: unknown key {current}.{key}")
        if key in sections[current]:
            raise ConfigError(f"{source}:{lineno}: duplicate key {current}.{key}")
        sections[current][key] = (value, lineno)
    return sections


def _field(sections, section, key, convert, source):
    value, lineno = sections[section][key]
    try:
        return convert(value)
    except (ValueError, DomainError) as exc:
        raise ConfigError(f"{source}:{lineno}: {section}.{key}: {exc}") from None


def _film(sections, name, source) -> PlasmonFilmSpec:
    if name not in sections:
        raise ConfigError(f"{source}: film media need sections [film1] and [film2]")
    missing = [k for k in FILM_KEYS if k not in sections[name]]
    if missing:
        raise ConfigError(f"{source}: [{name}] is missing {', '.join(missing)}")
    vals = {k: _field(sections, name, k, int if k == "order" else float, source)
            for k in FILM_KEYS}
    try:
        return PlasmonFilmSpec(vals["lattice_a"], vals["lattice_b"], vals["order"],
                               vals["gamma"], vals["t_peak"], vals["epsilon"])
    except DomainError as exc:
        raise ConfigError(f"{source}: [{name}]: {exc}") from None


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    sections = read_sections(text, source)
    inp = sections.get("input", {})
    if len(inp) > 1:
        raise ConfigError(f"{source}: [input] needs exactly one of p_in, state")
    p_in = state = None
    if "p_in" in inp:
        p_in = _field(sections, "input", "p_in", float, source)
        if not 0.0 <= p_in <= 1.0:
            raise ConfigError(f"{source}:{inp['p_in'][1]}: input.p_in must lie in [0, 1]")
    elif "state" in inp:
        state = _field(sections, "input", "state", lambda s: make_state(parse_matrix(s)), source)

    media = sections.get("media", {})
    explicit = [k for k in ("t1", "t2") if k in media]
    film_form = any(k in sections for k in ("film1", "film2")) or \
        any(k in media for k in ("omega0", "resonant_lattice"))
    if explicit and film_form:
        raise ConfigError(f"{source}: give either t1/t2 or films, not both")
    if explicit:
        if len(explicit) != 2:
            raise ConfigError(f"{source}: [media] needs both t1 and t2")
        t1 = _field(sections, "media", "t1", lambda s: TransmissionMatrix(parse_matrix(s)), source)
        t2 = _field(sections, "media", "t2", lambda s: TransmissionMatrix(parse_matrix(s)), source)
        return Scenario(t1=t1, t2=t2, p_in=p_in, state=state)
    if film_form:
        films = (_film(sections, "film1", source), _film(sections, "film2", source))
        given = [k for k in ("omega0", "resonant_lattice") if k in media]
        if len(given) != 1:
            raise ConfigError(f"{source}: [media] needs exactly one of omega0, resonant_lattice")
        if given[0] == "omega0":
            omega0 = _field(sections, "media", "omega0", float, source)
        else:
            lat = _field(sections, "media", "resonant_lattice", float, source)
            try:
                omega0 = plasmon_resonance(lat, films[0].order_n, films[0].epsilon)
            except DomainError as exc:
                raise ConfigError(f"{source}: media.resonant_lattice: {exc}") from None
        return Scenario(films=films, omega0=omega0, p_in=p_in, state=state)
    return Scenario(p_in=p_in, state=state)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))
