"""Alkali hyperfine species and cavity-enhanced magnetic-dipole decay."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantities import (
    AREA,
    CONSTANTS,
    DIMENSIONLESS,
    FREQUENCY,
    LENGTH,
    TIME,
    Quantity,
    as_quantity,
    assert_dim,
)

__all__ = [
    "AtomSpecies",
    "CavityConfig",
    "ResonanceMismatchError",
    "SPECIES",
    "get_species",
    "cavity_for_species",
    "free_space_lifetime",
    "cavity_lifetime",
    "purcell_ratio",
    "hold_time",
    "hold_time_at",
    "free_space_lifetime_at",
    "half_wave_length",
    "superradiant_lifetime",
]

RESONANCE_RTOL = 1e-6


class ResonanceMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    hyperfine_freq: float  # Hz
    isotope: str = ""

    def __post_init__(self):
        if not self.hyperfine_freq > 0:
            raise ValueError(f"hyperfine_freq must be > 0, got {self.hyperfine_freq}")

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.hyperfine_freq

    @property
    def hyperfine_freq_ghz(self) -> float:
        return self.hyperfine_freq / 1e9


SPECIES: dict[str, AtomSpecies] = {
    "Li": AtomSpecies("Li", 0.228e9, "6Li"),
    "Na": AtomSpecies("Na", 1.77e9, "23Na"),
    "Rb": AtomSpecies("Rb", 6.83e9, "87Rb"),
    "Cs": AtomSpecies("Cs", 9.19e9, "133Cs"),
}

_ALIASES = {sp.isotope.lower(): key for key, sp in SPECIES.items()}
_ALIASES.update({key.lower(): key for key in SPECIES})


def get_species(name: str) -> AtomSpecies:
    """Look up a registry species by symbol ("Na") or isotope ("23Na")."""
    key = _ALIASES.get(name.strip().lower())
    if key is None:
        raise KeyError(f"unknown species {name!r}; known: {', '.join(SPECIES)}")
    return SPECIES[key]


@dataclass(frozen=True)
class CavityConfig:
    q_opt: float
    cross_section: float  # m^2
    length: float  # m
    resonant_freq: float  # Hz

    def __post_init__(self):
        if not self.q_opt >= 1:
            raise ValueError(f"q_opt must be >= 1, got {self.q_opt}")
        for name in ("cross_section", "length", "resonant_freq"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def volume(self) -> float:
        return self.cross_section * self.length

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.resonant_freq


def half_wave_length(freq) -> Quantity:
    freq = as_quantity(freq, FREQUENCY)
    length = CONSTANTS.c / (2 * freq)
    assert_dim(length, LENGTH)
    return length


def cavity_for_species(species: AtomSpecies, area: float = 1e-4, q_opt: float = 1e8) -> CavityConfig:
    """Half-wavelength cavity resonant with the species' hyperfine line."""
    length = half_wave_length(species.hyperfine_freq)
    return CavityConfig(
        q_opt=float(q_opt),
        cross_section=float(as_quantity(area, AREA).value),
        length=float(length.value),
        resonant_freq=species.hyperfine_freq,
    )


def free_space_lifetime_at(freq) -> Quantity:
    # array-friendly core of free_space_lifetime
    omega = 2 * math.pi * as_quantity(freq, FREQUENCY)
    c = CONSTANTS.c
    t1 = 3 * math.pi * CONSTANTS.eps0 * CONSTANTS.hbar * c**5 / (CONSTANTS.mu_B**2 * omega**3)
    assert_dim(t1, TIME)
    return t1


def free_space_lifetime(species: AtomSpecies) -> Quantity:
    """Magnetic-dipole hyperfine lifetime in free space, ``3 pi eps0 hbar c^5 / (mu_B^2 omega^3)``."""
    return free_space_lifetime_at(species.hyperfine_freq)


def purcell_ratio(q_opt, volume, freq) -> Quantity:
    """Cavity-to-free-space lifetime ratio ``(4 pi^2 / 3 Q) V / lambda^3``."""
    q_opt = as_quantity(q_opt, DIMENSIONLESS)
    volume = as_quantity(volume, LENGTH**3)
    wavelength = CONSTANTS.c / as_quantity(freq, FREQUENCY)
    ratio = 4 * math.pi**2 / (3 * q_opt) * volume / wavelength**3
    assert_dim(ratio, DIMENSIONLESS)
    return ratio


def cavity_lifetime(species: AtomSpecies, cavity: CavityConfig) -> Quantity:
    """Hyperfine lifetime inside a resonant cavity of physical volume A*L."""
    nu_a, nu_c = species.hyperfine_freq, cavity.resonant_freq
    if abs(nu_a - nu_c) > RESONANCE_RTOL * nu_a:
        raise ResonanceMismatchError(
            f"cavity resonance {nu_c:.9g} Hz does not match {species.name} hyperfine line {nu_a:.9g} Hz"
        )
    volume = Quantity(cavity.cross_section, AREA) * Quantity(cavity.length, LENGTH)
    t1_cav = purcell_ratio(cavity.q_opt, volume, cavity.resonant_freq) * free_space_lifetime(species)
    assert_dim(t1_cav, TIME)
    return t1_cav


def hold_time(cavity: CavityConfig) -> Quantity:
    """Photon storage time ``Q / omega``."""
    return hold_time_at(cavity.q_opt, cavity.resonant_freq)


def hold_time_at(q_opt, freq) -> Quantity:
    tau = as_quantity(q_opt, DIMENSIONLESS) / (2 * math.pi * as_quantity(freq, FREQUENCY))
    assert_dim(tau, TIME)
    return tau


def superradiant_lifetime(t1_cav, n_atoms) -> Quantity:
    """Collective emission time ``T1_cav / N_at``."""
    t1_cav = as_quantity(t1_cav, TIME)
    n_atoms = as_quantity(n_atoms, DIMENSIONLESS)
    if np.any(n_atoms.value < 1):
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms.value}")
    t_sr = t1_cav / n_atoms
    assert_dim(t_sr, TIME)
    return t_sr
