"""Photon generation by a parametrically driven cavity wall.

Covers parametric growth of the cavity photon number, its saturation at the
cavity hold time, the saturated radiated power, the electrical power needed
to drive the FBAR wall, and the thermal seed population.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantities import (
    AREA,
    CONSTANTS,
    DENSITY,
    DIMENSIONLESS,
    FREQUENCY,
    POWER,
    TEMPERATURE,
    TIME,
    VELOCITY,
    Quantity,
    as_quantity,
    assert_dim,
    dimensionless_fn,
)

__all__ = [
    "DriveConfig",
    "SeedState",
    "SaturationRangeError",
    "MAX_SINH_ARGUMENT",
    "FBAR_DAMAGE_THRESHOLD_W",
    "photon_count",
    "saturated_count",
    "saturated_power",
    "fbar_drive_power",
    "film_drive_power",
    "thermal_occupancy",
]

# sinh itself overflows near 710, but its square already does past ~355.2
MAX_SINH_ARGUMENT = 355.0
FBAR_DAMAGE_THRESHOLD_W = 10.0


class SaturationRangeError(OverflowError):
    """Squeezing argument too large for direct evaluation of sinh^2."""


@dataclass(frozen=True)
class DriveConfig:
    """FBAR wall drive. All fields SI.

    mech_freq is the angular mechanical frequency (rad/s); modulation_depth
    is the peak wall velocity over c.
    """

    mech_freq: float
    modulation_depth: float
    mech_q: float = 1e3
    area: float = 1e-4
    density: float = 1e3
    acoustic_velocity: float = 1.04e4

    def __post_init__(self):
        if not self.mech_freq > 0:
            raise ValueError(f"mech_freq must be > 0, got {self.mech_freq}")
        if not 0 <= self.modulation_depth < 1:
            raise ValueError(f"modulation_depth must be in [0, 1), got {self.modulation_depth}")
        if not self.mech_q >= 1:
            raise ValueError(f"mech_q must be >= 1, got {self.mech_q}")
        for name in ("area", "density", "acoustic_velocity"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class SeedState:
    """Initial cavity population: n0 = 1 is the vacuum convention."""

    n0: float = 1.0
    n_thermal: float = 0.0

    def __post_init__(self):
        if not self.n0 >= 0:
            raise ValueError(f"n0 must be >= 0, got {self.n0}")
        if not self.n_thermal >= 0:
            raise ValueError(f"n_thermal must be >= 0, got {self.n_thermal}")


def _sinh_squared(arg: Quantity) -> Quantity:
    x = arg.magnitude()
    if np.any(np.abs(x) > MAX_SINH_ARGUMENT):
        raise SaturationRangeError(
            f"squeezing argument {np.max(np.abs(x)):.4g} exceeds {MAX_SINH_ARGUMENT}; "
            "the photon number overflows, use the saturated (hold-time limited) form"
        )
    return dimensionless_fn(np.sinh, arg) ** 2


def photon_count(seed: SeedState, drive: DriveConfig, t) -> Quantity:
    """Mean photon number ``N0 sinh^2(Omega eps t)`` after driving for ``t``.

    Parametric resonance (drive at twice the cavity frequency) is assumed,
    not checked; the scenario builder is where detuning gets flagged.
    """
    t = as_quantity(t, TIME)
    if np.any(t.value < 0):
        raise ValueError("t must be >= 0")
    omega_mech = Quantity(drive.mech_freq, FREQUENCY)
    arg = omega_mech * drive.modulation_depth * t
    n = Quantity(seed.n0) * _sinh_squared(arg)
    assert_dim(n, DIMENSIONLESS)
    return n


def saturated_count(seed: SeedState, q_opt, eps) -> Quantity:
    """Photon number reached at the hold time, ``N0 sinh^2(2 Q eps)``."""
    q_opt = as_quantity(q_opt, DIMENSIONLESS)
    eps = as_quantity(eps, DIMENSIONLESS)
    if np.any(q_opt.value < 1):
        raise ValueError("q_opt must be >= 1")
    if np.any(eps.value < 0):
        raise ValueError("modulation depth must be >= 0")
    n = Quantity(seed.n0) * _sinh_squared(2 * q_opt * eps)
    assert_dim(n, DIMENSIONLESS)
    return n


def saturated_power(n_max, omega, q_opt) -> Quantity:
    """Power leaking out of the saturated cavity, ``N_max hbar omega / tau``.

    ``omega`` is the angular cavity frequency and ``tau = q_opt / omega``.
    """
    n_max = as_quantity(n_max, DIMENSIONLESS)
    omega = as_quantity(omega, FREQUENCY)
    q_opt = as_quantity(q_opt, DIMENSIONLESS)
    if np.any(omega.value <= 0):
        raise ValueError("omega must be > 0")
    tau = q_opt / omega
    p = n_max * CONSTANTS.hbar * omega / tau
    assert_dim(p, POWER)
    return p


def fbar_drive_power(drive: DriveConfig) -> Quantity:
    """Mechanical power dissipated in the FBAR film.

    Kinetic energy of a half-acoustic-wavelength film lost every Q_m/Omega;
    the frequency cancels, leaving ``rho A v_a pi^3 eps^2 c^2 / Q_m``.
    """
    return film_drive_power(
        drive.density, drive.area, drive.acoustic_velocity, drive.modulation_depth, drive.mech_q
    )


def film_drive_power(density, area, acoustic_velocity, modulation_depth, mech_q) -> Quantity:
    # array-friendly core of fbar_drive_power, used by sweeps
    rho = as_quantity(density, DENSITY)
    area = as_quantity(area, AREA)
    v_a = as_quantity(acoustic_velocity, VELOCITY)
    eps = as_quantity(modulation_depth, DIMENSIONLESS)
    q_m = as_quantity(mech_q, DIMENSIONLESS)
    p = rho * area * v_a * math.pi**3 * eps**2 * CONSTANTS.c**2 / q_m
    assert_dim(p, POWER)
    return p


def thermal_occupancy(freq, temperature) -> Quantity:
    """Bose-Einstein mean occupancy of a mode at ``freq`` (Hz); 0 at T=0."""
    freq = as_quantity(freq, FREQUENCY)
    temperature = as_quantity(temperature, TEMPERATURE)
    if np.any(freq.value <= 0):
        raise ValueError("freq must be > 0")
    if np.any(temperature.value < 0):
        raise ValueError("temperature must be >= 0")
    t = np.asarray(temperature.value, dtype=float)
    hot = t > 0
    safe_kT = CONSTANTS.k_B * Quantity(np.where(hot, t, 1.0), TEMPERATURE)
    x = (CONSTANTS.h * freq / safe_kT).magnitude()
    with np.errstate(over="ignore"):
        n = np.where(hot, 1.0 / np.expm1(x), 0.0)
    if np.ndim(n) == 0:
        n = float(n)
    return Quantity(n, DIMENSIONLESS)
