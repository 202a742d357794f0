"""Simulation and design bench for detecting dynamical-Casimir photons with a
superradiant hyperfine ensemble."""

__version__ = "0.1.0"

from .atom_cavity import (  # noqa: E402
    SPECIES,
    AtomSpecies,
    CavityConfig,
    cavity_for_species,
    cavity_lifetime,
    free_space_lifetime,
    get_species,
    hold_time,
    superradiant_lifetime,
)
from .casimir_source import (  # noqa: E402
    DriveConfig,
    SeedState,
    fbar_drive_power,
    photon_count,
    saturated_count,
    saturated_power,
    thermal_occupancy,
)
from .design_bench import (  # noqa: E402
    ConfigError,
    ExperimentScenario,
    build_scenario,
    check_constraints,
    default_scenario,
    evaluate_scenario,
    reproduce_table1,
    sweep,
)
from .discrimination import (  # noqa: E402
    borderline_scan,
    deterministic_discrimination,
    mc_discrimination,
)
from .quantities import CONSTANTS, Dimension, DimensionError, Quantity, assert_dim  # noqa: E402
from .superradiance import (  # noqa: E402
    EnsembleState,
    delay_time,
    peak_power,
    pulse_shape,
    sample_delays,
)
