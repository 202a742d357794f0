"""Telling a Casimir-seeded burst apart from superfluorescence by its delay.

Two delay measurements are compared: the background burst triggered by
spontaneous emission (no seed photons) and the burst seeded by the Casimir
population. With a relative timing error ``sigma`` on each measurement the
default ``"quadrature"`` rule calls them distinguishable when

    T_D0 - T_D > sigma * sqrt(T_D0**2 + T_D**2)

i.e. ``shift > sigma * sqrt(1 + (1 - shift)**2)`` with
``shift = (T_D0 - T_D) / T_D0``. The ``"single"`` rule compares the shift
against ``sigma`` alone.

The ensemble's own ``n_seed`` counts photons present in both cases (thermal
background); the Casimir photons are added on top for the seeded burst.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from .superradiance import DelayDistribution, EnsembleState, delay, delay_time, sample_delays

__all__ = [
    "DiscriminationReport",
    "BorderlineScan",
    "RULES",
    "discrimination_threshold",
    "relative_shift",
    "deterministic_discrimination",
    "borderline_scan",
    "mc_discrimination",
    "MC_OVERLAP_LIMIT",
]

RULES = ("quadrature", "single")
MC_OVERLAP_LIMIT = 0.05
MC_MIN_TRIALS = 100


@dataclass(frozen=True)
class DiscriminationReport:
    t_d_casimir: float
    t_d_background: float
    relative_shift: float
    timing_error: Optional[float]
    threshold: Optional[float]
    discriminable: bool
    rule: str
    mc_overlap: Optional[float] = None
    n_trials: Optional[int] = None
    rng_seed: Optional[int] = None
    window: Optional[float] = None
    casimir_detected_fraction: Optional[float] = None
    background_detected_fraction: Optional[float] = None
    seeded_delays: Optional[DelayDistribution] = field(default=None, repr=False, compare=False)
    background_delays: Optional[DelayDistribution] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if not f.name.endswith("_delays")}
        if self.seeded_delays is not None:
            out["seeded_summary"] = self.seeded_delays.summary()
            out["background_summary"] = self.background_delays.summary()
        return out


@dataclass(frozen=True)
class BorderlineScan:
    qe: np.ndarray
    n_casimir: np.ndarray
    relative_shift: np.ndarray
    threshold: np.ndarray
    discriminable: np.ndarray
    crossing: Optional[float]
    timing_error: float
    rule: str

    def rows(self) -> list[tuple[float, float, bool]]:
        return [(float(q), float(s), bool(d)) for q, s, d in zip(self.qe, self.relative_shift, self.discriminable)]


def relative_shift(n_atoms, n_casimir, n_background=0.0):
    """``(T_D0 - T_D) / T_D0``; independent of T_SR.

    Equals ``ln(1 + n_casimir) / ln(N_at)`` without background photons.
    """
    b = np.asarray(n_background, dtype=float)
    return np.log1p(np.asarray(n_casimir) / (1 + b)) / np.log(np.asarray(n_atoms) / (1 + b))


def discrimination_threshold(shift, timing_error: float, rule: str = "quadrature"):
    if rule == "quadrature":
        return timing_error * np.sqrt(1.0 + (1.0 - np.asarray(shift)) ** 2)
    if rule == "single":
        return np.full_like(np.asarray(shift, dtype=float), timing_error)
    raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")


def deterministic_discrimination(
    ens: EnsembleState, n_casimir: float, timing_error: float = 0.1, rule: str = "quadrature"
) -> DiscriminationReport:
    """Compare the seeded and background mean delays at a given timing error."""
    if not 0 < timing_error < 1:
        raise ValueError(f"timing_error must be in (0, 1), got {timing_error}")
    if n_casimir < 0:
        raise ValueError("n_casimir must be >= 0")
    t_bg = float(delay_time(ens).value)
    t_cas = float(delay_time(ens.with_seed(ens.n_seed + n_casimir)).value)
    shift = float(relative_shift(ens.n_atoms, n_casimir, ens.n_seed))
    thr = float(discrimination_threshold(shift, timing_error, rule))
    return DiscriminationReport(
        t_d_casimir=t_cas,
        t_d_background=t_bg,
        relative_shift=shift,
        timing_error=timing_error,
        threshold=thr,
        discriminable=bool(shift > thr),
        rule=rule,
    )


def borderline_scan(
    ens: EnsembleState, timing_error: float, qe_grid, n0: float = 1.0, rule: str = "quadrature"
) -> BorderlineScan:
    """Sweep Q*eps, seeding with ``n0 sinh^2(2 Q eps)`` photons.

    ``crossing`` is where the discriminability margin (shift minus
    threshold) changes sign, found by linear interpolation between the
    bracketing grid points; None if the verdict never flips.
    """
    qe = np.asarray(qe_grid, dtype=float)
    if qe.ndim != 1 or qe.size == 0:
        raise ValueError("qe_grid must be a nonempty 1-D array")
    if np.any(qe < 0):
        raise ValueError("qe_grid values must be >= 0")
    n_cas = n0 * np.sinh(2 * qe) ** 2
    shift = relative_shift(ens.n_atoms, n_cas, ens.n_seed)
    thr = discrimination_threshold(shift, timing_error, rule)
    margin = shift - thr
    disc = margin > 0

    crossing = None
    flips = np.nonzero(~disc[:-1] & disc[1:])[0]
    if flips.size:
        i = int(flips[0])
        m0, m1 = margin[i], margin[i + 1]
        crossing = float(qe[i] + (qe[i + 1] - qe[i]) * (-m0) / (m1 - m0))
    elif disc.size and disc[0]:
        crossing = float(qe[0])
    return BorderlineScan(qe, n_cas, shift, thr, disc, crossing, timing_error, rule)


def mc_discrimination(
    ens: EnsembleState,
    n_casimir: float,
    n_trials: int,
    rng_seed: int,
    *,
    window: Optional[float] = None,
    workers: int = 1,
) -> DiscriminationReport:
    """Monte Carlo verdict from paired seeded and background delay samples.

    The overlap is the empirical probability that a background burst comes
    no later than the median seeded burst; the pair is discriminable when it
    is below 5%. With an observation ``window`` (atoms removed at that time)
    later bursts are non-detections: the seeded median is taken over detected
    events and a background burst only counts if detected. Both delay
    distributions ride along on the report.
    """
    if n_trials < MC_MIN_TRIALS:
        raise ValueError(f"n_trials must be >= {MC_MIN_TRIALS}, got {n_trials}")
    seeded = sample_delays(ens.with_seed(ens.n_seed + n_casimir), n_trials, rng_seed, stream=0, workers=workers)
    background = sample_delays(ens, n_trials, rng_seed, stream=1, workers=workers)

    cas, bg = seeded.samples, background.samples
    if window is None:
        cas_det = np.ones(cas.shape, bool)
        bg_det = np.ones(bg.shape, bool)
    else:
        cas_det = cas <= window
        bg_det = bg <= window
    if cas_det.any():
        median_cas = float(np.median(cas[cas_det]))
        overlap = float(np.mean(bg_det & (bg <= median_cas)))
    else:
        overlap = float(np.mean(bg_det))

    t_bg = float(delay(ens.t_sr, ens.n_atoms, ens.n_seed).value)
    t_cas = float(delay(ens.t_sr, ens.n_atoms, ens.n_seed + n_casimir).value)
    report = DiscriminationReport(
        t_d_casimir=t_cas,
        t_d_background=t_bg,
        relative_shift=float(relative_shift(ens.n_atoms, n_casimir, ens.n_seed)),
        timing_error=None,
        threshold=MC_OVERLAP_LIMIT,
        discriminable=bool(overlap < MC_OVERLAP_LIMIT),
        rule="mc_overlap",
        mc_overlap=overlap,
        n_trials=int(n_trials),
        rng_seed=int(rng_seed),
        window=window,
        casimir_detected_fraction=float(cas_det.mean()),
        background_detected_fraction=float(bg_det.mean()),
        seeded_delays=seeded,
        background_delays=background,
    )
    return report


def spread_to_delay_ratio(dist) -> float:
    """Background spread relative to its mean delay, the MC resolution scale."""
    return dist.std / dist.mean if dist.mean > 0 else math.inf
