"""Stochastic models of the two photon sources.

Node 1 is a heralded write/read source with a programmable memory delay:
a write attempt heralds a stored excitation with probability
``herald_prob``; the retrieved photon reaches the beamsplitter with
probability ``bs_arrival_prob`` and a two-photon admixture set by the
excitation parameter ``p`` through the heralded autocorrelation
``g2 = 4 p / (1 + p)^2``.

Node 2 is a blockaded-ensemble source triggered by Node 1's herald.  Its
single-photon quality degrades with the input probe mean photon number
``mu`` through a configurable purity/antibunching/generation family; the
blockade radius follows ``r_b = (C6 * Gamma / Omega_c^2)^(1/6)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigError
from .modes import TemporalMode

MEMORY_DELAY_NS_DEFAULT = 2800.0


@dataclass(frozen=True)
class NumberStats:
    """Per-trial probabilities of one and two photons at the beamsplitter."""

    p1: float
    p2: float

    def __post_init__(self):
        if not (0.0 <= self.p2 <= self.p1 <= 1.0):
            raise ConfigError(f"need 0 <= p2 <= p1 <= 1, got p1={self.p1}, p2={self.p2}")
        if self.p1 + self.p2 > 1.0:
            raise ConfigError("p1 + p2 must not exceed 1")

    @property
    def g2(self) -> float:
        """Zero-delay autocorrelation 2 p2 / p1^2 (0 when the source is off)."""
        if self.p2 == 0.0:
            return 0.0
        return 2.0 * self.p2 / self.p1**2

    @property
    def p0(self) -> float:
        return 1.0 - self.p1 - self.p2


def stats_for_g2(p1: float, g2: float) -> NumberStats:
    """NumberStats with the requested singles probability and autocorrelation."""
    return NumberStats(p1, g2 * p1**2 / 2.0)


def heralded_g2(excitation_param: float) -> float:
    """Heralded read-photon autocorrelation of the write/read source, 4p/(1+p)^2."""
    p = excitation_param
    return 4.0 * p / (1.0 + p) ** 2


def excitation_for_g2(g2: float) -> float:
    """Inverse of :func:`heralded_g2` on the physical branch p in (0, 1]."""
    if g2 <= 0:
        return 0.0
    if g2 > 1.0:
        raise ConfigError("heralded g2 above 1 is outside the model family")
    return ((2.0 - g2) - 2.0 * math.sqrt(1.0 - g2)) / g2


@dataclass(frozen=True)
class DlczConfig:
    """Node 1: heralded source with memory delay.

    Documentation constants from the apparatus (write detuning -40 MHz,
    OD = 6) do not enter the simulation and are not fields here.
    """

    herald_prob: float = 0.0044          # per write trial, tuned to the duty cycle
    retrieval_prob: float = 0.25         # read photon per herald, before path losses
    memory_delay_ns: float = MEMORY_DELAY_NS_DEFAULT
    excitation_param: float = 0.0348     # write-power proxy; g2 = 4p/(1+p)^2 ~ 0.13
    bs_arrival_prob: float = 0.028       # single photon at the beamsplitter per trial
    jitter_sigma_mhz: float = 0.0        # per-trial Gaussian frequency jitter
    target_waveform: Optional[TemporalMode] = None

    def __post_init__(self):
        for name in ("herald_prob", "retrieval_prob", "bs_arrival_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        if not self.memory_delay_ns > 0:
            raise ConfigError("memory delay must be positive")
        if self.jitter_sigma_mhz < 0:
            raise ConfigError("jitter sigma must be non-negative")


@dataclass(frozen=True)
class RydbergConfig:
    """Node 2: triggered blockaded-ensemble source.

    ``purity_weight`` scales how fast purity degrades with ``mu``; the
    knee/saturation parameters shape the generation-probability trend.
    """

    generation_prob: float = 0.14        # photon out of the cloud at the operating point
    bs_arrival_prob: float = 0.0215      # at the beamsplitter, after path losses
    g2_baseline: float = 0.09
    mu: Optional[float] = None           # input probe mean photon number; None = baseline model
    c6_ghz_um6: float = 56000.0          # van der Waals coefficient (103S)
    gamma_mhz: float = 6.07              # excited-state decay rate
    omega_c_mhz: float = 4.95            # coupling Rabi frequency
    n_level: int = 103
    cloud_size_um: float = 13.5          # FWHM
    purity_weight: float = 0.0           # 0 disables the dissipative-purity model
    purity_model: str = "rational"       # "rational" | "exponential"
    g2_slope: float = 0.05               # d(g2)/d(mu)
    mu_sat: float = 0.8                  # generation-probability rise scale
    mu_knee: float = 3.0                 # onset of the generation-probability decline
    mu_falloff: float = 3.0              # decline scale beyond the knee
    jitter_sigma_mhz: float = 0.0
    mu_reference: float = 2.0            # mu at which bs_arrival_prob was calibrated

    def __post_init__(self):
        if not 0.0 <= self.generation_prob <= 1.0:
            raise ConfigError("generation_prob must be in [0, 1]")
        if not 0.0 <= self.bs_arrival_prob <= 1.0:
            raise ConfigError("bs_arrival_prob must be in [0, 1]")
        for name in ("c6_ghz_um6", "gamma_mhz", "omega_c_mhz"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.mu is not None and self.mu < 0:
            raise ConfigError("mu must be non-negative")
        if self.purity_model not in ("rational", "exponential"):
            raise ConfigError("purity_model must be 'rational' or 'exponential'")
        if self.jitter_sigma_mhz < 0:
            raise ConfigError("jitter sigma must be non-negative")


def dlcz_number_stats(cfg: DlczConfig) -> NumberStats:
    """Beamsplitter-arrival number statistics of the heralded source."""
    p = cfg.excitation_param
    if not 0.0 < p <= 0.25:
        raise ConfigError(f"excitation_param must be in (0, 0.25], got {p}")
    return stats_for_g2(cfg.bs_arrival_prob, heralded_g2(p))


def blockade_radius(cfg: RydbergConfig) -> float:
    """Blockade radius (um): (C6 * Gamma / Omega_c^2)^(1/6), C6 in GHz um^6."""
    # C6 converted to MHz um^6 so the ratio carries um^6
    return float((1e3 * cfg.c6_ghz_um6 * cfg.gamma_mhz / cfg.omega_c_mhz**2) ** (1.0 / 6.0))


def with_principal_n(cfg: RydbergConfig, n_level: int) -> RydbergConfig:
    """Rescale interaction parameters to another Rydberg level.

    Uses C6 ~ n^11 and Omega_c ~ n^(-3/2) at fixed coupling power, so the
    blockade radius scales as n^(7/3).
    """
    if n_level <= 0:
        raise ConfigError("principal quantum number must be positive")
    ratio = n_level / cfg.n_level
    return replace(
        cfg,
        c6_ghz_um6=cfg.c6_ghz_um6 * ratio**11,
        omega_c_mhz=cfg.omega_c_mhz * ratio**-1.5,
        n_level=n_level,
    )


def rydberg_models(cfg: RydbergConfig) -> tuple[float, float, float]:
    """(purity, g2, generation probability) at the configured ``mu``.

    purity(mu) = 1 / (1 + w * mu * clip(r_b / cloud, 0, 1)) for the rational
    family (exp(-w mu c) for the exponential one): unity at mu = 0 and
    decreasing more slowly once the blockade radius drops below the cloud.
    g2 grows linearly from its baseline; the generation probability rises
    with scale ``mu_sat`` and declines beyond ``mu_knee``.
    """
    mu = cfg.mu if cfg.mu is not None else cfg.mu_reference
    if mu < 0:
        raise ConfigError("mu must be non-negative")
    confinement = max(0.0, min(1.0, blockade_radius(cfg) / cfg.cloud_size_um))
    load = cfg.purity_weight * mu * confinement
    if cfg.purity_model == "rational":
        purity = 1.0 / (1.0 + load)
    else:
        purity = math.exp(-load)
    g2 = min(1.0, cfg.g2_baseline * (1.0 + cfg.g2_slope * mu))
    gen = cfg.generation_prob * (1.0 - math.exp(-mu / cfg.mu_sat))
    if mu > cfg.mu_knee:
        gen *= math.exp(-(mu - cfg.mu_knee) / cfg.mu_falloff)
    return purity, g2, gen


def rydberg_number_stats(cfg: RydbergConfig) -> NumberStats:
    """Beamsplitter-arrival statistics of the triggered source.

    With ``mu`` unset the calibrated arrival probability and baseline g2
    apply directly; otherwise the arrival probability follows the
    generation-probability trend relative to the calibration point.
    """
    if cfg.mu is None:
        return stats_for_g2(cfg.bs_arrival_prob, cfg.g2_baseline)
    _, g2, gen = rydberg_models(cfg)
    _, _, gen_ref = rydberg_models(replace(cfg, mu=cfg.mu_reference))
    p1 = cfg.bs_arrival_prob * (gen / gen_ref if gen_ref > 0 else 0.0)
    return stats_for_g2(min(p1, 1.0), g2)


@dataclass(frozen=True)
class TrialEmission:
    """Outcome of one source trial."""

    heralded: bool
    photons: int              # 0, 1 or 2 at the beamsplitter
    emission_time_ns: float   # pulse start relative to the trial origin


def _draw_photon_count(stats: NumberStats, rng: np.random.Generator) -> int:
    u = rng.random()
    if u < stats.p2:
        return 2
    if u < stats.p2 + stats.p1:
        return 1
    return 0


def dlcz_sample_trial(
    cfg: DlczConfig, rng: np.random.Generator, herald_time_ns: float = 0.0
) -> TrialEmission:
    """One write attempt: herald, then photon count at the beamsplitter.

    The read photon leaves exactly ``memory_delay_ns`` after the herald;
    unheralded attempts emit nothing.
    """
    if rng.random() >= cfg.herald_prob:
        return TrialEmission(False, 0, 0.0)
    photons = _draw_photon_count(dlcz_number_stats(cfg), rng)
    return TrialEmission(True, photons, herald_time_ns + cfg.memory_delay_ns)


def rydberg_sample_trial(
    cfg: RydbergConfig, trigger_time_ns: float, rng: np.random.Generator
) -> TrialEmission:
    """Photon count of the triggered source; emission scheduled at the trigger."""
    photons = _draw_photon_count(rydberg_number_stats(cfg), rng)
    return TrialEmission(True, photons, trigger_time_ns)
