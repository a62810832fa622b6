"""Temporal photon modes, overlaps, and two-photon coincidence densities.

Times are in nanoseconds and frequencies in MHz throughout, so a detuning
``nu`` acquires a phase ``exp(1j * 2*pi * nu * t * 1e-3)`` over ``t`` ns.
Modes are discretized on a shared :class:`TimeGrid` and kept unit-norm:
``sum(|amplitude|^2) * dt == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, WaveformTruncationError

# MHz * ns -> dimensionless cycles
_MHZ_NS = 1e-3

#: Default discretization: one full analysis window at 2 ns resolution.
DEFAULT_GRID_SPAN_NS = 800.0
DEFAULT_GRID_DT_NS = 2.0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time axis: ``n_bins`` bins of width ``dt`` starting at ``t_start``."""

    t_start: float  # ns
    dt: float       # ns
    n_bins: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_bins < 2:
            raise ValueError("need at least 2 bins")

    @property
    def span(self) -> float:
        return self.n_bins * self.dt

    @property
    def t_end(self) -> float:
        return self.t_start + self.span

    def centers(self) -> np.ndarray:
        return self.t_start + (np.arange(self.n_bins) + 0.5) * self.dt

    def edges(self) -> np.ndarray:
        return self.t_start + np.arange(self.n_bins + 1) * self.dt


def default_grid() -> TimeGrid:
    return TimeGrid(0.0, DEFAULT_GRID_DT_NS, int(round(DEFAULT_GRID_SPAN_NS / DEFAULT_GRID_DT_NS)))


def _check_same_grid(a: "TemporalMode", b: "TemporalMode") -> None:
    if a.grid != b.grid:
        raise GridMismatchError(
            f"modes live on different grids: {a.grid} vs {b.grid}; no implicit resampling"
        )


@dataclass(frozen=True)
class TemporalMode:
    """Single-photon temporal amplitude on a grid, with a frequency offset.

    The detuning is stored separately and applied as a phase at overlap
    time; amplitudes stay real-envelope friendly and detuning sweeps do
    not require re-gridding.
    """

    grid: TimeGrid
    amplitude: np.ndarray          # complex, one entry per bin
    detuning_mhz: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=np.complex128)
        if amp.shape != (self.grid.n_bins,):
            raise ValueError("amplitude length must equal grid.n_bins")
        if not np.all(np.isfinite(amp.view(np.float64))):
            raise ValueError("amplitude must be finite everywhere")
        norm = float(np.sum(np.abs(amp) ** 2) * self.grid.dt)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"mode is not unit-norm (got {norm:.8f})")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitude", amp)

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def phased_amplitude(self) -> np.ndarray:
        """Amplitude with the detuning phase baked in (for overlap integrals)."""
        if self.detuning_mhz == 0.0:
            return self.amplitude
        t = self.grid.centers()
        return self.amplitude * np.exp(1j * 2 * np.pi * self.detuning_mhz * _MHZ_NS * t)

    def detuned(self, detuning_mhz: float) -> "TemporalMode":
        """Copy of this mode with an absolute frequency offset."""
        return TemporalMode(self.grid, self.amplitude, float(detuning_mhz))

    def shifted(self, delay_ns: float) -> "TemporalMode":
        """Copy delayed by an integer number of bins (nearest to ``delay_ns``)."""
        k = int(round(delay_ns / self.grid.dt))
        amp = np.roll(self.amplitude, k)
        if k > 0:
            amp[:k] = 0.0
        elif k < 0:
            amp[k:] = 0.0
        norm = np.sum(np.abs(amp) ** 2) * self.grid.dt
        if norm <= 0:
            raise WaveformTruncationError("delay pushes the waveform off the grid")
        return TemporalMode(self.grid, amp / np.sqrt(norm), self.detuning_mhz)


def make_waveform(
    rise_ns: float,
    decay_tau_ns: float,
    grid: TimeGrid | None = None,
    detuning_mhz: float = 0.0,
    max_truncation: float = 0.02,
) -> TemporalMode:
    """Photon waveform: sine^2 intensity rise over ``rise_ns``, then an
    exponential intensity decay with 1/e time ``decay_tau_ns``; peak at
    ``t = rise_ns``.

    The analytic waveform has infinite tail, so the grid always truncates
    some mass; the mode is renormalized on the grid and an error is raised
    when the truncated fraction exceeds ``max_truncation``.
    """
    if rise_ns < 0:
        raise ValueError("rise time must be non-negative")
    if not decay_tau_ns > 0:
        raise ValueError("decay time must be positive")
    if grid is None:
        grid = default_grid()

    t = grid.centers() - grid.t_start
    intensity = np.exp(-np.maximum(t - rise_ns, 0.0) / decay_tau_ns)
    if rise_ns > 0:
        rising = t < rise_ns
        intensity[rising] = np.sin(np.pi * t[rising] / (2 * rise_ns)) ** 2
    intensity[t < 0] = 0.0

    # analytic mass: rise_ns/2 from the sine^2 segment plus tau from the tail
    total_mass = rise_ns / 2.0 + decay_tau_ns
    grid_mass = float(np.sum(intensity) * grid.dt)
    truncated = 1.0 - grid_mass / total_mass
    if truncated > max_truncation:
        raise WaveformTruncationError(
            f"waveform truncated beyond tolerance: {truncated:.3g} of the mass "
            f"falls outside the grid (limit {max_truncation:g})"
        )

    amp = np.sqrt(intensity / grid_mass).astype(np.complex128)
    return TemporalMode(grid, amp, detuning_mhz)


def exponential_mode(
    decay_tau_ns: float,
    grid: TimeGrid | None = None,
    detuning_mhz: float = 0.0,
) -> TemporalMode:
    """One-sided exponential-intensity mode (no rise segment)."""
    return make_waveform(0.0, decay_tau_ns, grid, detuning_mhz)


def mode_overlap(a: TemporalMode, b: TemporalMode) -> complex:
    """Inner product <a|b> on the shared grid, including detuning phases."""
    _check_same_grid(a, b)
    return complex(np.sum(np.conj(a.phased_amplitude()) * b.phased_amplitude()) * a.grid.dt)


def overlap_sq(a: TemporalMode, b: TemporalMode) -> float:
    """|<a|b>|^2, the pure-state indistinguishability of two modes."""
    return abs(mode_overlap(a, b)) ** 2


@dataclass(frozen=True)
class PhotonStateMixture:
    """Statistical mixture of pure temporal modes (spectral impurity model)."""

    components: tuple[tuple[float, TemporalMode], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        weights = np.array([w for w, _ in self.components], dtype=float)
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1 (got {weights.sum():.10f})")
        grid = self.components[0][1].grid
        for _, m in self.components[1:]:
            if m.grid != grid:
                raise GridMismatchError("all mixture components must share one grid")

    @property
    def grid(self) -> TimeGrid:
        return self.components[0][1].grid

    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components], dtype=float)

    def modes(self) -> list[TemporalMode]:
        return [m for _, m in self.components]

    def purity(self) -> float:
        return state_overlap(self, self)


def pure_state(mode: TemporalMode) -> PhotonStateMixture:
    return PhotonStateMixture(((1.0, mode),))


def state_overlap(rho1: PhotonStateMixture, rho2: PhotonStateMixture) -> float:
    """Tr(rho1 rho2) = sum_ij w_i v_j |<m_i|n_j>|^2.

    Equals the purity when both arguments are the same state, and the
    indistinguishability eta when they are the two interfering photons.
    """
    total = 0.0
    for w_i, m_i in rho1.components:
        for v_j, n_j in rho2.components:
            total += w_i * v_j * overlap_sq(m_i, n_j)
    return float(total)


@dataclass(frozen=True)
class Density2D:
    """Two-photon coincidence density over (t1, t2) on a common grid."""

    grid: TimeGrid
    values: np.ndarray   # shape (n_bins, n_bins), non-negative
    total_mass: float | None = None  # derived from values when omitted

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_bins, self.grid.n_bins):
            raise ValueError("values must be n_bins x n_bins")
        if np.any(vals < -1e-15):
            raise ValueError("density values must be non-negative")
        vals = np.clip(vals, 0.0, None)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        mass = float(np.sum(vals) * self.grid.dt**2)
        if self.total_mass is None:
            object.__setattr__(self, "total_mass", mass)
        elif abs(mass - self.total_mass) > 1e-9 * max(1.0, self.total_mass):
            raise ValueError("total_mass inconsistent with values")

    def marginal(self, axis: int = 1) -> np.ndarray:
        """Integrate out one time axis; returns a density over the other."""
        return np.sum(self.values, axis=axis) * self.grid.dt

    def delta_t_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        """Density of dt = t1 - t2, summed along anti-diagonals.

        Returns (offsets_ns, density) where offsets run over
        ``(-(n-1)..n-1) * dt``.
        """
        n = self.grid.n_bins
        dens = np.zeros(2 * n - 1)
        # trace(values, offset=k) sums cells with t2 - t1 = k
        for k in range(-(n - 1), n):
            dens[k + n - 1] = np.trace(self.values, offset=-k)
        offsets = np.arange(-(n - 1), n) * self.grid.dt
        return offsets, dens * self.grid.dt


def joint_coincidence_density(
    m1: TemporalMode, m2: TemporalMode, interfering: bool
) -> Density2D:
    """Cross-port coincidence density for a (1,1) input on a 50/50 splitter.

    Distinguishable photons:  (I1(t1) I2(t2) + I1(t2) I2(t1)) / 4,
    total mass 1/2.  Interfering photons:
    |psi1(t1) psi2(t2) - psi1(t2) psi2(t1)|^2 / 4, total mass
    (1 - |<psi1|psi2>|^2) / 2.
    """
    _check_same_grid(m1, m2)
    if interfering:
        a1 = m1.phased_amplitude()
        a2 = m2.phased_amplitude()
        prod = np.outer(a1, a2)
        vals = np.abs(prod - prod.T) ** 2 / 4.0
    else:
        i1 = m1.intensity()
        i2 = m2.intensity()
        cross = np.outer(i1, i2)
        vals = (cross + cross.T) / 4.0
    return Density2D(m1.grid, vals)


# ---------------------------------------------------------------------------
# Window bookkeeping and the spectral-impurity model
# ---------------------------------------------------------------------------

def window_share(mode: TemporalMode, t_w_ns: float, offset_ns: float = 0.0) -> float:
    """Fraction of the photon's counts inside [offset, offset + t_w) from pulse start."""
    t = mode.grid.centers() - mode.grid.t_start
    inside = (t >= offset_ns) & (t < offset_ns + t_w_ns)
    return float(np.sum(mode.intensity()[inside]) * mode.grid.dt)


def window_length_for_share(mode: TemporalMode, share: float) -> float:
    """Shortest window (anchored at pulse start) containing ``share`` of the counts."""
    if not 0 < share <= 1:
        raise ValueError("share must be in (0, 1]")
    c = np.cumsum(mode.intensity()) * mode.grid.dt
    idx = int(np.searchsorted(c, share * c[-1]))
    idx = min(idx, mode.grid.n_bins - 1)
    return float((idx + 1) * mode.grid.dt)


def gaussian_detuning_mixture(
    base: TemporalMode, sigma_mhz: float, n_components: int = 9
) -> PhotonStateMixture:
    """Mixture of detuned copies of ``base`` sampling a Gaussian detuning law.

    Uses Gauss-Hermite nodes so the discrete mixture reproduces Gaussian
    frequency jitter of standard deviation ``sigma_mhz``.
    """
    if sigma_mhz < 0:
        raise ValueError("sigma must be non-negative")
    if sigma_mhz == 0:
        return pure_state(base)
    nodes, weights = np.polynomial.hermite_e.hermegauss(n_components)
    weights = weights / weights.sum()
    comps = tuple(
        (float(w), base.detuned(base.detuning_mhz + sigma_mhz * float(x)))
        for x, w in zip(nodes, weights)
    )
    return PhotonStateMixture(comps)


def windowed_jitter_eta(
    mode: TemporalMode, sigma_each_mhz: float, t_w_ns: float, offset_ns: float = 0.0
) -> float:
    """Effective indistinguishability inside a window when both photons carry
    independent Gaussian frequency jitter of std ``sigma_each_mhz``.

    Averaging the interference term cos(2 pi dnu (t1 - t2)) over the relative
    detuning dnu ~ N(0, 2 sigma^2) gives a Gaussian kernel in t1 - t2; the
    window average of that kernel over the photon intensity is the eta the
    correlation estimator recovers for that window.
    """
    t = mode.grid.centers() - mode.grid.t_start
    inside = (t >= offset_ns) & (t < offset_ns + t_w_ns)
    ti = t[inside]
    ii = mode.intensity()[inside]
    if ii.sum() <= 0:
        raise ValueError("window contains no waveform mass")
    dt_mat = ti[:, None] - ti[None, :]
    s = sigma_each_mhz * _MHZ_NS
    kernel = np.exp(-4 * np.pi**2 * s**2 * dt_mat**2)
    w = np.outer(ii, ii)
    return float(np.sum(w * kernel) / np.sum(w))


def tune_jitter_sigma(
    mode: TemporalMode,
    target_eta: float,
    t_w_ns: float,
    offset_ns: float = 0.0,
    tol: float = 1e-6,
) -> float:
    """Per-photon jitter sigma (MHz) such that the windowed eta hits ``target_eta``."""
    if not 0 < target_eta < 1:
        raise ValueError("target eta must be in (0, 1)")
    lo, hi = 0.0, 1.0
    while windowed_jitter_eta(mode, hi, t_w_ns, offset_ns) > target_eta:
        hi *= 2
        if hi > 1e4:
            raise RuntimeError("jitter tuning failed to bracket the target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if windowed_jitter_eta(mode, mid, t_w_ns, offset_ns) > target_eta:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def mixture_for_purity(
    base: TemporalMode, purity: float, n_components: int = 9
) -> PhotonStateMixture:
    """Gaussian-detuning mixture of ``base`` with the requested Tr(rho^2)."""
    if not 0 < purity <= 1:
        raise ValueError("purity must be in (0, 1]")
    if purity == 1.0:
        return pure_state(base)
    lo, hi = 0.0, 1.0
    while gaussian_detuning_mixture(base, hi, n_components).purity() > purity:
        hi *= 2
        if hi > 1e4:
            raise RuntimeError("purity tuning failed to bracket the target")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if gaussian_detuning_mixture(base, mid, n_components).purity() > purity:
            lo = mid
        else:
            hi = mid
    return gaussian_detuning_mixture(base, 0.5 * (lo + hi), n_components)
