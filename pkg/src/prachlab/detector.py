"""Cyclic-correlation preamble detector with a calibrated threshold.

The received window is correlated against the root sequence; the squared
magnitude (non-coherently summed over antennas) forms a power delay profile
whose bins partition into per-preamble windows of ``n_cs`` bins.  A preamble
is declared when its window peak exceeds ``threshold_factor`` times the
estimated noise floor.  Decisions are scale invariant: peak and floor scale
together under any rescaling of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from prachlab.channel import ChannelProfile, ReceivedWindow, TxScenario, transmit
from prachlab.seeds import derive_seed
from prachlab.zc import ConfigurationError, PrachConfig, cyclic_correlate


@dataclass(frozen=True)
class DetectorConfig:
    threshold_factor: float
    n_cs: int = 13
    noise_floor_estimator: str = "mean"  # or "median"

    def __post_init__(self) -> None:
        if self.threshold_factor <= 1.0:
            raise ConfigurationError("threshold_factor must be > 1")
        if self.noise_floor_estimator not in ("mean", "median"):
            raise ConfigurationError("noise_floor_estimator must be 'mean' or 'median'")


@dataclass(frozen=True)
class PowerDelayProfile:
    bins: np.ndarray  # (n_zc,) non-negative reals, linear power
    root_u: int


@dataclass(frozen=True)
class Detection:
    preamble_index: int
    peak_power: float
    delay_samples: int


@dataclass(frozen=True)
class DetectionResult:
    detections: tuple[Detection, ...] = field(default_factory=tuple)

    @property
    def indices(self) -> list[int]:
        return [d.preamble_index for d in self.detections]


def compute_pdp(window: ReceivedWindow | np.ndarray, root: np.ndarray, root_u: int = 0) -> PowerDelayProfile:
    """Magnitude-squared cyclic correlation against the root, summed over antennas."""
    if isinstance(window, ReceivedWindow):
        antennas = window.per_antenna
    else:
        antennas = np.atleast_2d(np.asarray(window))
    if antennas.shape[1] != len(root):
        raise ValueError(f"window length {antennas.shape[1]} != root length {len(root)}")
    bins = np.zeros(len(root))
    for a in range(antennas.shape[0]):
        bins += np.abs(cyclic_correlate(antennas[a], root)) ** 2
    return PowerDelayProfile(bins=bins, root_u=root_u)


def _noise_floor(bins: np.ndarray, estimator: str) -> float:
    return float(np.median(bins)) if estimator == "median" else float(np.mean(bins))


def detect(pdp: PowerDelayProfile, cfg: DetectorConfig, n_preambles: int = 64) -> DetectionResult:
    """Threshold the per-preamble window peaks against the estimated floor.

    Window v spans bins [v*n_cs, (v+1)*n_cs); only the window's max bin
    competes against the threshold.  The floor is estimated over all bins.
    """
    bins = pdp.bins
    floor = _noise_floor(bins, cfg.noise_floor_estimator)
    threshold = cfg.threshold_factor * floor
    found = []
    for v in range(n_preambles):
        lo = v * cfg.n_cs
        window = bins[lo : lo + cfg.n_cs]
        peak_off = int(np.argmax(window))
        peak = float(window[peak_off])
        if peak > threshold:
            found.append(Detection(preamble_index=v, peak_power=peak, delay_samples=peak_off))
    return DetectionResult(detections=tuple(found))


def noise_window_stats(
    profile: ChannelProfile,
    cfg_template: DetectorConfig,
    config: PrachConfig,
    root: np.ndarray,
    n_windows: int,
    n_antennas: int = 1,
    seed: int = 0,
) -> np.ndarray:
    """Per-noise-window ratio of the best window peak to the floor estimate.

    A window fires at threshold factor f iff its ratio exceeds f, so these
    ratios fully determine the empirical false-alarm fraction of any factor.
    Noise-only windows carry no signal; the profile parameter is accepted for
    interface symmetry (tap structure cannot affect pure noise).
    """
    ratios = np.empty(n_windows)
    from prachlab.channel import ChannelRealization

    gains = np.ones((n_antennas, profile.n_taps), dtype=np.complex128)
    realization = ChannelRealization(tap_gains=gains, profile=profile, seed=None)
    for w in range(n_windows):
        scenario = TxScenario(
            preamble_index=None,
            snr_db=0.0,
            ta_us=0.0,
            n_antennas=n_antennas,
            seed=derive_seed("calibration", seed, w),
        )
        window = transmit(None, realization, scenario, n_zc=config.n_zc)
        pdp = compute_pdp(window, root, config.root_u)
        floor = _noise_floor(pdp.bins, cfg_template.noise_floor_estimator)
        usable = config.n_preambles * cfg_template.n_cs
        peaks = pdp.bins[:usable].reshape(config.n_preambles, cfg_template.n_cs).max(axis=1)
        ratios[w] = peaks.max() / floor
    return ratios


def calibrate_threshold(
    profile: ChannelProfile,
    target_far: float,
    n_noise_windows: int,
    cfg_template: DetectorConfig | None = None,
    *,
    config: PrachConfig | None = None,
    n_antennas: int = 1,
    seed: int = 0,
    factor_bounds: tuple[float, float] = (1.0, 100.0),
    tolerance: float = 0.01,
) -> float:
    """Smallest threshold factor whose empirical noise-only FA rate <= target.

    Binary search over the factor (tolerance 0.01) against a fixed set of
    ``n_noise_windows`` noise-only windows.  Raises if even the upper search
    bound cannot reach the target.
    """
    if not 0.0 < target_far <= 1.0:
        raise ValueError("target_far must be in (0, 1]")
    if n_noise_windows < math.ceil(10.0 / target_far):
        raise ValueError(
            f"n_noise_windows={n_noise_windows} too small; need >= {math.ceil(10.0 / target_far)}"
        )
    config = config or PrachConfig()
    cfg_template = cfg_template or DetectorConfig(threshold_factor=2.0, n_cs=config.n_cs)
    from prachlab.zc import generate_root

    root = generate_root(config)
    ratios = noise_window_stats(
        profile, cfg_template, config, root, n_noise_windows, n_antennas=n_antennas, seed=seed
    )

    def fa_rate(factor: float) -> float:
        return float(np.mean(ratios > factor))

    lo, hi = factor_bounds
    if fa_rate(hi) > target_far:
        raise RuntimeError(
            f"cannot reach FA target {target_far} with threshold factor <= {hi}"
        )
    if fa_rate(lo) <= target_far:
        return lo
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if fa_rate(mid) <= target_far:
            hi = mid
        else:
            lo = mid
    return hi
