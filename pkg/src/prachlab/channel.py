"""Sequence-domain PRACH link simulation.

A received window is modeled directly as the 839-point sequence the detector
and classifier consume.  Multipath and timing advance act as per-bin phase
ramps H[k] = sum_i g_i * exp(-j*2*pi*k*(tau_i + ta)/T_seq) applied between the
synthesis and analysis transforms, so a delay of d sequence samples displaces
the cyclic-correlation peak forward by exactly d bins (fractional delays are
exact, via the ramp).  Noise is complex white Gaussian in the window domain,
calibrated against unit nominal signal power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from prachlab.seeds import rng_for
from prachlab.zc import ConfigurationError, PrachConfig

# Long format 0: 839 samples over an 800 us sequence (1.25 kHz spacing).
T_SEQ_US = 800.0

FADING_KINDS = ("none", "rayleigh", "rician")

BUNDLED_PROFILES = ("awgn", "epa", "eva", "etu", "tdlc300", "tdld30")


@dataclass(frozen=True)
class Tap:
    delay_us: float
    power_db: float
    fading: str = "rayleigh"
    k_db: float | None = None  # Rician K-factor; required iff fading == "rician"

    def __post_init__(self) -> None:
        if self.fading not in FADING_KINDS:
            raise ConfigurationError(f"unknown fading kind {self.fading!r}")
        if (self.fading == "rician") != (self.k_db is not None):
            raise ConfigurationError("k_db must be set exactly for rician taps")
        if self.delay_us < 0:
            raise ConfigurationError("tap delays must be non-negative")


@dataclass(frozen=True)
class ChannelProfile:
    """Named tapped-delay-line description plus AWGN.

    Tap powers are normalized to unit total before use; delays must be
    strictly increasing.  The AWGN profile is exactly one non-fading tap at
    delay 0 with power 0 dB.
    """

    name: str
    taps: tuple[Tap, ...]
    doppler_hz: float = 0.0  # informational; block fading draws one gain per window

    def __post_init__(self) -> None:
        if not self.taps:
            raise ConfigurationError("profile needs at least one tap")
        delays = [t.delay_us for t in self.taps]
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ConfigurationError("tap delays must be strictly increasing")
        if self.doppler_hz < 0:
            raise ConfigurationError("doppler_hz must be >= 0")
        if self.name.lower() == "awgn":
            ok = (
                len(self.taps) == 1
                and self.taps[0].delay_us == 0.0
                and self.taps[0].power_db == 0.0
                and self.taps[0].fading == "none"
            )
            if not ok:
                raise ConfigurationError("AWGN profile must be one non-fading 0 dB tap at delay 0")

    @property
    def n_taps(self) -> int:
        return len(self.taps)

    @property
    def delays_us(self) -> np.ndarray:
        return np.array([t.delay_us for t in self.taps])

    @property
    def normalized_powers(self) -> np.ndarray:
        p = 10.0 ** (np.array([t.power_db for t in self.taps]) / 10.0)
        return p / p.sum()

    @property
    def max_delay_us(self) -> float:
        return self.taps[-1].delay_us


def awgn_profile() -> ChannelProfile:
    return ChannelProfile(name="AWGN", taps=(Tap(0.0, 0.0, "none"),), doppler_hz=0.0)


def load_profile(path: str | Path) -> ChannelProfile:
    """Read a channel profile file (YAML; see docs/FORMATS.md)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    try:
        taps = tuple(
            Tap(
                delay_us=float(t["delay_us"]),
                power_db=float(t["power_db"]),
                fading=str(t.get("fading", "rayleigh")),
                k_db=None if t.get("k_db") is None else float(t["k_db"]),
            )
            for t in doc["taps"]
        )
        return ChannelProfile(name=str(doc["name"]), taps=taps, doppler_hz=float(doc.get("doppler_hz", 0.0)))
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed profile file {path}: {exc}") from exc


def get_profile(name: str) -> ChannelProfile:
    """Resolve a bundled profile by name, or load from a file path."""
    key = name.lower()
    if key in BUNDLED_PROFILES:
        ref = resources.files("prachlab") / "profiles" / f"{key}.yaml"
        with resources.as_file(ref) as path:
            return load_profile(path)
    if Path(name).exists():
        return load_profile(name)
    raise ConfigurationError(f"unknown channel profile {name!r} (bundled: {', '.join(BUNDLED_PROFILES)})")


@dataclass(frozen=True)
class ChannelRealization:
    """One block-fading draw: per-antenna, per-tap complex gains."""

    tap_gains: np.ndarray  # (n_antennas, n_taps) complex128
    profile: ChannelProfile
    seed: int | None = None


@dataclass(frozen=True)
class TxScenario:
    preamble_index: int | None  # None = noise-only window
    snr_db: float | None  # None = noise disabled
    ta_us: float = 0.0
    n_antennas: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.ta_us < 0:
            raise ConfigurationError("ta_us must be >= 0")
        if self.n_antennas < 1:
            raise ConfigurationError("n_antennas must be >= 1")


@dataclass(frozen=True)
class ReceivedWindow:
    per_antenna: np.ndarray  # (n_antennas, n_zc) complex128
    scenario: TxScenario
    truth: int | None

    @property
    def n_antennas(self) -> int:
        return self.per_antenna.shape[0]


def realize(
    profile: ChannelProfile, n_antennas: int, seed: int | np.random.Generator
) -> ChannelRealization:
    """Draw per-antenna, per-tap gains; deterministic given the seed.

    Rayleigh taps are CN(0, p_i); Rician taps split p_i between a fixed-power
    random-phase specular path and a CN scatter part; non-fading taps are
    exactly sqrt(p_i) (1+0j for the AWGN profile).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    powers = profile.normalized_powers
    gains = np.empty((n_antennas, profile.n_taps), dtype=np.complex128)
    for i, tap in enumerate(profile.taps):
        p = powers[i]
        if tap.fading == "none":
            gains[:, i] = np.sqrt(p)
        elif tap.fading == "rayleigh":
            g = rng.standard_normal(n_antennas) + 1j * rng.standard_normal(n_antennas)
            gains[:, i] = np.sqrt(p / 2.0) * g
        else:  # rician
            k = 10.0 ** (tap.k_db / 10.0)
            theta = rng.uniform(0.0, 2.0 * np.pi, n_antennas)
            scatter = rng.standard_normal(n_antennas) + 1j * rng.standard_normal(n_antennas)
            los = np.sqrt(k / (k + 1.0)) * np.exp(1j * theta)
            nlos = np.sqrt(1.0 / (k + 1.0)) * scatter / np.sqrt(2.0)
            gains[:, i] = np.sqrt(p) * (los + nlos)
    seed_val = None if isinstance(seed, np.random.Generator) else int(seed)
    return ChannelRealization(tap_gains=gains, profile=profile, seed=seed_val)


def zero_correlation_zone_us(config: PrachConfig) -> float:
    """Delay budget of one preamble window, in microseconds."""
    return config.n_cs * (T_SEQ_US / config.n_zc)


def _frequency_response(realization: ChannelRealization, ta_us: float, n_zc: int) -> np.ndarray:
    """(n_antennas, n_zc) per-bin response from tap gains, delays and TA."""
    delays = (realization.profile.delays_us + ta_us) / T_SEQ_US
    k = np.arange(n_zc)
    ramps = np.exp(-2j * np.pi * np.outer(delays, k))  # (n_taps, n_zc)
    return realization.tap_gains @ ramps


def apply_channel(x: np.ndarray, realization: ChannelRealization, ta_us: float) -> np.ndarray:
    """Noiseless per-antenna reception of sequence ``x``: (n_antennas, n_zc).

    The synthesis/analysis pair is oriented so a positive delay displaces the
    sequence forward: for an integer d-sample delay the output equals
    x[(n + d) mod N] scaled by the tap gain.
    """
    n_zc = len(x)
    prof = realization.profile
    if ta_us == 0.0 and prof.max_delay_us == 0.0:
        # All energy at delay zero: the response is flat, no transforms needed.
        flat = realization.tap_gains.sum(axis=1)
        return flat[:, None] * x[None, :]
    h = _frequency_response(realization, ta_us, n_zc)
    return np.fft.fft(np.fft.ifft(x)[None, :] * h, axis=1)


def transmit(
    preamble_seq: np.ndarray | None,
    realization: ChannelRealization,
    scenario: TxScenario,
    *,
    n_zc: int | None = None,
    zcz_us: float | None = None,
) -> ReceivedWindow:
    """One received window: channel-distorted preamble plus calibrated noise.

    ``preamble_seq`` None produces a noise-only window (``n_zc`` required).
    ``zcz_us``, when given, bounds ta + max tap delay (overlapping preamble
    windows are a configuration error).
    """
    if preamble_seq is None:
        if n_zc is None:
            raise ValueError("n_zc required for noise-only windows")
    else:
        n_zc = len(preamble_seq)
    if scenario.n_antennas != realization.tap_gains.shape[0]:
        raise ConfigurationError("scenario antenna count does not match realization")
    if zcz_us is not None and scenario.ta_us + realization.profile.max_delay_us >= zcz_us:
        raise ConfigurationError(
            f"ta ({scenario.ta_us:.3f} us) + max tap delay "
            f"({realization.profile.max_delay_us:.3f} us) exceeds the "
            f"zero-correlation zone ({zcz_us:.3f} us)"
        )

    if preamble_seq is None:
        signal = np.zeros((scenario.n_antennas, n_zc), dtype=np.complex128)
    else:
        signal = apply_channel(preamble_seq, realization, scenario.ta_us)

    if scenario.snr_db is None:
        window = signal
    else:
        sigma2 = 10.0 ** (-scenario.snr_db / 10.0)  # unit nominal signal power
        rng = rng_for("noise", scenario.seed)
        noise = np.sqrt(sigma2 / 2.0) * (
            rng.standard_normal(signal.shape) + 1j * rng.standard_normal(signal.shape)
        )
        window = signal + noise
    return ReceivedWindow(per_antenna=window, scenario=scenario, truth=scenario.preamble_index)


def simulate_window(
    config: PrachConfig,
    sequences: np.ndarray,
    profile: ChannelProfile,
    scenario: TxScenario,
) -> ReceivedWindow:
    """Realize the channel and transmit, enforcing the delay budget.

    ``sequences`` is the (n_preambles, n_zc) preamble table; the channel
    realization and the noise are both derived from ``scenario.seed``.
    """
    realization = realize(profile, scenario.n_antennas, rng_for("channel", scenario.seed))
    x = None if scenario.preamble_index is None else sequences[scenario.preamble_index]
    return transmit(
        x,
        realization,
        scenario,
        n_zc=config.n_zc,
        zcz_us=zero_correlation_zone_us(config),
    )


def snr_calibration_check(
    profile: ChannelProfile,
    snr_db: float | None,
    n_windows: int,
    *,
    config: PrachConfig | None = None,
    ta_us: float = 0.0,
    n_antennas: int = 1,
    seed: int = 0,
) -> float:
    """Empirical SNR (dB) of generated windows: mean signal power over mean
    noise power, accumulated across ``n_windows`` random-preamble windows.

    Returns +inf when noise is disabled.
    """
    if n_windows < 1000:
        raise ValueError("n_windows must be >= 1000 for a stable estimate")
    if snr_db is None:
        return math.inf
    cfg = config or PrachConfig()
    from prachlab.zc import PreambleSet  # local import to avoid cycle at module load

    seqs = PreambleSet.build(cfg).sequences
    rng = np.random.default_rng(seed)
    sigma2 = 10.0 ** (-snr_db / 10.0)
    sig_power = 0.0
    noise_power = 0.0
    n_samples = 0
    for w in range(n_windows):
        v = int(rng.integers(cfg.n_preambles))
        realization = realize(profile, n_antennas, rng_for("cal", seed, w))
        signal = apply_channel(seqs[v], realization, ta_us)
        noise = np.sqrt(sigma2 / 2.0) * (
            rng.standard_normal(signal.shape) + 1j * rng.standard_normal(signal.shape)
        )
        sig_power += float(np.sum(np.abs(signal) ** 2))
        noise_power += float(np.sum(np.abs(noise) ** 2))
        n_samples += signal.size
    return 10.0 * math.log10(sig_power / noise_power)
