"""Zadoff-Chu root sequences, cyclic-shift preamble sets and cyclic correlation.

Long PRACH format 0 uses an 839-sample ZC sequence; 64 preambles are derived
from one root by cyclic shifts of ``n_cs`` samples.  All sequences live in the
"sequence domain" (the subcarrier-mapped domain): a received window and a
preamble are directly comparable with a cyclic correlation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ConfigurationError(ValueError):
    """Raised when a PRACH or channel configuration violates its invariants."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, int(math.isqrt(n)) + 1, 2):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class PrachConfig:
    """Preamble-set configuration for long format 0.

    ``n_zc`` must be prime and coprime with the root index so the ZC
    correlation identities hold; ``n_preambles * n_cs`` must fit in one
    sequence period so the per-preamble detection windows do not overlap.
    """

    n_zc: int = 839
    root_u: int = 129
    n_cs: int = 13
    n_preambles: int = 64

    def __post_init__(self) -> None:
        if not _is_prime(self.n_zc):
            raise ConfigurationError(f"n_zc={self.n_zc} must be prime")
        if not 1 <= self.root_u < self.n_zc:
            raise ConfigurationError(f"root_u={self.root_u} out of range 1..{self.n_zc - 1}")
        if math.gcd(self.root_u, self.n_zc) != 1:
            raise ConfigurationError(f"gcd(root_u={self.root_u}, n_zc={self.n_zc}) != 1")
        if self.n_cs < 1:
            raise ConfigurationError("n_cs must be >= 1")
        if self.n_preambles < 1:
            raise ConfigurationError("n_preambles must be >= 1")
        if self.n_preambles * self.n_cs > self.n_zc:
            raise ConfigurationError(
                f"n_preambles*n_cs = {self.n_preambles * self.n_cs} exceeds n_zc = {self.n_zc}"
            )


def generate_root(config: PrachConfig) -> np.ndarray:
    """Return the root sequence x_u(n) = exp(-j*pi*u*n*(n+1)/N), n = 0..N-1.

    The integer exponent u*n*(n+1) is reduced mod 2N exactly (int64) before
    the angle is formed, so every sample is accurate to ~1 ulp even for the
    largest n.
    """
    n = np.arange(config.n_zc, dtype=np.int64)
    # u*n*(n+1) stays well inside int64 for any prime N this tool handles.
    m = (config.root_u * n * (n + 1)) % (2 * config.n_zc)
    return np.exp(-1j * np.pi * m / config.n_zc)


def preamble(config: PrachConfig, v: int, root: np.ndarray | None = None) -> np.ndarray:
    """Preamble ``v``: the root sequence cyclically shifted by C_v = v*n_cs.

    Sample n of the result is root sample (n + C_v) mod N.
    """
    if not 0 <= v < config.n_preambles:
        raise IndexError(f"preamble index {v} out of range 0..{config.n_preambles - 1}")
    if root is None:
        root = generate_root(config)
    shift = (v * config.n_cs) % config.n_zc
    return np.roll(root, -shift)


@dataclass(frozen=True)
class PreambleSet:
    """All ``n_preambles`` sequences of one config, indexed by preamble index."""

    config: PrachConfig
    sequences: np.ndarray  # (n_preambles, n_zc) complex128

    @classmethod
    def build(cls, config: PrachConfig) -> "PreambleSet":
        root = generate_root(config)
        seqs = np.stack([preamble(config, v, root) for v in range(config.n_preambles)])
        seqs.setflags(write=False)
        return cls(config=config, sequences=seqs)

    @property
    def root(self) -> np.ndarray:
        return self.sequences[0]

    def __getitem__(self, v: int) -> np.ndarray:
        if not 0 <= v < self.config.n_preambles:
            raise IndexError(f"preamble index {v} out of range")
        return self.sequences[v]


def cyclic_correlate(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cyclic correlation r[tau] = sum_n a[n] * conj(b[(n+tau) mod N]).

    Computed with FFTs; contractually equal to the direct O(N^2) sum to
    floating-point accuracy.  Raw (unnormalized) sums.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return np.conj(np.fft.ifft(np.conj(np.fft.fft(a)) * np.fft.fft(b)))


def cyclic_correlate_direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """O(N^2) reference implementation of :func:`cyclic_correlate`."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    n = len(a)
    out = np.empty(n, dtype=np.complex128)
    for tau in range(n):
        out[tau] = np.sum(a * np.conj(np.roll(b, -tau)))
    return out
