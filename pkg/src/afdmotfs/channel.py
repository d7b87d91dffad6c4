"""Doubly-dispersive cyclic channel, AWGN, and ZF/MMSE equalization.

The channel acts on an N-sample block as ``H = sum_l h_l D(theta_l) Pi**l``
where ``Pi`` is the forward cyclic shift and ``D(theta)`` the diagonal
Doppler ramp ``exp(2j*pi*theta*n/N)``. No prefix is inserted; the cyclic
model is applied to the block directly.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import core

__all__ = [
    "ChannelTap",
    "ChannelSpec",
    "IllConditionedChannelError",
    "build_channel_matrix",
    "apply_channel",
    "random_channel",
    "noise_variance",
    "apply_awgn",
    "zf_equalizer",
    "mmse_equalizer",
]

MAX_CONDITION = 1e12


class IllConditionedChannelError(np.linalg.LinAlgError):
    """Raised when a channel matrix is too close to singular for zero forcing."""


@dataclass(frozen=True)
class ChannelTap:
    gain: complex
    delay: int
    doppler: float = 0.0


@dataclass(frozen=True)
class ChannelSpec:
    """Taps of a cyclic doubly-dispersive channel over an ``n``-sample frame."""

    taps: tuple
    theta_max: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "taps", tuple(self.taps))
        if self.n < 1:
            raise ValueError(f"frame length must be positive, got {self.n}")
        if not self.taps or all(t.gain == 0 for t in self.taps):
            raise ValueError("channel needs at least one tap with nonzero gain")
        if self.theta_max < 0:
            raise ValueError("theta_max must be nonnegative")
        for t in self.taps:
            if not 0 <= t.delay < self.n:
                raise ValueError(f"tap delay {t.delay} outside [0, {self.n})")
            if not -1e-12 <= t.doppler <= self.theta_max + 1e-12:
                raise ValueError(
                    f"tap Doppler {t.doppler} outside [0, {self.theta_max}]"
                )

    @property
    def channel_length(self) -> int:
        return 1 + max(t.delay for t in self.taps)

    @property
    def power(self) -> float:
        return float(sum(abs(t.gain) ** 2 for t in self.taps))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "theta_max": self.theta_max,
            "gains": [[complex(t.gain).real, complex(t.gain).imag] for t in self.taps],
            "delays": [t.delay for t in self.taps],
            "dopplers": [t.doppler for t in self.taps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelSpec":
        expected = {"n", "theta_max", "gains", "delays", "dopplers"}
        keys = set(data)
        if keys != expected:
            raise ValueError(
                f"channel spec keys {sorted(keys)} differ from {sorted(expected)}"
            )
        gains, delays, dopplers = data["gains"], data["delays"], data["dopplers"]
        if not len(gains) == len(delays) == len(dopplers):
            raise ValueError("gains, delays and dopplers must have equal length")
        taps = [
            ChannelTap(complex(g[0], g[1]), int(l), float(th))
            for g, l, th in zip(gains, delays, dopplers)
        ]
        return cls(tuple(taps), float(data["theta_max"]), int(data["n"]))


def build_channel_matrix(spec: ChannelSpec) -> np.ndarray:
    """Dense ``H = sum_l h_l D(theta_l) Pi**l``."""
    n = spec.n
    h = np.zeros((n, n), dtype=complex)
    for tap in spec.taps:
        ramp = core.doppler_vector(tap.doppler, n)
        h += tap.gain * (ramp[:, None] * core.cyclic_shift_matrix(tap.delay, n))
    return h


def apply_channel(x, spec: ChannelSpec) -> np.ndarray:
    """Matrix-free ``H @ x`` along the last axis."""
    x = np.asarray(x, dtype=complex)
    y = np.zeros_like(x)
    for tap in spec.taps:
        ramp = core.doppler_vector(tap.doppler, spec.n)
        y += tap.gain * ramp * core.apply_cyclic_shift(x, tap.delay)
    return y


def random_channel(n_taps: int, theta_max: float, n: int, rng) -> ChannelSpec:
    """Rayleigh taps at delays ``0..n_taps-1`` with unit total power.

    Gains are i.i.d. circular complex Gaussian (uniform power-delay profile)
    and Dopplers i.i.d. uniform on ``[0, theta_max]``.
    """
    if not 1 <= n_taps <= n:
        raise ValueError(f"need 1 <= n_taps <= n, got n_taps={n_taps}, n={n}")
    gains = rng.standard_normal(n_taps) + 1j * rng.standard_normal(n_taps)
    gains /= np.linalg.norm(gains)
    dopplers = rng.uniform(0.0, theta_max, n_taps)
    taps = tuple(
        ChannelTap(complex(g), l, float(th))
        for l, (g, th) in enumerate(zip(gains, dopplers))
    )
    return ChannelSpec(taps, float(theta_max), int(n))


def noise_variance(snr_db: float, signal_power: float = 1.0) -> float:
    """Per-sample complex noise variance ``signal_power * 10**(-snr_db/10)``."""
    if signal_power <= 0:
        raise ValueError("signal_power must be positive")
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return signal_power * 10.0 ** (-snr_db / 10.0)


def apply_awgn(x, snr_db: float, signal_power: float = 1.0, rng=None) -> np.ndarray:
    """Add circular complex Gaussian noise at the given SNR.

    ``snr_db = inf`` returns an exact copy of ``x``.
    """
    x = np.asarray(x, dtype=complex)
    var = noise_variance(snr_db, signal_power)
    if var == 0.0:
        return x.copy()
    if rng is None:
        rng = np.random.default_rng()
    w = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return x + math.sqrt(var / 2.0) * w


def zf_equalizer(h) -> np.ndarray:
    """Zero-forcing equalizer ``G = H^-1``.

    Raises
    ------
    IllConditionedChannelError
        If ``cond(H) >= 1e12``.
    """
    h = np.asarray(h, dtype=complex)
    cond = np.linalg.cond(h)
    if not np.isfinite(cond) or cond >= MAX_CONDITION:
        raise IllConditionedChannelError(f"channel condition number {cond:.3g}")
    return np.linalg.inv(h)


def mmse_equalizer(h, noise_variance: float) -> np.ndarray:
    """MMSE equalizer ``G = H^H (H H^H + s2 I)^-1`` for unit-power symbols."""
    if noise_variance < 0:
        raise ValueError("noise variance must be nonnegative")
    h = np.asarray(h, dtype=complex)
    gram = h @ h.conj().T + noise_variance * np.eye(h.shape[0])
    # gram is Hermitian, so (gram^-1 H)^H = H^H gram^-1
    return np.linalg.solve(gram, h).conj().T
