"""AFDM, OTFS and OFDM written as unitary precoders of OFDM.

A frame of N symbols ``d`` is transmitted as ``x = F^H Q d`` where ``F`` is
the unitary DFT and ``Q`` the waveform precoder:

* OFDM: ``Q = I``
* AFDM: ``Q = F L(c1) F^H L(c2)`` with ``L(c) = diag(exp(2j*pi*c*k**2))``
* OTFS: ``Q = F (F_L^H kron I_K)`` on a K x L delay-Doppler grid

Demodulation is ``d_hat = Q^H F x_hat``. All precoders apply matrix-free via
FFTs; :attr:`Precoder.matrix` gives the dense form.
"""

import math
import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import core

__all__ = [
    "AfdmParams",
    "OtfsParams",
    "Precoder",
    "afdm_precoder",
    "otfs_precoder",
    "ofdm_precoder",
    "modulate",
    "demodulate",
    "afdm_fast_demod",
    "derotate_c2",
    "compute_s1",
    "PrecoderCache",
    "default_cache",
]

AFDM = "afdm"
OTFS = "otfs"
OFDM = "ofdm"


@dataclass(frozen=True)
class AfdmParams:
    """Chirp parameters of an AFDM frame with ``n_subcarriers`` samples."""

    n_subcarriers: int
    c1: float
    c2: float

    def __post_init__(self):
        if int(self.n_subcarriers) != self.n_subcarriers or self.n_subcarriers < 2:
            raise ValueError(f"AFDM needs n_subcarriers >= 2, got {self.n_subcarriers}")
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise ValueError("chirp parameters must be finite")

    def full_diversity(self, theta_max: float) -> bool:
        """Whether ``c1 >= theta_max/N`` and ``c2 < 1/N`` hold."""
        n = self.n_subcarriers
        return self.c1 >= theta_max / n and self.c2 < 1.0 / n


@dataclass(frozen=True)
class OtfsParams:
    """Delay-Doppler grid of ``doppler_bins`` (K) by ``delay_bins`` (L), N = K*L."""

    n_subcarriers: int
    doppler_bins: int
    delay_bins: int

    def __post_init__(self):
        for name in ("n_subcarriers", "doppler_bins", "delay_bins"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.doppler_bins * self.delay_bins != self.n_subcarriers:
            raise ValueError(
                f"grid {self.doppler_bins}x{self.delay_bins} does not tile "
                f"N={self.n_subcarriers}"
            )

    @classmethod
    def from_k(cls, n: int, k: int) -> "OtfsParams":
        if k < 1 or n % k:
            raise ValueError(f"K={k} does not divide N={n}")
        return cls(n, k, n // k)


@dataclass(frozen=True, eq=False)
class Precoder:
    """Unitary N x N precoder ``Q`` with FFT-based forward and inverse application.

    ``apply`` and ``apply_inverse`` act on the last axis and broadcast over
    any leading batch axes.
    """

    waveform: str
    n: int
    params: object = None
    _chirp1: np.ndarray = field(default=None, repr=False)
    _chirp2: np.ndarray = field(default=None, repr=False)

    def apply(self, d) -> np.ndarray:
        """Return ``Q @ d``."""
        d = self._check(d)
        if self.waveform == AFDM:
            return core.apply_dft(self._chirp1 * core.apply_idft(self._chirp2 * d))
        if self.waveform == OTFS:
            k, l = self.params.doppler_bins, self.params.delay_bins
            grid = d.reshape(d.shape[:-1] + (l, k))
            spread = core.apply_idft(grid, axis=-2).reshape(d.shape)
            return core.apply_dft(spread)
        return d.copy()

    def apply_inverse(self, v) -> np.ndarray:
        """Return ``Q^H @ v`` (equal to ``Q^-1 @ v``, Q being unitary)."""
        v = self._check(v)
        if self.waveform == AFDM:
            t = core.apply_dft(self._chirp1.conj() * core.apply_idft(v))
            return self._chirp2.conj() * t
        if self.waveform == OTFS:
            k, l = self.params.doppler_bins, self.params.delay_bins
            t = core.apply_idft(v).reshape(v.shape[:-1] + (l, k))
            return core.apply_dft(t, axis=-2).reshape(v.shape)
        return v.copy()

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense ``Q``, built from its defining factors."""
        n = self.n
        if self.waveform == AFDM:
            f = core.dft_matrix(n)
            return (
                f
                @ core.chirp_diag(self.params.c1, n)
                @ f.conj().T
                @ core.chirp_diag(self.params.c2, n)
            )
        if self.waveform == OTFS:
            k, l = self.params.doppler_bins, self.params.delay_bins
            return core.dft_matrix(n) @ core.kron(core.idft_matrix(l), np.eye(k))
        return np.eye(n, dtype=complex)

    def _check(self, v):
        v = np.asarray(v, dtype=complex)
        if v.shape[-1:] != (self.n,):
            raise ValueError(f"expected length {self.n} on the last axis, got {v.shape}")
        return v


def afdm_precoder(params: AfdmParams) -> Precoder:
    n = params.n_subcarriers
    return Precoder(
        AFDM,
        n,
        params,
        core.chirp_vector(params.c1, n),
        core.chirp_vector(params.c2, n),
    )


def otfs_precoder(params: OtfsParams) -> Precoder:
    return Precoder(OTFS, params.n_subcarriers, params)


def ofdm_precoder(n: int) -> Precoder:
    return Precoder(OFDM, int(n))


def modulate(d, p: Precoder) -> np.ndarray:
    """Transmit samples ``x = F^H Q d``."""
    return core.apply_idft(p.apply(d))


def demodulate(x_hat, p: Precoder) -> np.ndarray:
    """Recovered symbols ``d_hat = Q^H F x_hat``."""
    return p.apply_inverse(core.apply_dft(p._check(x_hat)))


def afdm_fast_demod(x_hat, c1p, c2p) -> np.ndarray:
    """DAFT demodulation: time dechirp by ``c1p``, DFT, frequency dechirp by ``c2p``.

    ``c1p`` and ``c2p`` may be arrays, in which case their broadcast shape is
    prepended to the batch shape of ``x_hat``; this evaluates a whole set of
    candidate chirp rates in one call.
    """
    x_hat = np.asarray(x_hat, dtype=complex)
    n = x_hat.shape[-1]
    if n < 2:
        raise ValueError("AFDM frame needs at least 2 samples")
    c1p = np.asarray(c1p, dtype=float)
    c2p = np.asarray(c2p, dtype=float)
    batch = x_hat.shape[:-1]
    # candidate axes go in front of the batch axes
    l1 = core.chirp_vector(c1p, n).reshape(c1p.shape + (1,) * len(batch) + (n,))
    l2 = core.chirp_vector(c2p, n).reshape(c2p.shape + (1,) * len(batch) + (n,))
    return l2.conj() * core.apply_dft(l1.conj() * x_hat)


def derotate_c2(d_hat, delta2: float) -> np.ndarray:
    """Undo the phase rotation ``exp(2j*pi*delta2*k**2)`` left by a c2 mismatch."""
    d_hat = np.asarray(d_hat, dtype=complex)
    return d_hat * core.chirp_vector(delta2, d_hat.shape[-1]).conj()


def compute_s1(delta1: float, m: int, k: int, n: int) -> complex:
    """Leakage sum ``sum_i exp(2j*pi*(delta1*i**2 + (m - k)*i/n))`` by direct summation.

    This is the coupling from subcarrier ``m`` into output ``k`` (scaled by N)
    when the receiver dechirps with ``c1 - delta1`` instead of ``c1``.
    """
    if not (0 <= m < n and 0 <= k < n):
        raise ValueError(f"indices must lie in [0, {n}), got m={m}, k={k}")
    i = np.arange(n, dtype=float)
    phase = np.mod(delta1 * i**2 + ((m - k) * np.arange(n) % n) / n, 1.0)
    return complex(np.exp(2j * np.pi * phase).sum())


class PrecoderCache:
    """Thread-safe memo of precoders keyed on waveform, N and rounded parameters."""

    def __init__(self, maxsize: int = 4096):
        self.maxsize = maxsize
        self._store = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(waveform, params):
        if waveform == AFDM:
            return (AFDM, params.n_subcarriers, round(params.c1, 12), round(params.c2, 12))
        if waveform == OTFS:
            return (OTFS, params.n_subcarriers, params.doppler_bins, params.delay_bins)
        return (OFDM, int(params))

    def get(self, waveform: str, params) -> Precoder:
        """Return the precoder for ``params`` (an int N for OFDM), building it once."""
        key = self._key(waveform, params)
        with self._lock:
            hit = self._store.get(key)
        if hit is not None:
            return hit
        if waveform == AFDM:
            p = afdm_precoder(params)
        elif waveform == OTFS:
            p = otfs_precoder(params)
        elif waveform == OFDM:
            p = ofdm_precoder(params)
        else:
            raise ValueError(f"unknown waveform {waveform!r}")
        with self._lock:
            if len(self._store) >= self.maxsize:
                self._store.clear()
            return self._store.setdefault(key, p)

    def __len__(self):
        return len(self._store)


default_cache = PrecoderCache()
