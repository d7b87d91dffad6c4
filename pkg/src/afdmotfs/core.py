"""Complex linear-algebra and number-theory primitives.

Every dense constructor has a matrix-free counterpart (``apply_*`` or
``*_vector``) operating on the last axis of an array. The dense forms are
cheap for N up to a few hundred and serve as reference implementations.
"""

import math

import numpy as np

__all__ = [
    "dft_matrix",
    "idft_matrix",
    "apply_dft",
    "apply_idft",
    "chirp_vector",
    "chirp_diag",
    "cyclic_shift_matrix",
    "apply_cyclic_shift",
    "doppler_vector",
    "doppler_diag",
    "divisors",
    "divisor_count",
    "kron",
]


def _check_size(n):
    if int(n) != n or n < 1:
        raise ValueError(f"size must be a positive integer, got {n!r}")
    return int(n)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix with entry ``(m, k) = exp(-2j*pi*m*k/n) / sqrt(n)``."""
    n = _check_size(n)
    idx = np.arange(n)
    # integer product mod n keeps the phase argument small
    phase = np.outer(idx, idx) % n
    return np.exp(-2j * np.pi * phase / n) / math.sqrt(n)


def idft_matrix(n: int) -> np.ndarray:
    """Unitary IDFT matrix, the conjugate transpose of :func:`dft_matrix`."""
    return dft_matrix(n).conj().T


def apply_dft(v, axis=-1):
    """Matrix-free ``dft_matrix(n) @ v`` along ``axis``."""
    return np.fft.fft(v, axis=axis, norm="ortho")


def apply_idft(v, axis=-1):
    """Matrix-free ``idft_matrix(n) @ v`` along ``axis``."""
    return np.fft.ifft(v, axis=axis, norm="ortho")


def chirp_vector(c, n: int) -> np.ndarray:
    """Diagonal of the chirp matrix: ``exp(2j*pi*c*k**2)`` for ``k < n``.

    ``c`` may be an array; the result then has shape ``np.shape(c) + (n,)``.
    The phase ``c*k**2`` is reduced modulo 1 before exponentiation, since it
    grows to ~1e4 cycles for N=128.
    """
    n = _check_size(n)
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("chirp rate must be finite")
    k2 = np.arange(n, dtype=float) ** 2
    phase = np.mod(c[..., None] * k2, 1.0)
    return np.exp(2j * np.pi * phase)


def chirp_diag(c: float, n: int) -> np.ndarray:
    """Dense diagonal chirp matrix ``diag(exp(2j*pi*c*k**2))``."""
    return np.diag(chirp_vector(c, n))


def cyclic_shift_matrix(l: int, n: int) -> np.ndarray:
    """Permutation matrix for ``Pi**l``: ``(Pi**l @ v)[k] = v[(k - l) % n]``."""
    n = _check_size(n)
    rows = np.arange(n)
    out = np.zeros((n, n), dtype=complex)
    out[rows, (rows - l) % n] = 1.0
    return out


def apply_cyclic_shift(v, l: int, axis=-1):
    """Matrix-free ``cyclic_shift_matrix(l, n) @ v``."""
    return np.roll(v, l, axis=axis)


def doppler_vector(theta, n: int) -> np.ndarray:
    """Diagonal of the Doppler matrix: ``exp(2j*pi*theta*k/n)``."""
    n = _check_size(n)
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValueError("Doppler shift must be finite")
    k = np.arange(n, dtype=float)
    phase = np.mod(theta[..., None] * k / n, 1.0)
    return np.exp(2j * np.pi * phase)


def doppler_diag(theta: float, n: int) -> np.ndarray:
    """Dense diagonal Doppler matrix ``diag(exp(2j*pi*theta*k/n))``."""
    return np.diag(doppler_vector(theta, n))


def divisors(n: int) -> list:
    """Ascending list of the positive divisors of ``n``."""
    n = _check_size(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def divisor_count(n: int) -> int:
    """Number of positive divisors of ``n``."""
    return len(divisors(n))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
