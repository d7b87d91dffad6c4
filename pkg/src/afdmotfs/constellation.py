"""Gray-mapped QPSK and hard-decision helpers."""

import numpy as np

__all__ = ["qpsk_map", "qpsk_demap", "random_bits", "bit_errors"]

_SCALE = 1.0 / np.sqrt(2.0)


def qpsk_map(bits) -> np.ndarray:
    """Map bit pairs ``(b0, b1)`` to ``((1 - 2*b0) + 1j*(1 - 2*b1)) / sqrt(2)``.

    Works on the last axis, which must have even length.
    """
    bits = np.asarray(bits)
    if bits.shape[-1] % 2:
        raise ValueError(f"QPSK needs an even number of bits, got {bits.shape[-1]}")
    b = bits.astype(float)
    return ((1.0 - 2.0 * b[..., 0::2]) + 1j * (1.0 - 2.0 * b[..., 1::2])) * _SCALE


def qpsk_demap(symbols) -> np.ndarray:
    """Hard-decide QPSK symbols back to bits.

    A component that is exactly zero decodes to bit 0.
    """
    symbols = np.asarray(symbols)
    bits = np.empty(symbols.shape[:-1] + (2 * symbols.shape[-1],), dtype=np.uint8)
    bits[..., 0::2] = symbols.real < 0
    bits[..., 1::2] = symbols.imag < 0
    return bits


def random_bits(rng, n_symbols: int, batch=()) -> np.ndarray:
    """Uniform random bits for ``n_symbols`` QPSK symbols."""
    return rng.integers(0, 2, size=tuple(batch) + (2 * n_symbols,), dtype=np.uint8)


def bit_errors(symbols, bits) -> np.ndarray:
    """Number of bit errors per vector after hard decision (sums the last axis)."""
    return np.count_nonzero(qpsk_demap(symbols) != np.asarray(bits), axis=-1)
