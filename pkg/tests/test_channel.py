import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afdmotfs import core
from afdmotfs.channel import (
    ChannelSpec,
    ChannelTap,
    IllConditionedChannelError,
    apply_awgn,
    apply_channel,
    build_channel_matrix,
    mmse_equalizer,
    noise_variance,
    random_channel,
    zf_equalizer,
)
from afdmotfs.constellation import qpsk_demap, qpsk_map, random_bits
from afdmotfs.waveform import AfdmParams, OtfsParams, afdm_precoder, demodulate, modulate, otfs_precoder


def spec(*taps, n=4, theta_max=0.3):
    return ChannelSpec(tuple(ChannelTap(*t) for t in taps), theta_max, n)


class TestChannelMatrix:
    def test_identity_tap(self):
        np.testing.assert_array_equal(build_channel_matrix(spec((1, 0, 0.0), n=5)), np.eye(5))

    def test_pure_delay(self):
        h = build_channel_matrix(spec((1, 1, 0.0), n=3))
        np.testing.assert_array_equal(h @ np.array([1.0, 2.0, 3.0]), [3.0, 1.0, 2.0])

    def test_two_taps_by_hand(self):
        g = 1 / math.sqrt(2)
        h = build_channel_matrix(spec((g, 0, 0.0), (g, 1, 0.3)))
        expected = g * (np.eye(4) + core.doppler_diag(0.3, 4) @ core.cyclic_shift_matrix(1, 4))
        np.testing.assert_allclose(h, expected, atol=1e-15)
        assert abs(h[0, 3] - g) < 1e-15
        assert abs(h[2, 1] - g * np.exp(2j * np.pi * 0.15)) < 1e-15

    def test_linear_in_taps(self):
        rng = np.random.default_rng(0)
        full = random_channel(6, 0.3, 16, rng)
        a = ChannelSpec(full.taps[:3], 0.3, 16)
        b = ChannelSpec(full.taps[3:], 0.3, 16)
        np.testing.assert_allclose(
            build_channel_matrix(full), build_channel_matrix(a) + build_channel_matrix(b), atol=1e-14
        )

    def test_zero_doppler_is_circulant(self):
        rng = np.random.default_rng(1)
        for n in (4, 17, 64):
            s = random_channel(min(4, n), 0.0, n, rng)
            h = build_channel_matrix(s)
            for i in range(n):
                np.testing.assert_allclose(np.roll(h[0], i), h[i], atol=1e-15)

    def test_fast_apply_matches_dense(self):
        rng = np.random.default_rng(2)
        s = random_channel(4, 0.3, 32, rng)
        x = rng.standard_normal((3, 32)) + 1j * rng.standard_normal((3, 32))
        np.testing.assert_allclose(apply_channel(x, s), x @ build_channel_matrix(s).T, atol=1e-13)

    def test_validation(self):
        with pytest.raises(ValueError):
            spec((0, 0, 0.0))
        with pytest.raises(ValueError):
            spec((1, 4, 0.0))
        with pytest.raises(ValueError):
            spec((1, 0, 0.5))

    def test_channel_length(self):
        assert spec((1, 0, 0.0), (0.5, 3, 0.1)).channel_length == 4


class TestRandomChannel:
    def test_single_tap_is_phase(self):
        s = random_channel(1, 0.0, 8, np.random.default_rng(3))
        h = build_channel_matrix(s)
        assert abs(abs(h[0, 0]) - 1) < 1e-12
        np.testing.assert_allclose(h, h[0, 0] * np.eye(8), atol=1e-15)

    def test_unit_power(self):
        for seed in range(20):
            s = random_channel(4, 0.3, 128, np.random.default_rng(seed))
            assert abs(s.power - 1) < 1e-9
            assert [t.delay for t in s.taps] == [0, 1, 2, 3]
            assert all(0 <= t.doppler <= 0.3 for t in s.taps)

    def test_deterministic(self):
        a = random_channel(4, 0.3, 128, np.random.default_rng(42))
        b = random_channel(4, 0.3, 128, np.random.default_rng(42))
        assert a == b

    def test_too_many_taps(self):
        with pytest.raises(ValueError):
            random_channel(9, 0.3, 8, np.random.default_rng(0))

    def test_json_round_trip(self):
        s = random_channel(4, 0.3, 64, np.random.default_rng(5))
        text = json.dumps(s.to_dict())
        assert ChannelSpec.from_dict(json.loads(text)) == s

    def test_json_rejects_unknown(self):
        d = random_channel(2, 0.3, 8, np.random.default_rng(5)).to_dict()
        d["extra"] = 1
        with pytest.raises(ValueError):
            ChannelSpec.from_dict(d)


class TestAwgn:
    def test_infinite_snr(self):
        x = np.arange(8) * (1 + 2j)
        y = apply_awgn(x, math.inf, 1.0, np.random.default_rng(0))
        np.testing.assert_array_equal(y, x)
        assert y is not x

    def test_variance(self):
        y = apply_awgn(np.zeros(100_000, dtype=complex), 0.0, 1.0, np.random.default_rng(1))
        assert 0.99 <= np.mean(np.abs(y) ** 2) <= 1.01
        # circular: equal power in both components, no correlation
        assert abs(np.var(y.real) - np.var(y.imag)) < 0.02
        assert abs(np.mean(y.real * y.imag)) < 0.01

    def test_scaling(self):
        assert noise_variance(10.0, 2.0) == pytest.approx(0.2)
        with pytest.raises(ValueError):
            noise_variance(10.0, 0.0)

    def test_reproducible(self):
        x = np.ones(16, dtype=complex)
        a = apply_awgn(x, 5.0, 1.0, np.random.default_rng(9))
        b = apply_awgn(x, 5.0, 1.0, np.random.default_rng(9))
        np.testing.assert_array_equal(a, b)


class TestEqualizers:
    def test_zf_identity(self):
        np.testing.assert_allclose(zf_equalizer(np.eye(4)), np.eye(4))
        np.testing.assert_allclose(zf_equalizer(2 * np.eye(4)), 0.5 * np.eye(4))

    def test_zf_random_channel(self):
        h = build_channel_matrix(random_channel(4, 0.3, 32, np.random.default_rng(4)))
        assert np.max(np.abs(zf_equalizer(h) @ h - np.eye(32))) < 1e-8

    def test_zf_singular(self):
        h = np.ones((4, 4))
        with pytest.raises(IllConditionedChannelError):
            zf_equalizer(h)
        # two equal-gain taps with opposite sign at delays 0 and 2 null the DC bin
        s = spec((1, 0, 0.0), (-1, 2, 0.0), n=4)
        with pytest.raises(np.linalg.LinAlgError):
            zf_equalizer(build_channel_matrix(s))

    def test_mmse_limits(self):
        np.testing.assert_allclose(mmse_equalizer(np.eye(3), 1.0), 0.5 * np.eye(3))
        np.testing.assert_allclose(mmse_equalizer(np.eye(3), 0.0), np.eye(3))
        h = build_channel_matrix(random_channel(4, 0.3, 32, np.random.default_rng(6)))
        np.testing.assert_allclose(mmse_equalizer(h, 0.0), np.linalg.inv(h), atol=1e-8)

    def test_mmse_matches_formula(self):
        rng = np.random.default_rng(7)
        h = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        s2 = 0.3
        expected = h.conj().T @ np.linalg.inv(h @ h.conj().T + s2 * np.eye(6))
        np.testing.assert_allclose(mmse_equalizer(h, s2), expected, atol=1e-12)

    def test_mmse_converges_to_zf(self):
        h = build_channel_matrix(random_channel(4, 0.3, 32, np.random.default_rng(8)))
        g_zf = zf_equalizer(h)
        gaps = [np.max(np.abs(mmse_equalizer(h, s2) - g_zf)) for s2 in (1e-2, 1e-4, 1e-6)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-3

    def test_negative_variance(self):
        with pytest.raises(ValueError):
            mmse_equalizer(np.eye(2), -1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["afdm", "otfs"]))
def test_zf_then_matched_demod_is_error_free(seed, waveform):
    rng = np.random.default_rng(seed)
    n = 64
    s = random_channel(4, 0.3, n, rng)
    h = build_channel_matrix(s)
    if np.linalg.cond(h) >= 1e6:
        return
    p = afdm_precoder(AfdmParams(n, 0.2, 1e-3)) if waveform == "afdm" else otfs_precoder(OtfsParams(n, 16, 4))
    bits = random_bits(rng, n)
    x_hat = zf_equalizer(h) @ apply_channel(modulate(qpsk_map(bits), p), s)
    np.testing.assert_array_equal(qpsk_demap(demodulate(x_hat, p)), bits)
