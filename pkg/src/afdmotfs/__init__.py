"""Brute-force eavesdropping robustness of AFDM and OTFS waveforms.

Both waveforms are modelled as unitary precoders of OFDM. The package
provides the precoders and fast demodulators, a doubly-dispersive channel
with ZF/MMSE equalization, a brute-force eavesdropper, closed-form attempt
counts, and seeded Monte Carlo BER experiments.
"""

from . import analytics, channel, constellation, core, eavesdropper, experiments, waveform
from .analytics import afdm_ma, delta1_bound, otfs_ma, robustness_report
from .channel import ChannelSpec, ChannelTap, build_channel_matrix, random_channel
from .constellation import qpsk_demap, qpsk_map, random_bits
from .eavesdropper import (
    AttackResult,
    BlindFourthPower,
    GroundTruthBER,
    afdm_candidates,
    bruteforce,
    otfs_candidates,
)
from .experiments import ExperimentConfig, run_experiment
from .waveform import (
    AfdmParams,
    OtfsParams,
    Precoder,
    afdm_fast_demod,
    afdm_precoder,
    demodulate,
    modulate,
    ofdm_precoder,
    otfs_precoder,
)

__all__ = [
    "analytics",
    "channel",
    "constellation",
    "core",
    "eavesdropper",
    "experiments",
    "waveform",
    "afdm_ma",
    "delta1_bound",
    "otfs_ma",
    "robustness_report",
    "ChannelSpec",
    "ChannelTap",
    "build_channel_matrix",
    "random_channel",
    "qpsk_demap",
    "qpsk_map",
    "random_bits",
    "AttackResult",
    "BlindFourthPower",
    "GroundTruthBER",
    "afdm_candidates",
    "bruteforce",
    "otfs_candidates",
    "ExperimentConfig",
    "run_experiment",
    "AfdmParams",
    "OtfsParams",
    "Precoder",
    "afdm_fast_demod",
    "afdm_precoder",
    "demodulate",
    "modulate",
    "ofdm_precoder",
    "otfs_precoder",
]

__version__ = "0.1.0"
