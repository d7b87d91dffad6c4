"""Seeded Monte Carlo BER experiments.

Three drivers reproduce the eavesdropper study:

* :func:`run_ber_vs_otfs_k` - BER versus the guessed OTFS Doppler size K'
* :func:`run_ber_vs_afdm_c1` - BER versus the guessed AFDM chirp rate c1'
* :func:`run_ber_vs_snr_attack` - BER of a budget-limited brute-force
  attack versus SNR, for each waveform

Every trial draws from its own stream derived from ``(master_seed, trial)``,
and all sweep values inside a trial reuse the same data, channel and noise
draw. Results are therefore bit-identical for a given config and seed,
whatever the number of workers.
"""

import dataclasses
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analytics, core
from .channel import (
    ChannelSpec,
    apply_awgn,
    apply_channel,
    build_channel_matrix,
    mmse_equalizer,
    noise_variance,
    random_channel,
    zf_equalizer,
)
from .constellation import bit_errors, qpsk_map, random_bits
from .eavesdropper import (
    BlindFourthPower,
    GroundTruthBER,
    afdm_candidates,
    bruteforce,
    otfs_candidates,
    sample_candidates,
)
from .waveform import (
    AFDM,
    OTFS,
    AfdmParams,
    OtfsParams,
    afdm_fast_demod,
    afdm_precoder,
    demodulate,
    modulate,
    ofdm_precoder,
    otfs_precoder,
)

__all__ = [
    "ChannelConfig",
    "SweepConfig",
    "AttackConfig",
    "ExperimentConfig",
    "BerCurve",
    "MonteCarloResult",
    "trial_rng",
    "monte_carlo",
    "run_ber_vs_otfs_k",
    "run_ber_vs_afdm_c1",
    "run_ber_vs_snr_attack",
    "run_matched_ber",
    "run_attack_demo",
    "run_experiment",
    "write_curves",
    "plot_script",
]

EXPERIMENTS = ("BerVsOtfsK", "BerVsAfdmC1", "BerVsSnrAttack")
SCORINGS = ("ground_truth_ber", "blind_fourth_power")


def _from_mapping(cls, data, where):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ValueError(f"{where}: unknown keys {unknown}")
    return cls(**data)


@dataclass
class ChannelConfig:
    kind: str = "awgn"
    snr_db: Optional[float] = 25.0
    n_taps: int = 4
    theta_max: float = 0.3
    spec: Optional[dict] = None

    def validate(self, n):
        if self.kind not in ("awgn", "multipath", "fixed"):
            raise ValueError(f"channel.kind must be awgn, multipath or fixed, got {self.kind!r}")
        if self.kind == "multipath" and not 1 <= self.n_taps <= n:
            raise ValueError(f"channel.n_taps must lie in [1, {n}]")
        if self.theta_max < 0:
            raise ValueError("channel.theta_max must be nonnegative")
        if self.kind == "fixed":
            if self.spec is None:
                raise ValueError("channel.spec is required for a fixed channel")
            if ChannelSpec.from_dict(self.spec).n != n:
                raise ValueError("channel.spec.n must equal n_subcarriers")


@dataclass
class SweepConfig:
    k_values: Optional[list] = None
    center: Optional[float] = None
    half_width: float = 8e-5
    points: int = 81
    snr_db: list = field(default_factory=lambda: [0, 5, 10, 15, 20, 25, 30])


@dataclass
class AttackConfig:
    budget: Optional[int] = None
    scoring: str = "ground_truth_ber"
    d_upper: float = 0.3
    epsilon: float = 1.0
    theta_max: float = 0.3
    early_stop_threshold: Optional[float] = None


@dataclass
class ExperimentConfig:
    experiment: str
    n_subcarriers: int = 128
    otfs_k: int = 16
    afdm_c1: float = 0.2
    afdm_c2: float = 1e-3
    waveforms: list = field(default_factory=lambda: [AFDM, OTFS])
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    equalizer: Optional[str] = None
    constellation: str = "qpsk"
    trials: int = 1000
    master_seed: int = 0
    sweep: SweepConfig = field(default_factory=SweepConfig)
    attack: AttackConfig = field(default_factory=AttackConfig)

    def __post_init__(self):
        if isinstance(self.channel, dict) or self.channel is None:
            self.channel = _from_mapping(ChannelConfig, self.channel, "channel")
        if isinstance(self.sweep, dict) or self.sweep is None:
            self.sweep = _from_mapping(SweepConfig, self.sweep, "sweep")
        if isinstance(self.attack, dict) or self.attack is None:
            self.attack = _from_mapping(AttackConfig, self.attack, "attack")
        self.waveforms = list(self.waveforms)
        self.validate()

    @property
    def equalizer_kind(self) -> str:
        if self.equalizer is not None:
            return self.equalizer
        return "zf" if self.channel.kind == "awgn" else "mmse"

    def validate(self):
        n = self.n_subcarriers
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if int(n) != n or n < 2:
            raise ValueError(f"n_subcarriers must be an integer >= 2, got {n!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if self.constellation != "qpsk":
            raise ValueError(f"only qpsk is supported, got {self.constellation!r}")
        if self.equalizer not in (None, "zf", "mmse"):
            raise ValueError(f"equalizer must be zf or mmse, got {self.equalizer!r}")
        if self.otfs_k < 1 or n % self.otfs_k:
            raise ValueError(f"otfs_k={self.otfs_k} does not divide N={n}")
        for wf in self.waveforms:
            if wf not in (AFDM, OTFS):
                raise ValueError(f"unknown waveform {wf!r}")
        if not self.waveforms:
            raise ValueError("waveforms must not be empty")
        AfdmParams(n, self.afdm_c1, self.afdm_c2)
        self.channel.validate(n)
        if self.experiment != "BerVsSnrAttack" and self.channel.snr_db is None:
            raise ValueError("channel.snr_db is required for fixed-SNR experiments")
        sw = self.sweep
        if self.experiment == "BerVsOtfsK" and sw.k_values is not None:
            if not sw.k_values or any(k < 1 or n % k for k in sw.k_values):
                raise ValueError("sweep.k_values must be nonempty divisors of N")
        if self.experiment == "BerVsAfdmC1":
            if sw.points < 1 or sw.half_width < 0:
                raise ValueError("sweep needs points >= 1 and half_width >= 0")
        if self.experiment == "BerVsSnrAttack" and not sw.snr_db:
            raise ValueError("sweep.snr_db must be nonempty")
        at = self.attack
        if at.scoring not in SCORINGS:
            raise ValueError(f"attack.scoring must be one of {SCORINGS}")
        if at.budget is not None and at.budget < 1:
            raise ValueError("attack.budget must be positive")
        if self.experiment == "BerVsSnrAttack" and AFDM in self.waveforms:
            analytics.afdm_grid_count(n, at.theta_max, at.d_upper, at.epsilon)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return _from_mapping(cls, data, "config")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class BerCurve:
    label: str
    sweep_name: str
    sweep_values: list
    errors: list
    bits: list
    trials: int
    seed: int

    @property
    def ber(self) -> np.ndarray:
        return np.asarray(self.errors, dtype=float) / np.asarray(self.bits, dtype=float)

    @property
    def std_error(self) -> np.ndarray:
        p = self.ber
        return np.sqrt(p * (1.0 - p) / np.asarray(self.bits, dtype=float))

    def to_csv(self) -> str:
        lines = ["sweep_value,ber,bits,errors,trials"]
        for v, p, b, e in zip(self.sweep_values, self.ber, self.bits, self.errors):
            lines.append(f"{float(v)!r},{float(p)!r},{int(b)},{int(e)},{self.trials}")
        return "\n".join(lines) + "\n"


@dataclass
class MonteCarloResult:
    errors: np.ndarray
    bits: np.ndarray
    trials: int


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def monte_carlo(run, trials: int, master_seed: int, workers: int = 1) -> MonteCarloResult:
    """Run ``run(rng, index) -> (errors, bits)`` for each trial and sum the counts.

    Sums are taken in trial order, so the result does not depend on
    ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")

    def one(i):
        errors, bits = run(trial_rng(master_seed, i), i)
        return np.asarray(errors, dtype=np.int64), np.asarray(bits, dtype=np.int64)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            outcomes = list(pool.map(one, range(trials)))
    else:
        outcomes = [one(i) for i in range(trials)]
    errors = sum(o[0] for o in outcomes)
    bits = sum(o[1] for o in outcomes)
    return MonteCarloResult(errors, np.broadcast_to(bits, errors.shape).copy(), trials)


class _Link:
    """One channel realization plus one unit noise draw, replayable at any SNR."""

    def __init__(self, cfg: ExperimentConfig, rng):
        n = cfg.n_subcarriers
        ch = cfg.channel
        self.spec = None
        if ch.kind == "multipath":
            self.spec = random_channel(ch.n_taps, ch.theta_max, n, rng)
        elif ch.kind == "fixed":
            self.spec = ChannelSpec.from_dict(ch.spec)
        self.noise_seed = int(rng.integers(2**63))
        self.equalizer = cfg.equalizer_kind
        self._h = None if self.spec is None else build_channel_matrix(self.spec)
        self._g = {}

    def receive(self, x, snr_db):
        """Pass ``x`` through the channel and noise, then equalize with full CSI."""
        hx = x if self.spec is None else apply_channel(x, self.spec)
        y = apply_awgn(hx, snr_db, 1.0, np.random.default_rng(self.noise_seed))
        return self._equalizer(snr_db) @ y if self._h is not None else self._scale(snr_db) * y

    def _scale(self, snr_db):
        return 1.0 / (1.0 + noise_variance(snr_db)) if self.equalizer == "mmse" else 1.0

    def _equalizer(self, snr_db):
        if snr_db not in self._g:
            if self.equalizer == "zf":
                self._g[snr_db] = zf_equalizer(self._h)
            else:
                self._g[snr_db] = mmse_equalizer(self._h, noise_variance(snr_db))
        return self._g[snr_db]


def _true_precoder(cfg, waveform):
    n = cfg.n_subcarriers
    if waveform == AFDM:
        return afdm_precoder(AfdmParams(n, cfg.afdm_c1, cfg.afdm_c2))
    if waveform == OTFS:
        return otfs_precoder(OtfsParams.from_k(n, cfg.otfs_k))
    return ofdm_precoder(n)


def _require(cfg, experiment):
    if cfg.experiment != experiment:
        raise ValueError(f"config is for {cfg.experiment}, not {experiment}")


def run_ber_vs_otfs_k(cfg: ExperimentConfig, workers: int = 1) -> BerCurve:
    """BER when an OTFS frame on the true grid is demodulated with each guessed K'."""
    _require(cfg, "BerVsOtfsK")
    n = cfg.n_subcarriers
    k_values = cfg.sweep.k_values or core.divisors(n)
    tx = _true_precoder(cfg, OTFS)
    guesses = [otfs_precoder(OtfsParams.from_k(n, k)) for k in k_values]

    def trial(rng, _):
        bits = random_bits(rng, n)
        x_hat = _Link(cfg, rng).receive(modulate(qpsk_map(bits), tx), cfg.channel.snr_db)
        errors = [bit_errors(demodulate(x_hat, p), bits) for p in guesses]
        return errors, 2 * n

    mc = monte_carlo(trial, cfg.trials, cfg.master_seed, workers)
    return BerCurve(
        f"otfs_K{cfg.otfs_k}_N{n}", "k_prime", [int(k) for k in k_values],
        mc.errors.tolist(), mc.bits.tolist(), cfg.trials, cfg.master_seed,
    )


def afdm_c1_sweep(cfg: ExperimentConfig) -> np.ndarray:
    sw = cfg.sweep
    center = cfg.afdm_c1 if sw.center is None else sw.center
    return center + np.linspace(-sw.half_width, sw.half_width, sw.points)


def run_ber_vs_afdm_c1(cfg: ExperimentConfig, workers: int = 1) -> BerCurve:
    """BER when an AFDM frame is dechirped with each guessed c1' (c2 known)."""
    _require(cfg, "BerVsAfdmC1")
    n = cfg.n_subcarriers
    c1_grid = afdm_c1_sweep(cfg)
    tx = _true_precoder(cfg, AFDM)

    def trial(rng, _):
        bits = random_bits(rng, n)
        x_hat = _Link(cfg, rng).receive(modulate(qpsk_map(bits), tx), cfg.channel.snr_db)
        d_hat = afdm_fast_demod(x_hat, c1_grid, cfg.afdm_c2)
        return bit_errors(d_hat, bits), 2 * n

    mc = monte_carlo(trial, cfg.trials, cfg.master_seed, workers)
    return BerCurve(
        f"afdm_c1_{cfg.afdm_c1:g}_N{n}", "c1_prime", [float(c) for c in c1_grid],
        mc.errors.tolist(), mc.bits.tolist(), cfg.trials, cfg.master_seed,
    )


def _attack_setup(cfg):
    n = cfg.n_subcarriers
    at = cfg.attack
    sets = {}
    for wf in cfg.waveforms:
        if wf == OTFS:
            sets[wf] = otfs_candidates(n)
        else:
            sets[wf] = afdm_candidates(at.theta_max, at.d_upper, n, at.epsilon, cfg.afdm_c2)
    budget = at.budget if at.budget is not None else core.divisor_count(n)
    return sets, budget


def _scoring(cfg, bits):
    if cfg.attack.scoring == "blind_fourth_power":
        return BlindFourthPower()
    return GroundTruthBER(bits)


def run_ber_vs_snr_attack(cfg: ExperimentConfig, workers: int = 1) -> dict:
    """Winner BER of a budget-limited brute-force attack versus SNR, per waveform.

    OTFS candidates are all divisor pairs (sampled down if the budget is
    smaller); AFDM candidates are ``budget`` distinct random points of the
    c1' grid over ``[theta_max/N, D]``. Returns ``{waveform: BerCurve}``.
    """
    _require(cfg, "BerVsSnrAttack")
    n = cfg.n_subcarriers
    snrs = [float(s) for s in cfg.sweep.snr_db]
    sets, budget = _attack_setup(cfg)
    precoders = {wf: _true_precoder(cfg, wf) for wf in cfg.waveforms}
    at = cfg.attack

    def trial(rng, _):
        bits = random_bits(rng, n)
        d = qpsk_map(bits)
        link = _Link(cfg, rng)
        scoring = _scoring(cfg, bits)
        errors = np.zeros((len(cfg.waveforms), len(snrs)), dtype=np.int64)
        for i, wf in enumerate(cfg.waveforms):
            cands = sample_candidates(sets[wf], budget, rng)
            x = modulate(d, precoders[wf])
            for j, snr in enumerate(snrs):
                result = bruteforce(
                    link.receive(x, snr), cands, scoring,
                    early_stop_threshold=at.early_stop_threshold, truth_bits=bits,
                )
                errors[i, j] = round(result.best.ber_vs_truth * 2 * n)
        return errors, 2 * n

    mc = monte_carlo(trial, cfg.trials, cfg.master_seed, workers)
    curves = {}
    for i, wf in enumerate(cfg.waveforms):
        curves[wf] = BerCurve(
            f"{wf}_attack_budget{budget}_{cfg.channel.kind}_N{n}", "snr_db", snrs,
            mc.errors[i].tolist(), mc.bits[i].tolist(), cfg.trials, cfg.master_seed,
        )
    return curves


def run_matched_ber(
    waveform: str, n: int, snr_db, trials: int, master_seed: int = 0, workers: int = 1,
    channel: Optional[ChannelConfig] = None, **params,
) -> BerCurve:
    """BER of the legitimate receiver (known parameters) versus SNR.

    ``params`` are ``otfs_k`` or ``afdm_c1``/``afdm_c2`` as in
    :class:`ExperimentConfig`. ``waveform`` may also be ``"ofdm"``.
    """
    cfg = ExperimentConfig(
        "BerVsSnrAttack", n_subcarriers=n, channel=channel or ChannelConfig(),
        trials=trials, master_seed=master_seed, waveforms=[OTFS],
        sweep=SweepConfig(snr_db=list(snr_db)), **params,
    )
    p = _true_precoder(cfg, waveform)
    snrs = [float(s) for s in snr_db]

    def trial(rng, _):
        bits = random_bits(rng, n)
        link = _Link(cfg, rng)
        x = modulate(qpsk_map(bits), p)
        return [bit_errors(demodulate(link.receive(x, s), p), bits) for s in snrs], 2 * n

    mc = monte_carlo(trial, trials, master_seed, workers)
    return BerCurve(
        f"{waveform}_matched_N{n}", "snr_db", snrs,
        mc.errors.tolist(), mc.bits.tolist(), trials, master_seed,
    )


def run_attack_demo(cfg: ExperimentConfig) -> dict:
    """One attack per configured waveform on the trial-0 frame.

    Uses ``channel.snr_db`` (or the first sweep SNR when unset) and scores
    every candidate of the sampled budget. Returns ``{waveform: AttackResult}``.
    """
    n = cfg.n_subcarriers
    snr = cfg.channel.snr_db if cfg.channel.snr_db is not None else float(cfg.sweep.snr_db[0])
    sets, budget = _attack_setup(cfg)
    rng = trial_rng(cfg.master_seed, 0)
    bits = random_bits(rng, n)
    d = qpsk_map(bits)
    link = _Link(cfg, rng)
    scoring = _scoring(cfg, bits)
    out = {}
    for wf in cfg.waveforms:
        cands = sample_candidates(sets[wf], budget, rng)
        x_hat = link.receive(modulate(d, _true_precoder(cfg, wf)), snr)
        out[wf] = bruteforce(
            x_hat, cands, scoring,
            early_stop_threshold=cfg.attack.early_stop_threshold, truth_bits=bits,
        )
    return out


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list:
    if cfg.experiment == "BerVsOtfsK":
        return [run_ber_vs_otfs_k(cfg, workers)]
    if cfg.experiment == "BerVsAfdmC1":
        return [run_ber_vs_afdm_c1(cfg, workers)]
    return list(run_ber_vs_snr_attack(cfg, workers).values())


def write_curves(curves, cfg: ExperimentConfig, out_dir) -> list:
    """Write one CSV per curve; names embed a hash of the config."""
    os.makedirs(out_dir, exist_ok=True)
    tag = cfg.config_hash()[:12]
    paths = []
    for curve in curves:
        path = os.path.join(out_dir, f"{cfg.experiment}_{curve.label}_{tag}.csv")
        with open(path, "w", newline="") as fh:
            fh.write(curve.to_csv())
        paths.append(path)
    return paths


def plot_script(paths, log_y: bool = True) -> str:
    """Text of a matplotlib script that plots the given CSV files."""
    names = ",\n    ".join(repr(os.path.basename(p)) for p in paths)
    return f'''import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
FILES = [
    {names},
]

fig, ax = plt.subplots()
for name in FILES:
    with open(os.path.join(HERE, name)) as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r["sweep_value"]) for r in rows]
    y = [max(float(r["ber"]), 1e-6) for r in rows]
    ax.plot(x, y, marker="o", label=name.rsplit("_", 1)[0])
{"ax.set_yscale('log')" if log_y else "pass"}
ax.set_ylabel("BER")
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize="small")
fig.savefig(os.path.join(HERE, "curves.png"), dpi=150)
'''

