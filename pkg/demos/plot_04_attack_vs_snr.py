"""
A budget-limited brute-force attack
===================================

The eavesdropper may try 8 candidates per frame, which is the whole
OTFS search space at N = 128 but a tiny slice of the AFDM grid. The
winning candidate's bit error rate is recorded at each SNR, both over
plain AWGN and over a 4-tap doubly dispersive channel with MMSE
equalization.
"""

from afdmotfs.experiments import ExperimentConfig, run_ber_vs_snr_attack

TRIALS = 100

# %%
# Run both channels
# -----------------

for kind in ("awgn", "multipath"):
    cfg = ExperimentConfig(
        "BerVsSnrAttack", trials=TRIALS, channel={"kind": kind}, attack={"budget": 8},
    )
    curves = run_ber_vs_snr_attack(cfg)
    print(f"{kind} (equalizer {cfg.equalizer_kind})")
    print("  SNR   " + "  ".join(f"{s:6.0f}" for s in curves["otfs"].sweep_values))
    for wf, c in curves.items():
        print(f"  {wf:5s} " + "  ".join(f"{b:6.4f}" for b in c.ber))

# %%
# OTFS falls to zero errors once the noise is weak, because one of the
# eight guesses is always exact. AFDM stays near one half: eight random
# points out of roughly fifteen thousand almost never land in the window.
