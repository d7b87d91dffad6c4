"""
How many guesses does an eavesdropper need?
===========================================

An eavesdropper who does not know the modulation parameters has to try
candidates one by one. For OTFS the unknown is the Doppler size K, which
must divide N, so the search space is the set of divisors. For AFDM the
unknown is a real chirp rate c1, and guesses only work inside a narrow
window around the true value, so the search space is a fine grid.
"""

import numpy as np

from afdmotfs import analytics, core
from afdmotfs.eavesdropper import afdm_candidates, otfs_candidates

# %%
# OTFS: the divisor count
# -----------------------
# Powers of two have few divisors. Highly composite sizes have more, but
# the count never exceeds 2*sqrt(N).

for n in (64, 128, 120, 360, 1024):
    r = analytics.otfs_ma(n)
    print(f"N={n:5d}  divisors={r.exact:3d}  bound={r.bound:7.2f}  average~{r.average:5.2f}")

print("candidates for N=128:", [k for k, _ in otfs_candidates(128).candidates])

# %%
# AFDM: the chirp-rate grid
# -------------------------
# A guess c1' works only while |c1 - c1'| stays below a bound that shrinks
# like 1/N^2. Tiling the admissible range [theta_max/N, D] with windows of
# twice that width gives the attempt count.

n, theta_max, d_upper = 128, 0.3, 0.3
print(analytics.robustness_report("afdm", n, theta_max, d_upper).to_text())

grid = afdm_candidates(theta_max, d_upper, n)
print(f"enumerated grid: {len(grid)} candidates, step {grid.generation_meta['step']:.4e}")
assert analytics.consistency_check(n, theta_max, d_upper)

# %%
# Growth with N
# -------------
# The OTFS count grows roughly logarithmically, the AFDM count roughly
# like N^2, so the gap widens quickly.

sizes = np.array([16, 32, 64, 128, 256, 512])
otfs = np.array([core.divisor_count(int(n)) for n in sizes])
afdm = np.array([analytics.afdm_ma(int(n), theta_max, d_upper) for n in sizes])
for n, o, a in zip(sizes, otfs, afdm):
    print(f"N={n:4d}  OTFS {o:3d}  AFDM {a:12.1f}  ratio {a / o:10.1f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.semilogy(sizes, otfs, "o-", label="OTFS (divisor count)")
    ax.semilogy(sizes, afdm, "s-", label="AFDM (chirp grid)")
    ax.semilogy(sizes, 2 * np.sqrt(sizes), "k--", lw=0.8, label=r"$2\sqrt{N}$")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel("maximum attempts")
    ax.legend()
    fig.savefig("attempt_counts.png", dpi=150)

print("log2 growth of the AFDM count per doubling:",
      np.round(np.diff(np.log2(afdm)), 2), "(tends to 2)")
