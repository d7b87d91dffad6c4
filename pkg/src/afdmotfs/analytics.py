"""Closed-form brute-force robustness figures for OTFS and AFDM.

OTFS: an eavesdropper only needs to try every grid split ``N = K*L``, so the
maximum attempt count is the divisor count ``sigma(N) <= 2*sqrt(N)``, with
average order ``ln N + 2*gamma - 1``.

AFDM: ``c1`` is continuous. A guess ``c1'`` demodulates acceptably when
``|c1 - c1'| <= eps / (2*pi*(N-1)**2)``, so the interval ``[theta_max/N, D]``
is covered by a grid of step ``eps / (pi*(N-1)**2)`` and the attempt count is
``pi*(D*N - theta_max)*(N-1)**2 / (eps*N)``.
"""

import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

from .core import divisor_count

__all__ = [
    "EULER_GAMMA",
    "OtfsAttempts",
    "otfs_ma",
    "afdm_ma",
    "delta1_bound",
    "afdm_step",
    "afdm_grid_count",
    "consistency_check",
    "RobustnessReport",
    "robustness_report",
]

EULER_GAMMA = 0.5772156649015329


class OtfsAttempts(NamedTuple):
    exact: int
    bound: float
    average: float


def otfs_ma(n: int) -> OtfsAttempts:
    """Divisor count of ``n``, its ``2*sqrt(n)`` bound, and the Dirichlet average."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return OtfsAttempts(
        divisor_count(n), 2.0 * math.sqrt(n), math.log(n) + 2.0 * EULER_GAMMA - 1.0
    )


def _check_afdm_range(n, theta_max, d_upper, epsilon):
    if n < 2:
        raise ValueError(f"AFDM needs n >= 2, got {n}")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if theta_max < 0:
        raise ValueError("theta_max must be nonnegative")
    if not d_upper > theta_max / n:
        raise ValueError(
            f"empty search range: D={d_upper} <= theta_max/N={theta_max / n}"
        )


def afdm_ma(n: int, theta_max: float, d_upper: float, epsilon: float = 1.0) -> float:
    """Maximum AFDM attempt count ``pi*(D*N - theta_max)*(N-1)**2 / (eps*N)``."""
    _check_afdm_range(n, theta_max, d_upper, epsilon)
    return math.pi * (d_upper * n - theta_max) * (n - 1) ** 2 / (epsilon * n)


def delta1_bound(n: int, epsilon: float = 1.0) -> float:
    """Largest tolerable ``|c1 - c1'|``: ``eps / (2*pi*(n-1)**2)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    return epsilon / (2.0 * math.pi * (n - 1) ** 2)


def afdm_step(n: int, epsilon: float = 1.0) -> float:
    """Spacing of the eavesdropper's ``c1'`` grid, twice :func:`delta1_bound`."""
    return 2.0 * delta1_bound(n, epsilon)


def afdm_grid_count(n: int, theta_max: float, d_upper: float, epsilon: float = 1.0) -> int:
    """Number of grid points ``theta_max/N + i*step`` that fit below ``D``."""
    _check_afdm_range(n, theta_max, d_upper, epsilon)
    return 1 + math.floor((d_upper - theta_max / n) / afdm_step(n, epsilon))


def consistency_check(n, theta_max, d_upper, epsilon=1.0) -> bool:
    """True when the closed form and the enumerated candidate grid agree within 1.

    Both sides raise ``ValueError`` on an empty range.
    """
    from .eavesdropper import afdm_candidates

    count = len(afdm_candidates(theta_max, d_upper, n, epsilon).candidates)
    return abs(afdm_ma(n, theta_max, d_upper, epsilon) - count) <= 1.0


@dataclass(frozen=True)
class RobustnessReport:
    waveform: str
    n: int
    ma_exact: float
    ma_bound: Optional[float] = None
    dirichlet_avg: Optional[float] = None
    delta1_bound: Optional[float] = None
    theta_max: Optional[float] = None
    d_upper: Optional[float] = None
    epsilon: Optional[float] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        labels = {
            "waveform": "waveform",
            "n": "N",
            "ma_exact": "max attempts",
            "ma_bound": "upper bound 2*sqrt(N)",
            "dirichlet_avg": "average divisor count",
            "delta1_bound": "c1 tolerance",
            "theta_max": "theta_max",
            "d_upper": "D",
            "epsilon": "epsilon",
        }
        rows = self.to_dict()
        width = max(len(labels[k]) for k in rows)
        lines = []
        for key, value in rows.items():
            if isinstance(value, float):
                value = f"{value:.6g}"
            lines.append(f"{labels[key]:<{width}}  {value}")
        return "\n".join(lines)


def robustness_report(
    waveform: str, n: int, theta_max: float = 0.3, d_upper: float = 0.3, epsilon: float = 1.0
) -> RobustnessReport:
    waveform = waveform.lower()
    if waveform == "otfs":
        exact, bound, avg = otfs_ma(n)
        return RobustnessReport("otfs", n, exact, ma_bound=bound, dirichlet_avg=avg)
    if waveform == "afdm":
        return RobustnessReport(
            "afdm",
            n,
            afdm_ma(n, theta_max, d_upper, epsilon),
            delta1_bound=delta1_bound(n, epsilon),
            theta_max=theta_max,
            d_upper=d_upper,
            epsilon=epsilon,
        )
    raise ValueError(f"unknown waveform {waveform!r}")
