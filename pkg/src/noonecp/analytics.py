"""Closed-form success probabilities for the iterated concentration schemes.

With x = alpha^2 and y = 1 - x, round K succeeds unconditionally with

    P_K = 2 (x y)^(2^(K-1)) / prod_{j=2..K} (x^(2^(j-1)) + y^(2^(j-1)))

(the K = 1 denominator is the empty product). These forms are the oracle
the simulation engine is checked against; they are evaluated in log2 space
so deep rounds near the balanced point do not underflow (the numerator
alone drops below the smallest double around K = 11 at x = y = 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Simulation and closed form must agree at least this tightly.
ORACLE_MATCH_TOLERANCE = 1e-12

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SweepPoint:
    alpha: float
    p_total: float
    per_round_p: tuple[float, ...]


def _log2_power_sum(x: float, y: float, exponent: int) -> float:
    """log2(x**e + y**e) without underflow, for x, y in (0, 1)."""
    hi, lo = (x, y) if x >= y else (y, x)
    ratio_pow = 2.0 ** (exponent * math.log2(lo / hi)) if lo < hi else 1.0
    return exponent * math.log2(hi) + math.log1p(ratio_pow) / _LN2


def p_round_closed_form(alpha: float, round_k: int) -> float:
    """Unconditional success probability of round K for initial alpha."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha!r}")
    if not isinstance(round_k, int) or round_k < 1:
        raise ValueError(f"round index must be a positive integer, got {round_k!r}")
    x = alpha * alpha
    y = 1.0 - x
    log2_p = 1.0 + float(2 ** (round_k - 1)) * math.log2(x * y)
    for j in range(2, round_k + 1):
        log2_p -= _log2_power_sum(x, y, 2 ** (j - 1))
    return 2.0**log2_p


def p_total_closed_form(alpha: float, k_max: int) -> float:
    """Total success probability of a k_max-round schedule."""
    return sum(p_round_closed_form(alpha, k) for k in range(1, k_max + 1))


def default_alpha_grid() -> np.ndarray:
    """199 uniform alpha points spanning [0.01, 0.999]."""
    return np.linspace(0.01, 0.999, 199)


def figure3_sweep(
    k_max: int = 10,
    grid: Sequence[float] | Iterable[float] | None = None,
    cross_check: bool = False,
    n_photons: int = 1,
    protocol: str = "ecp2",
) -> list[SweepPoint]:
    """Closed-form total-success curve over an alpha grid.

    With ``cross_check`` set, every point is also simulated with
    ``run_schedule`` and a disagreement beyond ORACLE_MATCH_TOLERANCE on
    any unconditional round probability or on the total raises ValueError.
    """
    if not isinstance(k_max, int) or k_max < 1:
        raise ValueError(f"k_max must be a positive integer, got {k_max!r}")
    alphas = default_alpha_grid() if grid is None else np.asarray(list(grid), dtype=float)
    points: list[SweepPoint] = []
    for a in alphas:
        a = float(a)
        if not (0.0 < a < 1.0):
            raise ValueError(f"grid values must lie strictly inside (0, 1), got {a!r}")
        per_round = tuple(p_round_closed_form(a, k) for k in range(1, k_max + 1))
        point = SweepPoint(alpha=a, p_total=sum(per_round), per_round_p=per_round)
        if cross_check:
            _check_against_engine(point, n_photons, protocol)
        points.append(point)
    return points


def _check_against_engine(point: SweepPoint, n_photons: int, protocol: str) -> None:
    from .protocols import ProtocolConfig, run_schedule

    config = ProtocolConfig(
        protocol=protocol,
        alpha=point.alpha,
        n_photons=n_photons,
        max_rounds=len(point.per_round_p),
    )
    schedule = run_schedule(config)
    for row, expected in zip(schedule.per_round, point.per_round_p):
        if abs(row.p_unconditional - expected) > ORACLE_MATCH_TOLERANCE:
            raise ValueError(
                f"round {row.round_index} at alpha={point.alpha}: simulated "
                f"{row.p_unconditional} vs closed form {expected}"
            )
    if abs(schedule.p_total - point.p_total) > ORACLE_MATCH_TOLERANCE:
        raise ValueError(
            f"p_total at alpha={point.alpha}: simulated {schedule.p_total} "
            f"vs closed form {point.p_total}"
        )
