"""Csiszar-Korner thresholds: the disturbance at which Alice-Bob and Alice-Eve information coincide."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import disturbance_to_lambda, make_noise_model
from .information import mutual_information_table, optimum, srm_information
from .numerics import bisect_root
from .pyramid import make_pyramid

SRM = "srm"
OPTIMAL = "optimal"
STRATEGIES = (SRM, OPTIMAL)


def _xlogy(x: float, y: float) -> float:
    return x * math.log(y) if x > 0.0 else 0.0


def alice_bob_information(N: int, D: float) -> float:
    m = make_noise_model(N, D)
    return (_xlogy(m.beta0, N * m.beta0) + (N - 1) * _xlogy(m.beta1, N * m.beta1)) / math.log(N)


def alice_bob_table(N: int, D: float) -> np.ndarray:
    m = make_noise_model(N, D)
    return (m.beta1 + (m.beta0 - m.beta1) * np.eye(N)) / N


def alice_bob_information_numeric(N: int, D: float) -> float:
    return mutual_information_table(alice_bob_table(N, D), N)


def pyramid_information(N: int, lam: float, strategy: str) -> float:
    p = make_pyramid(N, lam)
    if strategy == SRM:
        return srm_information(p)
    if strategy == OPTIMAL:
        return optimum(p).Imax
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def eve_information(N: int, D: float, strategy: str) -> float:
    """Eve's information about Alice's letter.

    When Bob's letter differs from Alice's (probability D) Eve's ancilla lies in
    a mutually orthogonal sector and identifies the letter; otherwise she faces
    the pyramid with overlap ``lambda(D)``.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    m = make_noise_model(N, D)
    lam = disturbance_to_lambda(m)
    return m.D + m.beta0 * pyramid_information(N, lam, strategy)


def critical_disturbance(N: int) -> float:
    """Disturbance below which Eve's pyramid is in the family-optimal regime."""
    return (N - 2) ** 2 / ((N - 2) ** 2 + N)


@dataclass(frozen=True)
class ThresholdReport:
    N: int
    strategy: str
    D_star: float
    I_at_threshold: float
    critical_D: float
    bracket: tuple[float, float]


def ck_threshold(N: int, strategy: str = OPTIMAL, tol: float = 1e-12) -> ThresholdReport:
    if N < 2:
        raise ValueError("N must be at least 2")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")

    def gap(D: float) -> float:
        return alice_bob_information(N, D) - eve_information(N, D, strategy)

    lo, hi = 1e-9, (N - 1) / N - 1e-9
    D_star, bracket = bisect_root(gap, lo, hi, tol)
    return ThresholdReport(N, strategy, D_star, alice_bob_information(N, D_star),
                           critical_disturbance(N), bracket)
