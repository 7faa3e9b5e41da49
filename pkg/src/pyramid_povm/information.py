"""Mutual information between Alice's letter and Eve's outcome, in base-N units."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measurements import Povm, t_from_T, family_povm
from .numerics import maximize_scalar
from .pyramid import PyramidEnsemble, make_pyramid

SRM_OPTIMAL = "SRM-optimal"
FAMILY_OPTIMAL = "family-optimal"


def _xlogy(x: float, y: float) -> float:
    return x * math.log(y) if x > 0.0 else 0.0


@dataclass(frozen=True)
class JointDistribution:
    """Joint table ``p[n, m]`` of Alice's letter n and Eve's outcome m."""

    p: np.ndarray

    @property
    def N(self) -> int:
        return self.p.shape[0]

    @property
    def M(self) -> int:
        return self.p.shape[1]

    def check(self, tol: float = 1e-10) -> None:
        if np.any(self.p < -tol):
            raise ValueError("negative joint probability")
        if abs(self.p.sum() - 1.0) > max(tol, 1e-12):
            raise ValueError(f"joint table sums to {self.p.sum()!r}")
        rows = self.p.sum(axis=1)
        if np.max(np.abs(rows - 1.0 / self.N)) > tol:
            raise ValueError("row marginals are not uniform")


def joint_distribution(p: PyramidEnsemble, q: Povm) -> JointDistribution:
    if q.dim != p.N:
        raise ValueError(f"POVM acts on dimension {q.dim}, pyramid needs {p.N}")
    # p_nm = (1/N) <E_n|P_m|E_n>
    table = np.einsum("ni,mij,nj->nm", p.edges.conj(), q.elements, p.edges).real / p.N
    return JointDistribution(np.clip(table, 0.0, None))


def mutual_information_table(table: np.ndarray, base: float) -> float:
    """Mutual information of a joint table; zero cells and zero columns contribute nothing."""
    table = np.asarray(table, dtype=float)
    rows = table.sum(axis=1, keepdims=True)
    cols = table.sum(axis=0, keepdims=True)
    mask = table > 0
    denom = (rows * cols)[mask]
    total = float(np.sum(table[mask] * np.log(table[mask] / denom)))
    return total / math.log(base)


def mutual_information(j: JointDistribution) -> float:
    return mutual_information_table(j.p, j.N)


@dataclass(frozen=True)
class EtaPair:
    eta0: float
    eta1: float
    eta_bar0: float | None = None
    eta_bar1: float | None = None


def eta_pair(p: PyramidEnsemble) -> EtaPair:
    """Correct/incorrect letter probabilities of the square-root measurement."""
    s0, s1 = math.sqrt(p.r0), math.sqrt(p.r1)
    root_N = math.sqrt(p.N)
    return EtaPair(((s0 + (p.N - 1) * s1) / root_N) ** 2, ((s0 - s1) / root_N) ** 2)


def _symmetric_information(N: int, a0: float, a1: float) -> float:
    # I = a0 log_N(N a0/s) + (N-1) a1 log_N(N a1/s), s = a0 + (N-1) a1
    s = a0 + (N - 1) * a1
    if s <= 0.0:
        return 0.0
    return (_xlogy(a0, N * a0 / s) + (N - 1) * _xlogy(a1, N * a1 / s)) / math.log(N)


def srm_information(p: PyramidEnsemble) -> float:
    eta = eta_pair(p)
    return _symmetric_information(p.N, eta.eta0, eta.eta1)


def family_etas(p: PyramidEnsemble, T: float) -> EtaPair:
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"T must lie in [0, 1], got {T}")
    eta = eta_pair(p)
    bar0 = (math.sqrt(eta.eta0) - T * math.sqrt(eta.eta1)) ** 2
    bar1 = (1.0 - T) ** 2 * eta.eta1
    return EtaPair(eta.eta0, eta.eta1, bar0, bar1)


def family_information(p: PyramidEnsemble, T: float) -> float:
    """Closed-form information of the interpolating family at rescaled parameter T."""
    eta = family_etas(p, T)
    return _symmetric_information(p.N, eta.eta_bar0, eta.eta_bar1)


def family_information_numeric(p: PyramidEnsemble, T: float) -> float:
    return mutual_information(joint_distribution(p, family_povm(p, t_from_T(p, T))))


def lambda_threshold(N: int) -> float:
    """Overlap above which the square-root measurement stops being optimal."""
    return (3 * N - 4) / (N * (N - 1))


@dataclass(frozen=True)
class OptimumReport:
    N: int
    lam: float
    Lambda: float
    regime: str
    Tstar: float
    Imax: float
    Isrm: float


def optimal_T(p: PyramidEnsemble) -> float:
    eta = eta_pair(p)
    if eta.eta1 <= 0.0:
        return 0.0
    return 1.0 - (math.sqrt(eta.eta0 / eta.eta1) - 1.0) / (p.N - 2)


def family_optimum_information(N: int, lam: float) -> float:
    return (1.0 - lam) * (N - 1) / (N - 2) * math.log(N - 1) / math.log(N)


def optimum(p: PyramidEnsemble) -> OptimumReport:
    if p.lam < 0.0:
        raise ValueError(f"optimality is only established for lambda >= 0, got {p.lam}")
    N, lam = p.N, p.lam
    Lambda = lambda_threshold(N)
    isrm = srm_information(p)
    if N == 2 or lam < Lambda:
        return OptimumReport(N, lam, Lambda, SRM_OPTIMAL, 0.0, isrm, isrm)
    Tstar = min(max(optimal_T(p), 0.0), 1.0)
    return OptimumReport(N, lam, Lambda, FAMILY_OPTIMAL, Tstar,
                         family_optimum_information(N, lam), isrm)


def maximize_family(p: PyramidEnsemble, tol: float = 1e-12) -> tuple[float, float]:
    """Numerical (argmax T, max I) of the family information over T in [0, 1]."""
    return maximize_scalar(lambda T: family_information(p, T), 0.0, 1.0, tol)


def asymptotic_ratio(N: int) -> float:
    """Limit of Imax / Isrm as lambda -> 1."""
    if N <= 2:
        raise ValueError("the limiting ratio formula needs N >= 3 (the ratio is 1 for N = 2)")
    return (N / 2) / (N - 2) * math.log(N - 1)


def imax(N: int, lam: float) -> float:
    return optimum(make_pyramid(N, lam)).Imax


def mud_information(p: PyramidEnsemble) -> float:
    """Information of the unambiguous-discrimination measurement: 1 - lambda."""
    return 1.0 - p.lam


def srm_mud_crossing(N: int, tol: float = 1e-13) -> float:
    """Overlap in (0, 1) at which the square-root and unambiguous measurements give equal information."""
    from .numerics import bisect_root

    def gap(lam: float) -> float:
        return srm_information(make_pyramid(N, lam)) - (1.0 - lam)

    # both vanish at lambda = 1, so locate the first sign change on a grid first
    grid = np.linspace(1e-6, 1.0 - 1e-6, 2001)
    vals = [gap(float(x)) for x in grid]
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if (fa > 0) != (fb > 0):
            return bisect_root(gap, float(a), float(b), tol)[0]
    raise ValueError(f"no crossing found for N={N}")
