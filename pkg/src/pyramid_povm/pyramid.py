"""The pyramid of N equiprobable unit vectors with a common pairwise overlap."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PyramidEnsemble:
    """N real edge vectors ``E_k`` with ``<E_k|E_l> = lam`` for ``k != l``.

    ``r0`` is the squared height (eigenvalue of the density operator on the height
    vector), ``r1`` the (N-1)-fold degenerate eigenvalue on its complement.
    """

    N: int
    lam: float
    r0: float
    r1: float
    edges: np.ndarray = field(repr=False)  # shape (N, N); row k is |E_k>
    height: np.ndarray = field(repr=False)

    @property
    def lambda_min(self) -> float:
        return -1.0 / (self.N - 1)

    def gram(self) -> np.ndarray:
        return self.edges.conj() @ self.edges.T

    def states(self) -> list[np.ndarray]:
        return [np.outer(e, e.conj()) for e in self.edges]


def lambda_range(N: int) -> tuple[float, float]:
    return -1.0 / (N - 1), 1.0


def make_pyramid(N: int, lam: float) -> PyramidEnsemble:
    if int(N) != N or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N}")
    N = int(N)
    lo, hi = lambda_range(N)
    # admit round-off at the degenerate endpoints
    if not (lo - 1e-14 <= lam <= hi + 1e-14):
        raise ValueError(f"lambda={lam} outside the admissible interval [{lo:.6g}, 1] for N={N}")
    lam = float(min(max(lam, lo), hi))
    r0 = max((1.0 + (N - 1) * lam) / N, 0.0)
    r1 = max((1.0 - lam) / N, 0.0)
    # E_k[j] = sqrt(N r1) (delta_kj - 1/N) + sqrt(r0 / N)
    edges = math.sqrt(N * r1) * (np.eye(N) - 1.0 / N) + math.sqrt(r0 / N)
    edges = edges.astype(complex)
    height = edges.mean(axis=0)
    return PyramidEnsemble(N=N, lam=lam, r0=r0, r1=r1, edges=edges, height=height)


def ensemble_density(p: PyramidEnsemble) -> np.ndarray:
    """rho = (1/N) sum_k |E_k><E_k|."""
    return p.edges.T @ p.edges.conj() / p.N


def pyramid_volume(p: PyramidEnsemble) -> float:
    N = p.N
    return math.sqrt(N * p.r0) * (N * p.r1) ** ((N - 1) / 2) / math.factorial(N)
