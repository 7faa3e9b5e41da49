"""Square-root, unambiguous and interpolating POVMs for pyramid ensembles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import inv_sqrt_psd
from .pyramid import PyramidEnsemble, ensemble_density

INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Povm:
    """Outcome operators ``elements[m]`` (each dim x dim) with matching labels."""

    elements: np.ndarray
    labels: tuple

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def M(self) -> int:
        return self.elements.shape[0]

    @classmethod
    def from_kets(cls, kets: Sequence[np.ndarray], labels: Sequence | None = None) -> "Povm":
        kets = np.asarray(kets, dtype=complex)
        elements = np.einsum("mi,mj->mij", kets, kets.conj())
        return cls(elements, tuple(labels) if labels is not None else tuple(range(len(kets))))


@dataclass(frozen=True)
class PovmReport:
    completeness_deviation: float
    min_eigenvalue: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.completeness_deviation <= self.tol and self.min_eigenvalue >= -self.tol


def validate_povm(q: Povm, tol: float = 1e-10) -> PovmReport:
    """Operator-norm deviation of the element sum from identity, and the smallest element eigenvalue."""
    total = q.elements.sum(axis=0)
    dev = float(np.linalg.norm(total - np.eye(q.dim), ord=2))
    herm = 0.5 * (q.elements + np.conj(np.transpose(q.elements, (0, 2, 1))))
    min_eig = float(np.linalg.eigvalsh(herm).min())
    return PovmReport(dev, min_eig, tol)


def _require_nondegenerate(p: PyramidEnsemble) -> None:
    if p.r1 <= 0.0 or p.r0 <= 0.0:
        raise ValueError(
            f"degenerate pyramid (N={p.N}, lambda={p.lam}): r0={p.r0}, r1={p.r1}; "
            "lambda must lie strictly inside (-1/(N-1), 1)")


def srm_kets(p: PyramidEnsemble) -> np.ndarray:
    _require_nondegenerate(p)
    base = (p.edges - p.height) / math.sqrt(p.N * p.r1)
    return base + p.height / math.sqrt(p.N * p.r0)


def srm(p: PyramidEnsemble) -> Povm:
    """Square-root measurement, built from the closed-form kets."""
    return Povm.from_kets(srm_kets(p), labels=range(p.N))


def srm_from_density(p: PyramidEnsemble) -> Povm:
    """Square-root measurement via (N rho)^(-1/2) |E_m><E_m| (N rho)^(-1/2)."""
    _require_nondegenerate(p)
    s = inv_sqrt_psd(p.N * ensemble_density(p))
    return Povm.from_kets(p.edges @ s.T, labels=range(p.N))


def t_from_T(p: PyramidEnsemble, T: float) -> float:
    return 1.0 - T + T * math.sqrt(p.r1 / p.r0)


def T_from_t(p: PyramidEnsemble, t: float) -> float:
    s = math.sqrt(p.r1 / p.r0)
    if s == 1.0:
        return 0.0
    return (1.0 - t) / (1.0 - s)


def family_kets(p: PyramidEnsemble, t: complex) -> np.ndarray:
    _require_nondegenerate(p)
    if abs(t) > 1.0 + 1e-15:
        raise ValueError(f"|t| must not exceed 1, got {t}")
    conclusive = (p.edges - p.height) / math.sqrt(p.N * p.r1) + t * p.height / math.sqrt(p.N * p.r0)
    inconclusive = p.height * math.sqrt(max(1.0 - abs(t) ** 2, 0.0) / p.r0)
    return np.vstack([conclusive, inconclusive[None, :]])


def family_povm(p: PyramidEnsemble, t: float) -> Povm:
    """N conclusive outcomes plus one inconclusive outcome along the height vector.

    ``t=1`` is the square-root measurement (with an exact zero last element),
    ``t=sqrt(r1/r0)`` the unambiguous-discrimination measurement.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return Povm.from_kets(family_kets(p, t), labels=(*range(p.N), INCONCLUSIVE))


def mud(p: PyramidEnsemble) -> Povm:
    _require_nondegenerate(p)
    return family_povm(p, math.sqrt(p.r1 / p.r0))


def inconclusive_probability(p: PyramidEnsemble, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return (1.0 - t * t) * p.r0
