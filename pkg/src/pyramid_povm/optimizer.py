"""Numerical maximization of mutual information over POVMs.

Two searches are provided. ``structured_search`` exhaustively scans POVMs that
respect the pyramid symmetry (complex interpolation parameter, rotations about
the height axis, convex mixtures). ``optimize`` runs an unconstrained monotone
fixed-point iteration on the outcome operators: each step replaces
``P_m -> G^{-1/2} X_m P_m X_m^H G^{-1/2}`` with ``X_m = 1 + eps * R_m``, where
``R_m`` is the gradient of the information with respect to ``P_m`` and ``G``
restores completeness. The step size is backtracked so that no accepted step
lowers the information.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .information import mutual_information_table, optimum
from .measurements import Povm, family_kets, validate_povm
from .numerics import inv_sqrt_psd
from .pyramid import PyramidEnsemble, make_pyramid

MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class GeneralEnsemble:
    states: np.ndarray  # (K, d, d) density matrices
    priors: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states, dtype=complex)
        priors = np.asarray(self.priors, dtype=float)
        if states.ndim != 3 or states.shape[1] != states.shape[2]:
            raise ValueError(f"states must have shape (K, d, d), got {states.shape}")
        if priors.shape != (states.shape[0],):
            raise ValueError("one prior per state required")
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-12:
            raise ValueError("priors must form a probability distribution")
        for k, s in enumerate(states):
            if np.max(np.abs(s - s.conj().T)) > 1e-10:
                raise ValueError(f"state {k} is not Hermitian")
            if np.linalg.eigvalsh(s).min() < -1e-10:
                raise ValueError(f"state {k} is not positive semidefinite")
            if abs(np.trace(s).real - 1.0) > 1e-10:
                raise ValueError(f"state {k} does not have unit trace")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def K(self) -> int:
        return self.states.shape[0]

    @classmethod
    def from_pyramid(cls, p: PyramidEnsemble) -> "GeneralEnsemble":
        return cls(np.array(p.states()), np.full(p.N, 1.0 / p.N))


@dataclass
class OptimizationResult:
    best_povm: Povm
    info: float
    iterations: int
    restarts_used: int
    seed: int
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class StructuredSearchSpace:
    complex_t_grid: tuple
    rotation_angles: tuple = (0.0,)
    mixture_weights: tuple = ()

    @classmethod
    def real_t(cls, steps: int = 201) -> "StructuredSearchSpace":
        return cls(tuple(np.linspace(0.0, 1.0, steps)))

    @classmethod
    def default(cls) -> "StructuredSearchSpace":
        radii = np.linspace(0.0, 1.0, 11)
        phases = np.linspace(0.0, np.pi, 3)
        grid = tuple(sorted({complex(np.round(r * np.exp(1j * ph), 14)) for r in radii for ph in phases},
                            key=lambda z: (abs(z), np.angle(z))))
        return cls(grid, tuple(np.linspace(0.0, np.pi / 3, 3)), (0.3, 0.7))


class _Objective:
    """Information of a POVM (stacked elements) for a fixed ensemble, with its gradient."""

    def __init__(self, ens: GeneralEnsemble, base: float):
        self.ens = ens
        self.weighted = ens.priors[:, None, None] * ens.states  # p_k rho_k
        self.log_base = math.log(base)

    def table(self, elems: np.ndarray) -> np.ndarray:
        # p_km = p_k tr(rho_k P_m)
        return np.clip(np.einsum("kij,mji->km", self.weighted, elems).real, 0.0, None)

    def value(self, elems: np.ndarray) -> float:
        return mutual_information_table(self.table(elems), math.e) / self.log_base

    def gradient(self, elems: np.ndarray) -> np.ndarray:
        tab = self.table(elems)
        cols = tab.sum(axis=0, keepdims=True)
        rows = self.ens.priors[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(tab > 0, tab / (rows * cols), 1.0)
        logs = np.log(np.maximum(ratio, 1e-300))
        # R_m = sum_k p_k rho_k log(p_km / (p_k q_m))
        return np.einsum("kij,km->mij", self.weighted, logs)


def _herm(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _completion(factors: np.ndarray) -> np.ndarray | None:
    """G^{-1/2} for G = sum_m A_m A_m^H; None if G is (nearly) singular."""
    total = np.einsum("mij,mkj->ik", factors, factors.conj())
    w, v = np.linalg.eigh(0.5 * (total + total.conj().T))
    if not np.isfinite(w).all() or w[0] <= 1e-10 * w[-1]:
        return None
    return (v / np.sqrt(w)) @ v.conj().T


def _normalize_factors(factors: np.ndarray) -> np.ndarray | None:
    s = _completion(factors)
    return None if s is None else s @ factors


def _elements(factors: np.ndarray) -> np.ndarray:
    return factors @ _herm(factors)


def _factorize(elems: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (elems + _herm(elems)))
    return v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_rank1_povm(rng: np.random.Generator, dim: int, M: int) -> np.ndarray:
    """Factors of a rank-1 POVM from the first ``dim`` rows of a Haar unitary, reweighted at random."""
    u = _haar_unitary(rng, max(M, dim))[:dim, :M]
    weights = rng.dirichlet(np.ones(M)) * M
    factors = np.zeros((M, dim, dim), dtype=complex)
    factors[:, :, 0] = u.T * np.sqrt(weights)[:, None]
    return _normalize_factors(factors)


def pretty_good_povm(ens: GeneralEnsemble, M: int) -> np.ndarray:
    weighted = ens.priors[:, None, None] * ens.states
    s = inv_sqrt_psd(weighted.sum(axis=0))
    pgm = s @ weighted @ s
    d = ens.dim
    elems = np.zeros((M, d, d), dtype=complex)
    n = min(M, ens.K)
    elems[:n] = pgm[:n]
    if ens.K > M:
        elems[M - 1] += pgm[M:].sum(axis=0)
    # complete on the null space of rho, if any
    elems[0] += np.eye(d) - pgm.sum(axis=0)
    return elems


def perturbed_start(ens: GeneralEnsemble, M: int, rng: np.random.Generator,
                    scale: float = 1e-3) -> np.ndarray:
    elems = pretty_good_povm(ens, M)
    d = ens.dim
    noise = rng.standard_normal((M, d, d)) + 1j * rng.standard_normal((M, d, d))
    noise = 0.5 * (noise + np.conj(np.transpose(noise, (0, 2, 1))))
    return _normalize_factors(_factorize(elems + scale * noise + scale * np.eye(d)))


class _Climber:
    """State of one monotone ascent run."""

    def __init__(self, obj: _Objective, factors: np.ndarray):
        self.obj = obj
        self.factors = factors
        self.elems = _elements(factors)
        self.info = obj.value(self.elems)
        self.history = [self.info]
        self.step = 0.5
        self.iterations = 0
        self.converged = False
        self.stalls = 0

    def _propose(self, grad: np.ndarray, eps: float) -> np.ndarray | None:
        d = self.elems.shape[1]
        return _normalize_factors((np.eye(d) + eps * grad) @ self.factors)

    def advance(self, n_steps: int, tol: float, patience: int = 30) -> None:
        for _ in range(n_steps):
            if self.converged:
                return
            grad = self.obj.gradient(self.elems)
            scale = max(float(np.max(np.abs(np.linalg.eigvalsh(grad)))), 1e-300)
            eps = self.step
            accepted = False
            for _ in range(60):
                cand = self._propose(grad, eps / scale)
                val = self.obj.value(_elements(cand)) if cand is not None else -math.inf
                if val >= self.info:
                    accepted = True
                    break
                eps *= 0.5
            self.iterations += 1
            if not accepted:
                self.converged = True
                return
            gain = val - self.info
            self.factors, self.elems, self.info = cand, _elements(cand), val
            self.history.append(val)
            self.step = min(eps * 2.0, 16.0) if eps >= self.step else eps
            # a single tiny step can happen on a slow curve; require a run of them
            self.stalls = self.stalls + 1 if gain < tol else 0
            if self.stalls >= patience:
                self.converged = True
                return


def optimize(ens: GeneralEnsemble, M: int, seed: int = 42, restarts: int = 16,
             tol: float = 1e-10, max_iter: int = 100_000, screen_iter: int = 300,
             base: float | None = None) -> OptimizationResult:
    """Maximize the mutual information between the ensemble label and a POVM outcome.

    Restart 0 starts from a slightly perturbed pretty-good measurement; the
    others from random rank-1 POVMs. Every restart is first advanced for
    ``screen_iter`` steps; the best one is then run to convergence.
    The information is measured in base ``base`` (default: number of states).
    """
    if M < 2:
        raise ValueError("need at least two outcomes")
    if ens.dim > 64:
        raise ValueError(f"dimension {ens.dim} exceeds the desk-scale cap of 64")
    if restarts < 1:
        raise ValueError("need at least one restart")
    obj = _Objective(ens, base if base is not None else max(ens.K, 2))
    rng = np.random.default_rng(seed)
    starts = [perturbed_start(ens, M, rng)]
    starts += [random_rank1_povm(rng, ens.dim, M) for _ in range(restarts - 1)]
    climbers = [_Climber(obj, s) for s in starts]
    for c in climbers:
        c.advance(min(screen_iter, max_iter), tol)
    best = max(climbers, key=lambda c: c.info)  # first maximum wins: deterministic
    best.advance(max_iter - best.iterations, tol)
    povm = Povm(best.elems, tuple(range(M)))
    return OptimizationResult(povm, best.info, best.iterations, len(climbers), seed,
                              best.converged, best.history)


# --- structured search -------------------------------------------------------

def _height_axis_rotation(p: PyramidEnsemble, theta: float) -> np.ndarray:
    """Unitary that fixes the height vector and rotates its orthogonal complement."""
    N = p.N
    h = p.height / np.linalg.norm(p.height)
    # orthonormal basis with h first
    basis, _ = np.linalg.qr(np.column_stack([h, np.eye(N)[:, : N - 1]]))
    basis[:, 0] *= np.vdot(basis[:, 0], h) / abs(np.vdot(basis[:, 0], h))
    local = np.eye(N, dtype=complex)
    if N == 2:
        local[1, 1] = np.exp(1j * theta)
    else:
        c, s = math.cos(theta), math.sin(theta)
        local[1:3, 1:3] = [[c, -s], [s, c]]
    return basis @ local @ basis.conj().T


def structured_candidates(p: PyramidEnsemble, space: StructuredSearchSpace):
    """Yield (description, elements) for every POVM in the search space."""
    base = []
    for t in space.complex_t_grid:
        kets = family_kets(p, complex(t))
        for theta in space.rotation_angles:
            u = _height_axis_rotation(p, float(theta))
            k = kets @ u.T
            elems = np.einsum("mi,mj->mij", k, k.conj())
            base.append(((complex(t), float(theta)), elems))
            yield {"t": complex(t), "theta": float(theta)}, elems
    for w in space.mixture_weights:
        for (da, ea), (db, eb) in itertools.combinations(base, 2):
            yield ({"mix": w, "a": da, "b": db},
                   np.concatenate([w * ea, (1.0 - w) * eb]))


def structured_search(p: PyramidEnsemble, space: StructuredSearchSpace) -> OptimizationResult:
    """Exhaustive evaluation of the symmetry-respecting POVMs in ``space``."""
    if not space.complex_t_grid:
        raise ValueError("empty search space")
    if not 0.0 <= p.lam <= 1.0:
        raise ValueError("structured search is defined for 0 <= lambda <= 1")
    obj = _Objective(GeneralEnsemble.from_pyramid(p), p.N)
    best_info, best_elems, best_desc = -math.inf, None, None
    history = []
    count = 0
    for desc, elems in structured_candidates(p, space):
        count += 1
        val = obj.value(elems)
        if val > best_info:
            best_info, best_elems, best_desc = val, elems, desc
        history.append(best_info)
    povm = Povm(best_elems, tuple(range(best_elems.shape[0])))
    result = OptimizationResult(povm, best_info, count, 0, 0, True, history)
    result.argmax = best_desc
    return result


def srm_only_space_search(p: PyramidEnsemble) -> OptimizationResult:
    return structured_search(p, StructuredSearchSpace((1.0,)))


@dataclass
class VerificationPoint:
    lam: float
    optimized: float
    closed_form: float
    regime: str
    inconclusive_weight: float
    converged: bool
    iterations: int

    @property
    def excess(self) -> float:
        return self.optimized - self.closed_form

    @property
    def deficit(self) -> float:
        return self.closed_form - self.optimized


@dataclass
class VerificationReport:
    N: int
    M: int
    seed: int
    points: list[VerificationPoint]
    excess_tol: float = 1e-9
    deficit_tol: float = 1e-6
    switch_floor: float = 1e-5

    @property
    def excess_flags(self) -> list[float]:
        return [pt.lam for pt in self.points if pt.excess > self.excess_tol]

    @property
    def deficit_flags(self) -> list[float]:
        return [pt.lam for pt in self.points if pt.deficit > self.deficit_tol]

    @property
    def ok(self) -> bool:
        return not self.excess_flags and not self.deficit_flags

    def regime_switch(self) -> tuple[float, float] | None:
        """Adjacent grid points between which the optimizer starts using the inconclusive outcome."""
        pts = sorted(self.points, key=lambda q: q.lam)
        for a, b in zip(pts, pts[1:]):
            if a.inconclusive_weight <= self.switch_floor < b.inconclusive_weight:
                return a.lam, b.lam
        return None


def inconclusive_weight(ens: GeneralEnsemble, elems: np.ndarray, spread: float = 1e-3) -> float:
    """Total probability of outcomes whose posterior over labels is (nearly) uniform.

    Such outcomes carry no information; they appear once the optimum leaves the
    square-root regime.
    """
    weighted = ens.priors[:, None, None] * ens.states
    tab = np.clip(np.einsum("kij,mji->km", weighted, elems).real, 0.0, None)
    q = tab.sum(axis=0)
    live = q > 1e-12
    post = tab[:, live] / q[live]
    flat = (post.max(axis=0) - post.min(axis=0)) < spread
    return float(q[live][flat].sum())


def verify_against_closed_form(N: int, lambda_grid: Sequence[float], M: int | None = None,
                               seed: int = 42, restarts: int = 16,
                               tol: float = 1e-10, max_iter: int = 100_000) -> VerificationReport:
    M = N + 2 if M is None else M
    points = []
    for lam in lambda_grid:
        p = make_pyramid(N, float(lam))
        ref = optimum(p)
        ens = GeneralEnsemble.from_pyramid(p)
        res = optimize(ens, M, seed=seed, restarts=restarts, tol=tol, max_iter=max_iter)
        points.append(VerificationPoint(
            float(lam), res.info, ref.Imax, ref.regime,
            inconclusive_weight(ens, res.best_povm.elements), res.converged, res.iterations))
    return VerificationReport(N, M, seed, points)


def check_feasible(q: Povm, tol: float = 1e-8) -> bool:
    return validate_povm(q, tol).ok
