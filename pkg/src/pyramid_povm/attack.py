"""Intercept-attack construction: Eve's two-qunit ancilla states and the four-qunit source state.

Basis conventions: ``|m_l>`` is the computational basis and ``|mbar_k>`` its
discrete Fourier conjugate, ``mbar_k[j] = exp(2 pi i j k / N) / sqrt(N)``.
Ancilla states are returned unnormalized; their squared norms are the
probabilities of the (Alice, Bob) outcome pairs.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .pyramid import PyramidEnsemble, make_pyramid

MAX_FOUR_QUNIT_N = 6


@dataclass(frozen=True)
class NoiseModel:
    N: int
    beta0: float  # probability that Bob's letter equals Alice's
    beta1: float  # probability of each particular mismatch

    @property
    def D(self) -> float:
        return 1.0 - self.beta0


@dataclass(frozen=True)
class AttackAmplitudes:
    a: complex
    b: complex


@dataclass(frozen=True)
class AncillaFamily:
    """``states[k, l]`` is the ancilla ket for Alice's letter k and Bob's letter l.

    Coordinates refer to the product basis ``|mbar_k' m_l'>`` flattened as ``k' * N + l'``.
    """

    N: int
    states: np.ndarray  # (N, N, N*N)

    def diagonal(self) -> np.ndarray:
        return np.array([self.states[k, k] for k in range(self.N)])

    def normalized_gram(self) -> np.ndarray:
        d = self.diagonal()
        d = d / np.linalg.norm(d, axis=1, keepdims=True)
        return d.conj() @ d.T


def make_noise_model(N: int, D: float) -> NoiseModel:
    if N < 2:
        raise ValueError("N must be at least 2")
    hi = (N - 1) / N
    if not -1e-15 <= D <= hi + 1e-15:
        raise ValueError(f"disturbance D={D} outside [0, {hi:.6g}] for N={N}")
    D = min(max(D, 0.0), hi)
    return NoiseModel(N, 1.0 - D, D / (N - 1))


def amplitude_residuals(m: NoiseModel, amp: AttackAmplitudes) -> tuple[float, float]:
    """Deviations from |a + b/N|^2 = beta0 - (N-1) beta1 / N and |b|^2 = N beta1."""
    N = m.N
    r1 = abs(amp.a + amp.b / N) ** 2 - (m.beta0 - (N - 1) * m.beta1 / N)
    r2 = abs(amp.b) ** 2 - N * m.beta1
    return r1, r2


def default_amplitudes(m: NoiseModel) -> AttackAmplitudes:
    if m.beta0 < m.beta1:
        raise ValueError(f"beta0={m.beta0} < beta1={m.beta1}: no real amplitude a exists")
    return AttackAmplitudes(complex(math.sqrt(m.beta0 - m.beta1)), 1j * math.sqrt(m.N * m.beta1))


def phased_amplitudes(m: NoiseModel, phase_a: float, phase_b: float) -> AttackAmplitudes:
    """Another admissible pair: |b| fixed, a chosen so that a + b/N has the required modulus."""
    N = m.N
    b = math.sqrt(N * m.beta1) * cmath.exp(1j * phase_b)
    c = math.sqrt(max(m.beta0 - (N - 1) * m.beta1 / N, 0.0))
    return AttackAmplitudes(c * cmath.exp(1j * phase_a) - b / N, b)


def fourier_basis(N: int) -> np.ndarray:
    """Column k is |mbar_k> in computational coordinates."""
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / math.sqrt(N)


def build_ancilla_family(m: NoiseModel, amp: AttackAmplitudes) -> AncillaFamily:
    N = m.N
    psi_bar = np.zeros(N * N, dtype=complex)
    psi_bar[np.arange(N) * N + np.arange(N)] = 1.0 / math.sqrt(N)
    states = np.zeros((N, N, N * N), dtype=complex)
    for k in range(N):
        for l in range(N):
            states[k, l, k * N + l] = amp.b / N
        states[k, k] += amp.a / math.sqrt(N) * psi_bar
    return AncillaFamily(N, states)


def disturbance_to_lambda(m: NoiseModel) -> float:
    """Common overlap of Eve's normalized ancilla states for matching letters."""
    if m.beta0 < m.beta1:
        raise ValueError(f"beta0={m.beta0} < beta1={m.beta1}: overlap would be negative")
    return (m.beta0 - m.beta1) / m.beta0


def lambda_of_disturbance(N: int, D: float) -> float:
    return 1.0 - D / ((N - 1) * (1.0 - D))


def disturbance_of_lambda(N: int, lam: float) -> float:
    """Inverse of ``lambda_of_disturbance``."""
    x = (1.0 - lam) * (N - 1)
    return x / (1.0 + x)


def eve_pyramid(m: NoiseModel) -> PyramidEnsemble:
    return make_pyramid(m.N, disturbance_to_lambda(m))


def _max_entangled(N: int, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # (1/sqrt N) sum_k |left_k> (x) |right_k>, bases given as columns
    return np.einsum("ik,jk->ij", left, right) / math.sqrt(N)


def build_four_qunit_state(N: int, amp: AttackAmplitudes) -> np.ndarray:
    """a |psi_12 psibar_34> + b |psi_13 psibar_24> as a tensor of shape (N, N, N, N).

    ``psi = (1/sqrt N) sum_j |j j>`` and ``psibar = (1/sqrt N) sum_k |mbar_k m_k>``.
    Qunit 1 goes to Alice, qunit 2 to Bob, qunits 3 and 4 are Eve's ancilla.
    """
    if N > MAX_FOUR_QUNIT_N:
        raise ValueError(f"N={N} too large for the dense four-qunit state (max {MAX_FOUR_QUNIT_N})")
    eye = np.eye(N)
    psi = _max_entangled(N, eye, eye)
    psi_bar = _max_entangled(N, fourier_basis(N), eye)
    first = np.einsum("ab,cd->abcd", psi, psi_bar)
    second = np.einsum("ac,bd->abcd", psi, psi_bar)
    return amp.a * first + amp.b * second


def measurement_bases(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Alice's and Bob's measurement bases (columns) that pair with the ancilla labels."""
    f = fourier_basis(N)
    return f.conj(), f


def project_outcomes(N: int, psi: np.ndarray) -> np.ndarray:
    """Unnormalized ancilla states, in ``|mbar_k' m_l'>`` coordinates, for each (Alice k, Bob l)."""
    alice, bob = measurement_bases(N)
    # contract qunits 1, 2 with <x_k|, <y_l|
    anc = np.einsum("ak,bl,abcd->klcd", alice.conj(), bob.conj(), psi)
    # computational (c, d) -> (mbar_k', m_l') coordinates
    anc = np.einsum("cq,klcd->klqd", fourier_basis(N).conj(), anc)
    return anc.reshape(N, N, N * N)
