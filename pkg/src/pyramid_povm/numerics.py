"""Dense linear algebra and scalar solvers shared by the rest of the package."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

HERMITIAN_TOL = 1e-10
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NumericsError(ValueError):
    pass


def _check_hermitian(a: np.ndarray, tol: float) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {a.shape}")
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > tol:
        raise NumericsError(f"matrix is not Hermitian: max |A - A^H| = {dev:.3e} > {tol:.1e}")
    return a


def hermitian_eig(a: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a Hermitian matrix."""
    a = _check_hermitian(a, tol)
    a = 0.5 * (a + a.conj().T)
    return np.linalg.eigh(a)


def inv_sqrt_psd(a: np.ndarray, null_tol: float = 1e-12) -> np.ndarray:
    """Pseudo-inverse square root of a PSD matrix.

    Eigenvalues below ``null_tol * max_eigenvalue`` are treated as exact zeros, so
    ``B @ A @ B`` is the projector onto the support of ``A``.
    """
    w, v = hermitian_eig(a)
    scale = max(float(w[-1]), 0.0) if w.size else 0.0
    cutoff = null_tol * scale
    if w.size and w[0] < -max(cutoff, null_tol):
        raise NumericsError(f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}")
    inv = np.zeros_like(w)
    keep = w > cutoff
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv) @ v.conj().T


def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                max_iter: int = 200) -> tuple[float, tuple[float, float]]:
    """Root of a sign-changing function by bisection.

    Returns the midpoint of the final bracket together with the bracket itself,
    whose width is at most ``tol``.
    """
    if not lo < hi:
        raise NumericsError(f"invalid interval [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, (lo, lo)
    if fhi == 0.0:
        return hi, (hi, hi)
    if (flo > 0) == (fhi > 0):
        raise NumericsError(f"no sign change on [{lo}, {hi}]: f(lo)={flo:.3e}, f(hi)={fhi:.3e}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, (mid, mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12) -> tuple[float, float]:
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    # endpoints matter: boundary maxima are common (I(T) peaks at T=0 below the regime switch)
    best = max(((f(x), x) for x in (lo, hi, 0.5 * (a + b))), key=lambda p: p[0])
    return best[1], best[0]


def maximize_scalar(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                    prescan: int = 1024) -> tuple[float, float]:
    """Maximize a (presumed unimodal) function on ``[lo, hi]``.

    A uniform pre-scan guards the unimodality assumption: if it finds more than
    one interior local maximum, each candidate is refined by golden section on
    its neighbouring cells and the best is returned.
    """
    if not lo < hi:
        raise NumericsError(f"invalid interval [{lo}, {hi}]")
    xs = np.linspace(lo, hi, prescan)
    ys = np.array([f(float(x)) for x in xs])
    peaks = [i for i in range(len(xs))
             if (i == 0 or ys[i] > ys[i - 1]) and (i == len(xs) - 1 or ys[i] >= ys[i + 1])]
    if len(peaks) <= 1:
        return golden_section_max(f, lo, hi, tol)
    best_x, best_y = lo, -math.inf
    for i in peaks:
        a = float(xs[max(i - 1, 0)])
        b = float(xs[min(i + 1, len(xs) - 1)])
        x, y = golden_section_max(f, a, b, tol)
        if y > best_y:
            best_x, best_y = x, y
    return best_x, best_y
