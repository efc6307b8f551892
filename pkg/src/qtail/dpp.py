"""Determinantal point processes driven by the lattice kernels.

A kernel restricted to a finite window of lattice points gives a Hermitian
matrix with eigenvalues in [0, 1]; ``correlation`` evaluates determinantal
correlation functions, ``sample_window`` draws exact samples by the
eigendecomposition method (select eigenvectors by independent Bernoulli
trials, then sample the resulting projection process point by point), and
``exact_outcome_probabilities`` inverts the correlations by
inclusion-exclusion for small windows as an independent oracle.

Randomness: each sample uses ``np.random.default_rng([seed, index])`` so
any single sample can be reproduced in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .kernels import LatticePoint
from .qspecial import DomainError

__all__ = [
    "Window",
    "SampleConfig",
    "kernel_matrix",
    "correlation",
    "rho1_star_profile",
    "sample_window",
    "exact_outcome_probabilities",
]

MAX_WINDOW = 64
MAX_EXACT_WINDOW = 12
IMAG_RESIDUE = 1e-9
EIG_SOFT_BAND = 1e-9
EIG_HARD_BAND = 1e-8

Kernel = Callable[[LatticePoint, LatticePoint], complex]


@dataclass(frozen=True)
class Window:
    points: tuple[LatticePoint, ...]

    def __post_init__(self):
        if not self.points:
            raise DomainError("window must be nonempty")
        if len(self.points) > MAX_WINDOW:
            raise DomainError(f"window limited to {MAX_WINDOW} points")
        if len(set(self.points)) != len(self.points):
            raise DomainError("window points must be distinct")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SampleConfig:
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples <= 0:
            raise DomainError("n_samples must be positive")


def kernel_matrix(points: Sequence[LatticePoint], kernel: Kernel) -> np.ndarray:
    n = len(points)
    K = np.empty((n, n), dtype=complex)
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            K[i, j] = kernel(x, y)
    return K


def correlation(points: Sequence[LatticePoint], kernel: Kernel) -> float:
    """rho(x_1..x_n) = det[K(x_i, x_j)]; must come out real."""
    det = complex(np.linalg.det(kernel_matrix(points, kernel)))
    if abs(det.imag) > IMAG_RESIDUE * max(1.0, abs(det)):
        raise ArithmeticError(f"correlation has imaginary residue {det.imag:.3e}")
    return float(det.real)


def rho1_star_profile(points: Sequence[LatticePoint], kernel: Kernel) -> list[float]:
    """min(rho_1, 1 - rho_1) at each point: the per-point contribution to
    the diffuseness series (number-variance divergence criterion)."""
    out = []
    for x in points:
        r = correlation([x], kernel)
        out.append(min(r, 1.0 - r))
    return out


def _validated_eigh(K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    herm = float(np.max(np.abs(K - K.conj().T)))
    if herm > 1e-8 * max(1.0, float(np.max(np.abs(K)))):
        raise ArithmeticError(f"kernel matrix not Hermitian (defect {herm:.3e})")
    lam, V = np.linalg.eigh(0.5 * (K + K.conj().T))
    if np.any(lam < -EIG_HARD_BAND) or np.any(lam > 1.0 + EIG_HARD_BAND):
        raise ArithmeticError("kernel eigenvalues leave [0, 1] beyond tolerance")
    return np.clip(lam, 0.0, 1.0), V


def sample_window(window: Window, kernel: Kernel, cfg: SampleConfig) -> list[tuple[int, ...]]:
    """Exact samples of the determinantal process on the window.

    Returns, per sample, the sorted tuple of selected point indices.
    """
    K = kernel_matrix(window.points, kernel)
    lam, V = _validated_eigh(K)
    n = len(window)
    out = []
    for s in range(cfg.n_samples):
        rng = np.random.default_rng([cfg.seed, s])
        keep = rng.random(lam.shape[0]) < lam
        B = V[:, keep]  # columns: orthonormal selected eigenvectors
        chosen: list[int] = []
        while B.shape[1] > 0:
            k = B.shape[1]
            probs = np.sum(np.abs(B) ** 2, axis=1).real / k
            probs = np.clip(probs, 0.0, None)
            probs /= probs.sum()
            i = int(rng.choice(n, p=probs))
            chosen.append(i)
            # restrict the span to vectors vanishing at point i
            row = B[i, :]
            j0 = int(np.argmax(np.abs(row)))
            piv = B[:, j0].copy()
            pr = row[j0]
            B = np.delete(B, j0, axis=1)
            B = B - np.outer(piv, B[i, :] / pr)
            # re-orthonormalize for numerical stability
            if B.shape[1] > 0:
                Q, _ = np.linalg.qr(B)
                B = Q
        out.append(tuple(sorted(chosen)))
    return out


def exact_outcome_probabilities(points: Sequence[LatticePoint],
                                kernel: Kernel) -> dict[tuple[int, ...], float]:
    """P(configuration = S) for every subset S of a small window, by
    inclusion-exclusion over the correlation functions."""
    n = len(points)
    if n > MAX_EXACT_WINDOW:
        raise DomainError(f"exact enumeration limited to {MAX_EXACT_WINDOW} points")
    K = kernel_matrix(points, kernel)

    def minor_det(idx: tuple[int, ...]) -> float:
        if not idx:
            return 1.0
        sub = K[np.ix_(idx, idx)]
        return float(np.linalg.det(sub).real)

    out = {}
    all_idx = tuple(range(n))
    for r in range(n + 1):
        for S in combinations(all_idx, r):
            rest = [i for i in all_idx if i not in S]
            p = 0.0
            for r2 in range(len(rest) + 1):
                for extra in combinations(rest, r2):
                    p += (-1) ** len(extra) * minor_det(tuple(sorted(S + extra)))
            out[S] = p
    return out
