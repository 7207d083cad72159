"""Operator norms, PSD square roots and the permutation sum bound."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..permcover import first_collision

HERM_TOL = 1e-9
PSD_TOL = 1e-9


def hermitian_residual(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value.

    Hermitian input uses the largest absolute eigenvalue; anything else the
    square root of the top eigenvalue of ``M^dagger M``.
    """
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    if m.size == 0:
        return 0.0
    if m.shape[0] == m.shape[1] and hermitian_residual(m) <= HERM_TOL:
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return float(max(abs(w[0]), abs(w[-1])))
    g = m.conj().T @ m
    return float(np.sqrt(max(np.linalg.eigvalsh((g + g.conj().T) / 2)[-1], 0.0)))


def psd_sqrt(p: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Positive square root; eigenvalues in [-tol, 0) are clamped to zero."""
    if hermitian_residual(p) > HERM_TOL:
        raise ValueError("operator is not Hermitian")
    w, v = np.linalg.eigh((p + p.conj().T) / 2)
    if w[0] < -tol:
        raise ValueError(f"operator has negative eigenvalue {w[0]:.3e}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def is_psd(p: np.ndarray, tol: float = PSD_TOL) -> bool:
    if hermitian_residual(p) > tol:
        return False
    return bool(np.linalg.eigvalsh((p + p.conj().T) / 2)[0] >= -tol)


def projector_residual(p: np.ndarray) -> float:
    return float(np.max(np.abs(p @ p - p))) if p.size else 0.0


def check_orthogonal_permutations(fam: Sequence[Sequence[int]], size: int) -> None:
    for idx, m in enumerate(fam):
        if sorted(m) != list(range(size)):
            raise ValueError(f"family member {idx} is not a permutation of {size} items")
    hit = first_collision(fam)
    if hit is not None:
        i, j, v = hit
        raise ValueError(f"permutations {i} and {j} are not orthogonal (agree at {v})")


def sum_bound_rhs(ps: Sequence[np.ndarray], fam: Sequence[Sequence[int]]) -> float:
    """``sum_i max_j || sqrt(P_j) sqrt(P_{pi_i(j)}) ||`` for orthogonal ``pi_i``."""
    if len(fam) != len(ps):
        raise ValueError(f"need {len(ps)} permutations, got {len(fam)}")
    check_orthogonal_permutations(fam, len(ps))
    roots = [psd_sqrt(p) for p in ps]
    cache: dict[tuple[int, int], float] = {}

    def pair(j: int, l: int) -> float:
        key = (j, l)
        if key not in cache:
            cache[key] = operator_norm(roots[j] @ roots[l])
        return cache[key]

    return float(sum(max(pair(j, pi[j]) for j in range(len(ps))) for pi in fam))
