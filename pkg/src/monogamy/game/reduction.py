"""Turning a coset-game strategy into a basis-game strategy for a fixed basis."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..f2linalg import Subspace, bit, dot, dual_basis, enumerate_invertible
from ..permcover import weighted_strings
from ..qstates import basis_change_unitary
from .projectors import split_positions, winning_probability_enlg
from .strategy import CosetStrategy, ENLGStrategy, choi_state


def _coarse_grain(elems: np.ndarray, functionals: Sequence[int]) -> np.ndarray:
    """Bin raw outcomes v by the bit string ``(f . v)`` over ``functionals``."""
    k = len(functionals)
    out = np.zeros((1 << k,) + elems.shape[1:], dtype=complex)
    for v in range(elems.shape[0]):
        y = 0
        for f in functionals:
            y = (y << 1) | dot(f, v)
        out[y] += elems[v]
    return out


def reduce_coset_to_basis_strategy(strategy: CosetStrategy, rows: Sequence[int]) -> ENLGStrategy:
    """Basis-game strategy run by players who share the basis ``rows = (u_1..u_n)``.

    The state is the channel applied to EPR halves rotated by ``U_B``. On
    question theta both players measure ``A = span{u_i : theta_i = 1}``; Bob
    reports the coordinates of his answer on ``u_i`` for i in T, which are read
    off with the dual vectors ``u^i``, and Charlie reports ``z . u_i`` for i
    outside T.
    """
    n = strategy.n
    dual = dual_basis(rows, n)  # rejects singular bases
    ch = strategy.channel
    rho = choi_state(ch, basis_change_unitary(rows, n))
    out = ENLGStrategy("basis", n, rho, ch.d_b, ch.d_c)
    for theta in weighted_strings(n):
        t, tbar = split_positions(theta, n)
        a = Subspace.span([rows[i] for i in range(n) if theta & bit(n, i)], n)
        out.bob[theta] = _coarse_grain(strategy.bob[a], [dual[i] for i in t])
        out.charlie[theta] = _coarse_grain(strategy.charlie[a], [rows[i] for i in tbar])
    return out


def basis_averaged_value(strategy: CosetStrategy, bases: Iterable[Sequence[int]] | None = None) -> float:
    """Basis-game value of the reduced strategy averaged over shared bases.

    Defaults to every ordered basis of F_2^n.
    """
    pool = list(enumerate_invertible(strategy.n)) if bases is None else list(bases)
    return float(np.mean([winning_probability_enlg(reduce_coset_to_basis_strategy(strategy, b)) for b in pool]))
