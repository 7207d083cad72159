"""Pairwise overlap bound for the basis-monogamy game operators."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..f2linalg import bit
from ..qstates import hadamard_all
from .ops import operator_norm
from .projectors import basis_frame, frame_projector, restrict, split_positions
from .strategy import InvalidStrategy, is_projective

MAX_OVERLAP_N = 4


class BasisOverlap(NamedTuple):
    lhs: float  # ||Pi^theta Pi^theta'||
    rhs: float  # 2^(-|R|/4)
    pqp: float  # ||P Q P|| for the relaxed projectors
    pqp_bound: float  # 2^(-|S|)
    r_size: int
    s_size: int


def _s_projector(n: int, s_positions: list[int], x_s: int) -> np.ndarray:
    """Diagonal projector fixing the standard-basis bits on ``s_positions`` to ``x_s``."""
    return np.diag([1.0 if restrict(z, s_positions, n) == x_s else 0.0 for z in range(1 << n)])


def _hadamard_on(n: int, positions: list[int]) -> np.ndarray:
    h1 = hadamard_all(1)
    out = np.ones((1, 1), dtype=complex)
    for i in range(n):
        out = np.kron(out, h1 if i in positions else np.eye(2))
    return out


def verify_basis_overlap(theta: int, theta_p: int, bob: dict, charlie: dict, n: int) -> BasisOverlap:
    """``||Pi^theta Pi^theta'||`` against ``2^(-|R|/4)`` with the relaxed ``P``, ``Q`` step.

    ``bob``/``charlie`` map basis strings to projective measurements.
    """
    if n > MAX_OVERLAP_N:
        raise ValueError(f"dense overlap check limited to n <= {MAX_OVERLAP_N}")
    for th in (theta, theta_p):
        if th not in bob or th not in charlie:
            raise InvalidStrategy(f"missing POVM for theta={th:0{n}b}")
        if not (is_projective(bob[th]) and is_projective(charlie[th])):
            raise InvalidStrategy("overlap bound needs projective measurements")
    pi = frame_projector(basis_frame(theta, n), bob[theta], charlie[theta])
    pi_p = frame_projector(basis_frame(theta_p, n), bob[theta_p], charlie[theta_p])
    lhs = operator_norm(pi @ pi_p)

    r_pos = [i for i in range(n) if (theta ^ theta_p) & bit(n, i)]
    if sum(1 for i in r_pos if theta & bit(n, i)) > len(r_pos) / 2:
        theta, theta_p = theta_p, theta
    t, _ = split_positions(theta, n)
    _, tbar_p = split_positions(theta_p, n)
    s_pos = [i for i in r_pos if not theta & bit(n, i)]
    b_meas, c_meas = bob[theta], charlie[theta_p]
    db, dc = b_meas.shape[1], c_meas.shape[1]
    eye_b, eye_c = np.eye(db), np.eye(dc)

    # S sits inside T and inside T-bar'; locate its bits within each outcome string
    s_in_t = [t.index(i) for i in s_pos]
    s_in_tbar = [tbar_p.index(i) for i in s_pos]
    h_s = _hadamard_on(n, s_pos)
    p_bar = sum(
        np.kron(np.kron(_s_projector(n, s_pos, restrict(y, s_in_t, len(t))), b_meas[y]), eye_c)
        for y in range(1 << len(t))
    )
    q_bar = sum(
        np.kron(
            np.kron(h_s @ _s_projector(n, s_pos, restrict(z, s_in_tbar, len(tbar_p))) @ h_s, eye_b),
            c_meas[z],
        )
        for z in range(1 << len(tbar_p))
    )
    pqp = operator_norm(p_bar @ q_bar @ p_bar)
    return BasisOverlap(lhs, 2.0 ** (-len(r_pos) / 4), pqp, 2.0 ** (-len(s_pos)), len(r_pos), len(s_pos))
