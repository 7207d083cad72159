"""The coset-monogamy game in its direct (channel) form and its extended form."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..f2linalg import Coset, Subspace, coset_representatives, intersection_dim, orthogonal_complement
from ..qstates import coset_state, coset_subspace_projector
from .ops import operator_norm
from .projectors import winning_probability_enlg
from .strategy import CosetStrategy, ENLGStrategy, InvalidStrategy, choi_state, questions

MAX_DIRECT_N = 4


def bin_by_coset(elems: np.ndarray, a: Subspace) -> np.ndarray:
    """Coarse-grain raw F_2^n outcomes into cosets of ``a`` (sorted minimal reps)."""
    reps = coset_representatives(a)
    index = {r: i for i, r in enumerate(reps)}
    out = np.zeros((len(reps),) + elems.shape[1:], dtype=complex)
    for v in range(elems.shape[0]):
        out[index[a.reduce(v)]] += elems[v]
    return out


def winning_probability_direct_coset(strategy: CosetStrategy) -> float:
    """Average over A and uniform s, s' in F_2^n of the chance both answers land in the right cosets.

    Bob wins on any answer in A + s and Charlie on any answer in A^perp + s'.
    """
    n = strategy.n
    if n > MAX_DIRECT_N:
        raise ValueError(f"exhaustive direct evaluation limited to n <= {MAX_DIRECT_N}")
    strategy.validate()
    ch = strategy.channel
    total = 0.0
    subspaces = questions("coset", n)
    for a in subspaces:
        perp = orthogonal_complement(a)
        bob, charlie = strategy.bob[a], strategy.charlie[a]
        acc = 0.0
        for s in range(1 << n):
            b_win = sum(bob[v] for v in Coset.of(a, s).elements())
            for sp in range(1 << n):
                c_win = sum(charlie[w] for w in Coset.of(perp, sp).elements())
                sigma = ch.apply_to_pure(coset_state(a, s, sp))
                acc += np.real(np.trace(np.kron(b_win, c_win) @ sigma))
        total += acc / (1 << (2 * n))
    return float(total / len(subspaces))


def extended_game_strategy(strategy: CosetStrategy) -> ENLGStrategy:
    """Extended-game image: EPR halves through the channel, POVMs binned by coset."""
    ch = strategy.channel
    out = ENLGStrategy("coset", strategy.n, choi_state(ch), ch.d_b, ch.d_c)
    for a in questions("coset", strategy.n):
        out.bob[a] = bin_by_coset(strategy.bob[a], a)
        out.charlie[a] = bin_by_coset(strategy.charlie[a], orthogonal_complement(a))
    return out


class ValueComparison(NamedTuple):
    direct: float
    extended: float
    residual: float


def verify_lemma1(strategy: CosetStrategy) -> ValueComparison:
    lhs = winning_probability_direct_coset(strategy)
    rhs = winning_probability_enlg(extended_game_strategy(strategy))
    return ValueComparison(lhs, rhs, abs(lhs - rhs))


class OverlapResult(NamedTuple):
    lhs: float
    rhs: float
    projector_residual: float


def coset_sum_projector(a: Subspace, s_prime: int) -> np.ndarray:
    """``sum_{s in CS(A)} |A_{s,s'}><A_{s,s'}|``."""
    vecs = np.stack([coset_state(a, s, s_prime) for s in coset_representatives(a)], axis=1)
    return vecs @ vecs.conj().T


def verify_lemma3(a: Subspace, b: Subspace, s_prime: int, t: int) -> OverlapResult:
    """Overlap norm of the two coset-sum projectors against ``sqrt(2^(dim(A cap B) - n/2))``.

    Also reports how far ``sum_{t'} |B_{t,t'}><B_{t,t'}|`` is from the
    diagonal projector onto the coset B + t.
    """
    if a.n != b.n:
        raise ValueError("subspaces live in different ambient spaces")
    if a.dim != b.dim or 2 * a.dim != a.n:
        raise InvalidStrategy("both subspaces must have dimension n/2")
    p = coset_sum_projector(a, s_prime)
    q = np.zeros_like(p)
    for tp in coset_representatives(orthogonal_complement(b)):
        v = coset_state(b, t, tp)
        q += np.outer(v, v.conj())
    resid = float(np.max(np.abs(q - coset_subspace_projector(Coset.of(b, t)))))
    lhs = operator_norm(p @ q)
    rhs = float(np.sqrt(2.0 ** (intersection_dim(a, b) - a.n / 2)))
    return OverlapResult(lhs, rhs, resid)


class CosetOverlapSweep(NamedTuple):
    checks: int
    max_excess: float
    max_projector_residual: float
    saturated_equal: bool
    saturated_disjoint: bool
    worst: tuple[str, str, int, int] | None


def coset_overlap_sweep(n: int, tol: float = 1e-9) -> CosetOverlapSweep:
    """Overlap inequality over every subspace pair and every (s', t) representative pair.

    Saturation is recorded for A = B (norm 1) and for pairs with trivial
    intersection (norm 2^(-n/4)).
    """
    subspaces = questions("coset", n)
    sums = {}
    for a in subspaces:
        for sp in coset_representatives(orthogonal_complement(a)):
            sums[(a, sp)] = coset_sum_projector(a, sp)
    diag = {}
    resid = 0.0
    for b in subspaces:
        for t in coset_representatives(b):
            q = np.zeros((1 << n, 1 << n), dtype=complex)
            for tp in coset_representatives(orthogonal_complement(b)):
                v = coset_state(b, t, tp)
                q += np.outer(v, v.conj())
            mask = np.zeros(1 << n)
            mask[Coset.of(b, t).elements()] = 1.0
            resid = max(resid, float(np.max(np.abs(q - np.diag(mask)))))
            diag[(b, t)] = mask
    checks, excess, worst = 0, -np.inf, None
    sat_eq = sat_dis = False
    for a in subspaces:
        for b in subspaces:
            dim = intersection_dim(a, b)
            rhs = float(np.sqrt(2.0 ** (dim - n / 2)))
            for sp in coset_representatives(orthogonal_complement(a)):
                p = sums[(a, sp)]
                for t in coset_representatives(b):
                    lhs = operator_norm(p * diag[(b, t)][None, :])
                    checks += 1
                    if lhs - rhs > excess:
                        excess, worst = lhs - rhs, (a.key(), b.key(), sp, t)
                    if abs(lhs - rhs) <= tol:
                        sat_eq |= a == b
                        sat_dis |= dim == 0
    return CosetOverlapSweep(checks, float(excess), resid, sat_eq, sat_dis, worst)
