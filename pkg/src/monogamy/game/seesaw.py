"""See-saw lower bounds for the extended monogamy games.

Each round replaces the state by the top eigenvector of the averaged game
operator (exactly optimal for fixed measurements), then improves Bob's and
Charlie's POVMs question by question with a completeness-preserving
multiplicative update. A POVM update is kept only when it does not lower the
objective, so the value is non-decreasing along a restart. The returned value
is always re-evaluated exactly on the validated final strategy.

For the coset game the state on A is unconstrained. That is no loss: twirling
A with a shared random Pauli ``X^a Z^b`` (recorded classically in B and C so
the players can shift their answers) makes A maximally mixed without changing
the value, so any value reached here is attainable in the channel form with
larger registers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..seeding import substream, thread_count
from .projectors import QuestionFrame, frame, frame_projector, winning_probability_enlg
from .strategy import (
    ENLGStrategy,
    Game,
    outcome_counts,
    questions,
    random_povm,
    uniform_povm,
)

MONOTONE_SLACK = 1e-10
_EIG_FLOOR = 1e-12


@dataclass
class SeesawResult:
    value: float
    strategy: ENLGStrategy
    restart_values: list[float]
    histories: list[list[float]] = field(repr=False)
    best_restart: int = 0

    @property
    def monotone(self) -> bool:
        return all(
            b >= a - MONOTONE_SLACK for h in self.histories for a, b in zip(h, h[1:])
        )


def _local_value(povm: np.ndarray, w: np.ndarray) -> float:
    return float(np.real(np.einsum("bij,bji->", povm, w)))


def _multiplicative_step(povm: np.ndarray, w: np.ndarray) -> np.ndarray | None:
    """``G^(-1/2) W_b B_b W_b G^(-1/2)`` with ``G = sum_b W_b B_b W_b``.

    The part of the space outside the support of G is shared evenly between
    outcomes so the result sums to the identity.
    """
    x = w @ povm @ w
    g = x.sum(axis=0)
    ev, vec = np.linalg.eigh((g + g.conj().T) / 2)
    if ev[-1] <= _EIG_FLOOR:
        return None
    keep = ev > _EIG_FLOOR * ev[-1]
    inv = (vec[:, keep] / np.sqrt(ev[keep])) @ vec[:, keep].conj().T
    cand = inv @ x @ inv
    d, m = povm.shape[1], povm.shape[0]
    cand = cand + (np.eye(d) - cand.sum(axis=0))[None] / m
    cand = (cand + cand.conj().transpose(0, 2, 1)) / 2
    ev_c, vec_c = np.linalg.eigh(cand)
    cand = np.einsum("bij,bj,bkj->bik", vec_c, np.clip(ev_c, 0.0, None), vec_c.conj())
    s = cand.sum(axis=0)
    ev_s, vec_s = np.linalg.eigh((s + s.conj().T) / 2)
    if ev_s[0] <= 0.5:
        return None
    inv_s = (vec_s / np.sqrt(ev_s)) @ vec_s.conj().T
    cand = inv_s @ cand @ inv_s
    return (cand + cand.conj().transpose(0, 2, 1)) / 2


def improve_povm(povm: np.ndarray, w: np.ndarray, inner: int = 3) -> np.ndarray:
    best = _local_value(povm, w)
    for _ in range(inner):
        cand = _multiplicative_step(povm, w)
        if cand is None:
            break
        val = _local_value(cand, w)
        if val < best:
            break
        povm, best = cand, val
    return povm


def _amplitudes(fr: QuestionFrame, psi: np.ndarray) -> np.ndarray:
    """``(<a_o| (x) Id) |psi>`` as (outcome, d_B, d_C) matrices."""
    return np.einsum("ao,abc->obc", fr.vectors.conj(), psi)


def _bob_weights(fr, mo, charlie) -> np.ndarray:
    t = np.einsum("obc,odc,oed->obe", mo, charlie[fr.charlie_label], mo.conj())
    w = np.zeros((fr.n_bob,) + t.shape[1:], dtype=complex)
    np.add.at(w, fr.bob_label, t)
    return w


def _charlie_weights(fr, mo, bob) -> np.ndarray:
    t = np.einsum("obc,ofb,ofe->oce", mo, bob[fr.bob_label], mo.conj())
    w = np.zeros((fr.n_charlie,) + t.shape[1:], dtype=complex)
    np.add.at(w, fr.charlie_label, t)
    return w


class _Run:
    def __init__(self, game: Game, n: int, d_b: int, d_c: int):
        self.game, self.n, self.d_b, self.d_c = game, n, d_b, d_c
        self.qs = questions(game, n)
        self.frames = [frame(game, q, n) for q in self.qs]
        self.mb, self.mc = outcome_counts(game, n)

    def averaged_operator(self, bob, charlie) -> np.ndarray:
        total = sum(frame_projector(fr, b, c) for fr, b, c in zip(self.frames, bob, charlie))
        return total / len(self.frames)

    def value(self, psi, bob, charlie) -> float:
        vals = [
            _local_value(b, _bob_weights(fr, _amplitudes(fr, psi), c))
            for fr, b, c in zip(self.frames, bob, charlie)
        ]
        return float(np.mean(vals))

    def initial(self, restart: int, rng: np.random.Generator):
        da = 1 << self.n
        if restart == 0:
            # one player always right, the other guessing: value 2^(-n/2)
            psi = np.zeros((da, self.d_b, self.d_c), dtype=complex)
            psi[0, 0, 0] = 1.0
            certain = np.zeros((self.mb, self.d_b, self.d_b), dtype=complex)
            certain[0] = np.eye(self.d_b)
            bob = [certain.copy() for _ in self.qs]
            charlie = [uniform_povm(self.mc, self.d_c) for _ in self.qs]
            return psi, bob, charlie
        z = rng.standard_normal((da, self.d_b, self.d_c)) + 1j * rng.standard_normal((da, self.d_b, self.d_c))
        psi = z / np.linalg.norm(z)
        bob = [random_povm(self.mb, self.d_b, rng) for _ in self.qs]
        charlie = [random_povm(self.mc, self.d_c, rng) for _ in self.qs]
        return psi, bob, charlie

    def optimize(self, restart: int, rng, iters: int, inner: int, tol: float):
        psi, bob, charlie = self.initial(restart, rng)
        shape = psi.shape
        history = [self.value(psi, bob, charlie)]
        for _ in range(iters):
            start = history[-1]
            ev, vec = np.linalg.eigh(self.averaged_operator(bob, charlie))
            if ev[-1] >= history[-1]:
                psi = vec[:, -1].reshape(shape)
                history.append(float(ev[-1]))
            else:
                history.append(history[-1])
            for i, fr in enumerate(self.frames):
                mo = _amplitudes(fr, psi)
                bob[i] = improve_povm(bob[i], _bob_weights(fr, mo, charlie[i]), inner)
            history.append(self.value(psi, bob, charlie))
            for i, fr in enumerate(self.frames):
                mo = _amplitudes(fr, psi)
                charlie[i] = improve_povm(charlie[i], _charlie_weights(fr, mo, bob[i]), inner)
            history.append(self.value(psi, bob, charlie))
            if history[-1] - start <= tol:
                break
        return psi, bob, charlie, history

    def to_strategy(self, psi, bob, charlie) -> ENLGStrategy:
        v = psi.reshape(-1)
        rho = np.outer(v, v.conj())
        s = ENLGStrategy(self.game, self.n, rho, self.d_b, self.d_c)
        for q, b, c in zip(self.qs, bob, charlie):
            s.bob[q], s.charlie[q] = b, c
        return s


def seesaw_optimize(
    game: Game,
    n: int,
    d_b: int = 2,
    d_c: int = 2,
    iters: int = 100,
    restarts: int = 4,
    seed: int = 0,
    inner: int = 3,
    tol: float = 1e-12,
) -> SeesawResult:
    """Best see-saw strategy over ``restarts`` starts (restart 0 is the guessing strategy)."""
    if n not in (2, 4):
        raise ValueError("see-saw supports n in {2, 4}")
    if not (1 <= d_b <= 4 and 1 <= d_c <= 4):
        raise ValueError("register dimensions limited to 1..4")
    if restarts < 1 or iters < 0:
        raise ValueError("need restarts >= 1 and iters >= 0")
    run = _Run(game, n, d_b, d_c)

    def one(r: int):
        psi, bob, charlie, hist = run.optimize(r, substream(seed, r), iters, inner, tol)
        strat = run.to_strategy(psi, bob, charlie)
        try:
            value = winning_probability_enlg(strat)
        except ValueError as exc:
            raise RuntimeError(f"see-saw restart {r} produced an infeasible strategy: {exc}") from exc
        return value, strat, hist

    workers = min(thread_count(), restarts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(restarts)))
    else:
        results = [one(r) for r in range(restarts)]
    values = [v for v, _, _ in results]
    best = int(np.argmax(values))
    return SeesawResult(values[best], results[best][1], values, [h for _, _, h in results], best)
