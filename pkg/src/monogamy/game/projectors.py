"""Game operators and winning probabilities in the extended (referee) form.

Every question fixes an orthonormal measurement of Alice's register together
with the answer each outcome demands from Bob and Charlie. The game operator
for that question is ``sum_o |a_o><a_o| (x) B_{b(o)} (x) C_{c(o)}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

from ..f2linalg import Subspace, as_rng, bit, coset_representatives, orthogonal_complement
from ..qstates import bb84_state, coset_basis
from .strategy import ENLGStrategy, Game, InvalidStrategy, questions

EVAL_TOL = 1e-9


@dataclass(frozen=True)
class QuestionFrame:
    vectors: np.ndarray  # (d_A, outcomes), columns are Alice's outcome states
    bob_label: np.ndarray
    charlie_label: np.ndarray
    n_bob: int
    n_charlie: int


def restrict(x: int, positions: Sequence[int], n: int) -> int:
    """Bits of ``x`` at ``positions`` packed left to right."""
    out = 0
    for p in positions:
        out = (out << 1) | ((x >> (n - 1 - p)) & 1)
    return out


def split_positions(theta: int, n: int) -> tuple[list[int], list[int]]:
    """``(T, T-bar)``: standard-basis positions and Hadamard positions."""
    t = [i for i in range(n) if not theta & bit(n, i)]
    tbar = [i for i in range(n) if theta & bit(n, i)]
    return t, tbar


@lru_cache(maxsize=4096)
def coset_frame(a: Subspace) -> QuestionFrame:
    reps = coset_representatives(a)
    reps_perp = coset_representatives(orthogonal_complement(a))
    mb, mc = len(reps), len(reps_perp)
    idx = np.arange(mb * mc)
    v = coset_basis(a)
    v.setflags(write=False)
    return QuestionFrame(v, idx // mc, idx % mc, mb, mc)


@lru_cache(maxsize=4096)
def basis_frame(theta: int, n: int) -> QuestionFrame:
    t, tbar = split_positions(theta, n)
    xs = range(1 << n)
    v = np.stack([bb84_state(x, theta, n) for x in xs], axis=1)
    v.setflags(write=False)
    bob = np.array([restrict(x, t, n) for x in xs])
    charlie = np.array([restrict(x, tbar, n) for x in xs])
    return QuestionFrame(v, bob, charlie, 1 << len(t), 1 << len(tbar))


def frame(game: Game, q: Hashable, n: int) -> QuestionFrame:
    return coset_frame(q) if game == "coset" else basis_frame(q, n)


def frame_projector(fr: QuestionFrame, bob: np.ndarray, charlie: np.ndarray) -> np.ndarray:
    if bob.shape[0] != fr.n_bob or charlie.shape[0] != fr.n_charlie:
        raise InvalidStrategy(
            f"POVMs have {bob.shape[0]}/{charlie.shape[0]} outcomes, "
            f"question needs {fr.n_bob}/{fr.n_charlie}"
        )
    db, dc = bob.shape[1], charlie.shape[1]
    k = np.einsum("oij,okl->oikjl", bob[fr.bob_label], charlie[fr.charlie_label])
    k = k.reshape(len(fr.bob_label), db * dc, db * dc)
    v = fr.vectors
    pi = np.einsum("ao,po,oxy->axpy", v, v.conj(), k)
    d = v.shape[0] * db * dc
    return pi.reshape(d, d)


def game_projector_coset(a: Subspace, bob: np.ndarray, charlie: np.ndarray) -> np.ndarray:
    """``sum_{s,s'} |A_{s,s'}><A_{s,s'}| (x) B^A_s (x) C^A_{s'}``."""
    return frame_projector(coset_frame(a), np.asarray(bob), np.asarray(charlie))


def game_projector_basis(theta: int, n: int, bob: np.ndarray, charlie: np.ndarray) -> np.ndarray:
    """``sum_x |x><x|_theta (x) B^theta_{x_T} (x) C^theta_{x_Tbar}``."""
    if bin(theta).count("1") != n // 2 or theta >> n:
        raise ValueError("theta must be an n-bit string of weight n/2")
    return frame_projector(basis_frame(theta, n), np.asarray(bob), np.asarray(charlie))


def strategy_projector(s: ENLGStrategy, q: Hashable) -> np.ndarray:
    if q not in s.bob or q not in s.charlie:
        raise InvalidStrategy("strategy has no POVM for a requested question")
    return frame_projector(frame(s.game, q, s.n), s.bob[q], s.charlie[q])


def expected_projector(s: ENLGStrategy, question_set=None) -> np.ndarray:
    qs = questions(s.game, s.n) if question_set is None else list(question_set)
    total = None
    for q in qs:
        p = strategy_projector(s, q)
        total = p if total is None else total + p
    return total / len(qs)


def _score(p: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.sum(p * rho.T)))


def winning_probability_enlg(s: ENLGStrategy, validate: bool = True) -> float:
    """Exact uniform average of ``Tr(Pi^q rho)`` over all questions."""
    if validate:
        s.validate()
    qs = questions(s.game, s.n)
    value = float(np.mean([_score(strategy_projector(s, q), s.rho) for q in qs]))
    if not -EVAL_TOL <= value <= 1 + EVAL_TOL:
        raise InvalidStrategy(f"winning probability {value} outside [0, 1]")
    return value


def estimate_winning_probability_enlg(s: ENLGStrategy, samples: int, seed=None) -> tuple[float, float]:
    """Monte-Carlo estimate over uniformly sampled questions: ``(mean, stderr)``."""
    rng = as_rng(seed)
    pool = questions(s.game, s.n)
    picks = [pool[int(i)] for i in rng.integers(0, len(pool), size=samples)]
    s.validate(question_set=set(picks))
    vals = np.array([_score(strategy_projector(s, q), s.rho) for q in picks])
    err = float(vals.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("nan")
    return float(vals.mean()), err
