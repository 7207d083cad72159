import numpy as np
import pytest

from monogamy.bounds import binomial_sum_bound
from monogamy.game.ops import operator_norm
from monogamy.game.pipeline import ChainViolation, norm_bound_pipeline
from monogamy.game.projectors import expected_projector, winning_probability_enlg
from monogamy.game.seesaw import improve_povm, seesaw_optimize
from monogamy.game.strategy import (
    InvalidStrategy,
    questions,
    random_enlg_strategy,
    random_povm,
    random_psd,
    validate_povm,
)
from monogamy.seeding import THREADS_ENV


def rng(seed):
    return np.random.default_rng(seed)


def top_state(s):
    _, vec = np.linalg.eigh(expected_projector(s))
    s.rho = np.outer(vec[:, -1], vec[:, -1].conj())
    return s


# -- see-saw ---------------------------------------------------------------------


@pytest.mark.parametrize("game", ["basis", "coset"])
def test_seesaw_n2(game):
    res = seesaw_optimize(game, 2, iters=60, restarts=3, seed=1)
    assert 0.5 - 1e-9 <= res.value <= 1 + 1e-9
    assert res.monotone
    res.strategy.validate()
    assert winning_probability_enlg(res.strategy) == pytest.approx(res.value, abs=1e-12)
    assert res.restart_values[0] == pytest.approx(0.5, abs=1e-12)  # guessing start
    assert res.value == max(res.restart_values)


def test_seesaw_basis_n2_reaches_binomial_bound():
    # at n = 2 the chain is tight: cos^2(pi/8)
    res = seesaw_optimize("basis", 2, iters=100, restarts=4, seed=0)
    assert res.value == pytest.approx(binomial_sum_bound(2), abs=1e-6)
    assert operator_norm(expected_projector(res.strategy)) <= binomial_sum_bound(2) + 1e-9


def test_seesaw_deterministic_and_thread_independent(monkeypatch):
    a = seesaw_optimize("basis", 2, iters=20, restarts=3, seed=5)
    monkeypatch.setenv(THREADS_ENV, "3")
    b = seesaw_optimize("basis", 2, iters=20, restarts=3, seed=5)
    assert a.value == b.value and a.strategy.digest() == b.strategy.digest()
    assert a.restart_values == b.restart_values


def test_seesaw_guards():
    with pytest.raises(ValueError):
        seesaw_optimize("basis", 6)
    with pytest.raises(ValueError):
        seesaw_optimize("basis", 2, d_b=5)
    with pytest.raises(ValueError):
        seesaw_optimize("basis", 2, restarts=0)


def test_improve_povm_feasible_and_not_worse():
    r = rng(3)
    for _ in range(20):
        povm = random_povm(4, 3, r)
        w = np.stack([random_psd(3, r) for _ in range(4)])
        new = improve_povm(povm, w, inner=5)
        validate_povm(new, 3, 4)
        before = np.real(np.einsum("bij,bji->", povm, w))
        after = np.real(np.einsum("bij,bji->", new, w))
        assert after >= before - 1e-12


def test_seesaw_iteration_zero_is_floor():
    res = seesaw_optimize("coset", 2, iters=0, restarts=1, seed=0)
    assert res.value == pytest.approx(0.5, abs=1e-12)


# -- norm chain --------------------------------------------------------------------


def test_pipeline_basis_n2():
    for i in range(5):
        s = top_state(random_enlg_strategy("basis", 2, 2, 2, rng(i)))
        rep = norm_bound_pipeline(s)
        assert rep.binomial_bound == pytest.approx(0.85355339, abs=1e-8)
        assert rep.value == pytest.approx(rep.norm_expected, abs=1e-9)
        assert rep.chain == sorted(rep.chain) or all(
            x <= y + 1e-9 for x, y in zip(rep.chain, rep.chain[1:])
        )


def test_pipeline_basis_n4_top():
    s = top_state(random_enlg_strategy("basis", 4, 2, 2, rng(1)))
    rep = norm_bound_pipeline(s)
    assert rep.chain[-1] == pytest.approx(0.7214045, abs=1e-7)
    assert rep.norm_expected <= rep.permutation_sum_bound + 1e-9 and rep.max_pair_excess <= 1e-9


def test_pipeline_coset_exhaustive_n2():
    s = top_state(random_enlg_strategy("coset", 2, 2, 2, rng(2)))
    rep = norm_bound_pipeline(s)
    assert rep.bases == 6 and not rep.sampled and rep.basis_norm_average is not None
    assert all(x <= y + 1e-9 for x, y in zip(rep.chain, rep.chain[1:]))


def test_pipeline_coset_sampled_flagged():
    s = top_state(random_enlg_strategy("coset", 4, 1, 2, rng(3)))
    rep = norm_bound_pipeline(s, num_bases=30, seed=4)
    assert rep.sampled and rep.bases == 30 and rep.notes
    assert rep.norm_expected <= rep.binomial_bound + 1e-9


def test_pipeline_rejects_non_projective():
    s = random_enlg_strategy("basis", 2, 2, 2, rng(4), projective=False)
    with pytest.raises(InvalidStrategy):
        norm_bound_pipeline(s)


def test_pipeline_rejects_identity_povms():
    s = random_enlg_strategy("basis", 2, 2, 2, rng(5))
    for q in questions("basis", 2):
        s.bob[q] = np.stack([np.eye(2)] * 2).astype(complex)
        s.charlie[q] = np.stack([np.eye(2)] * 2).astype(complex)
    with pytest.raises(InvalidStrategy):
        norm_bound_pipeline(s)


def test_chain_violation_is_runtime_error():
    assert issubclass(ChainViolation, RuntimeError)
