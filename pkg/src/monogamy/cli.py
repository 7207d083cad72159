"""Command-line driver: ``monogamy verify|bounds|optimize|translate``.

Exit codes: 0 every check passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from math import comb

import numpy as np

from . import __version__
from .bounds import bound_table, table_csv, table_json, verify_lemma6
from .bounds import analytic_bound, binomial_sum_bound, trivial_floor
from .f2linalg import from_bitstring, random_invertible, to_bitstring
from .game.basis import verify_basis_overlap
from .game.coset import coset_overlap_sweep, verify_lemma1
from .game.ops import operator_norm, sum_bound_rhs
from .game.pipeline import ChainViolation, norm_bound_pipeline
from .game.projectors import expected_projector
from .game.reduction import basis_averaged_value
from .game.seesaw import seesaw_optimize
from .game.strategy import (
    random_coset_strategy,
    random_enlg_strategy,
    random_psd,
    strategy_to_json,
)
from .game.coset import winning_probability_direct_coset
from .permcover import orthogonal_permutation_family, verify_family, weighted_strings
from .qstates import translate_bb84_label, verify_translation
from .report import RunReport, dumps
from .seeding import check_seed, substream

TOL = 1e-9
SUITES = ("lemma1", "lemma3", "lemma4", "lemma6", "claim8", "sumbound", "overlap", "reduction", "pipeline")
DEFAULT_N = {
    "lemma1": 2, "lemma3": 4, "lemma4": 6, "lemma6": 64, "claim8": 4,
    "sumbound": 4, "overlap": 4, "reduction": 2, "pipeline": 2,
}
DEFAULT_TRIALS = {"lemma1": 20, "claim8": 100, "sumbound": 50, "overlap": 50, "reduction": 20, "pipeline": 10}


class UsageError(Exception):
    pass


def _even(n: int, lo: int, hi: int, what: str) -> None:
    if n % 2 or not lo <= n <= hi:
        raise UsageError(f"{what} needs even n in [{lo}, {hi}], got {n}")


# -- verify suites -----------------------------------------------------------


def suite_lemma1(rep: RunReport, n: int, trials: int, seed: int, d_b: int, d_c: int) -> None:
    if n != 2:
        raise UsageError("lemma1 runs at n = 2")
    worst = 0.0
    values = []
    for i in range(trials):
        strat = random_coset_strategy(n, d_b, d_c, substream(seed, i), projective=i % 2 == 0)
        res = verify_lemma1(strat)
        worst = max(worst, res.residual)
        values.append([res.direct, res.extended])
    rep.add("direct_minus_extended", worst, TOL, worst <= TOL, trials)
    rep.results["values"] = values


def suite_lemma3(rep: RunReport, n: int, **_) -> None:
    _even(n, 2, 4, "lemma3")
    sw = coset_overlap_sweep(n, TOL)
    rep.add("overlap_excess", sw.max_excess, TOL, sw.max_excess <= TOL, sw.checks)
    rep.add("coset_sum_is_coset_projector", sw.max_projector_residual, TOL, sw.max_projector_residual <= TOL)
    rep.add("saturated_equal_subspaces", float(sw.saturated_equal), 0.0, sw.saturated_equal)
    rep.add("saturated_trivial_intersection", float(sw.saturated_disjoint), 0.0, sw.saturated_disjoint)
    rep.results["worst"] = list(sw.worst) if sw.worst else None


def suite_lemma4(rep: RunReport, n: int, **_) -> None:
    _even(n, 2, 8, "lemma4")
    fam = orthogonal_permutation_family(n)
    res = verify_family(fam)
    rep.add("family_valid", 0.0 if res.passed else 1.0, 0.0, res.passed, len(fam), "" if res.passed else res.message)
    rep.add("family_size", len(fam) - comb(n, n // 2), 0.0, len(fam) == comb(n, n // 2))
    rep.results["class_sizes"] = {str(k): sum(1 for kk, _ in fam.perms if kk == k) for k in range(n // 2 + 1)}
    rep.results["orthogonal_pairs"] = res.checked_pairs


def suite_lemma6(rep: RunReport, n: int, **_) -> None:
    _even(n, 2, 64, "lemma6")
    res = verify_lemma6(n)
    rep.add("binomial_below_analytic", float(len(res.failures)), 0.0, res.passed, len(res.rows), "; ".join(res.failures))


def suite_claim8(rep: RunReport, n: int, trials: int, seed: int, **_) -> None:
    if not 1 <= n <= 4:
        raise UsageError("claim8 needs 1 <= n <= 4")
    thetas = weighted_strings(n) if n % 2 == 0 else list(range(1 << n))
    worst = 0.0
    for i in range(trials):
        rng = substream(seed, i)
        rows = random_invertible(n, rng)
        theta = thetas[int(rng.integers(len(thetas)))]
        x = int(rng.integers(1 << n))
        worst = max(worst, verify_translation(rows, theta, x, n))
    rep.add("translation_residual", worst, TOL, worst <= TOL, trials)
    ident = [1 << (n - 1 - i) for i in range(n)]
    worst_id, labels_ok = 0.0, True
    for theta, x in itertools.product(range(1 << n), range(1 << n)):
        worst_id = max(worst_id, verify_translation(ident, theta, x, n))
        lab = translate_bb84_label(ident, theta, x, n)
        labels_ok &= lab.s == x & ~theta and lab.s_prime == x & theta
    rep.add("identity_basis_residual", worst_id, 1e-12, worst_id <= 1e-12, 1 << (2 * n))
    rep.add("identity_basis_labels", 0.0 if labels_ok else 1.0, 0.0, labels_ok, 1 << (2 * n))


def suite_sumbound(rep: RunReport, n: int, trials: int, seed: int, **_) -> None:
    if n not in (2, 4):
        raise UsageError("sumbound runs at n in {2, 4}")
    fam = orthogonal_permutation_family(n).mappings
    big_n = len(fam)
    dim = 6
    excess = -np.inf
    for i in range(trials):
        rng = substream(seed, i)
        ps = [random_psd(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(big_n)]
        lhs = operator_norm(sum(ps))
        excess = max(excess, lhs - sum_bound_rhs(ps, fam))
    rep.add("sum_bound_excess", excess, TOL, excess <= TOL, trials)
    v = np.zeros(dim)
    v[0] = 1.0
    proj = np.outer(v, v)
    lhs, rhs = operator_norm(big_n * proj), sum_bound_rhs([proj] * big_n, fam)
    ok = abs(lhs - big_n) <= TOL and abs(rhs - big_n) <= TOL
    rep.add("equal_projector_case", max(abs(lhs - big_n), abs(rhs - big_n)), TOL, ok)


def suite_overlap(rep: RunReport, n: int, trials: int, seed: int, d_b: int, d_c: int) -> None:
    _even(n, 2, 4, "overlap")
    excess = pqp_excess = -np.inf
    count = 0
    for i in range(trials):
        s = random_enlg_strategy("basis", n, d_b, d_c, substream(seed, i))
        for th, th_p in itertools.combinations(weighted_strings(n), 2):
            r = verify_basis_overlap(th, th_p, s.bob, s.charlie, n)
            excess = max(excess, r.lhs - r.rhs)
            pqp_excess = max(pqp_excess, r.pqp - r.pqp_bound)
            count += 1
    rep.add("pair_norm_excess", excess, TOL, excess <= TOL, count)
    rep.add("pqp_excess", pqp_excess, TOL, pqp_excess <= TOL, count)


def suite_reduction(rep: RunReport, n: int, trials: int, seed: int, d_b: int, d_c: int) -> None:
    if n != 2:
        raise UsageError("reduction runs at n = 2")
    worst = 0.0
    for i in range(trials):
        strat = random_coset_strategy(n, d_b, d_c, substream(seed, i), projective=i % 2 == 0)
        q = winning_probability_direct_coset(strat)
        p = basis_averaged_value(strat)
        worst = max(worst, abs(p - q))
    rep.add("basis_average_minus_coset_value", worst, TOL, worst <= TOL, trials)


def suite_pipeline(rep: RunReport, n: int, trials: int, seed: int, d_b: int, d_c: int, game: str = "basis") -> None:
    if n not in (2, 4):
        raise UsageError("pipeline runs at n in {2, 4}")
    worst_norm = -np.inf
    failures = []
    for i in range(trials):
        s = random_enlg_strategy(game, n, d_b, d_c, substream(seed, i))
        # put the state on the top eigenvector so the first link is tight
        _, vec = np.linalg.eigh(expected_projector(s))
        s.rho = np.outer(vec[:, -1], vec[:, -1].conj())
        try:
            r = norm_bound_pipeline(s)
        except ChainViolation as exc:
            failures.append(f"trial {i}: {exc}")
            continue
        worst_norm = max(worst_norm, r.norm_expected - r.binomial_bound)
    rep.add("chain_violations", float(len(failures)), 0.0, not failures, trials, "; ".join(failures))
    rep.add("norm_minus_binomial", worst_norm, TOL, worst_norm <= TOL, trials)


SUITE_FUNCS = {
    "lemma1": suite_lemma1, "lemma3": suite_lemma3, "lemma4": suite_lemma4, "lemma6": suite_lemma6,
    "claim8": suite_claim8, "sumbound": suite_sumbound, "overlap": suite_overlap,
    "reduction": suite_reduction, "pipeline": suite_pipeline,
}


def run_verify(suite: str, n: int | None = None, trials: int | None = None, seed: int = 0,
               d_b: int = 2, d_c: int = 2, game: str = "basis") -> RunReport:
    if suite not in SUITE_FUNCS:
        raise UsageError(f"unknown suite {suite!r}")
    n = DEFAULT_N[suite] if n is None else n
    trials = DEFAULT_TRIALS.get(suite, 0) if trials is None else trials
    if trials < 0:
        raise UsageError("trials must be non-negative")
    _dims(d_b, d_c)
    params = {"suite": suite, "n": n, "trials": trials, "dim_b": d_b, "dim_c": d_c}
    kw = {"n": n, "trials": trials, "seed": seed, "d_b": d_b, "d_c": d_c}
    if suite == "pipeline":
        params["game"] = game
        kw["game"] = game
    rep = RunReport("verify", params, seed)
    SUITE_FUNCS[suite](rep, **kw)
    return rep


def _dims(d_b: int, d_c: int) -> None:
    if not (1 <= d_b <= 4 and 1 <= d_c <= 4):
        raise UsageError("register dimensions must lie in 1..4")


# -- optimize / translate ----------------------------------------------------


def run_optimize(game: str, n: int, d_b: int, d_c: int, iters: int, restarts: int, seed: int):
    if n not in (2, 4):
        raise UsageError("optimize runs at n in {2, 4}")
    _dims(d_b, d_c)
    if iters < 0 or restarts < 1:
        raise UsageError("need iters >= 0 and restarts >= 1")
    res = seesaw_optimize(game, n, d_b, d_c, iters=iters, restarts=restarts, seed=seed)
    floor, upper, binom = trivial_floor(n), analytic_bound(n), binomial_sum_bound(n)
    norm_e = operator_norm(expected_projector(res.strategy))
    rep = RunReport(
        "optimize",
        {"game": game, "n": n, "dim_b": d_b, "dim_c": d_c, "iters": iters, "restarts": restarts},
        seed,
    )
    rep.add("value_above_trivial_floor", floor - res.value, TOL, res.value >= floor - TOL)
    rep.bound_check("value_at_most_one", res.value, 1.0, TOL)
    rep.bound_check("value_at_most_norm", res.value, norm_e, TOL)
    rep.bound_check("norm_at_most_binomial", norm_e, binom, TOL)
    if upper <= 1.0:
        rep.bound_check("lower_at_most_upper", res.value, upper, 1e-6)
    rep.add("objective_monotone", 0.0 if res.monotone else 1.0, 0.0, res.monotone)
    rep.results = {
        "lower_bound": res.value,
        "upper_bound": upper,
        "binomial_bound": binom,
        "trivial_floor": floor,
        "norm_expected": norm_e,
        "restart_values": [float(v) for v in res.restart_values],
        "best_restart": res.best_restart,
        "strategy_digest": res.strategy.digest(),
    }
    return rep, res


def run_translate(basis: str, theta: str, x: str) -> RunReport:
    rows_s = [r.strip() for r in basis.split(",") if r.strip()]
    n = len(rows_s)
    if n == 0 or any(len(r) != n or set(r) - {"0", "1"} for r in rows_s):
        raise UsageError("--basis must list n comma-separated bit strings of length n")
    if len(theta) != n or len(x) != n or set(theta + x) - {"0", "1"}:
        raise UsageError("--theta and --x must be bit strings of length n")
    if n > 12:
        raise UsageError("translate supports n <= 12")
    rows = [from_bitstring(r) for r in rows_s]
    try:
        label = translate_bb84_label(rows, from_bitstring(theta), from_bitstring(x), n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    resid = verify_translation(rows, from_bitstring(theta), from_bitstring(x), n)
    rep = RunReport("translate", {"basis": rows_s, "theta": theta, "x": x}, None)
    rep.add("translation_residual", resid, TOL, resid <= TOL)
    rep.results = {
        "A": [to_bitstring(r, n) for r in label.subspace.basis],
        "s": to_bitstring(label.s, n),
        "s_prime": to_bitstring(label.s_prime, n),
    }
    return rep


# -- argument parsing --------------------------------------------------------


def _seed(text: str) -> int:
    try:
        return check_seed(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monogamy", description="Monogamy-game verification and bounds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--dim-b", type=int, default=2)
    v.add_argument("--dim-c", type=int, default=2)
    v.add_argument("--game", choices=("basis", "coset"), default="basis", help="game for the pipeline suite")
    v.add_argument("--out")
    v.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    b = sub.add_parser("bounds", help="print the bound table")
    b.add_argument("--n-max", type=int, required=True)
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--out")

    o = sub.add_parser("optimize", help="see-saw lower bound")
    o.add_argument("--game", choices=("basis", "coset"), required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--dim-b", type=int, default=2)
    o.add_argument("--dim-c", type=int, default=2)
    o.add_argument("--iters", type=int, default=100)
    o.add_argument("--restarts", type=int, default=4)
    o.add_argument("--seed", type=_seed, default=0)
    o.add_argument("--out")
    o.add_argument("--strategy-out", help="write the best strategy as JSON")
    o.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    t = sub.add_parser("translate", help="coset label of U_B |x>_theta")
    t.add_argument("--basis", required=True, help="rows u_1..u_n, e.g. 11,01")
    t.add_argument("--theta", required=True)
    t.add_argument("--x", required=True)
    t.add_argument("--out")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(rep: RunReport, args, started: float) -> int:
    ms = (time.perf_counter() - started) * 1000.0
    if getattr(args, "timing", False):
        rep.results["wall_ms"] = round(ms, 3)
    _emit(rep.to_json(), args.out)
    print(f"{rep.command}: {'pass' if rep.passed else 'FAIL'} ({ms:.0f} ms)", file=sys.stderr)
    return 0 if rep.passed else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        if args.command == "verify":
            rep = run_verify(args.suite, args.n, args.trials, args.seed, args.dim_b, args.dim_c, args.game)
            return _finish(rep, args, started)
        if args.command == "bounds":
            _even(args.n_max, 2, 64, "bounds")
            rows = bound_table(args.n_max)
            _emit(table_csv(rows) if args.format == "csv" else table_json(rows), args.out)
            return 0
        if args.command == "optimize":
            rep, res = run_optimize(args.game, args.n, args.dim_b, args.dim_c, args.iters, args.restarts, args.seed)
            if args.strategy_out:
                with open(args.strategy_out, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(strategy_to_json(res.strategy))
            return _finish(rep, args, started)
        rep = run_translate(args.basis, args.theta, args.x)
        return _finish(rep, args, started)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"monogamy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
