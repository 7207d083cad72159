"""Strategy containers for the coset and basis monogamy games.

POVMs are stacked arrays of shape ``(outcomes, d, d)``. Question keys are
:class:`~monogamy.f2linalg.Subspace` objects for the coset game and integer
basis strings ``theta`` (weight n/2) for the basis game.

Outcome orderings:

* coset game, extended form: Bob's outcome ``i`` is the i-th sorted coset
  representative of A, Charlie's the i-th representative of A^perp;
* coset game, direct form: outcomes are raw vectors of F_2^n (index = vector);
* basis game: the bits of x on T = {i: theta_i = 0} (Bob) or on its
  complement (Charlie), read left to right as a binary number.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Hashable, Literal

import numpy as np

from ..f2linalg import (
    Subspace,
    enumerate_grassmannian,
    from_bitstring,
    to_bitstring,
)
from ..permcover import weighted_strings
from .ops import hermitian_residual

Game = Literal["coset", "basis"]
TOL = 1e-9
SCHEMA = 1


class InvalidStrategy(ValueError):
    pass


def questions(game: Game, n: int) -> list[Hashable]:
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if game == "coset":
        return enumerate_grassmannian(n, n // 2)
    if game == "basis":
        return weighted_strings(n)
    raise ValueError(f"unknown game {game!r}")


def outcome_counts(game: Game, n: int) -> tuple[int, int]:
    half = 1 << (n // 2)
    return half, half


def validate_povm(elems: np.ndarray, d: int, outcomes: int | None = None, name: str = "POVM") -> None:
    elems = np.asarray(elems)
    if elems.ndim != 3 or elems.shape[1:] != (d, d):
        raise InvalidStrategy(f"{name}: expected shape (m, {d}, {d}), got {elems.shape}")
    if outcomes is not None and elems.shape[0] != outcomes:
        raise InvalidStrategy(f"{name}: expected {outcomes} outcomes, got {elems.shape[0]}")
    for i, e in enumerate(elems):
        if hermitian_residual(e) > TOL:
            raise InvalidStrategy(f"{name}: element {i} is not Hermitian")
        if np.linalg.eigvalsh((e + e.conj().T) / 2)[0] < -TOL:
            raise InvalidStrategy(f"{name}: element {i} is not positive semidefinite")
    if np.max(np.abs(elems.sum(axis=0) - np.eye(d))) > TOL:
        raise InvalidStrategy(f"{name}: elements do not sum to the identity")


def is_projective(elems: np.ndarray, tol: float = TOL) -> bool:
    return all(np.max(np.abs(e @ e - e)) <= tol for e in elems)


def validate_density(rho: np.ndarray) -> None:
    if hermitian_residual(rho) > TOL:
        raise InvalidStrategy("state is not Hermitian")
    if abs(np.trace(rho) - 1) > TOL:
        raise InvalidStrategy(f"state has trace {np.trace(rho).real:.12f}")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -TOL:
        raise InvalidStrategy("state is not positive semidefinite")


@dataclass
class KrausChannel:
    """Channel from ``d_in`` dims to ``d_b * d_c`` dims (Bob's factor first)."""

    kraus: np.ndarray
    d_b: int
    d_c: int

    def __post_init__(self):
        self.kraus = np.asarray(self.kraus, dtype=complex)
        if self.kraus.ndim != 3 or self.kraus.shape[1] != self.d_b * self.d_c:
            raise InvalidStrategy(f"Kraus operators have shape {self.kraus.shape}")
        gram = np.einsum("kji,kjl->il", self.kraus.conj(), self.kraus)
        if np.max(np.abs(gram - np.eye(self.d_in))) > TOL:
            raise InvalidStrategy("channel is not trace preserving")

    @property
    def d_in(self) -> int:
        return self.kraus.shape[2]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("kij,jl,kml->im", self.kraus, x, self.kraus.conj())

    def apply_to_pure(self, psi: np.ndarray) -> np.ndarray:
        out = self.kraus @ psi
        return out.T @ out.conj()


def choi_state(channel: KrausChannel, unitary: np.ndarray | None = None) -> np.ndarray:
    """``(Id (x) Phi)((Id (x) U) |phi+><phi+|^(x)n (Id (x) U)^dagger)`` on A (x) B (x) C.

    The n EPR pairs pair qubit i of A with qubit i of the channel input, so
    the joint vector is ``2^(-n/2) sum_r |r>|r>``.
    """
    d = channel.d_in
    v = np.eye(d, dtype=complex) / np.sqrt(d)
    if unitary is not None:
        v = v @ unitary.T
    vecs = np.einsum("ar,kxr->kax", v, channel.kraus).reshape(channel.kraus.shape[0], -1)
    return vecs.T @ vecs.conj()


@dataclass
class CosetStrategy:
    """Direct-form coset game strategy: channel plus raw-outcome POVMs per subspace."""

    n: int
    channel: KrausChannel
    bob: dict[Subspace, np.ndarray]
    charlie: dict[Subspace, np.ndarray]

    def validate(self) -> None:
        if self.channel.d_in != 1 << self.n:
            raise InvalidStrategy("channel input does not match n qubits")
        for a in questions("coset", self.n):
            if a not in self.bob or a not in self.charlie:
                raise InvalidStrategy(f"missing POVM for subspace {a.key()}")
            validate_povm(self.bob[a], self.channel.d_b, 1 << self.n, f"Bob[{a.key()}]")
            validate_povm(self.charlie[a], self.channel.d_c, 1 << self.n, f"Charlie[{a.key()}]")


@dataclass
class ENLGStrategy:
    """Tripartite state on A (x) B (x) C plus question-indexed POVMs."""

    game: Game
    n: int
    rho: np.ndarray
    d_b: int
    d_c: int
    bob: dict[Hashable, np.ndarray] = field(default_factory=dict)
    charlie: dict[Hashable, np.ndarray] = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, int, int]:
        return 1 << self.n, self.d_b, self.d_c

    def validate(self, question_set=None) -> None:
        d = (1 << self.n) * self.d_b * self.d_c
        if self.rho.shape != (d, d):
            raise InvalidStrategy(f"state has shape {self.rho.shape}, want {(d, d)}")
        validate_density(self.rho)
        mb, mc = outcome_counts(self.game, self.n)
        for q in questions(self.game, self.n) if question_set is None else question_set:
            if q not in self.bob or q not in self.charlie:
                raise InvalidStrategy(f"missing POVM for question {question_key(self.game, q, self.n)}")
            validate_povm(self.bob[q], self.d_b, mb, "Bob")
            validate_povm(self.charlie[q], self.d_c, mc, "Charlie")

    def is_projective(self) -> bool:
        return all(is_projective(p) for p in self.bob.values()) and all(
            is_projective(p) for p in self.charlie.values()
        )

    def to_json(self) -> str:
        return strategy_to_json(self)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def question_key(game: Game, q, n: int) -> str:
    return q.key() if game == "coset" else to_bitstring(q, n)


def parse_question(game: Game, key: str, n: int):
    return Subspace.from_key(key, n) if game == "coset" else from_bitstring(key)


def _encode(arr: np.ndarray) -> list[list[float]]:
    flat = np.asarray(arr, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _decode(pairs, shape) -> np.ndarray:
    a = np.asarray(pairs, dtype=float)
    return (a[:, 0] + 1j * a[:, 1]).reshape(shape)


def strategy_to_json(s: ENLGStrategy) -> str:
    def povms(table):
        items = sorted((question_key(s.game, q, s.n), p) for q, p in table.items())
        return {k: {"outcomes": int(p.shape[0]), "data": _encode(p)} for k, p in items}

    doc = {
        "schema": SCHEMA,
        "game": s.game,
        "n": s.n,
        "dims": list(s.dims),
        "rho": _encode(s.rho),
        "bob": povms(s.bob),
        "charlie": povms(s.charlie),
    }
    return json.dumps(doc, separators=(",", ":"))


def strategy_from_json(text: str) -> ENLGStrategy:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise InvalidStrategy(f"unsupported strategy schema {doc.get('schema')!r}")
    game, n = doc["game"], int(doc["n"])
    da, db, dc = (int(x) for x in doc["dims"])
    if da != 1 << n:
        raise InvalidStrategy("register A dimension does not match n")
    d = da * db * dc

    def povms(table, dim):
        return {
            parse_question(game, k, n): _decode(v["data"], (int(v["outcomes"]), dim, dim))
            for k, v in table.items()
        }

    return ENLGStrategy(
        game, n, _decode(doc["rho"], (d, d)), db, dc, povms(doc["bob"], db), povms(doc["charlie"], dc)
    )


# random instances ------------------------------------------------------------


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_projective_povm(m: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Rank-one projectors of a Haar basis, each assigned to a random outcome."""
    u = random_unitary(d, rng)
    out = np.zeros((m, d, d), dtype=complex)
    for col, o in enumerate(rng.integers(0, m, size=d)):
        out[o] += np.outer(u[:, col], u[:, col].conj())
    return out


def normalize_povm(elems: np.ndarray) -> np.ndarray:
    """Rescale positive operators by ``S^(-1/2)`` so they sum to the identity."""
    s = elems.sum(axis=0)
    w, v = np.linalg.eigh((s + s.conj().T) / 2)
    inv = (v / np.sqrt(w)) @ v.conj().T
    out = inv @ elems @ inv
    return (out + out.conj().transpose(0, 2, 1)) / 2


def random_povm(m: int, d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((m, d, d)) + 1j * rng.standard_normal((m, d, d))
    return normalize_povm(g @ g.conj().transpose(0, 2, 1))


def random_psd(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    r = d if rank is None else rank
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    return g @ g.conj().T / r


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    p = random_psd(d, rng, rank)
    return p / np.trace(p).real


def random_kraus_channel(
    d_in: int, d_b: int, d_c: int, rng: np.random.Generator, rank: int | None = None
) -> KrausChannel:
    """Channel from a random Stinespring isometry with ``rank`` Kraus operators."""
    d_out = d_b * d_c
    r = int(rng.integers(1, d_in * d_out + 1)) if rank is None else rank
    r = max(r, -(-d_in // d_out))
    z = rng.standard_normal((r * d_out, d_in)) + 1j * rng.standard_normal((r * d_out, d_in))
    iso, _ = np.linalg.qr(z)
    return KrausChannel(iso.reshape(r, d_out, d_in), d_b, d_c)


def random_coset_strategy(
    n: int, d_b: int, d_c: int, rng: np.random.Generator, projective: bool = True
) -> CosetStrategy:
    draw = random_projective_povm if projective else random_povm
    channel = random_kraus_channel(1 << n, d_b, d_c, rng)
    bob, charlie = {}, {}
    for a in questions("coset", n):
        bob[a] = draw(1 << n, d_b, rng)
        charlie[a] = draw(1 << n, d_c, rng)
    return CosetStrategy(n, channel, bob, charlie)


def random_enlg_strategy(
    game: Game, n: int, d_b: int, d_c: int, rng: np.random.Generator,
    projective: bool = True, rho: np.ndarray | None = None,
) -> ENLGStrategy:
    draw = random_projective_povm if projective else random_povm
    mb, mc = outcome_counts(game, n)
    if rho is None:
        rho = random_density((1 << n) * d_b * d_c, rng, rank=1)
    s = ENLGStrategy(game, n, rho, d_b, d_c)
    for q in questions(game, n):
        s.bob[q] = draw(mb, d_b, rng)
        s.charlie[q] = draw(mc, d_c, rng)
    return s


def uniform_povm(m: int, d: int) -> np.ndarray:
    return np.repeat(np.eye(d, dtype=complex)[None] / m, m, axis=0)
