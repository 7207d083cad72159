"""Dense state vectors and operators for coset states and BB'84 states.

States are complex numpy vectors of length ``2**n`` and operators are
``2**n x 2**n`` arrays, using the bit convention of :mod:`monogamy.f2linalg`:
qubit 0 is the leftmost tensor factor and the most significant index bit.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .f2linalg import (
    Coset,
    Subspace,
    bit,
    combine,
    coset_representatives,
    dot,
    dual_basis,
    inverse,
    orthogonal_complement,
)

MAX_QUBITS = 12


class CosetLabel(NamedTuple):
    subspace: Subspace
    s: int
    s_prime: int


class BB84Label(NamedTuple):
    x: int
    theta: int
    n: int

    @property
    def standard_positions(self) -> list[int]:
        """Positions measured in the standard basis (theta_i = 0)."""
        return [i for i in range(self.n) if not self.theta & bit(self.n, i)]


def _guard(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense representation limited to {MAX_QUBITS} qubits, got {n}")


def coset_state(a: Subspace, s: int, s_prime: int) -> np.ndarray:
    """Amplitudes of ``X^s Z^s' |A>``: ``(-1)^(u.s') / sqrt|A|`` on ``|u + s>``."""
    n = a.n
    _guard(n)
    if s >> n or s_prime >> n:
        raise ValueError("coset label does not match the ambient dimension")
    psi = np.zeros(1 << n, dtype=complex)
    amp = 2.0 ** (-a.dim / 2)
    for u in a.elements():
        psi[u ^ s] = -amp if dot(u, s_prime) else amp
    return psi


def bb84_state(x: int, theta: int, n: int) -> np.ndarray:
    """Tensor product ``H^theta_1 |x_1> (x) ... (x) H^theta_n |x_n>``.

    Written out in closed form: amplitude ``(-1)^(x.y restricted to theta)
    2^(-|theta|/2)`` on every ``y`` that agrees with x off theta.
    """
    _guard(n)
    if x >> n or theta >> n:
        raise ValueError("label does not match n")
    psi = np.zeros(1 << n, dtype=complex)
    amp = 2.0 ** (-theta.bit_count() / 2)
    fixed = x & ~theta
    for y in range(1 << n):
        if y & ~theta == fixed:
            psi[y] = -amp if dot(x & theta, y) else amp
    return psi


def pauli_string(s: int, s_prime: int, n: int) -> np.ndarray:
    """The operator ``X^s Z^s'`` as a dense signed permutation matrix."""
    _guard(n)
    dim = 1 << n
    op = np.zeros((dim, dim), dtype=complex)
    for y in range(dim):
        op[y ^ s, y] = -1.0 if dot(s_prime, y) else 1.0
    return op


def hadamard_all(n: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    out = np.ones((1, 1))
    for _ in range(n):
        out = np.kron(out, h)
    return out.astype(complex)


def basis_change_unitary(rows: Sequence[int], n: int) -> np.ndarray:
    """Permutation ``U|x> = |sum_i x_i u_i>`` for the basis ``rows = (u_1..u_n)``."""
    _guard(n)
    inverse(rows, n)  # rejects singular bases
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        u[combine(x, rows), x] = 1.0
    return u


def coset_subspace_projector(c: Coset) -> np.ndarray:
    n = c.subspace.n
    _guard(n)
    diag = np.zeros(1 << n)
    diag[c.elements()] = 1.0
    return np.diag(diag).astype(complex)


def coset_labels(a: Subspace) -> list[tuple[int, int]]:
    """Outcome labels ``(s, s')`` over CS(A) x CS(A^perp), s-major."""
    perp = orthogonal_complement(a)
    return [(s, sp) for s in coset_representatives(a) for sp in coset_representatives(perp)]


def coset_basis(a: Subspace) -> np.ndarray:
    """Columns are the orthonormal coset states in :func:`coset_labels` order."""
    return np.stack([coset_state(a, s, sp) for s, sp in coset_labels(a)], axis=1)


def coset_measurement_family(a: Subspace) -> dict[tuple[int, int], np.ndarray]:
    """Rank-one projectors ``|A_{s,s'}><A_{s,s'}|`` keyed by ``(s, s')``."""
    out = {}
    for s, sp in coset_labels(a):
        v = coset_state(a, s, sp)
        out[(s, sp)] = np.outer(v, v.conj())
    return out


def translate_bb84_label(rows: Sequence[int], theta: int, x: int, n: int) -> CosetLabel:
    """Coset label ``(A, s, s')`` with ``|A_{s,s'}> = U_B |x>_theta``.

    ``A`` is spanned by the basis vectors where theta is 1, ``s`` collects the
    standard-basis bits on ``u_i`` and ``s'`` the Hadamard bits on the dual
    basis vectors ``u^i``.
    """
    dual = dual_basis(rows, n)
    a = Subspace.span([rows[i] for i in range(n) if theta & bit(n, i)], n)
    s = sp = 0
    for i in range(n):
        if not x & bit(n, i):
            continue
        if theta & bit(n, i):
            sp ^= dual[i]
        else:
            s ^= rows[i]
    return CosetLabel(a, s, sp)


def verify_translation(rows: Sequence[int], theta: int, x: int, n: int) -> float:
    """Residual ``|| |A_{s,s'}> - U_B |x>_theta ||`` (exact identity, no phase)."""
    label = translate_bb84_label(rows, theta, x, n)
    lhs = coset_state(*label)
    rhs = basis_change_unitary(rows, n) @ bb84_state(x, theta, n)
    return float(np.linalg.norm(lhs - rhs))
