"""Linear algebra over F_2 with vectors packed into Python ints.

Bit convention: position 0 (the leftmost bit, first tensor factor) is the most
significant bit of an ``n``-bit integer, so the integer value of a vector is
also its computational-basis index ``sum(x_i * 2**(n-1-i))``.

Matrices are sequences of row vectors. A row-reduced echelon form is stored
with rows sorted by decreasing leading bit, i.e. leftmost pivot first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ENUM_BITS = 24
MAX_GRASSMANNIAN_BITS = 8


def bit(n: int, i: int) -> int:
    """Mask of position ``i`` (0-based, leftmost first) in an ``n``-bit vector."""
    return 1 << (n - 1 - i)


def to_bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


def from_bits(bits: Iterable[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (int(b) & 1)
    return v


def to_bitstring(v: int, n: int) -> str:
    return format(v, f"0{n}b") if n else ""


def from_bitstring(s: str) -> int:
    s = s.strip()
    if s and set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {s!r}")
    return int(s, 2) if s else 0


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


def weight(v: int) -> int:
    return v.bit_count()


def pack_rows(matrix) -> tuple[list[int], int]:
    """Convert a 0/1 array-like of shape (m, n) into (rows, n)."""
    arr = np.asarray(matrix, dtype=np.int64)
    if arr.size == 0:
        return [], (arr.shape[1] if arr.ndim == 2 else 0)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [from_bits(r) for r in arr], arr.shape[1]


def unpack_rows(rows: Sequence[int], n: int) -> np.ndarray:
    out = np.zeros((len(rows), n), dtype=np.uint8)
    for i, r in enumerate(rows):
        out[i] = to_bits(r, n)
    return out


def rref(rows: Iterable[int]) -> list[int]:
    """Reduced row echelon form of a matrix given as packed rows.

    Zero rows are dropped, so the result is a basis of the row space.
    """
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    for i, b in enumerate(basis):
        lead = 1 << (b.bit_length() - 1)
        for j in range(len(basis)):
            if j != i and basis[j] & lead:
                basis[j] ^= b
    return basis


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def pivot_mask(basis: Iterable[int]) -> int:
    m = 0
    for r in basis:
        m |= 1 << (r.bit_length() - 1)
    return m


def span_elements(basis: Sequence[int]) -> list[int]:
    """All 2**len(basis) linear combinations, in Gray-code-free binary order."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return out


def transpose(rows: Sequence[int], n_cols: int) -> list[int]:
    m = len(rows)
    out = []
    for j in range(n_cols):
        col = 0
        for i, r in enumerate(rows):
            if (r >> (n_cols - 1 - j)) & 1:
                col |= 1 << (m - 1 - i)
        out.append(col)
    return out


def inverse(rows: Sequence[int], n: int) -> list[int]:
    """Inverse of a square matrix over F_2; raises ValueError if singular."""
    if len(rows) != n:
        raise ValueError("matrix is not square")
    work = [(r << n) | bit(n, i) for i, r in enumerate(rows)]
    for col in range(n):
        mask = bit(n, col) << n
        piv = next((i for i in range(col, n) if work[i] & mask), None)
        if piv is None:
            raise ValueError("matrix is singular over F_2")
        work[col], work[piv] = work[piv], work[col]
        for i in range(n):
            if i != col and work[i] & mask:
                work[i] ^= work[col]
    low = (1 << n) - 1
    return [w & low for w in work]


def matmul(a: Sequence[int], b: Sequence[int], n_cols_b: int) -> list[int]:
    """Product of packed matrices; ``a`` has ``len(b)`` columns."""
    k = len(b)
    out = []
    for r in a:
        acc = 0
        for i in range(k):
            if (r >> (k - 1 - i)) & 1:
                acc ^= b[i]
        out.append(acc)
    return out


def combine(coeffs: int, rows: Sequence[int]) -> int:
    """``sum_i coeffs_i * rows[i]`` where coeff bit order matches row order."""
    n = len(rows)
    acc = 0
    for i, r in enumerate(rows):
        if (coeffs >> (n - 1 - i)) & 1:
            acc ^= r
    return acc


def dual_basis(rows: Sequence[int], n: int) -> list[int]:
    """Rows ``u^i`` with ``u^i . u_j = delta_ij`` for an invertible basis ``u_j``."""
    return transpose(inverse(rows, n), n)


@dataclass(frozen=True, order=True)
class Subspace:
    """A linear subspace of F_2^n stored by its canonical RREF basis."""

    n: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[int], n: int) -> "Subspace":
        vectors = list(vectors)
        if any(v < 0 or v >> n for v in vectors):
            raise ValueError(f"vector does not fit in {n} bits")
        return cls(n, tuple(rref(vectors)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(bit(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def reduce(self, v: int) -> int:
        """Lexicographically smallest element of the coset ``v + self``."""
        for b in self.basis:
            v = min(v, v ^ b)
        return v

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def elements(self) -> list[int]:
        return span_elements(self.basis)

    def key(self) -> str:
        """Stable text encoding: RREF rows as hex, dot separated."""
        width = max(1, (self.n + 3) // 4)
        return ".".join(format(r, f"0{width}x") for r in self.basis)

    @classmethod
    def from_key(cls, key: str, n: int) -> "Subspace":
        rows = [int(h, 16) for h in key.split(".") if h]
        sub = cls.span(rows, n)
        if sub.basis != tuple(rows):
            raise ValueError(f"key {key!r} is not a canonical basis")
        return sub


@dataclass(frozen=True)
class Coset:
    subspace: Subspace
    rep: int

    @classmethod
    def of(cls, subspace: Subspace, v: int) -> "Coset":
        return cls(subspace, subspace.reduce(v))

    def __contains__(self, v: int) -> bool:
        return self.subspace.reduce(v ^ self.rep) == 0

    def elements(self) -> list[int]:
        return [self.rep ^ u for u in self.subspace.elements()]


def orthogonal_complement(a: Subspace) -> Subspace:
    n = a.n
    pivots = pivot_mask(a.basis)
    vecs = []
    for j in range(n):
        f = bit(n, j)
        if pivots & f:
            continue
        v = f
        for r in a.basis:
            if r & f:
                v |= 1 << (r.bit_length() - 1)
        vecs.append(v)
    return Subspace.span(vecs, n)


def coset_representatives(a: Subspace) -> list[int]:
    """Sorted lexicographic minima of the 2**(n - dim) cosets of ``a``."""
    if a.n > MAX_ENUM_BITS:
        raise ValueError(f"refusing to enumerate cosets for n={a.n} > {MAX_ENUM_BITS}")
    pivots = pivot_mask(a.basis)
    free = [bit(a.n, j) for j in range(a.n) if not pivots & bit(a.n, j)]
    return sorted(span_elements(free))


def intersection_dim(a: Subspace, b: Subspace) -> int:
    if a.n != b.n:
        raise ValueError("subspaces live in different ambient spaces")
    return a.dim + b.dim - rank(a.basis + b.basis)


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_dims(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")


@lru_cache(maxsize=None)
def _grassmannian(n: int, k: int) -> tuple[Subspace, ...]:
    out = []
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        # free slots: non-pivot columns to the right of each row's pivot
        slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivot_set]
        for fill in itertools.product((0, 1), repeat=len(slots)):
            rows = [bit(n, p) for p in pivots]
            for (r, c), f in zip(slots, fill):
                if f:
                    rows[r] |= bit(n, c)
            out.append(Subspace(n, tuple(rows)))
    return tuple(out)


def enumerate_grassmannian(n: int, k: int) -> list[Subspace]:
    """Every k-dimensional subspace of F_2^n exactly once (n <= 8)."""
    _check_dims(n, k)
    if n > MAX_GRASSMANNIAN_BITS:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_GRASSMANNIAN_BITS}")
    return list(_grassmannian(n, k))


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_vector(n: int, rng: np.random.Generator) -> int:
    v = 0
    for b in rng.integers(0, 2, size=n):
        v = (v << 1) | int(b)
    return v


def sample_uniform_subspace(n: int, k: int, seed=None) -> Subspace:
    """Uniformly random element of G(k, n).

    Small ambient spaces pick from the enumerated Grassmannian; larger ones
    canonicalize a uniformly random full-rank k x n matrix, which is uniform
    because every subspace has the same number of ordered bases.
    """
    _check_dims(n, k)
    rng = as_rng(seed)
    if n <= MAX_GRASSMANNIAN_BITS:
        pool = _grassmannian(n, k)
        return pool[int(rng.integers(len(pool)))]
    while True:
        rows = [random_vector(n, rng) for _ in range(k)]
        if rank(rows) == k:
            return Subspace.span(rows, n)


def random_invertible(n: int, seed=None) -> list[int]:
    rng = as_rng(seed)
    while True:
        rows = [random_vector(n, rng) for _ in range(n)]
        if rank(rows) == n:
            return rows


def enumerate_invertible(n: int) -> Iterator[list[int]]:
    """All ordered bases of F_2^n (rows of GL(n, 2)), n <= 4 in practice."""
    if n > 5:
        raise ValueError("GL(n, 2) enumeration limited to n <= 5")

    def extend(prefix: list[int], span: set[int]) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield list(prefix)
            return
        for v in range(1, 1 << n):
            if v in span:
                continue
            prefix.append(v)
            yield from extend(prefix, span | {s ^ v for s in span})
            prefix.pop()

    yield from extend([], {0})
