"""Mutually orthogonal permutations of the balanced strings C_{n,n/2}.

For each overlap class k >= 1 the digraph G_{n,k} (arcs between strings that
share exactly n/2 - k ones, both directions) is regular of degree
C(n/2, k)**2, so it splits into that many arc-disjoint cycle covers. Each
cover is a fixed-point-free permutation; together with the identity for
k = 0 they give C(n, n/2) mutually orthogonal permutations.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Sequence

import numpy as np

MAX_FAMILY_N = 12


def weighted_strings(n: int) -> list[int]:
    """All n-bit strings of weight n/2, sorted lexicographically."""
    if n < 0 or n % 2:
        raise ValueError(f"n must be a non-negative even integer, got {n}")
    return sorted(
        sum(1 << (n - 1 - i) for i in ones) for ones in itertools.combinations(range(n), n // 2)
    )


def overlap(g: int, h: int) -> int:
    """Number of positions where both strings are 1."""
    return (g & h).bit_count()


@dataclass(frozen=True)
class OverlapDigraph:
    n: int
    k: int
    strings: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return len(self.succ[0]) if self.succ else 0

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, out in enumerate(self.succ) for v in out]


def build_overlap_digraph(n: int, k: int) -> OverlapDigraph:
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must lie in 1..{n // 2}; the k = 0 class is the identity")
    strings = weighted_strings(n)
    target = n // 2 - k
    succ = tuple(
        tuple(j for j, h in enumerate(strings) if overlap(g, h) == target) for g in strings
    )
    return OverlapDigraph(n, k, tuple(strings), succ)


def _augment(root: int, succ: list[list[int]], match_l: list[int], match_r: list[int]) -> bool:
    seen = [False] * len(match_r)
    ptr = {root: 0}
    stack, via = [root], []
    while stack:
        u = stack[-1]
        i = ptr[u]
        if i >= len(succ[u]):
            stack.pop()
            if via:
                via.pop()
            continue
        ptr[u] = i + 1
        w = succ[u][i]
        if seen[w]:
            continue
        seen[w] = True
        via.append(w)
        if match_r[w] == -1:
            for lv, rw in zip(stack, via):
                match_l[lv] = rw
                match_r[rw] = lv
            return True
        nxt = match_r[w]
        ptr[nxt] = 0
        stack.append(nxt)
    return False


def perfect_matching(succ: list[list[int]]) -> list[int]:
    """Perfect matching of out-copies to in-copies, lowest index first.

    Returns ``m`` with arc ``v -> m[v]`` for every vertex. Raises RuntimeError
    when no perfect matching exists.
    """
    size = len(succ)
    match_l, match_r = [-1] * size, [-1] * size
    for v in range(size):
        for w in succ[v]:
            if match_r[w] == -1:
                match_l[v], match_r[w] = w, v
                break
    for v in range(size):
        if match_l[v] == -1 and not _augment(v, succ, match_l, match_r):
            raise RuntimeError(f"no perfect matching: vertex {v} cannot be covered")
    return match_l


def _scipy_matching(succ: list[list[int]]) -> list[int]:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    size = len(succ)
    indptr = np.cumsum([0] + [len(out) for out in succ])
    indices = np.fromiter((w for out in succ for w in out), dtype=np.int64, count=int(indptr[-1]))
    adj = csr_matrix((np.ones(len(indices)), indices, indptr), shape=(size, size))
    m = maximum_bipartite_matching(adj, perm_type="column")
    if (m < 0).any():
        raise RuntimeError(f"no perfect matching: vertex {int(np.argmin(m))} cannot be covered")
    return [int(w) for w in m]


MATCHERS = {"kuhn": perfect_matching, "hopcroft-karp": _scipy_matching}
KUHN_MAX_N = 8


def cycle_cover_decomposition(g, matcher: str = "kuhn") -> list[tuple[int, ...]]:
    """Split a d-regular digraph into d arc-disjoint cycle covers.

    ``g`` is an :class:`OverlapDigraph` or a plain list of successor lists.
    Each cover is returned as the permutation ``v -> successor``. ``matcher``
    picks the perfect-matching routine: ``"kuhn"`` (lowest index first) or
    ``"hopcroft-karp"`` (compiled, for the large graphs at n >= 10).
    """
    match = MATCHERS[matcher]
    succ = [sorted(set(out)) for out in getattr(g, "succ", g)]
    size = len(succ)
    indeg = [0] * size
    for u, out in enumerate(succ):
        if u in out:
            raise ValueError(f"self-loop at vertex {u}")
        for v in out:
            indeg[v] += 1
    degrees = {len(out) for out in succ} | set(indeg)
    if len(degrees) != 1:
        raise ValueError("digraph is not regular (in/out-degrees differ)")
    d = degrees.pop()
    covers = []
    for _ in range(d):
        m = match(succ)
        covers.append(tuple(m))
        for u, v in enumerate(m):
            succ[u].remove(v)
    return covers


@dataclass
class PermutationFamily:
    n: int
    strings: list[int]
    perms: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.perms)

    @property
    def mappings(self) -> list[tuple[int, ...]]:
        return [m for _, m in self.perms]

    def to_json(self) -> str:
        doc = {"n": self.n, "perms": [{"k": k, "mapping": list(m)} for k, m in self.perms]}
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PermutationFamily":
        doc = json.loads(text)
        n = int(doc["n"])
        perms = [(int(p["k"]), tuple(int(i) for i in p["mapping"])) for p in doc["perms"]]
        return cls(n, weighted_strings(n), perms)


def orthogonal_permutation_family(n: int) -> PermutationFamily:
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    if n > MAX_FAMILY_N:
        raise ValueError(f"family construction limited to n <= {MAX_FAMILY_N}")
    return PermutationFamily(n, weighted_strings(n), list(_family_perms(n)))


@functools.lru_cache(maxsize=None)
def _family_perms(n: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    matcher = "kuhn" if n <= KUHN_MAX_N else "hopcroft-karp"
    perms = [(0, tuple(range(comb(n, n // 2))))]
    for k in range(1, n // 2 + 1):
        for cover in cycle_cover_decomposition(build_overlap_digraph(n, k), matcher):
            perms.append((k, cover))
    return tuple(perms)


@dataclass
class FamilyReport:
    passed: bool
    message: str = "ok"
    witness: tuple | None = None
    checked_pairs: int = 0


def first_collision(perms: Sequence[Sequence[int]]) -> tuple[int, int, int] | None:
    """``(i, j, v)`` with ``perms[i][v] == perms[j][v]`` and i < j, if any."""
    if not perms:
        return None
    arr = np.asarray(perms)
    for i in range(len(arr) - 1):
        hits = np.nonzero(arr[i + 1 :] == arr[i])
        if hits[0].size:
            return i, i + 1 + int(hits[0][0]), int(hits[1][0])
    return None


def verify_family(f: PermutationFamily) -> FamilyReport:
    """Check orthogonality, class counts and overlap classes of a family."""
    n, strings = f.n, f.strings
    size = len(strings)
    half = n // 2
    for idx, (k, m) in enumerate(f.perms):
        if sorted(m) != list(range(size)):
            return FamilyReport(False, f"member {idx} is not a permutation", (idx,))
        for v, w in enumerate(m):
            if overlap(strings[v], strings[w]) != half - k:
                return FamilyReport(
                    False,
                    f"member {idx} (k={k}) maps a string outside its overlap class",
                    (idx, v, w),
                )
    pairs = len(f.perms) * (len(f.perms) - 1) // 2
    hit = first_collision(f.mappings)
    if hit is not None:
        i, j, v = hit
        return FamilyReport(False, f"members {i} and {j} agree at vertex {v}", hit, pairs)
    counts = {}
    for k, _ in f.perms:
        counts[k] = counts.get(k, 0) + 1
    for k in range(half + 1):
        if counts.get(k, 0) != comb(half, k) ** 2:
            return FamilyReport(
                False, f"class k={k} has {counts.get(k, 0)} members, want {comb(half, k) ** 2}",
                (k,), pairs,
            )
    if len(f.perms) != comb(n, half):
        return FamilyReport(False, f"family has {len(f.perms)} members", None, pairs)
    return FamilyReport(True, "ok", None, pairs)


def subset_permutation_view(
    f: PermutationFamily, ground_set: Sequence[Hashable]
) -> list[dict[frozenset, frozenset]]:
    """Read each permutation as a map between n/2-subsets of ``ground_set``.

    Position i of an indicator string refers to ``ground_set[i]``.
    """
    if len(ground_set) != f.n:
        raise ValueError(f"ground set has {len(ground_set)} items, family acts on n={f.n}")
    n = f.n
    subsets = [frozenset(ground_set[i] for i in range(n) if g >> (n - 1 - i) & 1) for g in f.strings]
    return [{subsets[v]: subsets[w] for v, w in enumerate(m)} for _, m in f.perms]
