"""Deciding and constructing {-1,0,1} Laplacian eigenbases.

A threshold graph admits a full eigenbasis with entries in {-1,0,1} exactly
when its block counts satisfy a chain of window inequalities; the decision
routine checks that chain directly, and the constructive routine builds the
basis group by group: twin differences inside an index run plus one
balanced head vector whenever the run does not start at index 1.

An independent brute-force oracle (full enumeration of {-1,0,1} vectors)
certifies the decision procedure on small orders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotSimplyStructuredError, NotSSGroupError, TooLargeError, VerifyFailedError
from .exact import RankTracker, mat_vec
from .graphs import ThresholdGraph
from .spectra import eigenvalue_groups, spectrum

ORACLE_CUTOFF = 12


@dataclass(frozen=True)
class GroupBoundaries:
    """Eigenvalue index runs, ordered by descending eigenvalue.

    Each entry (mu, p, q) covers shared-basis indices p..q-1; together the
    runs cover 1..n-1 and the kernel owns index n.
    """

    groups: tuple[tuple[int, int, int], ...]
    kernel_index: int

    def boundary_indices(self) -> tuple[int, ...]:
        """Run starts in decreasing index order (l_1 > l_2 > ...)."""
        return tuple(sorted((p for _, p, _ in self.groups), reverse=True))

    def group_of(self, mu: int) -> tuple[int, int]:
        for value, p, q in self.groups:
            if value == mu:
                return p, q
        raise KeyError(mu)


@dataclass(frozen=True)
class SSVerdict:
    """Outcome of the simply-structured decision.

    On failure, ``violation`` names the first broken constraint: one of
    "block-count-bound", "t-bound", "s-bound" with the 1-based block index
    it failed at (0 for the global block-count bound).
    """

    simply_structured: bool
    violation: tuple[str, int] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.simply_structured


@dataclass(frozen=True)
class SSBasis:
    """A verified full eigenbasis with entries in {-1,0,1}.

    ``vectors`` pairs each eigenvalue with its basis vector; vectors of one
    eigenvalue group are adjacent, the kernel vector comes last.
    """

    vectors: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def n(self) -> int:
        return len(self.vectors)

    def matrix(self) -> list[list[int]]:
        """Vectors as columns of an n x n integer matrix."""
        return [[vec[i] for _, vec in self.vectors] for i in range(self.n)]

    def to_csv(self) -> str:
        return "\n".join(",".join(str(x) for x in row) for row in self.matrix())

    def to_json(self) -> str:
        return json.dumps(
            [{"eigenvalue": mu, "vector": list(vec)} for mu, vec in self.vectors]
        )


def group_boundaries(g: ThresholdGraph) -> GroupBoundaries:
    runs = sorted(eigenvalue_groups(g), key=lambda r: -r[0])
    return GroupBoundaries(groups=tuple(runs), kernel_index=g.n)


def is_simply_structured(g: ThresholdGraph) -> SSVerdict:
    """Decide the {-1,0,1} eigenbasis question from the block counts alone.

    Checks, in order: the global bound on the number of block pairs, then
    for each block index i from the last pair inward the window bounds on
    t_i and (for i >= 2) on s_i.  The first failure is reported.
    """
    n, r = g.n, g.r
    s = [sb for sb, _ in g.blocks]
    t = [tb for _, tb in g.blocks]

    r_max = n.bit_length() // 2  # floor((floor(log2 n) + 1) / 2)
    if not 1 <= r <= r_max:
        return SSVerdict(
            False,
            ("block-count-bound", 0),
            f"r={r} exceeds bound {r_max} for n={n}",
        )

    for i in range(r, 0, -1):
        tail = sum(s[j] + t[j] for j in range(i, r))  # blocks after i
        window = n - tail
        lo = -(-window // 2)  # ceil(window / 2)
        hi = window - 4 ** (i - 1)  # window - 2^{2i-2}
        if not lo <= t[i - 1] <= hi:
            return SSVerdict(
                False,
                ("t-bound", i),
                f"t_{i}={t[i - 1]} outside [{lo}, {hi}]",
            )
        if i >= 2:
            window_s = n - t[i - 1] - tail
            lo_s = -(-window_s // 2)
            hi_s = window_s - 2 ** (2 * i - 3)
            if not lo_s <= s[i - 1] <= hi_s:
                return SSVerdict(
                    False,
                    ("s-bound", i),
                    f"s_{i}={s[i - 1]} outside [{lo_s}, {hi_s}]",
                )

    if s[0] != n - t[0] - sum(s[j] + t[j] for j in range(1, r)):
        return SSVerdict(False, ("s-bound", 1), "head block identity failed")
    return SSVerdict(True)


def ss_group_basis(p: int, q: int, n: int) -> list[list[int]]:
    """{-1,0,1} basis of the eigenspace spanned by indices p..q-1.

    For the leading run (p = 1) consecutive twin differences suffice.  For
    later runs the differences on p+1..q-1 are topped up with the balanced
    vector (ones on 1..p, minus ones on p+1..2p), which exists exactly when
    2p <= q.
    """
    if not 1 <= p < q <= n:
        raise ValueError(f"bad group range [{p}, {q}) for n={n}")

    def diff(i: int) -> list[int]:
        v = [0] * n
        v[i - 1] = 1
        v[i] = -1
        return v

    if p == 1:
        return [diff(i) for i in range(1, q)]
    if 2 * p > q:
        raise NotSSGroupError(
            f"group [{p}, {q - 1}] admits no balanced vector (2*{p} > {q})"
        )
    balanced = [1] * p + [-1] * p + [0] * (n - 2 * p)
    return [diff(i) for i in range(p + 1, q)] + [balanced]


def ss_eigenbasis(g: ThresholdGraph) -> SSBasis:
    """Construct and exactly verify a full {-1,0,1} eigenbasis."""
    verdict = is_simply_structured(g)
    if not verdict:
        raise NotSimplyStructuredError(
            f"{g.sequence} is not simply structured: {verdict.detail}"
        )
    n = g.n
    tagged: list[tuple[int, tuple[int, ...]]] = []
    for mu, p, q in eigenvalue_groups(g):
        for vec in ss_group_basis(p, q, n):
            tagged.append((mu, tuple(vec)))
    tagged.append((0, tuple([1] * n)))

    lap = g.laplacian()
    rank = RankTracker()
    for mu, vec in tagged:
        if any(x not in (-1, 0, 1) for x in vec):
            raise VerifyFailedError(f"entry outside {{-1,0,1}} in basis of {g.sequence}")
        if mat_vec(lap, list(vec)) != [mu * x for x in vec]:
            raise VerifyFailedError(
                f"constructed vector {vec} is not a {mu}-eigenvector of {g.sequence}"
            )
        rank.add(vec)
    if rank.rank != n:
        raise VerifyFailedError(f"basis of {g.sequence} has rank {rank.rank} != {n}")
    return SSBasis(vectors=tuple(tagged))


@lru_cache(maxsize=2)
def _sign_vectors(n: int) -> np.ndarray:
    """All 3^n vectors over {-1,0,1}, as an int8 array (cached per n)."""
    idx = np.arange(3**n, dtype=np.int64)
    cols = [(idx // 3**k) % 3 - 1 for k in range(n - 1, -1, -1)]
    return np.stack(cols, axis=1).astype(np.int8)


@lru_cache(maxsize=2)
def _sign_vectors_float(n: int) -> np.ndarray:
    return _sign_vectors(n).astype(np.float64)


def _int_row_rank(rows: np.ndarray) -> int:
    """Exact rank of an integer matrix via fraction-free elimination.

    Entries stay minor-bounded (Bareiss one-step division), which for the
    {-1,0,1} rows this package feeds in keeps everything far inside int64.
    """
    a = rows.astype(np.int64).copy()
    m, n = a.shape
    rank = 0
    prev = np.int64(1)
    for col in range(n):
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        pivot = a[rank, col]
        if rank + 1 < m:
            below = a[rank + 1 :]
            a[rank + 1 :] = (below * pivot - np.outer(below[:, col], a[rank])) // prev
        prev = pivot
        rank += 1
        if rank == min(m, n):
            break
    return rank


def brute_force_eigenvectors(g: ThresholdGraph) -> dict[int, np.ndarray]:
    """All {-1,0,1} eigenvectors of L(g), grouped by eigenvalue.

    Enumerates every nonzero {-1,0,1} vector and keeps the exact
    eigenvectors; all arithmetic is on small integers, so the float matmul
    used for speed is exact.
    """
    n = g.n
    if n > ORACLE_CUTOFF:
        raise TooLargeError(f"brute-force enumeration capped at n={ORACLE_CUTOFF}, got {n}")
    lap_t = g.laplacian_array().T.astype(np.float64)
    found: dict[int, list[np.ndarray]] = {}
    vectors = _sign_vectors(n)
    vectors_f = _sign_vectors_float(n)
    chunk = 1 << 17
    for start in range(0, vectors.shape[0], chunk):
        v = vectors_f[start : start + chunk]
        lv = v @ lap_t
        nonzero = np.abs(v).any(axis=1)
        first = np.argmax(v != 0, axis=1)
        rows = np.arange(v.shape[0])
        mu = lv[rows, first] * v[rows, first]  # entries are +-1, so this divides
        is_eig = nonzero & (lv == mu[:, None] * v).all(axis=1)
        for i in np.nonzero(is_eig)[0]:
            found.setdefault(int(mu[i]), []).append(vectors[start + i])
    return {value: np.stack(vecs) for value, vecs in found.items()}


def ss_oracle(g: ThresholdGraph) -> bool:
    """Ground-truth simply-structured answer by exhaustive enumeration.

    True iff for every eigenvalue the {-1,0,1} eigenvectors found by brute
    force span the whole eigenspace (exact rank equals multiplicity).
    """
    pools = brute_force_eigenvectors(g)
    for value, mult in spectrum(g).entries:
        if value not in pools:
            return False
        if _int_row_rank(pools[value]) < mult:
            return False
    return True
