"""Exact Laplacian spectra and the shared eigenbasis of threshold graphs.

Every connected threshold graph on n vertices is diagonalized by the same
integer basis: the vectors x^l (l ones, then -l, then zeros) together with
the all-ones vector.  The eigenvalue attached to x^l is recovered by exact
multiplication rather than by degree bookkeeping; the closed-form spectrum
is computed independently and the two are cross-checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotEigenvalueError, NotEigenvectorError
from .exact import invert_fraction_matrix, mat_vec
from .graphs import ThresholdGraph


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue/multiplicity pairs, sorted descending (0 last)."""

    entries: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    def eigenvalues(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.entries)

    def multiplicity(self, value: int) -> int:
        for v, m in self.entries:
            if v == value:
                return m
        return 0

    def as_multiset(self) -> tuple[int, ...]:
        out: list[int] = []
        for v, m in self.entries:
            out.extend([v] * m)
        return tuple(out)

    def to_json(self) -> str:
        return json.dumps([{"value": v, "multiplicity": m} for v, m in self.entries])

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v}^({m})" for v, m in self.entries) + "}"


def shared_basis_vector(n: int, l: int) -> list[int]:
    """The l-th shared eigenvector: l ones, then -l, padded with zeros."""
    if not 1 <= l <= n:
        raise ValueError(f"index l must be in 1..{n}, got {l}")
    if l == n:
        return [1] * n
    return [1] * l + [-l] + [0] * (n - l - 1)


def shared_eigenbasis(n: int) -> list[list[int]]:
    if n < 2:
        raise ValueError("need n >= 2")
    return [shared_basis_vector(n, l) for l in range(1, n + 1)]


def spectrum(g: ThresholdGraph) -> Spectrum:
    """Closed-form spectrum from the block counts.

    Both block-form branches (single leading 0 versus a longer head run)
    are evaluated, then the result is checked against the degree-sequence
    form of the eigenvalues before being returned.
    """
    blocks = g.blocks
    n, r = g.n, g.r
    s = [sb for sb, _ in blocks]
    t = [tb for _, tb in blocks]
    entries: list[tuple[int, int]] = []
    suffix_s = 0
    for i in range(r - 1, -1, -1):
        entries.append((n - suffix_s, t[i]))
        suffix_s += s[i]
    if s[0] >= 2:
        entries.append((sum(t), s[0] - 1))
    for i in range(1, r):
        entries.append((sum(t[i:]), s[i]))
    entries.append((0, 1))
    entries.sort(key=lambda e: -e[0])
    result = Spectrum(entries=tuple(entries))

    expected = tuple(sorted(_degree_form_eigenvalues(g), reverse=True))
    if result.as_multiset() != expected:
        raise NotEigenvectorError(
            f"closed-form spectrum {result} disagrees with degree form {expected}"
        )
    return result


def _degree_form_eigenvalues(g: ThresholdGraph) -> list[int]:
    """Eigenvalues as shifted sorted degrees: d_i + 1 up to the trace, then d_{i+1}."""
    d = sorted(g.degrees(), reverse=True)
    tr = g.trace
    vals = [d[i] + 1 for i in range(tr)]
    vals += [d[i + 1] for i in range(tr, g.n - 1)]
    vals.append(0)
    return vals


def assign_eigenvalues(g: ThresholdGraph) -> tuple[int, ...]:
    """Map index l (1-based) to its eigenvalue, by exact multiplication.

    Entry ``result[l-1]`` is the integer mu with L x^l = mu x^l.  Fails
    loudly if some x^l is not an eigenvector, which no valid input can
    trigger.
    """
    lap = g.laplacian()
    n = g.n
    out: list[int] = []
    for l in range(1, n + 1):
        x = shared_basis_vector(n, l)
        lx = mat_vec(lap, x)
        mu = lx[0]  # first coordinate of x^l is always 1
        if lx != [mu * xi for xi in x]:
            raise NotEigenvectorError(
                f"x^{l} is not an eigenvector of L({g.sequence}): L x = {lx}"
            )
        out.append(mu)
    return tuple(out)


def eigenvalue_groups(g: ThresholdGraph) -> list[tuple[int, int, int]]:
    """Contiguous runs (mu, p, q) with mu(l) = mu exactly for p <= l <= q-1.

    Covers l = 1..n-1 in index order; the kernel index n is excluded.  The
    run structure underpins both the structured-basis construction and the
    projection block layout.
    """
    assignment = assign_eigenvalues(g)
    runs: list[tuple[int, int, int]] = []
    p = 1
    for l in range(2, g.n):
        if assignment[l - 1] != assignment[p - 1]:
            runs.append((assignment[p - 1], p, l))
            p = l
    runs.append((assignment[p - 1], p, g.n))
    if any(runs[i][0] == runs[j][0] for i in range(len(runs)) for j in range(i + 1, len(runs))):
        raise NotEigenvectorError(f"eigenvalue runs are not contiguous for {g.sequence}")
    return runs


def projection(g: ThresholdGraph, mu: int) -> list[list[Fraction]]:
    """Exact rational orthogonal projection onto the mu-eigenspace.

    Built from the shared-basis column block B as B (B^T B)^{-1} B^T, which
    avoids square roots entirely.
    """
    n = g.n
    if mu == 0:
        return [[Fraction(1, n)] * n for _ in range(n)]
    cols = [
        shared_basis_vector(n, l)
        for value, p, q in eigenvalue_groups(g)
        if value == mu
        for l in range(p, q)
    ]
    if not cols:
        raise NotEigenvalueError(f"{mu} is not an eigenvalue of {g.sequence}")
    gram = [[sum(a * b for a, b in zip(u, v)) for v in cols] for u in cols]
    gram_inv = invert_fraction_matrix(gram)
    k = len(cols)
    return [
        [
            sum(cols[a][i] * gram_inv[a][b] * cols[b][j] for a in range(k) for b in range(k))
            for j in range(n)
        ]
        for i in range(n)
    ]


def projections(g: ThresholdGraph) -> dict[int, list[list[Fraction]]]:
    out = {mu: projection(g, mu) for mu, _, _ in eigenvalue_groups(g)}
    out[0] = projection(g, 0)
    return out


def eigenbasis_csv(g: ThresholdGraph) -> str:
    """Shared eigenbasis as integer CSV, one vector per column."""
    basis = shared_eigenbasis(g.n)
    rows = [[basis[l][i] for l in range(g.n)] for i in range(g.n)]
    return "\n".join(",".join(str(x) for x in row) for row in rows)
