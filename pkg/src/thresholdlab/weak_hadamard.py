"""Weak Hadamard diagonalizers for threshold Laplacians.

A weak Hadamard matrix has {-1,0,1} entries and a tridiagonal Gram matrix;
a graph is WHD when such a matrix diagonalizes its Laplacian.  The eigen-
space index runs of a threshold graph are mutually orthogonal no matter
which vectors represent them, so the whole problem reduces to finding, per
run, an ordered {-1,0,1} basis whose overlaps only occur between adjacent
columns.

Constructions here are advisory and exact verification is authoritative:
every certificate that leaves this module has been checked entry by entry
(L W = W Lambda, Gram tridiagonality, nonzero determinant).  The join
recursion follows the sufficient-condition witness; explicit column
patterns cover the awkward base shapes; a bounded backtracking search is
the honest fallback and doubles as an exhaustive oracle on small orders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceededError,
    JoinGapError,
    NotSimplyStructuredError,
    TooLargeError,
    VerifyFailedError,
)
from .exact import RankTracker, int_det, mat_vec
from .graphs import ThresholdGraph
from .spectra import eigenvalue_groups
from .structured import is_simply_structured

DEFAULT_SEARCH_BUDGET = 500_000
POOL_ENUMERATION_CAP = 12  # refuse to enumerate 3^T tails beyond this run size

Column = tuple[int, ...]


@dataclass(frozen=True)
class WeakHadamardVerdict:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class WHDCertificate:
    """A verified diagonalizer: columns of W, Lambda, and how it was built."""

    sequence: str
    columns: tuple[Column, ...]
    eigenvalues: tuple[int, ...]
    provenance: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.columns)

    def matrix(self) -> list[list[int]]:
        return [[col[i] for col in self.columns] for i in range(self.n)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "sequence": self.sequence,
                "columns": [list(c) for c in self.columns],
                "lambda": list(self.eigenvalues),
                "provenance": list(self.provenance),
            }
        )

    def to_csv(self) -> str:
        return "\n".join(",".join(str(x) for x in row) for row in self.matrix())


def certificate_from_json(text: str) -> WHDCertificate:
    """Load and re-verify a certificate; loading never trusts the payload."""
    data = json.loads(text)
    g = ThresholdGraph.parse(data["sequence"])
    cert = certify(g, [tuple(c) for c in data["columns"]], tuple(data["provenance"]))
    if list(cert.eigenvalues) != list(data["lambda"]):
        raise VerifyFailedError("stored eigenvalues disagree with recomputed ones")
    return cert


def is_weak_hadamard(columns) -> WeakHadamardVerdict:
    """Check entries, Gram tridiagonality, and invertibility, in that order."""
    n = len(columns)
    if n == 0 or any(len(c) != n for c in columns):
        return WeakHadamardVerdict(False, "not a square matrix")
    for j, col in enumerate(columns):
        if any(x not in (-1, 0, 1) for x in col):
            return WeakHadamardVerdict(False, f"column {j} has an entry outside {{-1,0,1}}")
    for i in range(n):
        for j in range(i + 2, n):
            if sum(a * b for a, b in zip(columns[i], columns[j])) != 0:
                return WeakHadamardVerdict(
                    False, f"Gram entry ({i}, {j}) is nonzero: W^T W not tridiagonal"
                )
    rows = [[col[i] for col in columns] for i in range(n)]
    if int_det(rows) == 0:
        return WeakHadamardVerdict(False, "matrix is singular")
    return WeakHadamardVerdict(True)


def diagonalizes(columns, g: ThresholdGraph):
    """Exact column-wise eigenvalue extraction: L W = W Lambda or a witness.

    Returns (True, lambdas) on success and (False, witness_message) when
    some column is not an eigenvector of L(g).
    """
    lap = g.laplacian()
    lambdas: list[int] = []
    for j, col in enumerate(columns):
        w = list(col)
        lw = mat_vec(lap, w)
        pivot = next((i for i, x in enumerate(w) if x != 0), None)
        if pivot is None:
            return False, f"column {j} is zero"
        lam = Fraction(lw[pivot], w[pivot])
        if any(lw[i] != lam * w[i] for i in range(len(w))):
            return False, f"column {j} is not an eigenvector of L({g.sequence})"
        if lam.denominator != 1:
            return False, f"column {j} yields a non-integer eigenvalue {lam}"
        lambdas.append(int(lam))
    return True, lambdas


def certify(g: ThresholdGraph, columns, provenance) -> WHDCertificate:
    """Single chokepoint every construction funnels through.

    Raises on any violation, so no unverified certificate can escape.
    """
    verdict = is_weak_hadamard(columns)
    if not verdict:
        raise VerifyFailedError(f"{g.sequence}: {verdict.violation}")
    ok, lambdas = diagonalizes(columns, g)
    if not ok:
        raise VerifyFailedError(f"{g.sequence}: {lambdas}")
    return WHDCertificate(
        sequence=g.sequence,
        columns=tuple(tuple(c) for c in columns),
        eigenvalues=tuple(lambdas),
        provenance=tuple(provenance),
    )


# ---------------------------------------------------------------------------
# Sufficient conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JoinDecomposition:
    """Witness that one of the sufficient WHD conditions holds.

    route "join-recursion" carries the split parameters: base_params is the
    (l, m) pair for the head block when s_1 >= 3 (None for s_1 in {1, 2}),
    step_params the (l, m) pair for every later block pair.  The two
    pattern routes ("clique-pattern" for the two-class join, "plus-edge"
    for that join plus one edge) carry no parameters.
    """

    route: str
    base_params: tuple[int, int] | None = None
    step_params: tuple[tuple[int, int], ...] = ()


def _floor_log2_ratio(n: int, d: int) -> int:
    """floor(log2(n / d)) for integers n >= d >= 1, without floats."""
    e = 0
    while (d << (e + 1)) <= n:
        e += 1
    return e


def whd_sufficient(g: ThresholdGraph) -> JoinDecomposition | None:
    """First matching sufficiency witness, or None.

    None means "not covered by the sufficient conditions", never "not
    WHD".  The three routes are checked independently: the join recursion
    over all block pairs, the two-class join pattern, and the plus-edge
    pattern.
    """
    s = [sb for sb, _ in g.blocks]
    t = [tb for _, tb in g.blocks]
    n, r = g.n, g.r

    witness = _join_recursion_witness(g, s, t, n, r)
    if witness is not None:
        return witness
    if r == 1 and t[0] - s[0] in (0, 1, 2):
        return JoinDecomposition(route="clique-pattern")
    if (
        r == 2
        and (s[0], t[0]) == (1, 1)
        and t[1] - (s[1] + 2) in (0, 1, 2)
        and s[1] + 2 >= 4
    ):
        return JoinDecomposition(route="plus-edge")
    return None


def _join_recursion_witness(g, s, t, n, r) -> JoinDecomposition | None:
    if not is_simply_structured(g):
        return None
    if s[0] <= 2:
        base_params = None
    else:
        base_params = None
        for l in range(1, _floor_log2_ratio(n, s[0]) + 1):
            m = t[0] - ((1 << l) - 1) * s[0]
            if 0 <= m <= 2 * ((1 << l) - 1):
                base_params = (l, m)
                break
        if base_params is None:
            return None
    steps: list[tuple[int, int]] = []
    for k in range(2, r + 1):
        prefix = sum(s[j] + t[j] for j in range(k - 1))
        l_max = _floor_log2_ratio(n, s[0]) - (1 << (k - 1))
        found = None
        for l in range(1, l_max + 1):
            factor = (1 << l) - 1
            m = s[k - 1] - factor * prefix
            if m == t[k - 1] - factor * (prefix + s[k - 1]) and 0 <= m <= 2 * factor:
                found = (l, m)
                break
        if found is None:
            return None
        steps.append(found)
    return JoinDecomposition(
        route="join-recursion", base_params=base_params, step_params=tuple(steps)
    )


# ---------------------------------------------------------------------------
# Explicit column patterns per eigenvalue run
# ---------------------------------------------------------------------------


def _diff(i: int, n: int) -> list[int]:
    v = [0] * n
    v[i - 1] = 1
    v[i] = -1
    return v


def _indicator(coords, n: int, sign: int = 1) -> list[int]:
    v = [0] * n
    for c in coords:
        v[c - 1] = sign
    return v


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def group_path_columns(p: int, q: int, n: int) -> list[list[int]] | None:
    """Ordered {-1,0,1} columns for the run p..q-1 with path-shaped overlaps.

    Covers the leading run, the two snug shapes (2p in {q, q-1}), the
    two-head pattern for p = 2 of any width, and the block caterpillar for
    q = 2p + 2.  Returns None for shapes it has no pattern for; callers
    fall back to search.  Output order matters: any two columns with a
    nonzero inner product are adjacent.
    """
    size = q - p
    if p == 1:
        return [_diff(i, n) for i in range(1, q)]
    if 2 * p > q:
        return None
    head = [1] * p + [0] * (n - p)
    if 2 * p == q:
        balanced = _add(head, _indicator(range(p + 1, 2 * p + 1), n, -1))
        return [_diff(i, n) for i in range(p + 1, q)] + [balanced]
    if 2 * p == q - 1:
        balanced = _add(head, _indicator(range(p + 1, 2 * p + 1), n, -1))
        return [_diff(i, n) for i in range(p + 1, q)] + [balanced]
    if p == 2:
        return _two_head_columns(p, q, n)
    if q == 2 * p + 2:
        return _caterpillar_columns(p, q, n)
    return None


def _two_head_columns(p: int, q: int, n: int) -> list[list[int]]:
    """p = 2 runs of any width: two head vectors feeding a pair-sum chain."""
    head = [1] * p + [0] * (n - p)
    pairs = [(p + 2 * j + 1, p + 2 * j + 2) for j in range((q - p) // 2)]
    odd = (q - p) % 2 == 1
    v1 = _add(head, _indicator(pairs[0], n, -1))
    v2 = _add(head, _indicator(pairs[1], n, -1))
    cols = [_diff(pairs[0][0], n), v1, v2]
    for j in range(1, len(pairs) - 1):
        cols.append(_add(_indicator(pairs[j], n), _indicator(pairs[j + 1], n, -1)))
    if odd:
        cols.append(_diff(q - 1, n))  # ties the trailing singleton in
        cols.extend(_diff(a, n) for a, _ in reversed(pairs[1:]))
    else:
        cols.extend(_diff(a, n) for a, _ in pairs[1:])
    return cols


def _caterpillar_columns(p: int, q: int, n: int) -> list[list[int]]:
    """q = 2p + 2 runs: one head vector at the end of a pair-sum chain."""
    head = [1] * p + [0] * (n - p)
    if p % 2 == 0:
        pairs = [(p + 2 * j + 1, p + 2 * j + 2) for j in range((p + 2) // 2)]
        minus = [c for pair in pairs[1:] for c in pair]
        h = _add(head, _indicator(minus, n, -1))
        cols = [h]
        for j in range(len(pairs) - 1):
            cols.append(_add(_indicator(pairs[j], n), _indicator(pairs[j + 1], n, -1)))
        cols.extend(_diff(a, n) for a, _ in pairs)
        return cols
    pairs = [(p + 2 * j + 1, p + 2 * j + 2) for j in range((p + 1) // 2)]
    minus = [c for pair in pairs[1:] for c in pair] + [q]
    h = _add(head, _indicator(minus, n, -1))
    cols = [h]
    for j in range(len(pairs) - 1):
        cols.append(_add(_indicator(pairs[j], n), _indicator(pairs[j + 1], n, -1)))
    cols.append(_diff(q - 1, n))
    cols.extend(_diff(a, n) for a, _ in reversed(pairs))
    return cols


def path_ordered_columns(g: ThresholdGraph) -> list[list[int]] | None:
    """Whole-matrix column layout: runs in index order, kernel last."""
    n = g.n
    cols: list[list[int]] = []
    for _, p, q in eigenvalue_groups(g):
        part = group_path_columns(p, q, n)
        if part is None:
            return None
        cols.extend(part)
    cols.append([1] * n)
    return cols


# ---------------------------------------------------------------------------
# Join recursion
# ---------------------------------------------------------------------------


def join_step(cert: WHDCertificate, clique: int) -> WHDCertificate:
    """Certificate for (graph of cert) joined with a clique of given size.

    The clique may exceed the current order by at most 2, otherwise the
    glue vector needs an entry outside {-1,0,1}.  Columns keep the proof
    order: old non-kernel columns zero-padded, twin differences of the new
    clique, the glue vector, then the kernel; the result is re-verified
    before being returned.
    """
    h = ThresholdGraph.parse(cert.sequence)
    k = h.n
    if clique - k not in (0, 1, 2):
        raise JoinGapError(f"clique size {clique} exceeds current order {k} by more than 2")
    if cert.eigenvalues[-1] != 0 or any(x != 1 for x in cert.columns[-1]):
        raise VerifyFailedError("certificate must keep the kernel column last")
    g = ThresholdGraph.parse(cert.sequence + "1" * clique)
    total = k + clique
    pad = (0,) * clique
    columns: list[Column] = [col + pad for col in cert.columns[:-1]]
    for i in range(k + 1, total):
        v = [0] * total
        v[i - 1] = 1
        v[i] = -1
        columns.append(tuple(v))
    glue = (1,) * k + (-1,) * (clique - 1) + (clique - k - 1,)
    columns.append(glue)
    columns.append((1,) * total)
    provenance = cert.provenance + (f"join:K{clique}",)
    new = certify(g, columns, provenance)
    expected = [lam + clique for lam in cert.eigenvalues[:-1]]
    expected += [total] * clique + [0]
    if list(new.eigenvalues) != expected:
        raise VerifyFailedError(
            f"join eigenvalues {new.eigenvalues} differ from shifted spectrum {expected}"
        )
    return new


def _gap_digits(m: int, l: int) -> list[int]:
    """Write m = sum d_j 2^(l-j) with digits in {0,1,2} (m <= 2(2^l - 1))."""
    digits = []
    for j in range(1, l + 1):
        w = 1 << (l - j)
        d = min(2, m // w)
        digits.append(d)
        m -= d * w
    if m != 0:
        raise ValueError("gap not representable")
    return digits


def _clique_chain(cert: WHDCertificate, total: int, l: int, m: int) -> WHDCertificate:
    """Join a clique of ``total`` vertices as l nested joins with gap digits of m."""
    for d in _gap_digits(m, l):
        size = len(cert.columns)
        cert = join_step(cert, size + d)
        total -= size + d
    if total != 0:
        raise VerifyFailedError("join chain did not consume the whole clique")
    return cert


def _construct_join_recursion(g: ThresholdGraph, witness: JoinDecomposition) -> WHDCertificate:
    s = [sb for sb, _ in g.blocks]
    t = [tb for _, tb in g.blocks]

    if witness.base_params is None:
        base = ThresholdGraph.from_blocks([(s[0], t[0])])
        cert = _layout_certificate(base, ("base:two-class",))
    else:
        l, m = witness.base_params
        digits = _gap_digits(m, l)
        base = ThresholdGraph.from_blocks([(s[0], s[0] + digits[0])])
        cert = _layout_certificate(base, (f"base:two-class(l={l},m={m})",))
        size = base.n
        for d in digits[1:]:
            cert = join_step(cert, size + d)
            size += size + d
        if size != s[0] + t[0]:
            raise VerifyFailedError("head-block join chain came out the wrong size")

    for k in range(2, g.r + 1):
        l, m = witness.step_params[k - 2]
        cert = _clique_chain(cert, s[k - 1], l, m)
        cert = _clique_chain(cert, t[k - 1], l, m)

    built = ThresholdGraph.parse(cert.sequence)
    if built.n != g.n or built.sequence != "0" * s[0] + "1" * (g.n - s[0]):
        raise VerifyFailedError("join recursion built the wrong graph")
    # Shared eigenbasis: the same columns diagonalize the original graph.
    return certify(g, cert.columns, cert.provenance + (f"reanchored:{g.sequence}",))


def _layout_certificate(g: ThresholdGraph, provenance) -> WHDCertificate:
    cols = path_ordered_columns(g)
    if cols is None:
        raise VerifyFailedError(f"no column pattern for {g.sequence}")
    return certify(g, cols, provenance + ("layout",))


# ---------------------------------------------------------------------------
# Bounded search
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    """Outcome of the backtracking search.

    status "found" carries a verified certificate; "exhausted" means the
    whole ordered space was explored without finding one (a genuine
    negative for the {-1,0,1} column model); "budget" means the node limit
    was hit and the question stays open.
    """

    status: str
    certificate: WHDCertificate | None = None
    nodes: int = 0


def _group_pool(g: ThresholdGraph, p: int, q: int) -> list[tuple[int, ...]]:
    """All sign-canonical {-1,0,1} eigenvectors for the run p..q-1.

    Vectors are constant on 1..p, supported on 1..q and orthogonal to the
    all-ones vector; every emitted vector is exactness-checked against the
    Laplacian by the caller via the run's eigenvalue tag.
    """
    n, size = g.n, q - p
    if size > POOL_ENUMERATION_CAP:
        raise TooLargeError(f"pool enumeration for run width {size} is out of budget")
    tails = np.stack(
        [(np.arange(3**size) // 3**k) % 3 - 1 for k in range(size - 1, -1, -1)], axis=1
    ).astype(np.int8)
    sums = tails.sum(axis=1)
    pool: list[tuple[int, ...]] = []
    for c in (0, 1):
        want = -c * p
        for tail in tails[sums == want]:
            if c == 0:
                nz = tail[tail != 0]
                if nz.size == 0 or nz[0] != 1:
                    continue  # zero vector, or sign-flip duplicate
            vec = (c,) * p + tuple(int(x) for x in tail) + (0,) * (n - q)
            pool.append(vec)
    return pool


def _search_group(pool: list[tuple[int, ...]], size: int, budget: list[int]):
    """Ordered selection of ``size`` pool vectors with path-shaped overlaps.

    Backtracking: a candidate may overlap only the immediately preceding
    choice, and must enlarge the span.  Deterministic order: sparsest
    vectors first.  Returns the chosen list or None when exhausted; raises
    when the shared node budget runs out.
    """
    order = sorted(range(len(pool)), key=lambda i: (sum(x != 0 for x in pool[i]), pool[i]))
    vectors = [pool[i] for i in order]
    arr = np.array(vectors, dtype=np.int64)
    m = len(vectors)

    masks: list[np.ndarray] = []  # masks[d] = rows orthogonal to choice d
    chosen: list[int] = []
    trackers = [RankTracker()]

    def extend() -> bool:
        if len(chosen) == size:
            return True
        allowed = np.ones(m, dtype=bool)
        for mask in masks[:-1]:
            allowed &= mask
        for i in range(m):
            if not allowed[i]:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceededError("search budget exhausted")
            tracker = trackers[-1]
            if tracker.contains(vectors[i]):
                continue
            new_tracker = tracker.copy()
            new_tracker.add(vectors[i])
            chosen.append(i)
            trackers.append(new_tracker)
            masks.append(arr @ np.array(vectors[i], dtype=np.int64) == 0)
            if extend():
                return True
            chosen.pop()
            trackers.pop()
            masks.pop()
        return False

    if extend():
        return [vectors[i] for i in chosen]
    return None


def whd_search(g: ThresholdGraph, budget: int = DEFAULT_SEARCH_BUDGET) -> SearchResult:
    """Backtracking search for a weak Hadamard diagonalizer.

    Requires a simply structured input (a {-1,0,1} eigenbasis is necessary
    for WHD).  Runs are searched independently, which is complete: columns
    from different runs are always orthogonal, so any valid matrix can be
    reordered run-contiguously.
    """
    verdict = is_simply_structured(g)
    if not verdict:
        raise NotSimplyStructuredError(
            f"{g.sequence} is not simply structured: {verdict.detail}"
        )
    lap_t = g.laplacian_array().T.astype(np.float64)
    shared_budget = [budget]
    nodes_before = budget
    groups = sorted(eigenvalue_groups(g), key=lambda r: r[2] - r[1])
    placed: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    try:
        for mu, p, q in groups:
            candidates = _group_pool(g, p, q)
            if not candidates:
                return SearchResult(status="exhausted", nodes=nodes_before - shared_budget[0])
            arr = np.array(candidates, dtype=np.float64)
            keep = (arr @ lap_t == mu * arr).all(axis=1)
            pool = [vec for vec, good in zip(candidates, keep) if good]
            found = _search_group(pool, q - p, shared_budget)
            if found is None:
                return SearchResult(status="exhausted", nodes=nodes_before - shared_budget[0])
            placed[(p, q)] = found
    except BudgetExceededError:
        return SearchResult(status="budget", nodes=budget)
    columns: list[tuple[int, ...]] = []
    for _, p, q in eigenvalue_groups(g):
        columns.extend(placed[(p, q)])
    columns.append((1,) * g.n)
    cert = certify(g, columns, (f"search(nodes={nodes_before - shared_budget[0]})",))
    return SearchResult(
        status="found", certificate=cert, nodes=nodes_before - shared_budget[0]
    )


# ---------------------------------------------------------------------------
# Top-level construction
# ---------------------------------------------------------------------------


def whd_construct(
    g: ThresholdGraph,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    attempts: list[str] | None = None,
) -> WHDCertificate | None:
    """Best-effort verified certificate for g, or None.

    Tries, in order: the join recursion when the sufficiency witness
    provides one, the direct run-by-run column layout, and finally the
    bounded search (only when some sufficiency route matched, so that the
    search effort is spent where a certificate is promised).  None means
    no verified certificate was produced, never "not WHD".
    """
    trace = attempts if attempts is not None else []
    witness = whd_sufficient(g)
    if witness is not None and witness.route == "join-recursion":
        try:
            return _construct_join_recursion(g, witness)
        except (VerifyFailedError, JoinGapError, TooLargeError) as exc:
            trace.append(f"join-recursion failed: {exc}")
    if is_simply_structured(g):
        cols = path_ordered_columns(g)
        if cols is not None:
            try:
                return certify(g, cols, ("direct-layout",))
            except VerifyFailedError as exc:
                trace.append(f"direct layout failed: {exc}")
        else:
            trace.append("direct layout: no pattern for some run")
    if witness is not None and search_budget > 0:
        try:
            result = whd_search(g, budget=search_budget)
        except (NotSimplyStructuredError, TooLargeError) as exc:
            trace.append(f"search unavailable: {exc}")
            return None
        if result.status == "found":
            return result.certificate
        trace.append(f"search {result.status} after {result.nodes} nodes")
    return None
