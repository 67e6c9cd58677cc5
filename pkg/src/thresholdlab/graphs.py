"""Connected threshold graphs from binary creation sequences.

A graph on vertices 1..n is built by scanning a 0/1 word: bit 0 adds an
isolated vertex, bit 1 adds a vertex adjacent to everything created before
it.  The first bit is always 0 (vertex 1 has nothing to attach to) and the
word must end in 1 for the graph to be connected.  Vertices keep their
creation labels forever; all index arithmetic downstream relies on that.

The run-length form 0^{s_1} 1^{t_1} ... 0^{s_r} 1^{t_r} is the canonical
internal representation, the plain bit string the canonical external one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSequenceError

Block = tuple[int, int]


@dataclass(frozen=True)
class ThresholdGraph:
    """Immutable connected threshold graph.

    ``bits`` is the creation sequence (bits[0] is vertex 1), ``blocks`` its
    run-length pairs (s_i, t_i).  Instances are only built through the
    classmethods, which validate both invariants.
    """

    bits: tuple[int, ...]
    blocks: tuple[Block, ...]

    # -- construction -----------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "ThresholdGraph":
        if len(text) < 2:
            raise InvalidSequenceError("E_BAD_CHAR", f"need at least 2 bits, got {text!r}")
        if any(c not in "01" for c in text):
            raise InvalidSequenceError("E_BAD_CHAR", f"sequence must be over 0/1, got {text!r}")
        bits = tuple(int(c) for c in text)
        if bits[0] != 0:
            raise InvalidSequenceError("E_FIRST_BIT", "creation sequence must start with 0")
        if bits[-1] != 1:
            raise InvalidSequenceError(
                "E_DISCONNECTED", "sequence ends in 0: graph is disconnected"
            )
        return cls(bits=bits, blocks=_run_blocks(bits))

    @classmethod
    def from_blocks(cls, blocks) -> "ThresholdGraph":
        blocks = tuple((int(s), int(t)) for s, t in blocks)
        if not blocks or any(s < 1 or t < 1 for s, t in blocks):
            raise InvalidSequenceError("E_BAD_CHAR", f"all block counts must be >= 1: {blocks}")
        bits = []
        for s, t in blocks:
            bits.extend([0] * s)
            bits.extend([1] * t)
        return cls(bits=tuple(bits), blocks=blocks)

    @classmethod
    def from_block_text(cls, text: str) -> "ThresholdGraph":
        """Parse the whitespace-separated caret form, e.g. ``"0^2 1^3"``."""
        runs = []
        for token in text.split():
            m = re.fullmatch(r"([01])(?:\^(\d+))?", token)
            if m is None:
                raise InvalidSequenceError("E_BAD_CHAR", f"bad block token {token!r}")
            runs.append((int(m.group(1)), int(m.group(2) or 1)))
        bits = []
        for value, count in runs:
            bits.extend([value] * count)
        return cls.parse("".join(map(str, bits)))

    # -- basic data -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def sequence(self) -> str:
        return "".join(map(str, self.bits))

    def block_text(self) -> str:
        return " ".join(f"0^{s} 1^{t}" for s, t in self.blocks)

    @property
    def trace(self) -> int:
        """Number of dominating vertices (1-bits)."""
        return sum(self.bits)

    def degree(self, v: int) -> int:
        """Degree of vertex v (1-based, creation order)."""
        b = self.bits
        later = sum(b[v:])
        return (v - 1 if b[v - 1] else 0) + later

    def degrees(self) -> tuple[int, ...]:
        """Degrees indexed by creation order (entry i is vertex i+1)."""
        later = 0
        out = [0] * self.n
        for v in range(self.n, 0, -1):
            out[v - 1] = (v - 1 if self.bits[v - 1] else 0) + later
            later += self.bits[v - 1]
        return tuple(out)

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return False
        lo, hi = min(u, v), max(u, v)
        return self.bits[hi - 1] == 1

    def edges(self):
        for v in range(2, self.n + 1):
            if self.bits[v - 1]:
                for u in range(1, v):
                    yield (u, v)

    # -- matrices ---------------------------------------------------------

    def laplacian(self) -> list[list[int]]:
        """Exact integer Laplacian D - A in creation order."""
        n = self.n
        deg = self.degrees()
        lap = [[0] * n for _ in range(n)]
        for i in range(n):
            lap[i][i] = deg[i]
        for u, v in self.edges():
            lap[u - 1][v - 1] = -1
            lap[v - 1][u - 1] = -1
        return lap

    def laplacian_array(self) -> np.ndarray:
        return np.array(self.laplacian(), dtype=np.int64)

    # -- renderings -------------------------------------------------------

    def join_expression(self) -> str:
        """Nested join/union form of the graph.

        With a single leading 0 the first factor is the complete graph on
        t_1 + 1 vertices; with s_1 >= 2 it is the join of an empty graph and
        a clique.  Every later block pair appends ``(expr ⊔ Ks^c) ∨ Kt``.
        """
        (s1, t1), rest = self.blocks[0], self.blocks[1:]
        expr = f"K{t1 + 1}" if s1 == 1 else f"K{s1}^c ∨ K{t1}"
        for s, t in rest:
            expr = f"({expr} ⊔ K{s}^c) ∨ K{t}"
        return expr

    def to_dot(self) -> str:
        lines = ["graph threshold {"]
        for v in range(1, self.n + 1):
            lines.append(f"  {v};")
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.sequence


def _run_blocks(bits: tuple[int, ...]) -> tuple[Block, ...]:
    runs: list[list[int]] = []
    for b in bits:
        if runs and runs[-1][0] == b:
            runs[-1][1] += 1
        else:
            runs.append([b, 1])
    # bits start with 0 and end with 1, so runs alternate 0,1,0,1,...
    return tuple((runs[i][1], runs[i + 1][1]) for i in range(0, len(runs), 2))


def parse_sequence(text: str) -> ThresholdGraph:
    return ThresholdGraph.parse(text)


def degree_data(g: ThresholdGraph) -> tuple[tuple[int, ...], int]:
    """Degrees sorted descending, plus the trace (count of 1-bits)."""
    return tuple(sorted(g.degrees(), reverse=True)), g.trace


_JOIN_FACTOR = re.compile(r"K(\d+)(\^c)?")


def parse_join_expression(text: str) -> ThresholdGraph:
    """Invert ``join_expression`` back to the block form.

    Accepts exactly the rendered shape: an innermost ``Kt`` or
    ``Ks^c ∨ Kt``, wrapped zero or more times in ``(... ⊔ Ks^c) ∨ Kt``.
    """
    work = text.strip()
    tail: list[Block] = []
    while work.startswith("("):
        m = re.fullmatch(r"\((.*) ⊔ K(\d+)\^c\) ∨ K(\d+)", work, flags=re.DOTALL)
        if m is None:
            raise InvalidSequenceError("E_BAD_CHAR", f"unparseable join expression {text!r}")
        work = m.group(1).strip()
        tail.append((int(m.group(2)), int(m.group(3))))
    m = re.fullmatch(r"K(\d+)\^c ∨ K(\d+)", work)
    if m is not None:
        head: Block = (int(m.group(1)), int(m.group(2)))
    else:
        m = re.fullmatch(r"K(\d+)", work)
        if m is None or int(m.group(1)) < 2:
            raise InvalidSequenceError("E_BAD_CHAR", f"unparseable join expression {text!r}")
        head = (1, int(m.group(1)) - 1)
    return ThresholdGraph.from_blocks([head] + tail[::-1])
