#!/usr/bin/env python3
"""Survey pair/vertex state transfer over all connected threshold graphs.

For each order, counts graphs admitting anchored-pair transfer, vertex
transfer, and the pairs the full-support congruence form would miss
(restricted-support transfers), cross-checking every positive verdict
against the numeric fidelity oracle.

Usage:
    python scripts/transfer_survey.py [--n-max 8]
"""

import argparse
import math

from thresholdlab.catalogue import enumerate_graphs
from thresholdlab.walks import (
    PureState,
    anchored_pair_b_values,
    fidelity,
    vertex_pst,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=8)
    args = parser.parse_args()

    print("  n  graphs  pair-admitting  vertex-admitting  restricted-only-pairs")
    for n in range(3, args.n_max + 1):
        graphs = pair_count = vertex_count = restricted = 0
        for g in enumerate_graphs(n):
            graphs += 1
            admitted = anchored_pair_b_values(g)
            if admitted:
                pair_count += 1
                for b in admitted:
                    f = fidelity(g, PureState.pair(1, b), PureState.pair(2, b), math.pi / 2)
                    assert f >= 1 - 1e-9, (g.sequence, b, f)
                if len(admitted) < n - 2:
                    restricted += 1
            if vertex_pst(g).present:
                vertex_count += 1
        print(
            f"{n:3d}  {graphs:6d}  {pair_count:14d}  {vertex_count:16d}  {restricted:21d}"
        )


if __name__ == "__main__":
    main()
