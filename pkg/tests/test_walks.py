import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import all_graphs
from thresholdlab.errors import FixedStateError
from thresholdlab.graphs import ThresholdGraph
from thresholdlab.walks import (
    PureState,
    anchored_pair_b_values,
    fidelity,
    is_fixed,
    nu2,
    pair_pst,
    strong_cospectral,
    support,
    threshold_pst_pairs,
    vertex_pst,
    walk_operator,
)


class TestNu2:
    @pytest.mark.parametrize("m,expected", [(12, 2), (8, 3), (1, 0), (-4, 2), (6, 1)])
    def test_values(self, m, expected):
        assert nu2(m) == expected

    def test_zero_is_infinite(self):
        assert nu2(0) == math.inf
        assert nu2(0) > nu2(10**9)


class TestSupport:
    def test_twin_pair_is_fixed(self, k4):
        assert support(k4, PureState.pair(1, 2)) == frozenset({4})
        assert is_fixed(k4, PureState.pair(1, 2))

    def test_pair_support(self, k4_minus_e):
        assert support(k4_minus_e, PureState.pair(1, 3)) == frozenset({4, 2})

    def test_vertex_support_contains_kernel(self, k4_minus_e):
        assert support(k4_minus_e, PureState.vertex(1)) == frozenset({4, 2, 0})

    def test_pair_support_never_contains_kernel(self):
        for g in all_graphs(2, 7):
            for b in range(2, g.n + 1):
                assert 0 not in support(g, PureState.pair(1, b))

    def test_support_matches_float_norms(self):
        from thresholdlab.walks import _float_projections

        for g in all_graphs(2, 7):
            for state in [PureState.vertex(1), PureState.pair(1, g.n)]:
                exact = support(g, state)
                rep = np.array(state.representative(g.n), dtype=np.float64)
                numeric = {
                    mu
                    for mu, mat in _float_projections(g).items()
                    if np.linalg.norm(mat @ rep) > 1e-9
                }
                assert exact == numeric


class TestStrongCospectral:
    def test_snug_pair(self, k4_minus_e):
        res = strong_cospectral(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 3))
        assert res.cospectral
        assert res.partition.plus == frozenset({4})
        assert res.partition.minus == frozenset({2})

    def test_different_anchors_fail(self, k4_minus_e):
        res = strong_cospectral(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 4))
        assert not res.cospectral and res.witness is not None

    def test_wide_head_fails(self):
        star = ThresholdGraph.parse("0001")
        res = strong_cospectral(star, PureState.pair(1, 4), PureState.pair(2, 4))
        assert not res.cospectral

    def test_fast_path_runs_exhaustively(self):
        # the closed form and the projection comparison are asserted equal
        # inside strong_cospectral; sweeping it is the regression test
        for g in all_graphs(3, 8):
            for b in range(3, g.n + 1):
                strong_cospectral(g, PureState.pair(1, b), PureState.pair(2, b))

    def test_linear_dependence_rejected(self, k4_minus_e):
        with pytest.raises(ValueError):
            strong_cospectral(k4_minus_e, PureState.pair(1, 3), PureState.pair(1, 3))


class TestPairPST:
    def test_snug_join(self, k4_minus_e):
        res = pair_pst(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 3))
        assert res.verdict == "pst"
        assert res.tau == Fraction(1, 2) and res.gcd_gap == 2
        assert res.fidelity >= 1 - 1e-9

    def test_restricted_support_instance(self):
        g = ThresholdGraph.parse("01001111")
        res = pair_pst(g, PureState.pair(1, 3), PureState.pair(2, 3))
        assert res.verdict == "pst" and res.tau == Fraction(1, 2)
        # indices at or above b are constant across coordinates 1..b, so the
        # top eigenvalue is projected out of this pair's support
        assert res.support == frozenset({6, 4})
        assert res.minus == frozenset({6})

    def test_two_eigenvalue_support_shortcut(self):
        g = ThresholdGraph.parse("00111")
        res = pair_pst(g, PureState.pair(1, 3), PureState.pair(2, 3))
        assert res.verdict == "pst"
        assert res.support == frozenset({5, 3})

    def test_fixed_state_rejected(self, k4):
        with pytest.raises(FixedStateError):
            pair_pst(k4, PureState.pair(1, 2), PureState.pair(3, 4))

    def test_no_pst_reason_cites_witness(self, k4_minus_e):
        res = pair_pst(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 4))
        assert res.verdict == "no-pst" and "cospectral" in res.reason

    def test_json_shape(self, k4_minus_e):
        res = pair_pst(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 3))
        data = res.to_json_dict()
        assert data["tau"] == {"num": 1, "den": 2, "times_pi": True}
        assert data["g"] == 2 and data["verdict"] == "pst"


class TestClosedForms:
    def test_complete_graph_has_none(self, k4):
        assert threshold_pst_pairs(k4) == []

    def test_eight_vertex_family(self):
        g = ThresholdGraph.parse("01001111")
        results = threshold_pst_pairs(g)
        assert [r.v.b for r in results] == list(range(3, 9))
        assert all(r.tau == Fraction(1, 2) for r in results)

    def test_twelve_vertex_family(self):
        g = ThresholdGraph.parse("010011111111")
        results = threshold_pst_pairs(g)
        assert [r.v.b for r in results] == list(range(3, 13))

    def test_restricted_support_prefix(self):
        # the top eigenvalue drops out of the support for b below the last
        # clique block, which admits transfers the full-support congruences
        # miss; the admitted b always form a prefix
        g = ThresholdGraph.parse("0101")
        assert anchored_pair_b_values(g) == [3]
        res = pair_pst(g, PureState.pair(1, 3), PureState.pair(2, 3))
        assert res.verdict == "pst" and res.tau == Fraction(1, 2)
        assert pair_pst(g, PureState.pair(1, 4), PureState.pair(2, 4)).verdict == "no-pst"

    def test_trailing_clique_block_unconstrained(self):
        # full-support transfer does not constrain the size of the last
        # clique block; only the kernel (vertex case) brings that in
        g = ThresholdGraph.parse("010011")  # last clique block of size 2
        assert anchored_pair_b_values(g) == [3, 4, 5, 6]
        assert not vertex_pst(g).present

    def test_exhaustive_agreement_small(self):
        # closed-form per-b condition == generic machinery for every pair
        for g in all_graphs(3, 7):
            admitted = set(anchored_pair_b_values(g))
            for b in range(3, g.n + 1):
                u, v = PureState.pair(1, b), PureState.pair(2, b)
                try:
                    verdict = pair_pst(g, u, v).verdict
                except FixedStateError:
                    verdict = "fixed"
                assert (verdict == "pst") == (b in admitted), (g.sequence, b)


class TestVertexPST:
    def test_absent_when_clique_size_misses_residue(self):
        res = vertex_pst(ThresholdGraph.parse("001111"))
        assert not res.present and "mod 4" in res.reason

    def test_snug_join(self, k4_minus_e):
        res = vertex_pst(k4_minus_e)
        assert res.present and res.tau == Fraction(1, 2)
        assert res.fidelity >= 1 - 1e-9

    def test_deep_form_periodicity(self):
        res = vertex_pst(ThresholdGraph.parse("01001111"))
        assert res.present
        assert res.periodic_vertices == (3, 4, 5, 6, 7, 8)

    def test_pair_without_vertex(self):
        g = ThresholdGraph.parse("0011111")  # clique block of 5
        assert threshold_pst_pairs(g)
        assert not vertex_pst(g).present

    def test_two_vertex_graph_has_vertex_transfer(self):
        # the 2-vertex complete graph swaps its endpoints at pi/2
        res = vertex_pst(ThresholdGraph.parse("01"))
        assert res.present and res.fidelity >= 1 - 1e-9

    def test_absences_confirmed_numerically(self):
        import math

        for t1 in (3, 4, 5, 7):
            g = ThresholdGraph.from_blocks([(2, t1)])
            assert not vertex_pst(g).present
            f = fidelity(g, PureState.vertex(1), PureState.vertex(2), math.pi / 2)
            assert f < 1 - 1e-6


class TestWalkOperator:
    def test_identity_at_zero(self, k4_minus_e):
        assert np.allclose(walk_operator(k4_minus_e, 0.0), np.eye(4))
        assert fidelity(k4_minus_e, PureState.pair(1, 3), PureState.pair(1, 3), 0.0) == pytest.approx(1.0)

    def test_transfer_fidelities(self, k4_minus_e):
        u, v = PureState.pair(1, 3), PureState.pair(2, 3)
        assert fidelity(k4_minus_e, u, v, math.pi / 2) >= 1 - 1e-9
        assert fidelity(k4_minus_e, PureState.vertex(1), PureState.vertex(2), math.pi / 2) >= 1 - 1e-9

    def test_minimality_at_half_time(self, k4_minus_e):
        u, v = PureState.pair(1, 3), PureState.pair(2, 3)
        assert fidelity(k4_minus_e, u, v, math.pi / 4) < 1 - 1e-6

    def test_symmetry(self, k4_minus_e):
        u, v = PureState.pair(1, 3), PureState.pair(2, 3)
        t = 0.7357
        assert fidelity(k4_minus_e, u, v, t) == pytest.approx(fidelity(k4_minus_e, v, u, t))

    def test_phase_matches_numeric(self, k4_minus_e):
        res = pair_pst(k4_minus_e, PureState.pair(1, 3), PureState.pair(2, 3))
        op = walk_operator(k4_minus_e, math.pi / 2)
        amp = np.vdot(
            PureState.pair(2, 3).unit(4), op @ PureState.pair(1, 3).unit(4)
        )
        predicted = np.exp(1j * math.pi * float(res.phase_exponent))
        assert abs(amp - predicted) < 1e-9

    def test_unitarity_random_times(self, k4_minus_e):
        for t in [0.1, 1.3, 2.9, 10.7]:
            op = walk_operator(k4_minus_e, t)
            assert np.abs(op @ op.conj().T - np.eye(4)).max() < 1e-9
