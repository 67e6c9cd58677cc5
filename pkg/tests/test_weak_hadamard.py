import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_graphs
from thresholdlab.errors import JoinGapError, NotSimplyStructuredError, VerifyFailedError
from thresholdlab.graphs import ThresholdGraph
from thresholdlab.structured import is_simply_structured, ss_eigenbasis
from thresholdlab.weak_hadamard import (
    JoinDecomposition,
    certificate_from_json,
    certify,
    diagonalizes,
    group_path_columns,
    is_weak_hadamard,
    join_step,
    path_ordered_columns,
    whd_construct,
    whd_search,
    whd_sufficient,
)


class TestIsWeakHadamard:
    def test_twin_chain_plus_kernel(self):
        cols = [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (1, 1, 1, 1)]
        assert is_weak_hadamard(cols).ok

    def test_entry_range(self):
        verdict = is_weak_hadamard([(2, 0), (0, 1)])
        assert not verdict.ok and "outside" in verdict.violation

    def test_identity(self):
        assert is_weak_hadamard([(1, 0, 0), (0, 1, 0), (0, 0, 1)]).ok

    def test_non_tridiagonal(self):
        cols = [(1, 0, 0), (0, 1, 0), (1, 0, 1)]  # columns 0 and 2 overlap
        verdict = is_weak_hadamard(cols)
        assert not verdict.ok and "tridiagonal" in verdict.violation

    def test_singular(self):
        verdict = is_weak_hadamard([(1, 0), (1, 0)])
        assert not verdict.ok and "singular" in verdict.violation


class TestDiagonalizes:
    def test_shared_basis_across_graphs(self, k4, k4_minus_e):
        w = [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (1, 1, 1, 1)]
        ok, lams = diagonalizes(w, k4)
        assert ok and lams == [4, 4, 4, 0]
        ok, lams = diagonalizes(w, k4_minus_e)
        assert not ok  # e2 - e3 is not an eigenvector once the edge 12 is gone

    def test_ss_basis_diagonalizes(self, k4_minus_e):
        w = [vec for _, vec in ss_eigenbasis(k4_minus_e).vectors]
        ok, lams = diagonalizes(w, k4_minus_e)
        assert ok and lams == [2, 4, 4, 0]

    def test_identity_fails(self, k4_minus_e):
        ok, witness = diagonalizes([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], k4_minus_e)
        assert not ok


class TestSufficient:
    def test_two_class_snug(self, k4_minus_e):
        w = whd_sufficient(k4_minus_e)
        assert w is not None and w.route == "join-recursion" and w.base_params is None

    def test_remark_instance(self):
        w = whd_sufficient(ThresholdGraph.parse("000111111111"))
        assert w == JoinDecomposition(route="join-recursion", base_params=(2, 0))

    def test_plus_edge_instance(self):
        w = whd_sufficient(ThresholdGraph.parse("0100000011111111"))
        assert w is not None and w.route == "plus-edge"

    def test_uncovered_graph(self):
        # gap 3 between the classes defeats every route
        assert whd_sufficient(ThresholdGraph.parse("000111111")) is None

    def test_not_ss_not_covered(self):
        assert whd_sufficient(ThresholdGraph.parse("0101")) is None


class TestJoinStep:
    def test_join_to_complete(self):
        k2 = ThresholdGraph.parse("01")
        base = certify(k2, [(1, -1), (1, 1)], ("base",))
        cert = join_step(base, 2)
        assert cert.sequence == "0111"
        assert sorted(cert.eigenvalues) == [0, 4, 4, 4]

    def test_remark_join(self):
        base_graph = ThresholdGraph.parse("000111")
        base = certify(base_graph, path_ordered_columns(base_graph), ("base",))
        cert = join_step(base, 6)
        assert cert.sequence == "000111111111"
        # 6 fresh columns at 12, plus the base's top eigenvalue 6 shifted to 12
        assert cert.eigenvalues.count(12) == 9
        assert cert.eigenvalues[5:11] == (12,) * 6  # the newly added columns
        assert cert.eigenvalues.count(0) == 1

    def test_gap_too_wide(self):
        k2 = ThresholdGraph.parse("01")
        base = certify(k2, [(1, -1), (1, 1)], ("base",))
        with pytest.raises(JoinGapError):
            join_step(base, 5)

    @given(st.integers(2, 7), st.integers(0, 2))
    @settings(max_examples=30, deadline=None)
    def test_dimension_and_multiplicity(self, k, gap):
        g = ThresholdGraph.parse("0" + "1" * (k - 1))
        base = certify(g, path_ordered_columns(g), ("base",))
        clique = k + gap
        cert = join_step(base, clique)
        assert cert.n == k + clique
        # the clique new columns carry k+clique; the base's own top
        # eigenvalue k shifts onto the same value
        assert cert.eigenvalues[k - 1 : k + clique - 1] == (k + clique,) * clique
        assert cert.eigenvalues.count(k + clique) == clique + (k - 1)
        assert cert.eigenvalues.count(0) == 1


class TestConstruct:
    def test_two_class_snug(self, k4_minus_e):
        cert = whd_construct(k4_minus_e)
        assert sorted(cert.eigenvalues) == [0, 2, 4, 4]

    def test_remark_instance(self):
        cert = whd_construct(ThresholdGraph.parse("000111111111"))
        assert cert is not None and cert.n == 12

    def test_not_ss_returns_none(self):
        assert whd_construct(ThresholdGraph.parse("0101")) is None

    def test_named_acceptance_graphs(self):
        for text in ["0011", "000111", "000111111111", "0100000011111111"]:
            assert whd_construct(ThresholdGraph.parse(text)) is not None, text

    def test_sufficiency_soundness_to_12(self):
        for g in all_graphs(2, 12):
            if whd_sufficient(g) is not None:
                assert whd_construct(g) is not None, g.sequence

    def test_certificate_json_round_trip(self, k4_minus_e):
        cert = whd_construct(k4_minus_e)
        loaded = certificate_from_json(cert.to_json())
        assert loaded.columns == cert.columns
        assert loaded.eigenvalues == cert.eigenvalues

    def test_tampered_json_rejected(self, k4_minus_e):
        cert = whd_construct(k4_minus_e)
        text = cert.to_json().replace("[1, -1, 0, 0]", "[1, 1, 0, 0]")
        if text != cert.to_json():
            with pytest.raises(VerifyFailedError):
                certificate_from_json(text)


class TestGroupPatterns:
    @pytest.mark.parametrize(
        "blocks",
        [((2, t),) for t in range(2, 13)]
        + [((p, p + 2),) for p in range(2, 7)]
        + [((1, 1), (2, 4)), ((1, 1), (4, 6)), ((1, 1), (6, 8)), ((2, 2), (4, 8)), ((1, 2), (4, 8))],
    )
    def test_layout_certifies(self, blocks):
        g = ThresholdGraph.from_blocks(blocks)
        cols = path_ordered_columns(g)
        assert cols is not None, blocks
        cert = certify(g, cols, ("layout",))
        assert cert.n == g.n

    def test_leading_run_is_chain(self):
        cols = group_path_columns(1, 4, 6)
        assert cols == [[1, -1, 0, 0, 0, 0], [0, 1, -1, 0, 0, 0], [0, 0, 1, -1, 0, 0]]

    def test_no_pattern_for_wide_interior_run(self):
        # p=3 with q far beyond 2p+2 has no closed pattern; search covers it
        assert group_path_columns(3, 12, 12) is None


class TestSearch:
    def test_finds_small_certificates(self):
        for text in ["0011", "0111", "001111", "00011111"]:
            result = whd_search(ThresholdGraph.parse(text), budget=100_000)
            assert result.status == "found", text
            assert result.certificate is not None

    def test_precondition(self):
        with pytest.raises(NotSimplyStructuredError):
            whd_search(ThresholdGraph.parse("0101"))

    def test_budget_exhaustion_reported(self):
        result = whd_search(ThresholdGraph.parse("001111"), budget=1)
        assert result.status == "budget"

    def test_agrees_with_construct_small(self):
        # wherever construction certifies, search must certify too
        for g in all_graphs(2, 8):
            if not is_simply_structured(g):
                continue
            cert = whd_construct(g)
            result = whd_search(g, budget=300_000)
            if cert is not None:
                assert result.status == "found", g.sequence
