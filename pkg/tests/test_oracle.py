import pytest

from hfactor.checker import check_h_realizable
from hfactor.core import (ContractViolation, DegreeSequence, FactorShape,
                          LabelledGraph, verify_realization)
from hfactor.oracle import (CapExceeded, RetryBudgetExceeded,
                            count_realizations, decide_exists,
                            enumerate_realizations, enumeration_cap,
                            first_k_counting_holds, gen_sequence,
                            residual_graph, sorted_sequences, sweep_cells,
                            sweep_equivalence)

from conftest import subset_histogram


@pytest.mark.parametrize("degs,h,count", [
    ((2, 2, 2, 2), 1, 2),
    ((1, 1, 1, 1), 1, 1),
    ((2, 2, 1, 1), 1, 0),
    ((3, 3, 3, 3), 1, 1),
    ((4, 4, 4, 4, 4, 4), 2, 6),
    ((3, 3, 3, 3, 3, 3), 1, 20),
    ((3, 1, 1, 1), 0, 1),
])
def test_counts(degs, h, count):
    # counts frozen from a plain subset enumeration (see test below)
    assert count_realizations(DegreeSequence(degs, h)) == count
    assert decide_exists(DegreeSequence(degs, h)) == (count > 0)


def test_two_four_cycles_through_matching():
    graphs = list(enumerate_realizations(DegreeSequence([2, 2, 2, 2], 1)))
    assert [g.edges() for g in graphs] == [
        [(1, 2), (1, 3), (2, 4), (3, 4)],
        [(1, 2), (1, 4), (2, 3), (3, 4)],
    ]


@pytest.mark.parametrize("h,n", [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6),
                                 (1, 2), (1, 4), (1, 6), (2, 3), (2, 6), (3, 4),
                                 (5, 6)])
def test_matches_unpruned_enumeration(h, n):
    hist = subset_histogram(n, h)
    for degs in sorted_sequences(n, h, n - 1):
        assert count_realizations(DegreeSequence(degs, h)) == hist.get(degs, 0), degs


def test_every_enumerated_graph_verifies():
    for degs in [(3, 3, 3, 3, 3, 3), (4, 4, 3, 3, 2, 2), (5, 4, 4, 3, 3, 3)]:
        for h in (0, 1, 2):
            seq = DegreeSequence(degs, h)
            graphs = list(enumerate_realizations(seq))
            assert len({tuple(g.edges()) for g in graphs}) == len(graphs)
            for g in graphs:
                assert verify_realization(g, seq).ok


def test_limit():
    seq = DegreeSequence([3] * 6, 1)
    assert len(list(enumerate_realizations(seq, limit=3))) == 3


def test_all_h_sequence_exists():
    for h, n in [(0, 4), (1, 6), (2, 6), (3, 8)]:
        assert decide_exists(DegreeSequence([h] * n, h))


def test_cap(monkeypatch):
    seq = DegreeSequence([1] * 14, 1)
    with pytest.raises(CapExceeded):
        decide_exists(seq)
    assert decide_exists(seq, cap=14)
    monkeypatch.setenv("HFACTOR_NMAX", "16")
    assert enumeration_cap() == 16
    assert decide_exists(seq)


class TestResidualGraph:
    def test_k_equals_n(self):
        g = LabelledGraph.complete(4)
        assert residual_graph(g, FactorShape(1, 4), 4) == g

    def test_factor_at_block_boundary(self):
        shape = FactorShape(2, 9)
        g = residual_graph(LabelledGraph.factor(shape), shape, 3)
        assert g.degrees() == [2, 2, 2, 0, 0, 0, 0, 0, 0]

    def test_complete_h1_k2(self):
        g = residual_graph(LabelledGraph.complete(4), FactorShape(1, 4), 2)
        assert not g.has_edge(3, 4) and g.m == 5
        assert g.degree(3) == g.degree(4) == 2

    def test_mid_block_keeps_straddling_edges(self):
        shape = FactorShape(2, 6)
        g = residual_graph(LabelledGraph.factor(shape), shape, 1)
        assert g.edges() == [(1, 2), (1, 3)]

    def test_contract(self):
        shape = FactorShape(1, 4)
        with pytest.raises(ContractViolation):
            residual_graph(LabelledGraph(4), shape, 2)
        with pytest.raises(ContractViolation):
            residual_graph(LabelledGraph.complete(4), shape, 0)


def test_counting_inequality_on_residuals():
    for degs, h in [((3, 3, 3, 3, 3, 3), 1), ((4, 4, 4, 4, 4, 4), 2), ((5, 5, 4, 4, 4, 4), 1)]:
        seq = DegreeSequence(degs, h)
        for g in enumerate_realizations(seq):
            for k in range(1, seq.n + 1):
                assert first_k_counting_holds(residual_graph(g, seq.shape(), k), k)


class TestSweep:
    def test_cells(self):
        assert sweep_cells([2, 0], 4) == [(0, 1), (0, 2), (0, 3), (0, 4), (2, 3)]

    @pytest.mark.parametrize("h", [0, 1, 2])
    def test_no_disagreements_to_six(self, h):
        report = sweep_equivalence([h], 6)
        assert report.disagreements == 0
        assert all(not row.graphic_mismatches for row in report.rows)

    def test_text_format(self):
        text = sweep_equivalence([1], 4).to_text()
        assert text == ("h=1 n=2 total=1 accepted=1 disagreements=0\n"
                        "h=1 n=4 total=15 accepted=3 disagreements=0\n")
        realizable = [d for d, c in subset_histogram(4, 1).items()
                      if c and list(d) == sorted(d, reverse=True)]
        assert sorted(realizable) == [(1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 3, 3)]

    def test_jobs_do_not_change_report(self):
        assert (sweep_equivalence([0, 1], 5, jobs=2).to_text()
                == sweep_equivalence([0, 1], 5).to_text())

    def test_cap(self):
        with pytest.raises(CapExceeded):
            sweep_equivalence([1], 14)


def test_sorted_sequences():
    seqs = list(sorted_sequences(3, 0, 2))
    assert len(seqs) == 10 and seqs[0] == (2, 2, 2) and seqs[-1] == (0, 0, 0)
    assert all(list(s) == sorted(s, reverse=True) for s in seqs)


class TestGenSequence:
    def test_forced(self):
        assert gen_sequence(4, 3, 0).degrees == (3, 3, 3, 3)

    def test_deterministic(self):
        assert gen_sequence(30, 2, 7) == gen_sequence(30, 2, 7)
        assert gen_sequence(6, 2, 7) == gen_sequence(6, 2, 7)

    def test_accepted(self):
        for seed in range(10):
            seq = gen_sequence(12, 3, seed)
            assert check_h_realizable(seq).accepted

    def test_bad_shape(self):
        with pytest.raises(ContractViolation):
            gen_sequence(7, 2, 0)

    def test_retry_budget(self):
        # n=2, h=0 draws from {0,1}; only (1,1) and (0,0) are accepted
        assert gen_sequence(2, 0, 3).degrees in {(1, 1), (0, 0)}
        with pytest.raises(RetryBudgetExceeded):
            gen_sequence(40, 1, 0, max_tries=0)
