import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cocitemap.ingest import BibRecord
from cocitemap.network import (
    ConfigError,
    ContractError,
    TimeSlice,
    apply_weight_floor,
    build_cocitation_slice,
    build_term_cooccurrence,
    cosine_normalized,
    from_edge_list,
    merge_slices,
    select_top_cited,
    slice_interval,
)

SLICE_2000 = TimeSlice(0, 2000, 2000)


def rec(rec_id, year=2000, refs=(), tc=0, title="t", tag="citation_indexed"):
    return BibRecord(
        id=rec_id,
        year=year,
        title=title,
        cited_refs=tuple(refs),
        times_cited=tc,
        source_tag=tag,
    )


class TestSliceInterval:
    def test_study_interval_one_year_slices(self):
        slices = slice_interval(1994, 2008, 1)
        assert len(slices) == 15
        assert slices[0] == TimeSlice(0, 1994, 1994)
        assert slices[-1] == TimeSlice(14, 2008, 2008)

    def test_single_year(self):
        assert slice_interval(2000, 2000, 1) == (TimeSlice(0, 2000, 2000),)

    def test_short_last_slice(self):
        assert slice_interval(2000, 2004, 2) == (
            TimeSlice(0, 2000, 2001),
            TimeSlice(1, 2002, 2003),
            TimeSlice(2, 2004, 2004),
        )

    def test_bad_slice_length(self):
        with pytest.raises(ConfigError):
            slice_interval(2000, 2004, 0)

    @given(
        st.integers(min_value=1900, max_value=2050),
        st.integers(min_value=0, max_value=30),
        st.integers(min_value=1, max_value=7),
    )
    def test_partition_properties(self, start, span, slice_len):
        end = start + span
        slices = slice_interval(start, end, slice_len)
        assert slices[0].start_year == start
        assert slices[-1].end_year == end
        for a, b in zip(slices, slices[1:]):
            assert b.start_year == a.end_year + 1
        assert all(s.end_year - s.start_year + 1 == slice_len for s in slices[:-1])
        assert slices[-1].end_year - slices[-1].start_year + 1 <= slice_len


class TestSelectTopCited:
    def test_fewer_than_n(self):
        records = [rec("a", tc=1), rec("b", tc=2)]
        assert select_top_cited(records, SLICE_2000, 30) == (records[1], records[0])

    def test_top_two_by_citations(self):
        records = [rec("a", tc=5), rec("b", tc=9), rec("c", tc=9), rec("d", tc=1)]
        chosen = select_top_cited(records, SLICE_2000, 2)
        assert {r.id for r in chosen} == {"b", "c"}

    def test_tie_breaks_by_ascending_id(self):
        records = [rec("B", tc=7), rec("A", tc=7)]
        assert select_top_cited(records, SLICE_2000, 1)[0].id == "A"

    def test_records_outside_slice_ignored(self):
        records = [rec("a", year=1999, tc=100), rec("b", year=2000, tc=1)]
        assert [r.id for r in select_top_cited(records, SLICE_2000, 5)] == ["b"]

    @given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 9)), max_size=20))
    def test_matches_sort_oracle(self, rows):
        records = [rec(f"r{i}x{suffix}", tc=tc) for i, (tc, suffix) in enumerate(rows)]
        expected = sorted(records, key=lambda r: (-r.times_cited, r.id))[:5]
        assert list(select_top_cited(records, SLICE_2000, 5)) == expected


class TestBuildCocitationSlice:
    def test_single_record_triangle(self):
        net = build_cocitation_slice([rec("r", refs=["A", "B", "C"])], SLICE_2000)
        assert net.weight("A", "B") == 1
        assert net.weight("A", "C") == 1
        assert net.weight("B", "C") == 1
        assert len(net.edges) == 3

    def test_two_records_overlap(self):
        records = [rec("r1", refs=["A", "B"]), rec("r2", refs=["A", "B", "C"])]
        net = build_cocitation_slice(records, SLICE_2000)
        assert net.weight("A", "B") == 2
        assert net.weight("A", "C") == 1
        assert net.weight("B", "C") == 1

    def test_single_ref_contributes_nothing(self):
        net = build_cocitation_slice([rec("r", refs=["A"])], SLICE_2000)
        assert net.nodes == ()
        assert net.edges == ()

    def test_record_outside_slice_rejected(self):
        with pytest.raises(ContractError):
            build_cocitation_slice([rec("r", year=1999, refs=["A", "B"])], SLICE_2000)

    def test_term_only_record_rejected(self):
        with pytest.raises(ContractError):
            build_cocitation_slice([rec("r", refs=[], tag="term_only")], SLICE_2000)

    def test_duplicate_refs_counted_once(self):
        net = build_cocitation_slice([rec("r", refs=["A", "B", "A"])], SLICE_2000)
        assert net.weight("A", "B") == 1

    def test_edge_symmetry(self):
        net = build_cocitation_slice([rec("r", refs=["A", "B", "C"])], SLICE_2000)
        for u in "ABC":
            for v in "ABC":
                if u != v:
                    assert net.weight(u, v) == net.weight(v, u)

    @given(
        st.lists(
            st.sets(st.sampled_from("ABCDEFGH"), max_size=5),
            max_size=12,
        )
    )
    def test_conservation(self, ref_sets):
        records = [rec(f"r{i}", refs=sorted(refs)) for i, refs in enumerate(ref_sets)]
        net = build_cocitation_slice(records, SLICE_2000)
        node_set = set(net.node_keys)
        expected = sum(
            len(set(r.cited_refs) & node_set) * (len(set(r.cited_refs) & node_set) - 1) // 2
            for r in records
        )
        assert net.total_edge_weight() == expected


class TestMergeSlices:
    def test_merge_identity(self):
        net = build_cocitation_slice([rec("r", refs=["A", "B"])], SLICE_2000)
        assert merge_slices([net]) == net

    def test_weights_sum_and_counts_union(self):
        s0 = build_cocitation_slice([rec("r0", year=2000, refs=["A", "B"])], TimeSlice(0, 2000, 2000))
        s1 = build_cocitation_slice([rec("r1", year=2001, refs=["A", "B"])], TimeSlice(1, 2001, 2001))
        merged = merge_slices([s0, s1])
        (edge,) = merged.edges
        assert edge.weight == 2
        assert dict(edge.per_slice_counts) == {0: 1, 1: 1}
        assert merged.nodes[0].first_slice == 0

    def test_duplicate_slice_index_rejected(self):
        net = build_cocitation_slice([rec("r", refs=["A", "B"])], SLICE_2000)
        with pytest.raises(ContractError):
            merge_slices([net, net])

    @settings(max_examples=30)
    @given(st.permutations(range(4)), st.data())
    def test_merge_order_independent(self, order, data):
        nets = []
        for idx in range(4):
            refs = data.draw(
                st.lists(st.sets(st.sampled_from("ABCDE"), min_size=2, max_size=4), max_size=4),
                label=f"slice{idx}",
            )
            year = 2000 + idx
            sl = TimeSlice(idx, year, year)
            nets.append(
                build_cocitation_slice(
                    [rec(f"s{idx}r{i}", year=year, refs=sorted(r)) for i, r in enumerate(refs)],
                    sl,
                )
            )
        baseline = merge_slices(nets)
        shuffled = merge_slices([nets[i] for i in order])
        assert baseline == shuffled


class TestTermCooccurrence:
    def test_single_record_triangle(self):
        records = [rec("r", title="alpha and beta and gamma", tag="term_only")]
        net = build_term_cooccurrence(records, top_terms=5)
        assert net.weight("alpha", "beta") == 1
        assert net.weight("alpha", "gamma") == 1
        assert net.weight("beta", "gamma") == 1

    def test_top_terms_cutoff(self):
        records = (
            [rec(f"x{i}", title="alpha", tag="term_only") for i in range(5)]
            + [rec(f"y{i}", title="beta", tag="term_only") for i in range(3)]
            + [rec("z0", title="gamma", tag="term_only")]
        )
        net = build_term_cooccurrence(records, top_terms=2)
        assert set(net.node_keys) == {"alpha", "beta"}

    def test_selected_terms_without_links_stay_nodes(self):
        records = [
            rec("a", title="alpha and beta", tag="term_only"),
            rec("b", title="gamma", tag="term_only"),
        ]
        net = build_term_cooccurrence(records, top_terms=3)
        assert set(net.node_keys) == {"alpha", "beta", "gamma"}
        assert net.weight("alpha", "gamma") == 0

    def test_per_slice_disjoint_union(self):
        slices = slice_interval(2000, 2001, 1)
        records = [
            rec("a", year=2000, title="alpha and beta", tag="term_only"),
            rec("b", year=2001, title="gamma and delta", tag="term_only"),
        ]
        net = build_term_cooccurrence(records, top_terms=2, per_slice=True, slices=slices)
        assert set(net.node_keys) == {"alpha", "beta", "delta", "gamma"}
        assert net.weight("alpha", "beta") == 1
        assert net.weight("gamma", "delta") == 1
        assert net.weight("alpha", "gamma") == 0

    def test_pair_counted_once_per_record(self):
        records = [rec("r", title="alpha beta of alpha beta", tag="term_only")]
        net = build_term_cooccurrence(records, top_terms=5)
        assert net.weight("alpha beta", "alpha beta") == 0  # no self loop
        assert len(net.edges) == 0  # single distinct phrase -> no pair

    def test_bad_top_terms(self):
        with pytest.raises(ConfigError):
            build_term_cooccurrence([], top_terms=0)


class TestDerivedNetworks:
    def test_cosine_normalization(self):
        net = from_edge_list([("A", "B", 2.0), ("B", "C", 2.0)])
        cos = cosine_normalized(net)
        # deg(A)=2, deg(B)=4: 2/sqrt(8)
        assert cos.weight("A", "B") == pytest.approx(2.0 / np.sqrt(8.0))
        assert dict(cos.edges[0].per_slice_counts) == {0: 2}

    def test_weight_floor(self):
        net = from_edge_list([("A", "B", 3.0), ("B", "C", 1.0)])
        floored = apply_weight_floor(net, 2)
        assert [e.u for e in floored.edges] == ["A"]
        assert set(floored.node_keys) == {"A", "B"}

    def test_determinism_byte_identical(self, citation_corpus):
        from cocitemap.ingest import records_to_field_tagged, parse_field_tagged

        def build():
            records = parse_field_tagged(records_to_field_tagged(citation_corpus)).records
            slices = slice_interval(2000, 2005, 1)
            nets = [
                build_cocitation_slice(select_top_cited(records, sl, 30), sl)
                for sl in slices
            ]
            return merge_slices(nets)

        first, second = build(), build()
        assert first == second
        blob = lambda n: json.dumps(
            [[e.u, e.v, e.weight, sorted(e.per_slice_counts.items())] for e in n.edges]
        )
        assert blob(first) == blob(second)
