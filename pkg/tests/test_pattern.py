import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from netstab import (CandidatePattern, PatternError, SystemPattern, append_candidates, check_candidates,
                     dump_system, parse_candidates, parse_system, sample_realization, select_columns)
from netstab.pattern import SAMPLING_BAND

from helpers import patterns


def test_p11_counts(p11):
    assert (p11.n, p11.m) == (11, 1)
    assert len(p11.a_entries) == 18
    assert len(p11.b_entries) == 2
    assert p11.self_loops == {6, 9}


def test_single_loop():
    p = parse_system('{"n":1,"a_edges":[[1,1]],"b_edges":[]}')
    assert p.a_entries == {(1, 1)}
    assert p.m == 0


@pytest.mark.parametrize("doc, needle", [
    ('{"n":2,"a_edges":[[1,3]],"b_edges":[]}', "3"),
    ('{"n":0,"a_edges":[],"b_edges":[]}', "n"),
    ('{"n":2,"a_edges":[[1,2],[1,2]],"b_edges":[]}', "duplicate"),
    ('{"n":2,"a_edges":[],"b_edges":[[3,1]]}', "3"),
    ('{"n":2,"a_edges":[],"b_edges":[[1,2]],"m":1}', "2"),
    ('{"n":2,"a_edges":[[1]],"b_edges":[]}', "[1]"),
    ('{"n":2,"a_edges":[],', "JSON"),
    ('[]', "object"),
])
def test_parse_errors(doc, needle):
    with pytest.raises(PatternError) as exc:
        parse_system(doc)
    assert needle in str(exc.value)


def test_both_orientations_accepted():
    p = parse_system('{"n":2,"a_edges":[[1,2],[2,1]],"b_edges":[]}')
    assert p.a_entries == {(1, 2), (2, 1)}


def test_asymmetric_constructor_rejected():
    with pytest.raises(PatternError):
        SystemPattern(2, 0, frozenset({(1, 2)}), frozenset())


@given(patterns())
def test_round_trip_and_closure(p):
    for i, j in p.a_entries:
        assert (j, i) in p.a_entries
    assert parse_system(dump_system(p)) == p


def test_select_columns_examples(p11):
    assert select_columns(p11, [1]) == p11
    empty = select_columns(p11, [])
    assert empty.m == 0 and not empty.b_entries
    with pytest.raises(PatternError):
        select_columns(p11, [2])


@given(patterns(max_m=5), st.data())
def test_select_columns_composes(p, data):
    k1 = sorted(data.draw(st.sets(st.integers(1, p.m))) if p.m else [])
    k2 = sorted(data.draw(st.sets(st.integers(1, len(k1)))) if k1 else [])
    once = select_columns(p, [k1[t - 1] for t in k2])
    assert select_columns(select_columns(p, k1), k2) == once


def test_append_candidates(p11, cand6):
    assert append_candidates(p11, cand6, []) == p11
    # u4 is candidate column 3 and drives x11
    two = append_candidates(p11, cand6, [3])
    assert two.m == 2 and two.input_targets[2] == {11}
    four = append_candidates(p11, cand6, [2, 3, 6])
    assert four.m == 4
    assert [four.input_targets[j] for j in (2, 3, 4)] == [{3}, {11}, {8}]
    with pytest.raises(PatternError):
        append_candidates(p11, cand6, [7])


def test_select_after_append(p11, cand6):
    both = append_candidates(p11, cand6, range(1, 7))
    sel = select_columns(both, [1, 4])
    assert sel.m == 2 and sel.input_targets[2] == {11}


def test_candidate_parsing(cand6):
    assert cand6.m_can == 6
    assert cand6.label(3) == "u4"
    assert parse_candidates(json.dumps(cand6.to_dict())) == cand6
    with pytest.raises(PatternError):
        parse_candidates('{"m_can":1,"edges":[[1,2]]}')
    with pytest.raises(PatternError):
        check_candidates(SystemPattern.from_edges(2), CandidatePattern(1, frozenset({(3, 1)})))


def test_realization_deterministic(p11):
    a = sample_realization(p11, 5)
    b = sample_realization(p11, 5)
    assert np.array_equal(a.a_values, b.a_values) and np.array_equal(a.b_values, b.b_values)
    assert not np.array_equal(a.a_values, sample_realization(p11, 6).a_values)


def test_realization_p11(p11):
    r = sample_realization(p11, 0)
    assert np.count_nonzero(r.a_values) == 18
    assert np.array_equal(r.a_values, r.a_values.T)


def test_single_loop_realization():
    r = sample_realization(SystemPattern.from_edges(1, [(1, 1)]), 3)
    assert r.a_values.shape == (1, 1) and r.a_values[0, 0] != 0


@given(patterns(max_n=6, max_m=3), st.integers(0, 2**32 - 1))
def test_realization_support(p, seed):
    r = sample_realization(p, seed)
    a_support = {(i + 1, j + 1) for i, j in zip(*np.nonzero(r.a_values))}
    b_support = {(i + 1, j + 1) for i, j in zip(*np.nonzero(r.b_values))}
    assert a_support == p.a_entries
    assert b_support == p.b_entries
    assert np.array_equal(r.a_values, r.a_values.T)
    vals = np.concatenate([r.a_values[r.a_values != 0], r.b_values[r.b_values != 0]])
    assert np.all((np.abs(vals) >= SAMPLING_BAND) & (np.abs(vals) <= 1))
