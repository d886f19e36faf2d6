import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brute import as_set, generator_brute, span_brute
from cyclic_blocks.euclid import DomainError, euclid_decompose
from cyclic_blocks.gf2 import gf2_rank
from cyclic_blocks.kernel import (
    GeneratorSet,
    TriangularityError,
    build_generator,
    build_generator_set,
    canonicalize,
    closed_form_generators,
    combo_from_indices,
    combo_indices,
    generator_level,
    generator_set_from_json,
    generator_set_to_json,
    span_element,
    span_u64,
)
from cyclic_blocks.subsets import SubsetMask


def sets(gs):
    return [set(g) for g in gs.gens]


@pytest.mark.parametrize(
    "n, t, i, expect",
    [(13, 5, 1, {1, 6, 11}), (13, 5, 4, {4, 9, 11, 13}), (6, 2, 1, {1, 3, 5})],
)
def test_build_generator_examples(n, t, i, expect):
    assert set(build_generator(euclid_decompose(n, t), i)) == expect


def test_build_generator_index_range():
    dec = euclid_decompose(13, 5)
    for i in (0, 6):
        with pytest.raises(DomainError):
            build_generator(dec, i)


def test_generator_set_examples():
    assert sets(build_generator_set(6, 2)) == [{1, 3, 5}, {2, 4, 6}]
    assert sets(build_generator_set(13, 5)) == [
        {1, 6, 11}, {2, 7, 12}, {3, 8, 13}, {4, 9, 11, 13}, {5, 10, 12, 13},
    ]
    for n in range(1, 20):
        assert sets(build_generator_set(n, n)) == [{i} for i in range(1, n + 1)]


def test_levels_and_segments_13_5():
    gs = build_generator_set(13, 5)
    assert gs.levels == (0, 0, 0, 1, 1)
    segs = gs.segments(4)
    assert [(lo, hi, set(p)) for lo, hi, p in segs] == [(0, 10, {4, 9}), (10, 12, {11}), (12, 13, {13})]


def test_matches_pointwise_definition():
    for n in range(1, 70):
        for t in range(1, n + 1):
            gs = build_generator_set(n, t)
            for i in range(1, t + 1):
                assert set(gs.generator(i)) == generator_brute(n, t, i), (n, t, i)


def test_level_bookkeeping():
    for n in range(1, 120):
        for t in range(1, n + 1):
            dec = euclid_decompose(n, t)
            a_t = generator_level(dec, t)
            if dec.k % 2 == 0:
                assert a_t == dec.k // 2 - 1
            else:
                assert a_t == (dec.k - 1) // 2
            for i in range(1, t + 1):
                a = generator_level(dec, i)
                has_tail = dec.k != 2 * a + 1
                if dec.k % 2 == 1:
                    assert has_tail == (a != (dec.k - 1) // 2)


def test_triangular_property_up_to_128():
    for n in range(1, 129):
        for t in range(1, n + 1):
            gs = build_generator_set(n, t)
            for j, m in enumerate(gs.masks, 1):
                for i in range(1, t + 1):
                    assert bool(m >> (i - 1) & 1) == (i == j)


def test_segments_disjoint_and_ordered():
    for n in range(1, 90):
        for t in range(1, n + 1):
            gs = build_generator_set(n, t)
            for i in range(1, t + 1):
                segs = gs.segments(i)
                union = 0
                for (lo, hi, part), nxt in zip(segs, segs[1:] + [None]):
                    assert part.bits & union == 0
                    assert all(lo < x <= hi for x in part)
                    if nxt is not None:
                        assert hi == nxt[0]
                    union |= part.bits
                assert union == gs.masks[i - 1]
                assert segs[-1][1] == n


def test_order_by_enumeration_small():
    for n in range(1, 16):
        for t in range(1, n + 1):
            gs = build_generator_set(n, t)
            span = span_brute(sets(gs))
            assert len(set(span)) == 2 ** t
            assert gf2_rank(gs.masks) == t


def test_gf2_rank_against_numpy_elimination():
    rng = np.random.default_rng(3)
    for _ in range(200):
        rows = rng.integers(0, 2, size=(rng.integers(1, 9), rng.integers(1, 12)))
        ints = [int("".join(map(str, r[::-1])), 2) for r in rows]
        m = rows.copy() % 2
        rank = 0
        for col in range(m.shape[1]):
            piv = [r for r in range(rank, m.shape[0]) if m[r, col]]
            if not piv:
                continue
            m[[rank, piv[0]]] = m[[piv[0], rank]]
            for r in range(m.shape[0]):
                if r != rank and m[r, col]:
                    m[r] ^= m[rank]
            rank += 1
        assert gf2_rank(ints) == rank


# --- closed forms -----------------------------------------------------------

def test_closed_form_examples():
    assert sets(closed_form_generators(6, 2)) == [{1, 3, 5}, {2, 4, 6}]
    assert closed_form_generators(13, 5) is None


def test_closed_form_seven_three():
    # n = 1 (mod t): every generator contains n
    gs = closed_form_generators(7, 3)
    assert sets(gs) == [{1, 4, 7}, {2, 5, 7}, {3, 6, 7}]
    assert gs.masks == build_generator_set(7, 3).masks


def test_closed_form_depth_three_example():
    # 17 = 2*7 + 3, 7 = 2*3 + 1, 3 = 3*1
    dec = euclid_decompose(17, 7)
    assert dec.k == 3
    gs = closed_form_generators(17, 7)
    assert gs.masks == build_generator_set(17, 7).masks
    # i <= t - r' uses residues mod r = 3 beyond qt = 14; i > t - r' = 6 uses mod r' = 1
    assert set(gs.generator(1)) == {1, 8, 15}
    assert set(gs.generator(7)) == {7, 14, 15, 16, 17}


def test_closed_form_agreement_up_to_100():
    for n in range(1, 101):
        for t in range(1, n + 1):
            cf = closed_form_generators(n, t)
            if euclid_decompose(n, t).k <= 3:
                assert cf.masks == build_generator_set(n, t).masks, (n, t)
            else:
                assert cf is None


# --- span and cosets ----------------------------------------------------------

def test_span_element_examples():
    gs = build_generator_set(13, 5)
    assert span_element(gs, combo_from_indices([1])) == gs.generator(1)
    assert span_element(gs, 0) == SubsetMask.empty(13)
    assert set(span_element(gs, combo_from_indices([1, 4]))) == {1, 4, 6, 9, 13}
    with pytest.raises(DomainError):
        span_element(gs, 1 << 5)


def test_combo_helpers():
    assert combo_from_indices([1, 4]) == 0b1001
    assert combo_indices(0b1001) == [1, 4]


def test_span_u64_matches_scalar():
    gs = build_generator_set(29, 9)
    table = span_u64(gs.masks)
    for c in range(1 << 9):
        assert int(table[c]) == span_element(gs, c).bits


def test_canonicalize_examples():
    gs = build_generator_set(13, 5)
    rep, c = canonicalize(gs, SubsetMask.from_positions([1, 2], 13))
    assert set(rep) == {6, 7, 11, 12} and combo_indices(c) == [1, 2]
    s = SubsetMask.from_positions([6, 9, 13], 13)
    assert canonicalize(gs, s) == (s, 0)
    s = SubsetMask.from_positions([2, 3, 10], 13)
    assert canonicalize(gs, s)[0] == canonicalize(gs, s ^ gs.generator(3))[0]


@settings(max_examples=200)
@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n), st.integers(0, (1 << n) - 1))))
def test_canonicalize_properties(args):
    n, t, bits = args
    gs = build_generator_set(n, t)
    s = SubsetMask(n, bits)
    rep, c = canonicalize(gs, s)
    assert rep.bits & ((1 << t) - 1) == 0
    assert c == bits & ((1 << t) - 1)
    assert canonicalize(gs, rep) == (rep, 0)
    assert span_element(gs, c) == s ^ rep


def test_canonical_reps_count():
    for n in range(1, 12):
        for t in range(1, n + 1):
            gs = build_generator_set(n, t)
            reps = {canonicalize(gs, SubsetMask(n, b))[0] for b in range(1 << n)}
            assert len(reps) == 2 ** (n - t)


def test_canonicalize_mismatched_n():
    with pytest.raises(DomainError):
        canonicalize(build_generator_set(5, 2), SubsetMask(6, 0))


# --- validation and serialization -----------------------------------------------

def test_triangularity_enforced():
    gs = build_generator_set(13, 5)
    with pytest.raises(TriangularityError):
        gs.flip(1, 3)
    with pytest.raises(TriangularityError):
        gs.flip(2, 2)
    with pytest.raises(TriangularityError):
        GeneratorSet(gs.dec, gs.masks[:4])
    assert gs.flip(1, 13).masks[0] == gs.masks[0] | 1 << 12


def test_json_shape():
    doc = json.loads(generator_set_to_json(build_generator_set(13, 5)))
    assert doc["n"] == 13 and doc["t"] == 5
    assert doc["euclid"] == {
        "k": 4,
        "quotients": [2, 1, 1, 2],
        "remainders": [5, 3, 2, 1, 0],
        "partial_n": [0, 10, 12],
        "partial_t": [0, 3, 5],
    }
    assert doc["generators"] == [[1, 6, 11], [2, 7, 12], [3, 8, 13], [4, 9, 11, 13], [5, 10, 12, 13]]


@given(st.integers(1, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_json_round_trip(nt):
    gs = build_generator_set(*nt)
    text = generator_set_to_json(gs)
    back = generator_set_from_json(text)
    assert back == gs
    assert generator_set_to_json(back) == text


def test_json_rejects_inconsistent():
    doc = json.loads(generator_set_to_json(build_generator_set(13, 5)))
    doc["euclid"]["quotients"] = [2, 1, 2, 1]
    with pytest.raises(DomainError):
        generator_set_from_json(json.dumps(doc))
    doc = json.loads(generator_set_to_json(build_generator_set(13, 5)))
    doc["generators"][0] = [1, 2]
    with pytest.raises(TriangularityError):
        generator_set_from_json(json.dumps(doc))
