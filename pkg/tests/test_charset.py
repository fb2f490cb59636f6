import pytest

from drex.charset import (
    ANCHOR_BOT,
    ANCHOR_EOT,
    ANCHORS,
    ALL_BASE,
    CharSet,
    EMPTY_SET,
    FULL,
    from_chars,
    from_ranges,
    is_anchor,
    single,
)


def test_membership_and_ranges():
    cs = from_ranges([(10, 20), (30, 30)])
    assert 10 in cs and 20 in cs and 30 in cs
    assert 9 not in cs and 21 not in cs and 29 not in cs
    assert list(cs.ranges()) == [(10, 20), (30, 30)]
    assert cs.count() == 12


def test_union_intersect_difference():
    a = from_ranges([(0, 10)])
    b = from_ranges([(5, 15)])
    assert list(a.union(b).ranges()) == [(0, 15)]
    assert list(a.intersect(b).ranges()) == [(5, 10)]
    assert list(a.difference(b).ranges()) == [(0, 4)]


def test_complement_round_trip():
    a = from_chars("ax")
    assert a.complement().complement() == a
    assert EMPTY_SET.complement() == FULL


def test_overlapping_input_ranges_normalize():
    assert from_ranges([(3, 7), (5, 9)]) == from_ranges([(3, 9)])
    assert from_ranges([(7, 3)]) == from_ranges([(3, 7)])


def test_anchor_zone():
    assert is_anchor(ANCHOR_BOT) and is_anchor(ANCHOR_EOT)
    assert not is_anchor(ord("a"))
    assert ANCHORS.intersect(ALL_BASE).is_empty()
    assert single(ANCHOR_BOT).union(ALL_BASE) == ALL_BASE.union(single(ANCHOR_BOT))


def test_pick_smallest_and_empty_guard():
    assert from_chars("zb").pick() == ord("b")
    with pytest.raises(ValueError):
        EMPTY_SET.pick()
