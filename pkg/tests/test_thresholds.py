import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from biasmatch.constructor import ExtremalSpec, finite_colour_degree
from biasmatch.exactmath import ValidPair, canonical_valid_pairs
from biasmatch.thresholds import (
    Classification,
    classify,
    f_kr,
    f_pair,
    f_pair_reduced,
    f_star,
    m_conjectured,
    m_prime,
    render_table,
    table_csv,
    table_json,
)

FIGURE_PAIRS = [
    (ValidPair((2, 0, 0), 1), Fraction(49, 81)),
    (ValidPair((1, 1, 0), 1), Fraction(32, 81)),
    (ValidPair((2, 1, 1), -1), Fraction(5, 9)),
]


@pytest.mark.parametrize("pair, expected", FIGURE_PAIRS)
def test_f_pair_figure_values(pair, expected):
    assert f_pair(3, 3, pair) == expected


@pytest.mark.parametrize(
    "k, r, pair, expected",
    [
        (3, 3, ValidPair((2, 0, 0), 1), Fraction(49, 81)),
        (2, 2, ValidPair((1, 0), 1), Fraction(3, 4)),
        (4, 2, ValidPair((2, 1), 1), Fraction(175, 256)),
    ],
)
def test_f_pair_reduced_examples(k, r, pair, expected):
    assert f_pair_reduced(k, r, pair) == expected


def test_reduced_rejects_unsorted_and_invalid():
    with pytest.raises(ValueError):
        f_pair_reduced(3, 3, ValidPair((0, 2, 0), 1))
    with pytest.raises(ValueError):
        f_pair(4, 3, ValidPair((2, 0, 0), 1))


def large_n_degree_ratio(k, r, pair, m):
    """Finite-n minimum degree ratio of the edge-maximal member, n = k*r*m."""
    spec = ExtremalSpec(k, r, pair, k * r * m)
    degs = [sum(finite_colour_degree(spec, i, c) for c in range(1, r + 1)) for i in range(1, r + 1)]
    return Fraction(min(degs), comb(spec.n - 1, k - 1))


@pytest.mark.parametrize("k, r", [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)])
def test_f_pair_is_limit_of_finite_degrees(k, r):
    # independent route: exact binomial counts at growing n approach the formula
    for pair in canonical_valid_pairs(k, r):
        target = f_pair(k, r, pair)
        gaps = [abs(large_n_degree_ratio(k, r, pair, m) - target) for m in (10, 100, 1000)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < Fraction(1, 100)


def test_formula_equivalence():
    count = 0
    for k in range(2, 11):
        for r in range(2, 6):
            for pair in canonical_valid_pairs(k, r):
                assert f_pair(k, r, pair) == f_pair_reduced(k, r, pair)
                count += 1
    assert count > 300


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(2, 4), st.randoms())
def test_f_pair_permutation_invariant(k, r, rnd):
    pairs = canonical_valid_pairs(k, r)
    pair = rnd.choice(pairs)
    j = list(pair.j)
    rnd.shuffle(j)
    value = f_pair(k, r, ValidPair(tuple(j), pair.sigma))
    assert value == f_pair(k, r, pair)
    assert 0 < value <= 1


@pytest.mark.parametrize(
    "k, r, expected, witness",
    [
        (3, 2, Fraction(3, 4), ValidPair((1, 1), 1)),
        (3, 3, Fraction(49, 81), ValidPair((2, 0, 0), 1)),
        (5, 2, Fraction(6561, 10000), ValidPair((4, 0), 1)),
    ],
)
def test_f_kr_examples(k, r, expected, witness):
    value, argmax = f_kr(k, r)
    assert value == expected
    assert witness in argmax
    assert all(f_pair(k, r, p) == value for p in argmax)


def test_f_kr_reports_ties():
    # f_{((2,1),-1)} = f_{((1,0),1)} for graphs
    value, argmax = f_kr(2, 2)
    assert value == Fraction(3, 4)
    assert set(argmax) == {ValidPair((1, 0), 1), ValidPair((2, 1), -1)}


def test_f_star_examples():
    assert f_star(3, 3) == Fraction(49, 81)
    assert f_star(5, 2) == Fraction(6561, 10000)
    for r in range(2, 11):
        assert f_star(2, r) == Fraction(r + 1, 2 * r)


def test_closed_form_agreement():
    for k in range(2, 23):
        for r in range(2, 11):
            if (k, r) in {(3, 2), (4, 2)}:
                continue
            assert f_kr(k, r)[0] == f_star(k, r), (k, r)
    assert f_kr(3, 2)[0] == Fraction(3, 4)
    assert f_kr(4, 2)[0] == Fraction(175, 256)


def test_m_conjectured():
    assert m_conjectured(1, 3) == Fraction(5, 9)
    assert m_conjectured(1, 4) == Fraction(37, 64)
    for k in range(2, 12):
        assert m_conjectured(k - 1, k) == Fraction(1, 2)
    with pytest.raises(ValueError):
        m_conjectured(3, 3)
    with pytest.raises(ValueError):
        m_conjectured(0, 3)


def test_monotone_in_k_with_single_crossing():
    f2 = [f_kr(k, 2)[0] for k in range(3, 23)]
    mp = [m_prime(k) for k in range(3, 23)]
    assert all(a > b for a, b in zip(f2, f2[1:]))
    assert all(a < b for a, b in zip(mp, mp[1:]))
    signs = [f > m for f, m in zip(f2, mp)]
    assert signs == [True] * 14 + [False] * 6  # k = 3..16 then 17..22


@pytest.mark.parametrize(
    "k, r, cls",
    [
        (16, 2, Classification.BIAS_EXCEEDS),
        (17, 2, Classification.COINCIDES),
        (5, 3, Classification.COINCIDES),
        (3, 3, Classification.BIAS_EXCEEDS),
        (2, 3, Classification.BIAS_EXCEEDS),
    ],
)
def test_classify(k, r, cls):
    report = classify(k, r)
    assert report.classification is cls
    assert report.b_kr == max(report.f_kr, report.m_prime)
    assert (report.f_kr > report.m_prime) == (cls is Classification.BIAS_EXCEEDS)
    for p in report.argmax_pairs:
        assert f_pair(k, r, p) == report.f_kr


def test_classify_conditional_flag():
    assert classify(10, 2).conditional_on_conjecture
    assert not classify(5, 2).conditional_on_conjecture
    assert not classify(17, 2).conditional_on_conjecture
    assert not classify(4, 3).conditional_on_conjecture


def test_render_table_cells():
    rows = {row.k: row for row in render_table(22, 10)}
    cell = {(k, c.r): c for k, row in rows.items() for c in row.cells}
    assert cell[3, 2].text == "0.7500" and cell[3, 2].flagged
    assert cell[10, 6].text == "0.4569" and not cell[10, 6].flagged
    assert cell[22, 10].text == "0.4159" and not cell[22, 10].flagged


def test_table_serialisations():
    rows = render_table(4, 3)
    text = table_csv(rows)
    assert text.splitlines()[0] == "k,m_prime,f_r2,f_r3"
    assert text.splitlines()[1] == "3,0.5555,0.7500,0.6049"
    data = table_json(rows)
    assert data[0]["f"][0] == {"r": 2, "exact": "3/4", "decimal": "0.7500", "flagged": True}
    assert data[1]["m_prime"] == {"exact": "37/64", "decimal": "0.5781"}


def test_table_parallel_matches_serial():
    assert table_csv(render_table(8, 4, jobs=2)) == table_csv(render_table(8, 4))


def test_render_table_range():
    with pytest.raises(ValueError):
        render_table(2, 5)
