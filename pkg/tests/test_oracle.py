import random
from fractions import Fraction
from itertools import combinations, product
from math import factorial

import pytest

from biasmatch.constructor import ExtremalSpec, build_extremal, build_member
from biasmatch.errors import BudgetExceeded
from biasmatch.exactmath import ValidPair, canonical_valid_pairs
from biasmatch.hypergraph import ColouredHypergraph
from biasmatch.oracle import (
    count_perfect_matchings,
    disjoint_common_neighbourhood,
    family_membership,
    find_switcher,
    is_member,
    perfect_matchings,
    verify_balance,
)
from biasmatch.randomized import random_colouring


def complete_matching_count(n, k):
    m = n // k
    return factorial(n) // (factorial(k) ** m * factorial(m))


def brute_perfect_matchings(h):
    """All sets of n/k pairwise disjoint edges, by choosing edge subsets."""
    m = h.n // h.k
    out = set()
    for combo in combinations(h.edge_list, m):
        if len({v for e in combo for v in e}) == h.n:
            out.add(frozenset(combo))
    return out


def test_single_edge_matching():
    ms = list(perfect_matchings(ColouredHypergraph.complete(3, 3)))
    assert len(ms) == 1 and ms[0].perfect and ms[0].colour_profile == (1,)


@pytest.mark.parametrize("n, k", [(6, 3), (9, 3), (4, 2), (6, 2), (8, 2), (8, 4), (6, 3)])
def test_complete_graph_matching_counts(n, k):
    assert count_perfect_matchings(ColouredHypergraph.complete(n, k)) == complete_matching_count(n, k)


def test_complete_3_graph_on_6_has_10():
    assert count_perfect_matchings(ColouredHypergraph.complete(6, 3)) == 10


def test_indivisible_n_has_none():
    assert list(perfect_matchings(ColouredHypergraph.complete(7, 3))) == []


def test_matchings_unique_and_match_brute_force():
    rng = random.Random(3)
    for _ in range(5):
        edges = {e: 1 + rng.randrange(2) for e in combinations(range(9), 3) if rng.random() < 0.4}
        h = ColouredHypergraph(9, 3, 2, edges)
        found = [frozenset(e for e, _ in m.edges) for m in perfect_matchings(h)]
        assert len(found) == len(set(found))
        assert set(found) == brute_perfect_matchings(h)


def test_matching_budget():
    with pytest.raises(BudgetExceeded):
        list(perfect_matchings(ColouredHypergraph.complete(12, 3), budget=50))


@pytest.mark.parametrize("n, expected", [(12, (2, 2)), (6, (1, 1))])
def test_verify_balance_examples(n, expected):
    report = verify_balance(ExtremalSpec(3, 2, ValidPair((2, 0), 1), n))
    assert report.all_balanced and report.matchings_checked > 0
    assert report.expected_profile == expected


def test_verify_balance_single_colour_alpha():
    spec = ExtremalSpec(3, 2, ValidPair((2, 0), 1), 6, alpha=(Fraction(1), Fraction(0)))
    with pytest.warns(UserWarning):
        report = verify_balance(spec)
    assert report.all_balanced and report.expected_profile == (2, 0)


def test_verify_balance_other_alpha():
    # parts (j_i + sigma*alpha_i) n/k with alpha = (1/3, 2/3), n = 9
    spec = ExtremalSpec(3, 2, ValidPair((1, 1), 1), 9, alpha=(Fraction(1, 3), Fraction(2, 3)))
    assert spec.part_sizes == (4, 5)
    report = verify_balance(spec)
    assert report.all_balanced and report.expected_profile == (1, 2)


def test_verify_balance_detects_unbalanced_host():
    spec = ExtremalSpec(3, 2, ValidPair((2, 0), 1), 6)
    host = build_extremal(spec)
    bad = host.recoloured(host.edge_list[0], 2)
    report = verify_balance(spec, host=bad)
    assert not report.all_balanced and report.violations


def test_no_switcher_in_monochromatic_graph():
    assert find_switcher(ColouredHypergraph.complete(9, 3, 2, 1)) is None


def test_no_switcher_in_extremal_member():
    h = build_extremal(ExtremalSpec(3, 2, ValidPair((2, 0), 1), 12))
    assert find_switcher(h, 12) is None


def test_recoloured_edge_gives_small_switcher():
    h = build_extremal(ExtremalSpec(3, 2, ValidPair((2, 0), 1), 12))
    e = next(e for e, c in h.edges.items() if c == 1)
    sw = find_switcher(h.recoloured(e, 2), 12)
    assert sw is not None and sw.order <= 6
    assert sw.majority.vertices == sw.minority.vertices
    assert sw.majority.colour_profile[sw.colour - 1] > sw.minority.colour_profile[sw.colour - 1]


def brute_switcher_orders(h, max_order):
    """Orders of all switchers, by comparing colour profiles of every matching per support."""
    profiles = {}
    for size in range(1, max_order // h.k + 1):
        for combo in combinations(h.edge_list, size):
            verts = frozenset(v for e in combo for v in e)
            if len(verts) != size * h.k:
                continue
            prof = tuple(sum(1 for e in combo if h.edges[e] == c) for c in range(1, h.r + 1))
            profiles.setdefault(verts, set()).add(prof)
    return sorted(len(v) for v, profs in profiles.items() if len(profs) > 1)


def test_switcher_minimum_order_matches_brute_force():
    rng = random.Random(11)
    for trial in range(12):
        edges = {e: 1 + rng.randrange(2) for e in combinations(range(8), 3) if rng.random() < 0.35}
        h = ColouredHypergraph(8, 3, 2, edges)
        orders = brute_switcher_orders(h, 6)
        sw = find_switcher(h, 6)
        if orders:
            assert sw is not None and sw.order == orders[0]
        else:
            assert sw is None


def test_switcher_budget_is_distinct_from_none():
    h = build_extremal(ExtremalSpec(3, 2, ValidPair((2, 0), 1), 12))
    with pytest.raises(BudgetExceeded):
        find_switcher(h, 12, budget=100)


def test_membership_round_trip():
    for k, r in [(3, 2), (3, 3), (2, 3), (4, 2)]:
        for pair in canonical_valid_pairs(k, r):
            spec = ExtremalSpec(k, r, pair, k * r)
            h = build_extremal(spec)
            found = family_membership(h)
            assert found is not None and is_member(h, found.parts, found.pair)
            assert {frozenset(p) for p in found.parts if p} == {frozenset(p) for p in spec.parts}


def test_membership_survives_edge_deletion():
    h = build_extremal(ExtremalSpec(3, 3, ValidPair((2, 0, 0), 1), 9))
    for e in h.edge_list[::7]:
        smaller = h.without_edges([e])
        found = family_membership(smaller)
        assert found is not None and is_member(smaller, found.parts, found.pair)


def test_membership_none_for_conflicting_colours():
    # complete 3-graph on 6 vertices; two edges sharing two vertices get different colours
    rng = random.Random(5)
    edges = {e: 1 for e in combinations(range(6), 3)}
    edges[(0, 1, 2)] = 2
    h = ColouredHypergraph(6, 3, 2, edges)
    assert find_switcher(h, 6) is not None
    assert family_membership(h) is None


def brute_membership(h):
    from biasmatch.exactmath import all_valid_pairs

    for labels in product(range(h.r), repeat=h.n):
        parts = [[v for v in range(h.n) if labels[v] == i] for i in range(h.r)]
        for pair in all_valid_pairs(h.k, h.r):
            if is_member(h, parts, pair):
                return True
    return False


def test_membership_matches_brute_force_on_random_graphs():
    rng = random.Random(2)
    for trial in range(25):
        edges = {e: 1 + rng.randrange(2) for e in combinations(range(7), 3) if rng.random() < 0.15}
        h = ColouredHypergraph(7, 3, 2, edges)
        assert (family_membership(h) is not None) == brute_membership(h)


def test_is_member_rejects_bad_partitions():
    spec = ExtremalSpec(3, 2, ValidPair((2, 0), 1), 6)
    h = build_extremal(spec)
    parts = [list(p) for p in spec.parts]
    assert is_member(h, parts, spec.pair)
    assert not is_member(h, [parts[0][:-1], parts[1]], spec.pair)
    assert not is_member(h, [parts[1], parts[0]], spec.pair)


def test_disjoint_common_neighbourhood_examples():
    assert disjoint_common_neighbourhood(ColouredHypergraph.complete(8, 3), 0, 1) == 3
    assert disjoint_common_neighbourhood(ColouredHypergraph(8, 3, 1, {}), 0, 1) == 0
    h = build_extremal(ExtremalSpec(3, 2, ValidPair((2, 0), 1), 12))
    assert disjoint_common_neighbourhood(h, 0, 1) >= 4
    with pytest.raises(ValueError):
        disjoint_common_neighbourhood(h, 2, 2)


def brute_packing(sets):
    best = 0
    for size in range(1, len(sets) + 1):
        for combo in combinations(sets, size):
            if len({v for s in combo for v in s}) == sum(len(s) for s in combo):
                best = size
                break
        else:
            break
    return best


def test_disjoint_common_neighbourhood_matches_brute_force():
    rng = random.Random(8)
    for _ in range(15):
        edges = {e: 1 for e in combinations(range(9), 3) if rng.random() < 0.5}
        h = ColouredHypergraph(9, 3, 1, edges)
        x, y = rng.sample(range(9), 2)
        common = sorted(h.neighbourhood(x) & h.neighbourhood(y))
        assert disjoint_common_neighbourhood(h, x, y) == brute_packing(common)


def test_greedy_fallback_is_lower_bound():
    h = ColouredHypergraph.complete(17, 3)
    assert 1 <= disjoint_common_neighbourhood(h, 0, 1) <= 7


# properties linking the oracles


def key_lemma_instances():
    # k = 2 keeps the large-common-neighbourhood hypothesis satisfiable at desk scale
    for pair in canonical_valid_pairs(2, 2):
        h = build_extremal(ExtremalSpec(2, 2, pair, 8))
        yield h
        yield h.without_edges(h.edge_list[:2])
    for seed in range(6):
        yield random_colouring(ColouredHypergraph.complete(8, 2), 2, seed)
    for pair in canonical_valid_pairs(3, 2):
        yield build_extremal(ExtremalSpec(3, 2, pair, 12))


def test_key_lemma_desk_check():
    applicable = 0
    for h in key_lemma_instances():
        k = h.k
        if min(h.colour_counts()) < 1:
            continue
        big_common = all(
            disjoint_common_neighbourhood(h, x, y) >= k * k for x, y in combinations(range(h.n), 2)
        )
        if big_common and find_switcher(h, k * k + k) is None:
            applicable += 1
            assert family_membership(h) is not None
    assert applicable >= 2


def test_recolouring_out_of_family_creates_switcher():
    for pair in canonical_valid_pairs(3, 2):
        h = build_extremal(ExtremalSpec(3, 2, pair, 6))
        for e, c in h.edges.items():
            h2 = h.recoloured(e, 3 - c)
            if family_membership(h2) is None:
                assert find_switcher(h2, 12) is not None


def test_balanced_members_have_no_switchers():
    for k, r, n in [(3, 2, 6), (3, 2, 12), (3, 3, 9), (2, 2, 8)]:
        for pair in canonical_valid_pairs(k, r):
            spec = ExtremalSpec(k, r, pair, n)
            assert verify_balance(spec).all_balanced
            assert find_switcher(build_extremal(spec), min(n, k * k + k)) is None
