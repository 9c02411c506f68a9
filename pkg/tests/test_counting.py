"""Structure counts against the reference table and brute-force agreement."""

from __future__ import annotations

import itertools
from math import comb, factorial

import pytest

from sallyanne.belief_graph import max_edges
from sallyanne.counting import (
    count_structures_enumerative,
    count_structures_formula,
    dataset_size,
    graph_density,
    semantic_expansion_counts,
)
from sallyanne.errors import InvalidConfigError
from sallyanne.scene import load_pools, partition_pool

# (n, m) -> (fixed-order count, total across orders)
REFERENCE_COUNTS = {
    (4, 4): (5, 120),
    (5, 7): (15, 1_800),
    (5, 8): (9, 1_080),
    (6, 7): (71, 51_120),
    (6, 8): (83, 59_760),
    (6, 9): (82, 59_040),
}

# (n, m, q) -> (train, test)
REFERENCE_SIZES = {
    (4, 4, 3): (1_306_368, 93_312),
    (4, 4, 4): (1_306_368, 93_312),
    (5, 7, 3): (1_161_216, 82_944),
    (5, 8, 3): (1_161_216, 82_944),
    (5, 7, 4): (1_161_216, 82_944),
    (5, 8, 4): (1_161_216, 82_944),
    (6, 7, 3): (1_032_192, 73_728),
    (6, 7, 4): (1_032_192, 73_728),
    (6, 8, 3): (1_032_192, 73_728),
    (6, 8, 4): (1_032_192, 73_728),
    (6, 9, 3): (1_032_192, 73_728),
    (6, 9, 4): (1_032_192, 73_728),
}


class TestStructureCounts:
    @pytest.mark.parametrize("nm,expected", sorted(REFERENCE_COUNTS.items()))
    def test_reference_values(self, nm, expected):
        n, m = nm
        n_prime, n_total = expected
        for count in (count_structures_enumerative(n, m), count_structures_formula(n, m)):
            assert (count.n_prime, count.n_total) == (n_prime, n_total)

    def test_methods_agree_on_small_sweep(self):
        for n in range(2, 6):
            for m in range((n + 1) // 2, max_edges(n) + 1):
                enum = count_structures_enumerative(n, m)
                formula = count_structures_formula(n, m)
                assert enum.n_prime == formula.n_prime, (n, m)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_sum_over_m_matches_unconstrained_enumeration(self, n):
        # independent total: scan subsets of every size with the same checks
        from sallyanne.belief_graph import _closure_ok

        candidates = [(u, v) for v in range(n) for u in range(v + 1, n)]
        total = 0
        for mask in range(1 << len(candidates)):
            chosen = [candidates[i] for i in range(len(candidates)) if mask >> i & 1]
            touched = {x for e in chosen for x in e}
            if len(touched) != n:
                continue
            parent_sets = [set() for _ in range(n)]
            for u, v in chosen:
                parent_sets[v].add(u)
            total += _closure_ok(n, parent_sets)
        by_m = sum(
            count_structures_formula(n, m).n_prime
            for m in range((n + 1) // 2, max_edges(n) + 1)
        )
        assert by_m == total

    def test_invalid_configs(self):
        for fn in (count_structures_enumerative, count_structures_formula):
            with pytest.raises(InvalidConfigError):
                fn(1, 1)
            with pytest.raises(InvalidConfigError):
                fn(4, 7)
            with pytest.raises(InvalidConfigError):
                fn(6, 2)


class TestSemanticCounts:
    @pytest.mark.parametrize("n,expected", [(4, 81), (5, 72), (6, 64)])
    def test_character_combinations(self, n, expected):
        count_c, _, _ = semantic_expansion_counts(n, 3)
        assert count_c == expected

    @pytest.mark.parametrize("q", [3, 4])
    def test_container_combinations(self, q):
        _, count_b, _ = semantic_expansion_counts(4, q)
        assert count_b == 36

    def test_matches_block_products(self):
        # independent route: multiply actual block sizes from the pool splitter
        pools = load_pools()
        for n in (2, 3, 4, 5, 6):
            for q in (1, 2, 3, 4):
                count_c, count_b, count_a = semantic_expansion_counts(n, q)
                import math

                assert count_c == math.prod(
                    len(b) for b in partition_pool(len(pools.characters), n)
                )
                assert count_b == math.prod(
                    len(b) for b in partition_pool(len(pools.containers), q)
                )
                assert count_a == len(pools.objects)

    def test_brute_force_product_for_four_characters(self):
        blocks = partition_pool(12, 4)
        combos = list(itertools.product(*blocks))
        assert len(combos) == 81
        assert len(set(combos)) == 81

    def test_out_of_range(self):
        with pytest.raises(InvalidConfigError):
            semantic_expansion_counts(13, 3)
        with pytest.raises(InvalidConfigError):
            semantic_expansion_counts(4, 11)


class TestDatasetSize:
    @pytest.mark.parametrize("nmq,expected", sorted(REFERENCE_SIZES.items()))
    def test_reference_table(self, nmq, expected):
        total, train, test = dataset_size(*nmq)
        assert (train, test) == expected
        assert total == train + test

    @pytest.mark.parametrize("nmq", sorted(REFERENCE_SIZES))
    def test_divisibility(self, nmq):
        n, m, q = nmq
        total, _, _ = dataset_size(n, m, q)
        count_c, count_b, count_a = semantic_expansion_counts(n, q)
        assert total % 120 == 0
        assert total % (count_a * count_c * count_b) == 0

    def test_bad_split(self):
        with pytest.raises(InvalidConfigError):
            dataset_size(4, 4, 3, structure_cap=120, train_structures=120)


class TestDensity:
    def test_reference_densities(self):
        assert graph_density(6, 7) == pytest.approx(0.4667, abs=5e-5)
        assert graph_density(4, 4) == pytest.approx(0.6667, abs=5e-5)
        assert graph_density(5, 8) == pytest.approx(0.80)

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_complete_graph(self, n):
        assert graph_density(n, comb(n, 2)) == 1.0

    def test_needs_two_nodes(self):
        with pytest.raises(InvalidConfigError):
            graph_density(1, 0)


def test_count_report_consistency():
    report = count_structures_formula(5, 7)
    assert report.n_total == factorial(5) * report.n_prime
    assert report.method == "formula"
