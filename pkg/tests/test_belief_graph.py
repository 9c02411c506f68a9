"""Structure enumeration, validity checks and character-order derivation."""

from __future__ import annotations

import pytest

from sallyanne.belief_graph import (
    GraphStructure,
    canonical_edge_sets,
    check_acyclic,
    check_no_isolated,
    derive_character_order,
    enumerate_structures,
    population_size,
)
from sallyanne.errors import ClosureViolationError, InvalidConfigError


def make(n, exit_order, edges):
    return GraphStructure(n=n, exit_order=tuple(exit_order), edges=frozenset(edges))


class TestChecks:
    def test_backward_edges_are_acyclic(self):
        for structure in enumerate_structures(4, 4):
            assert check_acyclic(structure)

    def test_two_cycle_rejected(self):
        assert not check_acyclic(make(2, (0, 1), {(0, 1), (1, 0)}))

    def test_three_cycle_rejected(self):
        assert not check_acyclic(make(3, (0, 1, 2), {(0, 1), (1, 2), (2, 0)}))

    def test_isolated_node_detected(self):
        assert not check_no_isolated(make(3, (0, 1, 2), {(2, 1)}))
        assert check_no_isolated(make(2, (0, 1), {(1, 0)}))

    def test_enumeration_never_isolates(self):
        assert all(check_no_isolated(s) for s in enumerate_structures(4, 4))


class TestCharacterOrder:
    def test_two_node_replay(self):
        order = derive_character_order(make(2, (0, 1), {(1, 0)}))
        assert [(s.enter, s.exit) for s in order.steps] == [((0, 1), 0), ((), 1)]

    def test_room_after_first_step_is_parent_set(self):
        structure = make(3, (0, 1, 2), {(1, 0), (2, 0), (2, 1)})
        order = derive_character_order(structure)
        # everyone walks in for step 0, and the room afterwards is {1, 2}
        assert order.steps[0].enter == (0, 1, 2)
        assert order.steps[1].enter == ()

    def test_nonobvious_pass_case(self):
        # only node 2 stays behind after step 0, and 2 is a parent of 1
        order = derive_character_order(make(3, (0, 1, 2), {(2, 0), (2, 1)}))
        assert [s.exit for s in order.steps] == [0, 1, 2]

    def test_closure_violation_identifies_pair(self):
        with pytest.raises(ClosureViolationError) as exc:
            derive_character_order(make(3, (0, 1, 2), {(1, 0), (2, 0)}))
        assert (exc.value.occupant, exc.value.exiter) == (2, 1)

    def test_every_node_enters_and_exits_once(self):
        for structure in enumerate_structures(4, 4):
            order = derive_character_order(structure)
            entered = [v for step in order.steps for v in step.enter]
            assert sorted(entered) == list(range(4))
            assert sorted(s.exit for s in order.steps) == list(range(4))


class TestEnumeration:
    def test_two_nodes_one_edge(self):
        structures = enumerate_structures(2, 1)
        assert [(s.exit_order, s.sorted_edges) for s in structures] == [
            ((0, 1), ((1, 0),)),
            ((1, 0), ((0, 1),)),
        ]

    def test_reference_population_sizes(self):
        assert len(enumerate_structures(4, 4)) == 120
        assert population_size(6, 8) == 59760

    @pytest.mark.parametrize("n,m", [(4, 4), (5, 7)])
    def test_all_emitted_structures_are_valid(self, n, m):
        structures = enumerate_structures(n, m)
        pos_cache = {}
        for structure in structures:
            derive_character_order(structure)  # closure filtering is complete
            pos = pos_cache.setdefault(
                structure.exit_order,
                {node: i for i, node in enumerate(structure.exit_order)},
            )
            for u, v in structure.edges:
                assert pos[u] > pos[v]
            assert check_no_isolated(structure)

    @pytest.mark.parametrize("n,m", [(4, 4), (5, 7), (5, 8)])
    def test_count_is_factorial_times_fixed_order(self, n, m):
        import math

        assert len(enumerate_structures(n, m)) == math.factorial(n) * len(
            canonical_edge_sets(n, m)
        )

    def test_enumeration_is_deterministic(self):
        ids = [s.structure_id for s in enumerate_structures(4, 4)]
        assert ids == [s.structure_id for s in enumerate_structures(4, 4)]
        assert len(set(ids)) == len(ids)

    def test_distinct_orders_distinct_structures(self):
        # isomorphic shapes with different exit orders stay distinct
        a = make(2, (0, 1), {(1, 0)})
        b = make(2, (1, 0), {(0, 1)})
        assert a != b and a.structure_id != b.structure_id

    @pytest.mark.parametrize(
        "n,m",
        [(1, 1), (4, 0), (4, 7), (3, 1), (2, 2)],
    )
    def test_invalid_configs_rejected(self, n, m):
        with pytest.raises(InvalidConfigError):
            enumerate_structures(n, m)
