"""Belief-graph structures, exhaustive enumeration and entrance/exit orders.

A structure is a labeled DAG over character nodes together with a fixed exit
order: position ``p`` of ``exit_order`` names the node that leaves the room
``p``-th. Edges ``(u, v)`` mean "u holds a true belief about v" and must point
from a later-exiting node to an earlier-exiting one. Valid structures
additionally contain no isolated node and survive the room-closure replay
performed by :func:`derive_character_order`.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial

from .errors import ClosureViolationError, InvalidConfigError

Edge = tuple[int, int]


@dataclass(frozen=True)
class GraphStructure:
    """A labeled belief DAG with its exit order."""

    n: int
    exit_order: tuple[int, ...]
    edges: frozenset[Edge]

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def structure_id(self) -> str:
        """Stable content hash of (exit_order, sorted edges)."""
        payload = "v1|n=%d|x=%s|e=%s" % (
            self.n,
            ",".join(map(str, self.exit_order)),
            ";".join("%d,%d" % e for e in self.sorted_edges),
        )
        return hashlib.blake2b(payload.encode(), digest_size=8).hexdigest()

    @cached_property
    def parents(self) -> tuple[frozenset[int], ...]:
        """parents[v] = nodes holding a true belief about v."""
        out: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            out[v].add(u)
        return tuple(frozenset(s) for s in out)

    def exit_position(self, node: int) -> int:
        return self.exit_order.index(node)


@dataclass(frozen=True)
class OrderStep:
    """One step of the entrance/exit sequence: who walks in, who walks out."""

    enter: tuple[int, ...]
    exit: int


@dataclass(frozen=True)
class CharacterOrder:
    steps: tuple[OrderStep, ...]


def max_edges(n: int) -> int:
    return n * (n - 1) // 2


def _require_valid_nm(n: int, m: int) -> None:
    if n < 2:
        raise InvalidConfigError(f"need at least 2 nodes, got n={n}")
    if not 1 <= m <= max_edges(n):
        raise InvalidConfigError(f"m={m} outside [1, {max_edges(n)}] for n={n}")
    if m < (n + 1) // 2:
        raise InvalidConfigError(
            f"m={m} cannot touch all {n} nodes (need at least ceil(n/2))"
        )


def check_acyclic(structure: GraphStructure) -> bool:
    """True iff every edge points from a later-exiting to an earlier-exiting node."""
    pos = {node: p for p, node in enumerate(structure.exit_order)}
    return all(pos[u] > pos[v] for u, v in structure.edges)


def check_no_isolated(structure: GraphStructure) -> bool:
    """True iff every node appears in at least one edge."""
    touched: set[int] = set()
    for u, v in structure.edges:
        touched.add(u)
        touched.add(v)
    return len(touched) == structure.n


def derive_character_order(structure: GraphStructure) -> CharacterOrder:
    """Replay the exit order and derive who enters and leaves at each step.

    Walks ``exit_order`` left to right keeping a room roster. The current
    node enters (unless already present) together with all of its absent
    parents; every other occupant must then be a parent of the exiting node,
    otherwise the structure is invalid and :class:`ClosureViolationError`
    identifies the offending (occupant, exiter) pair. After a valid step the
    room equals exactly the exiter's parent set.
    """
    parents = structure.parents
    room: list[int] = []
    in_room = [False] * structure.n
    steps: list[OrderStep] = []
    for node in structure.exit_order:
        entering: list[int] = []
        if not in_room[node]:
            entering.append(node)
        for p in sorted(parents[node]):
            if not in_room[p]:
                entering.append(p)
        for p in entering:
            in_room[p] = True
            room.append(p)
        for occupant in room:
            if occupant != node and occupant not in parents[node]:
                raise ClosureViolationError(occupant, node)
        room.remove(node)
        in_room[node] = False
        steps.append(OrderStep(enter=tuple(entering), exit=node))
        # invariant from the closure constraint: the room is now P(node)
        assert set(room) == set(parents[node])
    assert not room
    return CharacterOrder(steps=tuple(steps))


def _closure_ok(n: int, parent_sets: list[set[int]]) -> bool:
    """Fast closure replay over canonical positions 0 < 1 < ... < n-1."""
    room: set[int] = set()
    for v in range(n):
        if not room <= parent_sets[v] | {v}:
            return False
        room = parent_sets[v]
    return True


@lru_cache(maxsize=None)
def canonical_edge_sets(n: int, m: int) -> tuple[tuple[Edge, ...], ...]:
    """All valid m-edge sets under the canonical exit order 0,1,...,n-1.

    Exhaustively scans every ``C(C(n,2), m)`` backward-edge subset and keeps
    those with no isolated node that pass the closure replay. Sorted
    lexicographically; cached per (n, m).
    """
    _require_valid_nm(n, m)
    candidates = [(u, v) for v in range(n) for u in range(v + 1, n)]
    kept: list[tuple[Edge, ...]] = []
    for subset in itertools.combinations(candidates, m):
        touched: set[int] = set()
        parent_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in subset:
            touched.add(u)
            touched.add(v)
            parent_sets[v].add(u)
        if len(touched) != n:
            continue
        if _closure_ok(n, parent_sets):
            kept.append(tuple(sorted(subset)))
    kept.sort()
    return tuple(kept)


def enumerate_structures(n: int, m: int) -> list[GraphStructure]:
    """Every valid structure across all n! exit orders, deterministically ordered.

    Validity of an edge set depends only on edge positions within the exit
    order, so the canonical sets are relabeled through each permutation
    instead of rescanning subsets. Output is sorted lexicographically by
    exit order, then by sorted edge set.
    """
    canonical = canonical_edge_sets(n, m)
    out: list[GraphStructure] = []
    for perm in itertools.permutations(range(n)):
        relabeled = sorted(
            tuple(sorted((perm[j], perm[i]) for j, i in edge_set))
            for edge_set in canonical
        )
        out.extend(
            GraphStructure(n=n, exit_order=perm, edges=frozenset(edge_set))
            for edge_set in relabeled
        )
    return out


def population_size(n: int, m: int) -> int:
    """|enumerate_structures(n, m)| without materializing the structures."""
    return factorial(n) * len(canonical_edge_sets(n, m))


__all__ = [
    "CharacterOrder",
    "Edge",
    "GraphStructure",
    "OrderStep",
    "canonical_edge_sets",
    "check_acyclic",
    "check_no_isolated",
    "derive_character_order",
    "enumerate_structures",
    "max_edges",
    "population_size",
]
