"""Belief-flow queries, ground-truth derivation and the event-replay check.

The ground truth of a k-order flow follows an active-holder rule: start with
the first character as the only holder; each subsequent character joins the
holder chain only if every current holder has a true-belief edge to it. The
answer is the belief of the last holder. For k=1 this is the character's own
belief, for k=2 it reduces to the single-edge rule, and for k=3 it reproduces
every acyclic three-node configuration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Iterable

from .belief_graph import GraphStructure
from .errors import InvalidConfigError, ParseError
from .scene import Grammar, SceneInstance, load_grammar

DEFAULT_MAX_ORDER = 3


@dataclass(frozen=True)
class BeliefFlow:
    """Ordered chain of distinct characters named by a query."""

    characters: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.characters)

    def __post_init__(self) -> None:
        if len(set(self.characters)) != len(self.characters):
            raise InvalidConfigError(f"flow repeats a character: {self.characters}")


def sample_flow(
    structure: GraphStructure,
    k: int,
    rng: Random,
    max_order: int = DEFAULT_MAX_ORDER,
) -> BeliefFlow:
    """Draw k distinct characters uniformly without replacement."""
    if not 1 <= k <= structure.n:
        raise InvalidConfigError(f"order k={k} outside [1, {structure.n}]")
    if k > max_order:
        raise InvalidConfigError(
            f"order k={k} above the supported ceiling {max_order}; "
            "raise max_order explicitly to extrapolate"
        )
    if k == 1:
        return BeliefFlow(characters=(rng.randrange(structure.n),))
    return BeliefFlow(characters=tuple(rng.sample(range(structure.n), k)))


def render_query(
    flow: BeliefFlow, scene: SceneInstance, grammar: Grammar | None = None
) -> str:
    """Nested think/thinks phrasing over the instantiated names."""
    grammar = grammar or load_grammar()
    names = [scene.character_names[v] for v in flow.characters]
    text = grammar.query_head.format(character=names[0])
    for name in names[1:]:
        text += grammar.query_nested.format(character=name)
    return text + grammar.query_tail.format(object=scene.object_name)


def _resolve_flow(edges: Iterable[tuple[int, int]], flow: tuple[int, ...]) -> int:
    """Active-holder recursion; returns the character whose belief answers."""
    edge_set = set(edges)
    holders = [flow[0]]
    for nxt in flow[1:]:
        if all((holder, nxt) in edge_set for holder in holders):
            holders.append(nxt)
    return holders[-1]


def derive_truth(
    structure: GraphStructure, beliefs: tuple[int, ...], flow: BeliefFlow
) -> int:
    """Ground-truth container index for a flow over a scene's structure."""
    for v in flow.characters:
        if not 0 <= v < structure.n:
            raise InvalidConfigError(f"flow names unknown character {v}")
    return beliefs[_resolve_flow(structure.edges, flow.characters)]


# Pair states for the three-character table: which way each unordered pair
# points. 0 = no edge, 1 = earlier flow character -> later, 2 = reverse.
PAIR_ABSENT, PAIR_FORWARD, PAIR_BACKWARD = 0, 1, 2
_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class TruthCase:
    """One of the 27 three-character configurations and its verdict."""

    pair_states: tuple[int, int, int]
    edges: tuple[tuple[int, int], ...]
    cyclic: bool
    answer: int | None  # index into the flow, None when cyclic


def _case_edges(states: tuple[int, int, int]) -> tuple[tuple[int, int], ...]:
    edges = []
    for (i, j), state in zip(_PAIRS, states):
        if state == PAIR_FORWARD:
            edges.append((i, j))
        elif state == PAIR_BACKWARD:
            edges.append((j, i))
    return tuple(edges)


def _has_cycle(edges: tuple[tuple[int, int], ...]) -> bool:
    adjacency = {u: set() for u in range(3)}
    for u, v in edges:
        adjacency[u].add(v)
    for start in range(3):
        stack, seen = [(start, iter(adjacency[start]))], {start}
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == start:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, iter(adjacency[nxt])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
    return False


def truth_table_k3() -> tuple[TruthCase, ...]:
    """All 3^3 edge configurations of a three-character flow.

    Two configurations are cyclic and can never arise from a valid structure;
    the rest carry the active-holder answer as an index into the flow.
    """
    cases = []
    for states in itertools.product(
        (PAIR_ABSENT, PAIR_FORWARD, PAIR_BACKWARD), repeat=3
    ):
        edges = _case_edges(states)
        cyclic = _has_cycle(edges)
        answer = None if cyclic else _resolve_flow(edges, (0, 1, 2))
        cases.append(
            TruthCase(pair_states=states, edges=edges, cyclic=cyclic, answer=answer)
        )
    return tuple(cases)


def classify_triple(
    structure: GraphStructure, flow: BeliefFlow
) -> tuple[int, int, int]:
    """Pair states of a 3-character flow embedded in a structure."""
    assert flow.k == 3
    chars = flow.characters
    states = []
    for i, j in _PAIRS:
        a, b = chars[i], chars[j]
        if (a, b) in structure.edges:
            states.append(PAIR_FORWARD)
        elif (b, a) in structure.edges:
            states.append(PAIR_BACKWARD)
        else:
            states.append(PAIR_ABSENT)
    return tuple(states)


def replay_oracle(
    scene: SceneInstance, grammar: Grammar | None = None
) -> tuple[frozenset[tuple[int, int]], tuple[int, ...]]:
    """Reconstruct (edges, beliefs) by simulating the scene's event text.

    Independent of the scene parser: walks the sentences tracking who is in
    the room and where the object is. Each exit fixes the exiting character's
    belief at their own move target and records a knowledge edge from every
    remaining witness to the exiter.
    """
    grammar = grammar or load_grammar()
    name_to_node = {name: v for v, name in enumerate(scene.character_names)}
    cont_to_index = {name: j for j, name in enumerate(scene.container_names)}

    lines = scene.text.split("\n")
    if len(lines) < 2:
        raise ParseError("scene too short to replay")
    # object position: read the initial sentence, then follow the moves
    target = _strip_wrapping(lines[1], grammar.initial, scene.object_name)
    if target is None or target not in cont_to_index:
        raise ParseError(f"cannot locate the object initially: {lines[1]!r}")
    location = cont_to_index[target]

    room: list[int] = []
    beliefs: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    mover: int | None = None

    for line in lines[2:]:
        if line.endswith(grammar.enter_tail):
            body = line[: -len(grammar.enter_tail)]
            for name in body.split(grammar.enter_sep):
                if name not in name_to_node:
                    raise ParseError(f"unknown name entering: {name!r}")
                room.append(name_to_node[name])
            continue
        move = _match_move(line, grammar, scene)
        if move is not None:
            who, where = move
            if who not in room:
                raise ParseError("a character moved the object while absent")
            location = where
            mover = who
            continue
        exit_name = _strip_suffix_sentence(line, grammar.exit)
        if exit_name is not None:
            if exit_name not in name_to_node:
                raise ParseError(f"unknown name exiting: {exit_name!r}")
            node = name_to_node[exit_name]
            if mover != node:
                raise ParseError("exit without a preceding move by the same character")
            beliefs[node] = location
            for witness in room:
                if witness != node:
                    edges.add((witness, node))
            room.remove(node)
            mover = None
            continue
        raise ParseError(f"unrecognized event sentence: {line!r}")

    if room or len(beliefs) != scene.n:
        raise ParseError("replay did not end with an empty room")
    return frozenset(edges), tuple(beliefs[v] for v in range(scene.n))


def _strip_wrapping(line: str, template: str, obj: str) -> str | None:
    """Extract {container} from a template with {object} already known."""
    probe = template.format(object=obj, container="\x00")
    head, _, tail = probe.partition("\x00")
    if line.startswith(head) and line.endswith(tail):
        return line[len(head) : len(line) - len(tail)]
    return None


def _match_move(
    line: str, grammar: Grammar, scene: SceneInstance
) -> tuple[int, int] | None:
    for v, name in enumerate(scene.character_names):
        probe = grammar.move.format(
            character=name, object=scene.object_name, container="\x00"
        )
        head, _, tail = probe.partition("\x00")
        if line.startswith(head) and line.endswith(tail):
            target = line[len(head) : len(line) - len(tail)]
            if target in scene.container_names:
                return v, scene.container_names.index(target)
    return None


def _strip_suffix_sentence(line: str, template: str) -> str | None:
    probe = template.format(character="\x00")
    head, _, tail = probe.partition("\x00")
    if line.startswith(head) and line.endswith(tail) and len(line) > len(head) + len(tail):
        return line[len(head) : len(line) - len(tail)]
    return None


__all__ = [
    "BeliefFlow",
    "DEFAULT_MAX_ORDER",
    "PAIR_ABSENT",
    "PAIR_BACKWARD",
    "PAIR_FORWARD",
    "TruthCase",
    "classify_triple",
    "derive_truth",
    "render_query",
    "replay_oracle",
    "sample_flow",
    "truth_table_k3",
]
