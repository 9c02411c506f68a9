"""Scene templates, semantic filling and the inverse scene parser.

A template is the placeholder narrative implied by a character order: the
container declaration, the initial object location, then per exit an optional
entry sentence, a move sentence and an exit sentence. Instantiation fills the
placeholders from partitioned semantic pools and draws the object locations
from a caller-supplied random stream; parsing inverts a rendered scene back
to its structure, beliefs and initial location. All sentence wording lives in
one grammar file shared by the renderer and the parser.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from random import Random
from typing import Iterator, NamedTuple

from .belief_graph import CharacterOrder, GraphStructure
from .errors import InvalidConfigError, ParseError, SelectionError

_FORBIDDEN_IN_POOLS = set("[]{}%\n\t")


@dataclass(frozen=True)
class Grammar:
    """Frozen sentence wording for rendering and parsing."""

    version: int
    intro_head: str
    intro_item: str
    intro_sep: str
    intro_last: str
    intro_tail: str
    initial: str
    enter_sep: str
    enter_tail: str
    move: str
    exit: str
    query_head: str
    query_nested: str
    query_tail: str


@dataclass(frozen=True)
class SemanticPools:
    """Ordered name pools for characters, containers and objects."""

    characters: tuple[str, ...]
    containers: tuple[str, ...]
    objects: tuple[str, ...]

    def __post_init__(self) -> None:
        for label, pool in (
            ("characters", self.characters),
            ("containers", self.containers),
            ("objects", self.objects),
        ):
            if len(set(pool)) != len(pool):
                raise InvalidConfigError(f"duplicate entries in {label} pool")
            for word in pool:
                if not word or " " in word or set(word) & _FORBIDDEN_IN_POOLS:
                    raise InvalidConfigError(
                        f"pool entry {word!r} in {label} is not a plain word"
                    )


def _packaged(name: str) -> str:
    return resources.files("sallyanne").joinpath(f"data/{name}").read_text("utf-8")


def load_grammar(path: str | Path | None = None) -> Grammar:
    """Load the grammar file; the packaged one when no path is given."""
    if path is None:
        return _default_grammar()
    return _parse_grammar(Path(path).read_text("utf-8"))


@lru_cache(maxsize=1)
def _default_grammar() -> Grammar:
    return _parse_grammar(_packaged("grammar.json"))


def _parse_grammar(raw: str) -> Grammar:
    data = json.loads(raw)
    try:
        scene, query = data["scene"], data["query"]
        return Grammar(
            version=data["version"],
            intro_head=scene["intro_head"],
            intro_item=scene["intro_item"],
            intro_sep=scene["intro_sep"],
            intro_last=scene["intro_last"],
            intro_tail=scene["intro_tail"],
            initial=scene["initial"],
            enter_sep=scene["enter_sep"],
            enter_tail=scene["enter_tail"],
            move=scene["move"],
            exit=scene["exit"],
            query_head=query["head"],
            query_nested=query["nested"],
            query_tail=query["tail"],
        )
    except KeyError as e:
        raise InvalidConfigError(f"grammar file missing key {e}") from e


def load_pools(path: str | Path | None = None) -> SemanticPools:
    """Load the semantic pools file; the packaged one when no path is given."""
    if path is None:
        return _default_pools()
    return _parse_pools(Path(path).read_text("utf-8"))


@lru_cache(maxsize=1)
def _default_pools() -> SemanticPools:
    return _parse_pools(_packaged("pools.json"))


def _parse_pools(raw: str) -> SemanticPools:
    data = json.loads(raw)
    try:
        return SemanticPools(
            characters=tuple(data["characters"]),
            containers=tuple(data["containers"]),
            objects=tuple(data["objects"]),
        )
    except KeyError as e:
        raise InvalidConfigError(f"pools file missing key {e}") from e


@lru_cache(maxsize=None)
def partition_pool(pool_size: int, parts: int) -> tuple[range, ...]:
    """Split indices 0..pool_size-1 into `parts` floor-boundary blocks."""
    if not 1 <= parts <= pool_size:
        raise InvalidConfigError(f"cannot split pool of {pool_size} into {parts}")
    bounds = [pool_size * i // parts for i in range(parts + 1)]
    return tuple(range(lo, hi) for lo, hi in zip(bounds, bounds[1:]))


@dataclass(frozen=True)
class SceneTemplate:
    """Placeholder narrative for one structure and container count."""

    n: int
    q: int
    steps: tuple
    text: str
    structure_id: str | None = None


@dataclass(frozen=True)
class Selection:
    """One point of the semantic cross-product: absolute pool indices."""

    characters: tuple[int, ...]
    containers: tuple[int, ...]
    object_index: int


@dataclass(frozen=True)
class SceneInstance:
    """A fully rendered scene plus the assignments that produced it."""

    structure_id: str | None
    character_names: tuple[str, ...]
    container_names: tuple[str, ...]
    object_name: str
    initial_container: int
    beliefs: tuple[int, ...]
    text: str

    @property
    def n(self) -> int:
        return len(self.character_names)

    @property
    def q(self) -> int:
        return len(self.container_names)


def _intro_sentence(grammar: Grammar, container_labels: list[str]) -> str:
    items = [grammar.intro_item.format(container=c) for c in container_labels]
    if len(items) > 1:
        items[-1] = grammar.intro_last + items[-1]
    return grammar.intro_head + grammar.intro_sep.join(items) + grammar.intro_tail


def _sentences(
    grammar: Grammar,
    steps: tuple,
    containers: list[str],
    characters: list[str],
    obj: str,
    initial: str,
    moves: list[str],
) -> list[str]:
    """Assemble the scene sentences; `moves[t]` is step t's target container."""
    lines = [
        _intro_sentence(grammar, containers),
        grammar.initial.format(object=obj, container=initial),
    ]
    for t, step in enumerate(steps):
        if step.enter:
            names = grammar.enter_sep.join(characters[v] for v in step.enter)
            lines.append(names + grammar.enter_tail)
        who = characters[step.exit]
        lines.append(grammar.move.format(character=who, object=obj, container=moves[t]))
        lines.append(grammar.exit.format(character=who))
    return lines


def render_template(
    order: CharacterOrder,
    q: int,
    grammar: Grammar | None = None,
    structure_id: str | None = None,
) -> SceneTemplate:
    """Expand a character order into the placeholder scene narrative."""
    grammar = grammar or load_grammar()
    steps = order.steps
    n = len(steps)
    text = "\n".join(
        _sentences(
            grammar,
            steps,
            containers=[f"[b_{j + 1}]" for j in range(q)],
            characters=[f"[c_{v + 1}]" for v in range(n)],
            obj="[a]",
            initial="[b~]",
            moves=["[b~]"] * n,
        )
    )
    return SceneTemplate(n=n, q=q, steps=steps, text=text, structure_id=structure_id)


def iter_selections(pools: SemanticPools, n: int, q: int) -> Iterator[Selection]:
    """The full semantic cross-product in lexicographic order.

    Characters vary slowest, then containers, then the object; each character
    or container placeholder draws only from its own pool block.
    """
    char_blocks = partition_pool(len(pools.characters), n)
    cont_blocks = partition_pool(len(pools.containers), q)
    for chars in itertools.product(*char_blocks):
        for conts in itertools.product(*cont_blocks):
            for obj in range(len(pools.objects)):
                yield Selection(characters=chars, containers=conts, object_index=obj)


@lru_cache(maxsize=512)
def compiled_render(template: SceneTemplate, grammar: Grammar) -> tuple[str, tuple[int, ...]]:
    """Precompile a template into a %-format string plus argument indices.

    The format string is obtained by rendering the ordinary sentence assembly
    with sentinel tokens and splitting on them, so it cannot drift from the
    placeholder path. Argument indices address the flat tuple
    names + containers + (object, initial) + move targets.
    """
    n, q = template.n, template.q
    text = "\n".join(
        _sentences(
            grammar,
            template.steps,
            containers=["\x00b%d\x00" % j for j in range(q)],
            characters=["\x00c%d\x00" % v for v in range(n)],
            obj="\x00a0\x00",
            initial="\x00i0\x00",
            moves=["\x00m%d\x00" % t for t in range(n)],
        )
    )
    offsets = {"c": 0, "b": n, "a": n + q, "i": n + q + 1, "m": n + q + 2}
    parts = re.split("\x00([a-z])(\\d+)\x00", text)
    fmt: list[str] = []
    plan: list[int] = []
    i = 0
    while i < len(parts):
        fmt.append(parts[i].replace("%", "%%"))
        if i + 2 < len(parts):
            fmt.append("%s")
            plan.append(offsets[parts[i + 1]] + int(parts[i + 2]))
        i += 3
    return "".join(fmt), tuple(plan)


def _check_selection(pools: SemanticPools, template: SceneTemplate, sel: Selection) -> None:
    char_blocks = partition_pool(len(pools.characters), template.n)
    cont_blocks = partition_pool(len(pools.containers), template.q)
    if len(sel.characters) != template.n or len(sel.containers) != template.q:
        raise SelectionError("selection arity does not match the template")
    for i, idx in enumerate(sel.characters):
        if idx not in char_blocks[i]:
            raise SelectionError(f"character pick {idx} outside block {i}")
    for j, idx in enumerate(sel.containers):
        if idx not in cont_blocks[j]:
            raise SelectionError(f"container pick {idx} outside block {j}")
    if not 0 <= sel.object_index < len(pools.objects):
        raise SelectionError(f"object pick {sel.object_index} out of range")


def instantiate(
    template: SceneTemplate,
    pools: SemanticPools,
    selection: Selection,
    rng: Random,
    grammar: Grammar | None = None,
) -> SceneInstance:
    """Fill a template with one semantic selection and seeded location draws.

    The random stream is consumed in a fixed order: the initial location
    first, then one belief draw per step in exit order, all uniform with
    replacement over the q chosen containers.
    """
    grammar = grammar or load_grammar()
    _check_selection(pools, template, selection)
    names = tuple(pools.characters[i] for i in selection.characters)
    conts = tuple(pools.containers[j] for j in selection.containers)
    obj = pools.objects[selection.object_index]

    q = template.q
    initial = rng.randrange(q)
    beliefs = [0] * template.n
    moves: list[str] = []
    for step in template.steps:
        pick = rng.randrange(q)
        beliefs[step.exit] = pick
        moves.append(conts[pick])

    fmt, plan = compiled_render(template, grammar)
    flat = names + conts + (obj, conts[initial]) + tuple(moves)
    text = fmt % tuple(flat[i] for i in plan)
    return SceneInstance(
        structure_id=template.structure_id,
        character_names=names,
        container_names=conts,
        object_name=obj,
        initial_container=initial,
        beliefs=tuple(beliefs),
        text=text,
    )


def declared_containers(text: str, grammar: Grammar | None = None) -> list[str]:
    """Container names from a scene's declaration sentence, in order."""
    grammar = grammar or load_grammar()
    return _parse_intro(text.split("\n", 1)[0], grammar)


class ParsedScene(NamedTuple):
    structure: GraphStructure
    beliefs: tuple[int, ...]
    initial_container: int


def _template_regex(template: str) -> re.Pattern[str]:
    pattern = re.escape(template)
    for field in ("character", "object", "container"):
        pattern = pattern.replace(re.escape("{%s}" % field), f"(?P<{field}>\\S+)")
    return re.compile("^" + pattern + "$")


@lru_cache(maxsize=8)
def _line_parsers(grammar: Grammar) -> dict[str, re.Pattern[str]]:
    return {
        "initial": _template_regex(grammar.initial),
        "move": _template_regex(grammar.move),
        "exit": _template_regex(grammar.exit),
        "enter": re.compile("^(?P<names>.+)" + re.escape(grammar.enter_tail) + "$"),
    }


def _parse_intro(line: str, grammar: Grammar) -> list[str]:
    if not line.startswith(grammar.intro_head) or not line.endswith(grammar.intro_tail):
        raise ParseError(f"bad container declaration: {line!r}")
    body = line[len(grammar.intro_head) : len(line) - len(grammar.intro_tail)]
    items = body.split(grammar.intro_sep)
    if len(items) > 1:
        if not items[-1].startswith(grammar.intro_last):
            raise ParseError(f"missing list conjunction in: {line!r}")
        items[-1] = items[-1][len(grammar.intro_last) :]
    item_re = _template_regex(grammar.intro_item)
    names: list[str] = []
    for item in items:
        m = item_re.match(item)
        if not m:
            raise ParseError(f"bad container item {item!r}")
        names.append(m.group("container"))
    return names


def parse_scene(
    text: str,
    pools: SemanticPools,
    grammar: Grammar | None = None,
) -> ParsedScene:
    """Invert a rendered scene back to (structure, beliefs, initial location).

    The exit order is read off the exit sentences, edges from who was in the
    room at each exit, and beliefs from the move sentences. Names map to node
    ids through their pool blocks, which is what makes the inversion exact.
    """
    grammar = grammar or load_grammar()
    parsers = _line_parsers(grammar)
    lines = text.split("\n")
    if len(lines) < 2:
        raise ParseError("scene too short")

    containers = _parse_intro(lines[0], grammar)
    q = len(containers)
    cont_index = {name: j for j, name in enumerate(containers)}

    m_init = parsers["initial"].match(lines[1])
    if not m_init:
        raise ParseError(f"bad initial-location sentence: {lines[1]!r}")
    obj = m_init.group("object")
    if obj not in pools.objects:
        raise ParseError(f"unknown object {obj!r}")
    if m_init.group("container") not in cont_index:
        raise ParseError(f"initial container {m_init.group('container')!r} undeclared")
    initial = cont_index[m_init.group("container")]

    # count the exits to learn n, then map names through their pool blocks
    n = sum(1 for line in lines[2:] if parsers["exit"].match(line))
    if n < 2:
        raise ParseError("fewer than two exit sentences")
    char_blocks = partition_pool(len(pools.characters), n)
    pool_pos = {name: i for i, name in enumerate(pools.characters)}

    def node_of(name: str) -> int:
        if name not in pool_pos:
            raise ParseError(f"unknown character {name!r}")
        pos = pool_pos[name]
        for v, block in enumerate(char_blocks):
            if pos in block:
                return v
        raise ParseError(f"character {name!r} outside all blocks")

    for j, name in enumerate(containers):
        pos = pools.containers.index(name) if name in pools.containers else -1
        if pos < 0 or pos not in partition_pool(len(pools.containers), q)[j]:
            raise ParseError(f"container {name!r} not in block {j}")

    room: list[int] = []
    entered: set[int] = set()
    exited: list[int] = []
    beliefs: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    pending_move: tuple[int, int] | None = None

    for line in lines[2:]:
        m = parsers["exit"].match(line)
        if m:
            node = node_of(m.group("character"))
            if node not in room:
                raise ParseError(f"{m.group('character')} exited while absent")
            if pending_move is None or pending_move[0] != node:
                raise ParseError(f"exit of {m.group('character')} without a move")
            beliefs[node] = pending_move[1]
            pending_move = None
            for occupant in room:
                if occupant != node:
                    edges.add((occupant, node))
            room.remove(node)
            exited.append(node)
            continue
        m = parsers["move"].match(line)
        if m:
            if pending_move is not None:
                raise ParseError("two moves without an exit between them")
            node = node_of(m.group("character"))
            if node not in room:
                raise ParseError(f"{m.group('character')} moved while absent")
            if m.group("object") != obj:
                raise ParseError(f"unexpected object {m.group('object')!r}")
            target = m.group("container")
            if target not in cont_index:
                raise ParseError(f"move to undeclared container {target!r}")
            pending_move = (node, cont_index[target])
            continue
        m = parsers["enter"].match(line)
        if m:
            if pending_move is not None:
                raise ParseError("entry between a move and its exit")
            for name in m.group("names").split(grammar.enter_sep):
                node = node_of(name)
                if node in entered:
                    raise ParseError(f"{name} entered twice")
                entered.add(node)
                room.append(node)
            continue
        raise ParseError(f"unrecognized sentence: {line!r}")

    if pending_move is not None:
        raise ParseError("scene ends on a move without an exit")
    if room:
        raise ParseError(f"scene ends with occupants still present: {room}")
    if len(exited) != n or set(exited) != set(range(n)):
        raise ParseError("exit sentences do not cover every character exactly once")

    structure = GraphStructure(
        n=n, exit_order=tuple(exited), edges=frozenset(edges)
    )
    return ParsedScene(
        structure=structure,
        beliefs=tuple(beliefs[v] for v in range(n)),
        initial_container=initial,
    )


__all__ = [
    "Grammar",
    "declared_containers",
    "ParsedScene",
    "SceneInstance",
    "SceneTemplate",
    "Selection",
    "SemanticPools",
    "instantiate",
    "iter_selections",
    "load_grammar",
    "load_pools",
    "parse_scene",
    "partition_pool",
    "render_template",
    "compiled_render",
]
