"""Experimental-group construction: selection, generation, manifest, verify.

A group is one (n, m, q) configuration. Its structure population is capped
and split into train and held-out structures by a seeded shuffle. The train
file carries the full semantic cross-product of the train structures with
learn-order queries; the eval file carries fresh instantiations of all capped
structures with queries drawn over every order, so the scorer can report both
populations at every order. Held-out-structure records in the eval file are
the group's test set.

Every record is re-derivable in isolation: the per-scene random stream is a
stable hash of (master seed, role, structure, scene index), recorded in the
record itself, and the stream is consumed in a fixed order (instantiation
draws first, then one order pick and one flow draw per query).
"""

from __future__ import annotations

import hashlib
import json
import json.encoder
import multiprocessing
from dataclasses import dataclass, field
from operator import itemgetter
from pathlib import Path
from random import Random
from . import __version__
from .belief_graph import GraphStructure, derive_character_order, enumerate_structures
from .counting import (
    DEFAULT_STRUCTURE_CAP,
    DEFAULT_TRAIN_STRUCTURES,
    dataset_size,
    graph_density,
)
from .errors import InvalidConfigError, ParseError
from .oracle import derive_truth, render_query, sample_flow
from .scene import (
    Grammar,
    SceneTemplate,
    Selection,
    SemanticPools,
    compiled_render,
    instantiate,
    iter_selections,
    load_grammar,
    load_pools,
    parse_scene,
    render_template,
)

MANIFEST_NAME = "manifest.json"
TRAIN_FILE = "train.jsonl"
EVAL_FILE = "eval.jsonl"
FORMAT_VERSION = 1

SPLIT_TRAIN = "train"
SPLIT_HELDOUT = "test-structure"
ROLE_LEARN = "learn"
ROLE_EVAL = "eval"

DENSITY_RANGE = (0.40, 0.80)

RECORD_FIELDS = (
    "sample_id",
    "n",
    "m",
    "q",
    "k",
    "structure_id",
    "split",
    "role",
    "flow",
    "scene",
    "query",
    "answer",
    "seed",
)


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from arbitrary parts; independent of process state."""
    payload = "|".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


# the exact string escaper used by json.dumps with ensure_ascii, so the bulk
# writer produces byte-identical lines to a json.dumps of the record dict
_escape = json.encoder.encode_basestring_ascii


@dataclass(frozen=True)
class GroupConfig:
    """Parameters of one experimental group."""

    n: int
    m: int
    q: int
    master_seed: int
    learn_orders: tuple[int, ...] = (1,)
    gen_orders: tuple[int, ...] = (2, 3)
    structure_cap: int = DEFAULT_STRUCTURE_CAP
    train_structures: int = DEFAULT_TRAIN_STRUCTURES
    samples_per_scene: int = 1
    pools_path: str | None = None
    grammar_path: str | None = None

    def validate(self) -> None:
        if not self.learn_orders or not self.gen_orders:
            raise InvalidConfigError("learn and generalization orders must be non-empty")
        if min(self.gen_orders) <= max(self.learn_orders):
            raise InvalidConfigError(
                "every generalization order must exceed every learning order"
            )
        if min(self.learn_orders) < 1:
            raise InvalidConfigError("orders start at 1")
        if max(self.gen_orders) > self.n:
            raise InvalidConfigError(
                f"order {max(self.gen_orders)} impossible with n={self.n}"
            )
        if not 0 < self.train_structures < self.structure_cap:
            raise InvalidConfigError(
                f"train structures {self.train_structures} must lie in "
                f"(0, {self.structure_cap})"
            )
        if self.samples_per_scene < 1:
            raise InvalidConfigError("samples_per_scene must be at least 1")
        density = graph_density(self.n, self.m)
        lo, hi = DENSITY_RANGE
        if not lo <= density <= hi + 1e-9:
            raise InvalidConfigError(
                f"density {density:.2f} for (n={self.n}, m={self.m}) outside "
                f"[{lo:.2f}, {hi:.2f}]"
            )

    @property
    def all_orders(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.learn_orders) | set(self.gen_orders)))


def select_structures(
    config: GroupConfig,
) -> tuple[list[GraphStructure], list[GraphStructure]]:
    """Cap the population and split it, deterministically in the master seed.

    Returns (train, held-out) lists, each in enumeration order.
    """
    structures = enumerate_structures(config.n, config.m)
    if config.structure_cap > len(structures):
        raise InvalidConfigError(
            f"cap {config.structure_cap} exceeds population {len(structures)} "
            f"for (n={config.n}, m={config.m})"
        )
    rng = Random(
        derive_seed(
            config.master_seed,
            "select",
            config.n,
            config.m,
            config.structure_cap,
            config.train_structures,
        )
    )
    chosen = sorted(rng.sample(range(len(structures)), config.structure_cap))
    shuffled = list(chosen)
    rng.shuffle(shuffled)
    train_idx = set(shuffled[: config.train_structures])
    train = [structures[i] for i in chosen if i in train_idx]
    heldout = [structures[i] for i in chosen if i not in train_idx]
    return train, heldout


@dataclass
class TaskSample:
    """Typed view of one serialized record."""

    sample_id: str
    n: int
    m: int
    q: int
    k: int
    structure_id: str
    split: str
    role: str
    flow: tuple[int, ...]
    scene: str
    query: str
    answer: str
    seed: str

    @classmethod
    def from_line(cls, line: str) -> "TaskSample":
        obj = json.loads(line)
        missing = [f for f in RECORD_FIELDS if f not in obj]
        if missing:
            raise ParseError(f"record missing fields {missing}")
        return cls(
            sample_id=obj["sample_id"],
            n=obj["n"],
            m=obj["m"],
            q=obj["q"],
            k=obj["k"],
            structure_id=obj["structure_id"],
            split=obj["split"],
            role=obj["role"],
            flow=tuple(obj["flow"]),
            scene=obj["scene"],
            query=obj["query"],
            answer=obj["answer"],
            seed=obj["seed"],
        )


_SPACE_CACHE: dict[tuple, list[Selection]] = {}
_NAMES_CACHE: dict[tuple, list[tuple[tuple[str, ...], tuple[str, ...], str]]] = {}


def _selection_space(pools: SemanticPools, n: int, q: int) -> list[Selection]:
    key = (pools, n, q)
    space = _SPACE_CACHE.get(key)
    if space is None:
        space = list(iter_selections(pools, n, q))
        _SPACE_CACHE[key] = space
    return space


def _named_space(
    pools: SemanticPools, n: int, q: int
) -> list[tuple[tuple[str, ...], tuple[str, ...], str]]:
    """Selection space resolved to names, aligned with `_selection_space`."""
    key = (pools, n, q)
    space = _NAMES_CACHE.get(key)
    if space is None:
        space = [
            (
                tuple(pools.characters[i] for i in sel.characters),
                tuple(pools.containers[j] for j in sel.containers),
                pools.objects[sel.object_index],
            )
            for sel in _selection_space(pools, n, q)
        ]
        _NAMES_CACHE[key] = space
    return space


def _percent(template: str, field_name: str) -> str:
    return template.replace("%", "%%").replace("{%s}" % field_name, "%s")


def _structure_records(
    config: GroupConfig,
    pools: SemanticPools,
    grammar: Grammar,
    template: SceneTemplate,
    structure: GraphStructure,
    split: str,
    role: str,
    out: list[str],
) -> None:
    """Append all records of one (structure, role) stream, in scene order.

    This is the bulk twin of instantiate/sample_flow/render_query: it uses
    the same compiled template and consumes the per-scene stream in the same
    fixed order, which `verify_dataset` re-checks record by record through
    the ordinary single-scene path.
    """
    orders = config.learn_orders if role == ROLE_LEARN else config.all_orders
    multi_order = len(orders) > 1
    k_fixed = orders[0]
    sid = structure.structure_id
    per_scene = config.samples_per_scene
    n, q = config.n, config.q
    master = config.master_seed
    edge_set = structure.edges
    exits = [step.exit for step in template.steps]
    fmt, plan = compiled_render(template, grammar)
    q_head = _percent(grammar.query_head, "character")
    q_nested = _percent(grammar.query_nested, "character")
    q_tail = _percent(grammar.query_tail, "object")
    node_range = range(n)
    rng = Random()
    blake = hashlib.blake2b
    pick_args = itemgetter(*plan)
    line_fmt = (
        '{"sample_id":"%s:%s:%%07d","n":%d,"m":%d,"q":%d,"k":%%d,'
        '"structure_id":"%s","split":"%s","role":"%s","flow":[%%s],'
        '"scene":%%s,"query":%%s,"answer":%%s,"seed":"%%016x"}'
    ) % (sid, role, n, config.m, q, sid, split, role)

    for scene_idx, (names, conts, obj) in enumerate(_named_space(pools, n, q)):
        payload = "%d|%s|%s|%d" % (master, role, sid, scene_idx)
        seed = int.from_bytes(blake(payload.encode(), digest_size=8).digest(), "big")
        rng.seed(seed)
        rr = rng.randrange
        initial = rr(q)
        beliefs = [0] * n
        moves = []
        for exit_node in exits:
            pick = rr(q)
            beliefs[exit_node] = pick
            moves.append(conts[pick])
        flat = names + conts + (obj, conts[initial]) + tuple(moves)
        scene_json = _escape(fmt % pick_args(flat))
        for j in range(per_scene):
            k = rng.choice(orders) if multi_order else k_fixed
            flow = [rr(n)] if k == 1 else rng.sample(node_range, k)
            holders = [flow[0]]
            for nxt in flow[1:]:
                for holder in holders:
                    if (holder, nxt) not in edge_set:
                        break
                else:
                    holders.append(nxt)
            answer = conts[beliefs[holders[-1]]]
            query = q_head % names[flow[0]]
            for v in flow[1:]:
                query += q_nested % names[v]
            query += q_tail % obj
            out.append(
                line_fmt
                % (
                    scene_idx * per_scene + j,
                    k,
                    ",".join(map(str, flow)),
                    scene_json,
                    _escape(query),
                    _escape(answer),
                    seed,
                )
            )


def _structure_blocks(
    args: tuple[GroupConfig, GraphStructure, str],
) -> tuple[bytes, bytes]:
    """Worker unit: (train bytes, eval bytes) for one structure."""
    config, structure, split = args
    pools = load_pools(config.pools_path)
    grammar = load_grammar(config.grammar_path)
    order = derive_character_order(structure)
    template = render_template(
        order, config.q, grammar, structure_id=structure.structure_id
    )
    train_bytes = b""
    if split == SPLIT_TRAIN:
        lines: list[str] = []
        _structure_records(
            config, pools, grammar, template, structure, split, ROLE_LEARN, lines
        )
        lines.append("")
        train_bytes = "\n".join(lines).encode()
    lines = []
    _structure_records(
        config, pools, grammar, template, structure, split, ROLE_EVAL, lines
    )
    lines.append("")
    eval_bytes = "\n".join(lines).encode()
    return train_bytes, eval_bytes


def _fingerprint(parts: tuple[str, ...]) -> str:
    return hashlib.blake2b("\x1f".join(parts).encode(), digest_size=8).hexdigest()


def pools_fingerprint(pools: SemanticPools) -> str:
    return _fingerprint(pools.characters + pools.containers + pools.objects)


def grammar_fingerprint(grammar: Grammar) -> str:
    fields = (
        grammar.intro_head, grammar.intro_item, grammar.intro_sep,
        grammar.intro_last, grammar.intro_tail, grammar.initial,
        grammar.enter_sep, grammar.enter_tail, grammar.move, grammar.exit,
        grammar.query_head, grammar.query_nested, grammar.query_tail,
    )
    return _fingerprint((str(grammar.version),) + fields)


@dataclass
class BuildResult:
    out_dir: Path
    manifest: dict
    train_path: Path
    eval_path: Path


def build_group(
    config: GroupConfig, out_dir: str | Path, workers: int = 1
) -> BuildResult:
    """Generate one group's train/eval files plus its manifest.

    Output bytes are a pure function of the config: structures are processed
    in enumeration order and each structure's block is generated from seeds
    derived for it alone, so the worker count cannot change the result.
    """
    config.validate()
    pools = load_pools(config.pools_path)
    grammar = load_grammar(config.grammar_path)
    if config.n > len(pools.characters):
        raise InvalidConfigError("more characters than the pool provides")
    if config.q > len(pools.containers):
        raise InvalidConfigError("more containers than the pool provides")

    train, heldout = select_structures(config)
    heldout_ids = {s.structure_id for s in heldout}
    ordered: list[tuple[GraphStructure, str]] = sorted(
        [(s, SPLIT_TRAIN) for s in train] + [(s, SPLIT_HELDOUT) for s in heldout],
        key=lambda pair: (pair[0].exit_order, pair[0].sorted_edges),
    )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    train_path = out / TRAIN_FILE
    eval_path = out / EVAL_FILE

    tasks = [(config, structure, split) for structure, split in ordered]
    counts = {
        "train_records": 0,
        "eval_records": 0,
        "eval_heldout_records": 0,
        "eval_train_structure_records": 0,
    }
    with open(train_path, "wb") as train_f, open(eval_path, "wb") as eval_f:
        if workers > 1:
            with multiprocessing.Pool(workers) as pool:
                blocks = pool.imap(_structure_blocks, tasks, chunksize=1)
                _write_blocks(blocks, tasks, train_f, eval_f, heldout_ids, counts)
        else:
            blocks = map(_structure_blocks, tasks)
            _write_blocks(blocks, tasks, train_f, eval_f, heldout_ids, counts)

    manifest = _build_manifest(config, pools, grammar, ordered, counts)
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return BuildResult(
        out_dir=out, manifest=manifest, train_path=train_path, eval_path=eval_path
    )


def _write_blocks(blocks, tasks, train_f, eval_f, heldout_ids, counts) -> None:
    for (_, structure, _), (train_bytes, eval_bytes) in zip(tasks, blocks):
        train_f.write(train_bytes)
        eval_f.write(eval_bytes)
        n_train = train_bytes.count(b"\n")
        n_eval = eval_bytes.count(b"\n")
        counts["train_records"] += n_train
        counts["eval_records"] += n_eval
        if structure.structure_id in heldout_ids:
            counts["eval_heldout_records"] += n_eval
        else:
            counts["eval_train_structure_records"] += n_eval


def _config_dict(config: GroupConfig) -> dict:
    return {
        "n": config.n,
        "m": config.m,
        "q": config.q,
        "master_seed": config.master_seed,
        "learn_orders": list(config.learn_orders),
        "gen_orders": list(config.gen_orders),
        "structure_cap": config.structure_cap,
        "train_structures": config.train_structures,
        "samples_per_scene": config.samples_per_scene,
    }


def _build_manifest(config, pools, grammar, ordered, counts) -> dict:
    config_echo = _config_dict(config)
    config_hash = hashlib.blake2b(
        json.dumps(config_echo, sort_keys=True).encode(), digest_size=8
    ).hexdigest()
    return {
        "format_version": FORMAT_VERSION,
        "tool": "sallyanne",
        "tool_version": __version__,
        "config": config_echo,
        "config_hash": config_hash,
        "pools_hash": pools_fingerprint(pools),
        "grammar_hash": grammar_fingerprint(grammar),
        "pool_sizes": {
            "characters": len(pools.characters),
            "containers": len(pools.containers),
            "objects": len(pools.objects),
        },
        "files": {"train": TRAIN_FILE, "eval": EVAL_FILE},
        "counts": counts,
        "structures": [
            {
                "structure_id": s.structure_id,
                "exit_order": list(s.exit_order),
                "edges": [list(e) for e in s.sorted_edges],
                "split": split,
            }
            for s, split in ordered
        ],
    }


@dataclass
class VerificationReport:
    records_checked: int = 0
    mismatches: list[str] = field(default_factory=list)
    schema_violations: list[str] = field(default_factory=list)
    count_deltas: dict[str, int] = field(default_factory=dict)
    expected_sizes: dict[str, int] = field(default_factory=dict)

    MAX_DETAILS = 25

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.schema_violations or any(
            self.count_deltas.values()
        ))

    def note_mismatch(self, detail: str) -> None:
        if len(self.mismatches) < self.MAX_DETAILS:
            self.mismatches.append(detail)
        else:
            self.mismatches[-1] = "... further mismatches suppressed"

    def note_schema(self, detail: str) -> None:
        if len(self.schema_violations) < self.MAX_DETAILS:
            self.schema_violations.append(detail)


def load_manifest(data_dir: str | Path) -> dict:
    return json.loads((Path(data_dir) / MANIFEST_NAME).read_text("utf-8"))


def _manifest_structures(manifest: dict) -> dict[str, tuple[GraphStructure, str]]:
    out: dict[str, tuple[GraphStructure, str]] = {}
    for entry in manifest["structures"]:
        structure = GraphStructure(
            n=len(entry["exit_order"]),
            exit_order=tuple(entry["exit_order"]),
            edges=frozenset(tuple(e) for e in entry["edges"]),
        )
        out[entry["structure_id"]] = (structure, entry["split"])
    return out


def verify_dataset(
    data_dir: str | Path,
    limit: int | None = None,
    pools: SemanticPools | None = None,
    grammar: Grammar | None = None,
) -> VerificationReport:
    """Re-derive every record from its metadata and report any drift.

    Each record's scene is re-instantiated from its recorded seed, re-parsed,
    and its answer re-derived through the parsed structure; counts are checked
    against the manifest and against the closed-form dataset size.
    """
    data_dir = Path(data_dir)
    manifest = load_manifest(data_dir)
    config = GroupConfig(
        n=manifest["config"]["n"],
        m=manifest["config"]["m"],
        q=manifest["config"]["q"],
        master_seed=manifest["config"]["master_seed"],
        learn_orders=tuple(manifest["config"]["learn_orders"]),
        gen_orders=tuple(manifest["config"]["gen_orders"]),
        structure_cap=manifest["config"]["structure_cap"],
        train_structures=manifest["config"]["train_structures"],
        samples_per_scene=manifest["config"]["samples_per_scene"],
    )
    pools = pools or load_pools()
    grammar = grammar or load_grammar()
    structures = _manifest_structures(manifest)
    report = VerificationReport()
    if pools_fingerprint(pools) != manifest["pools_hash"]:
        report.note_schema("pools fingerprint differs from the manifest")
    if grammar_fingerprint(grammar) != manifest["grammar_hash"]:
        report.note_schema("grammar fingerprint differs from the manifest")

    templates: dict[str, SceneTemplate] = {}
    file_counts = {"train_records": 0, "eval_records": 0,
                   "eval_heldout_records": 0, "eval_train_structure_records": 0}
    for file_key, role in ((TRAIN_FILE, ROLE_LEARN), (EVAL_FILE, ROLE_EVAL)):
        path = data_dir / manifest["files"]["train" if role == ROLE_LEARN else "eval"]
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if role == ROLE_LEARN:
                    file_counts["train_records"] += 1
                else:
                    file_counts["eval_records"] += 1
                if limit is not None and line_no > limit:
                    continue
                _verify_record(
                    line, line_no, file_key, role, config, pools, grammar,
                    structures, templates, report, file_counts,
                )

    for key, value in manifest["counts"].items():
        report.count_deltas[key] = file_counts.get(key, 0) - value
    if limit is not None:
        # partial scans cannot re-count the eval split breakdown
        report.count_deltas.pop("eval_heldout_records", None)
        report.count_deltas.pop("eval_train_structure_records", None)

    total, train, test = dataset_size(
        config.n, config.m, config.q,
        structure_cap=config.structure_cap,
        train_structures=config.train_structures,
        character_pool=len(pools.characters),
        container_pool=len(pools.containers),
        object_pool=len(pools.objects),
    )
    scale = config.samples_per_scene
    report.expected_sizes = {
        "train_records": train * scale,
        "eval_heldout_records": test * scale,
        "total_records": total * scale,
    }
    if file_counts["train_records"] != train * scale:
        report.note_mismatch(
            f"train file holds {file_counts['train_records']} records, "
            f"dataset size predicts {train * scale}"
        )
    if limit is None and file_counts["eval_heldout_records"] != test * scale:
        report.note_mismatch(
            f"eval file holds {file_counts['eval_heldout_records']} held-out "
            f"records, dataset size predicts {test * scale}"
        )
    report.records_checked = (
        file_counts["train_records"] + file_counts["eval_records"]
        if limit is None
        else min(limit, file_counts["train_records"])
        + min(limit, file_counts["eval_records"])
    )
    return report


def _verify_record(
    line, line_no, file_key, role, config, pools, grammar,
    structures, templates, report, file_counts,
) -> None:
    try:
        rec = TaskSample.from_line(line)
    except (json.JSONDecodeError, ParseError) as e:
        report.note_schema(f"{file_key}:{line_no}: {e}")
        return
    label = f"{file_key}:{line_no}"
    if rec.role != role:
        report.note_schema(f"{label}: role {rec.role!r} in the {role} file")
    if (rec.n, rec.m, rec.q) != (config.n, config.m, config.q):
        report.note_schema(f"{label}: group parameters differ from the manifest")
    if rec.structure_id not in structures:
        report.note_schema(f"{label}: unknown structure {rec.structure_id}")
        return
    structure, split = structures[rec.structure_id]
    if rec.split != split:
        report.note_schema(f"{label}: split flag {rec.split!r} != {split!r}")
    allowed = config.learn_orders if role == ROLE_LEARN else config.all_orders
    if rec.k not in allowed:
        report.note_schema(f"{label}: order {rec.k} not allowed in {role} records")
    if role == ROLE_EVAL:
        key = (
            "eval_heldout_records" if split == SPLIT_HELDOUT
            else "eval_train_structure_records"
        )
        file_counts[key] += 1

    # re-derive the full record from its seed and compare
    try:
        sid, _, seq = rec.sample_id.rsplit(":", 2)
    except ValueError:
        report.note_schema(f"{label}: malformed sample_id {rec.sample_id!r}")
        return
    scene_idx = int(seq) // config.samples_per_scene
    sub = int(seq) % config.samples_per_scene
    expected_seed = derive_seed(config.master_seed, role, rec.structure_id, scene_idx)
    if sid != rec.structure_id or f"{expected_seed:016x}" != rec.seed:
        report.note_mismatch(f"{label}: seed lineage does not re-derive")
        return
    space = _selection_space(pools, config.n, config.q)
    if scene_idx >= len(space):
        report.note_schema(f"{label}: scene index {scene_idx} out of range")
        return
    template = templates.get(rec.structure_id)
    if template is None:
        template = render_template(
            derive_character_order(structure), config.q, grammar,
            structure_id=rec.structure_id,
        )
        templates[rec.structure_id] = template
    rng = Random(expected_seed)
    inst = instantiate(template, pools, space[scene_idx], rng, grammar)
    orders = allowed
    flow = None
    for _ in range(sub + 1):
        k = rng.choice(orders) if len(orders) > 1 else orders[0]
        flow = sample_flow(structure, k, rng, max_order=max(orders))
    if inst.text != rec.scene:
        report.note_mismatch(f"{label}: scene text does not re-derive")
        return
    if flow.characters != rec.flow or flow.k != rec.k:
        report.note_mismatch(f"{label}: flow does not re-derive")
        return
    if render_query(flow, inst, grammar) != rec.query:
        report.note_mismatch(f"{label}: query text does not re-derive")
        return

    # independent route: parse the stored scene and consult the oracle
    try:
        parsed = parse_scene(rec.scene, pools, grammar)
    except ParseError as e:
        report.note_mismatch(f"{label}: stored scene fails to parse: {e}")
        return
    if parsed.structure != structure:
        report.note_mismatch(f"{label}: parsed structure differs from the manifest")
        return
    answer_idx = derive_truth(parsed.structure, parsed.beliefs, flow)
    if inst.container_names[answer_idx] != rec.answer:
        report.note_mismatch(
            f"{label}: stored answer {rec.answer!r} != derived "
            f"{inst.container_names[answer_idx]!r}"
        )


__all__ = [
    "BuildResult",
    "EVAL_FILE",
    "GroupConfig",
    "MANIFEST_NAME",
    "RECORD_FIELDS",
    "ROLE_EVAL",
    "ROLE_LEARN",
    "SPLIT_HELDOUT",
    "SPLIT_TRAIN",
    "TRAIN_FILE",
    "TaskSample",
    "VerificationReport",
    "build_group",
    "derive_seed",
    "grammar_fingerprint",
    "load_manifest",
    "pools_fingerprint",
    "select_structures",
    "verify_dataset",
]
