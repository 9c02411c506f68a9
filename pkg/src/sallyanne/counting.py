"""Exact counts of valid structures and dataset sizes.

Two independent routes compute the number of valid structures under one
fixed exit order: :func:`count_structures_enumerative` scans every edge
subset and replays the closure check, while :func:`count_structures_formula`
evaluates a closed-form inclusion-exclusion. Both are exact integer
computations and must agree; the total across all exit orders is n! times
the fixed-order count because validity depends only on edge positions.

The closed form rests on a structural fact about closure-valid graphs: under
the canonical order, the closure constraint is equivalent to requiring the
children of each node u to form a contiguous run u-d, u-d+1, ..., u-1 ending
just below u. A valid graph is therefore determined by the run lengths
(d_2, ..., d_n) with 0 <= d_u <= u-1 and sum d_u = m, and isolated nodes are
removed by inclusion-exclusion over the subsets forced to stay isolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .belief_graph import canonical_edge_sets, max_edges
from .errors import InvalidConfigError

DEFAULT_CHARACTER_POOL = 12
DEFAULT_CONTAINER_POOL = 10
DEFAULT_OBJECT_POOL = 4
DEFAULT_STRUCTURE_CAP = 120
DEFAULT_TRAIN_STRUCTURES = 112


@dataclass(frozen=True)
class CountReport:
    n: int
    m: int
    n_prime: int
    n_total: int
    method: str

    def __post_init__(self) -> None:
        assert self.n_total == factorial(self.n) * self.n_prime


def count_structures_enumerative(n: int, m: int) -> CountReport:
    """Count by exhaustive subset scan with closure replay under one fixed order."""
    n_prime = len(canonical_edge_sets(n, m))
    return CountReport(
        n=n, m=m, n_prime=n_prime, n_total=factorial(n) * n_prime, method="enumerative"
    )


def _run_length_caps(n: int, isolated: tuple[int, ...]) -> list[int]:
    """Upper bounds on the child-run length of nodes 2..n once `isolated`
    nodes may neither own edges nor be covered by any run."""
    caps: list[int] = []
    forbidden = set(isolated)
    for u in range(2, n + 1):
        if u in forbidden:
            caps.append(0)
            continue
        cap = u - 1
        below = [x for x in isolated if x < u]
        if below:
            # the run u-d..u-1 must stop above the highest isolated node
            cap = min(cap, u - 1 - max(below))
        caps.append(cap)
    return caps


def _bounded_compositions(caps: list[int], total: int) -> int:
    """Number of integer vectors 0 <= d_i <= caps[i] with sum(d) == total."""

    @lru_cache(maxsize=None)
    def ways(i: int, used: int) -> int:
        if i == len(caps):
            return 1 if used == total else 0
        return sum(
            ways(i + 1, used + d) for d in range(min(caps[i], total - used) + 1)
        )

    result = ways(0, 0)
    ways.cache_clear()
    return result


def count_structures_formula(n: int, m: int) -> CountReport:
    """Count by inclusion-exclusion over isolated-node subsets.

    For each subset X forced isolated, the surviving configurations are the
    bounded compositions of m into child-run lengths capped so that no run
    touches X; alternating signs remove all graphs with an isolated node.
    """
    if n < 2:
        raise InvalidConfigError(f"need at least 2 nodes, got n={n}")
    if not 1 <= m <= max_edges(n):
        raise InvalidConfigError(f"m={m} outside [1, {max_edges(n)}] for n={n}")
    if m < (n + 1) // 2:
        raise InvalidConfigError(
            f"m={m} cannot touch all {n} nodes (need at least ceil(n/2))"
        )
    total = 0
    nodes = list(range(1, n + 1))
    for bits in range(1 << n):
        isolated = tuple(nodes[i] for i in range(n) if bits >> i & 1)
        sign = -1 if len(isolated) % 2 else 1
        total += sign * _bounded_compositions(_run_length_caps(n, isolated), m)
    return CountReport(
        n=n, m=m, n_prime=total, n_total=factorial(n) * total, method="formula"
    )


def _block_sizes(pool_size: int, parts: int) -> list[int]:
    bounds = [pool_size * i // parts for i in range(parts + 1)]
    return [hi - lo for lo, hi in zip(bounds, bounds[1:])]


def semantic_expansion_counts(
    n: int,
    q: int,
    character_pool: int = DEFAULT_CHARACTER_POOL,
    container_pool: int = DEFAULT_CONTAINER_POOL,
    object_pool: int = DEFAULT_OBJECT_POOL,
) -> tuple[int, int, int]:
    """Distinct semantic fillings per template: (characters, containers, objects).

    Character and container pools are split into equal floor-boundary blocks,
    one per placeholder, so the combination counts are the products of the
    block sizes; the object is a single free pick.
    """
    if not 1 <= n <= character_pool:
        raise InvalidConfigError(f"n={n} outside [1, {character_pool}]")
    if not 1 <= q <= container_pool:
        raise InvalidConfigError(f"q={q} outside [1, {container_pool}]")
    count_c = 1
    for size in _block_sizes(character_pool, n):
        count_c *= size
    count_b = 1
    for size in _block_sizes(container_pool, q):
        count_b *= size
    return count_c, count_b, object_pool


def dataset_size(
    n: int,
    m: int,
    q: int,
    structure_cap: int = DEFAULT_STRUCTURE_CAP,
    train_structures: int = DEFAULT_TRAIN_STRUCTURES,
    character_pool: int = DEFAULT_CHARACTER_POOL,
    container_pool: int = DEFAULT_CONTAINER_POOL,
    object_pool: int = DEFAULT_OBJECT_POOL,
) -> tuple[int, int, int]:
    """Exact (total, train, test) record counts for one experimental group.

    Every structure expands into the same number of scenes (object picks x
    character fillings x container fillings), and the group is restricted to
    at most `structure_cap` structures split `train_structures` / remainder.
    """
    if not 0 < train_structures < structure_cap:
        raise InvalidConfigError(
            f"train_structures={train_structures} must lie in (0, {structure_cap})"
        )
    count_c, count_b, count_a = semantic_expansion_counts(
        n, q, character_pool, container_pool, object_pool
    )
    population = count_structures_formula(n, m).n_total
    used = min(population, structure_cap)
    per_structure = count_a * count_c * count_b
    total = per_structure * used
    train = total * train_structures // structure_cap
    test = total - train
    return total, train, test


def graph_density(n: int, m: int) -> float:
    """Edge count relative to the complete graph: 2m / (n(n-1))."""
    if n < 2:
        raise InvalidConfigError(f"need at least 2 nodes, got n={n}")
    return 2 * m / (n * (n - 1))


__all__ = [
    "CountReport",
    "DEFAULT_CHARACTER_POOL",
    "DEFAULT_CONTAINER_POOL",
    "DEFAULT_OBJECT_POOL",
    "DEFAULT_STRUCTURE_CAP",
    "DEFAULT_TRAIN_STRUCTURES",
    "count_structures_enumerative",
    "count_structures_formula",
    "dataset_size",
    "graph_density",
    "semantic_expansion_counts",
]
