"""Shared fixtures: pools, grammar, and one small pre-built group."""

from __future__ import annotations

import pytest

from sallyanne.dataset import GroupConfig, build_group
from sallyanne.scene import load_grammar, load_pools

SMALL_CONFIG = dict(
    n=4, m=4, q=3, master_seed=20260810, structure_cap=12, train_structures=8
)


@pytest.fixture(scope="session")
def pools():
    return load_pools()


@pytest.fixture(scope="session")
def grammar():
    return load_grammar()


@pytest.fixture(scope="session")
def small_group(tmp_path_factory):
    """A reduced-cap (4,4,3) group, built once for the whole session."""
    out = tmp_path_factory.mktemp("group443")
    config = GroupConfig(**SMALL_CONFIG)
    result = build_group(config, out)
    return result
