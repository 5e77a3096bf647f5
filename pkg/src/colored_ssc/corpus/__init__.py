"""Bundled golden graphs used by the documentation and the test suite."""

from __future__ import annotations

import json
from importlib import resources

from ..graph import ColoredDigraph, validate

GRAPH_IDS = (
    "fig2", "fig3", "fig4", "fig5",
    "fig6a", "fig6b", "fig6c",
    "fig7a", "fig7b", "fig7c", "fig7d", "fig7e",
    "fig8",
)


def load(graph_id: str) -> ColoredDigraph:
    """Load a bundled graph by id (see GRAPH_IDS)."""
    if graph_id not in GRAPH_IDS:
        raise KeyError(f"unknown corpus graph {graph_id!r}")
    text = resources.files(__package__).joinpath(f"{graph_id}.json").read_text()
    return validate(json.loads(text))


def path(graph_id: str):
    """Filesystem path of a bundled graph file (for CLI round trips)."""
    if graph_id not in GRAPH_IDS:
        raise KeyError(f"unknown corpus graph {graph_id!r}")
    return resources.files(__package__).joinpath(f"{graph_id}.json")
