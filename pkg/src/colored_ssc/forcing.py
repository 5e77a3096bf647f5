"""Color change rule, derived sets, and the zero-forcing-set test.

A black vertex set X forces its white out-neighbor set Y when |Y| = |X|
and the induced colored bipartite slice has a nonsingular pattern
(exactly one matching class with nonzero signature).  Derived sets under
this rule are order dependent, so the zero-forcing decision backtracks
over force choices, memoizing black sets that provably cannot reach V.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from .bipartite import certifying_signature
from .graph import (
    ColoredDigraph,
    induced_bipartite,
    iter_vset,
    vset,
    vset_labels,
    white_out_neighbors,
)


class SearchBoundExceededError(RuntimeError):
    """Subset enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class SearchConfig:
    """Budgets for the exponential parts of the analysis.

    ``max_source_cap`` bounds the size of black sets over which force
    sources are enumerated exhaustively; beyond it the exhaustive search
    refuses (greedy callers may truncate instead).  ``eeo_budget`` caps
    the number of states the edge-operation search expands.
    """

    max_source_cap: int = 12
    eeo_budget: int = 10_000


DEFAULT_CONFIG = SearchConfig()


@dataclass(frozen=True)
class Force:
    """One application of the color change rule: source forces target.

    ``class_signature`` is the nonzero signature of the single certifying
    matching class of the induced bipartite slice.
    """

    source: int
    target: int
    class_signature: int

    def describe(self) -> str:
        return f"{list(vset_labels(self.source))} -> {list(vset_labels(self.target))}"


@dataclass(frozen=True)
class DerivationTrace:
    """Chronological list of forces applied from an initial black set."""

    initial: int
    steps: tuple[Force, ...]
    final: int
    truncated: bool = False

    def replay_ok(self, g: ColoredDigraph) -> bool:
        """Re-validate every step against the graph it claims to derive from."""
        black = self.initial
        for force in self.steps:
            if force.source & ~black:
                return False
            check = is_color_perfect(g, force.source, black)
            if check is None or check.target != force.target:
                return False
            black |= force.target
        return black == self.final


def is_color_perfect(g: ColoredDigraph, source: int, black: int) -> Force | None:
    """The force certified by ``source`` at the given black set, if any.

    Requires a nonempty white out-neighbor set of matching size whose
    induced colored bipartite slice passes the nonsingularity test.
    """
    if not source:
        raise ValueError("source set must be nonempty")
    target = white_out_neighbors(g, source, black)
    if not target or target.bit_count() != source.bit_count():
        return None
    signature = certifying_signature(induced_bipartite(g, source, black))
    if signature is None:
        return None
    return Force(source=source, target=target, class_signature=signature)


def find_forces(
    g: ColoredDigraph,
    black: int,
    max_source: int | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
    allow_truncation: bool = False,
) -> list[Force]:
    """All forces available at ``black``, smallest source first.

    Sources are enumerated by increasing size, lexicographically within a
    size, so the returned order is reproducible.  Exhaustive enumeration
    over a black set larger than ``config.max_source_cap`` raises
    :class:`SearchBoundExceededError` unless truncation is allowed.
    """
    if black & ~g.full_mask:
        raise ValueError("black set contains vertices outside the graph")
    if not g.full_mask & ~black:
        return []  # nothing white, nothing to force
    members = [v for v in iter_vset(black)]
    limit = len(members) if max_source is None else min(max_source, len(members))
    if limit > config.max_source_cap:
        if not allow_truncation:
            raise SearchBoundExceededError(
                f"source enumeration over {len(members)} black vertices exceeds "
                f"cap {config.max_source_cap}"
            )
        limit = config.max_source_cap
    forces = []
    for size in range(1, limit + 1):
        for subset in combinations(members, size):
            source = vset(subset)
            target = white_out_neighbors(g, source, black)
            if not target or target.bit_count() != size:
                continue
            force = is_color_perfect(g, source, black)
            if force is not None:
                forces.append(force)
    return forces


Policy = Callable[[Sequence[Force]], Force]

_POLICIES: dict[str, Policy] = {
    # find_forces already orders by increasing source size
    "first": lambda forces: forces[0],
    "small-first": lambda forces: forces[0],
    "large-first": lambda forces: max(forces, key=lambda f: (f.source.bit_count(), -f.source)),
}


def derived_set_greedy(
    g: ColoredDigraph,
    black: int,
    policy: str | Policy = "first",
    max_source: int | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> DerivationTrace:
    """Apply forces per policy until none remain; no backtracking.

    Over-large black sets are handled by truncating the source size to the
    configured cap, flagged on the returned trace.
    """
    choose = _POLICIES[policy] if isinstance(policy, str) else policy
    initial = black
    steps: list[Force] = []
    truncated = False
    while True:
        limit = black.bit_count() if max_source is None else max_source
        if min(limit, black.bit_count()) > config.max_source_cap:
            truncated = True
        forces = find_forces(g, black, max_source, config, allow_truncation=True)
        if not forces:
            break
        force = choose(forces)
        steps.append(force)
        black |= force.target
    return DerivationTrace(initial=initial, steps=tuple(steps), final=black, truncated=truncated)


def _search(
    g: ColoredDigraph,
    black: int,
    max_source: int | None,
    config: SearchConfig,
    collect_stuck: bool,
) -> tuple[DerivationTrace | None, list[DerivationTrace]]:
    """Backtracking search over force choices.

    Returns a witness trace reaching all of V when one exists; otherwise,
    when asked, the distinct maximal (stuck) derived sets with the first
    trace that reached each.  Black sets proven unable to reach V are
    memoized and never re-expanded.
    """
    full = g.full_mask
    dead: set[int] = set()
    stuck: list[DerivationTrace] = []
    seen_stuck: set[int] = set()
    path: list[Force] = []

    def dfs(black: int) -> bool:
        if black == full:
            return True
        if black in dead:
            return False
        forces = find_forces(g, black, max_source, config)
        if not forces:
            if collect_stuck and black not in seen_stuck:
                seen_stuck.add(black)
                stuck.append(DerivationTrace(initial=start, steps=tuple(path), final=black))
            dead.add(black)
            return False
        for force in forces:
            path.append(force)
            if dfs(black | force.target):
                return True
            path.pop()
        dead.add(black)
        return False

    start = black
    if dfs(black):
        return DerivationTrace(initial=start, steps=tuple(path), final=full), stuck
    return None, stuck


def is_zero_forcing_set(
    g: ColoredDigraph,
    black: int,
    max_source: int | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> tuple[bool, DerivationTrace | None]:
    """Whether some chronological list of forces colors every vertex black."""
    witness, _ = _search(g, black, max_source, config, collect_stuck=False)
    return (witness is not None), witness


def derivation_outcomes(
    g: ColoredDigraph,
    black: int,
    max_source: int | None = None,
    config: SearchConfig = DEFAULT_CONFIG,
) -> tuple[DerivationTrace | None, list[DerivationTrace]]:
    """Witness trace to V if reachable, else all distinct stuck derived sets."""
    return _search(g, black, max_source, config, collect_stuck=True)


def classic_derived_set(g: ColoredDigraph, black: int) -> int:
    """Derived set under the single-vertex rule, ignoring colors.

    A black vertex with exactly one white out-neighbor forces it; the
    fixpoint is independent of application order.
    """
    while True:
        forced = 0
        for v in iter_vset(black):
            white = g.out_masks[v] & ~black
            if white and white.bit_count() == 1:
                forced |= white
        if not forced:
            return black
        black |= forced
