"""Exact combinatorics on colored bipartite graphs.

Everything here is exact integer work: perfect matchings with permutation
signs, their grouping into equal-spectrum classes, and a symbolic
determinant of the pattern matrix kept as an integer-coefficient monomial
map.  The nonsingularity test asks for exactly one class with nonzero
signature; the symbolic determinant provides an independent route to the
same verdict (a polynomial that survives as a single monomial cannot
vanish at nonzero values, while two or more monomials always admit a
nonzero complex root).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class SizeMismatchError(ValueError):
    """X and Y sides differ in size where a square slice is required."""


class EnumerationCapError(RuntimeError):
    """Matching enumeration refused beyond the desk-scale size cap."""


ENUMERATION_CAP = 12


@dataclass(frozen=True)
class ColoredBipartite:
    """Bipartite graph between an X side and a Y side with colored edges.

    ``edges`` holds ``(x_index, y_index, color)`` triples with local color
    indices; ``color_map`` maps each local color back to the global color
    index of the parent graph (identity for standalone graphs).
    """

    x_vertices: tuple[int, ...]
    y_vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    colors: tuple[str, ...]
    color_map: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(tuple(e) for e in self.edges)))
        pairs = set()
        for xi, yi, c in self.edges:
            if not (0 <= xi < len(self.x_vertices) and 0 <= yi < len(self.y_vertices)):
                raise ValueError(f"edge ({xi},{yi}) outside vertex ranges")
            if (xi, yi) in pairs:
                raise ValueError(f"duplicate edge ({xi},{yi})")
            pairs.add((xi, yi))
            if not 0 <= c < len(self.colors):
                raise ValueError(f"edge ({xi},{yi}) uses unknown color {c}")

    @property
    def size(self) -> tuple[int, int]:
        return len(self.x_vertices), len(self.y_vertices)

    def adjacency(self) -> tuple[int, ...]:
        """Per-x bitmask of compatible y indices."""
        masks = [0] * len(self.x_vertices)
        for xi, yi, _ in self.edges:
            masks[xi] |= 1 << yi
        return tuple(masks)

    def color_lookup(self) -> dict[tuple[int, int], int]:
        return {(xi, yi): c for xi, yi, c in self.edges}


def standalone_bipartite(
    t: int,
    edges: Iterable[tuple[int, int, int]],
    n_colors: int,
    names: Sequence[str] | None = None,
) -> ColoredBipartite:
    """Square t-by-t bipartite graph not derived from a digraph."""
    names = tuple(names) if names else tuple(f"c{i + 1}" for i in range(n_colors))
    return ColoredBipartite(
        x_vertices=tuple(range(t)),
        y_vertices=tuple(range(t, 2 * t)),
        edges=tuple(edges),
        colors=names,
        color_map=tuple(range(n_colors)),
    )


@dataclass(frozen=True)
class Matching:
    """A perfect matching, its permutation sign, and its color spectrum.

    ``assignment[i]`` is the y index matched to x index ``i``; ``spectrum``
    counts how often each local color occurs among the matched edges.
    """

    assignment: tuple[int, ...]
    sign: int
    spectrum: tuple[int, ...]


@dataclass(frozen=True)
class MatchingClass:
    """All matchings sharing one spectrum; signature is the sum of signs."""

    spectrum: tuple[int, ...]
    signature: int
    members: int


@dataclass(frozen=True)
class DetPolynomial:
    """Integer polynomial in the color variables, keyed by exponent vector.

    Zero coefficients are never stored, so the zero polynomial has no
    terms and a nonsingularity certificate is exactly one stored term.
    """

    n_colors: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def term_map(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, values: Sequence[complex]) -> complex:
        if len(values) != self.n_colors:
            raise ValueError(f"expected {self.n_colors} color values, got {len(values)}")
        total: complex = 0
        for exponents, coeff in self.terms:
            term: complex = coeff
            for value, e in zip(values, exponents):
                if e:
                    term *= value**e
            total += term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exponents, coeff in sorted(self.terms):
            vars_part = "*".join(
                f"c{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exponents)
                if e
            )
            parts.append(f"{coeff:+d}*{vars_part}" if vars_part else f"{coeff:+d}")
        return " ".join(parts)


def _permutation_sign(assignment: Sequence[int]) -> int:
    inversions = sum(
        1
        for i in range(len(assignment))
        for j in range(i + 1, len(assignment))
        if assignment[i] > assignment[j]
    )
    return -1 if inversions % 2 else 1


def enumerate_matchings(b: ColoredBipartite) -> tuple[Matching, ...]:
    """All perfect matchings, in lexicographic order of their assignment.

    Depth-first over the X side in index order; a cheap Hall check (the
    union of remaining candidate y's must be large enough) prunes dead
    branches early.
    """
    s, t = b.size
    if s != t:
        raise SizeMismatchError(f"|X|={s} but |Y|={t}")
    if t > ENUMERATION_CAP:
        raise EnumerationCapError(f"matching enumeration capped at {ENUMERATION_CAP}, got {t}")
    adjacency = b.adjacency()
    colors = b.color_lookup()
    n_colors = len(b.colors)
    out: list[Matching] = []
    assignment: list[int] = []

    def feasible(i: int, avail: int) -> bool:
        union = 0
        for j in range(i, t):
            union |= adjacency[j] & avail
        return union.bit_count() >= t - i

    def extend(i: int, avail: int) -> None:
        if i == t:
            spectrum = [0] * n_colors
            for xi, yi in enumerate(assignment):
                spectrum[colors[(xi, yi)]] += 1
            out.append(
                Matching(tuple(assignment), _permutation_sign(assignment), tuple(spectrum))
            )
            return
        if not feasible(i, avail):
            return
        choices = adjacency[i] & avail
        while choices:
            low = choices & -choices
            yi = low.bit_length() - 1
            choices ^= low
            assignment.append(yi)
            extend(i + 1, avail ^ low)
            assignment.pop()

    extend(0, (1 << t) - 1)
    return tuple(out)


def equivalence_classes(matchings: Sequence[Matching]) -> tuple[MatchingClass, ...]:
    """Group matchings by spectrum, in order of first appearance."""
    order: list[tuple[int, ...]] = []
    signatures: dict[tuple[int, ...], int] = {}
    members: dict[tuple[int, ...], int] = {}
    for m in matchings:
        if m.spectrum not in signatures:
            order.append(m.spectrum)
            signatures[m.spectrum] = 0
            members[m.spectrum] = 0
        signatures[m.spectrum] += m.sign
        members[m.spectrum] += 1
    return tuple(
        MatchingClass(spec, signatures[spec], members[spec]) for spec in order
    )


@lru_cache(maxsize=1 << 16)
def _nonsingularity(b: ColoredBipartite) -> tuple[bool, int | None]:
    classes = equivalence_classes(enumerate_matchings(b))
    nonzero = [c for c in classes if c.signature != 0]
    if classes and len(nonzero) == 1:
        return True, nonzero[0].signature
    return False, None


def pattern_nonsingular(b: ColoredBipartite) -> bool:
    """Whether every matrix with this colored zero pattern is nonsingular.

    True iff at least one perfect matching exists and exactly one
    equivalence class of perfect matchings has nonzero signature.
    """
    return _nonsingularity(b)[0]


def certifying_signature(b: ColoredBipartite) -> int | None:
    """The unique nonzero class signature, or None when not nonsingular."""
    return _nonsingularity(b)[1]


def symbolic_det(b: ColoredBipartite) -> DetPolynomial:
    """Determinant of the pattern matrix, expanded over the color variables.

    Row-by-row expansion with explicit sign tracking; independent of the
    matching enumerator above so the two can check each other.
    """
    s, t = b.size
    if s != t:
        raise SizeMismatchError(f"|X|={s} but |Y|={t}")
    if t > ENUMERATION_CAP:
        raise EnumerationCapError(f"determinant expansion capped at {ENUMERATION_CAP}, got {t}")
    # entry[row y][col x] = local color, or -1 where the pattern is zero
    entry = [[-1] * t for _ in range(t)]
    for xi, yi, c in b.edges:
        entry[yi][xi] = c
    n_colors = len(b.colors)
    acc: dict[tuple[int, ...], int] = {}
    exponents = [0] * n_colors
    perm: list[int] = []

    def expand(row: int, used_cols: int) -> None:
        if row == t:
            key = tuple(exponents)
            acc[key] = acc.get(key, 0) + _permutation_sign(perm)
            return
        for col in range(t):
            c = entry[row][col]
            if c < 0 or used_cols >> col & 1:
                continue
            exponents[c] += 1
            perm.append(col)
            expand(row + 1, used_cols | 1 << col)
            perm.pop()
            exponents[c] -= 1

    expand(0, 0)
    terms = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
    return DetPolynomial(n_colors=n_colors, terms=terms)


def nonsingular_via_polynomial(p: DetPolynomial) -> bool:
    """Nonsingularity read off the symbolic determinant: one surviving monomial."""
    return len(p.terms) == 1


def pattern_matrix(b: ColoredBipartite, values: Sequence[complex]) -> np.ndarray:
    """Realize the pattern matrix at the given per-color values (rows = Y)."""
    s, t = b.size
    mat = np.zeros((t, s), dtype=complex)
    for xi, yi, c in b.edges:
        mat[yi, xi] = values[c]
    return mat


def sample_color_values(n_colors: int, rng: np.random.Generator) -> np.ndarray:
    """Nonzero complex samples: unit-magnitude phases times moduli in [0.5, 2]."""
    magnitudes = rng.uniform(0.5, 2.0, size=n_colors)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_colors)
    return magnitudes * np.exp(1j * phases)


def find_singular_realization(
    p: DetPolynomial, rng: np.random.Generator, restarts: int = 50
) -> np.ndarray | None:
    """Search for nonzero complex color values where the determinant vanishes.

    Only meaningful when the polynomial has at least two monomials; picks a
    variable whose exponent varies between monomials, samples the rest, and
    solves the resulting univariate polynomial for a nonzero root.  Best
    effort: returns None if every restart degenerates.
    """
    if len(p.terms) < 2:
        return None
    pivot = next(
        i
        for i in range(p.n_colors)
        if len({exp[i] for exp, _ in p.terms}) > 1
    )
    max_power = max(exp[pivot] for exp, _ in p.terms)
    for _ in range(restarts):
        values = sample_color_values(p.n_colors, rng)
        coeffs = np.zeros(max_power + 1, dtype=complex)
        for exponents, coeff in p.terms:
            term: complex = coeff
            for i, e in enumerate(exponents):
                if e and i != pivot:
                    term *= values[i] ** e
            coeffs[exponents[pivot]] += term
        polynomial = np.polynomial.Polynomial(coeffs)
        if np.allclose(polynomial.coef, 0.0, atol=1e-12):
            continue
        roots = polynomial.roots()
        nonzero = [r for r in roots if abs(r) > 1e-8]
        if not nonzero:
            continue
        values[pivot] = min(nonzero, key=abs)
        scale = max(
            abs(coeff) * float(np.prod([abs(values[i]) ** e for i, e in enumerate(exp) if e] or [1.0]))
            for exp, coeff in p.terms
        )
        if abs(p.evaluate(values)) < 1e-7 * max(scale, 1.0):
            return values
    return None
