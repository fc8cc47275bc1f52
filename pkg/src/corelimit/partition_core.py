"""Partition primitives: Ferrers diagrams, hook lengths and core predicates.

Rows are indexed in the French convention: row 1 is the bottom row and holds
the largest part. Columns are indexed from the left, starting at 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        for p in parts:
            if not isinstance(p, int) or p <= 0:
                raise ValueError(f"parts must be positive integers, got {parts!r}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing, got {parts!r}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "∅"
        return "(" + ",".join(map(str, self.parts)) + ")"

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(
            sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)
        ))

    def has_distinct_parts(self) -> bool:
        return all(self.parts[i] > self.parts[i + 1] for i in range(len(self.parts) - 1))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield the (row, column) pairs of the diagram, both 1-indexed."""
        for i, part in enumerate(self.parts, start=1):
            for j in range(1, part + 1):
                yield i, j


def as_partition(p: Partition | Sequence[int]) -> Partition:
    return p if isinstance(p, Partition) else Partition(tuple(p))


HookTable = tuple[tuple[int, ...], ...]


def hook_table(p: Partition | Sequence[int]) -> HookTable:
    """Hook length of every cell, as ``table[row - 1][col - 1]``.

    The hook of cell (i, j) is its arm (cells strictly to the right) plus its
    leg (cells strictly above, i.e. in rows i+1, i+2, ...) plus one.
    """
    p = as_partition(p)
    parts = p.parts
    conj = p.conjugate().parts
    return tuple(
        tuple((part - j) + (conj[j - 1] - i) + 1 for j in range(1, part + 1))
        for i, part in enumerate(parts, start=1)
    )


def hook_lengths(p: Partition | Sequence[int]) -> list[int]:
    return [h for row in hook_table(p) for h in row]


def is_s_core(p: Partition | Sequence[int], s: int) -> bool:
    if s < 1:
        raise ValueError("s must be a positive integer")
    p = as_partition(p)
    parts = p.parts
    conj = p.conjugate().parts
    for i, part in enumerate(parts, start=1):
        # hooks along a row decrease left to right, so skip rows that cannot reach s
        if part + conj[0] - i < s:
            continue
        for j in range(1, part + 1):
            h = (part - j) + (conj[j - 1] - i) + 1
            if h == s:
                return False
            if h < s:
                break
    return True


def is_st_core(p: Partition | Sequence[int], s: int, t: int) -> bool:
    return is_s_core(p, s) and is_s_core(p, t)


def perimeter(p: Partition | Sequence[int]) -> int:
    """Number of cells on the outer rim's hook: ``length + largest part - 1``."""
    p = as_partition(p)
    if not p.parts:
        raise ValueError("perimeter undefined for empty partition")
    return p.length + p.parts[0] - 1


def straub_check(p: Partition | Sequence[int], s: int) -> bool:
    """Decide whether a distinct-part partition is an (s, s+1)-core.

    Uses the perimeter criterion ``length + largest part - 1 <= s - 1``.
    The empty partition is a core for every ``s``.
    """
    p = as_partition(p)
    if s < 1:
        raise ValueError("s must be a positive integer")
    if not p.has_distinct_parts():
        raise ValueError("straub_check requires distinct parts")
    if not p.parts:
        return True
    return perimeter(p) <= s - 1


def part_tuples(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Like :func:`partitions_of` but yields bare tuples, skipping validation."""
    if max_part is None:
        max_part = n

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    return rec(n, max_part)


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` with parts at most ``max_part``, reverse-lex order."""
    for parts in part_tuples(n, max_part):
        yield Partition(parts)


def first_column_hooks(parts: Sequence[int]) -> frozenset[int]:
    """Hooks of the first column, ``lambda_i + length - i`` (a beta-set)."""
    n = len(parts)
    return frozenset(part + n - i for i, part in enumerate(parts, start=1))


def is_s_core_beta(parts: Sequence[int], s: int) -> bool:
    """s-core test on first-column hooks: every h >= s needs h - s among them.

    Hooks of the diagram are the differences h - g with h a first-column hook
    and 0 <= g < h not one, so s occurs exactly when some h - s is missing.
    """
    beta = first_column_hooks(parts)
    return all(h < s or h - s in beta for h in beta)


def distinct_partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    if max_part is None:
        max_part = n

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first - 1):
                yield (first,) + rest

    for parts in rec(n, max_part):
        yield Partition(parts)
