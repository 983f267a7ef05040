"""Set partitions, pair partitions, and non-crossing pair partitions.

Blocks are kept in a single canonical form: each block sorted ascending,
blocks ordered by their smallest elements, ground set exactly [1, k].
Other ground sets enter only through relabeling (`from_labeled`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded

MAX_PAIR_K = 12
MAX_NC2_K = 16
MAX_CATALAN = 30
MAX_SETPART_K = 12


@dataclass(frozen=True)
class Partition:
    """A partition of [1, k] as a canonical tuple of blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if list(b) != sorted(b):
                raise ValueError(f"block {b} not sorted")
            if seen & set(b):
                raise ValueError("blocks are not disjoint")
            seen.update(b)
        k = len(seen)
        if seen != set(range(1, k + 1)):
            raise ValueError("ground set must be exactly [1, k]")
        mins = [b[0] for b in self.blocks]
        if mins != sorted(mins):
            raise ValueError("blocks must be ordered by their minima")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Canonicalize arbitrary block order/element order."""
        prepared = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in prepared):
            raise ValueError("empty block")
        return cls(tuple(sorted(prepared, key=lambda b: b[0])))

    @classmethod
    def from_labeled(cls, blocks: Iterable[Iterable[int]]) -> "tuple[Partition, tuple[int, ...]]":
        """Relabel a partition of an arbitrary finite integer ground set to [1, k].

        Returns the canonical partition plus the sorted original labels, so
        position p corresponds to original label labels[p - 1].
        """
        blocks = [tuple(b) for b in blocks]
        labels = tuple(sorted(x for b in blocks for x in b))
        if len(labels) != len(set(labels)):
            raise ValueError("blocks are not disjoint")
        pos = {x: i + 1 for i, x in enumerate(labels)}
        return cls.from_blocks([[pos[x] for x in b] for b in blocks]), labels

    @classmethod
    def from_string(cls, text: str) -> "Partition":
        """Parse the textual form ``1,4/2,3``."""
        try:
            blocks = [[int(x) for x in part.split(",")] for part in text.split("/")]
        except ValueError as e:
            raise ValueError(f"malformed partition string {text!r}") from e
        return cls.from_blocks(blocks)

    def to_string(self) -> str:
        return "/".join(",".join(str(x) for x in b) for b in self.blocks)

    def __str__(self) -> str:
        return self.to_string()

    @property
    def ground_size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def size(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    def block_index(self) -> dict[int, int]:
        """Element -> 0-based block id (blocks ordered by minima)."""
        out: dict[int, int] = {}
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return out

    def is_pair_partition(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)


@dataclass(frozen=True)
class ElementClassification:
    """Primary elements (block minima), secondaries, and generating tuple positions.

    Generating positions are 1 and r+1 for each primary r; position k+1 is the
    cyclic wrap of position 1 but is kept distinct here, so the set always has
    exactly size + 1 members.
    """

    primaries: tuple[int, ...]
    secondaries: tuple[int, ...]
    generating_positions: frozenset[int]


def classify(p: Partition) -> ElementClassification:
    primaries = tuple(sorted(b[0] for b in p.blocks))
    prim = set(primaries)
    secondaries = tuple(x for x in range(1, p.ground_size + 1) if x not in prim)
    gen = frozenset({1} | {r + 1 for r in primaries})
    return ElementClassification(primaries, secondaries, gen)


def is_noncrossing(p: Partition) -> bool:
    """False iff some u1 < u2 < u3 < u4 alternate between two distinct blocks."""
    for a in range(len(p.blocks)):
        for b in range(a + 1, len(p.blocks)):
            # crossing <=> merged order switches source at least 3 times
            merged = sorted(
                [(x, 0) for x in p.blocks[a]] + [(x, 1) for x in p.blocks[b]]
            )
            switches = sum(
                1 for i in range(1, len(merged)) if merged[i][1] != merged[i - 1][1]
            )
            if switches >= 3:
                return False
    return True


def iter_pair_partitions(k: int) -> Iterator[Partition]:
    """All pair partitions of [1, k], lexicographic in canonical block order."""
    if k % 2 != 0 or k < 2:
        raise ValueError(f"pair partitions need even k >= 2, got {k}")

    def rec(remaining: tuple[int, ...], acc: list[tuple[int, int]]) -> Iterator[Partition]:
        if not remaining:
            yield Partition(tuple(acc))
            return
        first = remaining[0]
        for idx in range(1, len(remaining)):
            partner = remaining[idx]
            acc.append((first, partner))
            rest = remaining[1:idx] + remaining[idx + 1:]
            yield from rec(rest, acc)
            acc.pop()

    yield from rec(tuple(range(1, k + 1)), [])


def enumerate_pair_partitions(k: int) -> list[Partition]:
    if k > MAX_PAIR_K:
        raise BudgetExceeded(f"pair partition enumeration capped at k={MAX_PAIR_K}; use iter_pair_partitions")
    return list(iter_pair_partitions(k))


def iter_nc2(k: int) -> Iterator[Partition]:
    """Non-crossing pair partitions of [1, k], generated directly (no filtering)."""
    if k % 2 != 0 or k < 2:
        raise ValueError(f"non-crossing pair partitions need even k >= 2, got {k}")

    def rec(elems: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not elems:
            yield ()
            return
        first = elems[0]
        # first pairs with elems[idx]; inside and outside split independently
        for idx in range(1, len(elems), 2):
            partner = elems[idx]
            inside, outside = elems[1:idx], elems[idx + 1:]
            for pin in rec(inside):
                for pout in rec(outside):
                    yield ((first, partner),) + pin + pout

    for blocks in rec(tuple(range(1, k + 1))):
        yield Partition.from_blocks(blocks)


def enumerate_nc2(k: int) -> list[Partition]:
    if k > MAX_NC2_K:
        raise BudgetExceeded(f"NC2 enumeration capped at k={MAX_NC2_K}; use iter_nc2")
    return list(iter_nc2(k))


def iter_partitions(k: int) -> Iterator[Partition]:
    """All set partitions of [1, k] (Bell(k) of them)."""
    if k < 1:
        raise ValueError("k must be >= 1")

    def rec(x: int, blocks: list[list[int]]) -> Iterator[Partition]:
        if x > k:
            yield Partition.from_blocks(blocks)
            return
        for b in blocks:
            b.append(x)
            yield from rec(x + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(x + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def enumerate_partitions(k: int) -> list[Partition]:
    if k > MAX_SETPART_K:
        raise BudgetExceeded(f"set partition enumeration capped at k={MAX_SETPART_K}")
    return list(iter_partitions(k))


def catalan(m: int) -> int:
    """Exact m-th Catalan number."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > MAX_CATALAN:
        raise BudgetExceeded(f"catalan capped at m={MAX_CATALAN}")
    return math.comb(2 * m, m) // (m + 1)


def coarsenings(p: Partition) -> list[Partition]:
    """All partitions q with every block of p contained in a block of q."""
    out = []
    for q in iter_partitions(p.ground_size):
        qidx = q.block_index()
        if all(len({qidx[x] for x in b}) == 1 for b in p.blocks):
            out.append(q)
    return out


def double_factorial_odd(k: int) -> int:
    """(k-1)!! for even k: the number of pair partitions of [1, k]."""
    out = 1
    for v in range(k - 1, 0, -2):
        out *= v
    return out
