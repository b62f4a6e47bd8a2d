"""Small set-enumeration helpers shared by the graph and model modules."""
from itertools import chain, combinations
from typing import FrozenSet, Iterable, Iterator, Tuple


def powerset(items: Iterable[int]) -> Iterator[FrozenSet[int]]:
    """Yield every subset of ``items``, smallest first, in lexicographic order per size."""
    pool = sorted(items)
    return (frozenset(c) for c in chain.from_iterable(combinations(pool, r) for r in range(len(pool) + 1)))


def nonempty_proper_subsets(items: FrozenSet[int]) -> Iterator[FrozenSet[int]]:
    pool = sorted(items)
    return (frozenset(c) for c in chain.from_iterable(combinations(pool, r) for r in range(1, len(pool))))


def mask_of(vertices: Iterable[int]) -> int:
    """Encode a 1-based vertex set as a bitmask (vertex i -> bit i-1)."""
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


def vertices_of(mask: int) -> Tuple[int, ...]:
    """Decode a bitmask back into a sorted tuple of 1-based vertices."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)
