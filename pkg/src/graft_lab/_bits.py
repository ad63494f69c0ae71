from __future__ import annotations

from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def to_set(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1
