"""Agreement between two top-N band rankings.

``values_analysis`` counts shared bands regardless of order and
``position_analysis`` counts rank positions holding the same band. Both are
percentages of the longer list, so a one-band ranking against a two-band
ranking with one band in common scores 50 %.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import InvalidInputError

DEFAULT_CAP = 5


@dataclass(frozen=True)
class RankingPair:
    level: int
    list_a: tuple[Hashable, ...]
    list_b: tuple[Hashable, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        limit = min(self.cap, 2**self.level)
        for name in ("list_a", "list_b"):
            items = tuple(getattr(self, name))
            object.__setattr__(self, name, items)
            if len(items) > limit:
                raise InvalidInputError(f"{name} has {len(items)} entries, limit is {limit}")
            if len(set(items)) != len(items):
                raise InvalidInputError(f"{name} contains duplicates")

    @classmethod
    def capped(cls, level: int, list_a: Sequence[Hashable], list_b: Sequence[Hashable], cap: int = DEFAULT_CAP) -> RankingPair:
        """Build a pair after truncating both lists to the cap."""
        limit = min(cap, 2**level)
        return cls(level, tuple(list_a)[:limit], tuple(list_b)[:limit], cap)


def _denominator(pair: RankingPair) -> int:
    return max(len(pair.list_a), len(pair.list_b))


def values_analysis(pair: RankingPair) -> float:
    denom = _denominator(pair)
    if denom == 0:
        return 100.0
    shared = set(pair.list_a) & set(pair.list_b)
    return 100.0 * len(shared) / denom


def position_analysis(pair: RankingPair) -> float:
    denom = _denominator(pair)
    if denom == 0:
        return 100.0
    same = sum(1 for a, b in zip(pair.list_a, pair.list_b) if a == b)
    return 100.0 * same / denom
