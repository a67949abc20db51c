"""Multi-index values, enumeration, factorials and index-tuple expansion.

A multi-index is an ordered tuple of naturals.  The canonical total order
used everywhere (enumeration output, serialization, term tables) is graded
then descending-lexicographic: lower total degree first, ties broken by the
lexicographically largest parts tuple first, so for arity 2 and degree 2
the order is (2,0), (1,1), (0,2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator

from .errors import DomainError, InvalidArityError, SizeLimitError

# Eager enumeration of index tuples is rejected beyond this total degree;
# the tuple count |k|!/k! grows factorially.
MAX_INDEX_TUPLE_DEGREE = 12


@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """Immutable multi-index; parts are naturals, arity = len(parts) >= 1."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.parts, tuple):
            object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 1:
            raise InvalidArityError("multi-index arity must be >= 1")
        for p in self.parts:
            if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                raise DomainError(f"multi-index parts must be naturals, got {p!r}")

    @classmethod
    def of(cls, value: "MultiIndex | Iterable[int]") -> "MultiIndex":
        if isinstance(value, MultiIndex):
            return value
        parts = []
        for v in value:
            i = int(v)
            if i != v:
                raise DomainError(f"multi-index parts must be naturals, got {v!r}")
            parts.append(i)
        return cls(tuple(parts))

    @property
    def arity(self) -> int:
        return len(self.parts)

    def degree(self) -> int:
        return sum(self.parts)

    def factorial(self) -> int:
        return mi_factorial(self)

    def sort_key(self) -> tuple:
        return (self.degree(), tuple(-p for p in self.parts))

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def to_list(self) -> list[int]:
        return list(self.parts)


def enumerate_fixed_degree(arity: int, degree: int) -> list[MultiIndex]:
    """All multi-indices of the given arity and total degree, graded
    descending-lex order, no duplicates."""
    if arity < 1:
        raise InvalidArityError(f"arity must be >= 1, got {arity}")
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")

    def rec(m: int, d: int):
        if m == 1:
            yield (d,)
            return
        for first in range(d, -1, -1):
            for rest in rec(m - 1, d - first):
                yield (first,) + rest

    return [MultiIndex(parts) for parts in rec(arity, degree)]


def mi_factorial(k: MultiIndex | Iterable[int]) -> int:
    """Product of part factorials; empty product is 1."""
    k = MultiIndex.of(k)
    return math.prod(math.factorial(p) for p in k.parts)


def index_tuples(k: MultiIndex | Iterable[int]) -> list[tuple[int, ...]]:
    """All distinct slot tuples in [0, arity)^degree whose occurrence counts
    equal k, in ascending lexicographic order.

    Slots are 0-based coordinate indices.  The result has exactly
    degree! / k! elements and is materialized eagerly, so degrees above
    MAX_INDEX_TUPLE_DEGREE are rejected.
    """
    k = MultiIndex.of(k)
    degree = k.degree()
    if degree > MAX_INDEX_TUPLE_DEGREE:
        raise SizeLimitError(
            f"index tuple expansion capped at degree {MAX_INDEX_TUPLE_DEGREE}, "
            f"got {degree}"
        )
    counts = list(k.parts)
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec() -> None:
        if len(cur) == degree:
            out.append(tuple(cur))
            return
        for slot in range(len(counts)):
            if counts[slot]:
                counts[slot] -= 1
                cur.append(slot)
                rec()
                cur.pop()
                counts[slot] += 1

    rec()
    return out


def ascending_tuple(k: MultiIndex | Iterable[int]) -> tuple[int, ...]:
    """The weakly increasing slot tuple with occurrence counts k, 0-based.

    This is the single tuple selected by the columnwise Kronecker power of
    the identity matrix at index k.
    """
    k = MultiIndex.of(k)
    out: list[int] = []
    for slot, count in enumerate(k.parts):
        out.extend([slot] * count)
    return tuple(out)


def q_support(total_degree: int) -> list[int]:
    """Degrees [K, K-2, ...] down to 0 or 1, matching the parity of K."""
    if total_degree < 0:
        raise DomainError(f"degree must be >= 0, got {total_degree}")
    return list(range(total_degree, -1, -2))
