"""Finite sets of points with lattice operations and a successor-preimage map.

A ``FinSet`` stores its points as a strictly increasing tuple, so equality
and hashing are structural and every set has exactly one representation.
``ips(A, B)`` collects the elements of ``A`` whose successor inside ``A``
lands in ``B``; it is the only operation here that looks at the ordering
of ``A`` rather than at membership alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .order import Point, format_point, point


@dataclass(frozen=True)
class FinSet:
    elements: tuple[Point, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.elements, self.elements[1:]):
            if not a < b:
                raise ValueError(f"elements must be strictly increasing, got {a} then {b}")
        if self.elements and self.elements[0] < 0:
            raise ValueError(f"points must be nonnegative, got {self.elements[0]}")

    def __hash__(self) -> int:
        # hashing Fractions is costly and sets get used as cache keys a lot
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.elements)
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def of(cls, points: Iterable[Point | int | str]) -> "FinSet":
        return cls(tuple(sorted({point(p) for p in points})))

    def __iter__(self) -> Iterator[Point]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __bool__(self) -> bool:
        return bool(self.elements)

    def __contains__(self, p: Point) -> bool:
        return p in set(self.elements)

    def __str__(self) -> str:
        return format_finset(self)

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet(tuple(sorted(set(self.elements) | set(other.elements))))

    def intersect(self, other: "FinSet") -> "FinSet":
        return FinSet(tuple(sorted(set(self.elements) & set(other.elements))))

    def difference(self, other: "FinSet") -> "FinSet":
        """Relative complement: the unique C with (A & B) | C = A and B & C empty."""
        return FinSet(tuple(sorted(set(self.elements) - set(other.elements))))

    def min_set(self) -> "FinSet":
        """Singleton of the least element; empty set is a fixed point."""
        return FinSet(self.elements[:1])

    def max_set(self) -> "FinSet":
        """Singleton of the greatest element; empty set is a fixed point."""
        return FinSet(self.elements[-1:])

    def successor(self, p: Point) -> Optional[Point]:
        """The next element after ``p`` inside this set; ``p`` must be a member.

        Returns None for the greatest element.
        """
        if p not in self:
            raise ValueError(f"successor of {p} undefined: not an element of {self}")
        idx = self.elements.index(p)
        return self.elements[idx + 1] if idx + 1 < len(self.elements) else None

    def ips(self, other: "FinSet") -> "FinSet":
        """Elements of A whose successor inside A belongs to B."""
        members = set(other.elements)
        kept = [a for a, nxt in zip(self.elements, self.elements[1:]) if nxt in members]
        return FinSet(tuple(kept))

    def issubset(self, other: "FinSet") -> bool:
        return set(self.elements) <= set(other.elements)


EMPTY_FS = FinSet()


def zero_set() -> FinSet:
    """The distinguished singleton {0}."""
    return FinSet((Fraction(0),))


def parse_finset(text: str) -> FinSet:
    """Parse ``{}`` or ``{p1, p2, ...}``."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"finite set must be brace delimited, got {text!r}")
    body = s[1:-1].strip()
    if not body:
        return EMPTY_FS
    return FinSet.of(part.strip() for part in body.split(","))


def format_finset(s: FinSet) -> str:
    return "{" + ", ".join(format_point(p) for p in s.elements) + "}"
