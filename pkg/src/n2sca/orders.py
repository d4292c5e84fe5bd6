"""Exponent vectors and the two total orders driving the reduction.

An exponent vector is a finitely supported sequence of naturals indexed
from 1.  Under the slot convention of the negative-monomial template,
odd slot ``2n-1`` counts powers of ``T[-(2n-1)/2]`` and even slot ``2n``
counts powers of ``G[-(n-1)/2]``, so the doubled weight of one unit in
slot k is ``k`` for odd k and ``(k-2)/2`` for even k.  Slot 2 is the
unique weight-0 slot, which is why enumeration needs the explicit
length bound.
"""

from __future__ import annotations

import re

from .errors import ParseError

LT, EQ, GT = -1, 0, 1


def slot_weight2(slot: int) -> int:
    """Doubled weight contributed by one unit of exponent in a slot."""
    if slot < 1:
        raise ValueError(f"slots are indexed from 1, got {slot}")
    return slot if slot % 2 else (slot - 2) // 2


class ExponentVector:
    """Immutable sparse vector of naturals, indexed from slot 1."""

    __slots__ = ("entries", "length", "_hash", "_w2")
    _cache: dict[tuple[tuple[int, int], ...], "ExponentVector"] = {}

    def __new__(cls, entries):
        items = tuple(sorted((int(s), int(e)) for s, e in entries if e))
        hit = cls._cache.get(items)
        if hit is not None:
            return hit
        for s, e in items:
            if s < 1:
                raise ValueError(f"slots are indexed from 1, got {s}")
            if e < 0:
                raise ValueError(f"negative exponent {e} in slot {s}")
        seen = [s for s, _ in items]
        if len(set(seen)) != len(seen):
            raise ValueError(f"duplicate slots in {items}")
        ev = object.__new__(cls)
        ev.entries = items
        ev.length = sum(e for _, e in items)
        ev._hash = hash(items)
        ev._w2 = sum(slot_weight2(s) * e for s, e in items)
        if len(cls._cache) < 1_000_000:
            cls._cache[items] = ev
        return ev

    @property
    def weight2(self) -> int:
        return self._w2

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def exponent(self, slot: int) -> int:
        for s, e in self.entries:
            if s == slot:
                return e
        return 0

    def min_nonzero_slot(self) -> int | None:
        return self.entries[0][0] if self.entries else None

    def max_slot(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    def bump(self, slot: int, delta: int) -> "ExponentVector":
        """A copy with ``delta`` added to one slot (may not go negative)."""
        items = dict(self.entries)
        new = items.get(slot, 0) + delta
        if new < 0:
            raise ValueError(f"slot {slot} would become negative")
        items[slot] = new
        return ExponentVector(items.items())

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        items = dict(self.entries)
        for s, e in other.entries:
            items[s] = items.get(s, 0) + e
        return ExponentVector(items.items())

    def __sub__(self, other: "ExponentVector") -> "ExponentVector":
        items = dict(self.entries)
        for s, e in other.entries:
            items[s] = items.get(s, 0) - e
        return ExponentVector(items.items())

    def dense_key(self) -> tuple[int, ...]:
        """Entries from slot 1 upward, without trailing zeros."""
        if not self.entries:
            return ()
        top = self.entries[-1][0]
        dense = [0] * top
        for s, e in self.entries:
            dense[s - 1] = e
        return tuple(dense)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, ExponentVector) and self.entries == other.entries
        )

    def __hash__(self):
        return self._hash

    def __str__(self) -> str:
        if not self.entries:
            return "{}"
        return "{" + ",".join(f"{s}:{e}" for s, e in self.entries) + "}"

    def __repr__(self) -> str:
        return f"ev({str(self)!r})"


ZERO_VECTOR = ExponentVector(())


def eps(slot: int) -> ExponentVector:
    """The unit vector with a single 1 in the given slot."""
    return ExponentVector(((slot, 1),))


def weight2(i: ExponentVector) -> int:
    """Doubled weight: sum over slots of slot_weight2 * exponent."""
    return i.weight2


def length(i: ExponentVector) -> int:
    return i.length


def revlex_compare(i: ExponentVector, j: ExponentVector) -> int:
    """Reverse lexicographic order: first differing slot (from slot 1 up)
    decides; the zero vector is the minimum."""
    a, b = i.dense_key(), j.dense_key()
    if a == b:
        return EQ
    return GT if a > b else LT


def principal_compare(i: ExponentVector, j: ExponentVector) -> int:
    """Lexicographic on (weight, length, revlex)."""
    if i.weight2 != j.weight2:
        return GT if i.weight2 > j.weight2 else LT
    if i.length != j.length:
        return GT if i.length > j.length else LT
    return revlex_compare(i, j)


def principal_sort_key(i: ExponentVector):
    """Sorting by this key ascending matches the principal order."""
    return (i.weight2, i.length, i.dense_key())


def min_nonzero_slot(i: ExponentVector) -> int | None:
    return i.min_nonzero_slot()


def enumerate_vectors(max_weight2: int, max_length: int) -> list[ExponentVector]:
    """All vectors with weight <= max_weight2/2 and length <= max_length,
    sorted descending by the principal order."""
    if max_weight2 < 0 or max_length < 0:
        raise ValueError("enumeration bounds must be nonnegative")
    slots = [s for s in range(1, 2 * max_weight2 + 3) if slot_weight2(s) <= max_weight2]
    out: list[ExponentVector] = []

    def walk(idx: int, left_w2: int, left_len: int, acc: list[tuple[int, int]]):
        if idx == len(slots):
            out.append(ExponentVector(tuple(acc)))
            return
        slot = slots[idx]
        w2 = slot_weight2(slot)
        top = left_len if w2 == 0 else min(left_len, left_w2 // w2)
        for e in range(top + 1):
            if e:
                acc.append((slot, e))
            walk(idx + 1, left_w2 - w2 * e, left_len - e, acc)
            if e:
                acc.pop()

    walk(0, max_weight2, max_length, [])
    out.sort(key=principal_sort_key, reverse=True)
    return out


_EV_RE = re.compile(r"^\{([^{}]*)\}$")


def parse_exponent_vector(text: str) -> ExponentVector:
    m = _EV_RE.match(text.strip())
    if not m:
        raise ParseError(f"bad exponent vector {text!r}; expected {{slot:exp,...}}")
    body = m.group(1).strip()
    if not body:
        return ZERO_VECTOR
    items = []
    for chunk in body.split(","):
        try:
            s, e = chunk.split(":")
            items.append((int(s), int(e)))
        except ValueError as exc:
            raise ParseError(f"bad exponent entry {chunk!r}") from exc
    try:
        return ExponentVector(items)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
