"""Numeric MuM positions and rules.

A position is a multiset of heaps, every heap coprime to the modulus.
A turn either subtracts r (1 <= r < m, heap strictly decreases, result
stays coprime) from one heap, or -- when consolidation applies -- folds
the whole multiset into the single heap prod(heaps) and subtracts r from
that in the same turn.  The player to move loses iff the heap product is
1 mod m; the player who makes the last move wins (normal play).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Union

from .modular import check_modulus, gcd, mod_inverse


class EmptyHeaps(ValueError):
    """Raised for a position with no heaps."""


class NonPositiveHeap(ValueError):
    """Raised for a heap value < 1."""


class HeapNotCoprime(ValueError):
    """Raised when a heap shares a factor with the modulus."""


class IllegalMove(ValueError):
    """Raised by apply_move; the message names the violated rule."""


class Outcome(Enum):
    P_POSITION = "P"  # player to move loses under optimal play
    N_POSITION = "N"  # player to move wins

    def __str__(self) -> str:
        return self.value


class ConsolidationPolicy(Enum):
    STRANDED_ONLY = "stranded-only"  # consolidation only from stranded positions
    ALWAYS = "always"  # compound moves offered from any multi-heap position

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Reduce:
    """Subtract `amount` from the heap at `heap_index` (sorted order)."""

    heap_index: int
    amount: int


@dataclass(frozen=True)
class ConsolidateThenReduce:
    """Replace all heaps with their integer product, then subtract
    `amount` from it.  One compound turn."""

    amount: int


MoveAction = Union[Reduce, ConsolidateThenReduce]


@dataclass(frozen=True)
class NumPosition:
    """Immutable numeric position; heaps stored sorted ascending."""

    modulus: int
    heaps: tuple[int, ...]

    def __post_init__(self) -> None:
        check_modulus(self.modulus)
        if not self.heaps:
            raise EmptyHeaps("a position needs at least one heap")
        for h in self.heaps:
            if not isinstance(h, int) or h < 1:
                raise NonPositiveHeap(f"heap {h!r} must be a positive integer")
            if gcd(h, self.modulus) != 1:
                raise HeapNotCoprime(
                    f"heap {h} not coprime to {self.modulus}"
                )
        object.__setattr__(self, "heaps", tuple(sorted(self.heaps)))

    def __str__(self) -> str:
        return f"[{', '.join(map(str, self.heaps))}] mod {self.modulus}"


def new_position(modulus: int, heaps: Iterable[int]) -> NumPosition:
    """Validated position with canonically sorted heaps."""
    return NumPosition(modulus, tuple(heaps))


def full_product(pos: NumPosition) -> int:
    prod = 1
    for h in pos.heaps:
        prod *= h
    return prod


def product_mod(pos: NumPosition) -> int:
    """prod(heaps) mod m, reduced per factor so intermediates stay < m^2."""
    acc = 1
    m = pos.modulus
    for h in pos.heaps:
        acc = (acc * h) % m
    return acc


def classify(pos: NumPosition) -> Outcome:
    """P-position iff the heap product is 1 mod m."""
    return Outcome.P_POSITION if product_mod(pos) == 1 else Outcome.N_POSITION


def is_terminal(pos: NumPosition) -> bool:
    """True iff every heap equals 1 (no reduction possible anywhere)."""
    return all(h == 1 for h in pos.heaps)


def _reduce_legal(pos: NumPosition, heap_index: int, r: int) -> Optional[str]:
    """None if the reduce is legal, else the violated rule."""
    m = pos.modulus
    if not 0 <= heap_index < len(pos.heaps):
        return f"heap index {heap_index} out of range"
    h = pos.heaps[heap_index]
    if not 1 <= r < m:
        return f"amount must satisfy 1 <= r < {m}"
    if r >= h:
        return f"amount {r} does not leave heap {h} positive (r < h required)"
    if gcd(h - r, m) != 1:
        return f"resulting heap {h - r} shares a factor with {m}"
    return None


def _consolidate_legal(pos: NumPosition, r: int) -> Optional[str]:
    m = pos.modulus
    h_new = full_product(pos)
    if not 1 <= r < m:
        return f"amount must satisfy 1 <= r < {m}"
    if r >= h_new:
        return f"amount {r} does not leave consolidated heap {h_new} positive"
    if gcd(h_new - r, m) != 1:
        return f"resulting heap {h_new - r} shares a factor with {m}"
    return None


def _consolidation_available(pos: NumPosition, policy: ConsolidationPolicy) -> bool:
    if policy is ConsolidationPolicy.ALWAYS:
        return len(pos.heaps) >= 2
    return is_stranded(pos)


def legal_moves(
    pos: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
) -> list[MoveAction]:
    """All legal moves, reduces ordered by (heap index, amount), then any
    compound consolidate-then-reduce moves ordered by amount.

    For modulus 2 no reduction is ever legal (h - 1 is always even), so
    the list can be empty on non-terminal positions; every mod-2 position
    is a P-position and the game is over where it stands.
    """
    m = pos.modulus
    moves: list[MoveAction] = []
    for i, h in enumerate(pos.heaps):
        for r in range(1, min(m, h)):
            if gcd(h - r, m) == 1:
                moves.append(Reduce(i, r))
    if _consolidation_available(pos, policy):
        h_new = full_product(pos)
        for r in range(1, m):
            if r < h_new and gcd(h_new - r, m) == 1:
                moves.append(ConsolidateThenReduce(r))
    return moves


def apply_move(
    pos: NumPosition,
    move: MoveAction,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
) -> NumPosition:
    """Resulting position; one MoveAction is exactly one turn.

    Raises IllegalMove naming the violated condition.
    """
    if isinstance(move, Reduce):
        violation = _reduce_legal(pos, move.heap_index, move.amount)
        if violation:
            raise IllegalMove(violation)
        heaps = list(pos.heaps)
        heaps[move.heap_index] -= move.amount
        return NumPosition(pos.modulus, tuple(heaps))
    if isinstance(move, ConsolidateThenReduce):
        if not _consolidation_available(pos, policy):
            raise IllegalMove(
                f"consolidation not permitted here (policy {policy.value})"
            )
        violation = _consolidate_legal(pos, move.amount)
        if violation:
            raise IllegalMove(violation)
        return NumPosition(pos.modulus, (full_product(pos) - move.amount,))
    raise IllegalMove(f"unknown move type {type(move).__name__}")


def is_stranded(pos: NumPosition) -> bool:
    """Winning position from which no direct reduction reaches product 1.

    Losing and terminal positions are never stranded.
    """
    m = pos.modulus
    if is_terminal(pos) or product_mod(pos) == 1:
        return False
    for i, h in enumerate(pos.heaps):
        coproduct = 1
        for j, g in enumerate(pos.heaps):
            if j != i:
                coproduct = (coproduct * g) % m
        for r in range(1, min(m, h)):
            if gcd(h - r, m) == 1 and (coproduct * (h - r)) % m == 1:
                return False
    return True


def optimal_move(
    pos: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
) -> Optional[MoveAction]:
    """A legal move to a losing position, or None when already losing.

    Direct construction first: on a heap h > m subtract
    (h - coproduct^-1) mod m, which always lands on product 1.  Small
    heaps fall back to scanning; stranded positions consolidate.
    Ties break on lowest heap index, then smallest amount.
    """
    m = pos.modulus
    if product_mod(pos) == 1:
        return None
    for i, h in enumerate(pos.heaps):
        if h <= m:
            continue
        coproduct = 1
        for j, g in enumerate(pos.heaps):
            if j != i:
                coproduct = (coproduct * g) % m
        r = (h - mod_inverse(coproduct, m)) % m
        if r >= 1 and _reduce_legal(pos, i, r) is None:
            return Reduce(i, r)
    for i, h in enumerate(pos.heaps):
        coproduct = 1
        for j, g in enumerate(pos.heaps):
            if j != i:
                coproduct = (coproduct * g) % m
        for r in range(1, min(m, h)):
            if gcd(h - r, m) == 1 and (coproduct * (h - r)) % m == 1:
                return Reduce(i, r)
    # Stranded: the compound move to product 1 always exists.
    h_new = full_product(pos)
    r = (h_new - 1) % m
    if r >= 1 and _consolidate_legal(pos, r) is None:
        return ConsolidateThenReduce(r)
    return None


def positions_with_heaps(
    modulus: int, max_heaps: int, max_value: int
) -> Iterable[NumPosition]:
    """All positions with 1..max_heaps heaps drawn (with repetition) from
    the values in 1..max_value coprime to the modulus.  Sweep helper."""
    values = [v for v in range(1, max_value + 1) if gcd(v, modulus) == 1]
    for k in range(1, max_heaps + 1):
        for heaps in itertools.combinations_with_replacement(values, k):
            yield NumPosition(modulus, heaps)
