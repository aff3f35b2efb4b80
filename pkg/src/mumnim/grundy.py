"""Mumber theory: the unit-first mex recursion, Grundy values, the
brute-force outcome oracle, and the recursive-mex table emitters.

Mumbers live in Z_m with identity 1 and combine multiplicatively over
disjunctive sums; the Grundy scale is the same values shifted so the
identity is 0.  Single-heap values are computed bottom-up into shared
per-modulus tables (consolidation can land on very large single heaps);
multi-heap positions run an explicit-stack memoized DFS so recursion
depth never limits heap sizes.

Caches are module-global and keyed on (modulus, sorted heaps, policy).
All cached values are pure functions of their key, so concurrent sweeps
may at worst duplicate work; results are identical to serial runs.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .game import (
    ConsolidationPolicy,
    NumPosition,
    Outcome,
    apply_move,
    classify,
    is_stranded,
    legal_moves,
    product_mod,
)
from .modular import check_modulus, gcd, is_prime, unit_mex, units
from .tables import Table


class SearchBudgetExceeded(RuntimeError):
    """Raised when a solve exceeds its position budget."""


class HeapTooSmall(ValueError):
    """Raised by children_mumbers when the heap does not exceed the
    modulus (the reachable-residue bijection needs the full window)."""


class ModulusMismatch(ValueError):
    """Raised when combining positions with different moduli."""


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, limit: Optional[int]) -> None:
        self.remaining = limit

    def charge(self, n: int = 1) -> None:
        if self.remaining is None:
            return
        self.remaining -= n
        if self.remaining < 0:
            raise SearchBudgetExceeded(
                "position budget exhausted; the position is beyond desk scale"
            )


_TABLE_LOCK = threading.Lock()
_MUMBER_TABLES: dict[int, list] = {}
_OUTCOME_TABLES: dict[int, list] = {}
_GRUNDY_TABLES: dict[int, list] = {}
_MUMBER_MEMO: dict[tuple, int] = {}
_OUTCOME_MEMO: dict[tuple, bool] = {}


def _single_heap_table(
    tables: dict[int, list], m: int, h: int, budget: _Budget, compute
) -> list:
    """Extend the per-modulus single-heap table up to h and return it.

    compute(table, k) produces the entry for heap k; entries for heaps
    sharing a factor with m are None (no such position exists).
    """
    tbl = tables.get(m)
    if tbl is not None and len(tbl) > h:
        return tbl
    with _TABLE_LOCK:
        tbl = tables.setdefault(m, [None])
        for k in range(len(tbl), h + 1):
            budget.charge()
            if gcd(k, m) != 1:
                tbl.append(None)
            else:
                tbl.append(compute(tbl, k))
    return tbl


def _mumber_entry_fn(m: int):
    def compute(tbl: list, k: int) -> int:
        opts = set()
        for r in range(1, min(m, k)):
            if gcd(k - r, m) == 1:
                opts.add(tbl[k - r])
        return unit_mex(opts, m)

    return compute


def _outcome_entry_fn(m: int):
    def compute(tbl: list, k: int) -> bool:
        for r in range(1, min(m, k)):
            if gcd(k - r, m) == 1 and tbl[k - r]:
                return False  # a move to a P-position exists
        return True

    return compute


def _single_heap_mumber_value(m: int, h: int, budget: _Budget) -> int:
    return _single_heap_table(_MUMBER_TABLES, m, h, budget, _mumber_entry_fn(m))[h]


def _single_heap_is_p(m: int, h: int, budget: _Budget) -> bool:
    return _single_heap_table(_OUTCOME_TABLES, m, h, budget, _outcome_entry_fn(m))[h]


def _solve_multi(
    pos: NumPosition,
    policy: ConsolidationPolicy,
    budget: _Budget,
    memo: dict,
    single_value: Callable[[int, int, _Budget], object],
    combine: Callable[[list, int], object],
):
    """Explicit-stack memoized DFS over multi-heap positions.

    Single-heap children are leaves resolved through the bottom-up
    tables, so the stack only ever holds multi-heap keys.
    """
    m = pos.modulus
    root = (m, pos.heaps, policy)
    stack = [root]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        node = NumPosition(key[0], key[1])
        children = {
            apply_move(node, mv, policy).heaps
            for mv in legal_moves(node, policy)
        }
        pending = [
            (m, heaps, policy)
            for heaps in children
            if len(heaps) > 1 and (m, heaps, policy) not in memo
        ]
        if pending:
            stack.extend(pending)
            continue
        values = []
        for heaps in children:
            if len(heaps) == 1:
                values.append(single_value(m, heaps[0], budget))
            else:
                values.append(memo[(m, heaps, policy)])
        budget.charge()
        memo[key] = combine(values, m)
        stack.pop()
    return memo[root]


def mumber_mex(
    pos: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.ALWAYS,
    budget: Optional[int] = None,
) -> int:
    """Game value in Z_m via the unit-first mex over all options.

    Memoized on (sorted heaps, modulus, policy).  Equals the heap
    product mod m for every position when compound moves are always
    offered; under stranded-only consolidation small-heap positions can
    diverge (e.g. two heaps of 3 mod 5 give 2, product 4).  With that
    policy the recursion is not even total for m >= 7: positions such
    as [2,3,5] mod 7 have option mumbers covering all of Z_m, and the
    mex comes back as SetSaturated.  A directly saturated position is
    winning (an option with mumber 1 is present); the exception also
    propagates to any position whose subtree contains one.
    """
    b = _Budget(budget)
    if len(pos.heaps) == 1:
        return _single_heap_mumber_value(pos.modulus, pos.heaps[0], b)
    return _solve_multi(
        pos,
        policy,
        b,
        _MUMBER_MEMO,
        _single_heap_mumber_value,
        lambda vals, m: unit_mex(vals, m),
    )


def outcome_bruteforce(
    pos: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
    budget: Optional[int] = None,
) -> Outcome:
    """Win/loss by memoized game-tree search alone: a position is an
    N-position iff some legal move reaches a P-position.  Never consults
    heap products; this is the independent oracle for the product rule."""
    b = _Budget(budget)
    if len(pos.heaps) == 1:
        is_p = _single_heap_is_p(pos.modulus, pos.heaps[0], b)
    else:
        is_p = _solve_multi(
            pos,
            policy,
            b,
            _OUTCOME_MEMO,
            _single_heap_is_p,
            lambda vals, m: not any(v for v in vals),
        )
    return Outcome.P_POSITION if is_p else Outcome.N_POSITION


def single_heap_mumber(h: int, m: int) -> int:
    """Closed form h mod m.

    Agrees with mumber_mex([h]) whenever gcd(h, m) = 1; also used for
    table rows whose heaps share a factor with m and are never playable.
    """
    check_modulus(m)
    if h < 1:
        raise ValueError(f"heap must be >= 1, got {h}")
    return h % m


def grundy_single_heap(h: int, p: int) -> int:
    """Grundy value of a single heap in the plain subtraction game with
    moves 1..p-1 and terminal heap 1, by the standard mex recursion.

    This recursion does not skip heaps divisible by p, so it covers the
    whole table including rows that are not playable positions; the
    value comes out to (h - 1) mod p.
    """
    if h < 1:
        raise ValueError(f"heap must be >= 1, got {h}")
    if not is_prime(p):
        raise ValueError(f"modulus {p} must be prime")
    tbl = _GRUNDY_TABLES.get(p)
    if tbl is None or len(tbl) <= h:
        with _TABLE_LOCK:
            tbl = _GRUNDY_TABLES.setdefault(p, [None])
            for k in range(len(tbl), h + 1):
                succ = {tbl[k - r] for r in range(1, min(p, k))}
                g = 0
                while g in succ:
                    g += 1
                tbl.append(g)
    return tbl[h]


def children_mumbers(pos: NumPosition, heap_index: int) -> set[int]:
    """Product residues of all positions reachable by reducing the heap
    at heap_index.  For a heap above the modulus this sweeps every unit
    except the current product (the reachable-residue bijection)."""
    m = pos.modulus
    h = pos.heaps[heap_index]
    if h <= m:
        raise HeapTooSmall(
            f"heap {h} must exceed the modulus {m} for the full residue window"
        )
    coproduct = 1
    for j, g in enumerate(pos.heaps):
        if j != heap_index:
            coproduct = (coproduct * g) % m
    out = set()
    for r in range(1, m):
        if gcd(h - r, m) == 1:
            out.add((coproduct * (h - r)) % m)
    return out


def sum_multiplicativity_check(
    a: NumPosition,
    b: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.ALWAYS,
) -> bool:
    """True iff the mumber of the side-by-side game equals the product
    of the component mumbers mod m."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus} != {b.modulus}")
    combined = NumPosition(a.modulus, a.heaps + b.heaps)
    lhs = mumber_mex(combined, policy)
    rhs = (mumber_mex(a, policy) * mumber_mex(b, policy)) % a.modulus
    return lhs == rhs


@dataclass(frozen=True)
class MumberReport:
    """Analysis bundle for one position."""

    position: NumPosition
    mumber_mex: int
    mumber_product: int
    grundy: Optional[int]  # prime modulus only: (product - 1) mod m
    outcome: Outcome
    stranded: bool


def mumber_report(
    pos: NumPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.ALWAYS,
    budget: Optional[int] = None,
) -> MumberReport:
    prod = product_mod(pos)
    return MumberReport(
        position=pos,
        mumber_mex=mumber_mex(pos, policy, budget),
        mumber_product=prod,
        grundy=(prod - 1) % pos.modulus if is_prime(pos.modulus) else None,
        outcome=classify(pos),
        stranded=is_stranded(pos),
    )


@dataclass(frozen=True)
class MexTable:
    """Both sections of the recursive-mex table: the single-heap Grundy
    recursion, and the sample-state sheet with residue-class rows and
    three-heap states."""

    single_heap: Table
    sample_states: Table


# Sample-state sheet shape: residue classes listed through 12 periods of
# the modulus, and three-heap states pairing values 1..p-1 and p+1 with
# a fixed third heap of p+1.
_CLASS_PERIODS = 12


def _successor_set_str(tbl: list, h: int, p: int) -> str:
    succ = sorted(h - r for r in range(1, min(p, h)))
    if not succ:
        return "{}"
    return "{" + ", ".join(f"G({s})={tbl[s]}" for s in succ) + "}"


def emit_mex_table(p: int, h_max: int) -> MexTable:
    """Recursive-mex tables for a prime modulus.

    The single-heap section lists h, the successor Grundy set, and G(h)
    for h = 1..h_max.  The sample-state section lists one row per
    residue class (all equivalent single heaps share a G-value) and one
    row per sample three-heap state, each with the product, its residue,
    the closed-form G-value, and the independently recursed mex value
    (compound moves always offered).
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} must be prime")
    if h_max < 1:
        raise ValueError(f"h_max must be >= 1, got {h_max}")

    grundy_single_heap(max(h_max, _CLASS_PERIODS * p + p - 1), p)
    tbl = _GRUNDY_TABLES[p]

    single_rows = []
    for h in range(1, h_max + 1):
        single_rows.append([str(h), _successor_set_str(tbl, h, p), str(tbl[h])])
    single = Table(
        columns=["h", "Successor Grundy Set", "G(h)"],
        rows=single_rows,
        title=f"Single-heap Grundy recursion (mod {p})",
    )

    sample_rows = []
    for c in range(p):
        members = [c + k * p for k in range(_CLASS_PERIODS + 1) if c + k * p >= 1]
        rep = members[-1]
        sample_rows.append(
            [
                "{" + ",".join(map(str, members)) + "}",
                "",
                "",
                str(rep),
                str(rep % p),
                str((rep % p - 1) % p),
                str(grundy_single_heap(rep, p)),
            ]
        )
    values = list(range(1, p)) + [p + 1]
    for a, b in itertools.combinations_with_replacement(values, 2):
        heaps = (a, b, p + 1)
        prod = a * b * (p + 1)
        rmex = (mumber_mex(NumPosition(p, heaps), ConsolidationPolicy.ALWAYS) - 1) % p
        sample_rows.append(
            [
                str(a),
                str(b),
                str(p + 1),
                str(prod),
                str(prod % p),
                str((prod % p - 1) % p),
                str(rmex),
            ]
        )
    samples = Table(
        columns=[
            "Heap 1",
            "Heap 2",
            "Heap 3",
            "Single Heap or Product",
            f"Product Mod {p}",
            "G-value",
            "Recursive Mex",
        ],
        rows=sample_rows,
        title=f"Recursive mex for sample states (mod {p})",
    )
    return MexTable(single_heap=single, sample_states=samples)


def clear_caches() -> None:
    """Drop all memoized tables (test isolation helper)."""
    with _TABLE_LOCK:
        _MUMBER_TABLES.clear()
        _OUTCOME_TABLES.clear()
        _GRUNDY_TABLES.clear()
        _MUMBER_MEMO.clear()
        _OUTCOME_MEMO.clear()
