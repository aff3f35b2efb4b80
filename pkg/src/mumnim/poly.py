"""Finite fields F(p^n) as quotients F_p[x]/(I(x)) and the polynomial
variant of the game played on canonical integer heaps.

Elements are integers 0..p^n-1 whose base-p digits are polynomial
coefficients, least significant digit = constant term.  A heap h may be
reduced to any smaller canonical heap; distinct canonical heaps are
distinct field elements, so every move changes the product.  The losing
condition is the field product being 1, and consolidation replaces the
heaps with the canonical rep of the product (not the integer product,
which need not be canonical).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .game import (
    ConsolidateThenReduce,
    ConsolidationPolicy,
    EmptyHeaps,
    IllegalMove,
    NonPositiveHeap,
    Outcome,
    Reduce,
)
from .grundy import _Budget
from .modular import is_prime
from .tables import Table


class NotPrime(ValueError):
    """Raised when the coefficient modulus is not prime."""


class NotMonic(ValueError):
    """Raised when the field modulus is not monic of the stated degree."""


class NotIrreducible(ValueError):
    """Raised when the field modulus factors over F_p."""


class ZeroInverse(ValueError):
    """Raised when inverting the zero element."""


class FieldMismatch(ValueError):
    """Raised when combining elements of different fields."""


class HeapOutOfRange(ValueError):
    """Raised when a heap is not a canonical nonzero element."""


# Polynomials are coefficient tuples, index = degree, no trailing zeros.


def _trim(c: list[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _int_to_poly(h: int, p: int) -> tuple[int, ...]:
    digits = []
    while h:
        digits.append(h % p)
        h //= p
    return tuple(digits)


def _poly_to_int(c: tuple[int, ...], p: int) -> int:
    v = 0
    for d in reversed(c):
        v = v * p + d
    return v


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_divmod(
    a: tuple[int, ...], b: tuple[int, ...], p: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(rem) - len(b), -1, -1):
        coef = (rem[i + len(b) - 1] * inv_lead) % p
        if coef == 0:
            continue
        q[i] = coef
        for j, bj in enumerate(b):
            rem[i + j] = (rem[i + j] - coef * bj) % p
    return _trim(q), _trim(rem)


def _poly_mod(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    return _poly_divmod(a, b, p)[1]


def is_irreducible(coeffs: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    c = _trim([x % p for x in coeffs])
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")
    for d in range(1, deg // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            divisor = tuple(lower) + (1,)
            if not _poly_mod(c, divisor, p):
                return False
    return True


def _poly_to_str(c: tuple[int, ...]) -> str:
    if not c:
        return "0"
    terms = []
    for d in range(len(c) - 1, -1, -1):
        a = c[d]
        if a == 0:
            continue
        if d == 0:
            terms.append(str(a))
        elif d == 1:
            terms.append("x" if a == 1 else f"{a}x")
        else:
            terms.append(f"x^{d}" if a == 1 else f"{a}x^{d}")
    return "+".join(terms)


@dataclass(frozen=True)
class FieldSpec:
    """A concrete field F(p^n) with its reduction modulus.

    Discrete-log tables over the generator x are precomputed when x
    generates the multiplicative group; both are None otherwise.
    """

    p: int
    n: int
    coeffs: tuple[int, ...]  # modulus I(x), index = degree, monic, length n+1
    log: Optional[tuple[int, ...]] = field(
        default=None, init=False, compare=False, repr=False
    )
    exp: Optional[tuple[int, ...]] = field(
        default=None, init=False, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.n < 1:
            raise NotMonic(f"degree must be >= 1, got {self.n}")
        coeffs = tuple(c % self.p for c in self.coeffs)
        if len(coeffs) != self.n + 1 or coeffs[-1] != 1:
            raise NotMonic(
                f"modulus must be monic of degree {self.n}, got {self.coeffs}"
            )
        if coeffs[0] == 0:
            raise NotIrreducible("constant term is zero, so x divides the modulus")
        if self.n > 1 and not is_irreducible(list(coeffs), self.p):
            raise NotIrreducible(f"{_poly_to_str(coeffs)} factors over F_{self.p}")
        object.__setattr__(self, "coeffs", coeffs)
        self._build_log_tables()

    @property
    def order(self) -> int:
        return self.p**self.n

    def _build_log_tables(self) -> None:
        x_rep = _poly_to_int(_poly_mod((0, 1), self.coeffs, self.p), self.p)
        exp = [1]
        seen = {1}
        rep = 1
        for _ in range(self.order - 2):
            rep = self.mul_reps(rep, x_rep)
            if rep in seen:
                return  # x does not generate
            exp.append(rep)
            seen.add(rep)
        object.__setattr__(self, "exp", tuple(exp))
        log = [0] * self.order
        for k, r in enumerate(exp):
            log[r] = k
        object.__setattr__(self, "log", tuple(log))

    def mul_reps(self, a: int, b: int) -> int:
        prod = _poly_mul(_int_to_poly(a, self.p), _int_to_poly(b, self.p), self.p)
        return _poly_to_int(_poly_mod(prod, self.coeffs, self.p), self.p)


@dataclass(frozen=True)
class FieldElement:
    rep: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.rep < self.field.order:
            raise HeapOutOfRange(
                f"rep {self.rep} outside 0..{self.field.order - 1}"
            )


def make_field(p: int, n: int, coeffs: list[int]) -> FieldSpec:
    """Validated field from a monic degree-n modulus over F_p."""
    return FieldSpec(p, n, tuple(coeffs))


def aes_field() -> FieldSpec:
    """F(2^8) with the Rijndael reduction modulus x^8+x^4+x^3+x+1."""
    return make_field(2, 8, _int_to_poly(0x11B, 2))


def field_from_int(p: int, n: int, modulus_int: int) -> FieldSpec:
    """Field whose modulus is given as an integer in base-p digit form."""
    return make_field(p, n, _int_to_poly(modulus_int, p))


def modulus_int(fld: FieldSpec) -> int:
    """The reduction polynomial as an integer in base-p digit form."""
    return _poly_to_int(fld.coeffs, fld.p)


def modulus_str(fld: FieldSpec) -> str:
    return _poly_to_str(fld.coeffs)


def reduce_int(h: int, fld: FieldSpec) -> FieldElement:
    """Canonical element of an arbitrary nonnegative integer's polynomial."""
    if h < 0:
        raise ValueError(f"expected h >= 0, got {h}")
    rep = _poly_to_int(_poly_mod(_int_to_poly(h, fld.p), fld.coeffs, fld.p), fld.p)
    return FieldElement(rep, fld)


def poly_str(e: FieldElement) -> str:
    return _poly_to_str(_int_to_poly(e.rep, e.field.p))


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatch("elements belong to different fields")
    return FieldElement(a.field.mul_reps(a.rep, b.rep), a.field)


def field_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse by the extended Euclidean algorithm over
    F_p[x]."""
    if a.rep == 0:
        raise ZeroInverse("0 has no multiplicative inverse")
    p = a.field.p
    r0, r1 = a.field.coeffs, _int_to_poly(a.rep, p)
    s0, s1 = (), (1,)
    while r1:
        q, rem = _poly_divmod(r0, r1, p)
        r0, r1 = r1, rem
        qs = _poly_mul(q, s1, p)
        nxt = [0] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            nxt[i] = c
        for i, c in enumerate(qs):
            nxt[i] = (nxt[i] - c) % p
        s0, s1 = s1, _trim(nxt)
    # r0 is a unit constant gcd; scale s0 by its inverse
    scale = pow(r0[0], -1, p)
    inv = _poly_mod(_poly_mul(s0, (scale,), p), a.field.coeffs, p)
    return FieldElement(_poly_to_int(inv, p), a.field)


@dataclass(frozen=True)
class PolyPosition:
    """Multiset of canonical heaps over one field, kept sorted."""

    field: FieldSpec
    heaps: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.heaps) == 0:
            raise EmptyHeaps("a position needs at least one heap")
        for h in self.heaps:
            if h < 1:
                raise NonPositiveHeap(f"heap {h} is not positive")
            if h >= self.field.order:
                raise HeapOutOfRange(
                    f"heap {h} is not canonical for order {self.field.order}"
                )
        object.__setattr__(self, "heaps", tuple(sorted(self.heaps)))


def new_poly_position(fld: FieldSpec, heaps) -> PolyPosition:
    return PolyPosition(fld, tuple(heaps))


def field_product(pos: PolyPosition) -> FieldElement:
    acc = 1
    for h in pos.heaps:
        acc = pos.field.mul_reps(acc, h)
    return FieldElement(acc, pos.field)


def classify_poly(pos: PolyPosition) -> Outcome:
    if field_product(pos).rep == 1:
        return Outcome.P_POSITION
    return Outcome.N_POSITION


def is_terminal_poly(pos: PolyPosition) -> bool:
    return all(h == 1 for h in pos.heaps)


def _winning_targets(pos: PolyPosition) -> list[tuple[int, int]]:
    """(heap_index, target) pairs whose direct reduction makes the
    product 1.  The target for a heap is unique: k = C(s(h)/P_field)."""
    prod = field_product(pos)
    if prod.rep == 1:
        return []
    inv_prod = field_inv(prod)
    out = []
    for i, h in enumerate(pos.heaps):
        k = pos.field.mul_reps(h, inv_prod.rep)
        if 1 <= k < h:
            out.append((i, k))
    return out


def is_stranded_poly(pos: PolyPosition) -> bool:
    """Winning side to move, but no single reduction reaches product 1."""
    if field_product(pos).rep == 1 or is_terminal_poly(pos):
        return False
    return not _winning_targets(pos)


def _consolidation_available(pos: PolyPosition, policy: ConsolidationPolicy) -> bool:
    if policy is ConsolidationPolicy.ALWAYS and len(pos.heaps) >= 2:
        return True
    return is_stranded_poly(pos)


MoveAction = Union[Reduce, ConsolidateThenReduce]


def legal_moves_poly(
    pos: PolyPosition, policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY
) -> list[MoveAction]:
    """Every reduction to a smaller canonical heap, ordered by heap index
    then amount, followed by compound consolidation moves when offered."""
    moves: list[MoveAction] = []
    for i, h in enumerate(pos.heaps):
        for r in range(1, h):
            moves.append(Reduce(i, r))
    if _consolidation_available(pos, policy):
        h_new = field_product(pos).rep
        for r in range(1, h_new):
            moves.append(ConsolidateThenReduce(r))
    return moves


def apply_move_poly(
    pos: PolyPosition,
    move: MoveAction,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
) -> PolyPosition:
    if isinstance(move, Reduce):
        if not 0 <= move.heap_index < len(pos.heaps):
            raise IllegalMove(f"no heap at index {move.heap_index}")
        h = pos.heaps[move.heap_index]
        if not 1 <= move.amount < h:
            raise IllegalMove(
                f"amount {move.amount} must leave a heap in 1..{h - 1}"
            )
        heaps = list(pos.heaps)
        heaps[move.heap_index] = h - move.amount
        return PolyPosition(pos.field, tuple(heaps))
    if isinstance(move, ConsolidateThenReduce):
        if not _consolidation_available(pos, policy):
            raise IllegalMove("consolidation is not available here")
        h_new = field_product(pos).rep
        if not 1 <= move.amount < h_new:
            raise IllegalMove(
                f"amount {move.amount} must leave a heap in 1..{h_new - 1}"
            )
        return PolyPosition(pos.field, (h_new - move.amount,))
    raise IllegalMove(f"unknown move type {type(move).__name__}")


def optimal_move_poly(
    pos: PolyPosition, policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY
) -> Optional[MoveAction]:
    """A move to a losing-for-opponent position when one exists.

    Direct reductions are tried lowest heap index first; each heap has
    exactly one candidate target k = C(s(h)/P_field).  A heap of
    p^n - 1 always admits one.  Otherwise the position is stranded and
    the compound move lands on the single heap 1.
    """
    if field_product(pos).rep == 1:
        return None
    targets = _winning_targets(pos)
    if targets:
        i, k = targets[0]
        return Reduce(i, pos.heaps[i] - k)
    h_new = field_product(pos).rep
    return ConsolidateThenReduce(h_new - 1)


_POLY_OUTCOME_MEMO: dict[tuple, bool] = {}


def outcome_bruteforce_poly(
    pos: PolyPosition,
    policy: ConsolidationPolicy = ConsolidationPolicy.STRANDED_ONLY,
    budget: Optional[int] = None,
) -> Outcome:
    """Win/loss by game-tree search alone; never consults the product.

    Single heaps are leaves: only [1] is losing, since any larger heap
    reduces to 1 directly.
    """
    b = _Budget(budget)
    if len(pos.heaps) == 1:
        is_p = pos.heaps[0] == 1
        return Outcome.P_POSITION if is_p else Outcome.N_POSITION
    root = (pos.field, pos.heaps, policy)
    stack = [root]
    while stack:
        key = stack[-1]
        if key in _POLY_OUTCOME_MEMO:
            stack.pop()
            continue
        fld, heaps, pol = key
        node = PolyPosition(fld, heaps)
        children = {
            apply_move_poly(node, mv, pol).heaps
            for mv in legal_moves_poly(node, pol)
        }
        pending = [
            (fld, hs, pol)
            for hs in children
            if len(hs) > 1 and (fld, hs, pol) not in _POLY_OUTCOME_MEMO
        ]
        if pending:
            stack.extend(pending)
            continue
        b.charge()
        is_p = True
        for hs in children:
            child_p = hs == (1,) if len(hs) == 1 else _POLY_OUTCOME_MEMO[(fld, hs, pol)]
            if child_p:
                is_p = False
                break
        _POLY_OUTCOME_MEMO[key] = is_p
        stack.pop()
    is_p = _POLY_OUTCOME_MEMO[root]
    return Outcome.P_POSITION if is_p else Outcome.N_POSITION


def emit_inverse_table(fld: FieldSpec) -> Table:
    """Inverse table for every nonzero element.

    When x generates the multiplicative group the rows are ordered by
    power of x and carry the two power columns; otherwise rows are
    ordered by integer rep and the power columns are omitted.
    """

    def power_label(k: int) -> str:
        if k == 0:
            return f"x^0 or x^{fld.order - 1}"
        return f"x^{k}"

    if fld.exp is not None:
        columns = [
            "Polynomial",
            "Integer Rep",
            "Power of x",
            "Inverse (Polynomial)",
            "Inverse (Integer)",
            "Inverse (Power)",
        ]
        rows = []
        for k, rep in enumerate(fld.exp):
            e = FieldElement(rep, fld)
            inv = field_inv(e)
            rows.append(
                [
                    poly_str(e),
                    str(rep),
                    power_label(k),
                    poly_str(inv),
                    str(inv.rep),
                    power_label(fld.log[inv.rep]),
                ]
            )
    else:
        columns = [
            "Polynomial",
            "Integer Rep",
            "Inverse (Polynomial)",
            "Inverse (Integer)",
        ]
        rows = []
        for rep in range(1, fld.order):
            e = FieldElement(rep, fld)
            inv = field_inv(e)
            rows.append([poly_str(e), str(rep), poly_str(inv), str(inv.rep)])
    title = f"Multiplicative inverses in F({fld.p}^{fld.n}) with I(x) = {_poly_to_str(fld.coeffs)}"
    return Table(columns=columns, rows=rows, title=title)
