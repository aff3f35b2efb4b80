"""Composite-modulus decomposition into prime-power factor subgames.

A position mod m is losing for the mover exactly when every component
of its factor state vector is 1, which the Chinese remainder theorem
makes equivalent to the whole product being 1 mod m.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .game import NumPosition
from .modular import PrimePowerFactor, factor_prime_powers
from .tables import Table


class FactorMismatch(ValueError):
    """Raised when projecting onto a factor the modulus does not have."""


@dataclass(frozen=True)
class StateVector:
    factors: tuple[PrimePowerFactor, ...]
    components: tuple[int, ...]  # component j is the product mod factors[j].value

    def __post_init__(self) -> None:
        if len(self.factors) != len(self.components):
            raise ValueError(
                f"{len(self.components)} components for {len(self.factors)} factors"
            )


def state_vector(pos: NumPosition) -> StateVector:
    """Per prime-power factor residues of the heap product."""
    factors = factor_prime_powers(pos.modulus)
    components = []
    for f in factors:
        c = 1
        for h in pos.heaps:
            c = (c * h) % f.value
        components.append(c)
    return StateVector(factors=tuple(factors), components=tuple(components))


def is_identity_vector(v: StateVector) -> bool:
    return all(c == 1 for c in v.components)


def project(pos: NumPosition, factor: PrimePowerFactor) -> NumPosition:
    """Reinterpret the same heaps as a game on one prime-power factor."""
    if factor not in factor_prime_powers(pos.modulus):
        raise FactorMismatch(
            f"{factor.value} is not a prime-power factor of {pos.modulus}"
        )
    return NumPosition(factor.value, pos.heaps)


def emit_mum15_table(heap_values: list[int] = (11, 13, 14, 16)) -> Table:
    """Decomposition sheet for three-heap states mod 15.

    One row per non-decreasing triple drawn from heap_values, with each
    heap's residues mod 3 and mod 5, the componentwise products, and a
    W/L status that is L exactly when both products are 1.
    """
    modulus = 15
    factors = factor_prime_powers(modulus)
    for h in heap_values:
        NumPosition(modulus, (h,))  # validates coprimality and range
    columns = []
    for i in range(1, 4):
        columns.append(f"H{i}")
        for f in factors:
            columns.append(f"M{f.value}")
    for f in factors:
        columns.append(f"M{f.value} Prod")
    columns.append("Status")

    rows = []
    for triple in itertools.combinations_with_replacement(sorted(heap_values), 3):
        cells = []
        prods = [1] * len(factors)
        for h in triple:
            cells.append(str(h))
            for j, f in enumerate(factors):
                cells.append(str(h % f.value))
                prods[j] = (prods[j] * h) % f.value
        cells.extend(str(p) for p in prods)
        cells.append("L" if all(p == 1 for p in prods) else "W")
        rows.append(cells)
    return Table(columns=columns, rows=rows, title=f"Decomposition of three-heap states mod {modulus}")
