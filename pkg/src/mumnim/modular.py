"""Exact modular arithmetic used throughout the engine.

Inverses via the extended Euclidean algorithm, prime-power factorization
by trial division, CRT recombination, and the unit-first mex scan that
drives the mumber recursion.  All functions are pure and operate on
plain ints; moduli are always >= 2.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence


class NotInvertible(ValueError):
    """Raised when asked for an inverse of a non-unit."""


class SetSaturated(ValueError):
    """Raised by unit_mex when every residue mod m is present (cannot
    happen for option sets produced by legal play)."""


class LengthMismatch(ValueError):
    """Raised when residue and factor lists disagree in length."""


class PrimePowerFactor(NamedTuple):
    prime: int
    exponent: int
    value: int


def check_modulus(m: int) -> int:
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ValueError(f"modulus must be an integer >= 2, got {m!r}")
    return m


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    prev_x, x = 1, 0
    prev_y, y = 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        prev_x, x = x, prev_x - q * x
        prev_y, y = y, prev_y - q * y
    return a, prev_x, prev_y


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m, in 1..m-1.

    Raises NotInvertible when gcd(a, m) != 1.
    """
    check_modulus(m)
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise NotInvertible(f"{a} is not invertible mod {m} (gcd={g})")
    return x % m


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def units(m: int) -> tuple[int, ...]:
    """Residues in 1..m-1 coprime to m, ascending."""
    check_modulus(m)
    return tuple(r for r in range(1, m) if gcd(r, m) == 1)


@lru_cache(maxsize=None)
def mex_scan_order(m: int) -> tuple[int, ...]:
    """Candidate order for unit_mex: units ascending, then 0, then the
    remaining non-units ascending.  For prime m this is 1, .., m-1, 0."""
    us = units(m)
    unit_set = set(us)
    tail = tuple(r for r in range(1, m) if r not in unit_set)
    return us + (0,) + tail


def unit_mex(s: Iterable[int], m: int) -> int:
    """First residue mod m not in s, scanning units first.

    The mumber identity is 1, so the scan starts at the units; 0 and the
    other non-units are reachable only through the closed-form tables,
    never through legal play.
    """
    present = set(s)
    for candidate in mex_scan_order(m):
        if candidate not in present:
            return candidate
    raise SetSaturated(f"every residue mod {m} is present")


def factor_prime_powers(m: int) -> list[PrimePowerFactor]:
    """Prime-power factorization of m, ascending by prime.

    Trial division; moduli here are desk scale.
    """
    check_modulus(m)
    factors = []
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            v = 1
            while n % p == 0:
                n //= p
                e += 1
                v *= p
            factors.append(PrimePowerFactor(p, e, v))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append(PrimePowerFactor(n, 1, n))
    return factors


def crt_combine(residues: Sequence[int], factors: Sequence[PrimePowerFactor]) -> int:
    """Unique residue mod prod(factors) congruent to residues[i] mod
    factors[i].value.  Factor values must be pairwise coprime."""
    if len(residues) != len(factors):
        raise LengthMismatch(
            f"{len(residues)} residues for {len(factors)} factors"
        )
    total = 1
    for f in factors:
        total *= f.value
    x = 0
    for r, f in zip(residues, factors):
        cofactor = total // f.value
        x += r * cofactor * mod_inverse(cofactor, f.value)
    return x % total
