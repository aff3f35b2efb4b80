"""Finite fields F(p^n) and the polynomial game variant."""

import itertools
import random

import pytest

from mumnim.game import (
    ConsolidateThenReduce,
    ConsolidationPolicy,
    EmptyHeaps,
    IllegalMove,
    Outcome,
    Reduce,
)
from mumnim.poly import (
    FieldElement,
    FieldMismatch,
    HeapOutOfRange,
    NotIrreducible,
    NotMonic,
    NotPrime,
    PolyPosition,
    ZeroInverse,
    aes_field,
    apply_move_poly,
    classify_poly,
    emit_inverse_table,
    field_from_int,
    field_inv,
    field_mul,
    field_product,
    is_irreducible,
    is_stranded_poly,
    is_terminal_poly,
    legal_moves_poly,
    make_field,
    modulus_int,
    modulus_str,
    new_poly_position,
    optimal_move_poly,
    outcome_bruteforce_poly,
    poly_str,
    reduce_int,
)

STRANDED = ConsolidationPolicy.STRANDED_ONLY
ALWAYS = ConsolidationPolicy.ALWAYS

F8 = make_field(2, 3, [1, 1, 0, 1])  # x^3+x+1
F4 = make_field(2, 2, [1, 1, 1])  # x^2+x+1
F9 = make_field(3, 2, [1, 0, 1])  # x^2+1, irreducible over F_3
AES = aes_field()


def elements(fld, lo=0):
    return [FieldElement(r, fld) for r in range(lo, fld.order)]


def test_make_field_accepts_known_moduli():
    assert F8.order == 8
    assert AES.order == 256
    assert modulus_int(AES) == 0x11B
    assert modulus_str(AES) == "x^8+x^4+x^3+x+1"
    assert modulus_str(F8) == "x^3+x+1"
    assert field_from_int(2, 3, 0b1011) == F8


def test_make_field_rejects_reducible_modulus():
    with pytest.raises(NotIrreducible):
        make_field(2, 3, [1, 0, 0, 1])  # x^3+1 = (x+1)(x^2+x+1)
    with pytest.raises(NotIrreducible):
        make_field(2, 2, [1, 0, 1])  # x^2+1 = (x+1)^2 over F_2
    with pytest.raises(NotIrreducible):
        make_field(2, 3, [0, 1, 0, 1])  # constant term zero


def test_make_field_rejects_bad_shape():
    with pytest.raises(NotPrime):
        make_field(4, 2, [1, 1, 1])
    with pytest.raises(NotMonic):
        make_field(2, 3, [1, 1, 1])  # degree 2, not 3
    with pytest.raises(NotMonic):
        make_field(3, 2, [1, 0, 2])  # lead coefficient 2
    with pytest.raises(NotMonic):
        make_field(2, 0, [1])


def test_is_irreducible_known_cases():
    assert is_irreducible([1, 1, 0, 1], 2)  # x^3+x+1
    assert not is_irreducible([1, 0, 1], 2)  # x^2+1 = (x+1)^2
    assert is_irreducible([1, 0, 1], 3)  # x^2+1 has no root mod 3
    assert is_irreducible([1, 1, 0, 1, 1, 0, 0, 0, 1], 2)  # x^8+x^4+x^3+x+1


def test_reduce_int_known_values():
    assert reduce_int(9, F8).rep == 2  # x^3+1 = x mod x^3+x+1
    assert reduce_int(2, F8).rep == 2
    assert reduce_int(5, F8).rep == 5
    assert reduce_int(0, F8).rep == 0
    with pytest.raises(ValueError):
        reduce_int(-1, F8)


def test_reduce_int_is_idempotent():
    for fld in (F8, F9):
        for h in range(0, 4 * fld.order):
            once = reduce_int(h, fld)
            assert reduce_int(once.rep, fld) == once
            assert 0 <= once.rep < fld.order


def test_field_mul_known_values():
    assert field_mul(FieldElement(2, F8), FieldElement(5, F8)).rep == 1
    assert field_mul(FieldElement(3, F8), FieldElement(6, F8)).rep == 1
    assert field_mul(FieldElement(3, F8), FieldElement(3, F8)).rep == 5
    # byte-field product from the standard reference example
    assert field_mul(FieldElement(0x57, AES), FieldElement(0x83, AES)).rep == 0xC1


def test_field_mul_group_laws_exhaustive():
    for fld in (F8, F9):
        one = FieldElement(1, fld)
        for a in elements(fld):
            assert field_mul(a, one) == a
            for b in elements(fld):
                assert field_mul(a, b) == field_mul(b, a)
        for a in elements(fld):
            for b in elements(fld):
                for c in elements(fld):
                    assert field_mul(field_mul(a, b), c) == field_mul(
                        a, field_mul(b, c)
                    )


def test_field_mul_group_laws_randomized_bytes():
    rng = random.Random(8)
    one = FieldElement(1, AES)
    for _ in range(300):
        a = FieldElement(rng.randrange(256), AES)
        b = FieldElement(rng.randrange(256), AES)
        c = FieldElement(rng.randrange(256), AES)
        assert field_mul(a, b) == field_mul(b, a)
        assert field_mul(field_mul(a, b), c) == field_mul(a, field_mul(b, c))
        assert field_mul(a, one) == a


def test_field_mul_rejects_mixed_fields():
    with pytest.raises(FieldMismatch):
        field_mul(FieldElement(2, F8), FieldElement(2, F4))


def field_pow(a: FieldElement, k: int) -> FieldElement:
    acc = FieldElement(1, a.field)
    base = a
    while k:
        if k & 1:
            acc = field_mul(acc, base)
        base = field_mul(base, base)
        k >>= 1
    return acc


def test_field_inv_known_values():
    assert field_inv(FieldElement(4, F8)).rep == 7
    assert field_inv(FieldElement(1, F8)).rep == 1
    assert field_inv(FieldElement(0x53, AES)).rep == 0xCA
    with pytest.raises(ZeroInverse):
        field_inv(FieldElement(0, F8))


def test_field_inv_matches_exponentiation_oracle():
    # a^(p^n - 2) is a slow independent inverse for every nonzero element
    for fld in (F8, AES):
        for a in elements(fld, lo=1):
            inv = field_inv(a)
            assert field_mul(a, inv).rep == 1
            assert inv == field_pow(a, fld.order - 2)


INVERSE_TABLE_COLUMNS = [
    "Polynomial",
    "Integer Rep",
    "Power of x",
    "Inverse (Polynomial)",
    "Inverse (Integer)",
    "Inverse (Power)",
]

INVERSE_TABLE_ROWS = [
    ["1", "1", "x^0 or x^7", "1", "1", "x^0 or x^7"],
    ["x", "2", "x^1", "x^2+1", "5", "x^6"],
    ["x^2", "4", "x^2", "x^2+x+1", "7", "x^5"],
    ["x+1", "3", "x^3", "x^2+x", "6", "x^4"],
    ["x^2+x", "6", "x^4", "x+1", "3", "x^3"],
    ["x^2+x+1", "7", "x^5", "x^2", "4", "x^2"],
    ["x^2+1", "5", "x^6", "x", "2", "x^1"],
]


def test_inverse_table_matches_frozen_rows():
    t = emit_inverse_table(F8)
    assert t.title == "Multiplicative inverses in F(2^3) with I(x) = x^3+x+1"
    assert t.columns == INVERSE_TABLE_COLUMNS
    assert [list(r) for r in t.rows] == INVERSE_TABLE_ROWS


def test_inverse_table_without_generator_omits_power_columns():
    # x has order 4 in F(3^2)/(x^2+1), not 8, so no discrete logs
    assert F9.exp is None and F9.log is None
    t = emit_inverse_table(F9)
    assert t.columns == [
        "Polynomial",
        "Integer Rep",
        "Inverse (Polynomial)",
        "Inverse (Integer)",
    ]
    assert len(t.rows) == 8
    for row in t.rows:
        a = FieldElement(int(row[1]), F9)
        assert field_mul(a, FieldElement(int(row[3]), F9)).rep == 1


def test_poly_str_formatting():
    assert poly_str(FieldElement(0, F8)) == "0"
    assert poly_str(FieldElement(7, F8)) == "x^2+x+1"
    assert poly_str(FieldElement(5, F9)) == "x+2"
    assert poly_str(FieldElement(6, F9)) == "2x"


def test_position_validation():
    with pytest.raises(EmptyHeaps):
        new_poly_position(F8, [])
    with pytest.raises(HeapOutOfRange):
        new_poly_position(F8, [8])
    for bad in (0, -1):
        with pytest.raises(Exception):
            new_poly_position(F8, [bad])
    assert new_poly_position(F8, [5, 2, 7]).heaps == (2, 5, 7)


def test_field_product_and_classify():
    assert field_product(new_poly_position(F8, [2, 5])).rep == 1
    assert field_product(new_poly_position(F8, [7])).rep == 7
    assert field_product(new_poly_position(F8, [3, 3])).rep == 5
    assert classify_poly(new_poly_position(F8, [2, 5])) is Outcome.P_POSITION
    assert classify_poly(new_poly_position(F8, [2, 2])) is Outcome.N_POSITION
    assert classify_poly(new_poly_position(F8, [1, 1, 1])) is Outcome.P_POSITION
    assert is_terminal_poly(new_poly_position(F8, [1, 1]))
    assert not is_terminal_poly(new_poly_position(F8, [1, 2]))


def test_legal_moves_poly_examples():
    assert legal_moves_poly(new_poly_position(F8, [3])) == [
        Reduce(0, 1),
        Reduce(0, 2),
    ]
    assert legal_moves_poly(new_poly_position(F8, [1])) == []
    # [2,2] has product 4 and both direct children have product 2, so it
    # is stranded and the compound moves from H_new = 4 are offered
    assert legal_moves_poly(new_poly_position(F8, [2, 2]), STRANDED) == [
        Reduce(0, 1),
        Reduce(1, 1),
        ConsolidateThenReduce(1),
        ConsolidateThenReduce(2),
        ConsolidateThenReduce(3),
    ]


def test_always_policy_offers_consolidation_on_multi_heaps():
    pos = new_poly_position(F8, [2, 5])  # losing, not stranded
    assert all(isinstance(m, Reduce) for m in legal_moves_poly(pos, STRANDED))
    compounds = [
        m for m in legal_moves_poly(pos, ALWAYS) if isinstance(m, ConsolidateThenReduce)
    ]
    assert compounds == []  # H_new = 1 leaves no room to reduce
    pos = new_poly_position(F8, [3, 4])
    h_new = field_product(pos).rep
    compounds = [
        m for m in legal_moves_poly(pos, ALWAYS) if isinstance(m, ConsolidateThenReduce)
    ]
    assert compounds == [ConsolidateThenReduce(r) for r in range(1, h_new)]


def test_apply_move_poly():
    pos = new_poly_position(F8, [2, 2])
    assert apply_move_poly(pos, Reduce(0, 1)).heaps == (1, 2)
    assert apply_move_poly(pos, ConsolidateThenReduce(3), STRANDED).heaps == (1,)
    with pytest.raises(IllegalMove):
        apply_move_poly(pos, Reduce(2, 1))
    with pytest.raises(IllegalMove):
        apply_move_poly(pos, Reduce(0, 2))  # heaps stay >= 1
    with pytest.raises(IllegalMove):
        apply_move_poly(new_poly_position(F8, [2, 5]), ConsolidateThenReduce(1), STRANDED)


def test_is_stranded_poly_examples():
    assert is_stranded_poly(new_poly_position(F8, [2, 2]))
    assert not is_stranded_poly(new_poly_position(F8, [7, 7]))
    assert not is_stranded_poly(new_poly_position(F8, [2, 5]))
    assert not is_stranded_poly(new_poly_position(F8, [1, 1]))


def test_optimal_move_poly_examples():
    assert optimal_move_poly(new_poly_position(F8, [2, 5])) is None
    pos = new_poly_position(F8, [7, 7])
    mv = optimal_move_poly(pos)
    assert isinstance(mv, Reduce)
    assert field_product(apply_move_poly(pos, mv)).rep == 1
    pos = new_poly_position(F8, [2, 2])
    mv = optimal_move_poly(pos)
    assert mv == ConsolidateThenReduce(3)
    assert apply_move_poly(pos, mv, STRANDED).heaps == (1,)


def test_optimal_move_poly_always_reaches_product_one():
    for fld in (F4, F8):
        top = fld.order - 1
        for heaps in itertools.combinations_with_replacement(range(1, top + 1), 3):
            pos = new_poly_position(fld, heaps)
            mv = optimal_move_poly(pos)
            if classify_poly(pos) is Outcome.P_POSITION:
                assert mv is None
            else:
                child = apply_move_poly(pos, mv, STRANDED)
                assert field_product(child).rep == 1


def test_bouton_property_against_bruteforce():
    # outcome by pure game-tree search must match the product rule,
    # independent of the consolidation policy
    for fld in (F4, F8):
        top = fld.order - 1
        for k in (1, 2, 3):
            for heaps in itertools.combinations_with_replacement(range(1, top + 1), k):
                pos = new_poly_position(fld, heaps)
                want = classify_poly(pos)
                for policy in (STRANDED, ALWAYS):
                    assert outcome_bruteforce_poly(pos, policy) is want


def test_full_heap_guarantees_direct_move():
    # an N-position holding a heap of p^n - 1 always has a direct
    # reduction to product 1, so the chosen move is never compound
    for fld in (F4, F8):
        top = fld.order - 1
        for heaps in itertools.combinations_with_replacement(range(1, top + 1), 3):
            if top not in heaps:
                continue
            pos = new_poly_position(fld, heaps)
            if classify_poly(pos) is Outcome.P_POSITION:
                continue
            mv = optimal_move_poly(pos)
            assert isinstance(mv, Reduce)


def test_field_element_range_guard():
    with pytest.raises(HeapOutOfRange):
        FieldElement(8, F8)
    with pytest.raises(HeapOutOfRange):
        FieldElement(-1, F8)
