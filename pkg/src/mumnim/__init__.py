"""Multiplicative modular nim: engine, solver, and play service.

Heaps are positive integers coprime to a modulus m; a turn subtracts
1 <= r < m from one heap, leaving it positive and coprime.  The player
facing heap product 1 mod m (all heaps 1 in the endgame) loses under
optimal play.  The package covers prime and composite moduli, the
finite-field variant on F(p^n), the mumber/mex value theory, table
emitters for the reference data sets, and a CLI plus HTTP service for
interactive play.
"""

from .crt import FactorMismatch, StateVector, emit_mum15_table, is_identity_vector, project, state_vector
from .game import (
    ConsolidateThenReduce,
    ConsolidationPolicy,
    EmptyHeaps,
    HeapNotCoprime,
    IllegalMove,
    NonPositiveHeap,
    NumPosition,
    Outcome,
    Reduce,
    apply_move,
    classify,
    full_product,
    is_stranded,
    is_terminal,
    legal_moves,
    new_position,
    optimal_move,
    positions_with_heaps,
    product_mod,
)
from .grundy import (
    HeapTooSmall,
    ModulusMismatch,
    MumberReport,
    SearchBudgetExceeded,
    children_mumbers,
    emit_mex_table,
    grundy_single_heap,
    mumber_mex,
    mumber_report,
    outcome_bruteforce,
    single_heap_mumber,
    sum_multiplicativity_check,
)
from .modular import (
    LengthMismatch,
    NotInvertible,
    PrimePowerFactor,
    SetSaturated,
    crt_combine,
    factor_prime_powers,
    mod_inverse,
    unit_mex,
    units,
)
from .poly import (
    FieldElement,
    FieldMismatch,
    FieldSpec,
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
    new_poly_position,
    optimal_move_poly,
    outcome_bruteforce_poly,
    poly_str,
    reduce_int,
)
from .session import GameSession, SessionService, SessionStore
from .tables import Table

__all__ = [name for name in dir() if not name.startswith("_")]
