"""Prime ideals, fractional ideals and integral bases of number fields via
Okutsu-Montes representations."""

from .arith import AlgElem, ArithError, FactorizationError, NumberField, resultant, val_p
from .crt import NotIntegralError, ResidueTarget, crt_idempotents, crt_solve, reduce
from .ideal import (FracIdeal, TwoElementRep, factor_ideal, generator, ideal_add,
                    ideal_intersect, ideal_mul, prime_power, pseudo_generator, two_element)
from .montes import Decomposition, PrimeIdeal, improve_approximation, montes_factorize, okutsu_frame
from .omtype import OMType, VerificationError
from .pbasis import index_from_basis, local_exponent, local_index, okutsu_local_basis, p_integral_basis
from .valuation import valuation, vp

__version__ = "0.1.0"

__all__ = [
    "AlgElem", "ArithError", "Decomposition", "FactorizationError", "FracIdeal", "NotIntegralError",
    "NumberField", "OMType", "PrimeIdeal", "ResidueTarget", "TwoElementRep", "VerificationError",
    "crt_idempotents", "crt_solve", "factor_ideal", "generator", "ideal_add", "ideal_intersect",
    "ideal_mul", "improve_approximation", "index_from_basis", "local_exponent", "local_index",
    "montes_factorize", "okutsu_frame", "okutsu_local_basis", "p_integral_basis", "prime_power",
    "pseudo_generator", "reduce", "resultant", "two_element", "val_p", "valuation", "vp",
]
