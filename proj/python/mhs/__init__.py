"""Multiple harmonic sum congruences.

Exact rational evaluation of the sums H(s_1..s_d; n), their p-adic
valuations, the p-divisible index sets J(s|p^k) with finiteness
certificates, reserved sets, and prime-density surveys.
"""

from ._core import (
    MhsError,
    density,
    exact_mhs,
    exact_valuation,
    extract_T,
    find_tau,
    jset,
    reserved_set,
)

__all__ = [
    "MhsError",
    "density",
    "exact_mhs",
    "exact_valuation",
    "extract_T",
    "find_tau",
    "jset",
    "reserved_set",
]
