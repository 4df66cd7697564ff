"""Base-2 integer encoder in the style of SEAL's IntegerEncoder.

encode writes the bits of |n| into the low coefficients of a plaintext
polynomial (negated for n < 0); decode evaluates the polynomial at
x = 2 over the integers, using centered coefficient lifts.  The map is
deliberately many-to-one on the decode side: distinct polynomials such
as x + 2 and 2x both evaluate to 4, which is exactly the ambiguity the
encoder-leakage experiment exploits.
"""

from __future__ import annotations

from .bfv import BfvParams, Plaintext
from .ring import Polynomial

__all__ = ["integer_encode", "integer_decode"]


def integer_encode(n: int, params: BfvParams) -> Plaintext:
    """Encode the integer n as a 0/1 (or 0/-1) coefficient polynomial.

    Requires |n| < 2**d so the bits fit, and t > 2 whenever a sign or a
    carry-free sum must survive reduction mod t; coefficients are
    stored centered mod t.
    """
    magnitude = abs(n)
    if magnitude.bit_length() > params.d:
        raise OverflowError(
            f"{n} needs {magnitude.bit_length()} bits but the ring degree is {params.d}"
        )
    # centered residues mod 2 are {-1, 0}: no bit value survives t <= 2
    if n != 0 and params.t <= 2:
        raise ValueError("nonzero values are not representable with t <= 2")
    sign = 1 if n >= 0 else -1
    coeffs = [0] * params.d
    for i in range(magnitude.bit_length()):
        if (magnitude >> i) & 1:
            coeffs[i] = sign
    return Plaintext(Polynomial(coeffs, params.t))


def integer_decode(m: Plaintext, params: BfvParams) -> int:
    """Evaluate the plaintext at x = 2 using centered coefficients."""
    total = 0
    for i, c in enumerate(m.poly.to_coeff_list()):
        total += c << i
    return total
