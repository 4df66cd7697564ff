"""Exact arithmetic in Z_m[x] / (x^d + 1) with centered coefficients.

Every coefficient is kept as the centered residue in the half-open
interval [-m/2, m/2).  Multiplication is schoolbook negacyclic
convolution; to keep it exact for moduli up to 62 bits the operands are
split into narrow limbs, each limb pair is convolved in int64, and the
limb products are recombined with arbitrary-precision integers before
the final reduction.  There is deliberately no NTT or floating-point
path: exactness and simplicity over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RingParams",
    "Polynomial",
    "reduce_centered",
    "round_half_away",
    "monomial",
    "sample_uniform",
    "sample_binary",
    "sample_gaussian",
]

# Limb products are accumulated by np.convolve and one negacyclic fold,
# so |limb_a| * |limb_b| * d * 2 must stay below 2**63.
_INT64_BUDGET = 62


def reduce_centered(value: int, modulus: int) -> int:
    """Return the residue of value mod modulus lying in [-modulus/2, modulus/2)."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    r = value % modulus
    if r >= (modulus + 1) // 2:
        r -= modulus
    return r


def round_half_away(numerator: int, denominator: int) -> int:
    """Round numerator/denominator to the nearest integer, halves away from zero.

    Exact integer arithmetic; denominator must be positive.
    """
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    if numerator >= 0:
        return (2 * numerator + denominator) // (2 * denominator)
    return -((2 * -numerator + denominator) // (2 * denominator))


def _center_int64(arr: np.ndarray, modulus: int) -> np.ndarray:
    """Vectorised centered reduction of an int64 array."""
    r = arr % modulus
    r[r >= (modulus + 1) // 2] -= modulus
    return r


@dataclass(frozen=True)
class RingParams:
    """Degree and coefficient modulus of Z_q[x] / (x^d + 1)."""

    d: int
    q: int

    def __post_init__(self) -> None:
        if self.d < 2 or self.d & (self.d - 1):
            raise ValueError("ring degree must be a power of two, at least 2")
        if not 2 <= self.q < (1 << _INT64_BUDGET):
            raise ValueError("coefficient modulus must satisfy 2 <= q < 2**62")


class Polynomial:
    """Length-d coefficient vector with centered residues mod `modulus`.

    Instances are immutable by convention: all operations return new
    polynomials.  Coefficients are stored as int64, which the modulus
    bound in RingParams guarantees is lossless.
    """

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64:
            arr = _center_int64(coeffs.copy(), modulus)
        else:
            values = [reduce_centered(int(c), modulus) for c in coeffs]
            arr = np.array(values, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficient vector must be one-dimensional and non-empty")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, d: int, modulus: int) -> "Polynomial":
        return cls(np.zeros(d, dtype=np.int64), modulus)

    @classmethod
    def constant(cls, value: int, d: int, modulus: int) -> "Polynomial":
        coeffs = np.zeros(d, dtype=np.int64)
        coeffs[0] = reduce_centered(value, modulus)
        return cls(coeffs, modulus)

    @property
    def d(self) -> int:
        return int(self.coeffs.size)

    def with_modulus(self, modulus: int) -> "Polynomial":
        """Re-center the same coefficient values under a different modulus."""
        if self.max_abs() * 2 < min(self.modulus, modulus):
            return Polynomial(self.coeffs, modulus)
        return Polynomial(self.to_coeff_list(), modulus)

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.modulus != other.modulus:
            raise ValueError("polynomials have different moduli")
        if self.coeffs.size != other.coeffs.size:
            raise ValueError("polynomials have different degrees")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        return Polynomial(self.coeffs + other.coeffs, self.modulus)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        return Polynomial(self.coeffs - other.coeffs, self.modulus)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs, self.modulus)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return self._ring_mul(other)
        if isinstance(other, (int, np.integer)):
            return self._scalar_mul(int(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self._scalar_mul(int(other))
        return NotImplemented

    def _scalar_mul(self, scalar: int) -> "Polynomial":
        scalar = reduce_centered(scalar, self.modulus)
        if scalar == 0:
            return Polynomial.zero(self.d, self.modulus)
        # int64 product is safe only while |scalar| * max|coeff| < 2**62
        if abs(scalar).bit_length() + self.max_abs().bit_length() <= _INT64_BUDGET:
            return Polynomial(self.coeffs * scalar, self.modulus)
        values = [c * scalar for c in self.to_coeff_list()]
        return Polynomial(values, self.modulus)

    def _ring_mul(self, other: "Polynomial") -> "Polynomial":
        for a, b in ((self, other), (other, self)):
            nz = np.flatnonzero(b.coeffs)
            if nz.size == 0:
                return Polynomial.zero(self.d, self.modulus)
            if nz.size == 1:
                return a._mul_monomial(int(nz[0]), int(b.coeffs[nz[0]]))
        product = _negacyclic_mul(self.coeffs, other.coeffs, self.modulus)
        return Polynomial(product, self.modulus)

    def _mul_monomial(self, index: int, coeff: int) -> "Polynomial":
        """Multiply by coeff * x^index using x^d = -1."""
        scaled = self._scalar_mul(coeff)
        if index == 0:
            return scaled
        d = self.d
        rotated = np.empty(d, dtype=np.int64)
        rotated[:index] = -scaled.coeffs[d - index:]
        rotated[index:] = scaled.coeffs[: d - index]
        return Polynomial(rotated, self.modulus)

    def max_abs(self) -> int:
        """Infinity norm of the centered coefficient vector."""
        return int(np.abs(self.coeffs).max())

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def to_coeff_list(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def to_hex(self) -> str:
        """Fixed-width two's-complement hex, one field per coefficient."""
        nbytes = _hex_field_bytes(self.modulus)
        mask = (1 << (8 * nbytes)) - 1
        width = 2 * nbytes
        return "".join(format(int(c) & mask, f"0{width}x") for c in self.coeffs)

    @classmethod
    def from_hex(cls, text: str, modulus: int) -> "Polynomial":
        nbytes = _hex_field_bytes(modulus)
        width = 2 * nbytes
        if not text or len(text) % width:
            raise ValueError("hex string length does not match the coefficient width")
        sign_bit = 1 << (8 * nbytes - 1)
        full = 1 << (8 * nbytes)
        values = []
        for k in range(0, len(text), width):
            v = int(text[k : k + width], 16)
            if v >= sign_bit:
                v -= full
            values.append(v)
        return cls(values, modulus)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.coeffs.size == other.coeffs.size
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.modulus, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        head = ", ".join(str(int(c)) for c in self.coeffs[:8])
        tail = ", ..." if self.d > 8 else ""
        return f"Polynomial(d={self.d}, modulus={self.modulus}, [{head}{tail}])"


def _hex_field_bytes(modulus: int) -> int:
    bits = (modulus - 1).bit_length()
    return (bits + 7) // 8


def _limb_plan(bits_a: int, bits_b: int, d: int) -> tuple[int, int, int, int]:
    """Choose limb widths so every limb convolution stays inside int64.

    Returns (width_a, count_a, width_b, count_b) minimising the number
    of convolutions count_a * count_b subject to
    width_a + width_b + log2(d) + 1 <= 62.
    """
    slack = _INT64_BUDGET - (d.bit_length() - 1) - 1
    if slack < 2:
        raise ValueError("ring degree too large for exact int64 convolution")
    best = None
    for width_a in range(1, min(bits_a, slack - 1) + 1):
        width_b = min(slack - width_a, bits_b)
        count_a = -(-bits_a // width_a)
        count_b = -(-bits_b // width_b)
        cost = count_a * count_b
        if best is None or cost < best[0]:
            best = (cost, width_a, count_a, width_b, count_b)
    _, width_a, count_a, width_b, count_b = best
    return width_a, count_a, width_b, count_b


def _split_limbs(arr: np.ndarray, width: int, count: int) -> list[np.ndarray]:
    """Sign-magnitude base-2**width limbs; each limb keeps the coefficient sign."""
    if count == 1:
        return [arr]
    mag = np.abs(arr)
    sign = np.sign(arr)
    mask = (1 << width) - 1
    return [((mag >> (k * width)) & mask) * sign for k in range(count)]


def _negacyclic_mul(a: np.ndarray, b: np.ndarray, modulus: int) -> list[int]:
    """Exact negacyclic product of two centered int64 vectors, reduced mod modulus."""
    d = int(a.size)
    max_a = int(np.abs(a).max())
    max_b = int(np.abs(b).max())
    if max_a == 0 or max_b == 0:
        return [0] * d
    width_a, count_a, width_b, count_b = _limb_plan(
        max_a.bit_length(), max_b.bit_length(), d
    )
    limbs_a = _split_limbs(a, width_a, count_a)
    limbs_b = _split_limbs(b, width_b, count_b)
    acc: list[int] | None = None
    for i, la in enumerate(limbs_a):
        for j, lb in enumerate(limbs_b):
            conv = np.convolve(la, lb)
            head = conv[:d].copy()
            head[: d - 1] -= conv[d:]
            shift = i * width_a + j * width_b
            vals = head.tolist()
            if shift:
                vals = [v << shift for v in vals]
            acc = vals if acc is None else [x + y for x, y in zip(acc, vals)]
    half = (modulus + 1) // 2
    out = []
    for v in acc:
        r = v % modulus
        out.append(r - modulus if r >= half else r)
    return out


def monomial(index: int, coeff: int, params: RingParams) -> Polynomial:
    """The polynomial coeff * x^index in Z_q[x] / (x^d + 1)."""
    if not 0 <= index < params.d:
        raise ValueError(f"monomial index {index} outside [0, {params.d})")
    coeffs = np.zeros(params.d, dtype=np.int64)
    coeffs[index] = reduce_centered(coeff, params.q)
    return Polynomial(coeffs, params.q)


def sample_uniform(params: RingParams, rng: np.random.Generator) -> Polynomial:
    """Uniform polynomial over Z_q, one independent draw per coefficient."""
    raw = rng.integers(0, params.q, size=params.d, dtype=np.int64)
    return Polynomial(raw, params.q)


def sample_binary(params: RingParams, rng: np.random.Generator) -> Polynomial:
    """Polynomial with independent uniform {0, 1} coefficients."""
    raw = rng.integers(0, 2, size=params.d, dtype=np.int64)
    return Polynomial(raw, params.q)


def sample_gaussian(
    params: RingParams, sigma: float, rng: np.random.Generator
) -> Polynomial:
    """Discrete Gaussian coefficients via an inverse-CDF table.

    The support is cut at floor(6 * sigma), so every coefficient
    satisfies |c| <= 6 * sigma; weights are proportional to
    exp(-x^2 / (2 sigma^2)) on the retained support.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    tail = int(6 * sigma)
    support = np.arange(-tail, tail + 1, dtype=np.int64)
    weights = np.exp(-(support.astype(np.float64) ** 2) / (2.0 * sigma * sigma))
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    draws = rng.random(params.d)
    values = support[np.searchsorted(cdf, draws, side="right")]
    return Polynomial(values, params.q)
