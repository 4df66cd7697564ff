"""Textbook BFV over Z_q[x]/(x^d + 1): key generation, encryption,
decryption and the additive homomorphic operations.

The scheme is kept deliberately small and exact.  Only what the attack
experiments need is implemented: no relinearisation keys, no
ciphertext-ciphertext multiplication, no modulus switching.  Secret
keys and encryption randomness u are binary, noise is discrete
Gaussian, and decryption scales by t/q with round-half-away-from-zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ring import (
    Polynomial,
    RingParams,
    round_half_away,
    sample_binary,
    sample_gaussian,
    sample_uniform,
)

__all__ = [
    "BfvParams",
    "PARAM_SETS",
    "get_params",
    "SecretKey",
    "PublicKey",
    "Plaintext",
    "Ciphertext",
    "EncryptionWitness",
    "keygen",
    "encrypt",
    "decrypt",
    "decrypt_raw",
    "add",
    "add_plain",
    "sub_from_plain",
    "mul_plain",
    "encrypt_zero_flood",
    "noise_norm",
    "SCHEME_TAG",
    "secret_key_to_json",
    "secret_key_from_json",
    "public_key_to_json",
    "public_key_from_json",
    "ciphertext_to_json",
    "ciphertext_from_json",
    "plaintext_to_json",
    "plaintext_from_json",
]


@dataclass(frozen=True)
class BfvParams:
    """Scheme parameters: ring, plaintext modulus, noise width.

    relin_base is the decomposition base T a full BFV deployment would
    use for relinearisation keys.  Nothing here multiplies ciphertexts,
    so it is carried only for parameter-set completeness.
    """

    ring: RingParams
    t: int
    sigma: float = 3.2
    relin_base: int = 100

    def __post_init__(self) -> None:
        if not 1 < self.t < self.ring.q:
            raise ValueError("plaintext modulus must satisfy 1 < t < q")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.relin_base < 2:
            raise ValueError("relin_base must be at least 2")

    @property
    def d(self) -> int:
        return self.ring.d

    @property
    def q(self) -> int:
        return self.ring.q

    @property
    def delta(self) -> int:
        """Plaintext scaling factor floor(q / t)."""
        return self.ring.q // self.t

    @property
    def relin_levels(self) -> int:
        """floor(log_T(q)): how many base-T digits a relinearisation key would carry."""
        level = 0
        power = self.relin_base
        while power <= self.ring.q:
            level += 1
            power *= self.relin_base
        return level


PARAM_SETS: dict[str, BfvParams] = {
    "cca-1024": BfvParams(ring=RingParams(d=1024, q=2**54), t=256),
    "bitleak-2048": BfvParams(ring=RingParams(d=2048, q=2**54), t=256),
    "psi-83": BfvParams(ring=RingParams(d=2048, q=2**54), t=83),
}


def get_params(name: str) -> BfvParams:
    try:
        return PARAM_SETS[name]
    except KeyError:
        known = ", ".join(sorted(PARAM_SETS))
        raise ValueError(f"unknown parameter set {name!r} (known: {known})") from None


@dataclass(frozen=True)
class SecretKey:
    """Binary secret polynomial s, stored mod q."""

    s: Polynomial

    def __post_init__(self) -> None:
        if any(c not in (0, 1) for c in self.s.to_coeff_list()):
            raise ValueError("secret key coefficients must be binary")


@dataclass(frozen=True)
class PublicKey:
    """Pair (pk0, pk1) = (-(a*s + e), a) mod q."""

    pk0: Polynomial
    pk1: Polynomial


@dataclass(frozen=True)
class Plaintext:
    """Message polynomial with centered coefficients mod t."""

    poly: Polynomial

    @classmethod
    def constant(cls, value: int, params: BfvParams) -> "Plaintext":
        return cls(Polynomial.constant(value, params.d, params.t))

    @classmethod
    def from_coeffs(cls, values, params: BfvParams) -> "Plaintext":
        coeffs = list(values)
        if len(coeffs) > params.d:
            raise ValueError("too many plaintext coefficients for the ring degree")
        coeffs += [0] * (params.d - len(coeffs))
        return cls(Polynomial(coeffs, params.t))

    def is_zero(self) -> bool:
        return self.poly.is_zero()


@dataclass(frozen=True)
class Ciphertext:
    """Pair (c0, c1) of mod-q polynomials; decrypts via c0 + c1*s."""

    c0: Polynomial
    c1: Polynomial


@dataclass(frozen=True)
class EncryptionWitness:
    """The randomness (u, e1, e2) used by one encryption.

    Normally discarded; the circuit-privacy attack works precisely
    because the encryptor may keep it.
    """

    u: Polynomial
    e1: Polynomial
    e2: Polynomial


def _lift(m: Plaintext, params: BfvParams) -> Polynomial:
    """Reinterpret the centered mod-t coefficients as mod-q values."""
    return m.poly.with_modulus(params.q)


def keygen(
    params: BfvParams, rng: np.random.Generator
) -> tuple[SecretKey, PublicKey]:
    """Sample a key pair.

    Draw order is s, a, e so that fixed-seed runs are reproducible:
        s binary, a uniform over Z_q, e discrete Gaussian,
        pk = (-(a*s + e), a).
    """
    s = sample_binary(params.ring, rng)
    a = sample_uniform(params.ring, rng)
    e = sample_gaussian(params.ring, params.sigma, rng)
    pk0 = -(a * s + e)
    return SecretKey(s), PublicKey(pk0, a)


def encrypt(
    pk: PublicKey, m: Plaintext, params: BfvParams, rng: np.random.Generator
) -> tuple[Ciphertext, EncryptionWitness]:
    """Encrypt m under pk, returning the ciphertext and its randomness.

    Draw order is u, e1, e2.  The ciphertext is
        c0 = pk0*u + e1 + delta*m,  c1 = pk1*u + e2  (mod q)
    with delta = floor(q/t).
    """
    u = sample_binary(params.ring, rng)
    e1 = sample_gaussian(params.ring, params.sigma, rng)
    e2 = sample_gaussian(params.ring, params.sigma, rng)
    c0 = pk.pk0 * u + e1 + _lift(m, params) * params.delta
    c1 = pk.pk1 * u + e2
    return Ciphertext(c0, c1), EncryptionWitness(u, e1, e2)


def decrypt_raw(sk: SecretKey, ct: Ciphertext, params: BfvParams) -> Polynomial:
    """The pre-rounding value [c0 + c1*s]_q, i.e. delta*m + noise."""
    return ct.c0 + ct.c1 * sk.s


def decrypt(sk: SecretKey, ct: Ciphertext, params: BfvParams) -> Plaintext:
    """Decrypt: scale [c0 + c1*s]_q by t/q, round half away from zero, reduce mod t."""
    raw = decrypt_raw(sk, ct, params)
    t, q = params.t, params.q
    scaled = [round_half_away(c * t, q) for c in raw.to_coeff_list()]
    return Plaintext(Polynomial(scaled, t))


def add(ct1: Ciphertext, ct2: Ciphertext) -> Ciphertext:
    """Homomorphic addition: componentwise sum mod q."""
    return Ciphertext(ct1.c0 + ct2.c0, ct1.c1 + ct2.c1)


def add_plain(ct: Ciphertext, m: Plaintext, params: BfvParams) -> Ciphertext:
    """Add the plaintext m to the encrypted message without fresh noise."""
    return Ciphertext(ct.c0 + _lift(m, params) * params.delta, ct.c1)


def sub_from_plain(m: Plaintext, ct: Ciphertext, params: BfvParams) -> Ciphertext:
    """Encrypt m minus the message of ct: (delta*m - c0, -c1)."""
    return Ciphertext(_lift(m, params) * params.delta - ct.c0, -ct.c1)


def mul_plain(ct: Ciphertext, r: Plaintext, params: BfvParams) -> Ciphertext:
    """Multiply the encrypted message by the plaintext r: (r*c0, r*c1)."""
    r_q = _lift(r, params)
    return Ciphertext(r_q * ct.c0, r_q * ct.c1)


def encrypt_zero_flood(
    pk: PublicKey, params: BfvParams, flood_bound: int, rng: np.random.Generator
) -> Ciphertext:
    """Encryption of zero whose c0-noise is uniform on [-flood_bound, flood_bound].

    Adding this to a ciphertext drowns the structured evaluation noise
    that the circuit-privacy attack relies on.  flood_bound must stay
    below delta/2 or correct decryption would no longer be guaranteed.
    """
    if flood_bound < 0:
        raise ValueError("flood_bound must be non-negative")
    if 2 * flood_bound >= params.delta:
        raise ValueError(
            f"flood_bound {flood_bound} reaches delta/2 = {params.delta / 2}; "
            "decryption correctness would be lost"
        )
    u = sample_binary(params.ring, rng)
    flood = rng.integers(-flood_bound, flood_bound + 1, size=params.d, dtype=np.int64)
    e2 = sample_gaussian(params.ring, params.sigma, rng)
    c0 = pk.pk0 * u + Polynomial(flood, params.q)
    c1 = pk.pk1 * u + e2
    return Ciphertext(c0, c1)


def noise_norm(
    sk: SecretKey, ct: Ciphertext, expected_m: Plaintext, params: BfvParams
) -> int:
    """Infinity norm of [c0 + c1*s - delta*expected_m]_q."""
    raw = decrypt_raw(sk, ct, params)
    return (raw - _lift(expected_m, params) * params.delta).max_abs()


# ---------------------------------------------------------------------------
# JSON forms.  Every object embeds the parameters it was made with, so a
# file is self-describing:
#   {"scheme": "bfv-toy", "d": ..., "q": ..., "t": ..., "sigma": ...,
#    "payload": [[coeffs], ...]}

SCHEME_TAG = "bfv-toy"


def _header(params: BfvParams) -> dict:
    return {
        "scheme": SCHEME_TAG,
        "d": params.d,
        "q": params.q,
        "t": params.t,
        "sigma": params.sigma,
    }


def _params_from_header(obj: dict) -> BfvParams:
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if obj.get("scheme") != SCHEME_TAG:
        raise ValueError(f"unsupported scheme tag {obj.get('scheme')!r}")
    try:
        return BfvParams(
            ring=RingParams(d=int(obj["d"]), q=int(obj["q"])),
            t=int(obj["t"]),
            sigma=float(obj["sigma"]),
        )
    except KeyError as missing:
        raise ValueError(f"missing field {missing} in serialized object") from None


def _payload(obj: dict, count: int, d: int) -> list[list[int]]:
    payload = obj.get("payload")
    if not isinstance(payload, list) or len(payload) != count:
        raise ValueError(f"payload must hold exactly {count} coefficient vectors")
    for vec in payload:
        if not isinstance(vec, list) or len(vec) != d:
            raise ValueError("payload vectors must match the ring degree")
    return payload


def secret_key_to_json(sk: SecretKey, params: BfvParams) -> dict:
    return {**_header(params), "payload": [sk.s.to_coeff_list()]}


def secret_key_from_json(obj: dict) -> tuple[SecretKey, BfvParams]:
    params = _params_from_header(obj)
    (vec,) = _payload(obj, 1, params.d)
    return SecretKey(Polynomial(vec, params.q)), params


def public_key_to_json(pk: PublicKey, params: BfvParams) -> dict:
    return {**_header(params), "payload": [pk.pk0.to_coeff_list(), pk.pk1.to_coeff_list()]}


def public_key_from_json(obj: dict) -> tuple[PublicKey, BfvParams]:
    params = _params_from_header(obj)
    vec0, vec1 = _payload(obj, 2, params.d)
    return PublicKey(Polynomial(vec0, params.q), Polynomial(vec1, params.q)), params


def ciphertext_to_json(ct: Ciphertext, params: BfvParams) -> dict:
    return {**_header(params), "payload": [ct.c0.to_coeff_list(), ct.c1.to_coeff_list()]}


def ciphertext_from_json(obj: dict) -> tuple[Ciphertext, BfvParams]:
    params = _params_from_header(obj)
    vec0, vec1 = _payload(obj, 2, params.d)
    return Ciphertext(Polynomial(vec0, params.q), Polynomial(vec1, params.q)), params


def plaintext_to_json(m: Plaintext, params: BfvParams) -> dict:
    return {**_header(params), "payload": [m.poly.to_coeff_list()]}


def plaintext_from_json(obj: dict) -> tuple[Plaintext, BfvParams]:
    params = _params_from_header(obj)
    (vec,) = _payload(obj, 1, params.d)
    return Plaintext(Polynomial(vec, params.t)), params
