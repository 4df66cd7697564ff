"""Attacks against the toy BFV scheme.

Four experiments, each with the oracle or side information it needs:

* cca_one_query        - a single chosen ciphertext through a full
                         decryption oracle returns the secret key.
* bit_leak_attack      - d chosen ciphertexts through a decrypts-to-zero
                         oracle recover the key one bit per query.
* circuit_privacy_recover - the encryptor of c_a, keeping her encryption
                         randomness, reads Bob's scalar r and input m_b
                         out of r*(m_b - c_a) because plain evaluation
                         adds no fresh noise.
* encoder_leak_demo    - homomorphic sums of integer-encoded inputs
                         decrypt to coefficient vectors that reveal more
                         than the encoded sum.

Each run_* harness generates its own ground truth, executes the attack
through a counting oracle and returns an AttackReport.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

import numpy as np

from . import bfv
from .bfv import (
    BfvParams,
    Ciphertext,
    EncryptionWitness,
    Plaintext,
    PublicKey,
    SecretKey,
)
from .encoders import integer_decode, integer_encode
from .ring import Polynomial, monomial, reduce_centered, round_half_away

__all__ = [
    "AttackError",
    "InsufficientNoiseStructureError",
    "FloodedOrMalformedError",
    "DecryptionOracle",
    "ZeroCheckOracle",
    "AttackReport",
    "cca_one_query",
    "bit_leak_probe",
    "bit_leak_attack",
    "evaluation_noise",
    "circuit_privacy_recover",
    "encoder_leak_demo",
    "run_cca_attack",
    "run_bit_leak_attack",
    "run_circuit_privacy_attack",
    "run_encoder_leak_demo",
]


class AttackError(RuntimeError):
    """An attack could not complete against the given oracle or inputs."""


class InsufficientNoiseStructureError(AttackError):
    """The known evaluation noise has no usable nonzero non-constant coefficient."""


class FloodedOrMalformedError(AttackError):
    """The response is inconsistent with noise-free plain evaluation.

    Raised when the exact divisions or the final re-derivation fail,
    which is what noise flooding (or a malformed response) produces.
    """


class DecryptionOracle:
    """Decryption oracle that counts its queries."""

    def __init__(self, fn: Callable[[Ciphertext], Plaintext]):
        self._fn = fn
        self.calls = 0

    def __call__(self, ct: Ciphertext) -> Plaintext:
        self.calls += 1
        return self._fn(ct)

    @classmethod
    def honest(cls, sk: SecretKey, params: BfvParams) -> "DecryptionOracle":
        return cls(lambda ct: bfv.decrypt(sk, ct, params))


class ZeroCheckOracle:
    """Decrypts-to-zero oracle that counts its queries."""

    def __init__(self, fn: Callable[[Ciphertext], bool]):
        self._fn = fn
        self.calls = 0

    def __call__(self, ct: Ciphertext) -> bool:
        self.calls += 1
        return bool(self._fn(ct))

    @classmethod
    def honest(cls, sk: SecretKey, params: BfvParams) -> "ZeroCheckOracle":
        return cls(lambda ct: bfv.decrypt(sk, ct, params).is_zero())


def cca_one_query(oracle: DecryptionOracle, params: BfvParams) -> SecretKey:
    """Recover the secret key with a single decryption query.

    The chosen ciphertext (0, delta) decrypts to round(delta*s * t/q)
    = s coefficient-wise, so the oracle's answer is the key.  The
    answer is read mod t, which also covers t = 2 where the centered
    representative of 1 is -1.
    """
    probe = Ciphertext(
        Polynomial.zero(params.d, params.q),
        Polynomial.constant(params.delta, params.d, params.q),
    )
    answer = oracle(probe)
    bits = [c % params.t for c in answer.poly.to_coeff_list()]
    if any(b not in (0, 1) for b in bits):
        raise AttackError(
            "oracle answer has coefficients outside {0, 1}; "
            "not an honest decryption of (0, delta)"
        )
    return SecretKey(Polynomial(bits, params.q))


def bit_leak_probe(pk: PublicKey, index: int, params: BfvParams) -> Ciphertext:
    """Chosen ciphertext whose decryption is zero exactly when s_index = 0.

    With M = floor(delta/4) + 20 the probe (pk0 + M*x^index, pk1 + M)
    satisfies c0 + c1*s = -e + M*x^index + M*s.  Coefficients of size
    about M scale to 1/4 and round to zero; the target coefficient
    reaches about 2M when s_index = 1 and crosses the rounding
    threshold q/(2t).
    """
    m_val = params.delta // 4 + 20
    c0 = pk.pk0 + monomial(index, m_val, params.ring)
    c1 = pk.pk1 + monomial(0, m_val, params.ring)
    return Ciphertext(c0, c1)


def bit_leak_attack(
    oracle: ZeroCheckOracle, pk: PublicKey, params: BfvParams
) -> SecretKey:
    """Recover all d key bits with exactly d zero-check queries."""
    bits = []
    for index in range(params.d):
        decrypts_to_zero = oracle(bit_leak_probe(pk, index, params))
        bits.append(0 if decrypts_to_zero else 1)
    return SecretKey(Polynomial(bits, params.q))


def evaluation_noise(
    sk: SecretKey, pk: PublicKey, witness: EncryptionWitness, params: BfvParams
) -> Polynomial:
    """The noise n = e1 + e2*s - e*u carried by a fresh encryption.

    Everything on the right is known to the encryptor who kept her
    witness and also holds the key pair: e = -(pk0 + pk1*s).
    """
    e = -(pk.pk0 + pk.pk1 * sk.s)
    return witness.e1 + witness.e2 * sk.s - e * witness.u


def circuit_privacy_recover(
    sk: SecretKey,
    pk: PublicKey,
    witness: EncryptionWitness,
    m_a: Plaintext,
    c_ab: Ciphertext,
    params: BfvParams,
) -> tuple[Plaintext, Plaintext]:
    """Recover Bob's scalar multiplier r and scalar input m_b from c_ab.

    Assumes c_ab = r * (m_b - c_a) computed with plain operations only,
    where c_a is Alice's encryption of the scalar m_a with witness
    (u, e1, e2).  Then [c_ab0 + c_ab1*s]_q = r*delta*(m_b - m_a) - r*n
    with n the known evaluation noise, so every non-constant raw
    coefficient equals -r*n_j exactly over the integers.  The constant
    coefficient then yields [r*(m_b - m_a)]_t after rounding by delta.
    Raises FloodedOrMalformedError whenever the response is not an
    exact noise-free evaluation (noise flooding), and
    InsufficientNoiseStructureError when n has no nonzero non-constant
    coefficient to divide by.
    """
    m_a_coeffs = m_a.poly.to_coeff_list()
    if any(m_a_coeffs[1:]):
        raise ValueError("recovery assumes a scalar (constant) plaintext m_a")
    t, q, delta = params.t, params.q, params.delta

    noise = evaluation_noise(sk, pk, witness, params).to_coeff_list()
    raw = bfv.decrypt_raw(sk, c_ab, params).to_coeff_list()

    # r from the first usable noise coefficient, cross-checked on a second.
    probe_indices = [j for j in range(1, params.d) if noise[j] != 0][:2]
    if not probe_indices:
        raise InsufficientNoiseStructureError(
            "evaluation noise has no nonzero non-constant coefficient"
        )
    candidates = []
    for j in probe_indices:
        quotient, remainder = divmod(-raw[j], noise[j])
        if remainder:
            raise FloodedOrMalformedError(
                f"raw coefficient {j} is not an exact multiple of the known noise"
            )
        candidates.append(quotient)
    if len(set(candidates)) != 1:
        raise FloodedOrMalformedError(
            "noise coefficients disagree on the multiplier"
        )
    r_value = candidates[0]
    if r_value == 0 or reduce_centered(r_value, t) != r_value:
        raise FloodedOrMalformedError(
            f"recovered multiplier {r_value} is not a nonzero centered mod-{t} scalar"
        )

    # Constant coefficient: [raw_0 + r*n_0]_q = delta*k - w*(q mod t) with
    # k = [r*(m_b - m_a)]_t, and |w*(q mod t)| < delta/2, so rounding by
    # delta returns k exactly.
    constant = reduce_centered(raw[0] + r_value * noise[0], q)
    k = round_half_away(constant, delta)

    # Solve r * diff = k (mod t) for diff = m_b - m_a.
    m_a_value = m_a_coeffs[0]
    r_mod = r_value % t
    shared = gcd(r_mod, t)
    if k % shared:
        raise FloodedOrMalformedError(
            "constant term is inconsistent with the recovered multiplier"
        )
    diff_candidates = [
        diff for diff in range(t) if (r_mod * diff - k) % t == 0
    ]

    # Re-derive the raw vector; plain evaluation makes the match exact,
    # so anything else is flooded or malformed.  The non-constant part
    # does not depend on the candidate.
    expected_tail = [reduce_centered(-r_value * noise[j], q) for j in range(1, params.d)]
    if expected_tail != raw[1:]:
        raise FloodedOrMalformedError(
            "response tail does not match noise-free plain evaluation"
        )
    matches = []
    for diff in diff_candidates:
        m_b_value = reduce_centered(m_a_value + diff, t)
        # Plain evaluation computes r*(delta*m_b - delta*m_a) over the
        # integers, so the full product goes into the re-derivation.
        constant_term = r_value * delta * (m_b_value - m_a_value) - r_value * noise[0]
        if reduce_centered(constant_term, q) == raw[0]:
            matches.append(m_b_value)
    if len(matches) != 1:
        raise FloodedOrMalformedError(
            "no unique scalar input reproduces the response exactly"
        )

    r_plain = Plaintext.constant(r_value, params)
    m_b_plain = Plaintext.constant(matches[0], params)
    return r_plain, m_b_plain


@dataclass
class AttackReport:
    """Outcome of one attack run: what was recovered, at what query cost."""

    attack: str
    parameter_set: dict
    oracle_calls: int
    recovered: dict
    success: bool
    elapsed_seconds: Optional[float] = None
    details: dict = field(default_factory=dict)

    def to_json(self, include_timing: bool = True) -> dict:
        obj = {
            "attack": self.attack,
            "parameter_set": self.parameter_set,
            "oracle_calls": self.oracle_calls,
            "recovered": self.recovered,
            "success": self.success,
            "details": self.details,
        }
        if include_timing and self.elapsed_seconds is not None:
            obj["elapsed_seconds"] = self.elapsed_seconds
        return obj


def _describe_params(params: BfvParams, name: Optional[str]) -> dict:
    desc = {"d": params.d, "q": params.q, "t": params.t, "sigma": params.sigma}
    if name is not None:
        desc["name"] = name
    return desc


def run_cca_attack(
    params: BfvParams, rng: np.random.Generator, set_name: Optional[str] = None
) -> AttackReport:
    """Generate a key pair, run the one-query recovery, compare to ground truth."""
    start = time.perf_counter()
    sk, _pk = bfv.keygen(params, rng)
    oracle = DecryptionOracle.honest(sk, params)
    recovered = cca_one_query(oracle, params)
    elapsed = time.perf_counter() - start
    return AttackReport(
        attack="cca-one-query",
        parameter_set=_describe_params(params, set_name),
        oracle_calls=oracle.calls,
        recovered={"secret_key": recovered.s.to_hex()},
        success=recovered.s == sk.s and oracle.calls == 1,
        elapsed_seconds=elapsed,
        details={"key_bits": params.d},
    )


def run_bit_leak_attack(
    params: BfvParams, rng: np.random.Generator, set_name: Optional[str] = None
) -> AttackReport:
    """Generate a key pair, recover it through a zero-check oracle bit by bit."""
    start = time.perf_counter()
    sk, pk = bfv.keygen(params, rng)
    oracle = ZeroCheckOracle.honest(sk, params)
    recovered = bit_leak_attack(oracle, pk, params)
    elapsed = time.perf_counter() - start
    return AttackReport(
        attack="bit-leak",
        parameter_set=_describe_params(params, set_name),
        oracle_calls=oracle.calls,
        recovered={"secret_key": recovered.s.to_hex()},
        success=recovered.s == sk.s and oracle.calls == params.d,
        elapsed_seconds=elapsed,
        details={"key_bits": params.d, "queries_per_bit": 1},
    )


def _random_scalar(params: BfvParams, rng: np.random.Generator) -> int:
    """Uniform centered scalar mod t."""
    return reduce_centered(int(rng.integers(0, params.t)), params.t)


def _random_nonzero_scalar(params: BfvParams, rng: np.random.Generator) -> int:
    return reduce_centered(int(rng.integers(1, params.t)), params.t)


def run_circuit_privacy_attack(
    params: BfvParams,
    rng: np.random.Generator,
    flood_bound: Optional[int] = None,
    trials: int = 1,
    set_name: Optional[str] = None,
) -> AttackReport:
    """Play both sides of the scalar product r*(m_b - c_a) and try the recovery.

    Each trial draws a fresh key pair, fresh scalars m_a, m_b and a fresh
    nonzero multiplier r.  Without flooding the recovery must return the
    exact (r, m_b); with flooding it is expected to fail, and the report
    counts blocked trials.  Decryption correctness of the (possibly
    flooded) response is checked in every trial.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    recoveries = 0
    blocked = 0
    correctness_failures = 0
    last_recovered: dict = {}
    for _ in range(trials):
        sk, pk = bfv.keygen(params, rng)
        m_a_value = _random_scalar(params, rng)
        m_b_value = (
            m_a_value if rng.random() < 0.5 else _random_scalar(params, rng)
        )
        r_value = _random_nonzero_scalar(params, rng)
        m_a = Plaintext.constant(m_a_value, params)
        m_b = Plaintext.constant(m_b_value, params)
        c_a, witness = bfv.encrypt(pk, m_a, params, rng)
        response = bfv.mul_plain(
            bfv.sub_from_plain(m_b, c_a, params), Plaintext.constant(r_value, params), params
        )
        if flood_bound is not None:
            response = bfv.add(
                response, bfv.encrypt_zero_flood(pk, params, flood_bound, rng)
            )

        # The response must still decrypt to r*(m_b - m_a) regardless of flooding.
        expected = reduce_centered(r_value * (m_b_value - m_a_value), params.t)
        decrypted = bfv.decrypt(sk, response, params)
        if decrypted.poly != Polynomial.constant(expected, params.d, params.t):
            correctness_failures += 1

        try:
            r_rec, m_b_rec = circuit_privacy_recover(
                sk, pk, witness, m_a, response, params
            )
        except AttackError:
            blocked += 1
            continue
        exact = (
            r_rec.poly == Polynomial.constant(r_value, params.d, params.t)
            and m_b_rec.poly == Polynomial.constant(m_b_value, params.d, params.t)
        )
        if exact:
            recoveries += 1
            last_recovered = {
                "r": r_rec.poly.to_hex(),
                "m_b": m_b_rec.poly.to_hex(),
            }
    elapsed = time.perf_counter() - start
    success = recoveries == trials and correctness_failures == 0
    return AttackReport(
        attack="circuit-privacy",
        parameter_set=_describe_params(params, set_name),
        oracle_calls=0,
        recovered=last_recovered,
        success=success,
        elapsed_seconds=elapsed,
        details={
            "trials": trials,
            "recoveries": recoveries,
            "blocked": blocked,
            "correctness_failures": correctness_failures,
            "flood_bound": flood_bound,
        },
    )


def encoder_leak_demo(
    params: BfvParams, rng: np.random.Generator
) -> tuple[dict, dict]:
    """Millionaires'-style sums for the input pairs (1, 3) and (2, 2).

    Both pairs sum to 4, yet the decrypted polynomials differ (x + 2
    versus 2x), so the key holder learns more than the sum.  Returns
    one record per pair with the decrypted polynomial and its decode.
    """
    records = []
    for pair in ((1, 3), (2, 2)):
        sk, pk = bfv.keygen(params, rng)
        ct_sum = None
        for value in pair:
            ct, _ = bfv.encrypt(pk, integer_encode(value, params), params, rng)
            ct_sum = ct if ct_sum is None else bfv.add(ct_sum, ct)
        decrypted = bfv.decrypt(sk, ct_sum, params)
        records.append(
            {
                "inputs": list(pair),
                "decrypted_hex": decrypted.poly.to_hex(),
                "decrypted_coeffs_head": decrypted.poly.to_coeff_list()[:4],
                "decoded": integer_decode(decrypted, params),
            }
        )
    return records[0], records[1]


def run_encoder_leak_demo(
    params: BfvParams, rng: np.random.Generator, set_name: Optional[str] = None
) -> AttackReport:
    """Run the encoder-leakage experiment and report what distinguishes the pairs."""
    start = time.perf_counter()
    first, second = encoder_leak_demo(params, rng)
    elapsed = time.perf_counter() - start
    polynomials_differ = first["decrypted_hex"] != second["decrypted_hex"]
    decodes_agree = first["decoded"] == second["decoded"]
    return AttackReport(
        attack="encoder-leak",
        parameter_set=_describe_params(params, set_name),
        oracle_calls=0,
        recovered={
            "sum_of_1_3": first["decrypted_hex"],
            "sum_of_2_2": second["decrypted_hex"],
        },
        success=polynomials_differ and decodes_agree,
        elapsed_seconds=elapsed,
        details={
            "pairs": [first, second],
            "polynomials_differ": polynomials_differ,
            "decodes_agree": decodes_agree,
        },
    )
