"""Two-party private equality test on top of the toy BFV scheme.

Alice holds m_a, Bob holds m_b.  Alice sends her public key and an
encryption c_a of m_a; Bob replies with r * (m_b - c_a) for a random
nonzero scalar r; Alice decrypts and learns Equal exactly when the
result is zero.  The outcome stays with Alice.

Every hop is serialized: messages travel as length-prefixed JSON
frames, and a Transcript records the whole session so it can be
re-verified offline.  Bob's response strategy is pluggable, which is
where the countermeasure (noise flooding) and the malicious probe
(key-bit leakage through the equality answer) plug in.
"""

from __future__ import annotations

import enum
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import attacks, bfv
from .bfv import BfvParams, Ciphertext, Plaintext, PublicKey, SecretKey
from .ring import reduce_centered

__all__ = [
    "ProtocolError",
    "Outcome",
    "Honest",
    "Flooding",
    "MaliciousBitProbe",
    "Strategy",
    "WireMessage",
    "encode_frame",
    "decode_frame",
    "AliceState",
    "BobState",
    "alice_init",
    "alice_query",
    "bob_init",
    "bob_respond",
    "alice_finish",
    "Transcript",
    "run_session",
    "run_session_detailed",
    "verify_transcript",
    "SessionRegistry",
    "session_zero_check_oracle",
]


class ProtocolError(RuntimeError):
    """A message arrived out of order, malformed, or for the wrong session."""


class Outcome(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"


@dataclass(frozen=True)
class Honest:
    """Bob computes r * (m_b - c_a) with plain operations only."""


@dataclass(frozen=True)
class Flooding:
    """Honest computation plus an encryption of zero with uniform noise
    on [-bound, bound], drowning the structured evaluation noise."""

    bound: int


@dataclass(frozen=True)
class MaliciousBitProbe:
    """Bob ignores his input and answers with the key-bit probe for `index`;
    Alice's Equal/NotEqual reaction leaks whether s_index is zero."""

    index: int


Strategy = Union[Honest, Flooding, MaliciousBitProbe]

_KINDS = ("pubkey", "query", "response", "result")
_FRAME_HEADER = struct.Struct(">I")
_MAX_FRAME = 1 << 28


@dataclass(frozen=True)
class WireMessage:
    """One protocol message: session id, kind, JSON-serializable body."""

    session_id: str
    kind: str
    body: dict

    def to_dict(self) -> dict:
        return {"session_id": self.session_id, "kind": self.kind, "body": self.body}


def encode_frame(msg: WireMessage) -> bytes:
    """Length-prefixed JSON frame: 4-byte big-endian length, then payload."""
    payload = json.dumps(msg.to_dict(), sort_keys=True).encode()
    return _FRAME_HEADER.pack(len(payload)) + payload


def decode_frame(frame: bytes) -> WireMessage:
    """Parse exactly one frame; reject truncation, trailing bytes and bad shapes."""
    if len(frame) < _FRAME_HEADER.size:
        raise ProtocolError("frame shorter than its length header")
    (length,) = _FRAME_HEADER.unpack(frame[: _FRAME_HEADER.size])
    if length > _MAX_FRAME:
        raise ProtocolError("frame length exceeds the protocol maximum")
    payload = frame[_FRAME_HEADER.size :]
    if len(payload) != length:
        raise ProtocolError("frame payload length does not match its header")
    try:
        obj = json.loads(payload.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"frame payload is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"session_id", "kind", "body"}:
        raise ProtocolError("frame object must have session_id, kind and body")
    if obj["kind"] not in _KINDS:
        raise ProtocolError(f"unknown message kind {obj['kind']!r}")
    if not isinstance(obj["session_id"], str) or not isinstance(obj["body"], dict):
        raise ProtocolError("malformed session_id or body")
    return WireMessage(obj["session_id"], obj["kind"], obj["body"])


@dataclass
class AliceState:
    """Alice's side: key pair, input, and a phase tag enforcing message order."""

    params: BfvParams
    sk: SecretKey
    pk: PublicKey
    m_a: Plaintext
    session_id: str
    rng: np.random.Generator
    retain_witness: bool = False
    witness: Optional[bfv.EncryptionWitness] = None
    query_ct: Optional[Ciphertext] = None
    outcome: Optional[Outcome] = None
    phase: str = "init"


@dataclass
class BobState:
    """Bob's side: the peer's public key, his input, and the reply strategy."""

    params: BfvParams
    pk: PublicKey
    m_b: Plaintext
    r: Plaintext
    session_id: str
    rng: np.random.Generator
    strategy: Strategy = field(default_factory=Honest)
    phase: str = "ready"


def _as_plaintext(value, params: BfvParams) -> Plaintext:
    if isinstance(value, Plaintext):
        return value
    return Plaintext.constant(int(value), params)


def alice_init(
    params: BfvParams,
    m_a,
    rng: np.random.Generator,
    retain_witness: bool = False,
    keys: Optional[tuple[SecretKey, PublicKey]] = None,
) -> tuple[AliceState, WireMessage]:
    """Start a session: generate (or reuse) keys and emit the pubkey message."""
    sk, pk = keys if keys is not None else bfv.keygen(params, rng)
    session_id = rng.bytes(16).hex()
    state = AliceState(
        params=params,
        sk=sk,
        pk=pk,
        m_a=_as_plaintext(m_a, params),
        session_id=session_id,
        rng=rng,
        retain_witness=retain_witness,
    )
    msg = WireMessage(session_id, "pubkey", bfv.public_key_to_json(pk, params))
    return state, msg


def alice_query(state: AliceState) -> WireMessage:
    """Encrypt m_a and emit the query message."""
    if state.phase != "init":
        raise ProtocolError(f"alice cannot send a query in phase {state.phase!r}")
    ct, witness = bfv.encrypt(state.pk, state.m_a, state.params, state.rng)
    state.query_ct = ct
    if state.retain_witness:
        state.witness = witness
    state.phase = "sent"
    return WireMessage(
        state.session_id, "query", bfv.ciphertext_to_json(ct, state.params)
    )


def bob_init(
    params: BfvParams,
    m_b,
    pubkey_msg: WireMessage,
    rng: np.random.Generator,
    strategy: Strategy = Honest(),
) -> BobState:
    """Accept Alice's pubkey message and fix the blinding scalar r."""
    if pubkey_msg.kind != "pubkey":
        raise ProtocolError(f"expected a pubkey message, got {pubkey_msg.kind!r}")
    try:
        pk, got_params = bfv.public_key_from_json(pubkey_msg.body)
    except ValueError as exc:
        raise ProtocolError(f"invalid public key payload: {exc}") from exc
    if got_params != params:
        raise ProtocolError("public key was made with different parameters")
    r_value = reduce_centered(int(rng.integers(1, params.t)), params.t)
    return BobState(
        params=params,
        pk=pk,
        m_b=_as_plaintext(m_b, params),
        r=Plaintext.constant(r_value, params),
        session_id=pubkey_msg.session_id,
        rng=rng,
        strategy=strategy,
    )


def bob_respond(state: BobState, query: WireMessage) -> WireMessage:
    """Consume the query and emit the response chosen by the strategy."""
    if state.phase != "ready":
        raise ProtocolError(f"bob cannot respond in phase {state.phase!r}")
    if query.kind != "query":
        raise ProtocolError(f"expected a query message, got {query.kind!r}")
    if query.session_id != state.session_id:
        raise ProtocolError("query belongs to a different session")
    try:
        c_a, got_params = bfv.ciphertext_from_json(query.body)
    except ValueError as exc:
        raise ProtocolError(f"invalid ciphertext payload: {exc}") from exc
    if got_params != state.params:
        raise ProtocolError("query ciphertext was made with different parameters")

    strategy = state.strategy
    if isinstance(strategy, MaliciousBitProbe):
        response = attacks.bit_leak_probe(state.pk, strategy.index, state.params)
    else:
        response = bfv.mul_plain(
            bfv.sub_from_plain(state.m_b, c_a, state.params), state.r, state.params
        )
        if isinstance(strategy, Flooding):
            response = bfv.add(
                response,
                bfv.encrypt_zero_flood(
                    state.pk, state.params, strategy.bound, state.rng
                ),
            )
    state.phase = "done"
    return WireMessage(
        state.session_id, "response", bfv.ciphertext_to_json(response, state.params)
    )


def alice_finish(state: AliceState, response: WireMessage) -> Outcome:
    """Decrypt the response: zero means the inputs were equal."""
    if state.phase != "sent":
        raise ProtocolError(f"alice cannot finish in phase {state.phase!r}")
    if response.kind != "response":
        raise ProtocolError(f"expected a response message, got {response.kind!r}")
    if response.session_id != state.session_id:
        raise ProtocolError("response belongs to a different session")
    try:
        ct, got_params = bfv.ciphertext_from_json(response.body)
    except ValueError as exc:
        raise ProtocolError(f"invalid ciphertext payload: {exc}") from exc
    if got_params != state.params:
        raise ProtocolError("response ciphertext was made with different parameters")
    decrypted = bfv.decrypt(state.sk, ct, state.params)
    state.outcome = Outcome.EQUAL if decrypted.is_zero() else Outcome.NOT_EQUAL
    state.phase = "done"
    return state.outcome


@dataclass
class Transcript:
    """Full record of one session: every frame in order, plus the outcome."""

    session_id: str
    frames: list[dict]
    outcome: str

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "frames": self.frames,
            "outcome": self.outcome,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Transcript":
        if not isinstance(obj, dict) or set(obj) != {"session_id", "frames", "outcome"}:
            raise ProtocolError("transcript must have session_id, frames and outcome")
        return cls(obj["session_id"], obj["frames"], obj["outcome"])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "Transcript":
        return cls.from_json(json.loads(Path(path).read_text()))


class SessionRegistry:
    """Rejects replayed session identifiers across runs."""

    def __init__(self) -> None:
        self._seen: set[str] = set()

    def register(self, session_id: str) -> None:
        if session_id in self._seen:
            raise ProtocolError(f"session id {session_id} was already used")
        self._seen.add(session_id)


def _deliver(msg: WireMessage, frames: list[dict]) -> WireMessage:
    """Serialize to a wire frame, record it, and parse it back at the receiver."""
    frame = encode_frame(msg)
    received = decode_frame(frame)
    frames.append(received.to_dict())
    return received


def run_session_detailed(
    params: BfvParams,
    m_a,
    m_b,
    rng: np.random.Generator,
    strategy: Strategy = Honest(),
    retain_witness: bool = False,
    alice_keys: Optional[tuple[SecretKey, PublicKey]] = None,
    registry: Optional[SessionRegistry] = None,
) -> tuple[Transcript, AliceState, BobState]:
    """Run one full session over serialized frames; return transcript and states."""
    alice_rng, bob_rng = rng.spawn(2)
    frames: list[dict] = []
    alice, pubkey_msg = alice_init(
        params, m_a, alice_rng, retain_witness=retain_witness, keys=alice_keys
    )
    if registry is not None:
        registry.register(alice.session_id)
    bob = bob_init(params, m_b, _deliver(pubkey_msg, frames), bob_rng, strategy)
    response_msg = bob_respond(bob, _deliver(alice_query(alice), frames))
    outcome = alice_finish(alice, _deliver(response_msg, frames))
    result_msg = WireMessage(alice.session_id, "result", {"outcome": outcome.value})
    _deliver(result_msg, frames)
    transcript = Transcript(alice.session_id, frames, outcome.value)
    return transcript, alice, bob


def run_session(
    params: BfvParams,
    m_a,
    m_b,
    rng: np.random.Generator,
    strategy: Strategy = Honest(),
    retain_witness: bool = False,
    alice_keys: Optional[tuple[SecretKey, PublicKey]] = None,
    registry: Optional[SessionRegistry] = None,
) -> Transcript:
    """Run one session and return only its transcript."""
    transcript, _, _ = run_session_detailed(
        params,
        m_a,
        m_b,
        rng,
        strategy=strategy,
        retain_witness=retain_witness,
        alice_keys=alice_keys,
        registry=registry,
    )
    return transcript


def verify_transcript(transcript: Transcript) -> Outcome:
    """Re-check a stored transcript: frame order, session ids, payload shapes,
    and agreement between the result frame and the recorded outcome."""
    kinds = [frame.get("kind") for frame in transcript.frames]
    if kinds != list(_KINDS):
        raise ProtocolError(f"unexpected frame order {kinds}")
    params = None
    for frame in transcript.frames:
        if (
            not isinstance(frame, dict)
            or frame.get("session_id") != transcript.session_id
        ):
            raise ProtocolError("frame does not belong to this session")
        body = frame.get("body")
        if not isinstance(body, dict):
            raise ProtocolError("frame body must be an object")
        kind = frame["kind"]
        try:
            if kind == "pubkey":
                _, params = bfv.public_key_from_json(body)
            elif kind in ("query", "response"):
                _, ct_params = bfv.ciphertext_from_json(body)
                if params is not None and ct_params != params:
                    raise ProtocolError("ciphertext parameters differ from the key's")
        except ValueError as exc:
            raise ProtocolError(f"invalid {kind} payload: {exc}") from exc
    result_body = transcript.frames[-1]["body"]
    if result_body.get("outcome") != transcript.outcome:
        raise ProtocolError("result frame disagrees with the recorded outcome")
    try:
        return Outcome(transcript.outcome)
    except ValueError:
        raise ProtocolError(f"unknown outcome {transcript.outcome!r}") from None


def session_zero_check_oracle(
    params: BfvParams,
    m_a,
    alice_keys: tuple[SecretKey, PublicKey],
    rng: np.random.Generator,
    registry: Optional[SessionRegistry] = None,
) -> attacks.ZeroCheckOracle:
    """Zero-check oracle built from whole protocol sessions.

    Each query must be a key-bit probe for Alice's public key.  The
    probe index is read off the ciphertext, a fresh session is run with
    a malicious Bob playing that probe against the same Alice key pair,
    and the session outcome (Equal versus NotEqual) is the oracle
    answer.  This is the composition that turns an equality protocol
    into a key-leak channel.
    """
    pk = alice_keys[1]
    m_val = params.delta // 4 + 20

    def infer_index(ct: Ciphertext) -> int:
        delta_c0 = (ct.c0 - pk.pk0).to_coeff_list()
        delta_c1 = (ct.c1 - pk.pk1).to_coeff_list()
        nonzero = [j for j, c in enumerate(delta_c0) if c]
        if (
            len(nonzero) != 1
            or delta_c0[nonzero[0]] != m_val
            or delta_c1 != [m_val] + [0] * (params.d - 1)
        ):
            raise ProtocolError("query is not a key-bit probe for this public key")
        return nonzero[0]

    def check(ct: Ciphertext) -> bool:
        index = infer_index(ct)
        (child,) = rng.spawn(1)
        transcript = run_session(
            params,
            m_a,
            0,
            child,
            strategy=MaliciousBitProbe(index),
            alice_keys=alice_keys,
            registry=registry,
        )
        return Outcome(transcript.outcome) is Outcome.EQUAL

    return attacks.ZeroCheckOracle(check)
