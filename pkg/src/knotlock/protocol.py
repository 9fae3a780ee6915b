"""Party state machines for knot sharing and framed-link challenge-response.

Sharing: the sender transmits a carrier braid with (alpha, beta); the
receiver reads M off the carrier, rebuilds N and factors it.

Challenge-response: the challenger (Alice) sends a framed knot. The
responder (Bob) decodes it, builds his own knot on fresh primes, links the
two and answers with (beta', beta'', link carrier) plus, optionally, a
witness gamma = b ** phi(N_B) mod N_link. Alice checks that her N divides
the link's N, that the quotient matches beta', that none of her primes
divide the quotient, and that gamma ** phi(N_A) == 1 mod N_link.
Each party's phi(N) is its private key and never enters a message.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import codec, numeric
from .braid import FramedBraid, obfuscate, total_framing
from .codec import BetaValue, EncodedPackage, EncodingPayload
from .errors import NoValidPrime, PrecisionBreach, PrimeCollision, ProtocolStateError
from .linkage import interleave, link_encode
from .numeric import BigReal

DEFAULT_MOVES = 8
INTERLEAVE_PAIRS = 2


class Role(enum.Enum):
    CHALLENGER = "challenger"
    RESPONDER = "responder"


class Phase(enum.Enum):
    IDLE = "idle"
    CHALLENGED = "challenged"
    RESPONDED = "responded"
    DONE = "done"


class Reason(str, enum.Enum):
    OK = "OK"
    NOT_DIVISIBLE = "NotDivisible"
    NOT_COPRIME = "NotCoprime"
    GAMMA_CHECK_FAILED = "GammaCheckFailed"
    PRECISION_BREACH = "PrecisionBreach"
    MALFORMED_MESSAGE = "MalformedMessage"


@dataclass(frozen=True)
class ShareMessage:
    """Carrier braid with (alpha, beta). kind is "SHARE" or "CHALLENGE"."""

    carrier: FramedBraid
    alpha: int
    beta: BigReal
    kind: str = "SHARE"


@dataclass(frozen=True)
class ResponseMessage:
    link_carrier: FramedBraid
    beta_prime: BigReal
    beta_double_prime: BigReal
    gamma: Optional[int] = None
    b: Optional[int] = None


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: Reason

    def __post_init__(self):
        object.__setattr__(self, "reason", Reason(self.reason))
        if self.accepted != (self.reason is Reason.OK):
            raise ValueError("a verdict is accepted exactly when its reason is OK")

    @classmethod
    def ok(cls) -> Verdict:
        return cls(True, Reason.OK)

    @classmethod
    def reject(cls, reason: Reason) -> Verdict:
        return cls(False, reason)


def _payload_factorization(payload: EncodingPayload) -> numeric.Factorization:
    return numeric.Factorization.from_dict({p: payload.alpha**d for p, d in payload.entries})


@dataclass
class PartyState:
    """One participant's private session state.

    A challenger holds a full payload from the start. A responder holds a
    twist vector and optionally fixed primes; its payload is completed when
    the challenge fixes alpha and the primes it must avoid.
    """

    role: Role
    twists: tuple[int, ...]
    primes: Optional[tuple[int, ...]] = None
    alpha: Optional[int] = None
    moves: int = DEFAULT_MOVES
    phase: Phase = Phase.IDLE
    payload: Optional[EncodingPayload] = None
    package: Optional[EncodedPackage] = field(default=None, repr=False)
    phi: Optional[int] = field(default=None, repr=False)

    @classmethod
    def challenger(cls, payload: EncodingPayload, moves: int = DEFAULT_MOVES) -> PartyState:
        state = cls(Role.CHALLENGER, payload.twists, payload.primes, payload.alpha, moves)
        state._adopt(payload)
        return state

    @classmethod
    def responder(
        cls, twists: Sequence[int], primes: Optional[Sequence[int]] = None, moves: int = DEFAULT_MOVES
    ) -> PartyState:
        return cls(Role.RESPONDER, tuple(twists), tuple(primes) if primes else None, None, moves)

    def _adopt(self, payload: EncodingPayload) -> None:
        self.payload = payload
        self.alpha = payload.alpha
        self.package = codec.encode(payload)
        self.phi = numeric.totient(_payload_factorization(payload))

    @property
    def N(self) -> int:
        return self.package.N

    @property
    def M(self) -> int:
        return self.package.M


def _require(state: PartyState, role: Role) -> None:
    if state.role is not role:
        raise ProtocolStateError(f"operation needs a {role.value}, got a {state.role.value}")


def make_share(alice: PartyState, seed: int, kind: str = "SHARE") -> ShareMessage:
    """Encode Alice's payload onto an obfuscated carrier."""
    if alice.package is None:
        raise ProtocolStateError("party has no payload to share")
    carrier = obfuscate(codec.carrier_for(alice.payload), seed, alice.moves)
    return ShareMessage(carrier, alice.alpha, alice.package.beta.decimal, kind)


def make_challenge(alice: PartyState, seed: int) -> ShareMessage:
    _require(alice, Role.CHALLENGER)
    msg = make_share(alice, seed, kind="CHALLENGE")
    alice.phase = Phase.CHALLENGED
    return msg


def share_decode(bob: PartyState, msg: ShareMessage) -> EncodingPayload:
    """Read M from the carrier, rebuild N from beta, factor it."""
    M = total_framing(msg.carrier)
    N = codec.reconstruct_N(msg.alpha, msg.beta, M)
    return codec.decode(N, msg.alpha)


def choose_primes(count: int, avoid: Sequence[int], below: int) -> tuple[int, ...]:
    """The `count` smallest primes outside `avoid`, each < `below`."""
    out, p, avoid = [], 1, set(avoid)
    while len(out) < count:
        p = numeric.next_prime(p)
        if p >= below:
            raise NoValidPrime(f"only {len(out)} fresh primes below the challenger's N")
        if p not in avoid:
            out.append(p)
    return tuple(out)


def smallest_coprime_prime(n: int) -> int:
    p = 2
    while n % p == 0:
        p = numeric.next_prime(p)
    return p


def respond(bob: PartyState, challenge: ShareMessage, seed: int, with_gamma: bool = True) -> ResponseMessage:
    _require(bob, Role.RESPONDER)
    payload_a = share_decode(bob, challenge)
    alpha = challenge.alpha
    N_A = codec.encoded_number(payload_a)

    if bob.primes is None:
        primes = choose_primes(len(bob.twists), payload_a.primes, N_A)
    else:
        primes = bob.primes
        shared = set(primes).intersection(payload_a.primes)
        if shared:
            raise PrimeCollision(f"responder primes {sorted(shared)} are already used by the challenger")
        if any(p >= N_A for p in primes):
            raise NoValidPrime("responder primes must be below the challenger's N")
    bob._adopt(EncodingPayload.from_lists(primes, bob.twists, alpha))

    M_A = total_framing(challenge.carrier)
    beta_a = BetaValue(alpha, tuple((p, d - M_A) for p, d in payload_a.entries), challenge.beta)
    pkg_a = EncodedPackage(N_A, M_A, alpha, beta_a)
    carrier_b = obfuscate(codec.carrier_for(bob.payload), seed, bob.moves)
    link = link_encode(pkg_a, bob.payload, carrier_a=challenge.carrier, carrier_b=carrier_b)
    link_carrier = interleave(link.carrier, challenge.carrier.strands, seed, INTERLEAVE_PAIRS)

    gamma = b = None
    if with_gamma:
        b = smallest_coprime_prime(link.N_link)
        gamma = numeric.mod_pow(b, bob.phi, link.N_link)
    bob.phase = Phase.RESPONDED
    return ResponseMessage(link_carrier, bob.package.beta.decimal, link.beta_link.decimal, gamma, b)


def verify(alice: PartyState, response: ResponseMessage) -> Verdict:
    """Alice's acceptance check; every failure maps to a rejection reason."""
    _require(alice, Role.CHALLENGER)
    if alice.package is None:
        raise ProtocolStateError("challenger has no payload")
    alice.phase = Phase.DONE
    try:
        return _verify(alice, response)
    except PrecisionBreach:
        return Verdict.reject(Reason.PRECISION_BREACH)


def _verify(alice: PartyState, response: ResponseMessage) -> Verdict:
    if (response.gamma is None) != (response.b is None):
        return Verdict.reject(Reason.MALFORMED_MESSAGE)
    alpha, N_A, M_A = alice.alpha, alice.N, alice.M
    M_link = total_framing(response.link_carrier)
    M_B = M_link - M_A
    if M_B < 0:
        return Verdict.reject(Reason.MALFORMED_MESSAGE)

    N_link = codec.reconstruct_N(alpha, response.beta_double_prime, M_link)
    if N_link % N_A:
        return Verdict.reject(Reason.NOT_DIVISIBLE)
    N_B = N_link // N_A
    if N_B < 2:
        return Verdict.reject(Reason.MALFORMED_MESSAGE)
    if codec.reconstruct_N(alpha, response.beta_prime, M_B) != N_B:
        return Verdict.reject(Reason.NOT_DIVISIBLE)
    if any(N_B % p == 0 for p in alice.payload.primes):
        return Verdict.reject(Reason.NOT_COPRIME)

    if response.gamma is not None:
        if numeric.gcd(response.b, N_link) != 1:
            return Verdict.reject(Reason.GAMMA_CHECK_FAILED)
        if numeric.mod_pow(response.gamma, alice.phi, N_link) != 1:
            return Verdict.reject(Reason.GAMMA_CHECK_FAILED)
    return Verdict.ok()
