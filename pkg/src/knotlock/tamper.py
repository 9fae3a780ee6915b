"""Single-field tampering of an honest response, for adversarial testing.

Each function changes exactly one field of a ResponseMessage and leaves
the rest as the honest responder produced them.
"""

from __future__ import annotations

import random
from dataclasses import replace

from . import codec, numeric
from .braid import FramedBraid, total_framing
from .protocol import PartyState, ResponseMessage


def tamper_gamma(response: ResponseMessage, bob: PartyState, rng: random.Random) -> ResponseMessage:
    if response.gamma is None:
        raise ValueError("response carries no gamma")
    return replace(response, gamma=response.gamma + 1)


def tamper_beta_prime(response: ResponseMessage, bob: PartyState, rng: random.Random) -> ResponseMessage:
    """beta' re-encoded for N_B + 1 at the honest precision."""
    e = bob.alpha**bob.M
    forged = numeric.real_root(bob.N + 1, e, response.beta_prime.precision)
    return replace(response, beta_prime=forged)


def tamper_beta_double_prime(response: ResponseMessage, bob: PartyState, rng: random.Random) -> ResponseMessage:
    """beta'' re-encoded for N_link + 1 at the honest precision."""
    M_link = total_framing(response.link_carrier)
    n_link = codec.reconstruct_N(bob.alpha, response.beta_double_prime, M_link)
    forged = numeric.real_root(n_link + 1, bob.alpha**M_link, response.beta_double_prime.precision)
    return replace(response, beta_double_prime=forged)


def tamper_framing(response: ResponseMessage, bob: PartyState, rng: random.Random) -> ResponseMessage:
    """One extra half-twist on a random strand of the link carrier."""
    carrier = response.link_carrier
    k = rng.randrange(carrier.strands)
    framing = list(carrier.framing)
    framing[k] = (framing[k] or 0) + 1
    return replace(response, link_carrier=FramedBraid(carrier.strands, carrier.word, tuple(framing)))


TAMPERS = {
    "gamma": tamper_gamma,
    "beta_prime": tamper_beta_prime,
    "beta_double_prime": tamper_beta_double_prime,
    "framing": tamper_framing,
}
TAMPER_CLASSES = tuple(TAMPERS)


def tamper(kind: str, response: ResponseMessage, bob: PartyState, rng: random.Random) -> ResponseMessage:
    return TAMPERS[kind](response, bob, rng)
