"""Framed links built from two framed knots.

With disjoint prime sets the link's number is the product of the two
knots' numbers, and its framing integer is the sum of theirs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import codec, numeric
from .braid import FramedBraid, Generator, insert_cancelling_pair
from .codec import EncodedPackage, EncodingPayload
from .errors import PrimeCollision
from .numeric import BigReal


@dataclass(frozen=True)
class LinkedPackage:
    carrier: FramedBraid
    N_link: int
    M_link: int
    alpha: int
    beta_link: codec.BetaValue


def disjoint_union(a: FramedBraid, b: FramedBraid) -> FramedBraid:
    """Place b beside a; b's generators shift up by a.strands."""
    shifted = tuple(Generator(g.index + a.strands, g.sign) for g in b.word)
    return FramedBraid(a.strands + b.strands, a.word + shifted, a.framing + b.framing)


def interleave(link: FramedBraid, boundary: int, seed: int, pairs: int = 1) -> FramedBraid:
    """Insert sigma_b sigma_b^-1 pairs across the strand boundary between the two
    sides. Purely cosmetic: the permutation, framing and closure are unchanged."""
    if not 1 <= boundary < link.strands:
        return link
    rng = random.Random(seed)
    for _ in range(pairs):
        link = insert_cancelling_pair(link, rng.randrange(len(link.word) + 1), boundary)
    return link


def link_encode(
    pkg_a: EncodedPackage,
    payload_b: EncodingPayload,
    carrier_a: FramedBraid | None = None,
    carrier_b: FramedBraid | None = None,
) -> LinkedPackage:
    """Link A's package with B's payload: N = N_A * N_B, M = M_A + M_B.

    Raises PrimeCollision if B reuses any prime of A.
    """
    payload_a = codec.decode(pkg_a.N, pkg_a.alpha)
    shared = set(payload_a.primes).intersection(payload_b.primes)
    if shared:
        raise PrimeCollision(f"primes {sorted(shared)} appear on both sides of the link")
    if payload_b.alpha != pkg_a.alpha:
        raise ValueError(f"alpha mismatch: {pkg_a.alpha} vs {payload_b.alpha}")
    if carrier_a is None:
        carrier_a = codec.carrier_for(payload_a)
    if carrier_b is None:
        carrier_b = codec.carrier_for(payload_b)
    carrier = disjoint_union(carrier_a, carrier_b)

    alpha = pkg_a.alpha
    N = pkg_a.N * codec.encoded_number(payload_b)
    M = pkg_a.M + payload_b.total_twists
    D = codec.contract_precision(N, alpha, M)
    decimal = numeric.real_root(N, alpha**M, D)
    exponents = tuple((p, d - M) for p, d in sorted(payload_a.entries + payload_b.entries))
    return LinkedPackage(carrier, N, M, alpha, codec.BetaValue(alpha, exponents, decimal))


def link_beta(link: LinkedPackage) -> BigReal:
    return link.beta_link.decimal
