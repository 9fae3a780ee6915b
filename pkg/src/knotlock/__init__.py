"""Prime encoding in framed braids and framed-link challenge-response."""

from .braid import FramedBraid, Generator, closure, obfuscate, permutation_of, total_framing
from .codec import EncodingPayload, contract_precision, decode, encode, reconstruct_N
from .linkage import disjoint_union, link_encode
from .numeric import BigReal, factorize, gcd, mod_pow, real_pow_int, real_root, totient
from .protocol import PartyState, Verdict, make_challenge, respond, share_decode, verify

__all__ = [
    "BigReal", "EncodingPayload", "FramedBraid", "Generator", "PartyState", "Verdict",
    "closure", "contract_precision", "decode", "disjoint_union", "encode", "factorize", "gcd",
    "link_encode", "make_challenge", "mod_pow", "obfuscate", "permutation_of", "real_pow_int",
    "real_root", "reconstruct_N", "respond", "share_decode", "total_framing", "totient", "verify",
]
