"""Prime-power encoding of per-strand twist counts.

Strand k carries d_k half-twists and a distinct prime p_k. The encoded
number is N = prod p_k ** (alpha ** d_k), the framing integer is
M = sum d_k, and beta = N ** (alpha ** -M) is the real sent alongside the
knot. The receiver recovers N = beta ** (alpha ** M) from (alpha, beta, M)
and reads each d_k back off the multiplicity of p_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import gmpy2
from gmpy2 import mpz

from . import numeric
from .braid import FramedBraid, torus_braid
from .errors import DuplicatePrime, InvalidInput, NotAPowerOfAlpha, NotPrime, PrecisionBreach
from .numeric import BigReal

GUARD_DIGITS = 10
# a reconstructed value must land this close to an integer
BREACH_DISTANCE = 0.25


@dataclass(frozen=True)
class EncodingPayload:
    """Twisted strands as ``((p_k, d_k), ...)`` plus the integer base alpha.

    Untwisted strands have no entry.
    """

    entries: tuple[tuple[int, int], ...]
    alpha: int = 2

    def __post_init__(self):
        entries = tuple((int(p), int(d)) for p, d in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InvalidInput("a payload needs at least one twisted strand")
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, int) or self.alpha < 2:
            raise InvalidInput(f"alpha must be an integer >= 2, got {self.alpha!r}")
        seen = set()
        for p, d in entries:
            if d < 0:
                raise InvalidInput(f"twist count for prime {p} is negative")
            if p in seen:
                raise DuplicatePrime(f"prime {p} assigned to more than one strand")
            seen.add(p)
            if not numeric.is_prime(p):
                raise NotPrime(f"{p} is not prime")

    @classmethod
    def from_lists(cls, primes: Sequence[int], twists: Sequence[int], alpha: int = 2) -> EncodingPayload:
        if len(primes) != len(twists):
            raise InvalidInput(f"{len(primes)} primes but {len(twists)} twist counts")
        return cls(tuple(zip(primes, twists)), alpha)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def twists(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.entries)

    @property
    def total_twists(self) -> int:
        return sum(self.twists)

    def sorted(self) -> EncodingPayload:
        return EncodingPayload(tuple(sorted(self.entries)), self.alpha)


@dataclass(frozen=True)
class BetaValue:
    """beta in two forms: the exact product prod p_k ** (alpha ** (d_k - M)),
    stored as ``exponents = ((p_k, d_k - M), ...)``, and its decimal rendering.
    """

    alpha: int
    exponents: tuple[tuple[int, int], ...]
    decimal: BigReal

    def evaluate(self, precision: int) -> BigReal:
        """Evaluate the exact form independently of the N-th root path:
        beta = exp(sum alpha**(d_k - M) * ln p_k)."""
        bits = numeric._bits_for(precision) + 32
        with numeric._mpfr_context(bits):
            acc = gmpy2.mpfr(0)
            for p, shift in self.exponents:
                acc += gmpy2.log(gmpy2.mpfr(p)) / gmpy2.mpfr(mpz(self.alpha) ** -shift)
            return numeric._from_mpfr(gmpy2.exp(acc), precision)


@dataclass(frozen=True)
class EncodedPackage:
    N: int
    M: int
    alpha: int
    beta: BetaValue


def contract_precision(N: int, alpha: int, M: int) -> int:
    """Digits beta must carry so beta ** (alpha ** M) rounds back to N.

    ceil(log10 N) + ceil(M log10 alpha) + GUARD_DIGITS: the relative error of
    beta is amplified alpha**M-fold by the power, then scaled by N.
    """
    if N < 1 or alpha < 2 or M < 0:
        raise InvalidInput(f"contract_precision needs N >= 1, alpha >= 2, M >= 0 (got {N}, {alpha}, {M})")
    return numeric.ceil_log10(N) + numeric.ceil_log10(alpha**M) + GUARD_DIGITS


def encoded_number(payload: EncodingPayload) -> int:
    n = mpz(1)
    for p, d in payload.entries:
        n *= mpz(p) ** (payload.alpha**d)
    return int(n)


def encode(payload: EncodingPayload) -> EncodedPackage:
    N = encoded_number(payload)
    M = payload.total_twists
    alpha = payload.alpha
    D = contract_precision(N, alpha, M)
    decimal = numeric.real_root(N, alpha**M, D)
    beta = BetaValue(alpha, tuple((p, d - M) for p, d in payload.entries), decimal)
    return EncodedPackage(N, M, alpha, beta)


def _error_bound(y: BigReal, exponent: int, precision: int) -> float:
    """Upper bound on |y - beta_true ** exponent| given beta at `precision` digits.

    A faithful beta has relative error <= 10**(1-P); the power multiplies it
    by `exponent`, and rounding y to P digits adds one more such term.
    """
    log10_bound = (y.value.adjusted() + 1) + (exponent + 1).bit_length() * 0.30103 + 1 - precision
    return 10.0 ** min(log10_bound, 300)


def reconstruct_N(alpha: int, beta: BigReal, M: int) -> int:
    """N = beta ** (alpha ** M), rounded to the nearest integer.

    Raises PrecisionBreach when beta's precision cannot pin the result to a
    single integer, or when the result is not within 0.25 of an integer.
    """
    if alpha < 2 or M < 0:
        raise InvalidInput(f"reconstruct_N needs alpha >= 2 and M >= 0 (got {alpha}, {M})")
    E = alpha**M
    y = numeric.real_pow_int(beta, E)
    if _error_bound(y, E, beta.precision) >= BREACH_DISTANCE:
        raise PrecisionBreach(
            f"beta at {beta.precision} digits cannot determine a {y.value.adjusted() + 1}-digit result"
        )
    nearest = y.value.to_integral_value()
    if abs(y.value - nearest) > BREACH_DISTANCE:
        raise PrecisionBreach(f"beta**{alpha}**{M} is not near an integer")
    if nearest < 1:
        raise PrecisionBreach("reconstructed value is below 1")
    # Decimal -> int is quadratic in CPython; GMP's parser is not
    return numeric.str_to_int(format(nearest, "f"))


def log_base(e: int, alpha: int) -> int | None:
    """d with alpha**d == e, or None."""
    d = 0
    while e % alpha == 0:
        e //= alpha
        d += 1
    return d if e == 1 else None


def decode(N: int, alpha: int) -> EncodingPayload:
    """Recover ``((p_k, d_k), ...)`` in ascending prime order from N."""
    if N < 2 or alpha < 2:
        raise InvalidInput(f"decode needs N >= 2 and alpha >= 2 (alpha={alpha})")
    entries = []
    for p, e in numeric.factorize(N):
        d = log_base(e, alpha)
        if d is None:
            raise NotAPowerOfAlpha(f"multiplicity {e} of prime {p} is not a power of {alpha}")
        entries.append((p, d))
    return EncodingPayload(tuple(entries), alpha)


def twist_identity(payload: EncodingPayload, beta: BigReal) -> float:
    """M' = log_alpha(sum alpha**d_k * log_beta p_k), evaluated at beta's precision."""
    bits = numeric._bits_for(beta.precision)
    with numeric._mpfr_context(bits):
        ln_beta = numeric.real_log(beta)
        if ln_beta == 0:
            raise InvalidInput("beta == 1 has no logarithm base")
        acc = gmpy2.mpfr(0)
        for p, d in payload.entries:
            acc += gmpy2.mpfr(mpz(payload.alpha) ** d) * gmpy2.log(gmpy2.mpfr(p)) / ln_beta
        return float(gmpy2.log(acc) / gmpy2.log(gmpy2.mpfr(payload.alpha)))


def verify_twist_identity(payload: EncodingPayload, beta: BigReal, tol: float = 1e-6) -> bool:
    return abs(twist_identity(payload, beta) - payload.total_twists) < tol


def carrier_for(payload: EncodingPayload) -> FramedBraid:
    """Default carrier: a one-component torus braid framed by the twist vector."""
    return torus_braid(payload.twists)
