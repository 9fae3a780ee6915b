"""Big-integer number theory and decimal reals carried at a stated precision.

Integers are plain Python ints at the API surface. Heavy internals (huge
valuations, powers, gcds) run on gmpy2 ``mpz``; transcendental work for
:class:`BigReal` runs on MPFR with guard bits and is rounded back to
decimal, round-half-even, before anything leaves this module.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Context, Decimal, MAX_EMAX, MAX_PREC, MIN_EMIN
from typing import Iterator

import gmpy2
from gmpy2 import mpfr, mpz

from .errors import InvalidInput, InvalidModulus

TRIAL_BOUND = 1 << 16
# Bases 2..41 make Miller-Rabin exact below this bound.
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_EXTRA_ROUNDS = 64

_GUARD_BITS = 64
_LOG2_10 = math.log2(10)
_DIGITS_RE = re.compile(r"[0-9]+\Z")


def primes_below(limit: int) -> list[int]:
    """All primes p < limit (sieve of Eratosthenes)."""
    if limit < 3:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = primes_below(TRIAL_BOUND)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)
_PRIMORIAL = mpz(1)
for _p in _SMALL_PRIMES:
    _PRIMORIAL *= _p
del _p


# ---------------------------------------------------------------- conversions

def int_to_str(n: int) -> str:
    """Decimal rendering without CPython's int-to-str digit limit."""
    return mpz(n).digits(10)


def str_to_int(text: str) -> int:
    """Parse an unsigned decimal integer, rejecting signs, spaces and underscores."""
    if not _DIGITS_RE.match(text):
        raise InvalidInput(f"not an unsigned decimal integer: {text[:40]!r}")
    return int(mpz(text, 10))


def decimal_digits(n: int) -> int:
    """Number of decimal digits of n >= 1."""
    if n < 1:
        raise InvalidInput("decimal_digits needs n >= 1")
    z = mpz(n)
    k = z.num_digits(10)  # exact or one too many
    if k > 1 and z < mpz(10) ** (k - 1):
        k -= 1
    return k


def ceil_log10(n: int) -> int:
    """Smallest k with 10**k >= n, for n >= 1."""
    k = decimal_digits(n)
    return k - 1 if mpz(n) == mpz(10) ** (k - 1) else k


# ---------------------------------------------------------------- primes

def is_prime(n: int) -> bool:
    """Miller-Rabin. Exact below ~3.3e24; above that, 64 extra seeded rounds."""
    if n < 2:
        return False
    if n < TRIAL_BOUND:
        return n in _SMALL_PRIME_SET
    for p in _SMALL_PRIMES[:60]:
        if n % p == 0:
            return False
    n = mpz(n)
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1

    def witness(a) -> bool:
        x = pow(mpz(a), d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if any(witness(a) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(0x5EED)
    return not any(witness(rng.randrange(2, int(n) - 1)) for _ in range(MR_EXTRA_ROUNDS))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``((p, multiplicity), ...)`` with p strictly ascending."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        entries = tuple((int(p), int(m)) for p, m in self.entries)
        object.__setattr__(self, "entries", entries)
        last = 1
        for p, m in entries:
            if p <= last:
                raise InvalidInput("primes must be strictly ascending")
            if m < 1:
                raise InvalidInput(f"multiplicity of {p} must be >= 1")
            if not is_prime(p):
                raise InvalidInput(f"{p} is not prime")
            last = p

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> Factorization:
        return cls(tuple(sorted(d.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def value(self) -> int:
        out = mpz(1)
        for p, m in self.entries:
            out *= mpz(p) ** m
        return int(out)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _remove(n, p):
    """Strip every factor p from n; returns (cofactor, multiplicity)."""
    v = 0
    ladder = [(mpz(p), 1)]
    while True:
        q, w = ladder[-1]
        quo, rem = gmpy2.f_divmod(n, q)
        if rem:
            break
        n, v = quo, v + w
        ladder.append((q * q, 2 * w))
    for q, w in reversed(ladder[:-1]):
        quo, rem = gmpy2.f_divmod(n, q)
        if not rem:
            n, v = quo, v + w
    return n, v


def _perfect_power(n):
    """(root, k) with root**k == n for the largest such prime k found, else None.

    Only called after small primes are gone, so any root exceeds TRIAL_BOUND
    and k is bounded by bit_length / 16.
    """
    max_k = n.bit_length() // (TRIAL_BOUND.bit_length() - 1)
    for k in _SMALL_PRIMES:
        if k > max_k:
            break
        root, exact = gmpy2.iroot(n, k)
        if exact:
            return root, k
    return None


def _brent_rho(n):
    """A non-trivial factor of the odd composite n (Brent's cycle variant)."""
    for c in range(1, 1 << 16):
        y, m, g, r, q = mpz(2), 128, mpz(1), 1, mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def _split(n, out: dict[int, int], mult: int = 1) -> None:
    if n == 1:
        return
    if n < mpz(TRIAL_BOUND) ** 2 or is_prime(int(n)):
        out[int(n)] = out.get(int(n), 0) + mult
        return
    pp = _perfect_power(n)
    if pp is not None:
        _split(pp[0], out, mult * pp[1])
        return
    d = _brent_rho(n)
    _split(d, out, mult)
    _split(n // d, out, mult)


def _factorize_trial(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _factorize_auto(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    rest = mpz(n)
    g = gmpy2.gcd(rest, _PRIMORIAL)
    if g > 1:
        for p in _SMALL_PRIMES:
            if g % p == 0:
                rest, out[p] = _remove(rest, p)
                g //= p
                if g == 1:
                    break
    # every remaining prime factor is >= TRIAL_BOUND
    _split(rest, out)
    # _split can revisit a prime through different rho branches
    return out


def factorize(n: int, method: str = "auto") -> Factorization:
    """Exact prime factorization of n >= 2.

    ``method="auto"`` strips primes below TRIAL_BOUND via a primorial gcd,
    then splits the cofactor with perfect-power detection and Brent's rho,
    certifying pieces with :func:`is_prime`. ``method="trial"`` is plain
    trial division, kept as an independent backend for cross-checks.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidInput(f"factorize needs an integer n >= 2, got {n!r}")
    if method == "auto":
        found = _factorize_auto(n)
    elif method == "trial":
        found = _factorize_trial(n)
    else:
        raise InvalidInput(f"unknown factorization method {method!r}")
    return Factorization.from_dict(found)


def totient(f: Factorization) -> int:
    """Euler's phi from a factorization: prod p**(j-1) * (p-1)."""
    out = mpz(1)
    for p, j in f.entries:
        out *= mpz(p) ** (j - 1) * (p - 1)
    return int(out)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """base**exp % modulus by left-to-right square-and-multiply."""
    if modulus < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidInput("negative exponent")
    m = mpz(modulus)
    b = mpz(base) % m
    acc = mpz(1)
    for bit in bin(exp)[2:]:
        acc = acc * acc % m
        if bit == "1":
            acc = acc * b % m
    return int(acc)


def gcd(a: int, b: int) -> int:
    if a == 0 and b == 0:
        raise InvalidInput("gcd(0, 0) is undefined")
    return int(gmpy2.gcd(a, b))


# ---------------------------------------------------------------- reals

def _context(precision: int) -> Context:
    return Context(prec=precision, rounding=ROUND_HALF_EVEN, Emax=MAX_EMAX, Emin=MIN_EMIN)


def _pad(value: Decimal, precision: int) -> Decimal:
    """Re-express value so its coefficient has exactly `precision` digits."""
    exponent = value.adjusted() - (precision - 1)
    return value.quantize(Decimal(1).scaleb(exponent), context=_context(MAX_PREC))


@dataclass(frozen=True)
class BigReal:
    """A positive real carried at `precision` significant decimal digits.

    The stored value is always rounded (half-even) to exactly `precision`
    digits, so ``str`` and parsing round-trip without re-rounding.
    """

    value: Decimal
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise InvalidInput("precision must be >= 1")
        v = Decimal(self.value)
        if not v.is_finite() or v <= 0:
            raise InvalidInput(f"BigReal must be positive and finite, got {v}")
        v = _pad(_context(self.precision).plus(v), self.precision)
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, text: str, precision: int) -> BigReal:
        return cls(Decimal(text), precision)

    def digits(self) -> str:
        """The significand digits, exactly `precision` of them."""
        return "".join(map(str, self.value.as_tuple().digits))

    def __str__(self) -> str:
        digits = self.digits()
        lead = self.value.adjusted()
        if lead < 0:
            return "0." + "0" * (-lead - 1) + digits
        if lead + 1 >= len(digits):
            return digits + "0" * (lead + 1 - len(digits)) + "."
        return f"{digits[: lead + 1]}.{digits[lead + 1 :]}"

    def __float__(self) -> float:
        return float(self.value)

    def rounded(self, precision: int) -> BigReal:
        return BigReal(self.value, precision)

    def truncated(self, precision: int) -> BigReal:
        v = Context(prec=precision, rounding=ROUND_DOWN, Emax=MAX_EMAX, Emin=MIN_EMIN).plus(self.value)
        return BigReal(v, precision)

    def to_mpfr(self, bits: int):
        return mpfr(str(self.value), bits)


def _bits_for(precision: int) -> int:
    return math.ceil(precision * _LOG2_10) + _GUARD_BITS


def _mpfr_context(bits: int):
    return gmpy2.context(
        precision=bits,
        round=gmpy2.RoundToNearest,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
    )


def _from_mpfr(x, precision: int) -> BigReal:
    if precision < 2:
        # mpfr refuses one-digit output; divide the exact binary value instead
        num, den = x.as_integer_ratio()
        return BigReal(_context(precision).divide(Decimal(int(num)), Decimal(int(den))), precision)
    mantissa, exp10, _ = x.digits(10, precision)
    # mantissa m with x = 0.m * 10**exp10
    return BigReal(Decimal(f"0.{mantissa}e{exp10}"), precision)


def real_root(n: int, e: int, precision: int) -> BigReal:
    """n**(1/e) to `precision` significant digits, round-half-even.

    When every prime factor of e fits an unsigned long, the root is taken as
    a chain of correctly rounded k-th roots; otherwise via exp(log(n)/e).
    Working precision carries 64+ guard bits, so the final decimal rounding
    is wrong only if the true value sits within ~2**-60 ulp of a tie.
    """
    if n < 1 or e < 1:
        raise InvalidInput(f"real_root needs n >= 1 and e >= 1, got n={n}, e={e}")
    if n == 1:
        return BigReal(Decimal(1), precision)
    steps = factorize(e).entries if e > 1 else ()
    bits = _bits_for(precision) + 2 * max(8, e.bit_length().bit_length())
    with _mpfr_context(bits):
        x = mpfr(mpz(n))
        if all(p < (1 << 32) for p, _ in steps):
            for p, m in steps:
                for _ in range(m):
                    x = gmpy2.rootn(x, p)
        else:
            x = gmpy2.exp(gmpy2.log(x) / mpz(e))
        return _from_mpfr(x, precision)


def real_pow_int(x: BigReal, e: int) -> BigReal:
    """x**e at x's precision, by repeated squaring.

    The squaring chain runs with extra bits proportional to bit_length(e),
    which absorbs the error growth of the chain; the result is accurate to
    x.precision digits relative to the exact power of the stored value.
    """
    if e < 0:
        raise InvalidInput("negative exponent")
    if e == 0:
        return BigReal(Decimal(1), x.precision)
    bits = _bits_for(x.precision) + e.bit_length() + 8
    with _mpfr_context(bits):
        base = x.to_mpfr(bits)
        acc = mpfr(1)
        for bit in bin(e)[2:]:
            acc = acc * acc
            if bit == "1":
                acc = acc * base
        return _from_mpfr(acc, x.precision)


def real_log(x: BigReal, precision: int | None = None):
    """Natural log of x as an mpfr at roughly `precision` digits (default: x's)."""
    p = precision or x.precision
    bits = _bits_for(p)
    with _mpfr_context(bits):
        return gmpy2.log(x.to_mpfr(bits))
