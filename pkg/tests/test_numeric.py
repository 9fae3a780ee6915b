import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotlock import numeric
from knotlock.errors import InvalidInput, InvalidModulus
from knotlock.numeric import BigReal, Factorization, factorize, gcd, mod_pow, real_pow_int, real_root, totient
from oracles import brute_totient, multiply_out, root_digits


@pytest.mark.parametrize(
    "n, expected",
    [
        (2304, {2: 8, 3: 2}),
        (7, {7: 1}),
        (1_500_625, {5: 4, 7: 4}),
        (3_457_440_000, {2: 8, 3: 2, 5: 4, 7: 4}),
    ],
)
def test_factorize_examples(n, expected):
    assert multiply_out(expected) == n
    assert factorize(n).as_dict() == expected


@pytest.mark.parametrize("n", [0, 1, -5])
def test_factorize_rejects_small(n):
    with pytest.raises(InvalidInput):
        factorize(n)


def test_factorize_large_primes_and_powers():
    p, q, r = 1_000_000_000_039, 1_000_000_000_061, 2**61 - 1
    n = p * q * r**3 * 9973**50
    assert factorize(n).as_dict() == {9973: 50, p: 1, q: 1, r: 3}


def test_factorize_huge_smooth_number():
    n = 9973 ** (5**6) * 9967 ** (5**2) * 2
    assert factorize(n).as_dict() == {2: 1, 9967: 25, 9973: 15625}


def test_trial_and_rho_backends_agree():
    rng = random.Random(12)
    samples = [rng.randrange(2, 10**12) for _ in range(40)]
    samples += [999_983 * 999_979, 2**39, 3**25, 999_999_999_989]
    for n in samples:
        auto = factorize(n)
        assert auto == factorize(n, method="trial")
        assert auto.value() == n


@given(st.integers(2, 10**15))
def test_factorize_multiplies_back(n):
    f = factorize(n)
    assert f.value() == n
    assert all(numeric.is_prime(p) for p in f.primes)


def test_is_prime_against_sieve():
    sieve = set(numeric.primes_below(200_000))
    for n in range(70_000, 200_000, 7):
        assert numeric.is_prime(n) == (n in sieve)


def test_is_prime_known_large():
    assert numeric.is_prime(2**127 - 1)
    assert not numeric.is_prime((2**61 - 1) * (2**89 - 1))
    assert not numeric.is_prime(3_317_044_064_679_887_385_961_981)  # strong pseudoprime to bases 2..37


def test_factorization_rejects_bad_entries():
    with pytest.raises(InvalidInput):
        Factorization(((3, 1), (2, 1)))
    with pytest.raises(InvalidInput):
        Factorization(((4, 1),))
    with pytest.raises(InvalidInput):
        Factorization(((2, 0),))


@pytest.mark.parametrize(
    "factors, expected",
    [({2: 8, 3: 2}, 768), ({5: 4, 7: 4}, 1_029_000), ({13: 1}, 12)],
)
def test_totient_examples(factors, expected):
    assert totient(Factorization.from_dict(factors)) == expected


def test_totient_against_brute_force():
    for n in list(range(2, 400)) + [2304]:
        assert totient(factorize(n)) == brute_totient(n)


@given(st.integers(2, 10**9), st.integers(2, 10**9))
def test_totient_multiplicative(a, b):
    if gcd(a, b) != 1:
        return
    assert totient(factorize(a)) * totient(factorize(b)) == totient(factorize(a * b))


def test_totient_not_the_inline_variant():
    # prod (p**j - 1) agrees only for squarefree inputs
    f = factorize(2304)
    assert totient(f) == 768
    assert (2**8 - 1) * (3**2 - 1) == 2040


def test_mod_pow_examples():
    assert mod_pow(7, 0, 13) == 1
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(11, 1_029_000, 3_457_440_000) == pow(11, 1_029_000, 3_457_440_000)


@pytest.mark.parametrize("m", [0, 1])
def test_mod_pow_rejects_modulus(m):
    with pytest.raises(InvalidModulus):
        mod_pow(3, 4, m)


@given(st.integers(0, 10**30), st.integers(0, 10**6), st.integers(2, 10**30))
def test_mod_pow_matches_builtin(b, e, m):
    assert mod_pow(b, e, m) == pow(b, e, m)


@given(st.integers(2, 10**12), st.integers(2, 10**6))
def test_fermat_euler(m, b):
    if gcd(b, m) != 1:
        return
    assert mod_pow(b, totient(factorize(m)), m) == 1


def test_gcd():
    assert gcd(2304, 1_500_625) == 1
    assert gcd(2304, 26244) == 36
    assert gcd(91, 91) == 91
    with pytest.raises(InvalidInput):
        gcd(0, 0)


# ---------------------------------------------------------------- BigReal

def test_bigreal_rendering():
    assert str(BigReal(Decimal(2), 11)) == "2.0000000000"
    assert str(BigReal(Decimal("0.00123"), 3)) == "0.00123"
    assert str(BigReal(Decimal("12345"), 3)) == "12300."
    assert str(BigReal(Decimal("9.996"), 3)) == "10.0"


def test_bigreal_rounds_half_even():
    assert str(BigReal(Decimal("1.25"), 2)) == "1.2"
    assert str(BigReal(Decimal("1.35"), 2)) == "1.4"


def test_bigreal_truncate():
    x = BigReal(Decimal("1.0895841"), 7)
    assert str(x.truncated(5)) == "1.0895"
    assert str(x.rounded(5)) == "1.0896"


@given(st.decimals(min_value=Decimal("1e-30"), max_value=Decimal("1e30"), allow_nan=False, places=None),
       st.integers(1, 40))
def test_bigreal_str_round_trip(value, precision):
    if value <= 0:
        return
    x = BigReal(value, precision)
    assert len(x.digits()) == precision
    again = BigReal.parse(str(x), precision)
    assert again == x
    assert str(again) == str(x)


def test_bigreal_rejects_nonpositive():
    with pytest.raises(InvalidInput):
        BigReal(Decimal(0), 5)
    with pytest.raises(InvalidInput):
        BigReal(Decimal(1), 0)


@pytest.mark.parametrize(
    "n, e, digits, expected",
    [(2304, 16, 6, "1.62239"), (1_500_625, 16, 5, "2.4323"), (1, 7, 4, "1.000")],
)
def test_real_root_examples(n, e, digits, expected):
    assert str(real_root(n, e, digits)) == expected


def test_real_root_frozen_contract_values():
    from conftest import BETA_A_16, BETA_B_19, BETA_LINK_23

    assert str(real_root(2304, 16, 16)) == BETA_A_16 == root_digits(2304, 16, 16)
    assert str(real_root(1_500_625, 16, 19)) == BETA_B_19 == root_digits(1_500_625, 16, 19)
    assert str(real_root(3_457_440_000, 256, 23)) == BETA_LINK_23 == root_digits(3_457_440_000, 256, 23)


@settings(max_examples=200)
@given(st.integers(1, 10**40), st.integers(1, 40), st.integers(1, 40))
def test_real_root_correctly_rounded(n, e, digits):
    assert str(real_root(n, e, digits)) == root_digits(n, e, digits)


def test_real_root_large_prime_exponent():
    # e has a prime factor beyond an unsigned long: exp/log path
    e = 2**89 - 1
    x = real_root(10**40, e, 30)
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(80):
        expected = mpmath.nstr(mpmath.root(mpmath.mpf(10) ** 40, e), 30, strip_zeros=False)
    assert x.value == Decimal(expected)


def test_real_pow_int_examples():
    x = real_root(2304, 16, 16)
    assert real_pow_int(x, 0).value == 1
    assert abs(real_pow_int(x, 16).value - 2304) < Decimal("0.5")
    y = real_root(1_500_625, 16, 19)
    assert abs(real_pow_int(y, 16).value - 1_500_625) < Decimal("0.5")


@given(st.integers(1, 10**30), st.integers(0, 8), st.sampled_from([2, 3, 5]))
def test_root_then_power_round_trips(n, m, alpha):
    e = alpha**m
    digits = numeric.ceil_log10(n) + numeric.ceil_log10(e) + 10
    y = real_pow_int(real_root(n, e, digits), e)
    assert abs(y.value - n) < Decimal("0.5")


@pytest.mark.parametrize("n, digits, ceil", [(1, 1, 0), (9, 1, 1), (10, 2, 1), (11, 2, 2), (2304, 4, 4), (10**400, 401, 400)])
def test_digit_helpers(n, digits, ceil):
    assert numeric.decimal_digits(n) == digits
    assert numeric.ceil_log10(n) == ceil


def test_int_string_helpers_beyond_cpython_limit():
    n = 7**20000
    assert numeric.str_to_int(numeric.int_to_str(n)) == n
    with pytest.raises(InvalidInput):
        numeric.str_to_int("-12")
    with pytest.raises(InvalidInput):
        numeric.str_to_int("1_000")
