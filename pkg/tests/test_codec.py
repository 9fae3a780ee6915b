from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BETA_A_16, BETA_B_19, N_A, N_B, EXAMPLE_A, EXAMPLE_B, payloads
from knotlock import codec
from knotlock.codec import EncodingPayload, contract_precision, decode, encode, reconstruct_N
from knotlock.errors import DuplicatePrime, InvalidInput, NotAPowerOfAlpha, NotPrime, PrecisionBreach
from knotlock.numeric import BigReal, ceil_log10
from oracles import multiply_out, root_digits


@pytest.mark.parametrize(
    "N, alpha, M, D",
    [(2304, 2, 4, 16), (3_457_440_000, 2, 8, 23), (1, 2, 0, 10), (1, 5, 3, 13)],
)
def test_contract_precision(N, alpha, M, D):
    assert contract_precision(N, alpha, M) == D


def test_contract_precision_rejects():
    with pytest.raises(InvalidInput):
        contract_precision(0, 2, 1)


def test_payload_validation():
    with pytest.raises(DuplicatePrime):
        EncodingPayload(((3, 1), (3, 2)))
    with pytest.raises(NotPrime):
        EncodingPayload(((4, 1),))
    with pytest.raises(InvalidInput):
        EncodingPayload(())
    with pytest.raises(InvalidInput):
        EncodingPayload(((2, -1),))
    with pytest.raises(InvalidInput):
        EncodingPayload(((2, 1),), alpha=1)
    with pytest.raises(InvalidInput):
        EncodingPayload.from_lists([2, 3], [1])


def test_encode_example_a():
    pkg = encode(EXAMPLE_A)
    assert (pkg.N, pkg.M) == (N_A, 4)
    assert pkg.N == multiply_out({2: 2**3, 3: 2**1})
    assert str(pkg.beta.decimal) == BETA_A_16
    assert str(pkg.beta.decimal.rounded(6)) == "1.62239"
    assert pkg.beta.exponents == ((2, -1), (3, -3))


def test_encode_example_b():
    pkg = encode(EXAMPLE_B)
    assert (pkg.N, pkg.M) == (N_B, 4)
    assert str(pkg.beta.decimal) == BETA_B_19
    assert str(pkg.beta.decimal.rounded(5)) == "2.4323"


def test_encode_single_untwisted_strand():
    pkg = encode(EncodingPayload(((2, 0),)))
    assert (pkg.N, pkg.M) == (2, 0)
    assert pkg.beta.decimal.value == 2


@pytest.mark.parametrize(
    "alpha, beta, M, N",
    [(2, BETA_A_16, 4, 2304), (2, "2.0000000000", 0, 2), (2, "1.0895841082403764604304", 8, 3_457_440_000)],
)
def test_reconstruct_examples(alpha, beta, M, N):
    b = BigReal.parse(beta, len(beta.replace(".", "").lstrip("0")))
    assert reconstruct_N(alpha, b, M) == N


def test_reconstruct_rejects_short_beta():
    with pytest.raises(PrecisionBreach):
        reconstruct_N(2, BigReal.parse("1.62", 3), 4)
    with pytest.raises(PrecisionBreach):
        reconstruct_N(2, BigReal.parse("1.0895", 5), 8)


def test_reconstruct_rejects_non_integer_result():
    # 2.7 ** 2 = 7.29: precise enough, but 0.29 from the nearest integer
    with pytest.raises(PrecisionBreach):
        reconstruct_N(2, BigReal.parse("2.700000000000000", 16), 1)


def test_reconstruct_invalid_args():
    with pytest.raises(InvalidInput):
        reconstruct_N(1, BigReal.parse("2.0", 2), 0)


@pytest.mark.parametrize(
    "N, entries",
    [(2304, ((2, 3), (3, 1))), (12, ((2, 1), (3, 0))), (N_B, ((5, 2), (7, 2))), (7, ((7, 0),))],
)
def test_decode_examples(N, entries):
    assert decode(N, 2).entries == entries


def test_decode_not_power_of_alpha():
    with pytest.raises(NotAPowerOfAlpha):
        decode(24, 2)
    with pytest.raises(NotAPowerOfAlpha):
        decode(2304, 3)


def test_decode_invalid():
    with pytest.raises(InvalidInput):
        decode(1, 2)


@pytest.mark.parametrize("e, alpha, d", [(1, 2, 0), (8, 2, 3), (81, 3, 4), (12, 2, None), (6, 3, None)])
def test_log_base(e, alpha, d):
    assert codec.log_base(e, alpha) == d


def test_twist_identity_examples():
    for payload in (EXAMPLE_A, EXAMPLE_B):
        beta = encode(payload).beta.decimal
        assert abs(codec.twist_identity(payload, beta) - 4) < 1e-6
        assert codec.verify_twist_identity(payload, beta)
    # one term: beta = p ** (alpha ** (d - M)) with M = d gives beta = p
    single = EncodingPayload(((11, 3),))
    assert codec.verify_twist_identity(single, BigReal(Decimal(11), 20))
    assert not codec.verify_twist_identity(EXAMPLE_A, encode(EXAMPLE_B).beta.decimal)


def test_carrier_for_payload():
    carrier = codec.carrier_for(EXAMPLE_A)
    assert carrier.framing == (3, 1)
    assert carrier.strands == 2


@settings(max_examples=150)
@given(payloads())
def test_round_trip(payload):
    pkg = encode(payload)
    assert decode(pkg.N, payload.alpha) == payload.sorted()
    assert reconstruct_N(payload.alpha, pkg.beta.decimal, pkg.M) == pkg.N


@settings(max_examples=100)
@given(payloads())
def test_exact_and_decimal_beta_agree(payload):
    beta = encode(payload).beta
    assert beta.evaluate(beta.decimal.precision) == beta.decimal


@settings(max_examples=60)
@given(payloads(primes=(2, 3, 5, 7, 11, 13), max_strands=3, max_twists=2, alphas=(2, 3)))
def test_beta_matches_integer_oracle(payload):
    pkg = encode(payload)
    e = payload.alpha**pkg.M
    assert str(pkg.beta.decimal) == root_digits(pkg.N, e, pkg.beta.decimal.precision)


@settings(max_examples=100)
@given(payloads(), st.integers(1, 10))
def test_short_beta_always_breaches(payload, cut):
    pkg = encode(payload)
    D = pkg.beta.decimal.precision
    P = max(1, D - codec.GUARD_DIGITS - cut)
    with pytest.raises(PrecisionBreach):
        reconstruct_N(payload.alpha, pkg.beta.decimal.truncated(P), pkg.M)


def test_contract_precision_grows_with_inputs():
    assert contract_precision(10**100, 2, 0) == ceil_log10(10**100) + 10
