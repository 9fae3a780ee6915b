import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from knotlock import numeric  # noqa: E402
from knotlock.codec import EncodingPayload  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRIMES_1E4 = numeric.primes_below(10_000)
PRIMES_100 = numeric.primes_below(100)

EXAMPLE_A = EncodingPayload(((2, 3), (3, 1)), alpha=2)
EXAMPLE_B = EncodingPayload(((5, 2), (7, 2)), alpha=2)
N_A, N_B, N_LINK = 2304, 1_500_625, 3_457_440_000
# correctly rounded by tests/oracles.root_digits at the contract precision
BETA_A_16 = "1.622389603610978"
BETA_B_19 = "2.432299279097787350"
BETA_LINK_23 = "1.0895841082403764604304"


@st.composite
def payloads(draw, primes=PRIMES_1E4, max_strands=6, max_twists=6, alphas=(2, 3, 5)):
    s = draw(st.integers(1, max_strands))
    ps = draw(st.lists(st.sampled_from(primes), min_size=s, max_size=s, unique=True))
    ds = draw(st.lists(st.integers(0, max_twists), min_size=s, max_size=s))
    return EncodingPayload.from_lists(ps, ds, draw(st.sampled_from(alphas)))


def random_payload(rng: random.Random, primes=PRIMES_1E4, max_strands=6, max_twists=6, alphas=(2, 3, 5)):
    s = rng.randint(1, max_strands)
    return EncodingPayload.from_lists(
        rng.sample(primes, s), [rng.randint(0, max_twists) for _ in range(s)], rng.choice(alphas)
    )


# ---- acceptance reporting: one PASS/FAIL line per criterion

_CRITERIA: dict = {}


def record_criterion(number: int, description: str, passed: bool) -> None:
    _CRITERIA[number] = (description, passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        description, passed = _CRITERIA[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {description}")
