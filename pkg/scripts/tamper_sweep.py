"""Run randomized honest sessions and, for each, every single-field tamper
class; tabulate the rejection reasons Alice reports."""

import argparse
import random
from collections import Counter, defaultdict
from dataclasses import dataclass

from knotlock import codec
from knotlock.codec import EncodingPayload
from knotlock.numeric import primes_below
from knotlock.protocol import PartyState, make_challenge, respond, verify
from knotlock.tamper import TAMPER_CLASSES, tamper


@dataclass
class SweepConfig:
    sessions: int = 100
    seed: int = 0
    max_strands: int = 4
    max_twists: int = 3
    alphas: tuple = (2, 3)


def random_alice(rng, cfg, primes):
    while True:
        s = rng.randint(1, cfg.max_strands)
        payload = EncodingPayload.from_lists(
            rng.sample(primes, s), [rng.randint(0, cfg.max_twists) for _ in range(s)], rng.choice(cfg.alphas)
        )
        if codec.encoded_number(payload) >= 1000:
            return payload


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    primes = primes_below(10_000)
    reasons = defaultdict(Counter)
    for i in range(cfg.sessions):
        alice = PartyState.challenger(random_alice(rng, cfg, primes))
        bob = PartyState.responder([rng.randint(0, cfg.max_twists) for _ in range(rng.randint(1, cfg.max_strands))])
        r = respond(bob, make_challenge(alice, i), i)
        reasons["honest"][verify(alice, r).reason.value] += 1
        for kind in TAMPER_CLASSES:
            reasons[kind][verify(alice, tamper(kind, r, bob, rng)).reason.value] += 1
    return reasons


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sessions", type=int, default=SweepConfig.sessions)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    parser.add_argument("--max-twists", type=int, default=SweepConfig.max_twists)
    args = parser.parse_args()
    cfg = SweepConfig(sessions=args.sessions, seed=args.seed, max_twists=args.max_twists)
    for kind, counts in sweep(cfg).items():
        row = "  ".join(f"{reason}={n}" for reason, n in sorted(counts.items()))
        print(f"{kind:18s} {row}")


if __name__ == "__main__":
    main()
