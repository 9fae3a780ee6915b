"""For random payloads, truncate beta to every precision from 1 up to the
contract precision and record whether reconstruction returns the right N,
raises PrecisionBreach, or (never expected) returns a wrong integer."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from knotlock import codec
from knotlock.codec import EncodingPayload, encode, reconstruct_N
from knotlock.errors import PrecisionBreach
from knotlock.numeric import primes_below


@dataclass
class PrecisionConfig:
    payloads: int = 50
    seed: int = 0
    max_strands: int = 4
    max_twists: int = 4
    alphas: tuple = (2, 3, 5)


def sweep(cfg: PrecisionConfig) -> Counter:
    """Counts keyed by (digits short of the contract, outcome)."""
    rng = random.Random(cfg.seed)
    primes = primes_below(10_000)
    table = Counter()
    for _ in range(cfg.payloads):
        s = rng.randint(1, cfg.max_strands)
        payload = EncodingPayload.from_lists(
            rng.sample(primes, s), [rng.randint(0, cfg.max_twists) for _ in range(s)], rng.choice(cfg.alphas)
        )
        pkg = encode(payload)
        D = pkg.beta.decimal.precision
        for P in range(1, D + 1):
            try:
                n = reconstruct_N(payload.alpha, pkg.beta.decimal.truncated(P), pkg.M)
                outcome = "exact" if n == pkg.N else "WRONG"
            except PrecisionBreach:
                outcome = "breach"
            table[D - P, outcome] += 1
    return table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--payloads", type=int, default=PrecisionConfig.payloads)
    parser.add_argument("--seed", type=int, default=PrecisionConfig.seed)
    args = parser.parse_args()
    table = sweep(PrecisionConfig(payloads=args.payloads, seed=args.seed))
    shortfalls = sorted({k for k, _ in table})
    print(f"{'short':>5}  {'exact':>6} {'breach':>6} {'WRONG':>6}   (guard = {codec.GUARD_DIGITS})")
    for k in shortfalls[:40]:
        print(f"{k:5d}  {table[k, 'exact']:6d} {table[k, 'breach']:6d} {table[k, 'WRONG']:6d}")
    print(f"wrong integers returned: {sum(v for (k, o), v in table.items() if o == 'WRONG')}")


if __name__ == "__main__":
    main()
