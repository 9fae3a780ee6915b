"""Walk through the two-party worked example end to end and print every
intermediate value: both encodings, the link, the witness and the verdict."""

import argparse

from knotlock import codec, wire
from knotlock.braid import total_framing
from knotlock.codec import EncodingPayload
from knotlock.numeric import factorize, mod_pow
from knotlock.protocol import PartyState, make_challenge, respond, verify


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--moves", type=int, default=8)
    parser.add_argument("--show-wire", action="store_true", help="print the wire documents")
    args = parser.parse_args()

    alice = PartyState.challenger(EncodingPayload.from_lists([2, 3], [3, 1]), args.moves)
    bob = PartyState.responder([2, 2], [5, 7], args.moves)

    challenge = make_challenge(alice, args.seed)
    print(f"Alice  N_A={alice.N} = {factorize(alice.N).as_dict()}  M_A={alice.M}")
    print(f"       beta   = {challenge.beta}  (6 digits: {challenge.beta.rounded(6)})")
    print(f"       carrier: s={challenge.carrier.strands} framing={challenge.carrier.framing}")

    response = respond(bob, challenge, args.seed)
    n_link = codec.reconstruct_N(2, response.beta_double_prime, total_framing(response.link_carrier))
    print(f"Bob    N_B={bob.N} = {factorize(bob.N).as_dict()}  M_B={bob.M}")
    print(f"       beta'  = {response.beta_prime}  (5 digits: {response.beta_prime.rounded(5)})")
    print(f"       beta'' = {response.beta_double_prime}  (first 5 digits: {response.beta_double_prime.truncated(5)})")
    print(f"Link   N_link={n_link} = N_A * N_B: {n_link == alice.N * bob.N}")
    print(f"       b={response.b} gamma={response.gamma}")
    print(f"       gamma^phi(N_A) mod N_link = {mod_pow(response.gamma, alice.phi, n_link)}")

    verdict = verify(alice, response)
    print(f"Verdict: {'ACCEPT' if verdict.accepted else 'REJECT'} {verdict.reason.value}")
    if args.show_wire:
        for msg in (challenge, response, verdict):
            print(wire.emit(msg), end="")


if __name__ == "__main__":
    main()
