"""knotlock command line.

Exit codes: 0 success, 1 protocol rejection or local protocol failure,
2 usage error, 3 transport failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import threading
from typing import Optional, Sequence

from . import codec, wire
from .braid import obfuscate
from .codec import EncodingPayload
from .errors import KnotlockError
from .harness import (
    ChallengeServer,
    ChallengerSession,
    ResponderSession,
    TransportError,
    connect,
    load_config,
    parse_address,
    run_loopback_session,
)
from .numeric import int_to_str, str_to_int
from .protocol import PartyState, ResponseMessage, ShareMessage, make_share

ADDR_ENV = "KNOTLOCK_ADDR"
EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_TRANSPORT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _config(path: str):
    try:
        return load_config(path)
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _address(value: Optional[str]) -> tuple[str, int]:
    value = value or os.environ.get(ADDR_ENV)
    if not value:
        raise UsageError(f"no address given and {ADDR_ENV} is unset")
    try:
        return parse_address(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_encode(args, out) -> int:
    payload = EncodingPayload.from_lists(args.primes, args.twists, args.alpha)
    pkg = codec.encode(payload)
    print(f"N={int_to_str(pkg.N)} M={pkg.M} beta={pkg.beta.decimal}", file=out)
    if args.emit:
        out.write(wire.emit(make_share(PartyState.challenger(payload, moves=args.moves), args.seed)))
    return EXIT_OK


def cmd_decode(args, out) -> int:
    try:
        n = str_to_int(args.n)
    except KnotlockError as exc:
        raise UsageError(str(exc)) from None
    payload = codec.decode(n, args.alpha)
    print(" ".join(f"({p},{d})" for p, d in payload.entries), file=out)
    return EXIT_OK


def cmd_challenge(args, out) -> int:
    out.write(ChallengerSession(_config(args.config), args.seed).challenge())
    return EXIT_OK


def cmd_respond(args, out) -> int:
    out.write(ResponderSession(_config(args.config), args.seed).answer(_read_input(args.input)))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    session = ChallengerSession(_config(args.state))
    verdict = session.judge(_read_input(args.input))
    out.write(wire.emit(verdict))
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def cmd_equiv(args, out) -> int:
    msg = wire.parse(_read_input(args.input))
    if isinstance(msg, ShareMessage):
        msg = ShareMessage(obfuscate(msg.carrier, args.seed, args.moves), msg.alpha, msg.beta, msg.kind)
    elif isinstance(msg, ResponseMessage):
        msg = ResponseMessage(
            obfuscate(msg.link_carrier, args.seed, args.moves),
            msg.beta_prime, msg.beta_double_prime, msg.gamma, msg.b,
        )
    else:
        raise UsageError("equiv needs a document that carries a braid")
    out.write(wire.emit(msg))
    return EXIT_OK


def cmd_session(args, out) -> int:
    transcript = run_loopback_session(_config(args.alice), _config(args.bob), args.seed)
    out.write(transcript.render())
    return EXIT_OK if transcript.accepted else EXIT_REJECT


def cmd_serve(args, out) -> int:
    address = _address(args.listen)
    cfg = _config(args.config)
    done = []

    def report(transcript):
        out.write(transcript.render())
        out.flush()
        done.append(transcript)
        if args.sessions and len(done) >= args.sessions:
            # shutdown() blocks until serve_forever returns; run it off-thread
            threading.Thread(target=server.shutdown, daemon=True).start()

    try:
        server = ChallengeServer(address, cfg, args.seed, on_session=report)
    except OSError as exc:
        print(f"cannot listen on {address[0]}:{address[1]}: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    with server:
        host, port = server.server_address[:2]
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return EXIT_OK


def cmd_connect(args, out) -> int:
    transcript = connect(_address(args.to), _config(args.config), args.seed)
    out.write(transcript.render())
    return EXIT_OK if transcript.accepted else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knotlock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode primes and twists into (N, M, beta)")
    p.add_argument("--primes", type=_int_list, required=True)
    p.add_argument("--twists", type=_int_list, required=True)
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--emit", action="store_true", help="also print a SHARE document")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--moves", type=int, default=0)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover (prime, twists) pairs from N")
    p.add_argument("--n", required=True)
    p.add_argument("--alpha", type=int, default=2)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("challenge", help="emit a CHALLENGE document")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_challenge)

    p = sub.add_parser("respond", help="answer a CHALLENGE document")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("verify", help="judge a RESPONSE document")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--state", required=True, help="challenger config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equiv", help="re-emit a document with an equivalent carrier")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--moves", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("session", help="run a full in-process session")
    p.add_argument("--alice", required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("serve", help="run the challenger over TCP")
    p.add_argument("--listen", help=f"host:port (default ${ADDR_ENV})")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--sessions", type=int, default=0, help="exit after this many sessions")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("connect", help="run the responder against a server")
    p.add_argument("--to", help=f"host:port (default ${ADDR_ENV})")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_connect)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"knotlock: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TransportError as exc:
        print(f"knotlock: transport failure: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except KnotlockError as exc:
        print(f"knotlock: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
