"""Session drivers: party configs, transcripts, loopback and TCP transport.

Both transports run the same three-document exchange

    A->B  CHALLENGE
    B->A  RESPONSE
    A->B  VERDICT

through the same session objects, so for equal configs and seeds they
produce the same document bytes. On the wire, documents are delimited by
their END line; there is no length prefix.
"""

from __future__ import annotations

import logging
import socket
import socketserver
import threading
import time
from dataclasses import dataclass, field
from typing import BinaryIO, Callable, Optional

from . import wire
from .codec import EncodingPayload
from .errors import KnotlockError, WireError
from .protocol import (
    DEFAULT_MOVES,
    PartyState,
    Reason,
    ResponseMessage,
    ShareMessage,
    Verdict,
    make_challenge,
    respond,
    verify,
)

log = logging.getLogger(__name__)

ALICE_TO_BOB = "A->B"
BOB_TO_ALICE = "B->A"
MAX_DOCUMENT_BYTES = 64 << 20


class TransportError(KnotlockError):
    pass


# ---------------------------------------------------------------- configs

@dataclass(frozen=True)
class PartyConfig:
    """Party settings. A challenger needs primes; a responder may omit them
    and take the smallest primes not used by the challenge."""

    twists: tuple[int, ...]
    primes: Optional[tuple[int, ...]] = None
    alpha: int = 2
    seed: int = 0
    moves: int = DEFAULT_MOVES

    def challenger(self) -> PartyState:
        if self.primes is None:
            raise KnotlockError("a challenger config needs PRIMES")
        return PartyState.challenger(EncodingPayload.from_lists(self.primes, self.twists, self.alpha), self.moves)

    def responder(self) -> PartyState:
        return PartyState.responder(self.twists, self.primes, self.moves)


def emit_config(cfg: PartyConfig) -> str:
    lines = [f"{wire.MAGIC} {wire.VERSION}", "TYPE CONFIG"]
    if cfg.primes is not None:
        lines.append("PRIMES " + " ".join(map(str, cfg.primes)))
    lines.append("TWISTS " + " ".join(map(str, cfg.twists)))
    lines += [f"ALPHA {cfg.alpha}", f"SEED {cfg.seed}", f"MOVES {cfg.moves}", "END"]
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> PartyConfig:
    """Config documents share the wire framing; every field but TWISTS is optional."""
    kind, lines = wire.split_document(text)
    if kind != "CONFIG":
        raise wire.BadField(2, f"expected TYPE CONFIG, found {kind!r}")
    values: dict[str, list[int]] = {}
    order = ["PRIMES", "TWISTS", "ALPHA", "SEED", "MOVES"]
    for lineno, line in enumerate(lines[2:-1], 3):
        key, _, rest = line.partition(" ")
        if key not in order or key in values:
            raise wire.BadField(lineno, f"unexpected config field {key!r}")
        if order.index(key) < max((order.index(k) for k in values), default=-1):
            raise wire.BadField(lineno, f"{key} out of order")
        try:
            values[key] = [int(tok) for tok in rest.split(" ")]
        except ValueError:
            raise wire.BadField(lineno, f"{key} values must be integers") from None
        if key != "PRIMES" and key != "TWISTS" and len(values[key]) != 1:
            raise wire.BadField(lineno, f"{key} takes one value")
    if "TWISTS" not in values:
        raise wire.BadField(len(lines), "config needs TWISTS")
    primes = tuple(values["PRIMES"]) if "PRIMES" in values else None
    if primes is not None and len(primes) != len(values["TWISTS"]):
        raise wire.BadField(3, "PRIMES and TWISTS differ in length")
    return PartyConfig(
        twists=tuple(values["TWISTS"]),
        primes=primes,
        alpha=values.get("ALPHA", [2])[0],
        seed=values.get("SEED", [0])[0],
        moves=values.get("MOVES", [DEFAULT_MOVES])[0],
    )


def load_config(path: str) -> PartyConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------- transcripts

@dataclass(frozen=True)
class TranscriptEntry:
    direction: str
    text: str
    timestamp: float


@dataclass
class SessionTranscript:
    entries: list[TranscriptEntry] = field(default_factory=list)
    verdict: Optional[Verdict] = None
    failure: Optional[str] = None

    def record(self, direction: str, text: str) -> None:
        self.entries.append(TranscriptEntry(direction, text, time.time()))

    def documents(self) -> list[tuple[str, str]]:
        """What determinism comparisons look at: direction and text only."""
        return [(e.direction, e.text) for e in self.entries]

    @property
    def accepted(self) -> bool:
        return self.verdict is not None and self.verdict.accepted

    def render(self) -> str:
        out = []
        for e in self.entries:
            out.append(f"# {e.direction}")
            out.append(e.text.rstrip("\n"))
        if self.failure:
            out.append(f"# FAILED {self.failure}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------- sessions

class ChallengerSession:
    def __init__(self, cfg: PartyConfig, seed: Optional[int] = None):
        self.state = cfg.challenger()
        self.seed = cfg.seed if seed is None else seed

    def challenge(self) -> str:
        return wire.emit(make_challenge(self.state, self.seed))

    def judge(self, response_text: str) -> Verdict:
        try:
            msg = wire.parse(response_text)
        except WireError:
            return Verdict.reject(Reason.MALFORMED_MESSAGE)
        if not isinstance(msg, ResponseMessage):
            return Verdict.reject(Reason.MALFORMED_MESSAGE)
        return verify(self.state, msg)


class ResponderSession:
    def __init__(self, cfg: PartyConfig, seed: Optional[int] = None):
        self.state = cfg.responder()
        self.seed = cfg.seed if seed is None else seed

    def answer(self, challenge_text: str) -> str:
        msg = wire.parse(challenge_text)
        if not isinstance(msg, ShareMessage):
            raise WireError(f"expected a CHALLENGE, got {type(msg).__name__}")
        return wire.emit(respond(self.state, msg, self.seed))


def run_loopback_session(alice_cfg: PartyConfig, bob_cfg: PartyConfig, seed: Optional[int] = None) -> SessionTranscript:
    """Full challenge-response in-process. Local failures end up in
    ``transcript.failure`` rather than propagating."""
    transcript = SessionTranscript()
    try:
        alice = ChallengerSession(alice_cfg, seed)
        bob = ResponderSession(bob_cfg, seed)
        challenge = alice.challenge()
        transcript.record(ALICE_TO_BOB, challenge)
        response = bob.answer(challenge)
        transcript.record(BOB_TO_ALICE, response)
        verdict = alice.judge(response)
        transcript.record(ALICE_TO_BOB, wire.emit(verdict))
        transcript.verdict = verdict
    except KnotlockError as exc:
        transcript.failure = f"{type(exc).__name__}: {exc}"
    return transcript


# ---------------------------------------------------------------- transport

def read_document(stream: BinaryIO) -> str:
    """Read one END-terminated document from a byte stream."""
    chunks, size = [], 0
    while True:
        line = stream.readline()
        if not line:
            raise TransportError("stream closed before END")
        size += len(line)
        if size > MAX_DOCUMENT_BYTES:
            raise TransportError("document exceeds size limit")
        chunks.append(line)
        if line == b"END\n":
            return b"".join(chunks).decode("utf-8")


def write_document(stream: BinaryIO, text: str) -> None:
    stream.write(text.encode("utf-8"))
    stream.flush()


def parse_address(addr: str) -> tuple[str, int]:
    host, sep, port = addr.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"address must be host:port, got {addr!r}")
    return host or "127.0.0.1", int(port)


def challenger_over_stream(rfile: BinaryIO, wfile: BinaryIO, cfg: PartyConfig, seed: Optional[int]) -> SessionTranscript:
    transcript = SessionTranscript()
    alice = ChallengerSession(cfg, seed)
    challenge = alice.challenge()
    write_document(wfile, challenge)
    transcript.record(ALICE_TO_BOB, challenge)
    response = read_document(rfile)
    transcript.record(BOB_TO_ALICE, response)
    verdict = alice.judge(response)
    verdict_text = wire.emit(verdict)
    write_document(wfile, verdict_text)
    transcript.record(ALICE_TO_BOB, verdict_text)
    transcript.verdict = verdict
    return transcript


def responder_over_stream(rfile: BinaryIO, wfile: BinaryIO, cfg: PartyConfig, seed: Optional[int]) -> SessionTranscript:
    transcript = SessionTranscript()
    bob = ResponderSession(cfg, seed)
    challenge = read_document(rfile)
    transcript.record(ALICE_TO_BOB, challenge)
    try:
        response = bob.answer(challenge)
    except KnotlockError as exc:
        transcript.failure = f"{type(exc).__name__}: {exc}"
        return transcript
    write_document(wfile, response)
    transcript.record(BOB_TO_ALICE, response)
    verdict_text = read_document(rfile)
    transcript.record(ALICE_TO_BOB, verdict_text)
    verdict = wire.parse(verdict_text)
    if not isinstance(verdict, Verdict):
        raise TransportError("expected a VERDICT document")
    transcript.verdict = verdict
    return transcript


class ChallengeServer(socketserver.ThreadingTCPServer):
    """Alice's service: one independent challenge-response per connection."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        cfg: PartyConfig,
        seed: Optional[int] = None,
        on_session: Optional[Callable[[SessionTranscript], None]] = None,
    ):
        self.cfg = cfg
        self.seed = seed
        self.on_session = on_session
        self.completed: list[SessionTranscript] = []
        self._lock = threading.Lock()
        super().__init__(address, _ChallengeHandler)

    def _finish(self, transcript: SessionTranscript) -> None:
        with self._lock:
            self.completed.append(transcript)
            if self.on_session:
                self.on_session(transcript)


class _ChallengeHandler(socketserver.StreamRequestHandler):
    server: ChallengeServer

    def handle(self):
        try:
            transcript = challenger_over_stream(self.rfile, self.wfile, self.server.cfg, self.server.seed)
        except (TransportError, OSError) as exc:
            log.warning("session from %s failed: %s", self.client_address, exc)
            transcript = SessionTranscript(failure=f"{type(exc).__name__}: {exc}")
        self.server._finish(transcript)


def connect(address: tuple[str, int], cfg: PartyConfig, seed: Optional[int] = None, timeout: float = 60.0) -> SessionTranscript:
    """Bob's side of a session against a ChallengeServer."""
    try:
        sock = socket.create_connection(address, timeout=timeout)
    except OSError as exc:
        raise TransportError(f"cannot connect to {address[0]}:{address[1]}: {exc}") from None
    with sock, sock.makefile("rb") as rfile, sock.makefile("wb") as wfile:
        try:
            return responder_over_stream(rfile, wfile, cfg, seed)
        except OSError as exc:
            raise TransportError(str(exc)) from None
