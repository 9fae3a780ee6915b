"""Canonical line-oriented text encoding of protocol messages.

    %KNOTWIRE 1
    TYPE SHARE
    BRAID s=2
    WORD +1 +1 +1
    FRAME 3 1
    ALPHA 2
    BETA 1.622389603610978 P=16
    END

Documents are UTF-8 with LF endings, fields in a fixed order per TYPE and
no trailing whitespace. Decimals carry exactly P significant digits with an
explicit point and no exponent. The parser accepts only canonical text:
``emit(parse(doc)) == doc`` for every document it returns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .braid import FramedBraid, Generator
from .errors import BadField, BadMagic, BadVersion, KnotlockError, TruncatedDocument
from .numeric import BigReal, int_to_str, str_to_int
from .protocol import Reason, ResponseMessage, ShareMessage, Verdict

MAGIC = "%KNOTWIRE"
VERSION = "1"
SHARE_TYPES = ("SHARE", "CHALLENGE")

Message = Union[ShareMessage, ResponseMessage, Verdict]

_TOKEN_RE = re.compile(r"[+-][1-9][0-9]*\Z")
_DECIMAL_RE = re.compile(r"[0-9]+\.[0-9]*\Z")
_PRECISION_RE = re.compile(r"P=([1-9][0-9]*)\Z")


# ---------------------------------------------------------------- emit

def _braid_lines(braid: FramedBraid) -> list[str]:
    word = " ".join(map(str, braid.word)) if braid.word else "-"
    frame = " ".join("." if v is None else str(v) for v in braid.framing)
    return [f"BRAID s={braid.strands}", f"WORD {word}", f"FRAME {frame}"]


def _beta_line(key: str, beta: BigReal) -> str:
    return f"{key} {beta} P={beta.precision}"


def emit(msg: Message) -> str:
    lines = [f"{MAGIC} {VERSION}"]
    if isinstance(msg, ShareMessage):
        if msg.kind not in SHARE_TYPES:
            raise ValueError(f"unknown share kind {msg.kind!r}")
        lines.append(f"TYPE {msg.kind}")
        lines += _braid_lines(msg.carrier)
        lines.append(f"ALPHA {msg.alpha}")
        lines.append(_beta_line("BETA", msg.beta))
    elif isinstance(msg, ResponseMessage):
        lines.append("TYPE RESPONSE")
        lines += _braid_lines(msg.link_carrier)
        lines.append(_beta_line("BETA1", msg.beta_prime))
        lines.append(_beta_line("BETA2", msg.beta_double_prime))
        if msg.gamma is not None:
            lines.append(f"GAMMA {int_to_str(msg.gamma)}")
        if msg.b is not None:
            lines.append(f"B {int_to_str(msg.b)}")
    elif isinstance(msg, Verdict):
        lines.append("TYPE VERDICT")
        lines.append(f"VERDICT {'ACCEPT' if msg.accepted else 'REJECT'} {msg.reason.value}")
    else:
        raise TypeError(f"cannot emit {type(msg).__name__}")
    lines.append("END")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parse

@dataclass
class _Cursor:
    """Walks the body lines of a document, tracking 1-based line numbers."""

    lines: list[str]
    pos: int = 2  # index into lines; 0 is the header, 1 is TYPE

    def peek_key(self) -> str | None:
        if self.pos >= len(self.lines) - 1:
            return None
        return self.lines[self.pos].split(" ", 1)[0]

    def take(self, key: str) -> tuple[int, str]:
        lineno = self.pos + 1
        if self.pos >= len(self.lines) - 1:
            raise BadField(lineno, f"missing {key} field")
        line = self.lines[self.pos]
        head, _, rest = line.partition(" ")
        if head != key:
            raise BadField(lineno, f"expected {key}, found {head!r}")
        if not rest:
            raise BadField(lineno, f"{key} has no value")
        self.pos += 1
        return lineno, rest

    def done(self) -> None:
        if self.pos != len(self.lines) - 1:
            raise BadField(self.pos + 1, f"unexpected field {self.lines[self.pos].split(' ', 1)[0]!r}")


def split_document(text: str) -> tuple[str, list[str]]:
    """Validate framing and return (TYPE, lines including header and END)."""
    if not text:
        raise TruncatedDocument("empty document")
    if not text.startswith(MAGIC):
        raise BadMagic(f"document does not start with {MAGIC}")
    body = text[:-1] if text.endswith("\n") else text
    lines = body.split("\n")
    header = lines[0].split(" ")
    if header[0] != MAGIC:
        raise BadMagic(f"bad magic {header[0]!r}")
    if len(header) != 2 or header[1] != VERSION:
        raise BadVersion(f"unsupported version {' '.join(header[1:])!r}")
    if "END" not in lines:
        raise TruncatedDocument("document has no END line")
    end = lines.index("END")
    if end != len(lines) - 1:
        raise BadField(end + 2, "content after END")
    for i, line in enumerate(lines, 1):
        if "\r" in line:
            raise BadField(i, "CR in line; LF endings only")
        if line != line.rstrip():
            raise BadField(i, "trailing whitespace")
    if len(lines) < 3 or not lines[1].startswith("TYPE "):
        raise BadField(2, "missing TYPE line")
    return lines[1][5:], lines


def _int(lineno: int, text: str, what: str) -> int:
    try:
        return str_to_int(text)
    except KnotlockError:
        raise BadField(lineno, f"{what} is not an unsigned integer") from None


def _parse_braid(cur: _Cursor) -> FramedBraid:
    lineno, rest = cur.take("BRAID")
    if not rest.startswith("s="):
        raise BadField(lineno, "expected s=<strands>")
    strands = _int(lineno, rest[2:], "strand count")

    lineno, rest = cur.take("WORD")
    word = []
    if rest != "-":
        for tok in rest.split(" "):
            if not _TOKEN_RE.match(tok):
                raise BadField(lineno, f"bad generator token {tok!r}")
            word.append(Generator(int(tok[1:]), 1 if tok[0] == "+" else -1))

    lineno_f, rest = cur.take("FRAME")
    framing = []
    for tok in rest.split(" "):
        framing.append(None if tok == "." else _int(lineno_f, tok, "framing value"))
    if len(framing) != strands:
        raise BadField(lineno_f, f"FRAME has {len(framing)} values for s={strands}")
    try:
        return FramedBraid(strands, tuple(word), tuple(framing))
    except ValueError as exc:
        raise BadField(lineno, str(exc)) from None


def _parse_beta(cur: _Cursor, key: str) -> BigReal:
    lineno, rest = cur.take(key)
    parts = rest.split(" ")
    if len(parts) != 2 or not _DECIMAL_RE.match(parts[0]):
        raise BadField(lineno, f"{key} must be '<decimal> P=<digits>'")
    m = _PRECISION_RE.match(parts[1])
    if not m:
        raise BadField(lineno, f"{key} has a bad precision tag {parts[1]!r}")
    try:
        beta = BigReal.parse(parts[0], int(m.group(1)))
    except KnotlockError as exc:
        raise BadField(lineno, str(exc)) from None
    if str(beta) != parts[0]:
        raise BadField(lineno, f"{key} is not rendered with exactly P significant digits")
    return beta


def parse(text: str) -> Message:
    kind, lines = split_document(text)
    cur = _Cursor(lines)
    if kind in SHARE_TYPES:
        carrier = _parse_braid(cur)
        lineno, rest = cur.take("ALPHA")
        alpha = _int(lineno, rest, "ALPHA")
        if alpha < 2:
            raise BadField(lineno, "ALPHA must be >= 2")
        msg: Message = ShareMessage(carrier, alpha, _parse_beta(cur, "BETA"), kind)
    elif kind == "RESPONSE":
        carrier = _parse_braid(cur)
        beta1 = _parse_beta(cur, "BETA1")
        beta2 = _parse_beta(cur, "BETA2")
        gamma = b = None
        if cur.peek_key() == "GAMMA":
            gamma = _int(*cur.take("GAMMA"), "GAMMA")
        if cur.peek_key() == "B":
            b = _int(*cur.take("B"), "B")
        msg = ResponseMessage(carrier, beta1, beta2, gamma, b)
    elif kind == "VERDICT":
        lineno, rest = cur.take("VERDICT")
        parts = rest.split(" ")
        if len(parts) != 2 or parts[0] not in ("ACCEPT", "REJECT"):
            raise BadField(lineno, "expected VERDICT ACCEPT|REJECT <reason>")
        try:
            msg = Verdict(parts[0] == "ACCEPT", Reason(parts[1]))
        except ValueError as exc:
            raise BadField(lineno, str(exc)) from None
    else:
        raise BadField(2, f"unknown TYPE {kind!r}")
    cur.done()
    if emit(msg) != text:
        raise BadField(0, "document is not in canonical form")
    return msg
