"""Framed braids: Artin words plus per-strand half-twist counts.

A framed braid is kept in normal form: a framing vector (one entry per
strand position at the top of the braid) followed by a word in the Artin
generators. ``None`` in the framing vector marks an untwisted strand, which
is distinct from a strand carrying zero half-twists.

Strands and generator indices are 1-based throughout, so ``Generator(1, +1)``
is sigma_1 and exchanges strands 1 and 2.
"""

from __future__ import annotations

import random
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DifferentComponents, NothingToSlide

Framing = Optional[int]
UNTWISTED: Framing = None


@dataclass(frozen=True)
class Generator:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"generator sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> Generator:
        return Generator(self.index, -self.sign)

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.index}"


def _as_generator(g) -> Generator:
    if isinstance(g, Generator):
        return g
    g = int(g)
    if g == 0:
        raise ValueError("0 is not a generator")
    return Generator(abs(g), 1 if g > 0 else -1)


@dataclass(frozen=True)
class FramedBraid:
    """Immutable framed braid on `strands` strands.

    `word` accepts Generators or signed ints (``-2`` is sigma_2 inverse).
    """

    strands: int
    word: tuple[Generator, ...] = ()
    framing: tuple[Framing, ...] = field(default=())

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        word = tuple(_as_generator(g) for g in self.word)
        framing = tuple(self.framing) if self.framing else (UNTWISTED,) * self.strands
        for g in word:
            if g.index >= self.strands:
                raise ValueError(f"generator {g} out of range for {self.strands} strands")
        if len(framing) != self.strands:
            raise ValueError(f"framing has {len(framing)} entries for {self.strands} strands")
        for v in framing:
            if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 0):
                raise ValueError(f"framing values must be None or integers >= 0, got {v!r}")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "framing", framing)


@dataclass(frozen=True)
class ComponentFraming:
    total: int
    untwisted_only: bool


@dataclass(frozen=True)
class ClosureSummary:
    components: tuple[tuple[int, ...], ...]
    framings: tuple[ComponentFraming, ...]

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def total(self) -> int:
        return sum(f.total for f in self.framings)

    def framing_multiset(self) -> Counter:
        return Counter(self.framings)


def permutation_of(braid: FramedBraid) -> tuple[int, ...]:
    """Image of each strand: ``perm[i - 1]`` is where strand i ends up.

    Generator signs are ignored; sigma_i and its inverse both swap i, i+1.
    """
    pos = list(range(braid.strands + 1))  # pos[start] = current position
    where = list(range(braid.strands + 1))  # where[position] = start strand
    for g in braid.word:
        i = g.index
        a, b = where[i], where[i + 1]
        where[i], where[i + 1] = b, a
        pos[a], pos[b] = i + 1, i
    return tuple(pos[1:])


def closure(braid: FramedBraid) -> ClosureSummary:
    """Components of the closed braid and the framing each one carries."""
    perm = permutation_of(braid)
    seen = [False] * (braid.strands + 1)
    components, framings = [], []
    for start in range(1, braid.strands + 1):
        if seen[start]:
            continue
        cycle, k = [], start
        while not seen[k]:
            seen[k] = True
            cycle.append(k)
            k = perm[k - 1]
        values = [braid.framing[k - 1] for k in cycle]
        twisted = [v for v in values if v is not None]
        components.append(tuple(cycle))
        framings.append(ComponentFraming(sum(twisted), not twisted))
    return ClosureSummary(tuple(components), tuple(framings))


def total_framing(braid: FramedBraid) -> int:
    """Framing integer M: total half-twists over twisted strands."""
    return sum(v for v in braid.framing if v is not None)


def check_orientable(braid: FramedBraid, strict: bool = False) -> bool:
    """True when M is even. In strict mode an odd M also emits a warning."""
    ok = total_framing(braid) % 2 == 0
    if strict and not ok:
        warnings.warn(f"framing integer {total_framing(braid)} is odd; the ribbon is not orientable")
    return ok


def conjugate(braid: FramedBraid, g: Generator | int) -> FramedBraid:
    """g . word . g^-1, with the framing carried along through g's crossing."""
    g = _as_generator(g)
    if g.index >= braid.strands:
        raise ValueError(f"generator {g} out of range for {braid.strands} strands")
    framing = list(braid.framing)
    i = g.index - 1
    framing[i], framing[i + 1] = framing[i + 1], framing[i]
    return FramedBraid(braid.strands, (g, *braid.word, g.inverse()), tuple(framing))


def stabilize(braid: FramedBraid, sign: int = 1) -> FramedBraid:
    """Add an untwisted strand and join it on with sigma_s^sign."""
    s = braid.strands
    return FramedBraid(s + 1, (*braid.word, Generator(s, sign)), (*braid.framing, UNTWISTED))


def slide_twist(braid: FramedBraid, source: int, target: int) -> FramedBraid:
    """Move one half-twist from strand `source` to strand `target` (1-based).

    Both strands must close up into the same component.
    """
    summary = closure(braid)
    comp_of = {k: c for c, comp in enumerate(summary.components) for k in comp}
    if comp_of[source] != comp_of[target]:
        raise DifferentComponents(f"strands {source} and {target} lie in different components")
    have = braid.framing[source - 1]
    if not have:
        raise NothingToSlide(f"strand {source} carries no half-twist")
    framing = list(braid.framing)
    framing[source - 1] = have - 1
    framing[target - 1] = (framing[target - 1] or 0) + 1
    return FramedBraid(braid.strands, braid.word, tuple(framing))


def insert_cancelling_pair(braid: FramedBraid, position: int, index: int) -> FramedBraid:
    """Insert sigma_index . sigma_index^-1 before word position `position`."""
    g = Generator(index, 1)
    word = list(braid.word)
    word[position:position] = [g, g.inverse()]
    return FramedBraid(braid.strands, tuple(word), braid.framing)


def torus_braid(framing: Sequence[Framing]) -> FramedBraid:
    """(sigma_1 ... sigma_{s-1})^(s+1) with the given framing.

    Closes to a single component (the T(s, s+1) torus knot); for two strands
    this is sigma_1^3, the trefoil.
    """
    s = len(framing)
    word = tuple(range(1, s)) * (s + 1)
    return FramedBraid(s, word, tuple(framing))


def random_move(braid: FramedBraid, rng: random.Random) -> FramedBraid:
    """One equivalence move: conjugation, stabilization or a twist slide."""
    kind = rng.random()
    if kind < 0.35 and braid.strands > 1:
        return conjugate(braid, Generator(rng.randrange(1, braid.strands), rng.choice((1, -1))))
    if kind < 0.5:
        return stabilize(braid, rng.choice((1, -1)))
    summary = closure(braid)
    donors = [k for k, v in enumerate(braid.framing, 1) if v]
    rng.shuffle(donors)
    for source in donors:
        comp = next(c for c in summary.components if source in c)
        if len(comp) > 1:
            target = rng.choice([k for k in comp if k != source])
            return slide_twist(braid, source, target)
    if braid.strands > 1:
        return conjugate(braid, Generator(rng.randrange(1, braid.strands), rng.choice((1, -1))))
    return stabilize(braid, rng.choice((1, -1)))


def obfuscate(braid: FramedBraid, seed: int, moves: int) -> FramedBraid:
    """Apply `moves` seeded random equivalence moves.

    The closure's component count, per-component framing totals and M are
    unchanged; the strand count, word and twist distribution are not.
    """
    if moves < 0:
        raise ValueError("moves must be >= 0")
    rng = random.Random(seed)
    for _ in range(moves):
        braid = random_move(braid, rng)
    return braid


def apply_moves(braid: FramedBraid, moves: Iterable) -> FramedBraid:
    """Apply explicit moves: ("conj", g) | ("stab", sign) | ("slide", src, dst)."""
    for move in moves:
        name, *args = move
        if name == "conj":
            braid = conjugate(braid, *args)
        elif name == "stab":
            braid = stabilize(braid, *args)
        elif name == "slide":
            braid = slide_twist(braid, *args)
        else:
            raise ValueError(f"unknown move {name!r}")
    return braid
