"""Words over smearing segments, free-group reduction, paths, loops,
localization in double cones and path-frame systems.

A word stores letters in traversal order (first segment first); the group
product qp "q after p" therefore concatenates p's letters before q's.
Each letter is a segment plus an inversion flag, with the opposite segment
and the inverted letter identified as the same group element.  Letter
identity for cancellation is exact (tag tokens plus bit-exact vertices);
reduction is a single stack pass and is confluent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .geometry import DoubleCone, FourVector, PoincareElement, ball_in_cone
from .simplex import AffineSimplex, SupportBall, TestFunctionTag, support_ball

_GENERATOR_IDS: dict = {}


class WordError(ValueError):
    """Malformed word/path data (endpoint or tag mismatch, bad letters)."""


def _generator_id(key: tuple) -> int:
    gid = _GENERATOR_IDS.get(key)
    if gid is None:
        gid = len(_GENERATOR_IDS) + 1
        _GENERATOR_IDS[key] = gid
    return gid


@dataclass(frozen=True)
class Letter:
    """A word letter: a 1-simplex traversed forward or, when inverted,
    backward.  (b, inverted) and (opposite(b), not inverted) denote the
    same group element and share a signed generator id."""

    simplex: AffineSimplex
    inverted: bool = False
    sid: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.simplex.n != 1:
            raise WordError("letters must be 1-simplices")
        v0, v1 = self.simplex.vertices
        k0, k1 = tuple(v0.components), tuple(v1.components)
        if k0 == k1:
            sid = 0  # degenerate letter e_a, the group identity
        else:
            flipped = k1 < k0
            lo, hi = (k1, k0) if flipped else (k0, k1)
            gid = _generator_id((self.simplex.tag.key(), lo, hi))
            sid = -gid if (flipped != self.inverted) else gid
        object.__setattr__(self, "sid", sid)

    @property
    def start(self) -> FourVector:
        return self.simplex.vertices[1 if self.inverted else 0]

    @property
    def end(self) -> FourVector:
        return self.simplex.vertices[0 if self.inverted else 1]

    @property
    def tag(self) -> TestFunctionTag:
        return self.simplex.tag

    def inverse(self) -> "Letter":
        return Letter(self.simplex, not self.inverted)

    def traversed_simplex(self) -> AffineSimplex:
        """The segment actually traversed (opposite of the stored simplex
        when inverted)."""
        return self.simplex.opposite() if self.inverted else self.simplex

    def cancels(self, other: "Letter") -> bool:
        return self.sid != 0 and self.sid == -other.sid

    def to_json(self) -> dict:
        return {"simplex": self.simplex.to_json(), "inverted": self.inverted}

    @staticmethod
    def from_json(data: dict) -> "Letter":
        return Letter(AffineSimplex.from_json(data["simplex"]), bool(data["inverted"]))


def _reduce_letters(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    push = stack.append
    pop = stack.pop
    for let in letters:
        s = let.sid
        if s == 0:
            continue
        if stack and stack[-1].sid == -s:
            pop()
        else:
            push(let)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A finite word over segment letters; the empty word is the identity."""

    letters: Tuple[Letter, ...] = ()

    @staticmethod
    def identity() -> "Word":
        return Word(())

    @staticmethod
    def from_simplices(simplices: Iterable[AffineSimplex]) -> "Word":
        return Word(tuple(Letter(s) for s in simplices))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        """Group product self * other = "self after other"."""
        return Word(other.letters + self.letters)

    def reduce(self) -> "Word":
        red = _reduce_letters(self.letters)
        return Path(red) if isinstance(self, Path) else Word(red)

    def letterwise_eq(self, other: "Word") -> bool:
        """Equality of the letter sequences as group generators (identifies
        an inverted letter with its opposite segment)."""
        a = tuple(l.sid for l in self.letters)
        b = tuple(l.sid for l in other.letters)
        return a == b

    def is_reduced(self) -> bool:
        return self.letters == _reduce_letters(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    # the opposite word coincides with the group inverse
    opposite = inverse

    def is_identity(self) -> bool:
        return not _reduce_letters(self.letters)

    def group_eq(self, other: "Word") -> bool:
        return _reduce_letters(self.letters) == _reduce_letters(other.letters)

    def is_path(self) -> bool:
        lets = self.letters
        if not lets:
            return True
        tag = lets[0].tag
        for a, b in zip(lets, lets[1:]):
            if b.tag != tag or b.start != a.end:
                return False
        return True

    @property
    def start(self) -> Optional[AffineSimplex]:
        """The starting 0-simplex of a nonempty path."""
        if not self.letters:
            return None
        l = self.letters[0]
        return AffineSimplex((l.start,), l.tag)

    @property
    def end(self) -> Optional[AffineSimplex]:
        if not self.letters:
            return None
        l = self.letters[-1]
        return AffineSimplex((l.end,), l.tag)

    def support(self) -> Tuple[SupportBall, ...]:
        """Support balls of the letters of the reduced word."""
        return tuple(support_ball(l.traversed_simplex()) for l in _reduce_letters(self.letters))

    def to_json(self) -> dict:
        return {"kind": "word", "letters": [l.to_json() for l in self.letters]}

    @staticmethod
    def from_json(data: dict) -> "Word":
        letters = tuple(Letter.from_json(l) for l in data["letters"])
        kind = data.get("kind", "word")
        if kind == "path":
            return Path(letters)
        return Word(letters)


def reduce(w: Word) -> Word:
    return w.reduce()


def support(w: Word) -> Tuple[SupportBall, ...]:
    return w.support()


@dataclass(frozen=True)
class Path(Word):
    """A word whose consecutive letters share endpoints and tag."""

    def __post_init__(self):
        if not self.is_path():
            raise WordError("letters do not compose to a path")

    def reversed(self) -> "Path":
        return Path(tuple(l.inverse() for l in reversed(self.letters)))

    def is_loop(self) -> bool:
        return not self.letters or self.start == self.end

    def to_json(self) -> dict:
        return {"kind": "path", "letters": [l.to_json() for l in self.letters]}


def compose(q: Path, p: Path) -> Path:
    """The path "q after p"; requires end(p) = start(q) and equal tags."""
    if not p.letters:
        return q
    if not q.letters:
        return p
    if p.letters[0].tag != q.letters[0].tag:
        raise WordError("paths carry different tags")
    if p.end != q.start:
        raise WordError("path endpoints do not match")
    return Path(p.letters + q.letters)


@dataclass(frozen=True)
class LoopWord:
    """A product of loops, with the factorization stored as certification
    of membership in the group generated by loops."""

    factors: Tuple[Path, ...]

    def __post_init__(self):
        for p in self.factors:
            if not p.is_loop():
                raise WordError("every factor must be a loop")

    @staticmethod
    def of(*factors: Path) -> "LoopWord":
        return LoopWord(tuple(factors))

    def word(self) -> Word:
        letters: Tuple[Letter, ...] = ()
        for p in self.factors:
            letters = letters + p.letters
        return Word(letters)

    def inverse(self) -> "LoopWord":
        return LoopWord(tuple(p.reversed() for p in reversed(self.factors)))

    def to_json(self) -> dict:
        return {"kind": "loop", "factors": [p.to_json() for p in self.factors]}

    @staticmethod
    def from_json(data: dict) -> "LoopWord":
        return LoopWord(tuple(
            Path(tuple(Letter.from_json(l) for l in p["letters"])) for p in data["factors"]
        ))


def path_boundary(c: AffineSimplex) -> LoopWord:
    """The loop around a triangle: traverse face 2, then face 0, then the
    reverse of face 1; based at the first vertex."""
    if c.n != 2:
        raise WordError("path boundary is defined for 2-simplices")
    loop = Path((
        Letter(c.face(2)),
        Letter(c.face(0)),
        Letter(c.face(1), inverted=True),
    ))
    return LoopWord((loop,))


def is_local(w: Word, o: DoubleCone) -> Optional[bool]:
    """Containment of the reduced word's support in the cone: True/False
    certified, None undecided (treated as False by causality callers)."""
    undecided = False
    for ball in w.support():
        if all(ball_in_cone(v, ball.eps, o) for v in ball.hull):
            continue
        if any(not o.contains(v) for v in ball.hull):
            return False
        undecided = True
    return None if undecided else True


def euclidean_frame(a: AffineSimplex, a_prime: AffineSimplex) -> Path:
    """The straight single-segment path from a to a'; the trivial loop when
    the points coincide."""
    if a.n != 0 or a_prime.n != 0:
        raise WordError("frame endpoints must be 0-simplices")
    if a.tag != a_prime.tag:
        raise WordError("frame endpoints carry different tags")
    seg = AffineSimplex((a.vertices[0], a_prime.vertices[0]), a.tag)
    return Path((Letter(seg),))


@dataclass(frozen=True)
class PathFrameSystem:
    """For each pole a, a path into a from every point of its component.
    The Euclidean system (straight segments) is covariant by construction;
    custom rules should be covariant and are asserted so in tests."""

    rule: Callable[[AffineSimplex, AffineSimplex], Path]
    kind: str = "custom"

    @staticmethod
    def euclidean() -> "PathFrameSystem":
        return PathFrameSystem(rule=lambda pole, target: euclidean_frame(target, pole),
                               kind="euclidean")

    def path(self, pole: AffineSimplex, target: AffineSimplex) -> Path:
        """The frame path target -> pole."""
        if pole.tag != target.tag:
            raise WordError("pole and target live in different components")
        p = self.rule(pole, target)
        if p.letters and (p.start != target or p.end != pole):
            raise WordError("frame rule returned a path with wrong endpoints")
        return p


def poincare_act_letter(P: PoincareElement, l: Letter) -> Letter:
    from .simplex import poincare_act

    return Letter(poincare_act(P, l.simplex), l.inverted)


def poincare_act_word(P: PoincareElement, w: Word) -> Word:
    letters = tuple(poincare_act_letter(P, l) for l in w.letters)
    if isinstance(w, Path):
        return Path(letters)
    return Word(letters)


def poincare_act_loop(P: PoincareElement, lw: LoopWord) -> LoopWord:
    return LoopWord(tuple(poincare_act_word(P, p) for p in lw.factors))


def brute_force_reduce(w: Word) -> Word:
    """Independent normal-form oracle: repeatedly delete the leftmost
    degenerate letter or cancelling adjacent pair until none remains."""
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        for i, let in enumerate(letters):
            if let.sid == 0:
                del letters[i]
                changed = True
                break
            if i + 1 < len(letters) and let.cancels(letters[i + 1]):
                del letters[i:i + 2]
                changed = True
                break
    return Word(tuple(letters))
