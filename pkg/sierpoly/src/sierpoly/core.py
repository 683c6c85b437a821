"""Alphabet, polygon parameters, addresses, gluing arithmetic and the dihedral group.

Addresses are tuples of letters in ``range(r)``. The LAST letter is the
coarsest copy index: a vertex ``v`` of the ``i``-th copy of the level-(k-1)
graph is written ``v + (i,)`` in the level-k graph.

Two gluing forms identify addresses at level ``l``::

    ((i + f) % r)**(l-1) . i   ==   ((i + 1 + 2f) % r)**(l-1) . (i + 1)

followed by any common suffix (identifications made at level ``l`` persist
inside every deeper copy).
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass
from typing import NamedTuple, overload

from . import conventions
from .errors import InvalidSideCount, MalformedAddress, MultipleOfFour, SequenceParseError

Address = tuple[int, ...]


# ---------------------------------------------------------------------------
# Polygon parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolygonSpec:
    """Side count ``r`` with its gluing offsets ``f`` and ``ftilde = 2f``."""

    r: int
    f: int
    ftilde: int

    def __post_init__(self) -> None:
        if self.r < 3:
            raise InvalidSideCount(self.r)
        if self.r % 4 == 0:
            raise MultipleOfFour(self.r)
        if not (4 * self.f > self.r >= 4 * (self.f - 1)) or self.ftilde != 2 * self.f:
            raise ValueError(f"offsets f={self.f}, ftilde={self.ftilde} do not match r={self.r}")

    @property
    def alphabet(self) -> range:
        return range(self.r)

    @property
    def is_even(self) -> bool:
        return self.r % 2 == 0

    def up(self, c: int) -> int:
        """Corner letter of copy ``c`` glued towards copy ``c + 1``."""
        return (c + self.f) % self.r

    def down(self, c: int) -> int:
        """Corner letter of copy ``c`` glued towards copy ``c - 1``."""
        return (c + self.ftilde) % self.r


def make_spec(r: int) -> PolygonSpec:
    """Build the parameters for an ``r``-gon; ``f`` is the least ``i`` with ``4i > r``."""
    if r < 3:
        raise InvalidSideCount(r)
    if r % 4 == 0:
        raise MultipleOfFour(r)
    f = r // 4 + 1
    return PolygonSpec(r=r, f=f, ftilde=2 * f)


# ---------------------------------------------------------------------------
# Addresses
# ---------------------------------------------------------------------------


def check_address(spec: PolygonSpec, a: Address, length: int | None = None) -> Address:
    if not a:
        raise MalformedAddress(str(a), "empty address")
    if length is not None and len(a) != length:
        raise MalformedAddress(format_word(spec, a), f"expected length {length}, got {len(a)}")
    for x in a:
        if not 0 <= x < spec.r:
            raise MalformedAddress(format_word(spec, a), f"letter {x} outside 0..{spec.r - 1}")
    return a


def format_word(spec: PolygonSpec | int, word: Address) -> str:
    r = spec if isinstance(spec, int) else spec.r
    if r <= conventions.DIGIT_ALPHABET_MAX:
        return "".join(str(x) for x in word)
    return "[" + ",".join(str(x) for x in word) + "]"


def parse_address(spec: PolygonSpec, text: str, length: int | None = None) -> Address:
    """Parse ``"004"`` (r <= 10) or ``"[3,11,2]"`` (r > 10)."""
    text = text.strip()
    try:
        word, end = _scan_word(text, 0, spec.r)
    except SequenceParseError as exc:
        raise MalformedAddress(text, exc.reason) from None
    if end != len(text):
        raise MalformedAddress(text, f"unexpected {text[end]!r} at position {end}")
    return check_address(spec, word, length)


class VertexId(NamedTuple):
    """Lexicographically least member of a gluing class, plus the class size."""

    canonical: Address
    class_size: int


def gluing_partner(spec: PolygonSpec, a: Address) -> Address | None:
    """Return the address identified with ``a``, or None when ``a`` is unglued."""
    r = spec.r
    c = a[0]
    run = 1
    while run < len(a) and a[run] == c:
        run += 1
    if run == len(a):
        return None
    b = a[run]
    offset = (c - b) % r
    if offset == spec.f:
        b2 = (b + 1) % r
        letter = (b2 + spec.ftilde) % r
    elif offset == spec.ftilde:
        b2 = (b - 1) % r
        letter = (b2 + spec.f) % r
    else:
        return None
    return (letter,) * run + (b2,) + a[run + 1 :]


def canonical(spec: PolygonSpec, a: Address) -> VertexId:
    partner = gluing_partner(spec, a)
    if partner is None:
        return VertexId(a, 1)
    return VertexId(min(a, partner), 2)


def members(spec: PolygonSpec, v: VertexId | Address) -> tuple[Address, ...]:
    """All addresses of the class of ``v`` (one or two)."""
    a = v.canonical if isinstance(v, VertexId) else v
    partner = gluing_partner(spec, a)
    return (a,) if partner is None else tuple(sorted((a, partner)))


def corner(letter: int, k: int) -> Address:
    return (letter,) * k


# ---------------------------------------------------------------------------
# Eventually periodic sequences
# ---------------------------------------------------------------------------


def _primitive_root(word: Address) -> Address:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class BasepointSeq:
    """``preperiod . period^inf`` with a minimal preperiod and a primitive period."""

    preperiod: Address
    period: Address

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")

    @classmethod
    def of(cls, preperiod: Address, period: Address) -> BasepointSeq:
        pre = tuple(preperiod)
        per = _primitive_root(tuple(period))
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        return cls(pre, per)

    @classmethod
    def constant(cls, j: int, preperiod: Address = ()) -> BasepointSeq:
        return cls.of(preperiod, (j,))

    def normalized(self) -> BasepointSeq:
        return BasepointSeq.of(self.preperiod, self.period)

    def letter(self, i: int) -> int:
        """The ``i``-th letter, 1-based."""
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    def prefix(self, k: int) -> Address:
        return tuple(self.letter(i) for i in range(1, k + 1))

    def letters(self) -> Iterator[int]:
        i = 1
        while True:
            yield self.letter(i)
            i += 1

    @property
    def is_eventually_constant(self) -> bool:
        return len(self.period) == 1

    @property
    def tail_letter(self) -> int:
        """``j`` for ``w . j^inf``."""
        if not self.is_eventually_constant:
            raise ValueError(f"{self} is not eventually constant")
        return self.period[0]

    def text(self, r: int) -> str:
        return f"{format_word(r, self.preperiod)}({format_word(r, self.period)})*"


def parse_sequence(spec: PolygonSpec, text: str) -> BasepointSeq:
    """Parse ``WORD "(" WORD ")*"``; ``WORD`` followed by ``LETTER*`` is accepted too.

    >>> parse_sequence(make_spec(6), "1(54)*")
    BasepointSeq(preperiod=(1,), period=(5, 4))
    """
    text = text.strip()
    pre, pos = _scan_word(text, 0, spec.r, allow_empty=True)
    if pos < len(text) and text[pos] == "(":
        period, pos = _scan_word(text, pos + 1, spec.r)
        if pos >= len(text) or text[pos] != ")":
            raise SequenceParseError(text, pos, "expected ')'")
        pos += 1
    elif pos < len(text) and text[pos] == "*" and pre:
        # "14*" is shorthand for "1(4)*"
        pre, period = pre[:-1], pre[-1:]
    else:
        raise SequenceParseError(text, pos, "expected '(' opening the period")
    if pos >= len(text) or text[pos] != "*":
        raise SequenceParseError(text, pos, "expected '*' after the period")
    pos += 1
    if pos != len(text):
        raise SequenceParseError(text, pos, "trailing characters")
    for x in pre + period:
        if x >= spec.r:
            raise SequenceParseError(text, text.find(str(x)), f"letter {x} outside 0..{spec.r - 1}")
    return BasepointSeq.of(pre, period)


def _scan_word(text: str, pos: int, r: int, allow_empty: bool = False) -> tuple[Address, int]:
    if r > conventions.DIGIT_ALPHABET_MAX:
        if pos < len(text) and text[pos] == "[":
            close = text.find("]", pos)
            if close < 0:
                raise SequenceParseError(text, pos, "unclosed '['")
            body = text[pos + 1 : close]
            try:
                word = tuple(int(part) for part in body.split(","))
            except ValueError:
                raise SequenceParseError(text, pos + 1, "expected comma-separated integers") from None
            return word, close + 1
        if allow_empty:
            return (), pos
        raise SequenceParseError(text, pos, "expected '[' starting a word")
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start and not allow_empty:
        raise SequenceParseError(text, pos, "expected a digit")
    return tuple(int(ch) for ch in text[start:pos]), pos


def prefix(xi: BasepointSeq, k: int) -> Address:
    if k < 1:
        raise ValueError("prefix length must be at least 1")
    return xi.prefix(k)


def cofinal(xi: BasepointSeq, eta: BasepointSeq) -> tuple[bool, int | None]:
    """Whether ``xi`` and ``eta`` agree from some index on, with the least such index."""
    settle = max(len(xi.preperiod), len(eta.preperiod))
    window = math.lcm(len(xi.period), len(eta.period))
    for i in range(settle + 1, settle + window + 1):
        if xi.letter(i) != eta.letter(i):
            return False, None
    n = 1
    for i in range(settle, 0, -1):
        if xi.letter(i) != eta.letter(i):
            n = i + 1
            break
    return True, n


def grows_away_from(xi: BasepointSeq) -> frozenset[int]:
    """Letters occurring infinitely often in ``xi``."""
    return frozenset(xi.period)


# ---------------------------------------------------------------------------
# Dihedral group
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DihedralElement:
    """``x -> shift + x`` (rotation) or ``x -> shift - x`` (reflection), mod ``r``."""

    r: int
    shift: int
    reflect: bool = False

    def __call__(self, x: int) -> int:
        return (self.shift - x) % self.r if self.reflect else (self.shift + x) % self.r

    def compose(self, other: DihedralElement) -> DihedralElement:
        """``self after other``."""
        sign = -1 if self.reflect else 1
        return DihedralElement(
            self.r, (self.shift + sign * other.shift) % self.r, self.reflect != other.reflect
        )

    def inverse(self) -> DihedralElement:
        if self.reflect:
            return self
        return DihedralElement(self.r, (-self.shift) % self.r, False)

    @property
    def label(self) -> str:
        return f"{'s' if self.reflect else 'r'}{self.shift}"


def identity(spec: PolygonSpec) -> DihedralElement:
    return DihedralElement(spec.r, 0, False)


def dihedral_group(spec: PolygonSpec) -> tuple[DihedralElement, ...]:
    """Rotations first, then reflections, each by increasing shift."""
    return tuple(
        DihedralElement(spec.r, shift, reflect)
        for reflect in (False, True)
        for shift in range(spec.r)
    )


@overload
def apply_dihedral(sigma: DihedralElement, x: int) -> int: ...
@overload
def apply_dihedral(sigma: DihedralElement, x: Address) -> Address: ...
@overload
def apply_dihedral(sigma: DihedralElement, x: BasepointSeq) -> BasepointSeq: ...


def apply_dihedral(sigma, x):
    if isinstance(x, BasepointSeq):
        return BasepointSeq.of(
            tuple(sigma(y) for y in x.preperiod), tuple(sigma(y) for y in x.period)
        )
    if isinstance(x, tuple):
        return tuple(sigma(y) for y in x)
    return sigma(x)
