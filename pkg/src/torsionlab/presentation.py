"""Free-group words, Fox calculus, and the surgery presentations.

Generators are named by strings: ``x1 .. x4`` for group generators and
``r1 .. r4`` for the auxiliary letters standing for relators in the free
product used to build the top differential.  The meridian is ``x3`` and, in
the ``1/q`` families, the second meridian-like generator is ``x4``.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import UnsupportedFamily

__all__ = [
    "Family",
    "GroupWord",
    "GroupRingElement",
    "SurgeryPresentation",
    "WWordReport",
    "fox_derivative",
    "build_presentation",
    "symbolic_differentials",
    "validate_w_word",
    "parse_word",
]

Letter = tuple[str, int]


class Family(str, enum.Enum):
    FIGURE_EIGHT_P = "FigureEight-p/1"
    FIGURE_EIGHT_Q = "FigureEight-1/q"
    FIVE_TWO_Q = "FiveTwo-1/q"

    @property
    def knot(self) -> str:
        return "52" if self is Family.FIVE_TWO_Q else "41"

    @property
    def parameter_name(self) -> str:
        return "p" if self is Family.FIGURE_EIGHT_P else "q"

    def surgery(self, parameter: int) -> str:
        return f"{parameter}/1" if self is Family.FIGURE_EIGHT_P else f"1/{parameter}"


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, e in letters:
        if out and out[-1][0] == name and out[-1][1] == -e:
            out.pop()
        else:
            out.append((name, e))
    return tuple(out)


_TOKEN = re.compile(r"^([A-Za-z]+\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> "GroupWord":
    """Parse ``"x1 x2^-1 x3^5"``; ``"1"`` or ``""`` is the empty word."""
    letters: list[Letter] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        e = int(m.group(2)) if m.group(2) is not None else 1
        letters += [(m.group(1), 1 if e > 0 else -1)] * abs(e)
    return GroupWord(tuple(letters))


@dataclass(frozen=True, order=True)
class GroupWord:
    """A freely reduced word; letters are ``(generator name, +-1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce((str(n), int(e)) for n, e in self.letters))
        for _, e in self.letters:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +-1")

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "GroupWord":
        return cls(((name, 1 if power > 0 else -1),) * abs(power))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        return parse_word(text)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "GroupWord":
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.letters * abs(n))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> set[str]:
        return {n for n, _ in self.letters}

    def substitute(self, mapping: Mapping[str, "GroupWord"]) -> "GroupWord":
        out: list[Letter] = []
        for n, e in self.letters:
            if n in mapping:
                out.extend((mapping[n] if e > 0 else mapping[n].inverse()).letters)
            else:
                out.append((n, e))
        return GroupWord(tuple(out))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            n, e = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (n, e):
                j += 1
            k = (j - i) * e
            parts.append(n if k == 1 else f"{n}^{k}")
            i = j
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GroupWord({str(self)!r})"


def commutator(a: GroupWord, b: GroupWord) -> GroupWord:
    return a * b * a.inverse() * b.inverse()


@dataclass(frozen=True)
class GroupRingElement:
    """Finite integer combination of words, stored sorted with no zero terms."""

    terms: tuple[tuple[GroupWord, int], ...] = ()

    def __post_init__(self):
        acc: dict[GroupWord, int] = {}
        for w, c in self.terms:
            acc[w] = acc.get(w, 0) + int(c)
        object.__setattr__(self, "terms", tuple(sorted((w, c) for w, c in acc.items() if c)))

    @classmethod
    def of(cls, word: GroupWord, coeff: int = 1) -> "GroupRingElement":
        return cls(((word, coeff),))

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls.of(GroupWord())

    def as_dict(self) -> dict[GroupWord, int]:
        return dict(self.terms)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.terms + other.terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(tuple((w, c * other) for w, c in self.terms))
        if isinstance(other, GroupWord):
            other = GroupRingElement.of(other)
        return GroupRingElement(
            tuple((u * v, a * b) for u, a in self.terms for v, b in other.terms)
        )

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        if isinstance(other, GroupWord):
            return GroupRingElement.of(other) * self
        return NotImplemented

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def substitute(self, mapping: Mapping[str, GroupWord]) -> "GroupRingElement":
        return GroupRingElement(tuple((w.substitute(mapping), c) for w, c in self.terms))

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for w, c in self.terms:
            body = str(w)
            if c == 1:
                out.append(f"+ {body}")
            elif c == -1:
                out.append(f"- {body}")
            else:
                out.append(f"{'+' if c > 0 else '-'} {abs(c)}*{body}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def fox_derivative(w: GroupWord, gen: str) -> GroupRingElement:
    """Left Fox derivative of ``w`` with respect to the generator ``gen``."""
    terms: list[tuple[GroupWord, int]] = []
    letters = w.letters
    for i, (n, e) in enumerate(letters):
        if n != gen:
            continue
        if e > 0:
            terms.append((GroupWord(letters[:i]), 1))
        else:
            terms.append((GroupWord(letters[: i + 1]), -1))
    return GroupRingElement(tuple(terms))


@dataclass(frozen=True)
class SurgeryPresentation:
    family: Family
    parameter: int
    generators: tuple[str, ...]
    relators: tuple[GroupWord, ...]
    w_word: GroupWord
    w_source: str

    @property
    def g(self) -> int:
        return len(self.generators)

    @property
    def relator_letters(self) -> tuple[str, ...]:
        return tuple(f"r{j + 1}" for j in range(self.g))

    def psi(self) -> dict[str, GroupWord]:
        """Substitution sending each relator letter to its relator."""
        return dict(zip(self.relator_letters, self.relators))

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "parameter": self.parameter,
            "generators": list(self.generators),
            "relators": [str(r) for r in self.relators],
            "w_word": str(self.w_word),
            "w_source": self.w_source,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


X1, X2, X3, X4 = (GroupWord.gen(f"x{i}") for i in range(1, 5))
R1, R2, R3, R4 = (GroupWord.gen(f"r{i}") for i in range(1, 5))


def _conj(u: GroupWord, v: GroupWord) -> GroupWord:
    return u * v * u.inverse()


def _w_head(u1: GroupWord, u2: GroupWord, u3: GroupWord) -> GroupWord:
    # rho1 . u1 rho2 u1^-1 . u2 rho1^-1 u2^-1 . u3 rho2^-1 u3^-1
    return R1 * _conj(u1, R2) * _conj(u2, R1.inverse()) * _conj(u3, R2.inverse())


def _w_tail_with_x4() -> GroupWord:
    # rho4^-1 . x4 rho3 x4^-1 . rho4 . rho3^-1
    return R4.inverse() * _conj(X4, R3) * R4 * R3.inverse()


def build_presentation(family: Family | str, parameter: int) -> SurgeryPresentation:
    family = Family(family)
    parameter = int(parameter)
    if family is Family.FIGURE_EIGHT_P:
        c = commutator(X1, X2)
        rels = (
            X3 * X1 * X2 * X3.inverse() * X1.inverse(),
            X3 * X2 * X1 * X2 * X3.inverse() * X2.inverse(),
            c * X3 ** parameter,
        )
        head = _w_head(X1, X1 * X2 * X1.inverse(), c)
        # the three-generator complex has no rho4; rho3 x3 rho3^-1 x3^-1 closes the identity
        w = head * R3 * X3 * R3.inverse() * X3.inverse()
        return SurgeryPresentation(family, parameter, ("x1", "x2", "x3"), rels, w, "reconstructed")
    if parameter == 0:
        raise UnsupportedFamily("the 1/q families need q != 0")
    if family is Family.FIGURE_EIGHT_Q:
        c = commutator(X1, X2)
        rels = (
            X3 * X1 * X2 * X3.inverse() * X1.inverse(),
            X3 * X2 * X1 * X2 * X3.inverse() * X2.inverse(),
            X3 * c ** parameter,
            X4 * c.inverse(),
        )
        w = _w_head(X1, X1 * X2 * X1.inverse(), c) * _w_tail_with_x4()
        return SurgeryPresentation(family, parameter, ("x1", "x2", "x3", "x4"), rels, w, "printed")
    if family is Family.FIVE_TWO_Q:
        sq = X1 ** 2
        d = commutator(sq, X2.inverse())
        rels = (
            X3 * sq * X2.inverse() * X3.inverse() * sq.inverse(),
            X3 * X2.inverse() * X3.inverse() * X1.inverse() * X2,
            X3 * d ** parameter,
            X4 * d.inverse(),
        )
        w = _w_head(sq, sq * X2.inverse() * X1.inverse(), d) * _w_tail_with_x4()
        return SurgeryPresentation(family, parameter, ("x1", "x2", "x3", "x4"), rels, w, "printed")
    raise UnsupportedFamily(f"unsupported family {family!r}")  # pragma: no cover


@dataclass(frozen=True)
class SymbolicDifferentials:
    """Group-ring matrices of the three differentials.

    ``delta1[j]`` is ``1 - x_j``; ``delta2[i][j]`` is the derivative of
    relator j with respect to generator i; ``delta3[i]`` is the image under
    relator substitution of the derivative of W with respect to ``r_i``.
    """

    delta1: tuple[GroupRingElement, ...]
    delta2: tuple[tuple[GroupRingElement, ...], ...]
    delta3: tuple[GroupRingElement, ...]


def symbolic_differentials(p: SurgeryPresentation) -> SymbolicDifferentials:
    one = GroupRingElement.one()
    d1 = tuple(one - GroupRingElement.of(GroupWord.gen(x)) for x in p.generators)
    d2 = tuple(tuple(fox_derivative(r, x) for r in p.relators) for x in p.generators)
    psi = p.psi()
    d3 = tuple(fox_derivative(p.w_word, rl).substitute(psi) for rl in p.relator_letters)
    return SymbolicDifferentials(d1, d2, d3)


@dataclass(frozen=True)
class WWordReport:
    family: Family
    parameter: int
    source: str
    reduces_to_identity: bool
    residual_word: GroupWord

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "parameter": self.parameter,
            "source": self.source,
            "reduces_to_identity": self.reduces_to_identity,
            "residual_word": str(self.residual_word),
        }


def validate_w_word(p: SurgeryPresentation) -> WWordReport:
    """Check that substituting relators into W gives the empty word."""
    image = p.w_word.substitute(p.psi())
    return WWordReport(p.family, p.parameter, p.w_source, image.is_identity, image)
