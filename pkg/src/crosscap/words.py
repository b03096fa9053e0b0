"""Formal twist / crosscap-slide words and their action on mod-2 homology.

Letters, whitespace separated, with an optional integer exponent:

    t_{a_3}   t_{c_2}^{-1}   t_{d_4}   Y_{3,1}   Y_{alpha_{1,3,4},alpha_{1,3,4,5}}

The rightmost letter of a word acts first.  Twists act as transvections
about the class of their circle; every crosscap slide (Y letter) acts as the
identity.  Exponents are kept on the letter so certificates round-trip
verbatim; homologically an inverse twist acts like the twist itself since
all these transvections are involutions.

Curve classes of the twisting circles in the standard basis:

    a_i -> x_i + x_{i+1}        c_i -> x_i + x_{i+1} + x_{i+2} + x_{i+3}
    d_i -> x_i + x_{i+2}        alpha_I -> sum of x_i over I

b-circles are accepted by the grammar but rejected with a diagnostic: no
homology class is assigned to them in this model, and every generating set
used here avoids them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .f2core import Genus, H1Matrix, H1Vector, compose, transvection
from .gmform import QPreservationVerdict, preserves_q, q_eval, z4_str


class WordParseError(ValueError):
    """Malformed word text; carries the failing position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedLetterError(ValueError):
    """A parseable letter whose homology action is deliberately undefined."""


@dataclass(frozen=True)
class Letter:
    """One generator letter.

    kind is one of "a", "b", "c", "d" (twists, args = (index,)), "y"
    (args = (i, j)) or "ya" (args = (leg tuple, arm tuple)).  power != 0;
    negative powers are formal inverses.
    """

    kind: str
    args: tuple
    power: int = 1

    @property
    def inverse(self) -> bool:
        return self.power < 0

    def with_power(self, power: int) -> "Letter":
        return Letter(self.kind, self.args, power)

    def spell(self) -> str:
        if self.kind in ("a", "b", "c", "d"):
            base = f"t_{{{self.kind}_{self.args[0]}}}"
        elif self.kind == "y":
            base = f"Y_{{{self.args[0]},{self.args[1]}}}"
        elif self.kind == "ya":
            leg, arm = self.args
            base = f"Y_{{{_spell_alpha(leg)},{_spell_alpha(arm)}}}"
        else:
            raise ValueError(f"unknown letter kind {self.kind!r}")
        if self.power != 1:
            base += f"^{{{self.power}}}"
        return base

    def __str__(self) -> str:
        return self.spell()


def _spell_alpha(indices: tuple) -> str:
    if len(indices) == 1:
        return f"alpha_{indices[0]}"
    return "alpha_{" + ",".join(str(i) for i in indices) + "}"


_ALPHA_SET = r"(?:alpha|α)_(?:(\d+)|\{(\d+(?:,\d+)*)\})"
_RX_YA = re.compile(r"Y_\{" + _ALPHA_SET + "," + _ALPHA_SET + r"\}")
_RX_Y = re.compile(r"Y_\{(\d+),(\d+)\}")
_RX_T = re.compile(r"t_\{([a-d])_(?:(\d+)|\{(\d+)\})\}")
_RX_EXP = re.compile(r"\^(?:\{(-?\d+)\}|(-?\d+))")


def _parse_alpha_groups(plain: str | None, braced: str | None) -> tuple[int, ...]:
    text = plain if plain is not None else braced
    return tuple(int(t) for t in text.split(","))


def parse_word(text: str, genus: Genus) -> "MCGWord":
    """Parse word text under the grammar above; positions reported on errors."""
    letters = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _RX_YA.match(text, pos)
        if m:
            leg = _parse_alpha_groups(m.group(1), m.group(2))
            arm = _parse_alpha_groups(m.group(3), m.group(4))
            letter = Letter("ya", (leg, arm))
        else:
            m = _RX_Y.match(text, pos)
            if m:
                letter = Letter("y", (int(m.group(1)), int(m.group(2))))
            else:
                m = _RX_T.match(text, pos)
                if m:
                    idx = int(m.group(2) if m.group(2) is not None else m.group(3))
                    letter = Letter(m.group(1), (idx,))
                else:
                    snippet = text[pos : pos + 16]
                    raise WordParseError(f"unrecognized letter {snippet!r}", pos)
        pos = m.end()
        m = _RX_EXP.match(text, pos)
        if m:
            power = int(m.group(1) if m.group(1) is not None else m.group(2))
            if power == 0:
                raise WordParseError("zero exponent is not allowed", pos)
            letter = letter.with_power(power)
            pos = m.end()
        letters.append(letter)
    return MCGWord(genus, tuple(letters))


def _validate_letter(letter: Letter, genus: Genus) -> None:
    g = genus.g
    kind, args = letter.kind, letter.args
    if letter.power == 0:
        raise ValueError(f"{letter.spell()}: zero exponent is not allowed")
    if kind == "b":
        raise UnsupportedLetterError(
            f"{letter.spell()}: twists about b-circles carry no homology class in "
            "this model and are rejected; rewrite the word over a-, c-, d- and "
            "Y-letters instead"
        )
    if kind in ("a", "c", "d"):
        top = {"a": g - 1, "c": g - 3, "d": g - 2}[kind]
        i = args[0]
        if not 1 <= i <= top:
            raise ValueError(
                f"{letter.spell()}: index {i} out of range 1..{top} at genus {g}"
            )
    elif kind == "y":
        i, j = args
        if not (1 <= i <= g and 1 <= j <= g):
            raise ValueError(f"{letter.spell()}: indices must lie in 1..{g}")
        if i == j:
            raise ValueError(f"{letter.spell()}: leg and arm indices must differ")
    elif kind == "ya":
        leg, arm = args
        for t in (leg, arm):
            if any(not 1 <= i <= g for i in t):
                raise ValueError(f"{letter.spell()}: indices must lie in 1..{g}")
            if tuple(sorted(set(t))) != t:
                raise ValueError(
                    f"{letter.spell()}: index sets must be strictly ascending"
                )
        ok_pair = len(leg) == 1 and len(arm) == 2 and leg[0] in arm
        ok_quad = (
            len(leg) == 3
            and len(arm) == 4
            and arm[:3] == leg
        )
        if not (ok_pair or ok_quad):
            raise ValueError(
                f"{letter.spell()}: expected a one-index leg inside a two-index arm, "
                "or a three-index leg extended upward by one arm index"
            )
    else:
        raise ValueError(f"unknown letter kind {kind!r}")


@dataclass(frozen=True)
class MCGWord:
    """A validated word; the rightmost letter acts first."""

    genus: Genus
    letters: tuple[Letter, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for letter in self.letters:
            _validate_letter(letter, self.genus)

    def spell(self) -> str:
        return " ".join(letter.spell() for letter in self.letters)

    def __str__(self) -> str:
        return self.spell()

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "MCGWord":
        return MCGWord(
            self.genus,
            tuple(l.with_power(-l.power) for l in reversed(self.letters)),
        )

    def __mul__(self, other: "MCGWord") -> "MCGWord":
        if self.genus != other.genus:
            raise ValueError("cannot concatenate words over different genera")
        return MCGWord(self.genus, self.letters + other.letters)


def curve_class(letter: Letter, genus: Genus) -> H1Vector | None:
    """Homology class of the twisting circle; None for Y letters."""
    _validate_letter(letter, genus)
    i = letter.args[0] if letter.kind in ("a", "c", "d") else 0
    if letter.kind == "a":
        return H1Vector.from_indices(genus, (i, i + 1))
    if letter.kind == "c":
        return H1Vector.from_indices(genus, (i, i + 1, i + 2, i + 3))
    if letter.kind == "d":
        return H1Vector.from_indices(genus, (i, i + 2))
    return None


def alpha_class(genus: Genus, indices) -> H1Vector:
    """Class of the circle through the listed crosscaps: sum of x_i over I."""
    t = tuple(indices)
    if tuple(sorted(set(t))) != t or not t:
        raise ValueError("alpha index set must be nonempty and strictly ascending")
    return H1Vector.from_indices(genus, t)


def leg_class(letter: Letter, genus: Genus) -> H1Vector | None:
    """Class of the one-sided leg circle of a Y letter; None for twists."""
    _validate_letter(letter, genus)
    if letter.kind == "y":
        return H1Vector.basis(genus, letter.args[0])
    if letter.kind == "ya":
        return alpha_class(genus, letter.args[0])
    return None


def letter_matrix(letter: Letter, genus: Genus) -> H1Matrix:
    """Induced homology action of one letter."""
    cls = curve_class(letter, genus)
    if cls is None:
        return H1Matrix.identity(genus)
    m = transvection(cls)
    # transvections are involutions, so only exponent parity matters
    return m if letter.power % 2 else H1Matrix.identity(genus)


def induced_matrix(word: MCGWord) -> H1Matrix:
    """Product of the letter actions, rightmost letter first."""
    acc = H1Matrix.identity(word.genus)
    for letter in word.letters:
        acc = compose(acc, letter_matrix(letter, word.genus))
    return acc


@dataclass(frozen=True)
class ExtendabilityVerdict:
    word: MCGWord
    matrix: H1Matrix
    extendable: bool
    witness: H1Vector | None = None

    def __bool__(self) -> bool:
        return self.extendable

    def to_json(self) -> dict:
        out = {
            "word": self.word.spell(),
            "genus": self.word.genus.g,
            "matrix": self.matrix.to_col_bitstrings(),
            "extendable": self.extendable,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_text()
        return out


def decide_extendable(word: MCGWord, mode: str = "auto") -> ExtendabilityVerdict:
    """Decide extendability of a word over the standardly embedded surface.

    A mapping class extends over the ambient four-sphere exactly when its
    homology action preserves the mod-4 form, so the decision is exact.  On
    a negative answer the verdict carries a witness class whose form value
    changes.
    """
    m = induced_matrix(word)
    verdict: QPreservationVerdict = preserves_q(m, mode=mode)
    return ExtendabilityVerdict(word, m, verdict.preserves, verdict.witness)


def is_homologically_trivial(word: MCGWord) -> bool:
    """Whether the word acts as the identity on mod-2 homology."""
    return induced_matrix(word).is_identity


def witness_detail(verdict: ExtendabilityVerdict) -> str:
    """Human-readable account of a failing witness."""
    if verdict.witness is None:
        return ""
    before = q_eval(verdict.witness)
    after = q_eval(verdict.matrix.apply(verdict.witness))
    return (
        f"form value of {verdict.witness.to_text()} changes "
        f"{z4_str(before)} -> {z4_str(after)}"
    )
