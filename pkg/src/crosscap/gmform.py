"""The mod-4 quadratic form of the standardly embedded surface.

Basis values are +1 on odd-index circles and -1 on even-index circles, and
the refinement rule q(u + v) = q(u) + q(v) + 2 (u . v) extends them to the
whole group.  In closed form, a class whose support has l_o odd and l_e even
indices takes the value l_o - l_e (mod 4).

A note on the transvection criterion: a transvection about a class a is an
isometry of q exactly when q(a) = 2.  (If q(a) = 0 then any x pairing to 1
with a has q(x + a) = q(x) + 2.)  This is verified exhaustively in the test
suite for every even-weight axis up to genus 8.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .f2core import (
    Genus,
    H1Matrix,
    H1Vector,
    intersection,
    preserves_intersection_form,
)

# Exhaustive checking walks all 2^g classes; above this we fall back to the
# basis criterion, which the refinement rule propagates by induction on
# support size.
EXHAUSTIVE_LIMIT = 20

_SIGNED = {0: "0", 1: "+1", 2: "2", 3: "-1"}


def basis_value(index: int) -> int:
    """q on the basis class x_index: +1 for odd index, -1 (= 3) for even."""
    return 1 if index % 2 else 3


def q_eval(v: H1Vector) -> int:
    """Value of the form on v, via the closed form l_odd - l_even mod 4."""
    return (v.l_odd - v.l_even) % 4


def q_eval_recursive(v: H1Vector) -> int:
    """Independent evaluation peeling one support index at a time.

    Uses only the basis values, the refinement rule and the intersection
    pairing; serves as an oracle for q_eval.
    """
    total = 0
    acc = H1Vector.zero(v.genus)
    for i in v.support:
        e = H1Vector.basis(v.genus, i)
        total = (total + basis_value(i) + 2 * intersection(e, acc)) % 4
        acc = acc + e
    return total


def z4_str(value: int, signed: bool = False) -> str:
    """Render a mod-4 value, optionally in +1/-1 display style."""
    v = value % 4
    return _SIGNED[v] if signed else str(v)


@lru_cache(maxsize=None)
def q_table(genus: Genus) -> tuple[int, ...]:
    """q over all 2^g bit masks, indexed by mask."""
    g = genus.g
    odd = 0
    for i in range(0, g, 2):
        odd |= 1 << i
    full = (1 << g) - 1
    even = full ^ odd
    return tuple(
        ((v & odd).bit_count() - (v & even).bit_count()) % 4 for v in range(1 << g)
    )


@dataclass(frozen=True)
class QPreservationVerdict:
    preserves: bool
    mode: str  # "exhaustive" or "basis"
    witness: H1Vector | None = None

    def __bool__(self) -> bool:
        return self.preserves


def preserves_q(m: H1Matrix, mode: str = "auto") -> QPreservationVerdict:
    """Decide whether a matrix is an isometry of the form.

    In exhaustive mode every class is checked and the first failing class is
    returned as a witness.  In basis mode it suffices that the matrix
    preserves the intersection pairing and the form on every basis class;
    the refinement rule then propagates preservation by induction on support
    size.  "auto" picks exhaustive up to genus EXHAUSTIVE_LIMIT.
    """
    if mode not in ("auto", "exhaustive", "basis"):
        raise ValueError(f"unknown mode {mode!r}")
    g = m.genus.g
    if mode == "auto":
        mode = "exhaustive" if g <= EXHAUSTIVE_LIMIT else "basis"
    if mode == "exhaustive":
        qtab = q_table(m.genus)
        img = [0] * (1 << g)
        for v in range(1, 1 << g):
            low = v & -v
            img[v] = img[v ^ low] ^ m.cols[low.bit_length() - 1]
            if qtab[img[v]] != qtab[v]:
                return QPreservationVerdict(False, mode, H1Vector(m.genus, v))
        return QPreservationVerdict(True, mode)
    # basis criterion
    for j in range(1, g + 1):
        col = m.column(j)
        if q_eval(col) != basis_value(j):
            return QPreservationVerdict(False, mode, H1Vector.basis(m.genus, j))
    if not preserves_intersection_form(m):
        for i in range(1, g + 1):
            for j in range(i + 1, g + 1):
                if intersection(m.column(i), m.column(j)) != 0:
                    w = H1Vector.basis(m.genus, i) + H1Vector.basis(m.genus, j)
                    return QPreservationVerdict(False, mode, w)
    return QPreservationVerdict(True, mode)
