"""Shared oracles and generators for the test suite."""

from __future__ import annotations

from itertools import product

from crosscap.f2core import Genus
from crosscap.gmform import q_table


def _rank_f2(cols: tuple[int, ...]) -> int:
    basis: dict[int, int] = {}
    rank = 0
    for m in cols:
        cur = m
        while cur:
            lead = cur.bit_length() - 1
            if lead in basis:
                cur ^= basis[lead]
            else:
                basis[lead] = cur
                rank += 1
                break
    return rank


def _apply_cols(cols: tuple[int, ...], v: int) -> int:
    out = 0
    for j in range(len(cols)):
        if (v >> j) & 1:
            out ^= cols[j]
    return out


def brute_orthogonal_cols(g: int) -> set[tuple[int, ...]]:
    """Independent oracle: filter all g-by-g matrices over F2 for
    invertibility and exhaustive form preservation.  Feasible for g <= 4."""
    qtab = q_table(Genus(g))
    out = set()
    for cols in product(range(1 << g), repeat=g):
        if _rank_f2(cols) != g:
            continue
        if all(qtab[_apply_cols(cols, v)] == qtab[v] for v in range(1 << g)):
            out.add(cols)
    return out


def random_letter(rng, g: int) -> str:
    """One random letter spelling valid at genus g."""
    kinds = ["a", "d", "y"]
    if g >= 4:
        kinds.append("c")
    kind = rng.choice(kinds)
    if kind == "a":
        base = f"t_{{a_{rng.randint(1, g - 1)}}}"
    elif kind == "c":
        base = f"t_{{c_{rng.randint(1, g - 3)}}}"
    elif kind == "d":
        base = f"t_{{d_{rng.randint(1, g - 2)}}}"
    else:
        i = rng.randint(1, g)
        j = rng.randint(1, g - 1)
        if j >= i:
            j += 1
        base = f"Y_{{{i},{j}}}"
    power = rng.choice([1, 1, 1, -1, 2, -2])
    if power != 1:
        base += f"^{{{power}}}"
    return base


def random_word_text(rng, g: int, max_len: int = 10) -> str:
    return " ".join(random_letter(rng, g) for _ in range(rng.randint(0, max_len)))
