"""Finite isometry-group machinery for the mod-4 form.

Four kinds of work live here:

* column-backtracking enumeration of every invertible matrix preserving the
  form (budgeted by genus);
* breadth-first subgroup closure with shortest-word certificates, and set
  comparison of the two as the generation check;
* bidirectional meet-in-the-middle factorization of a matrix over a labeled
  generating set;
* the constructive normal-form reductions: any class of form value 2 is
  driven to x1+x3, and any isotropic pair to [x1+x2, x3+x4] or to an
  explicitly flagged full-support configuration.

Certificates and reduction words always replay: the product of the recorded
generators is re-applied and compared before a result is returned.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .f2core import (
    BudgetExceededError,
    Genus,
    GenusMismatchError,
    H1Matrix,
    H1Vector,
    compose,
    transvection,
)
from .gmform import q_eval, q_table
from .words import induced_matrix, parse_word

DEFAULT_NODE_CAP = 1 << 24
ENUMERATION_GENUS_CAP = 8


# ---------------------------------------------------------------------------
# tables of group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElementRecord:
    """A matrix with a word over the generating set that replays to it.

    The word is a tuple of signed 1-based generator indices in product order
    (rightmost acts first); negative means the formal inverse.  Enumerated
    tables carry empty words.
    """

    matrix: H1Matrix
    word: tuple[int, ...]


@dataclass
class GroupTable:
    """A set of matrices, closed under the generators when complete."""

    genus: Genus
    labels: tuple[str, ...]
    generators: tuple[H1Matrix, ...]
    elements: dict[tuple[int, ...], GroupElementRecord]
    complete: bool
    diameter: int
    cap: int | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: H1Matrix) -> bool:
        return m.cols in self.elements

    def record_for(self, m: H1Matrix) -> GroupElementRecord | None:
        return self.elements.get(m.cols)

    def word_labels(self, word: tuple[int, ...]) -> list[str]:
        out = []
        for signed in word:
            label = self.labels[abs(signed) - 1]
            out.append(label if signed > 0 else label + "^{-1}")
        return out

    def replay(self, word: tuple[int, ...]) -> H1Matrix:
        acc = H1Matrix.identity(self.genus)
        for signed in word:
            m = self.generators[abs(signed) - 1]
            acc = compose(acc, m if signed > 0 else m.inverse())
        return acc

    def verify_certificates(self, limit: int | None = None) -> bool:
        """Replay every stored word (or the first `limit`) against its matrix."""
        for k, record in enumerate(self.elements.values()):
            if limit is not None and k >= limit:
                break
            if self.replay(record.word).cols != record.matrix.cols:
                return False
        return True

    def to_json(self, include_elements: bool = False) -> dict:
        out = {
            "genus": self.genus.g,
            "generators": list(self.labels),
            "order": self.order,
            "diameter": self.diameter,
            "complete": self.complete,
        }
        if include_elements:
            out["elements"] = [
                {
                    "matrix": rec.matrix.to_col_bitstrings(),
                    "word": self.word_labels(rec.word),
                }
                for rec in self.elements.values()
            ]
        return out


def _apply_table(m: H1Matrix) -> list[int]:
    """Image of every bit mask under m, for fast repeated application."""
    g = m.genus.g
    tab = [0] * (1 << g)
    for v in range(1, 1 << g):
        low = v & -v
        tab[v] = tab[v ^ low] ^ m.cols[low.bit_length() - 1]
    return tab


# ---------------------------------------------------------------------------
# enumeration by column backtracking
# ---------------------------------------------------------------------------


def _candidates_by_value(g: int) -> dict[int, list[int]]:
    qtab = q_table(Genus(g))
    by_q: dict[int, list[int]] = {1: [], 3: []}
    for v in range(1, 1 << g):
        if qtab[v] in (1, 3):
            by_q[qtab[v]].append(v)
    return by_q


def _complete_columns(g: int, by_q, prefix: list[int], out: list[tuple[int, ...]]):
    j = len(prefix)
    if j == g:
        out.append(tuple(prefix))
        return
    want = 1 if j % 2 == 0 else 3  # column j is the image of x_{j+1}
    for c in by_q[want]:
        ok = True
        for p in prefix:
            if (c & p).bit_count() & 1:
                ok = False
                break
        if ok:
            prefix.append(c)
            _complete_columns(g, by_q, prefix, out)
            prefix.pop()


def _enumerate_subtree(args):
    g, first = args
    by_q = _candidates_by_value(g)
    out: list[tuple[int, ...]] = []
    _complete_columns(g, by_q, [first], out)
    return out


def enumerate_orthogonal(genus: Genus, workers: int = 1) -> GroupTable:
    """All invertible matrices preserving the form, by column backtracking.

    Column j must take the form value of x_{j+1} and be orthogonal to the
    earlier columns; orthonormal columns over F2 are automatically
    independent, so every completed assignment is invertible (the matrix
    constructor re-checks).  Budgeted: genus above ENUMERATION_GENUS_CAP is
    refused.
    """
    g = genus.g
    if g > ENUMERATION_GENUS_CAP:
        raise BudgetExceededError(
            f"orthogonal enumeration is budgeted for genus <= "
            f"{ENUMERATION_GENUS_CAP}, got {g}"
        )
    by_q = _candidates_by_value(g)
    firsts = by_q[1]
    results: list[tuple[int, ...]] = []
    if workers <= 1 or len(firsts) < 2:
        for first in firsts:
            _complete_columns(g, by_q, [first], results)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_enumerate_subtree, [(g, c) for c in firsts]):
                results.extend(part)
    elements = {
        cols: GroupElementRecord(H1Matrix(genus, cols), ()) for cols in results
    }
    return GroupTable(genus, (), (), elements, True, 0)


# ---------------------------------------------------------------------------
# subgroup closure
# ---------------------------------------------------------------------------


def _expand_chunk(args):
    tables, chunk = args
    out = []
    for cols in chunk:
        for tab in tables:
            out.append(tuple(tab[c] for c in cols))
    return out


def _expand_frontier(frontier, tables, workers: int):
    if workers <= 1 or len(frontier) < 4 * workers:
        return _expand_chunk((tables, frontier))
    size = (len(frontier) + workers - 1) // workers
    chunks = [frontier[k : k + size] for k in range(0, len(frontier), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_expand_chunk, [(tables, ch) for ch in chunks]))
    return [child for part in parts for child in part]


def _alphabet(gens: list[H1Matrix]) -> list[tuple[int, H1Matrix]]:
    """Generators and their inverses as signed letters; inverses equal to the
    generator itself (involutions) are not duplicated."""
    letters = [(k, m) for k, m in enumerate(gens, start=1)]
    for k, m in enumerate(gens, start=1):
        inv = m.inverse()
        if inv.cols != m.cols:
            letters.append((-k, inv))
    return letters


def subgroup_closure(
    generators,
    cap: int = DEFAULT_NODE_CAP,
    labels=None,
    workers: int = 1,
    genus: Genus | None = None,
) -> GroupTable:
    """Breadth-first closure under left multiplication by the generators and
    their inverses, with shortest-word certificates.

    Expansion order is fixed (frontier in discovery order, letters in listed
    order), so certificates are reproducible across runs and worker counts.
    If the element count would exceed `cap` the partial table is returned
    with complete=False.
    """
    gens = list(generators)
    if genus is None:
        if not gens:
            raise ValueError("empty generating set needs an explicit genus")
        genus = gens[0].genus
    for m in gens:
        if m.genus != genus:
            raise GenusMismatchError("generators must share one genus")
    if labels is None:
        labels = tuple(f"g{k}" for k in range(1, len(gens) + 1))
    labels = tuple(labels)
    if len(labels) != len(gens):
        raise ValueError("one label per generator required")

    letters = _alphabet(gens)
    tables = [_apply_table(m) for _, m in letters]
    identity = H1Matrix.identity(genus)
    elements = {identity.cols: GroupElementRecord(identity, ())}
    frontier = [identity.cols]
    diameter = 0
    complete = True
    while frontier and letters:
        children = _expand_frontier(frontier, tables, workers)
        new_frontier = []
        pos = 0
        overflow = False
        for cols in frontier:
            parent_word = elements[cols].word
            for signed, _ in letters:
                child = children[pos]
                pos += 1
                if child in elements:
                    continue
                if len(elements) >= cap:
                    overflow = True
                    continue
                elements[child] = GroupElementRecord(
                    H1Matrix(genus, child), (signed,) + parent_word
                )
                new_frontier.append(child)
        if new_frontier:
            diameter += 1
        if overflow:
            complete = False
            break
        frontier = new_frontier
    return GroupTable(
        genus, labels, tuple(gens), elements, complete, diameter, cap=cap
    )


# ---------------------------------------------------------------------------
# the standard generating set and the generation check
# ---------------------------------------------------------------------------


def two_index_label(i: int) -> str:
    return f"t_{{d_{i}}}"


def triple_label(i: int) -> str:
    return f"t_{{a_{i}}} t_{{a_{i+2}}} t_{{c_{i}}}"


def standard_generators(genus: Genus) -> list[tuple[str, H1Matrix]]:
    """The standard transvection generating set for the isometry group.

    Two-index transvections about x_i + x_{i+2} (i = 1..g-2) and commuting
    triples about x_i+x_{i+1}, x_{i+2}+x_{i+3} and their sum (i = 1..g-3).
    Each label is the twist word inducing the matrix, so factorization output
    is itself a parseable word.
    """
    out = []
    for i in range(1, genus.g - 1):
        out.append((two_index_label(i), induced_matrix(parse_word(two_index_label(i), genus))))
    for i in range(1, genus.g - 2):
        out.append((triple_label(i), induced_matrix(parse_word(triple_label(i), genus))))
    return out


@dataclass(frozen=True)
class GenerationReport:
    genus: int
    labels: tuple[str, ...]
    closure_order: int
    enumerated_order: int
    equal: bool
    diameter: int
    closure_complete: bool

    @property
    def ok(self) -> bool:
        return self.equal

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "generators": list(self.labels),
            "closure_order": self.closure_order,
            "enumerated_order": self.enumerated_order,
            "equal": self.equal,
            "diameter": self.diameter,
            "complete": self.closure_complete,
        }


def verify_generation(
    genus: Genus, cap: int = DEFAULT_NODE_CAP, workers: int = 1
) -> GenerationReport:
    """Close the standard generating set and compare with full enumeration."""
    g = genus.g
    if not 2 <= g <= ENUMERATION_GENUS_CAP:
        raise BudgetExceededError(
            f"generation check is budgeted for genus 2..{ENUMERATION_GENUS_CAP}, got {g}"
        )
    gens = standard_generators(genus)
    closure = subgroup_closure(
        [m for _, m in gens],
        cap=cap,
        labels=[label for label, _ in gens],
        workers=workers,
        genus=genus,
    )
    if not closure.verify_certificates(limit=4096):
        raise AssertionError("closure produced a non-replaying certificate")
    enum = enumerate_orthogonal(genus, workers=workers)
    equal = closure.complete and set(closure.elements) == set(enum.elements)
    return GenerationReport(
        genus=g,
        labels=closure.labels,
        closure_order=closure.order,
        enumerated_order=enum.order,
        equal=equal,
        diameter=closure.diameter,
        closure_complete=closure.complete,
    )


# ---------------------------------------------------------------------------
# factorization (bidirectional breadth-first search)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorizationResult:
    """Outcome of a factorization attempt.

    status is "found", "not_member" (one search side closed without meeting,
    a proof of non-membership) or "budget_exhausted" (node cap hit; nothing
    is claimed).  The word is in product order, rightmost letter first.
    """

    status: str
    word: tuple[int, ...] | None
    word_labels: tuple[str, ...] | None
    explored: int

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self) -> dict:
        out = {"status": self.status, "explored": self.explored}
        if self.word is not None:
            out["word"] = list(self.word_labels)
            out["length"] = len(self.word)
        return out


def _bit_positions(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def factorize(
    target: H1Matrix,
    generators,
    labels=None,
    cap: int = DEFAULT_NODE_CAP,
) -> FactorizationResult:
    """Shortest word over the generators whose product equals the target.

    Bidirectional search: one wave grows from the identity by left
    multiplication, the other from the target by right multiplication with
    letter inverses; a common element splices the two half-words.  Levels
    alternate strictly and every meet found while completing a level is
    collected, so the reported word has minimal length and is deterministic.
    Budget exhaustion is reported as its own status, never as non-membership;
    non-membership is only claimed when a whole side closed.
    """
    gens = list(generators)
    genus = target.genus
    for m in gens:
        if m.genus != genus:
            raise GenusMismatchError("generators must share the target's genus")
    if labels is None:
        labels = tuple(f"g{k}" for k in range(1, len(gens) + 1))
    labels = tuple(labels)

    def render(word):
        return tuple(
            labels[abs(s) - 1] + ("" if s > 0 else "^{-1}") for s in word
        )

    def finish(word):
        acc = H1Matrix.identity(genus)
        for signed in word:
            m = gens[abs(signed) - 1]
            acc = compose(acc, m if signed > 0 else m.inverse())
        if acc.cols != target.cols:
            raise AssertionError("factorization word failed to replay")
        return FactorizationResult("found", word, render(word), len(fwd) + len(bwd))

    letters = _alphabet(gens)
    fwd_tables = [_apply_table(m) for _, m in letters]
    bwd_bits = [
        tuple(_bit_positions(c) for c in m.inverse().cols) for _, m in letters
    ]

    id_cols = H1Matrix.identity(genus).cols
    fwd: dict[tuple[int, ...], tuple[int, ...]] = {id_cols: ()}
    bwd: dict[tuple[int, ...], tuple[int, ...]] = {target.cols: ()}
    if target.cols == id_cols:
        return finish(())
    fwd_frontier = [id_cols]
    bwd_frontier = [target.cols]
    expand_forward = True

    while True:
        if len(fwd) + len(bwd) > cap:
            return FactorizationResult("budget_exhausted", None, None, len(fwd) + len(bwd))
        meets: list[tuple[int, tuple[int, ...]]] = []
        if expand_forward:
            if not fwd_frontier:
                return FactorizationResult("not_member", None, None, len(fwd) + len(bwd))
            new = []
            for cols in fwd_frontier:
                parent = fwd[cols]
                for (signed, _), tab in zip(letters, fwd_tables):
                    child = tuple(tab[c] for c in cols)
                    if child in fwd:
                        continue
                    word = (signed,) + parent
                    fwd[child] = word
                    new.append(child)
                    if child in bwd:
                        full = word + bwd[child]
                        meets.append((len(full), full))
            fwd_frontier = new
        else:
            if not bwd_frontier:
                return FactorizationResult("not_member", None, None, len(fwd) + len(bwd))
            new = []
            for cols in bwd_frontier:
                parent = bwd[cols]
                for (signed, _), bits in zip(letters, bwd_bits):
                    child = tuple(
                        _xor_over(cols, positions) for positions in bits
                    )
                    if child in bwd:
                        continue
                    word = (signed,) + parent
                    bwd[child] = word
                    new.append(child)
                    if child in fwd:
                        full = fwd[child] + word
                        meets.append((len(full), full))
            bwd_frontier = new
        if meets:
            meets.sort(key=lambda t: t[0])
            return finish(meets[0][1])
        expand_forward = not expand_forward


def _xor_over(cols, positions) -> int:
    acc = 0
    for b in positions:
        acc ^= cols[b]
    return acc


# ---------------------------------------------------------------------------
# constructive reductions over the standard generators
# ---------------------------------------------------------------------------


class _Reducer:
    """Applies standard generators to tracked classes, recording the moves.

    Moves are recorded in application order; the word text reverses them so
    the first move sits rightmost, matching word composition order.
    """

    def __init__(self, genus: Genus):
        self.genus = genus
        self._by_label = dict(standard_generators(genus))
        self.tracked: list[H1Vector] = []
        self.moves: list[str] = []

    def track(self, v: H1Vector) -> int:
        self.tracked.append(v)
        return len(self.tracked) - 1

    def d(self, i: int) -> None:
        self._apply(two_index_label(i))

    def e(self, i: int) -> None:
        self._apply(triple_label(i))

    def _apply(self, label: str) -> None:
        m = self._by_label[label]
        self.tracked = [m.apply(v) for v in self.tracked]
        self.moves.append(label)

    def word_text(self) -> str:
        return " ".join(reversed(self.moves))


def _swap_plan(current: list[int], targets: list[int]) -> list[int]:
    """Adjacent-transposition plan inside one parity class.

    Both lists are ascending positions of the same parity and length; the
    rank-aligned matching never crosses.  Down-movers run first in ascending
    rank, then up-movers in descending rank; this order keeps every
    intermediate slot free (asserted).
    """
    assert len(current) == len(targets)
    cur = list(current)
    plan: list[int] = []
    for r in range(len(cur)):
        while cur[r] > targets[r]:
            j = cur[r] - 2
            assert j not in cur
            plan.append(j)
            cur[r] = j
    for r in range(len(cur) - 1, -1, -1):
        while cur[r] < targets[r]:
            j = cur[r]
            assert j + 2 not in cur
            plan.append(j)
            cur[r] = j + 2
    assert cur == list(targets)
    return plan


def _rearrange(red: _Reducer, idx: int, odd_targets, even_targets) -> None:
    """Drive the support of tracked[idx] onto the target slots with swaps."""
    v = red.tracked[idx]
    odds = [i for i in v.support if i % 2]
    evens = [i for i in v.support if i % 2 == 0]
    for j in _swap_plan(odds, sorted(odd_targets)):
        red.d(j)
    for j in _swap_plan(evens, sorted(even_targets)):
        red.d(j)


def _normalize_q2(red: _Reducer, idx: int) -> None:
    """Drive a form-value-2 class to x1+x3.

    Loop invariantly sorts the support, then either converts an even-heavy
    support with one triple move, erases one (even, odd) pair, or collapses
    a block of four odd slots with two triple moves, until only x1+x3 is
    left.
    """
    g = red.genus.g
    x13 = H1Vector.from_indices(red.genus, (1, 3))
    for _ in range(6 * g + 6):
        v = red.tracked[idx]
        lo, le = v.l_odd, v.l_even
        assert (lo - le) % 4 == 2
        if (lo, le) == (2, 0):
            _rearrange(red, idx, [1, 3], [])
            assert red.tracked[idx] == x13
            return
        if le > lo:
            # park the odd support clear of slots 1 and 3, line the evens up
            # from 2; the triple move then turns x2+x4 into x1+x3
            _rearrange(
                red,
                idx,
                [5 + 2 * s for s in range(lo)],
                [2 + 2 * s for s in range(le)],
            )
            red.e(1)
        elif le > 0 and lo - le == 2:
            # (x1+x3) then consecutive (even, odd) pairs from slot 4; the
            # triple move erases x3+x4
            _rearrange(
                red,
                idx,
                [1, 3] + [2 * s + 3 for s in range(1, le + 1)],
                [2 * s + 2 for s in range(1, le + 1)],
            )
            red.e(1)
        else:
            # lo - le = 4t + 2, t >= 1: lay the surplus out as blocks of four
            # odd slots and collapse the last block to two indices
            t = (lo - le - 2) // 4
            odd_targets = [1, 3] + [2 * s + 3 for s in range(1, le + 1)]
            base = 2 * le + 5
            for u in range(t):
                start = base + 8 * u
                odd_targets += [start, start + 2, start + 4, start + 6]
            _rearrange(red, idx, odd_targets, [2 * s + 2 for s in range(1, le + 1)])
            last = base + 8 * (t - 1)
            red.e(last + 3)
            red.e(last + 2)
    raise AssertionError("normal-form loop failed to terminate")


def _normalize_q0_to_pairs(red: _Reducer, idx: int, offset: int) -> int:
    """Drive an isotropic class supported above `offset` to consecutive
    (odd, even) pairs starting at offset+1; returns the pair count."""
    g = red.genus.g
    for _ in range(6 * g + 6):
        v = red.tracked[idx]
        assert all(i > offset for i in v.support)
        lo = sum(1 for i in v.support if i % 2)
        le = v.weight - lo
        assert (lo - le) % 4 == 0
        if lo == le:
            _rearrange(
                red,
                idx,
                [offset + 2 * s + 1 for s in range(lo)],
                [offset + 2 * s + 2 for s in range(lo)],
            )
            return lo
        if le > lo:
            _rearrange(
                red,
                idx,
                [offset + 5 + 2 * s for s in range(lo)],
                [offset + 2 + 2 * s for s in range(le)],
            )
            red.e(offset + 1)
        else:
            t = (lo - le) // 4
            odd_targets = [offset + 2 * s + 1 for s in range(le)]
            base = offset + 2 * le + 1
            for u in range(t):
                start = base + 8 * u
                odd_targets += [start, start + 2, start + 4, start + 6]
            _rearrange(
                red, idx, odd_targets, [offset + 2 * s + 2 for s in range(le)]
            )
            last = base + 8 * (t - 1)
            red.e(last + 3)
            red.e(last + 2)
    raise AssertionError("pair normal-form loop failed to terminate")


def _peel_pairs(red: _Reducer, idx: int, offset: int, n: int) -> int:
    """Erase trailing pairs one at a time while room above remains."""
    g = red.genus.g
    while n > 1 and offset + 2 * n != g:
        top = offset + 2 * n
        red.e(top - 2)
        red.d(top - 2)
        n -= 1
    return n


@dataclass(frozen=True)
class VectorReduction:
    start: H1Vector
    end: H1Vector
    moves: tuple[str, ...]
    word: str
    verified: bool

    def to_json(self) -> dict:
        return {
            "genus": self.start.genus.g,
            "start": self.start.to_text(),
            "end": self.end.to_text(),
            "word": self.word,
            "length": len(self.moves),
            "verified": self.verified,
        }


def reduce_q2_vector(a: H1Vector) -> VectorReduction:
    """Word over the standard generators carrying a form-value-2 class to
    x1+x3; replay-verified before return."""
    val = q_eval(a)
    if val != 2:
        raise ValueError(f"form value of {a.to_text()} is {val}, need 2")
    red = _Reducer(a.genus)
    red.track(a)
    _normalize_q2(red, 0)
    end = red.tracked[0]
    word_text = red.word_text()
    m = induced_matrix(parse_word(word_text, a.genus))
    ok = m.apply(a) == end == H1Vector.from_indices(a.genus, (1, 3))
    if not ok:
        raise AssertionError("q=2 reduction failed to replay")
    return VectorReduction(a, end, tuple(red.moves), word_text, True)


def full_support_factorization(genus: Genus) -> tuple[H1Matrix, H1Matrix]:
    """The two sides of the full-support triple split, for even genus >= 6:

    T[x1+x2] T[x3+...+xg] T[x1+...+xg]
      = (T[x1+x2] T[x3+x4] T[x1+x2+x3+x4])
        (T[x1+x2] T[x5+...+xg] T[x1+x2+x5+...+xg])
    """
    g = genus.g
    if g % 2 or g < 6:
        raise ValueError(f"the split applies for even genus >= 6, got {g}")

    def triple(u: H1Vector, w: H1Vector) -> H1Matrix:
        return compose(compose(transvection(u), transvection(w)), transvection(u + w))

    x12 = H1Vector.from_indices(genus, (1, 2))
    rest = H1Vector.from_indices(genus, range(3, g + 1))
    lhs = triple(x12, rest)
    x34 = H1Vector.from_indices(genus, (3, 4))
    tail = H1Vector.from_indices(genus, range(5, g + 1))
    rhs = compose(triple(x12, x34), triple(x12, tail))
    return lhs, rhs


@dataclass(frozen=True)
class PairReduction:
    """Outcome of reducing an isotropic pair.

    branch is "generic" (pair reaches [x1+x2, x3+x4]), "full_support" (the
    flagged special configuration [x1+x2, x3+...+xg], whose triple product
    splits over the generators; the matrix identity is checked when it
    applies) or "degenerate_pair" (the two classes agree, so the third class
    of the triple vanishes).  tracked_pair names which two of a, b, a+b the
    word conjugates; the triple product is the same for any of them since
    the three transvections commute.
    """

    a: H1Vector
    b: H1Vector
    branch: str
    tracked_pair: tuple[str, str]
    moves: tuple[str, ...]
    word: str
    final_pair: tuple[H1Vector, H1Vector]
    identity_applicable: bool
    identity_holds: bool | None
    note: str
    verified: bool

    def to_json(self) -> dict:
        out = {
            "genus": self.a.genus.g,
            "a": self.a.to_text(),
            "b": self.b.to_text(),
            "branch": self.branch,
            "tracked_pair": list(self.tracked_pair),
            "word": self.word,
            "length": len(self.moves),
            "final_pair": [v.to_text() for v in self.final_pair],
            "verified": self.verified,
        }
        if self.identity_applicable:
            out["identity_holds"] = self.identity_holds
        if self.note:
            out["note"] = self.note
        return out


def reduce_isotropic_pair(a: H1Vector, b: H1Vector) -> PairReduction:
    """Conjugate an isotropic pair toward [x1+x2, x3+x4] over the standard
    generators, or flag the special branch taken.  Replay-verified."""
    if a.genus != b.genus:
        raise GenusMismatchError("pair classes must share one genus")
    if a.is_zero() or b.is_zero():
        raise ValueError("pair classes must be nonzero")
    values = (q_eval(a), q_eval(b), q_eval(a + b))
    if values != (0, 0, 0):
        raise ValueError(
            f"pair needs form values (0, 0, 0) on a, b, a+b; got {values}"
        )
    g = a.genus.g
    red = _Reducer(a.genus)
    red.track(a)
    red.track(b)
    tracked_pair = ("a", "b")
    note = ""

    n = _normalize_q0_to_pairs(red, 0, 0)
    n = _peel_pairs(red, 0, 0, n)
    if 2 * n == g:
        # the first class is pinned at the all-ones vector, which every
        # generator fixes; reduce the second alone, then switch to the
        # complementary pair of the triple
        all_ones = red.tracked[0]
        m = _normalize_q0_to_pairs(red, 1, 0)
        assert red.tracked[0] == all_ones
        if m == g // 2:
            branch = "degenerate_pair"
            note = "both classes reduce to the all-ones vector"
        else:
            i = g // 2 - m
            _rearrange(
                red,
                1,
                [2 * i + 1 + 2 * s for s in range(m)],
                [2 * i + 2 + 2 * s for s in range(m)],
            )
            red.tracked[0] = red.tracked[0] + red.tracked[1]
            tracked_pair = ("a+b", "b")
            while i > 1:
                red.e(2 * i - 2)
                red.d(2 * i - 2)
                i -= 1
            assert red.tracked[0] == H1Vector.from_indices(a.genus, (1, 2))
            assert red.tracked[1] == H1Vector.from_indices(a.genus, range(3, g + 1))
            branch = "full_support"
    else:
        assert red.tracked[0] == H1Vector.from_indices(a.genus, (1, 2))
        vb = red.tracked[1]
        if vb.bits & 0b11:
            # the pair classes pair to 0, so the second contains both of
            # x1, x2; swap in the third class of the triple instead
            assert (vb.bits & 0b11) == 0b11
            red.tracked[1] = red.tracked[1] + red.tracked[0]
            tracked_pair = ("a", "a+b")
        if red.tracked[1].is_zero():
            branch = "degenerate_pair"
            note = "the classes agree; the triple collapses to one transvection squared"
        else:
            k = _normalize_q0_to_pairs(red, 1, 2)
            k = _peel_pairs(red, 1, 2, k)
            if 2 + 2 * k == g and k >= 2:
                branch = "full_support"
            else:
                branch = "generic"
                assert red.tracked[1] == H1Vector.from_indices(a.genus, (3, 4))

    end_pair = (red.tracked[0], red.tracked[1])
    word_text = red.word_text()
    m = induced_matrix(parse_word(word_text, a.genus))
    src0 = a if tracked_pair[0] == "a" else a + b
    src1 = b if tracked_pair[1] == "b" else a + b
    if m.apply(src0) != end_pair[0] or m.apply(src1) != end_pair[1]:
        raise AssertionError("pair reduction failed to replay")

    identity_applicable = branch == "full_support" and g % 2 == 0 and g >= 6
    identity_holds = None
    if identity_applicable:
        lhs, rhs = full_support_factorization(a.genus)
        identity_holds = lhs.cols == rhs.cols
    if branch == "full_support" and g == 4:
        note = "the triple product here is itself a listed generator"
    return PairReduction(
        a=a,
        b=b,
        branch=branch,
        tracked_pair=tracked_pair,
        moves=tuple(red.moves),
        word=word_text,
        final_pair=end_pair,
        identity_applicable=identity_applicable,
        identity_holds=identity_holds,
        note=note,
        verified=True,
    )
