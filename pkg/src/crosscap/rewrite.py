"""Certified symbol rewriting for standard-position circles.

An r-sequence displays a homology class as g symbols: odd positions show
'+' (coefficient 0) or a circled plus (coefficient 1), even positions '-'
or a circled minus.  Internally the four symbols are the ASCII letters
p/m (plain, written '+'/'-') and P/M (circled); a coarse layer x/X forgets
the sign and keeps only whether the position is circled.

Three built-in rule families, every instance carrying a word certificate
whose homology action maps the window class of its left side to the window
class of its right side:

* "swap3"/"swap4": the sign-shuffle equivalences that drive every sequence
  to a short list of normal forms;
* "twist2"/"twist4": the coarse case tables describing how a twist moves a
  standard circle (four of the fifteen four-symbol cases are explicit
  no-ops whose certificate is the bare twist);
* "alpha": index-shift moves on three-index crosscap circles, lowering one
  index by two per move.

Certificate transvection axes always lie inside the rule window, so the
window-level check is context independent: any class outside the window
pairs to 0 with every axis and passes through untouched.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .f2core import BudgetExceededError, Genus, H1Vector
from .gmform import q_table
from .words import alpha_class, curve_class, induced_matrix, parse_word


class FalsificationError(RuntimeError):
    """A machine check contradicted a classification claim."""


# ---------------------------------------------------------------------------
# r-sequences
# ---------------------------------------------------------------------------

_CHAR_TO_SYMBOL = {
    "+": "p",
    "p": "p",
    "-": "m",
    "−": "m",  # minus sign
    "m": "m",
    "⊕": "P",  # circled plus
    "P": "P",
    "⊖": "M",  # circled minus
    "M": "M",
}

_DISPLAY = {"p": "+", "m": "-", "P": "⊕", "M": "⊖"}


def _symbol(position: int, circled: bool) -> str:
    if position % 2:
        return "P" if circled else "p"
    return "M" if circled else "m"


@dataclass(frozen=True)
class RSequence:
    """Symbol display of a homology class; equivalent data, fixed parity."""

    genus: Genus
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < 1 << self.genus.g:
            raise ValueError("bit mask out of range for genus")

    @classmethod
    def from_vector(cls, v: H1Vector) -> "RSequence":
        return cls(v.genus, v.bits)

    @classmethod
    def parse(cls, text: str) -> "RSequence":
        """Parse "[+ ⊖ ⊕]" or the compact ASCII form "pMP"."""
        s = text.strip()
        if s.startswith("[") and s.endswith("]"):
            s = s[1:-1]
        tokens = s.split() if any(ch.isspace() for ch in s) else list(s)
        if not tokens:
            raise ValueError("empty r-sequence")
        bits = 0
        for pos, tok in enumerate(tokens, start=1):
            sym = _CHAR_TO_SYMBOL.get(tok)
            if sym is None:
                raise ValueError(f"unknown symbol {tok!r} at position {pos}")
            if (sym in ("p", "P")) != (pos % 2 == 1):
                raise ValueError(
                    f"malformed symbol parity: {tok!r} cannot sit at position {pos}"
                )
            if sym in ("P", "M"):
                bits |= 1 << (pos - 1)
        genus = Genus(len(tokens))
        return cls(genus, bits)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(
            _symbol(p, bool((self.bits >> (p - 1)) & 1))
            for p in range(1, self.genus.g + 1)
        )

    def display(self) -> str:
        return "[" + " ".join(_DISPLAY[s] for s in self.symbols) + "]"

    def ascii(self) -> str:
        return "".join(self.symbols)

    def __str__(self) -> str:
        return self.display()


def rseq_encode(v: H1Vector) -> RSequence:
    """Symbol sequence of a class; inverse of rseq_decode."""
    return RSequence.from_vector(v)


def rseq_decode(s: RSequence) -> H1Vector:
    """Class whose support is exactly the circled positions."""
    return H1Vector(s.genus, s.bits)


@dataclass(frozen=True)
class CirclePredicates:
    """Neighborhood and complement predicates read off the class."""

    is_mcircle: bool
    complement_orientable: bool
    leg_eligible: bool

    def to_json(self) -> dict:
        return {
            "is_mcircle": self.is_mcircle,
            "complement_orientable": self.complement_orientable,
            "leg_eligible": self.leg_eligible,
        }


def circle_predicates(s: RSequence) -> CirclePredicates:
    """Odd support weight means a one-sided circle; full support means the
    complement is orientable; slide legs need the first without the second."""
    weight = s.bits.bit_count()
    is_m = weight % 2 == 1
    full = s.bits == (1 << s.genus.g) - 1
    return CirclePredicates(is_m, full, is_m and not full)


# ---------------------------------------------------------------------------
# rule schemas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteRule:
    rule_id: str
    family: str  # "swap3" | "swap4" | "twist2" | "twist4" | "alpha"
    case: str
    window: tuple[str, ...] | None
    replacement: tuple[str, ...] | None
    certificate: str  # template over i (window rules) or n (index shifts)
    bidirectional: bool
    noop: bool = False


_ANCHOR_MARGIN = {"swap3": 2, "swap4": 3, "twist2": 1, "twist4": 3}

_SWAP3_CERT_A = "Y_{i+2,i} Y_{i+1,i} t_{d_i}"
_SWAP3_CERT_B = "Y_{i+2,i+1} Y_{i+1,i+2} t_{d_i}"
_SWAP4_CERT_A = "Y_{i+3,i+1} Y_{i+2,i+1} t_{a_i}^{-2} t_{a_i} t_{a_{i+2}} t_{c_i}"
_SWAP4_CERT_B = (
    "Y_{i,i+2} Y_{i+1,i+2} t_{a_{i+2}}^{2} t_{c_i}^{-1} t_{a_{i+2}}^{-1} t_{a_i}^{-1}"
)
_SWAP4_CERT_C = "Y_{i+1,i} t_{a_i} t_{a_{i+2}} t_{c_i} Y_{i+2,i+3}^{-1}"

_RULES: list[RewriteRule] = [
    # sign shuffles, window length 3
    RewriteRule("S3.1", "swap3", "1", ("m", "p", "M"), ("M", "p", "m"), _SWAP3_CERT_A, True),
    RewriteRule("S3.2", "swap3", "2", ("p", "m", "P"), ("P", "m", "p"), _SWAP3_CERT_A, True),
    RewriteRule("S3.3", "swap3", "3", ("m", "P", "M"), ("M", "P", "m"), _SWAP3_CERT_B, True),
    RewriteRule("S3.4", "swap3", "4", ("p", "M", "P"), ("P", "M", "p"), _SWAP3_CERT_B, True),
    # sign shuffles, window length 4
    RewriteRule("S4.1", "swap4", "1", ("m", "P", "M", "P"), ("m", "P", "m", "p"), _SWAP4_CERT_A, True),
    RewriteRule("S4.2", "swap4", "2", ("p", "M", "P", "M"), ("p", "M", "p", "m"), _SWAP4_CERT_A, True),
    RewriteRule("S4.3", "swap4", "3", ("M", "P", "M", "p"), ("m", "p", "M", "p"), _SWAP4_CERT_B, True),
    RewriteRule("S4.4", "swap4", "4", ("P", "M", "P", "m"), ("p", "m", "P", "m"), _SWAP4_CERT_B, True),
    RewriteRule("S4.5", "swap4", "5", ("m", "P", "m", "P"), ("M", "p", "M", "p"), _SWAP4_CERT_C, True),
    RewriteRule("S4.6", "swap4", "6", ("p", "M", "p", "M"), ("P", "m", "P", "m"), _SWAP4_CERT_C, True),
    # coarse two-symbol twist cases
    RewriteRule("TA.1", "twist2", "1", ("X", "x"), ("x", "X"), "Y_{i,i+1} t_{a_i}^{-1}", False),
    RewriteRule("TA.2", "twist2", "2", ("x", "X"), ("X", "x"), "Y_{i+1,i} t_{a_i}", False),
    # coarse four-symbol twist cases (four explicit no-ops)
    RewriteRule("TC.1", "twist4", "1", ("X", "x", "x", "x"), ("x", "X", "X", "X"),
                "Y_{i,i+1} Y_{i+2,i+3} Y_{i+1,i+3} Y_{i+1,i+2}^{-1} t_{c_i}^{-1}", False),
    RewriteRule("TC.2", "twist4", "2", ("x", "X", "x", "x"), ("X", "x", "X", "X"),
                "Y_{i+1,i} Y_{i+2,i+3} t_{c_i}", False),
    RewriteRule("TC.3", "twist4", "3", ("X", "X", "x", "x"), ("X", "X", "x", "x"),
                "t_{c_i}", False, noop=True),
    RewriteRule("TC.4", "twist4", "4", ("x", "x", "X", "x"), ("X", "X", "x", "X"),
                "Y_{i+2,i+3} Y_{i+1,i} t_{c_i}^{-1}", False),
    RewriteRule("TC.5", "twist4", "5", ("X", "x", "X", "x"), ("X", "x", "X", "x"),
                "Y_{i+1,i+2} Y_{i,i+2} Y_{i+3,i+2}^{-1} Y_{i+2,i+3}^{-1} Y_{i,i+3}^{-1} t_{c_i}^{-1}", False),
    RewriteRule("TC.6", "twist4", "6", ("x", "X", "X", "x"), ("x", "X", "X", "x"),
                "t_{c_i}", False, noop=True),
    RewriteRule("TC.7", "twist4", "7", ("X", "X", "X", "x"), ("x", "x", "x", "X"),
                "Y_{i,i+3} Y_{i+1,i+3} Y_{i+2,i+3} t_{c_i}^{-1}", False),
    RewriteRule("TC.8", "twist4", "8", ("x", "x", "x", "X"), ("X", "X", "X", "x"),
                "Y_{i+3,i+2} Y_{i+1,i} Y_{i+2,i} Y_{i+2,i+1}^{-1} t_{c_i}", False),
    RewriteRule("TC.9", "twist4", "9", ("X", "x", "x", "X"), ("X", "x", "x", "X"),
                "Y_{i+2,i+3} Y_{i+1,i} Y_{i+3,i} Y_{i+3,i+1}^{-1} Y_{i+3,i+2} Y_{i+2,i+3} "
                "Y_{i+1,i+3} Y_{i+1,i+2}^{-1} Y_{i,i+3} Y_{i,i+2}^{-1} Y_{i,i+1} t_{c_i}^{-1}", False),
    RewriteRule("TC.10", "twist4", "10", ("x", "X", "x", "X"), ("x", "X", "x", "X"),
                "Y_{i+2,i+1} Y_{i+3,i+1} Y_{i,i+3}^{-1} Y_{i+1,i}^{-1} Y_{i+3,i}^{-1} t_{c_i}", False),
    RewriteRule("TC.11", "twist4", "11", ("X", "X", "x", "X"), ("x", "x", "X", "x"),
                "Y_{i,i+2} Y_{i+1,i+2} Y_{i+3,i+2} Y_{i+2,i} Y_{i+2,i+1}^{-1} t_{c_i}", False),
    RewriteRule("TC.12", "twist4", "12", ("x", "x", "X", "X"), ("x", "x", "X", "X"),
                "t_{c_i}", False, noop=True),
    RewriteRule("TC.13", "twist4", "13", ("X", "x", "X", "X"), ("x", "X", "x", "x"),
                "Y_{i+3,i+1} Y_{i+2,i+1} Y_{i,i+1} Y_{i+1,i+3} Y_{i+1,i+2}^{-1} t_{c_i}^{-1}", False),
    RewriteRule("TC.14", "twist4", "14", ("x", "X", "X", "X"), ("X", "x", "x", "x"),
                "Y_{i+3,i} Y_{i+2,i} Y_{i+1,i} t_{c_i}", False),
    RewriteRule("TC.15", "twist4", "15", ("X", "X", "X", "X"), ("X", "X", "X", "X"),
                "t_{c_i}", False, noop=True),
    # index shifts on three-index circles: lower one index by two
    RewriteRule("AL.1", "alpha", "first", None, None,
                "Y_{n,n-2}^{-1} Y_{n-1,n-2}^{-1} t_{d_{n-2}}", False),
    RewriteRule("AL.2", "alpha", "second", None, None,
                "Y_{n,n-2}^{-1} Y_{n-1,n-2}^{-1} t_{d_{n-2}}", False),
    RewriteRule("AL.3", "alpha", "third", None, None,
                "Y_{n,n-2}^{-1} Y_{n-1,n-2}^{-1} t_{d_{n-2}}", False),
]

_RULES_BY_ID = {r.rule_id: r for r in _RULES}

# Terminal triples of the index-shift system and their class labels: the
# first four are equivalent to the first one-sided circle, the last four to
# the second.  Labels are consistent with the form (value 1 vs 3).
ALPHA_TERMINALS: dict[tuple[int, int, int], str] = {
    (1, 3, 4): "alpha_1",
    (1, 2, 3): "alpha_1",
    (2, 3, 5): "alpha_1",
    (2, 4, 6): "alpha_1",
    (1, 3, 5): "alpha_2",
    (1, 2, 4): "alpha_2",
    (2, 3, 4): "alpha_2",
    (2, 4, 5): "alpha_2",
}


def rule_schemas() -> tuple[RewriteRule, ...]:
    return tuple(_RULES)


def rule_by_id(rule_id: str) -> RewriteRule:
    return _RULES_BY_ID[rule_id]


_IDX_EXPR = re.compile(r"(?<![0-9A-Za-z])([a-z])([+-]\d+)?(?![0-9A-Za-z])")


def instantiate(template: str, **bindings: int) -> str:
    """Substitute index expressions like i, i+2, n-2 in a certificate."""

    def repl(m):
        name = m.group(1)
        if name not in bindings:
            return m.group(0)
        return str(bindings[name] + int(m.group(2) or 0))

    out = _IDX_EXPR.sub(repl, template)
    # collapse braces left by nested index expressions: t_{d_{3}} -> t_{d_3}
    return re.sub(r"_\{([a-d])_\{(\d+)\}\}", r"_{\1_\2}", out)


@dataclass(frozen=True)
class RuleInstance:
    """One rule pinned to a position, with its concrete certificate word."""

    rule: RewriteRule
    anchor: int | tuple[int, int, int]
    certificate: str
    lhs_bits: int
    rhs_bits: int
    positions: tuple[int, ...]

    def lhs_class(self, genus: Genus) -> H1Vector:
        return H1Vector(genus, self.lhs_bits)

    def rhs_class(self, genus: Genus) -> H1Vector:
        return H1Vector(genus, self.rhs_bits)


def _pattern_bits(pattern: tuple[str, ...], anchor: int) -> int:
    bits = 0
    for k, sym in enumerate(pattern):
        if sym in ("P", "M", "X"):
            bits |= 1 << (anchor + k - 1)
    return bits


def _window_instance(rule: RewriteRule, anchor: int) -> RuleInstance:
    span = len(rule.window)
    return RuleInstance(
        rule=rule,
        anchor=anchor,
        certificate=instantiate(rule.certificate, i=anchor),
        lhs_bits=_pattern_bits(rule.window, anchor),
        rhs_bits=_pattern_bits(rule.replacement, anchor),
        positions=tuple(range(anchor, anchor + span)),
    )


def _alpha_shift(rule: RewriteRule, triple: tuple[int, int, int]):
    """Shifted triple and slot value if the rule applies to the triple."""
    i, j, k = triple
    if rule.rule_id == "AL.1" and i > 2:
        return (i - 2, j, k), i
    if rule.rule_id == "AL.2" and j > i + 2:
        return (i, j - 2, k), j
    if rule.rule_id == "AL.3" and k > j + 2:
        return (i, j, k - 2), k
    return None


def _alpha_instance(rule: RewriteRule, triple: tuple[int, int, int]) -> RuleInstance:
    shifted, slot = _alpha_shift(rule, triple)
    lhs = 0
    for t in triple:
        lhs |= 1 << (t - 1)
    rhs = 0
    for t in shifted:
        rhs |= 1 << (t - 1)
    return RuleInstance(
        rule=rule,
        anchor=triple,
        certificate=instantiate(rule.certificate, n=slot),
        lhs_bits=lhs,
        rhs_bits=rhs,
        positions=tuple(sorted(set(triple) | set(shifted))),
    )


def _all_triples(g: int):
    for i in range(1, g + 1):
        for j in range(i + 1, g + 1):
            for k in range(j + 1, g + 1):
                yield (i, j, k)


def rule_instances(rule: RewriteRule, genus: Genus):
    """Every instance of one rule at this genus (anchor range or triples)."""
    g = genus.g
    if rule.family == "alpha":
        for triple in _all_triples(g):
            if _alpha_shift(rule, triple) is not None:
                yield _alpha_instance(rule, triple)
        return
    margin = _ANCHOR_MARGIN[rule.family]
    for anchor in range(1, g - margin + 1):
        yield _window_instance(rule, anchor)


def builtin_rule_tables(genus: Genus) -> list[RuleInstance]:
    """The complete built-in inventory instantiated at this genus."""
    out: list[RuleInstance] = []
    for rule in _RULES:
        out.extend(rule_instances(rule, genus))
    return out


def rules_json(genus: Genus) -> dict:
    """Schema-level export of the rule tables with anchor ranges."""
    entries = []
    for rule in _RULES:
        anchors = [inst.anchor for inst in rule_instances(rule, genus)]
        entries.append(
            {
                "id": rule.rule_id,
                "family": rule.family,
                "case": rule.case,
                "window": list(rule.window) if rule.window else None,
                "replacement": list(rule.replacement) if rule.replacement else None,
                "certificate": rule.certificate,
                "bidirectional": rule.bidirectional,
                "noop": rule.noop,
                "anchors": [list(a) if isinstance(a, tuple) else a for a in anchors],
            }
        )
    return {"genus": genus.g, "rules": entries}


# ---------------------------------------------------------------------------
# certificate consistency
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleFailure:
    anchor: int | tuple[int, int, int]
    expected: str
    got: str


@dataclass(frozen=True)
class RuleVerdict:
    rule_id: str
    ok: bool
    instances_checked: int
    failure: RuleFailure | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_window_local(inst: RuleInstance, genus: Genus) -> None:
    """Structural check: every transvection axis lies inside the window."""
    allowed = set(inst.positions)
    word = parse_word(inst.certificate, genus)
    for letter in word.letters:
        cls = curve_class(letter, genus)
        if cls is not None and not set(cls.support) <= allowed:
            raise AssertionError(
                f"{inst.rule.rule_id} at {inst.anchor}: axis {cls.to_text()} "
                f"leaves the window {sorted(allowed)}"
            )


def verify_rule_consistency(rule: RewriteRule, genus: Genus) -> RuleVerdict:
    """Check every instance: the certificate's action maps the decoded left
    window class to the decoded right window class (context independent by
    window locality, which is asserted structurally)."""
    checked = 0
    for inst in rule_instances(rule, genus):
        _check_window_local(inst, genus)
        m = induced_matrix(parse_word(inst.certificate, genus))
        got = m.apply(inst.lhs_class(genus))
        checked += 1
        if got.bits != inst.rhs_bits:
            return RuleVerdict(
                rule.rule_id,
                False,
                checked,
                RuleFailure(inst.anchor, inst.rhs_class(genus).to_text(), got.to_text()),
            )
    return RuleVerdict(rule.rule_id, True, checked)


def verify_all_rules(genus: Genus) -> list[RuleVerdict]:
    return [verify_rule_consistency(rule, genus) for rule in _RULES]


# ---------------------------------------------------------------------------
# the sequence graph and its normal forms
# ---------------------------------------------------------------------------


def canonical_targets(genus: Genus) -> tuple[RSequence, ...]:
    """The normal-form sequences every sequence reduces to."""
    g = genus.g
    if g == 1:
        supports = [(), (1,)]
    elif g == 2:
        supports = [(), (1,), (2,), (1, 2)]
    else:
        supports = [(), (1,), (2,), (1, 2), (1, 3), tuple(range(1, g + 1))]
    return tuple(
        RSequence.from_vector(H1Vector.from_indices(genus, s)) for s in supports
    )


def _fine_masks(rule: RewriteRule, anchor: int, g: int):
    """(window mask, lhs bits, rhs bits) or None when the pattern's sign
    parity cannot sit at this anchor."""
    span = len(rule.window)
    for k, sym in enumerate(rule.window):
        if (sym in ("p", "P")) != ((anchor + k) % 2 == 1):
            return None
    wmask = ((1 << span) - 1) << (anchor - 1)
    return wmask, _pattern_bits(rule.window, anchor), _pattern_bits(rule.replacement, anchor)


@lru_cache(maxsize=None)
def _sequence_graph(g: int):
    """Nodes are all 2^g sequences; edges are shuffle-rule instances, stored
    with the instance index and the direction that maps source to target."""
    genus = Genus(g)
    instances = [
        inst
        for rule in _RULES
        if rule.family in ("swap3", "swap4")
        for inst in rule_instances(rule, genus)
    ]
    adj: list[list[tuple[int, int, str]]] = [[] for _ in range(1 << g)]
    for idx, inst in enumerate(instances):
        masks = _fine_masks(inst.rule, inst.anchor, g)
        if masks is None:
            continue
        wmask, lhs, rhs = masks
        context = ~wmask & ((1 << g) - 1)
        for bits in range(1 << g):
            if bits & wmask == lhs:
                target = (bits & context) | rhs
                adj[bits].append((target, idx, "fwd"))
                adj[target].append((bits, idx, "rev"))
    return instances, adj


@lru_cache(maxsize=None)
def _reduction_forest(g: int):
    """Multi-source BFS tree from the normal forms over the sequence graph."""
    instances, adj = _sequence_graph(g)
    genus = Genus(g)
    dist: dict[int, int] = {}
    parent: dict[int, tuple[int, int, str]] = {}
    queue = deque()
    for target in canonical_targets(genus):
        dist[target.bits] = 0
        queue.append(target.bits)
    while queue:
        u = queue.popleft()
        for v, idx, direction in adj[u]:
            if v in dist:
                continue
            dist[v] = dist[u] + 1
            # the stored edge runs u -> v; the path step v -> u reverses it
            parent[v] = (u, idx, "rev" if direction == "fwd" else "fwd")
            queue.append(v)
    return instances, dist, parent


@dataclass(frozen=True)
class PathStep:
    rule_id: str
    anchor: int
    direction: str  # "fwd" or "rev"


@dataclass(frozen=True)
class CertifiedPath:
    """A rule path from a sequence to a normal form, with a combined word
    certificate that replays on homology classes."""

    start: RSequence
    end: RSequence
    steps: tuple[PathStep, ...]
    states: tuple[RSequence, ...]
    word: str
    verified: bool

    def to_json(self) -> dict:
        return {
            "genus": self.start.genus.g,
            "start": self.start.ascii(),
            "end": self.end.ascii(),
            "steps": [
                {"rule": s.rule_id, "anchor": s.anchor, "direction": s.direction}
                for s in self.steps
            ],
            "states": [s.ascii() for s in self.states],
            "word": self.word,
            "verified": self.verified,
        }


def reduce_rseq(s: RSequence) -> CertifiedPath:
    """Shortest rule path from s to a normal form, replay-verified.

    Raises FalsificationError if the component of s contains no normal form
    (which would refute the classification at symbol level; never expected).
    """
    g = s.genus.g
    instances, dist, parent = _reduction_forest(g)
    if s.bits not in dist:
        raise FalsificationError(
            f"sequence {s.ascii()} lies in a component without a normal form"
        )
    steps = []
    states = [s.bits]
    cur = s.bits
    word_parts: list[str] = []
    while cur in parent:
        nxt, idx, direction = parent[cur]
        inst = instances[idx]
        word = parse_word(inst.certificate, s.genus)
        if direction == "rev":
            word = word.inverse()
        word_parts.append(word.spell())
        steps.append(PathStep(inst.rule.rule_id, inst.anchor, direction))
        states.append(nxt)
        cur = nxt
    end = RSequence(s.genus, cur)
    combined_text = " ".join(reversed(word_parts))
    m = induced_matrix(parse_word(combined_text, s.genus))
    if m.apply(rseq_decode(s)) != rseq_decode(end):
        raise AssertionError("path certificate failed to replay")
    return CertifiedPath(
        start=s,
        end=end,
        steps=tuple(steps),
        states=tuple(RSequence(s.genus, b) for b in states),
        word=combined_text,
        verified=True,
    )


@dataclass(frozen=True)
class ComponentSummary:
    size: int
    representative: str
    canonical_members: tuple[str, ...]
    form_value: int
    support_parity: int
    ok: bool


@dataclass(frozen=True)
class ComponentsReport:
    genus: int
    components: tuple[ComponentSummary, ...]
    ok: bool

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "ok": self.ok,
            "components": [
                {
                    "size": c.size,
                    "representative": c.representative,
                    "canonical": list(c.canonical_members),
                    "form_value": c.form_value,
                    "support_parity": c.support_parity,
                    "ok": c.ok,
                }
                for c in self.components
            ],
        }


def classify_rseq_components(genus: Genus) -> ComponentsReport:
    """Connected components of the sequence graph, with the invariants that
    must be constant on each (form value, support parity) and the assertion
    that every component contains a normal form."""
    g = genus.g
    if g > 12:
        raise BudgetExceededError(
            f"component classification is budgeted for genus <= 12, got {g}"
        )
    _, adj = _sequence_graph(g)
    canon = {s.bits for s in canonical_targets(genus)}
    qtab = q_table(genus)
    seen = [False] * (1 << g)
    summaries = []
    all_ok = True
    for start in range(1 << g):
        if seen[start]:
            continue
        members = [start]
        seen[start] = True
        head = 0
        while head < len(members):
            u = members[head]
            head += 1
            for v, _, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    members.append(v)
        q_values = {qtab[b] for b in members}
        parities = {b.bit_count() & 1 for b in members}
        canonical_members = tuple(
            RSequence(genus, b).ascii() for b in sorted(canon & set(members))
        )
        comp_ok = (
            len(q_values) == 1 and len(parities) == 1 and len(canonical_members) >= 1
        )
        all_ok = all_ok and comp_ok
        summaries.append(
            ComponentSummary(
                size=len(members),
                representative=RSequence(genus, min(members)).ascii(),
                canonical_members=canonical_members,
                form_value=next(iter(q_values)),
                support_parity=next(iter(parities)),
                ok=comp_ok,
            )
        )
    return ComponentsReport(genus=g, components=tuple(summaries), ok=all_ok)


# ---------------------------------------------------------------------------
# index-shift reduction of three-index circles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaTriple:
    i: int
    j: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.i < self.j < self.k:
            raise ValueError("triple indices must be strictly ascending from 1")

    @property
    def as_tuple(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)


@dataclass(frozen=True)
class AlphaStep:
    rule_id: str
    before: tuple[int, int, int]
    after: tuple[int, int, int]
    certificate: str


@dataclass(frozen=True)
class AlphaReduction:
    start: tuple[int, int, int]
    terminal: tuple[int, int, int]
    label: str  # "alpha_1" or "alpha_2"
    steps: tuple[AlphaStep, ...]
    word: str
    verified: bool

    def to_json(self) -> dict:
        return {
            "start": list(self.start),
            "terminal": list(self.terminal),
            "label": self.label,
            "steps": [
                {
                    "rule": s.rule_id,
                    "before": list(s.before),
                    "after": list(s.after),
                    "certificate": s.certificate,
                }
                for s in self.steps
            ],
            "word": self.word,
            "verified": self.verified,
        }


def reduce_alpha(genus: Genus, triple: AlphaTriple) -> AlphaReduction:
    """Shift the triple down (first index, then second, then third) until one
    of the eight terminals is reached; certificate replay-verified."""
    if triple.k > genus.g:
        raise ValueError(f"triple {triple.as_tuple} does not fit genus {genus.g}")
    start = triple.as_tuple
    cur = start
    steps: list[AlphaStep] = []
    word_parts: list[str] = []
    for _ in range(sum(start) // 2 + 1):
        applied = False
        for rule_id in ("AL.1", "AL.2", "AL.3"):
            rule = _RULES_BY_ID[rule_id]
            shift = _alpha_shift(rule, cur)
            if shift is not None:
                nxt, slot = shift
                cert = instantiate(rule.certificate, n=slot)
                steps.append(AlphaStep(rule_id, cur, nxt, cert))
                word_parts.append(cert)
                cur = nxt
                applied = True
                break
        if not applied:
            break
    else:
        raise AssertionError("index-shift loop failed to terminate")
    if cur not in ALPHA_TERMINALS:
        raise FalsificationError(
            f"triple {start} stopped at {cur}, which is not a listed terminal"
        )
    combined = " ".join(reversed(word_parts))
    m = induced_matrix(parse_word(combined, genus))
    if m.apply(alpha_class(genus, start)) != alpha_class(genus, cur):
        raise AssertionError("index-shift certificate failed to replay")
    return AlphaReduction(
        start=start,
        terminal=cur,
        label=ALPHA_TERMINALS[cur],
        steps=tuple(steps),
        word=combined,
        verified=True,
    )
