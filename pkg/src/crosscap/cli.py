"""Command-line front end.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success or
verified, 1 falsified verification (witness on stdout), 2 usage error,
3 search budget exhausted.  JSON output is canonical (sorted keys) and is
byte-identical for identical inputs regardless of worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from .f2core import BudgetExceededError, Genus, H1Vector
from .gmform import q_eval, z4_str
from .groupops import (
    DEFAULT_NODE_CAP,
    enumerate_orthogonal,
    factorize,
    reduce_q2_vector,
    standard_generators,
    verify_generation,
)
from .rewrite import (
    AlphaTriple,
    FalsificationError,
    RSequence,
    classify_rseq_components,
    reduce_alpha,
    reduce_rseq,
    rule_schemas,
    rules_json,
    verify_rule_consistency,
)
from .words import decide_extendable, induced_matrix, parse_word, witness_detail

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

# stable claim names for the lemma identifiers accepted by verify-lemma
LEMMA_CLAIMS = {
    "4.4": "G-g-eq-r-circle",
    "4.6": "product-Y-homeo",
    "4.8": "gen-Og-os-red",
    "4.10": "gamma2-short",
    "thm4.1": "generator-pin",
}
_CLAIM_TO_ID = {v: k for k, v in LEMMA_CLAIMS.items()}


def _emit(payload: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def _genus(args) -> Genus:
    return Genus(args.genus)


def _cmd_eval_form(args) -> int:
    genus = _genus(args)
    v = H1Vector.parse(genus, args.vector)
    value = q_eval(v)
    payload = {
        "genus": genus.g,
        "vector": v.to_text(),
        "value": value,
        "display": z4_str(value, signed=args.signed),
    }
    _emit(payload, [f"q({v.to_text()}) = {z4_str(value, signed=args.signed)}"], args.format)
    return EXIT_OK


def _cmd_act(args) -> int:
    genus = _genus(args)
    word = parse_word(args.word, genus)
    v = H1Vector.parse(genus, args.vector)
    image = induced_matrix(word).apply(v)
    payload = {
        "genus": genus.g,
        "word": word.spell(),
        "vector": v.to_text(),
        "image": image.to_text(),
    }
    _emit(payload, [f"{v.to_text()} -> {image.to_text()}"], args.format)
    return EXIT_OK


def _cmd_extendable(args) -> int:
    genus = _genus(args)
    verdict = decide_extendable(parse_word(args.word, genus))
    payload = verdict.to_json()
    if verdict.extendable:
        lines = ["extendable: yes"]
    else:
        lines = [f"extendable: no ({witness_detail(verdict)})"]
    _emit(payload, lines, args.format)
    return EXIT_OK


def _cmd_factorize(args) -> int:
    genus = _genus(args)
    word = parse_word(args.word, genus)
    target = induced_matrix(word)
    gens = standard_generators(genus)
    result = factorize(
        target,
        [m for _, m in gens],
        labels=[label for label, _ in gens],
        cap=args.cap,
    )
    payload = {"genus": genus.g, "input": word.spell(), **result.to_json()}
    if result.status == "budget_exhausted":
        print("factorization budget exhausted; nothing is claimed", file=sys.stderr)
        _emit(payload, ["budget exhausted"], args.format)
        return EXIT_BUDGET
    if result.found:
        text = " ".join(result.word_labels) if result.word_labels else "(empty word)"
        lines = [f"found: {text} (length {len(result.word)})"]
    else:
        lines = ["not a member of the generated subgroup (search closed)"]
    _emit(payload, lines, args.format)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    genus = _genus(args)
    table = enumerate_orthogonal(genus, workers=args.workers)
    payload = table.to_json(include_elements=args.elements)
    _emit(payload, [f"order {table.order} (genus {genus.g})"], args.format)
    return EXIT_OK


def _cmd_reduce_rseq(args) -> int:
    s = RSequence.parse(args.sequence)
    if args.genus is not None and args.genus != s.genus.g:
        raise ValueError(
            f"sequence length {s.genus.g} does not match --genus {args.genus}"
        )
    path = reduce_rseq(s)
    payload = path.to_json()
    lines = [
        f"{path.start.display()} -> {path.end.display()} in {len(path.steps)} steps",
        f"word: {path.word or '(empty)'}",
    ]
    _emit(payload, lines, args.format)
    return EXIT_OK


def _cmd_reduce_alpha(args) -> int:
    genus = _genus(args)
    red = reduce_alpha(genus, AlphaTriple(args.i, args.j, args.k))
    payload = {"genus": genus.g, **red.to_json()}
    lines = [
        f"({args.i},{args.j},{args.k}) -> {red.terminal} [{red.label}] "
        f"in {len(red.steps)} steps",
        f"word: {red.word or '(empty)'}",
    ]
    _emit(payload, lines, args.format)
    return EXIT_OK


def _cmd_reduce_q2(args) -> int:
    genus = _genus(args)
    red = reduce_q2_vector(H1Vector.parse(genus, args.vector))
    payload = red.to_json()
    lines = [
        f"{red.start.to_text()} -> {red.end.to_text()} "
        f"({len(red.moves)} moves, verified)",
        f"word: {red.word or '(empty)'}",
    ]
    _emit(payload, lines, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# lemma verification workflows
# ---------------------------------------------------------------------------


def _verify_44(genus: Genus) -> tuple[bool, dict, list[str]]:
    report = classify_rseq_components(genus)
    reduced = 0
    for bits in range(1 << genus.g):
        path = reduce_rseq(RSequence(genus, bits))
        if not path.verified:
            return False, {"failed_sequence": RSequence(genus, bits).ascii()}, []
        reduced += 1
    detail = {"sequences": reduced, "components": report.to_json()["components"]}
    lines = [
        f"all {reduced} sequences reduce to a normal form "
        f"({len(report.components)} components)"
    ]
    return report.ok, detail, lines


def _verify_46(genus: Genus) -> tuple[bool, dict, list[str]]:
    verdicts = [
        verify_rule_consistency(rule, genus)
        for rule in rule_schemas()
        if rule.family in ("twist2", "twist4")
    ]
    ok = all(v.ok for v in verdicts)
    detail = {
        "rules": [
            {
                "id": v.rule_id,
                "instances": v.instances_checked,
                "ok": v.ok,
                **(
                    {
                        "failing_anchor": v.failure.anchor,
                        "expected": v.failure.expected,
                        "got": v.failure.got,
                    }
                    if v.failure
                    else {}
                ),
            }
            for v in verdicts
        ],
        "tables": rules_json(genus)["rules"],
    }
    total = sum(v.instances_checked for v in verdicts)
    lines = [f"{len(verdicts)} twist cases, {total} instances, all consistent"
             if ok else "FALSIFIED: twist case tables"]
    return ok, detail, lines


def _verify_48(genus: Genus, cap: int, workers: int) -> tuple[bool, dict, list[str]]:
    report = verify_generation(genus, cap=cap, workers=workers)
    if not report.closure_complete:
        raise BudgetExceededError("closure hit the node cap; raise --cap")
    lines = [
        f"closure order {report.closure_order}, enumerated order "
        f"{report.enumerated_order}, equal: {report.equal} "
        f"(diameter {report.diameter})"
    ]
    return report.equal, report.to_json(), lines


def _verify_410(genus: Genus) -> tuple[bool, dict, list[str]]:
    rule_verdicts = [
        verify_rule_consistency(rule, genus)
        for rule in rule_schemas()
        if rule.family == "alpha"
    ]
    ok = all(v.ok for v in rule_verdicts)
    counts: dict[str, int] = {}
    triples = 0
    for t in combinations(range(1, genus.g + 1), 3):
        red = reduce_alpha(genus, AlphaTriple(*t))
        ok = ok and red.verified
        counts[str(red.terminal)] = counts.get(str(red.terminal), 0) + 1
        triples += 1
    detail = {
        "triples": triples,
        "terminal_counts": counts,
        "shift_rules": [
            {"id": v.rule_id, "instances": v.instances_checked, "ok": v.ok}
            for v in rule_verdicts
        ],
    }
    lines = [f"all {triples} triples reach a listed terminal; shift rules consistent"]
    return ok, detail, lines


def _verify_thm41(genus: Genus, cap: int, workers: int) -> tuple[bool, dict, list[str]]:
    g = genus.g
    words = []
    words += [f"Y_{{{i},{j}}}" for i in range(1, g + 1) for j in range(1, g + 1) if i != j]
    words += [f"t_{{a_{i}}}^{{2}}" for i in range(1, g)]
    words += [f"t_{{c_{i}}}^{{2}}" for i in range(1, g - 2)]
    words += [f"t_{{d_{i}}}" for i in range(1, g - 1)]
    words += [f"t_{{a_{i}}} t_{{a_{i+2}}} t_{{c_{i}}}" for i in range(1, g - 2)]
    failing = [w for w in words if not decide_extendable(parse_word(w, genus)).extendable]
    generation = verify_generation(genus, cap=cap, workers=workers)
    if not generation.closure_complete:
        raise BudgetExceededError("closure hit the node cap; raise --cap")
    ok = not failing and generation.equal
    detail = {
        "generator_words": len(words),
        "non_extendable_generators": failing,
        "image_generates_isometries": generation.equal,
        "orders": {
            "closure": generation.closure_order,
            "enumerated": generation.enumerated_order,
        },
    }
    lines = [
        f"{len(words)} generator words all extendable; homology image generates "
        f"the full isometry group: {generation.equal}"
    ]
    return ok, detail, lines


def _cmd_verify_lemma(args) -> int:
    lemma = _CLAIM_TO_ID.get(args.lemma, args.lemma)
    if lemma not in LEMMA_CLAIMS:
        raise ValueError(
            f"unknown lemma id {args.lemma!r}; choose from "
            f"{sorted(LEMMA_CLAIMS)} or {sorted(_CLAIM_TO_ID)}"
        )
    genus = _genus(args)
    if lemma == "4.4":
        ok, detail, lines = _verify_44(genus)
    elif lemma == "4.6":
        ok, detail, lines = _verify_46(genus)
    elif lemma == "4.8":
        ok, detail, lines = _verify_48(genus, args.cap, args.workers)
    elif lemma == "4.10":
        ok, detail, lines = _verify_410(genus)
    else:
        ok, detail, lines = _verify_thm41(genus, args.cap, args.workers)
    payload = {
        "lemma": lemma,
        "claim": LEMMA_CLAIMS[lemma],
        "genus": genus.g,
        "ok": ok,
        "detail": detail,
    }
    if not ok:
        _emit(payload, ["FALSIFIED: " + (lines[0] if lines else "")], args.format)
        print(f"verification of {lemma} falsified", file=sys.stderr)
        return EXIT_FALSIFIED
    _emit(payload, [f"{lemma} ({LEMMA_CLAIMS[lemma]}) verified: " + lines[0]], args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sub, genus_required: bool = True):
    if genus_required:
        sub.add_argument("-g", "--genus", type=int, required=True)
    sub.add_argument("--format", choices=("text", "json"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosscap",
        description=(
            "mod-4 form evaluation, extendability decisions, isometry-group "
            "workflows and certified circle rewriting"
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("eval-form", help="evaluate the form on a class")
    _add_common(p)
    p.add_argument("vector")
    p.add_argument("--signed", action="store_true", help="display +1/-1 style")
    p.set_defaults(func=_cmd_eval_form)

    p = subs.add_parser("act", help="apply a word's homology action to a class")
    _add_common(p)
    p.add_argument("word")
    p.add_argument("vector")
    p.set_defaults(func=_cmd_act)

    p = subs.add_parser("extendable", help="decide extendability of a word")
    _add_common(p)
    p.add_argument("word")
    p.set_defaults(func=_cmd_extendable)

    p = subs.add_parser(
        "factorize", help="factor a word's action over the standard generators"
    )
    _add_common(p)
    p.add_argument("word")
    p.add_argument("--cap", type=int, default=DEFAULT_NODE_CAP)
    p.set_defaults(func=_cmd_factorize)

    p = subs.add_parser("enumerate", help="enumerate the isometry group")
    _add_common(p)
    p.add_argument("--elements", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_enumerate)

    p = subs.add_parser("verify-lemma", help="run one verification workflow")
    p.add_argument("lemma", help="4.4 | 4.6 | 4.8 | 4.10 | thm4.1 (or claim name)")
    _add_common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_verify_lemma)

    p = subs.add_parser("reduce-rseq", help="reduce a sequence to normal form")
    p.add_argument("sequence")
    p.add_argument("-g", "--genus", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=_cmd_reduce_rseq)

    p = subs.add_parser("reduce-alpha", help="reduce a three-index circle")
    _add_common(p)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=_cmd_reduce_alpha)

    p = subs.add_parser("reduce-q2", help="reduce a form-value-2 class to x1+x3")
    _add_common(p)
    p.add_argument("vector")
    p.set_defaults(func=_cmd_reduce_q2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FalsificationError as exc:
        sys.stdout.write(json.dumps({"falsified": str(exc)}, sort_keys=True) + "\n")
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
