"""Rule-table transliteration of native-script text into the Latin alphabet.

A table is an ordered set of rewrite rules compiled for longest-match
scanning. Rule classes encode abugida behaviour: a CONSONANT carries an
inherent "a" vowel that a following VOWEL_SIGN replaces and a VIRAMA
suppresses. Cyrillic tables are pure STANDALONE rules.

Tables ship as TSV data files (``tables/devanagari.tsv``,
``tables/cyrillic.tsv``) so new scripts need no code change.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from enum import Enum

from .errors import TableError

# Inherent vowel emitted after a bare abugida consonant.
INHERENT_VOWEL = "a"

# Characters allowed in romanized output (and in dataset text).
_LATIN_ALLOWED = frozenset(
    "abcdefghijklmnopqrstuvwxyz0123456789 '-.,!?"
)


class RuleClass(Enum):
    STANDALONE = "STANDALONE"
    CONSONANT = "CONSONANT"
    VOWEL_SIGN = "VOWEL_SIGN"
    VIRAMA = "VIRAMA"


@dataclass(frozen=True)
class TransliterationRule:
    source: str
    target: str
    rule_class: RuleClass = RuleClass.STANDALONE


@dataclass(frozen=True)
class TransliterationTable:
    rules: tuple[TransliterationRule, ...]
    script: str = "other"
    pass_through: str = "keep"  # keep | drop | error
    # Compiled lookup: source string -> rule, plus the distinct source
    # lengths in descending order for the longest-match scan.
    lookup: dict[str, TransliterationRule] = field(repr=False, default_factory=dict)
    source_lengths: tuple[int, ...] = ()


def validate_latin(text: str) -> bool:
    """True iff every character is in the permitted romanized alphabet."""
    return all(ch in _LATIN_ALLOWED for ch in text)


def compile_table(
    rules: list[TransliterationRule],
    script: str = "other",
    pass_through: str = "keep",
) -> TransliterationTable:
    """Index rules for longest-match scanning, rejecting invalid tables."""
    if not rules:
        raise TableError("no rules")
    if pass_through not in ("keep", "drop", "error"):
        raise TableError(f"unknown pass_through policy: {pass_through!r}")
    lookup: dict[str, TransliterationRule] = {}
    for rule in rules:
        if not rule.source:
            raise TableError("rule with empty source")
        if not validate_latin(rule.target):
            raise TableError(
                f"rule {rule.source!r}: target {rule.target!r} contains "
                "characters outside the romanized alphabet"
            )
        if rule.source in lookup:
            raise TableError(f"duplicate source {rule.source!r}")
        lookup[rule.source] = rule
    if script == "devanagari":
        n_virama = sum(1 for r in rules if r.rule_class is RuleClass.VIRAMA)
        if n_virama != 1:
            raise TableError(
                f"devanagari table needs exactly one VIRAMA rule, found {n_virama}"
            )
    lengths = tuple(sorted({len(s) for s in lookup}, reverse=True))
    return TransliterationTable(
        rules=tuple(rules),
        script=script,
        pass_through=pass_through,
        lookup=lookup,
        source_lengths=lengths,
    )


def _match_at(text: str, pos: int, table: TransliterationTable):
    """Longest rule whose source starts at pos, or None."""
    for length in table.source_lengths:
        if pos + length > len(text):
            continue
        rule = table.lookup.get(text[pos : pos + length])
        if rule is not None:
            return rule
    return None


def transliterate(text: str, table: TransliterationTable) -> str:
    """Rewrite text left to right, longest matching rule source first.

    CONSONANT rules look ahead one match: a VOWEL_SIGN replaces the
    inherent vowel, a VIRAMA suppresses it, anything else leaves it as
    "a". A VOWEL_SIGN or VIRAMA that was not consumed by a consonant
    (degenerate input) emits its own target / nothing.
    """
    out: list[str] = []
    pos = 0
    n = len(text)
    while pos < n:
        rule = _match_at(text, pos, table)
        if rule is None:
            ch = text[pos]
            if table.pass_through == "keep":
                out.append(ch)
            elif table.pass_through == "error":
                raise TableError(
                    f"unmapped character U+{ord(ch):04X} at offset {pos}"
                )
            pos += 1
            continue
        pos += len(rule.source)
        if rule.rule_class is RuleClass.VIRAMA:
            continue
        out.append(rule.target)
        if rule.rule_class is RuleClass.CONSONANT:
            nxt = _match_at(text, pos, table)
            if nxt is not None and nxt.rule_class is RuleClass.VOWEL_SIGN:
                out.append(nxt.target)
                pos += len(nxt.source)
            elif nxt is not None and nxt.rule_class is RuleClass.VIRAMA:
                pos += len(nxt.source)
            else:
                out.append(INHERENT_VOWEL)
    return "".join(out)


def parse_rules(lines, where: str = "<memory>") -> list[TransliterationRule]:
    """Parse `source<TAB>target<TAB>rule_class` lines, '#' comments ignored."""
    rules = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TableError(
                f"{where}:{lineno}: expected 3 tab-separated columns, got {len(parts)}"
            )
        source, target, class_name = parts
        try:
            rule_class = RuleClass(class_name)
        except ValueError:
            raise TableError(
                f"{where}:{lineno}: unknown rule class {class_name!r}"
            ) from None
        rules.append(TransliterationRule(source, target, rule_class))
    return rules


def load_table(path, script: str = "other", pass_through: str = "keep") -> TransliterationTable:
    """Compile a table from a TSV rule file."""
    with open(path, encoding="utf-8") as fh:
        rules = parse_rules(fh, where=str(path))
    if not rules:
        raise TableError(f"{path}: no rules")
    return compile_table(rules, script=script, pass_through=pass_through)


BUILTIN_TABLES = ("devanagari", "cyrillic")


def builtin_table(name: str, pass_through: str = "keep") -> TransliterationTable:
    """Load one of the shipped tables ('devanagari' or 'cyrillic')."""
    if name not in BUILTIN_TABLES:
        raise TableError(f"no builtin table named {name!r}")
    resource = importlib.resources.files("rlid") / "tables" / f"{name}.tsv"
    rules = parse_rules(resource.read_text(encoding="utf-8").splitlines(), where=name)
    return compile_table(rules, script=name, pass_through=pass_through)
