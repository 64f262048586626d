"""Order-preserving named-entity tagging and decoding.

Entities are replaced by sequential placeholders (__NE0, __NE1, ...)
before translation and restored from a per-sentence target dictionary
afterwards, so bindings like who-calls-whom survive a reordering
translator.  Tagging is dictionary lookup first (longest match wins,
multi-token surfaces allowed), then a small-edit-distance fallback for
single tokens.  Decoding is deliberately forgiving because model output
is untrusted: placeholders without a dictionary entry are dropped and
counted rather than raised on.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

Tokens = Sequence[str]

PLACEHOLDER_PREFIX = "__NE"
_PLACEHOLDER_RE = re.compile(r"__NE\d+")


def placeholder(index: int) -> str:
    return f"{PLACEHOLDER_PREFIX}{index}"


def is_placeholder(token: str) -> bool:
    return _PLACEHOLDER_RE.fullmatch(token) is not None


def levenshtein(a: str, b: str, cap: int | None = None) -> int:
    """Two-row dynamic-programming edit distance.

    With a cap, stops as soon as the distance provably exceeds it and
    returns cap + 1; results at or below the cap are exact.
    """
    if len(a) < len(b):
        a, b = b, a
    if cap is not None and len(a) - len(b) > cap:
        return cap + 1
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        if cap is not None and min(current) > cap:
            return cap + 1
        previous = current
    return previous[len(b)]


class LexiconTable:
    """Entity id -> language -> surface forms, with cached match indexes.

    Immutable after load by convention; the lazily built per-language
    indexes only cache derived views of the same data.
    """

    def __init__(self, entities: dict[str, dict[str, list[str]]]):
        self.entities = entities
        self._exact: dict[str, dict[str, list[tuple[tuple[str, ...], str]]]] = {}
        self._fuzzy: dict[str, list[tuple[str, str, str]]] = {}
        self._fuzzy_cache: dict[tuple[str, str, int], str | None] = {}

    def __len__(self) -> int:
        return len(self.entities)

    def forms(self, entity_id: str, language: str) -> list[str]:
        return self.entities.get(entity_id, {}).get(language, [])

    def indexes(self, language: str):
        if language not in self._exact:
            exact: dict[str, list[tuple[tuple[str, ...], str]]] = {}
            fuzzy: list[tuple[str, str, str]] = []
            for entity_id in sorted(self.entities):
                for form in self.entities[entity_id].get(language, []):
                    tokens = tuple(form.split())
                    exact.setdefault(tokens[0], []).append((tokens, entity_id))
                    if len(tokens) == 1:
                        fuzzy.append((form.casefold(), form, entity_id))
            for candidates in exact.values():
                candidates.sort(key=lambda item: (-len(item[0]), item[1], item[0]))
            fuzzy.sort()
            self._exact[language] = exact
            self._fuzzy[language] = fuzzy
        return self._exact[language], self._fuzzy[language]


def load_lexicon(path: str | Path) -> LexiconTable:
    """Read entity<TAB>language<TAB>form1||form2... rows.

    Duplicate (entity, language) rows merge their form lists, keeping
    first-seen order.
    """
    path = Path(path)
    entities: dict[str, dict[str, list[str]]] = {}
    for number, row in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not row.strip():
            continue
        parts = row.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{number}: expected entity<TAB>language<TAB>forms")
        entity_id, language, forms_field = parts
        forms = [form.strip() for form in forms_field.split("||")]
        if not entity_id or not language or any(not form for form in forms):
            raise ValueError(f"{path}:{number}: empty field")
        bucket = entities.setdefault(entity_id, {}).setdefault(language, [])
        for form in forms:
            if form not in bucket:
                bucket.append(form)
    if not entities:
        raise ValueError(f"{path}: no lexicon rows")
    return LexiconTable(entities)


@dataclass(frozen=True)
class Mention:
    """One entity occurrence: token span [start, end) and matched surface."""

    start: int
    end: int
    entity_id: str
    surface: str


@dataclass(frozen=True)
class TaggedSentence:
    """Placeholder template plus the ordered placeholder -> entity map."""

    template: tuple[str, ...]
    source_dict: dict[str, tuple[str, str]]


TargetDictionary = dict[str, str]


def find_mentions(
    tokens: Tokens, language: str, table: LexiconTable, edit_threshold: int = 2
) -> list[Mention]:
    """Scan left to right for entity mentions.

    At each position the longest exact surface match wins (ties by
    entity id); only if nothing matches exactly is the single token
    tried against single-token forms at Levenshtein distance at most
    min(edit_threshold, ceil(len/3)), case-insensitively.
    """
    exact, fuzzy = table.indexes(language)
    mentions: list[Mention] = []
    pos = 0
    n = len(tokens)
    while pos < n:
        matched = None
        for form_tokens, entity_id in exact.get(tokens[pos], ()):
            end = pos + len(form_tokens)
            if end <= n and tuple(tokens[pos:end]) == form_tokens:
                matched = Mention(pos, end, entity_id, " ".join(tokens[pos:end]))
                break
        if matched is None and edit_threshold > 0:
            entity_id = _fuzzy_entity(tokens[pos], language, table, fuzzy, edit_threshold)
            if entity_id is not None:
                matched = Mention(pos, pos + 1, entity_id, tokens[pos])
        if matched is not None:
            mentions.append(matched)
            pos = matched.end
        else:
            pos += 1
    return mentions


def _fuzzy_entity(
    token: str,
    language: str,
    table: LexiconTable,
    fuzzy: list[tuple[str, str, str]],
    edit_threshold: int,
) -> str | None:
    # memoized per table: the same tokens recur across a corpus
    cache_key = (language, token, edit_threshold)
    if cache_key in table._fuzzy_cache:
        return table._fuzzy_cache[cache_key]
    cap = min(edit_threshold, math.ceil(len(token) / 3))
    best_key = None
    best_entity = None
    if cap > 0:
        token_cf = token.casefold()
        for form_cf, form, entity_id in fuzzy:
            distance = levenshtein(token_cf, form_cf, cap=cap)
            if distance > cap:
                continue
            key = (distance, entity_id, form)
            if best_key is None or key < best_key:
                best_key = key
                best_entity = entity_id
    table._fuzzy_cache[cache_key] = best_entity
    return best_entity


def render_template(
    tokens: Tokens, mentions: Sequence[Mention], binding: Mapping[str, str]
) -> tuple[str, ...]:
    """Substitute mention spans with their bound placeholders.

    Mentions of entities absent from the binding keep their surface
    tokens untouched.
    """
    by_start = {mention.start: mention for mention in mentions}
    out: list[str] = []
    pos = 0
    while pos < len(tokens):
        mention = by_start.get(pos)
        if mention is not None:
            name = binding.get(mention.entity_id)
            if name is not None:
                out.append(name)
            else:
                out.extend(tokens[pos : mention.end])
            pos = mention.end
        else:
            out.append(tokens[pos])
            pos += 1
    return tuple(out)


def tag_sentence(
    tokens: Tokens, source_language: str, table: LexiconTable, edit_threshold: int = 2
) -> TaggedSentence:
    """Replace entity mentions with placeholders numbered by first appearance.

    Repeated mentions of one entity reuse one placeholder; the source
    dictionary records the first matched surface.
    """
    mentions = find_mentions(tokens, source_language, table, edit_threshold)
    binding: dict[str, str] = {}
    source_dict: dict[str, tuple[str, str]] = {}
    for mention in mentions:
        if mention.entity_id not in binding:
            name = placeholder(len(binding))
            binding[mention.entity_id] = name
            source_dict[name] = (mention.entity_id, mention.surface)
    return TaggedSentence(
        template=render_template(tokens, mentions, binding), source_dict=source_dict
    )


def pair_templates(
    source_tokens: Tokens,
    source_mentions: Sequence[Mention],
    target_tokens: Tokens,
    target_mentions: Sequence[Mention],
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Templates for a training pair, numbering bound on the source side.

    The target reuses the source's entity -> index binding so reordered
    mentions keep their indices; target-only entities stay as surfaces.
    """
    binding: dict[str, str] = {}
    for mention in source_mentions:
        if mention.entity_id not in binding:
            binding[mention.entity_id] = placeholder(len(binding))
    return (
        render_template(source_tokens, source_mentions, binding),
        render_template(target_tokens, target_mentions, binding),
    )


def build_target_dictionary(
    tagged: TaggedSentence, target_language: str, table: LexiconTable
) -> TargetDictionary:
    """Map each placeholder to its first listed target surface.

    Entities missing in the target language fall back to the matched
    source surface, which at least carries the name across.
    """
    out: TargetDictionary = {}
    for name, (entity_id, surface) in tagged.source_dict.items():
        forms = table.forms(entity_id, target_language)
        out[name] = forms[0] if forms else surface
    return out


def detag(
    template_tokens: Tokens, target_dict: Mapping[str, str]
) -> tuple[list[str], list[str]]:
    """Substitute placeholders from the dictionary; surroundings untouched.

    Returns the decoded tokens and the list of placeholders that had no
    dictionary entry and were therefore dropped.
    """
    tokens: list[str] = []
    dropped: list[str] = []
    for token in template_tokens:
        if is_placeholder(token):
            surface = target_dict.get(token)
            if surface is None:
                dropped.append(token)
            else:
                tokens.extend(surface.split())
        else:
            tokens.append(token)
    return tokens, dropped
