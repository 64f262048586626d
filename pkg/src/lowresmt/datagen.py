"""Training-set emission for the three-stage pretraining pipeline.

Stage 1 trains on the complete graph over the chosen family (every
ordered language pair, full text, low-resource data excluded).  Stage 2
restricts every language to the low-resource line ids (the symmetric
subset) and adds the low-resource language to the complete graph.
Stage 3 keeps the symmetric subset but emits a star graph: every family
member into the low-resource language only.

Every emitted source line starts with a direction tag pair
``__opt_src_<src> __opt_tgt_<tgt>`` and is entity-tagged first, so
placeholders and tags are first-class vocabulary items.  Output order is
pair-major then line-minor and writes are byte-deterministic: two runs
over the same inputs produce identical files, which the manifest
checksums pin down.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import ParallelText, SplitSpec, intersect, restrict
from .corpus import split as split_corpus
from .lexicon import LexiconTable, Mention, find_mentions, pair_templates, placeholder

SRC_TAG_PREFIX = "__opt_src_"
TGT_TAG_PREFIX = "__opt_tgt_"

View = Mapping[str, ParallelText]
Mentions = Mapping[str, Mapping[str, Sequence[Mention]]]


@dataclass(frozen=True)
class DirectionTag:
    """Source/target language pair rendered as two leading tag tokens."""

    src: str
    tgt: str

    def __post_init__(self) -> None:
        if self.src == self.tgt:
            raise ValueError(f"direction tag with identical codes: {self.src!r}")

    def tokens(self) -> tuple[str, str]:
        return (f"{SRC_TAG_PREFIX}{self.src}", f"{TGT_TAG_PREFIX}{self.tgt}")

    def render(self) -> str:
        return " ".join(self.tokens())


@dataclass(frozen=True)
class Vocabulary:
    """Token types in frequency-descending then lexicographic order."""

    tokens: tuple[str, ...]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", frozenset(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index


@dataclass(frozen=True)
class StageSpec:
    """One stage of the pipeline: which languages, which split, where to."""

    stage: int
    languages: tuple[str, ...]
    low_resource: str
    split: SplitSpec
    out_dir: Path

    def __post_init__(self) -> None:
        object.__setattr__(self, "languages", tuple(self.languages))
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        if self.stage not in (1, 2, 3):
            raise ValueError(f"stage must be 1, 2 or 3, got {self.stage}")
        if not self.languages:
            raise ValueError("stage needs at least one family language")
        if self.low_resource in self.languages:
            raise ValueError(
                f"low-resource code {self.low_resource!r} must not appear in the family"
            )


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _check_view(languages: Sequence[str], view: View) -> list[str]:
    missing = [lang for lang in languages if lang not in view]
    if missing:
        raise ValueError(f"view lacks language(s): {', '.join(missing)}")
    ids = list(view[languages[0]].lines)
    for lang in languages[1:]:
        if list(view[lang].lines) != ids:
            raise ValueError(
                f"view for {lang!r} is not line-aligned with {languages[0]!r}"
            )
    return ids


def _pair_lines(src_text, tgt_text, tag, line_ids, src_mentions, tgt_mentions):
    for lid in line_ids:
        src_tokens = src_text.lines[lid]
        tgt_tokens = tgt_text.lines[lid]
        if src_mentions is not None:
            src_template, tgt_template = pair_templates(
                src_tokens,
                src_mentions.get(lid, ()),
                tgt_tokens,
                tgt_mentions.get(lid, ()) if tgt_mentions is not None else (),
            )
        else:
            src_template, tgt_template = src_tokens, tgt_tokens
        yield f"{tag.render()} {' '.join(src_template)}", " ".join(tgt_template)


def _write_split(
    pairs: Sequence[tuple[str, str]],
    view: View,
    ids: Sequence[str],
    out_dir: Path,
    split_name: str,
    mentions: Mentions | None,
) -> int:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    src_path = out_dir / f"{split_name}.src"
    tgt_path = out_dir / f"{split_name}.tgt"
    with (
        src_path.open("w", encoding="utf-8", newline="\n") as src_file,
        tgt_path.open("w", encoding="utf-8", newline="\n") as tgt_file,
    ):
        for a, b in pairs:
            tag = DirectionTag(a, b)
            src_mentions = mentions.get(a) if mentions is not None else None
            tgt_mentions = mentions.get(b) if mentions is not None else None
            for src_line, tgt_line in _pair_lines(
                view[a], view[b], tag, ids, src_mentions, tgt_mentions
            ):
                src_file.write(src_line + "\n")
                tgt_file.write(tgt_line + "\n")
                count += 1
    return count


def emit_complete(
    languages: Sequence[str],
    view: View,
    out_dir: str | Path,
    split_name: str = "train",
    *,
    mentions: Mentions | None = None,
) -> int:
    """Write every ordered language pair: k(k-1)*n examples."""
    if len(languages) < 2:
        raise ValueError("complete configuration needs at least two languages")
    ids = _check_view(languages, view)
    pairs = [(a, b) for a in languages for b in languages if a != b]
    return _write_split(pairs, view, ids, Path(out_dir), split_name, mentions)


def emit_star(
    sources: Sequence[str],
    target: str,
    view: View,
    out_dir: str | Path,
    split_name: str = "train",
    *,
    mentions: Mentions | None = None,
) -> int:
    """Write every source into the single target: |sources|*n examples."""
    if not sources:
        raise ValueError("star configuration needs at least one source")
    if target in sources:
        raise ValueError(f"star target {target!r} listed among sources")
    ids = _check_view([*sources, target], view)
    pairs = [(a, target) for a in sources]
    return _write_split(pairs, view, ids, Path(out_dir), split_name, mentions)


def symmetrize(low: ParallelText, sources: Sequence[ParallelText]) -> dict[str, ParallelText]:
    """Restrict every source to exactly the low-resource line ids.

    The returned view includes the low-resource text itself.  A source
    missing any of the low-resource ids is a hard error naming them.
    """
    ids = list(low.lines)
    view: dict[str, ParallelText] = {}
    for source in sources:
        missing = [lid for lid in ids if lid not in source.lines]
        if missing:
            shown = ", ".join(repr(m) for m in missing[:5])
            suffix = ", ..." if len(missing) > 5 else ""
            raise ValueError(
                f"{source.language!r} lacks {len(missing)} low-resource line id(s): {shown}{suffix}"
            )
        view[source.language] = restrict(source, ids)
    view[low.language] = restrict(low, ids)
    return view


def replicate_asymmetric(low: ParallelText, target_size: int) -> ParallelText:
    """Repeat lines cyclically up to target_size, suffixing ids per replica."""
    if target_size < len(low.lines):
        raise ValueError(
            f"target size {target_size} below corpus size {len(low.lines)}"
        )
    ids = list(low.lines)
    lines: dict[str, tuple[str, ...]] = {}
    for k in range(target_size):
        lid = ids[k % len(ids)]
        lines[f"{lid}#{k // len(ids)}"] = low.lines[lid]
    return ParallelText(language=low.language, lines=lines)


def build_vocab(
    texts: Iterable[ParallelText],
    low: ParallelText | None = None,
    tags: Iterable[DirectionTag] = (),
    max_ne: int = 0,
) -> Vocabulary:
    """Union of token types over all inputs plus tag and placeholder tokens.

    Order is frequency-descending, ties lexicographic; specials absent
    from the corpora sort at the tail with count zero.
    """
    counts: Counter = Counter()
    for text in texts:
        for tokens in text.lines.values():
            counts.update(tokens)
    if low is not None:
        for tokens in low.lines.values():
            counts.update(tokens)
    for tag in tags:
        for token in tag.tokens():
            counts[token] += 0
    for index in range(max_ne):
        counts[placeholder(index)] += 0
    ordered = sorted(counts, key=lambda token: (-counts[token], token))
    return Vocabulary(tokens=tuple(ordered))


def write_vocab(vocab: Vocabulary, path: str | Path) -> None:
    Path(path).write_text(
        "".join(token + "\n" for token in vocab.tokens), encoding="utf-8"
    )


def find_view_mentions(
    view: View, table: LexiconTable | None, edit_threshold: int = 2
) -> Mentions | None:
    """Precompute entity mentions per language and line for pair emission."""
    if table is None or len(table) == 0:
        return None
    return {
        lang: {
            lid: find_mentions(tokens, lang, table, edit_threshold)
            for lid, tokens in text.lines.items()
        }
        for lang, text in view.items()
    }


def emit_stage(
    spec: StageSpec,
    corpora: Mapping[str, ParallelText],
    table: LexiconTable | None = None,
    *,
    edit_threshold: int = 2,
) -> dict:
    """Emit one stage's datasets and return its manifest fragment.

    The fragment records the configuration, languages, per-split example
    counts and file checksums; it contains nothing volatile, so repeated
    runs produce identical manifests.
    """
    for lang in (*spec.languages, spec.low_resource):
        if lang not in corpora:
            raise ValueError(f"no corpus for language {lang!r}")
    family = [corpora[lang] for lang in spec.languages]
    low = corpora[spec.low_resource]

    if spec.stage == 1:
        view = {text.language: text for text in intersect(family)} if len(family) > 1 else {
            family[0].language: family[0]
        }
        emit_languages = list(spec.languages)
        configuration = "complete"
    elif spec.stage == 2:
        view = symmetrize(low, family)
        emit_languages = [*spec.languages, spec.low_resource]
        configuration = "complete"
    else:
        view = symmetrize(low, family)
        emit_languages = [*spec.languages, spec.low_resource]
        configuration = "star"

    mentions = find_view_mentions(view, table, edit_threshold)
    reference = view[spec.languages[0]]
    parts = split_corpus(reference, spec.split)

    splits: dict[str, dict] = {}
    for name, part in parts.items():
        ids = list(part.lines)
        sub_view = {lang: restrict(text, ids) for lang, text in view.items()}
        if spec.stage == 3:
            count = emit_star(
                list(spec.languages),
                spec.low_resource,
                sub_view,
                spec.out_dir,
                name,
                mentions=mentions,
            )
        else:
            languages = emit_languages
            count = emit_complete(
                languages, sub_view, spec.out_dir, name, mentions=mentions
            )
        splits[name] = {
            "examples": count,
            "lines": len(ids),
            "src": f"{name}.src",
            "tgt": f"{name}.tgt",
            "src_sha256": file_sha256(spec.out_dir / f"{name}.src"),
            "tgt_sha256": file_sha256(spec.out_dir / f"{name}.tgt"),
        }
    return {
        "stage": spec.stage,
        "configuration": configuration,
        "languages": emit_languages,
        "low_resource": spec.low_resource,
        "splits": splits,
    }
