"""End-to-end driver: rank candidates, pick the family, emit all stages.

The configuration is declarative JSON and is validated completely before
any work starts; full-scale runs over a hundred languages are long, so
typos should fail in milliseconds, not hours.  Relative paths resolve
against the config file's directory.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import ParallelText, SplitSpec, load_text
from .datagen import (
    DirectionTag,
    StageSpec,
    Vocabulary,
    build_vocab,
    emit_stage,
    file_sha256,
    write_vocab,
)
from .lexicon import LexiconTable, is_placeholder, load_lexicon, tag_sentence
from .rank import (
    FAMO_PLUS,
    METRICS,
    FamilyOfChoice,
    rank_languages,
    select_family,
    write_ranking,
    write_skips,
)

log = logging.getLogger(__name__)

STAGE1_RATIOS = (("train", 0.8), ("val", 0.1), ("test", 0.1))
STAGE2_RATIOS = (("train", 0.95), ("val", 0.05))

_CONFIG_KEYS = {
    "target",
    "corpus_dir",
    "out_dir",
    "family",
    "k",
    "lexicon",
    "edit_threshold",
    "seed",
    "split_mode",
    "stage1_ratios",
    "stage2_ratios",
    "iterations",
    "min_shared_lines",
    "max_ne",
    "workers",
}


@dataclass
class PipelineConfig:
    target: str
    corpus_dir: Path
    out_dir: Path
    family: str | tuple[str, ...]
    k: int = 10
    lexicon: Path | None = None
    edit_threshold: int = 2
    seed: int = 0
    split_mode: str = "contiguous"
    stage1_ratios: tuple = STAGE1_RATIOS
    stage2_ratios: tuple = STAGE2_RATIOS
    iterations: int = 10
    min_shared_lines: int = 50
    max_ne: int = 50
    workers: int = 1

    @classmethod
    def from_file(cls, path: str | Path, *, out_dir: str | Path | None = None) -> "PipelineConfig":
        path = Path(path)
        raw = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ValueError(f"{path}: unknown config key(s): {', '.join(unknown)}")
        base = path.resolve().parent

        def resolve(value: str) -> Path:
            p = Path(value)
            return p if p.is_absolute() else base / p

        kwargs: dict = {}
        for key in ("target", "split_mode"):
            if key in raw:
                kwargs[key] = str(raw[key])
        for key in ("k", "edit_threshold", "seed", "iterations", "min_shared_lines",
                    "max_ne", "workers"):
            if key in raw:
                kwargs[key] = int(raw[key])
        for key in ("stage1_ratios", "stage2_ratios"):
            if key in raw:
                kwargs[key] = tuple((str(n), float(f)) for n, f in raw[key])
        if "corpus_dir" in raw:
            kwargs["corpus_dir"] = resolve(raw["corpus_dir"])
        if raw.get("lexicon") is not None:
            kwargs["lexicon"] = resolve(raw["lexicon"])
        family = raw.get("family")
        if isinstance(family, str):
            kwargs["family"] = family
        elif isinstance(family, list):
            kwargs["family"] = tuple(str(code) for code in family)
        if out_dir is not None:
            kwargs["out_dir"] = Path(out_dir)
        elif "out_dir" in raw:
            kwargs["out_dir"] = resolve(raw["out_dir"])
        missing = {"target", "corpus_dir", "out_dir", "family"} - set(kwargs)
        if missing:
            raise ValueError(f"{path}: missing config key(s): {', '.join(sorted(missing))}")
        config = cls(**kwargs)
        config.validate()
        return config

    def validate(self) -> None:
        if not self.corpus_dir.is_dir():
            raise ValueError(f"corpus directory not found: {self.corpus_dir}")
        target_file = self.corpus_dir / f"{self.target}.txt"
        if not target_file.is_file():
            raise ValueError(f"target corpus not found: {target_file}")
        if self.lexicon is not None and not self.lexicon.is_file():
            raise ValueError(f"lexicon file not found: {self.lexicon}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.edit_threshold < 0:
            raise ValueError("edit_threshold must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if isinstance(self.family, str):
            if self.family.upper() not in METRICS:
                raise ValueError(
                    f"family must be one of {[m.lower() for m in METRICS]}"
                    " or an explicit list of language codes"
                )
        else:
            if self.target in self.family:
                raise ValueError("explicit family must not contain the target")
            for code in self.family:
                if not (self.corpus_dir / f"{code}.txt").is_file():
                    raise ValueError(f"family corpus not found: {code}.txt")
        # exercise ratio validation early
        SplitSpec(self.stage1_ratios, seed=self.seed, mode=self.split_mode)
        SplitSpec(self.stage2_ratios, seed=self.seed, mode=self.split_mode)


def load_corpora(corpus_dir: str | Path) -> dict[str, ParallelText]:
    """Load every <code>.txt in the directory, keyed by language code."""
    corpus_dir = Path(corpus_dir)
    corpora: dict[str, ParallelText] = {}
    for path in sorted(corpus_dir.glob("*.txt")):
        corpora[path.stem] = load_text(path, path.stem)
    if not corpora:
        raise ValueError(f"no *.txt corpora in {corpus_dir}")
    return corpora


def _self_tagged(
    text: ParallelText, table: LexiconTable | None, edit_threshold: int
) -> tuple[ParallelText, int]:
    """Tag each line standalone; returns the tagged text and max placeholder count."""
    if table is None or len(table) == 0:
        return text, 0
    max_ne = 0
    lines: dict[str, tuple[str, ...]] = {}
    for lid, tokens in text.lines.items():
        tagged = tag_sentence(tokens, text.language, table, edit_threshold)
        max_ne = max(max_ne, len(tagged.source_dict))
        lines[lid] = tagged.template
    return ParallelText(language=text.language, lines=lines), max_ne


def resolve_family(
    config: PipelineConfig, corpora: dict[str, ParallelText]
) -> FamilyOfChoice:
    """Rank candidates if the config names a metric, else take the list as is."""
    if not isinstance(config.family, str):
        missing = [code for code in config.family if code not in corpora]
        if missing:
            raise ValueError(f"family language(s) without corpora: {', '.join(missing)}")
        return FamilyOfChoice(
            target=config.target, members=tuple(config.family), provenance=FAMO_PLUS
        )
    target_text = corpora[config.target]
    candidates = [corpora[lang] for lang in corpora if lang != config.target]
    log.info("ranking %d candidates by %s", len(candidates), config.family.upper())
    ranking, skips = rank_languages(
        target_text,
        candidates,
        config.family,
        min_shared_lines=config.min_shared_lines,
        iterations=config.iterations,
        workers=config.workers,
    )
    config.out_dir.mkdir(parents=True, exist_ok=True)
    write_ranking(ranking, config.out_dir / "ranking.tsv")
    write_skips(skips, config.out_dir / "skips.tsv")
    return select_family(ranking, config.target, config.k)


def build_shared_vocab(
    config: PipelineConfig,
    corpora: dict[str, ParallelText],
    family: FamilyOfChoice,
    table: LexiconTable | None,
) -> Vocabulary:
    """One vocabulary for all stages: family full text plus low-resource lines."""
    languages = [*family.members, config.target]
    tagged = []
    max_seen = 0
    for lang in family.members:
        text, seen = _self_tagged(corpora[lang], table, config.edit_threshold)
        tagged.append(text)
        max_seen = max(max_seen, seen)
    low_tagged, seen = _self_tagged(corpora[config.target], table, config.edit_threshold)
    max_seen = max(max_seen, seen)
    tags = [DirectionTag(a, b) for a in languages for b in languages if a != b]
    return build_vocab(tagged, low_tagged, tags, max_ne=max(config.max_ne, max_seen))


def run_pipeline(config: PipelineConfig, stages: tuple[int, ...] = (1, 2, 3)) -> dict:
    """Rank, select the family, and emit the requested stages.

    Returns the manifest written to out_dir/manifest.json.  The manifest
    carries no timestamps or absolute paths, so reruns are comparable
    checksum for checksum.
    """
    corpora = load_corpora(config.corpus_dir)
    if config.target not in corpora:
        raise ValueError(f"target {config.target!r} has no corpus")
    config.out_dir.mkdir(parents=True, exist_ok=True)

    family = resolve_family(config, corpora)
    family_path = config.out_dir / "family.txt"
    family_path.write_text(
        "".join(code + "\n" for code in family.members), encoding="utf-8"
    )

    table = load_lexicon(config.lexicon) if config.lexicon is not None else None
    vocab = build_shared_vocab(config, corpora, family, table)
    vocab_path = config.out_dir / "vocab.txt"
    write_vocab(vocab, vocab_path)

    manifest: dict = {
        "target": config.target,
        "family": list(family.members),
        "provenance": family.provenance,
        "k": config.k,
        "seed": config.seed,
        "split_mode": config.split_mode,
        "edit_threshold": config.edit_threshold,
        "vocab": {
            "file": "vocab.txt",
            "tokens": len(vocab),
            "sha256": file_sha256(vocab_path),
        },
        "stages": {},
    }
    for stage in stages:
        ratios = config.stage1_ratios if stage == 1 else config.stage2_ratios
        spec = StageSpec(
            stage=stage,
            languages=family.members,
            low_resource=config.target,
            split=SplitSpec(ratios, seed=config.seed, mode=config.split_mode),
            out_dir=config.out_dir / f"stage{stage}",
        )
        log.info("emitting stage %d", stage)
        manifest["stages"][f"stage{stage}"] = emit_stage(
            spec, corpora, table, edit_threshold=config.edit_threshold
        )
    (config.out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
