"""Loading, indexing, and splitting line-aligned multilingual text.

Corpora are keyed by opaque line ids so that verse keys like ``MRK_1_16``
and plain line numbers share one code path.  Identical ids across
languages denote translations of the same content.  All values are
immutable after construction and safe to share across threads.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ParallelText:
    """One language's lines, keyed by shared line ids (insertion ordered)."""

    language: str
    lines: dict[str, tuple[str, ...]]

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def line_ids(self) -> list[str]:
        return list(self.lines)


@dataclass(frozen=True)
class SplitSpec:
    """Named split fractions plus the seed and mode that make them reproducible.

    Fractions must sum to 1.  Every split except the last is floored to
    an integer line count; the last absorbs the remainder.
    """

    ratios: tuple[tuple[str, float], ...]
    seed: int = 0
    mode: str = "contiguous"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "ratios", tuple((str(n), float(f)) for n, f in self.ratios)
        )
        names = [name for name, _ in self.ratios]
        if not names:
            raise ValueError("split spec needs at least one ratio")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate split names: {names}")
        if any(not 0.0 <= fraction <= 1.0 for _, fraction in self.ratios):
            raise ValueError("split fractions must lie in [0, 1]")
        total = sum(fraction for _, fraction in self.ratios)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"split fractions sum to {total}, expected 1")
        if self.mode not in ("contiguous", "shuffled"):
            raise ValueError(f"unknown split mode {self.mode!r}")


def load_text(path: str | Path, language: str) -> ParallelText:
    """Read one corpus file, either ``ID<TAB>text`` rows or bare text.

    Bare files get zero-based line indexes as ids.  Tokenization is a
    plain split on Unicode whitespace.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8").splitlines()
    if not raw:
        raise ValueError(f"empty corpus file: {path}")
    id_format = "\t" in raw[0]
    lines: dict[str, tuple[str, ...]] = {}
    for index, row in enumerate(raw):
        if id_format:
            line_id, sep, text = row.partition("\t")
            if not sep:
                raise ValueError(f"{path}:{index + 1}: expected ID<TAB>text")
        else:
            line_id, text = str(index), row
        tokens = tuple(text.split())
        if not tokens:
            raise ValueError(f"{path}:{index + 1}: blank line")
        if line_id in lines:
            raise ValueError(f"{path}: duplicate line id {line_id!r}")
        lines[line_id] = tokens
    return ParallelText(language=language, lines=lines)


def save_text(text: ParallelText, path: str | Path) -> None:
    """Write ``ID<TAB>text`` rows; load_text round-trips the result."""
    out = "".join(
        f"{line_id}\t{' '.join(tokens)}\n" for line_id, tokens in text.lines.items()
    )
    Path(path).write_text(out, encoding="utf-8")


def restrict(text: ParallelText, line_ids: Iterable[str]) -> ParallelText:
    """Return a copy of ``text`` limited to ``line_ids``, in the given order."""
    line_ids = list(line_ids)
    missing = [lid for lid in line_ids if lid not in text.lines]
    if missing:
        raise ValueError(
            f"{text.language!r} lacks {len(missing)} line id(s), first: {missing[0]!r}"
        )
    return ParallelText(text.language, {lid: text.lines[lid] for lid in line_ids})


def intersect(texts: Sequence[ParallelText]) -> list[ParallelText]:
    """Restrict every text to the line ids shared by all, in first-text order."""
    if len(texts) < 2:
        raise ValueError("intersect needs at least two texts")
    rest = texts[1:]
    common = [lid for lid in texts[0].lines if all(lid in t.lines for t in rest)]
    if not common:
        raise ValueError("no line ids shared by all texts")
    return [restrict(text, common) for text in texts]


def split(text: ParallelText, spec: SplitSpec) -> dict[str, ParallelText]:
    """Partition ``text`` into named splits; deterministic under a fixed seed.

    Contiguous mode preserves document order.  Shuffled mode draws lines
    with the configured seed but still emits each split in document order.
    """
    ids = list(text.lines)
    if spec.mode == "shuffled":
        random.Random(spec.seed).shuffle(ids)
    n = len(ids)
    sizes = [math.floor(n * fraction + 1e-9) for _, fraction in spec.ratios[:-1]]
    sizes.append(n - sum(sizes))
    position = {lid: k for k, lid in enumerate(text.lines)}
    out: dict[str, ParallelText] = {}
    start = 0
    for (name, _), size in zip(spec.ratios, sizes):
        if size <= 0:
            raise ValueError(f"split {name!r} would receive {size} lines (n={n})")
        chunk = sorted(ids[start : start + size], key=position.__getitem__)
        out[name] = restrict(text, chunk)
        start += size
    return out
