"""Command-line interface: one subcommand per pipeline operation.

Subcommands: align, rank, tag, detag, gen, combine, score, pipeline.
Logs go to standard error; data goes to files (score prints its TSV to
stdout unless redirected with --output).  Worker count and log level can
also come from the LOWRESMT_WORKERS and LOWRESMT_LOG_LEVEL environment
variables.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from collections import Counter
from pathlib import Path

from . import align as align_mod
from . import combine as combine_mod
from .bleu import corpus_bleu
from .corpus import load_text, save_text
from .lexicon import TaggedSentence, build_target_dictionary, detag, load_lexicon, tag_sentence
from .pipeline import PipelineConfig, run_pipeline
from .rank import rank_languages, write_ranking, write_skips

log = logging.getLogger("lowresmt")


def _env_workers(default: int = 1) -> int:
    value = os.environ.get("LOWRESMT_WORKERS")
    return int(value) if value else default


def _cmd_align(args) -> int:
    source = load_text(args.source, Path(args.source).stem)
    target = load_text(args.target, Path(args.target).stem)
    shared = [lid for lid in source.lines if lid in target.lines]
    if not shared:
        raise ValueError("source and target share no line ids")
    bitext = [(source.lines[lid], target.lines[lid]) for lid in shared]
    model = align_mod.train_alignment(
        bitext, args.iterations, p_null=args.p_null
    )
    align_mod.save_model(model, args.output)
    log.info("model saved to %s (%d source types)", args.output, len(model.ttable))
    if args.stats_output:
        stats = align_mod.collect_statistics(model, bitext)
        align_mod.save_statistics(stats, args.stats_output)
        log.info("statistics saved to %s", args.stats_output)
    return 0


def _cmd_rank(args) -> int:
    target_path = Path(args.target)
    target = load_text(target_path, target_path.stem)
    candidates = []
    for path in sorted(Path(args.candidates).glob("*.txt")):
        if path.stem == target.language:
            continue
        candidates.append(load_text(path, path.stem))
    if not candidates:
        raise ValueError(f"no candidate corpora in {args.candidates}")
    ranking, skips = rank_languages(
        target,
        candidates,
        args.metric,
        min_shared_lines=args.min_lines,
        iterations=args.iterations,
        workers=args.workers,
    )
    write_ranking(ranking, args.output)
    if args.skip_report:
        write_skips(skips, args.skip_report)
    log.info("ranked %d languages, skipped %d", len(ranking.entries), len(skips))
    return 0


def _cmd_tag(args) -> int:
    table = load_lexicon(args.lexicon)
    text = load_text(args.input, args.language)
    template_rows = []
    dict_rows = []
    for lid, tokens in text.lines.items():
        tagged = tag_sentence(tokens, args.language, table, args.edit_threshold)
        template_rows.append(f"{lid}\t{' '.join(tagged.template)}\n")
        for name, (entity_id, surface) in tagged.source_dict.items():
            dict_rows.append(f"{lid}\t{name}\t{entity_id}\t{surface}\n")
    Path(args.output).write_text("".join(template_rows), encoding="utf-8")
    if args.dicts:
        Path(args.dicts).write_text("".join(dict_rows), encoding="utf-8")
    log.info("tagged %d lines, %d entity mentions", len(text.lines), len(dict_rows))
    return 0


def _read_dicts(path: str | Path) -> dict[str, dict[str, tuple[str, str]]]:
    out: dict[str, dict[str, tuple[str, str]]] = {}
    for number, row in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not row:
            continue
        fields = row.split("\t")
        if len(fields) != 4:
            raise ValueError(f"{path}:{number}: expected line_id<TAB>placeholder<TAB>entity<TAB>surface")
        lid, name, entity_id, surface = fields
        out.setdefault(lid, {})[name] = (entity_id, surface)
    return out


def _cmd_detag(args) -> int:
    table = load_lexicon(args.lexicon)
    text = load_text(args.input, args.language)
    dicts = _read_dicts(args.dicts)
    dropped: Counter = Counter()
    rows = []
    for lid, tokens in text.lines.items():
        tagged = TaggedSentence(template=(), source_dict=dicts.get(lid, {}))
        target_dict = build_target_dictionary(tagged, args.language, table)
        decoded, missing = detag(tokens, target_dict)
        dropped.update(missing)
        rows.append(f"{lid}\t{' '.join(decoded)}\n")
    Path(args.output).write_text("".join(rows), encoding="utf-8")
    if args.report:
        report_rows = [f"{name}\t{count}\n" for name, count in sorted(dropped.items())]
        Path(args.report).write_text("".join(report_rows), encoding="utf-8")
    if dropped:
        log.warning("dropped %d placeholder occurrence(s) without entries", sum(dropped.values()))
    return 0


def _cmd_gen(args) -> int:
    config = PipelineConfig.from_file(args.config, out_dir=args.out_dir)
    if isinstance(config.family, str):
        raise ValueError(
            "gen needs an explicit family list in the config;"
            " use the pipeline command to rank and select first"
        )
    stages = (1, 2, 3) if args.stage == "all" else (int(args.stage),)
    run_pipeline(config, stages=stages)
    return 0


def _cmd_combine(args) -> int:
    translations = [load_text(path, Path(path).stem) for path in args.inputs]
    combined, report = combine_mod.combine_corpus(translations)
    save_text(combined, args.output)
    if args.report:
        combine_mod.write_combine_report(report, args.report)
    log.info(
        "combined %d lines; selection histogram: %s",
        len(combined.lines),
        dict(report.histogram),
    )
    return 0


def _cmd_score(args) -> int:
    hyp = load_text(args.hypotheses, "hyp")
    ref = load_text(args.references, "ref")
    if set(hyp.lines) != set(ref.lines):
        raise ValueError("hypothesis and reference line ids differ")
    hyp_lines = [hyp.lines[lid] for lid in hyp.lines]
    ref_lines = [ref.lines[lid] for lid in hyp.lines]
    score = corpus_bleu(hyp_lines, ref_lines)
    p1, p2, p3, p4 = score.precisions
    row = (
        f"{score.value:.6f}\t{p1:.6f}\t{p2:.6f}\t{p3:.6f}\t{p4:.6f}"
        f"\t{score.brevity_penalty:.6f}"
    )
    header = "#bleu\tp1\tp2\tp3\tp4\tbrevity_penalty"
    if args.output:
        Path(args.output).write_text(header + "\n" + row + "\n", encoding="utf-8")
    else:
        print(header)
        print(row)
    return 0


def _cmd_pipeline(args) -> int:
    config = PipelineConfig.from_file(args.config, out_dir=args.out_dir)
    if args.workers is not None:
        config.workers = args.workers
    else:
        config.workers = _env_workers(config.workers)
    run_pipeline(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lowresmt",
        description="Source ranking, entity tagging, staged dataset generation,"
        " and translation combination for closed-text low-resource translation.",
    )
    parser.add_argument(
        "--log-level",
        default=os.environ.get("LOWRESMT_LOG_LEVEL", "INFO"),
        help="logging level for stderr (default INFO)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="train an alignment model on two corpora")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--p-null", type=float, default=0.08)
    p.add_argument("--output", required=True, help="model TSV path")
    p.add_argument("--stats-output", help="optional statistics TSV path")
    p.set_defaults(handler=_cmd_align)

    p = sub.add_parser("rank", help="rank candidate languages against a target")
    p.add_argument("--target", required=True, help="target corpus file")
    p.add_argument("--candidates", required=True, help="directory of <code>.txt corpora")
    p.add_argument("--metric", required=True, choices=["famd", "famp"])
    p.add_argument("--output", required=True, help="ranking TSV path")
    p.add_argument("--skip-report", help="TSV for excluded candidates")
    p.add_argument("--min-lines", type=int, default=50)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--workers", type=int, default=_env_workers())
    p.set_defaults(handler=_cmd_rank)

    p = sub.add_parser("tag", help="replace entity mentions with placeholders")
    p.add_argument("--input", required=True)
    p.add_argument("--language", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--output", required=True, help="tagged corpus path")
    p.add_argument("--dicts", help="per-line placeholder dictionary TSV")
    p.add_argument("--edit-threshold", type=int, default=2)
    p.set_defaults(handler=_cmd_tag)

    p = sub.add_parser("detag", help="restore entity surfaces from placeholders")
    p.add_argument("--input", required=True, help="translated templates")
    p.add_argument("--dicts", required=True, help="dictionary TSV from tag")
    p.add_argument("--language", required=True, help="target language code")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="dropped-placeholder counts TSV")
    p.set_defaults(handler=_cmd_detag)

    p = sub.add_parser("gen", help="emit stage datasets for an explicit family")
    p.add_argument("--config", required=True)
    p.add_argument("--stage", default="all", choices=["all", "1", "2", "3"])
    p.add_argument("--out-dir", help="override the config's output directory")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("combine", help="merge translations by cluster center")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="line_id/chosen_language/centrality TSV")
    p.set_defaults(handler=_cmd_combine)

    p = sub.add_parser("score", help="corpus BLEU of hypotheses against references")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--output", help="write the TSV here instead of stdout")
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("pipeline", help="rank, select the family, emit all stages")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", help="override the config's output directory")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (ValueError, OSError) as error:
        log.error("%s", error)
        return 1


if __name__ == "__main__":
    sys.exit(main())
