import json

import pytest

from lowresmt.align import load_model, load_statistics
from lowresmt.cli import main
from lowresmt.corpus import load_text
from lowresmt.datagen import file_sha256


def write(path, content):
    path.write_text(content, encoding="utf-8")
    return path


@pytest.fixture
def small_corpus_dir(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    base_lines = [(f"V{i:03d}", f"tok{i} tok{i + 1} tok{i + 2}") for i in range(60)]
    for lang in ("aa", "bb"):
        rows = "".join(f"{lid}\t{text.replace('tok', lang)}\n" for lid, text in base_lines)
        write(corpus / f"{lang}.txt", rows)
    # target shares ids with renamed tokens
    rows = "".join(f"{lid}\t{text.replace('tok', 'tt')}\n" for lid, text in base_lines)
    write(corpus / "tt.txt", rows)
    return corpus


class TestScore:
    def test_prints_tsv(self, tmp_path, capsys):
        hyp = write(tmp_path / "hyp.txt", "a b c d\n")
        ref = write(tmp_path / "ref.txt", "a b c d e\n")
        assert main(["score", "--hypotheses", str(hyp), "--references", str(ref)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("#bleu")
        value = float(out[1].split("\t")[0])
        assert 0.77 < value < 0.78

    def test_writes_file_with_output_flag(self, tmp_path):
        hyp = write(tmp_path / "hyp.txt", "a b\n")
        ref = write(tmp_path / "ref.txt", "a b\n")
        out = tmp_path / "score.tsv"
        assert main(
            ["score", "--hypotheses", str(hyp), "--references", str(ref), "--output", str(out)]
        ) == 0
        assert out.read_text().splitlines()[1].split("\t")[0] == "1.000000"

    def test_mismatched_ids_fail(self, tmp_path):
        hyp = write(tmp_path / "hyp.txt", "a\nb\n")
        ref = write(tmp_path / "ref.txt", "a\n")
        assert main(["score", "--hypotheses", str(hyp), "--references", str(ref)]) == 1


class TestAlign:
    def test_trains_and_saves(self, tmp_path, small_corpus_dir):
        model_path = tmp_path / "model.tsv"
        stats_path = tmp_path / "stats.tsv"
        code = main(
            [
                "align",
                "--source", str(small_corpus_dir / "aa.txt"),
                "--target", str(small_corpus_dir / "tt.txt"),
                "--iterations", "5",
                "--output", str(model_path),
                "--stats-output", str(stats_path),
            ]
        )
        assert code == 0
        model = load_model(model_path)
        assert model.iterations == 5
        stats = load_statistics(stats_path)
        assert stats.words


class TestRank:
    def test_writes_ranking_and_skips(self, tmp_path, small_corpus_dir):
        ranking_path = tmp_path / "ranking.tsv"
        skips_path = tmp_path / "skips.tsv"
        code = main(
            [
                "rank",
                "--target", str(small_corpus_dir / "tt.txt"),
                "--candidates", str(small_corpus_dir),
                "--metric", "famd",
                "--output", str(ranking_path),
                "--skip-report", str(skips_path),
            ]
        )
        assert code == 0
        rows = [row.split("\t") for row in ranking_path.read_text().splitlines()]
        assert len(rows) == 2
        assert rows[0][0] == "1"
        assert {row[1] for row in rows} == {"aa", "bb"}
        assert all(row[2] == "FAMD" for row in rows)


class TestTagDetag:
    def test_file_round_trip(self, tmp_path):
        lexicon = write(
            tmp_path / "lex.tsv", "e1\ten\tYi\ne1\tde\tJi\ne2\ten\tWati\ne2\tde\tVati\n"
        )
        corpus = write(tmp_path / "in.txt", "L1\tYi calls Wati\nL2\tnothing here\n")
        tagged = tmp_path / "tagged.txt"
        dicts = tmp_path / "dicts.tsv"
        assert main(
            [
                "tag",
                "--input", str(corpus),
                "--language", "en",
                "--lexicon", str(lexicon),
                "--output", str(tagged),
                "--dicts", str(dicts),
            ]
        ) == 0
        assert load_text(tagged, "en").lines["L1"] == ("__NE0", "calls", "__NE1")

        detagged = tmp_path / "out.txt"
        report = tmp_path / "report.tsv"
        assert main(
            [
                "detag",
                "--input", str(tagged),
                "--dicts", str(dicts),
                "--language", "de",
                "--lexicon", str(lexicon),
                "--output", str(detagged),
                "--report", str(report),
            ]
        ) == 0
        assert load_text(detagged, "de").lines["L1"] == ("Ji", "calls", "Vati")


class TestCombine:
    def test_merges_files(self, tmp_path):
        a = write(tmp_path / "aa.txt", "1\tx y z\n")
        b = write(tmp_path / "bb.txt", "1\tx y z\n")
        c = write(tmp_path / "cc.txt", "1\tp q\n")
        out = tmp_path / "combined.txt"
        report = tmp_path / "report.tsv"
        assert main(
            [
                "combine",
                "--inputs", str(a), str(b), str(c),
                "--output", str(out),
                "--report", str(report),
            ]
        ) == 0
        assert out.read_text() == "1\tx y z\n"
        assert report.read_text().split("\t")[1] == "aa"


def pipeline_config(corpus_dir, out_dir, family):
    return {
        "target": "tt",
        "corpus_dir": str(corpus_dir),
        "out_dir": str(out_dir),
        "family": family,
        "k": 2,
        "min_shared_lines": 10,
        "iterations": 4,
        "stage1_ratios": [["train", 0.8], ["val", 0.1], ["test", 0.1]],
        "stage2_ratios": [["train", 0.9], ["val", 0.1]],
    }


class TestPipelineAndGen:
    def test_pipeline_end_to_end(self, tmp_path, small_corpus_dir):
        config_path = tmp_path / "config.json"
        out_dir = tmp_path / "out"
        write(config_path, json.dumps(pipeline_config(small_corpus_dir, out_dir, "famp")))
        assert main(["pipeline", "--config", str(config_path)]) == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["target"] == "tt"
        assert len(manifest["family"]) == 2
        assert (out_dir / "ranking.tsv").exists()
        assert (out_dir / "vocab.txt").exists()
        for stage in ("stage1", "stage2", "stage3"):
            assert manifest["stages"][stage]["splits"]["train"]["examples"] > 0

    def test_pipeline_is_deterministic(self, tmp_path, small_corpus_dir):
        config_path = tmp_path / "config.json"
        write(
            config_path,
            json.dumps(pipeline_config(small_corpus_dir, tmp_path / "unused", "famd")),
        )
        for run in ("a", "b"):
            assert main(
                ["pipeline", "--config", str(config_path), "--out-dir", str(tmp_path / run)]
            ) == 0
        manifest_a = (tmp_path / "a" / "manifest.json").read_bytes()
        manifest_b = (tmp_path / "b" / "manifest.json").read_bytes()
        assert manifest_a == manifest_b
        assert file_sha256(tmp_path / "a" / "stage1" / "train.src") == file_sha256(
            tmp_path / "b" / "stage1" / "train.src"
        )

    def test_gen_requires_explicit_family(self, tmp_path, small_corpus_dir):
        config_path = tmp_path / "config.json"
        write(config_path, json.dumps(pipeline_config(small_corpus_dir, tmp_path / "out", "famd")))
        assert main(["gen", "--config", str(config_path)]) == 1

    def test_gen_single_stage(self, tmp_path, small_corpus_dir):
        config_path = tmp_path / "config.json"
        out_dir = tmp_path / "out"
        write(
            config_path,
            json.dumps(pipeline_config(small_corpus_dir, out_dir, ["aa", "bb"])),
        )
        assert main(["gen", "--config", str(config_path), "--stage", "3"]) == 0
        assert (out_dir / "stage3" / "train.src").exists()
        assert not (out_dir / "stage1").exists()

    def test_unknown_config_key_fails_fast(self, tmp_path, small_corpus_dir):
        config = pipeline_config(small_corpus_dir, tmp_path / "out", "famd")
        config["typo_key"] = True
        config_path = write(tmp_path / "config.json", json.dumps(config))
        assert main(["pipeline", "--config", str(config_path)]) == 1


class TestUsageErrors:
    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["score", "--nope"])
        assert excinfo.value.code == 2

    def test_missing_file_exits_one(self, tmp_path):
        assert main(
            [
                "score",
                "--hypotheses", str(tmp_path / "missing.txt"),
                "--references", str(tmp_path / "missing.txt"),
            ]
        ) == 1
