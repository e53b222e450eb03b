"""Dataset ingestion and parallel-corpus generation tests."""

import json

import pytest

from astsearch.ast_repr import ReprConfig, parse_code, text_seq
from astsearch.corpus import (
    CodeSearchRecord, build_parallel_corpora, compute_stats, filter_split,
    load_dataset, save_dataset, tokenize_query, write_corpus_files,
)
from astsearch.errors import SchemaError

VALID_LINES = [
    {"id": "r1", "query": "Adds two numbers", "code": "int f(int a, int b) { return a + b; }",
     "lang": "java", "split": "train"},
    {"id": "r2", "query": "returns input", "code": "def g(x):\n    return x\n",
     "lang": "python", "split": "valid"},
    {"id": "r3", "query": "always true", "code": "boolean h() { return true; }",
     "lang": "java", "split": "test"},
]


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")


class TestLoadDataset:
    def test_three_valid_lines(self, tmp_path):
        path = tmp_path / "data.jsonl"
        write_jsonl(path, VALID_LINES)
        result = load_dataset(path)
        assert len(result.records) == 3
        assert result.records[0].id == "r1"
        assert result.records[1].language == "python"

    def test_missing_field_names_line(self, tmp_path):
        rows = [dict(VALID_LINES[0])]
        del rows[0]["code"]
        path = tmp_path / "bad.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(SchemaError) as exc:
            load_dataset(path)
        assert exc.value.line_number == 1
        assert exc.value.field == "code"

    def test_lenient_mode_collects_errors(self, tmp_path):
        rows = [VALID_LINES[0], {"id": "x"}, VALID_LINES[2]]
        path = tmp_path / "mixed.jsonl"
        write_jsonl(path, rows)
        result = load_dataset(path, strict=False)
        assert len(result.records) == 2
        assert len(result.errors) == 1
        assert result.errors[0].line_number == 2

    def test_invalid_json_reported(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"id": "a", \n', encoding="utf-8")
        with pytest.raises(SchemaError):
            load_dataset(path)

    def test_unknown_language_rejected(self, tmp_path):
        rows = [dict(VALID_LINES[0], lang="cobol")]
        path = tmp_path / "lang.jsonl"
        write_jsonl(path, rows)
        with pytest.raises(SchemaError) as exc:
            load_dataset(path)
        assert exc.value.field == "lang"

    def test_roundtrip_identity(self, tmp_path):
        path = tmp_path / "a.jsonl"
        write_jsonl(path, VALID_LINES)
        records = load_dataset(path).records
        path2 = tmp_path / "b.jsonl"
        save_dataset(path2, records)
        assert load_dataset(path2).records == records

    def test_unsupported_format(self, tmp_path):
        with pytest.raises(SchemaError):
            load_dataset(tmp_path / "x.csv", format="csv")


class TestBuildParallelCorpora:
    def records(self):
        return [CodeSearchRecord(r["id"], r["query"], r["code"], r["lang"], r["split"])
                for r in VALID_LINES]

    def test_single_record_yields_aligned_pairs(self):
        records = self.records()[:1]
        code, summary, report = build_parallel_corpora(records, ReprConfig(5))
        assert len(code.pairs) == len(summary.pairs) == 1
        assert code.pairs[0].source == summary.pairs[0].source
        assert code.pairs[0].source == tuple(tokenize_query(records[0].query))
        assert report.built == 1

    def test_code_target_is_terminal_stream(self):
        records = self.records()[:1]
        code, _, _ = build_parallel_corpora(records, ReprConfig(5))
        expected = tuple(parse_code(records[0].code, "java").terminal_texts())
        assert code.pairs[0].target == expected

    def test_summary_target_is_text_seq(self):
        records = self.records()[:1]
        _, summary, _ = build_parallel_corpora(records, ReprConfig(3))
        expected = text_seq(parse_code(records[0].code, "java"), 3).tokens
        assert summary.pairs[0].target == expected

    def test_unparseable_record_excluded_symmetrically(self):
        records = self.records()
        records.insert(1, CodeSearchRecord("broken", "does things",
                                           "int f( { nope", "java", "train"))
        code, summary, report = build_parallel_corpora(records, ReprConfig(5))
        assert report.excluded_ids == ["broken"]
        assert "broken" in report.parse_errors
        assert [p.pair_id for p in code.pairs] == [p.pair_id for p in summary.pairs]
        assert all(p.pair_id != "broken" for p in code.pairs)

    def test_desk_corpus_vocabulary_mechanism(self, desk_java_path):
        """The summary target vocabulary is a fraction of the code-token one."""
        records = load_dataset(desk_java_path).records
        code, summary, _ = build_parallel_corpora(records, ReprConfig(5))
        code_vocab = {t for p in code.pairs for t in p.target}
        summary_vocab = {t for p in summary.pairs for t in p.target}
        assert len(summary_vocab) < len(code_vocab)


class TestStats:
    def test_empty_set(self):
        stats = compute_stats([], ReprConfig(5))
        assert stats.code_token_vocab == 0
        assert stats.asttrans_vocab == 0
        assert stats.mean_ast_depth == 0.0

    def test_single_method_hand_count(self):
        code = "int f() { return 1; }"
        record = CodeSearchRecord("r", "one", code, "java", "train")
        stats = compute_stats([record], ReprConfig(5))
        # program > method_declaration > (int f ( ) block); block > { return_stmt };
        # return_stmt > return 1 ; -> deepest terminal at depth 4
        assert stats.mean_ast_depth == 4
        assert stats.code_token_vocab == len(set(parse_code(code, "java").terminal_texts()))

    def test_split_monotonicity(self, desk_java_path):
        records = load_dataset(desk_java_path).records
        train_stats = compute_stats(filter_split(records, "train"))
        all_stats = compute_stats(records)
        assert all_stats.code_token_vocab >= train_stats.code_token_vocab
        assert all_stats.asttrans_vocab >= train_stats.asttrans_vocab

    def test_unparseable_counted_separately(self):
        records = [CodeSearchRecord("bad", "q", "%% not code", "java", "train")]
        stats = compute_stats(records)
        assert stats.unparseable == 1


class TestCorpusFiles:
    def test_file_triple_alignment(self, tmp_path, desk_java_path):
        records = filter_split(load_dataset(desk_java_path).records, "test")
        code, summary, _ = build_parallel_corpora(records, ReprConfig(5), "test")
        paths = write_corpus_files(tmp_path, "test", code, summary)
        src = paths["src"].read_text(encoding="utf-8").splitlines()
        code_tgt = paths["code_tgt"].read_text(encoding="utf-8").splitlines()
        repr_tgt = paths["repr_tgt"].read_text(encoding="utf-8").splitlines()
        ids = paths["ids"].read_text(encoding="utf-8").splitlines()
        assert len(src) == len(code_tgt) == len(repr_tgt) == len(ids) == len(records)
        for i, record_id in enumerate(ids):
            record = next(r for r in records if r.id == record_id)
            assert src[i] == " ".join(tokenize_query(record.query))

    def test_rebuild_is_byte_identical(self, tmp_path, desk_java_path):
        records = filter_split(load_dataset(desk_java_path).records, "valid")
        code, summary, _ = build_parallel_corpora(records, ReprConfig(5), "valid")
        first = tmp_path / "a"
        second = tmp_path / "b"
        p1 = write_corpus_files(first, "valid", code, summary)
        code2, summary2, _ = build_parallel_corpora(records, ReprConfig(5), "valid")
        p2 = write_corpus_files(second, "valid", code2, summary2)
        for key in p1:
            assert p1[key].read_bytes() == p2[key].read_bytes()
