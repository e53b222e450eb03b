"""Dataset ingestion, split handling, and parallel-corpus generation.

Input is JSONL with fields id, query, code, lang, split. Each record yields
two aligned training pairs sharing the query side: one targeting the code's
token sequence, one targeting its depth-k tree summary. Records that fail to
parse are excluded from both corpora symmetrically.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

from astsearch.errors import ParseError, SchemaError
from astsearch.ast_repr import ReprConfig, parse_code, text_seq
from astsearch.ast_repr.tree import LANGUAGES
from astsearch.translator.data import Pair, ParallelCorpus

SPLITS = ("train", "valid", "test")
_REQUIRED_FIELDS = ("id", "query", "code", "lang", "split")


@dataclass(frozen=True)
class CodeSearchRecord:
    id: str
    query: str
    code: str
    language: str
    split: str


@dataclass
class LoadResult:
    records: list[CodeSearchRecord]
    errors: list[SchemaError] = field(default_factory=list)


@dataclass
class DatasetStats:
    records_per_split: dict[str, int]
    code_token_vocab: int
    asttrans_vocab: int
    mean_ast_depth: float
    unparseable: int


@dataclass
class CorpusBuildSummary:
    built: int
    excluded_ids: list[str] = field(default_factory=list)
    parse_errors: dict[str, str] = field(default_factory=dict)


def tokenize_query(query: str) -> list[str]:
    """Lowercase whitespace tokenization; no stemming."""
    return query.lower().split()


def load_dataset(path: str | Path, format: str = "jsonl",
                 strict: bool = True) -> LoadResult:
    """Read and validate records; in strict mode the first malformed line
    raises, otherwise errors are collected alongside the good records."""
    if format != "jsonl":
        raise SchemaError(f"unsupported format {format!r}", 0)
    records: list[CodeSearchRecord] = []
    errors: list[SchemaError] = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(_parse_record(line, line_number))
            except SchemaError as e:
                if strict:
                    raise
                errors.append(e)
    return LoadResult(records, errors)


def _parse_record(line: str, line_number: int) -> CodeSearchRecord:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg}", line_number) from None
    if not isinstance(raw, dict):
        raise SchemaError("line is not a JSON object", line_number)
    for fname in _REQUIRED_FIELDS:
        if fname not in raw:
            raise SchemaError("missing field", line_number, fname)
        if not isinstance(raw[fname], str) or not raw[fname]:
            raise SchemaError("field must be a non-empty string", line_number, fname)
    if raw["lang"] not in LANGUAGES:
        raise SchemaError(f"unsupported language {raw['lang']!r}", line_number, "lang")
    if raw["split"] not in SPLITS:
        raise SchemaError(f"unknown split {raw['split']!r}", line_number, "split")
    return CodeSearchRecord(raw["id"], raw["query"], raw["code"], raw["lang"], raw["split"])


def save_dataset(path: str | Path, records: list[CodeSearchRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(json.dumps({"id": r.id, "query": r.query, "code": r.code,
                                "lang": r.language, "split": r.split},
                               ensure_ascii=False) + "\n")


def filter_split(records: list[CodeSearchRecord], split: str) -> list[CodeSearchRecord]:
    return [r for r in records if r.split == split]


def build_parallel_corpora(records: list[CodeSearchRecord],
                           repr_cfg: ReprConfig = ReprConfig(),
                           split: str = "train"
                           ) -> tuple[ParallelCorpus, ParallelCorpus, CorpusBuildSummary]:
    """Two corpora over the same records: query -> code tokens and
    query -> tree-summary tokens. Unparseable records are dropped from both."""
    code_pairs: list[Pair] = []
    repr_pairs: list[Pair] = []
    summary = CorpusBuildSummary(built=0)
    for record in records:
        query_tokens = tuple(tokenize_query(record.query))
        try:
            ast = parse_code(record.code, record.language)
        except ParseError as e:
            summary.excluded_ids.append(record.id)
            summary.parse_errors[record.id] = str(e)
            continue
        code_tokens = tuple(ast.terminal_texts())
        repr_tokens = text_seq(ast, repr_cfg.depth_k).tokens
        if not query_tokens or not code_tokens or not repr_tokens:
            summary.excluded_ids.append(record.id)
            summary.parse_errors[record.id] = "empty side after tokenization"
            continue
        code_pairs.append(Pair(record.id, query_tokens, code_tokens))
        repr_pairs.append(Pair(record.id, query_tokens, repr_tokens))
        summary.built += 1
    return (ParallelCorpus(code_pairs, split), ParallelCorpus(repr_pairs, split), summary)


def compute_stats(records: list[CodeSearchRecord],
                  repr_cfg: ReprConfig = ReprConfig()) -> DatasetStats:
    """Split counts, target-side vocabulary sizes, and mean tree depth."""
    per_split = {s: 0 for s in SPLITS}
    code_vocab: set[str] = set()
    repr_vocab: set[str] = set()
    depths: list[int] = []
    unparseable = 0
    for record in records:
        per_split[record.split] = per_split.get(record.split, 0) + 1
        try:
            ast = parse_code(record.code, record.language)
        except ParseError:
            unparseable += 1
            continue
        code_vocab.update(ast.terminal_texts())
        repr_vocab.update(text_seq(ast, repr_cfg.depth_k).tokens)
        depths.append(ast.max_depth())
    mean_depth = sum(depths) / len(depths) if depths else 0.0
    return DatasetStats(per_split, len(code_vocab), len(repr_vocab), mean_depth, unparseable)


def write_corpus_files(out_dir: str | Path, split: str,
                       code_corpus: ParallelCorpus, repr_corpus: ParallelCorpus) -> dict[str, Path]:
    """Aligned file triple per split: shared source, two target files, plus
    an id column file; line i of every file refers to the same record."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if [p.pair_id for p in code_corpus.pairs] != [p.pair_id for p in repr_corpus.pairs]:
        raise SchemaError("corpora are not aligned by record id", 0)
    paths = {
        "src": out_dir / f"{split}.src",
        "code_tgt": out_dir / f"{split}.code.tgt",
        "repr_tgt": out_dir / f"{split}.repr.tgt",
        "ids": out_dir / f"{split}.ids",
    }
    with open(paths["src"], "w", encoding="utf-8", newline="\n") as f:
        for p in code_corpus.pairs:
            f.write(" ".join(p.source) + "\n")
    with open(paths["code_tgt"], "w", encoding="utf-8", newline="\n") as f:
        for p in code_corpus.pairs:
            f.write(" ".join(p.target) + "\n")
    with open(paths["repr_tgt"], "w", encoding="utf-8", newline="\n") as f:
        for p in repr_corpus.pairs:
            f.write(" ".join(p.target) + "\n")
    with open(paths["ids"], "w", encoding="utf-8", newline="\n") as f:
        for p in code_corpus.pairs:
            f.write(p.pair_id + "\n")
    return paths
