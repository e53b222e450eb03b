"""Command-line pipeline: extraction, training, search, evaluation, sweeps.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal
invariant failure.
"""

import json
import shutil
import sys
from pathlib import Path

import click
import numpy as np

from astsearch import errors as err
from astsearch.ast_repr import (
    ReprConfig, parse_code, text_seq, write_extraction_manifest, write_repr_lines,
)
from astsearch.corpus import (
    CodeSearchRecord, build_parallel_corpora, filter_split, load_dataset,
    tokenize_query, write_corpus_files,
)
from astsearch.embed import EmbedConfig, embed_tokens, load_model, save_model, train_embedder
from astsearch.manifest import (
    ExtractionCache, RunManifest, cache_key, file_sha256, thread_count,
)
from astsearch.metrics import SearchCase, average_effect_mrr, crystal_bleu_4, mrr
from astsearch.search import (
    AUGMENTED, CombineConfig, EmbeddingSet, SimMatrix, build_sim_matrix, combine,
    concat_embeddings, load_embedding_set, pca_reduce, rank_all, save_sim_matrix,
)
from astsearch.translator import (
    ParallelCorpus, Seq2SeqConfig, desk_profile, load_checkpoint, load_parallel_corpus,
    save_checkpoint, train_translator, translate,
)

DATA_ERRORS = (err.SchemaError, err.ParseError, err.UnsupportedLanguage,
               err.FormatVersionMismatch, err.IdOrderMismatch, err.DimMismatch,
               err.EmptyCorpus, err.DegenerateVocab, err.LengthMismatch,
               err.EmptyCaseSet, err.CaseSetMismatch, err.MissingConfiguration,
               err.TargetDimTooLarge, err.UnknownQuery, OSError)


@click.group()
def cli():
    """AST-summary augmented code search toolkit."""


# ---------------------------------------------------------------- extract

@cli.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", default=5, show_default=True, help="Summary depth below the root.")
@click.option("--split", default="all", show_default=True,
              type=click.Choice(["all", "train", "valid", "test"]))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def extract(dataset, depth, split, out):
    """Extract tree summaries for every record of DATASET."""
    manifest = RunManifest("extract", {"depth": depth, "split": split})
    manifest.add_input("dataset", dataset)
    records = _records(dataset, split)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reprs, rows, ids, failures = [], [], [], {}
    for record in records:
        try:
            ast = parse_code(record.code, record.language)
        except err.ParseError as e:
            failures[record.id] = str(e)
            continue
        summary = text_seq(ast, depth)
        reprs.append(summary)
        rows.append((record.id, summary, ast))
        ids.append(record.id)
    write_repr_lines(out_dir / "candidates.repr", reprs)
    (out_dir / "candidates.ids").write_text("\n".join(ids) + "\n", encoding="utf-8")
    write_extraction_manifest(out_dir / "extraction.tsv", rows)
    for name in ("candidates.repr", "candidates.ids", "extraction.tsv"):
        manifest.add_output(str(out_dir / name))
    manifest.config["parse_failures"] = failures
    manifest.write(out_dir)
    click.echo(f"extracted {len(ids)} records ({len(failures)} failed) -> {out_dir}")
    if failures:
        for record_id, message in failures.items():
            click.echo(f"  parse failure {record_id}: {message}", err=True)
        sys.exit(2)


# ---------------------------------------------------------------- corpora

@cli.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", default=5, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def corpora(dataset, depth, out):
    """Write aligned parallel-corpus files (src/code.tgt/repr.tgt) per split."""
    manifest = RunManifest("corpora", {"depth": depth})
    manifest.add_input("dataset", dataset)
    all_records = load_dataset(dataset).records
    out_dir = Path(out)
    total_excluded: list[str] = []
    for split in ("train", "valid", "test"):
        records = filter_split(all_records, split)
        if not records:
            continue
        code_corpus, repr_corpus, summary = build_parallel_corpora(
            records, ReprConfig(depth), split)
        paths = write_corpus_files(out_dir, split, code_corpus, repr_corpus)
        total_excluded.extend(summary.excluded_ids)
        for p in paths.values():
            manifest.add_output(p)
    manifest.config["excluded_ids"] = total_excluded
    manifest.write(out_dir)
    click.echo(f"corpora written to {out_dir} (excluded {len(total_excluded)} records)")


# ---------------------------------------------------------------- training

@cli.command("train-embedder")
@click.argument("corpus_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dim", default=100, show_default=True)
@click.option("--window", default=5, show_default=True)
@click.option("--negatives", default=5, show_default=True)
@click.option("--epochs", default=5, show_default=True)
@click.option("--lr", default=0.05, show_default=True)
@click.option("--min-count", default=1, show_default=True)
@click.option("--subwords/--no-subwords", default=True, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def train_embedder_cmd(corpus_file, dim, window, negatives, epochs, lr,
                       min_count, subwords, seed, out):
    """Train the token embedder on one-sequence-per-line CORPUS_FILE."""
    config = EmbedConfig(dim=dim, window=window, negative_samples=negatives,
                         epochs=epochs, learning_rate=lr, min_token_count=min_count,
                         subwords_enabled=subwords, rng_seed=seed)
    manifest = RunManifest("train-embedder", {"config": config.__dict__ | {}})
    manifest.add_input("corpus", corpus_file)
    manifest.seeds["embedder"] = seed
    with open(corpus_file, encoding="utf-8") as f:
        sequences = [line.split() for line in f if line.strip()]
    model = train_embedder(sequences, config)
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, out_path)
    manifest.add_output(out_path)
    manifest.write(out_path.parent)
    click.echo(f"embedder trained: vocab {len(model.vocab)}, "
               f"final loss {model.epoch_losses[-1]:.4f} -> {out_path}")


@cli.command("train-translator")
@click.argument("src_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("tgt_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--profile", default="desk", show_default=True,
              type=click.Choice(["paper", "desk"]))
@click.option("--hidden", type=int, default=None, help="Override hidden units.")
@click.option("--steps", type=int, default=None, help="Override training steps.")
@click.option("--layers", type=int, default=None, help="Override layer count.")
@click.option("--batch", type=int, default=None)
@click.option("--validate-every", type=int, default=None)
@click.option("--valid-src", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--valid-tgt", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", default=1234, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def train_translator_cmd(src_file, tgt_file, profile, hidden, steps, layers,
                         batch, validate_every, valid_src, valid_tgt, seed, out):
    """Train the query-to-summary translator on aligned SRC_FILE/TGT_FILE."""
    config = _translator_config(profile, hidden, steps, layers, batch, validate_every, seed)
    manifest = RunManifest("train-translator", {"config": config.__dict__ | {}})
    manifest.add_input("src", src_file)
    manifest.add_input("tgt", tgt_file)
    manifest.seeds["translator"] = seed
    corpus = load_parallel_corpus(src_file, tgt_file, "train")
    valid = None
    if valid_src and valid_tgt:
        valid = load_parallel_corpus(valid_src, valid_tgt, "valid")
    model, report = train_translator(corpus, config, valid)
    out_path = Path(out)
    save_checkpoint(out_path, model)
    manifest.add_output(out_path)
    manifest.write(out_path.parent)
    click.echo(f"translator trained {report.steps_run} steps; best step "
               f"{report.best_step} (loss {report.best_valid_loss:.4f}) -> {out_path}")


def _translator_config(profile, hidden, steps, layers, batch, validate_every, seed):
    overrides = {}
    if hidden is not None:
        overrides["hidden_units"] = hidden
    if steps is not None:
        overrides["train_steps"] = steps
    if layers is not None:
        overrides["encoder_layers"] = layers
        overrides["decoder_layers"] = layers
    if batch is not None:
        overrides["batch_size"] = batch
    if validate_every is not None:
        overrides["validate_every"] = validate_every
    overrides["rng_seed"] = seed
    if profile == "desk":
        config = desk_profile(**overrides)
    else:
        config = Seq2SeqConfig(**overrides)
    return config


# ---------------------------------------------------------------- search

@cli.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--split", default="test", show_default=True,
              type=click.Choice(["all", "train", "valid", "test"]))
@click.option("--original-query-vectors", "qvec_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--original-cand-vectors", "cvec_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--augmented", default="on", show_default=True, type=click.Choice(["on", "off"]))
@click.option("--translator", "translator_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--embedder", "embedder_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--candidate-reprs", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Precomputed summary lines aligned with the split's records.")
@click.option("--depth", default=5, show_default=True)
@click.option("--w", default=0.1, show_default=True, help="Augmented-matrix weight.")
@click.option("--pca-dim", default=0, show_default=True,
              help="Reduce original vectors to this dimension (0 = keep).")
@click.option("--strategy", default="matrix", show_default=True,
              type=click.Choice(["matrix", "concat"]))
@click.option("--original-model", default="external", show_default=True,
              help="Tag of the original embedding supplier (for reports).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def search(dataset, split, qvec_file, cvec_file, augmented, translator_path,
           embedder_path, candidate_reprs, depth, w, pca_dim, strategy,
           original_model, out):
    """Rank candidates for each query of DATASET's split on both tracks."""
    config = {"split": split, "augmented": augmented, "depth": depth, "w": w,
              "pca_dim": pca_dim, "strategy": strategy,
              "original_model": original_model, "original_dim": 0}
    manifest = RunManifest("search", config)
    manifest.add_input("dataset", dataset)
    manifest.add_input("original_query_vectors", qvec_file)
    manifest.add_input("original_cand_vectors", cvec_file)
    records = _records(dataset, split)
    ids = [r.id for r in records]

    org_q = _restrict(load_embedding_set(qvec_file), ids, "query")
    org_c = _restrict(load_embedding_set(cvec_file), ids, "candidate")
    if pca_dim:
        org_c, pca_model = pca_reduce(org_c, pca_dim)
        org_q, _ = pca_reduce(org_q, pca_dim, pca_model)
    config["original_dim"] = org_q.dim

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    org_matrix = build_sim_matrix(org_q, org_c, kind="original")
    save_sim_matrix(out_dir / "org.sim.tsv", org_matrix)
    _write_rankings(out_dir / "org.rankings.tsv", org_matrix)

    if augmented == "on":
        if not translator_path or not embedder_path:
            raise click.UsageError("--augmented on requires --translator and --embedder")
        manifest.add_input("translator", translator_path)
        manifest.add_input("embedder", embedder_path)
        aug_q, aug_c = _augmented_sets(records, translator_path, embedder_path,
                                       candidate_reprs, depth)
        if strategy == "concat":
            cat_q = concat_embeddings(org_q, aug_q)
            cat_c = concat_embeddings(org_c, aug_c)
            com_matrix = build_sim_matrix(cat_q, cat_c, kind="combined")
            aug_matrix = build_sim_matrix(aug_q, aug_c)
            save_sim_matrix(out_dir / "aug.sim.tsv", aug_matrix)
        else:
            aug_matrix = build_sim_matrix(aug_q, aug_c)
            save_sim_matrix(out_dir / "aug.sim.tsv", aug_matrix)
            com_matrix = combine(org_matrix, aug_matrix, CombineConfig(w))
        save_sim_matrix(out_dir / "com.sim.tsv", com_matrix)
        _write_rankings(out_dir / "com.rankings.tsv", com_matrix)
    else:
        shutil.copyfile(out_dir / "org.sim.tsv", out_dir / "com.sim.tsv")
        shutil.copyfile(out_dir / "org.rankings.tsv", out_dir / "com.rankings.tsv")

    with open(out_dir / "cases.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("query_id\tcorrect_candidate_id\n")
        for record_id in ids:
            f.write(f"{record_id}\t{record_id}\n")
    for name in ("org.sim.tsv", "com.sim.tsv", "org.rankings.tsv",
                 "com.rankings.tsv", "cases.tsv"):
        manifest.add_output(str(out_dir / name))
    manifest.write(out_dir)
    click.echo(f"search complete: {len(ids)} queries x {len(ids)} candidates -> {out_dir}")


def _records(dataset: str, split: str) -> list[CodeSearchRecord]:
    records = load_dataset(dataset).records
    if split != "all":
        records = filter_split(records, split)
    if not records:
        raise err.SchemaError(f"no records in split {split!r}", 0)
    return records


def _restrict(items: EmbeddingSet, ids: list[str], side: str) -> EmbeddingSet:
    index = {item_id: i for i, item_id in enumerate(items.ids)}
    missing = [i for i in ids if i not in index]
    if missing:
        raise err.IdOrderMismatch(
            f"{side} vectors missing for ids: {', '.join(missing[:10])}"
            + ("..." if len(missing) > 10 else ""))
    rows = np.array([items.vectors[index[i]] for i in ids])
    return EmbeddingSet(list(ids), rows, items.source)


def _augmented_sets(records, translator_path, embedder_path, candidate_reprs, depth):
    translator = load_checkpoint(translator_path)
    embedder = load_model(embedder_path)
    ids = [r.id for r in records]
    query_rows = []
    for record in records:
        translation = translate(translator, tokenize_query(record.query))
        if translation.tokens:
            query_rows.append(embed_tokens(embedder, translation.tokens).values)
        else:
            query_rows.append(np.zeros(embedder.config.dim))
    if candidate_reprs:
        with open(candidate_reprs, encoding="utf-8") as f:
            lines = [line.split() for line in f.read().splitlines()]
        if len(lines) != len(records):
            raise err.IdOrderMismatch(
                f"--candidate-reprs has {len(lines)} lines for {len(records)} records")
        token_lists = lines
    else:
        token_lists = [list(text_seq(parse_code(r.code, r.language), depth).tokens)
                       for r in records]
    cand_rows = [embed_tokens(embedder, tokens).values if tokens
                 else np.zeros(embedder.config.dim) for tokens in token_lists]
    return (EmbeddingSet(ids, np.array(query_rows), AUGMENTED),
            EmbeddingSet(ids, np.array(cand_rows), AUGMENTED))


def _write_rankings(path: Path, matrix: SimMatrix) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for ranked in rank_all(matrix):
            f.write(ranked.query_id + "\t" + "\t".join(ranked.candidates) + "\n")


def _read_rankings(path: Path) -> dict[str, list[str]]:
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            parts = line.rstrip("\n").split("\t")
            out[parts[0]] = parts[1:]
    return out


def _read_cases(path: Path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as f:
        next(f)
        for line in f:
            query_id, correct = line.rstrip("\n").split("\t")
            out[query_id] = correct
    return out


# ---------------------------------------------------------------- eval

@cli.command("eval")
@click.option("--run", "runs", multiple=True, required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Search output directory; repeat for several configurations.")
@click.option("--cases", "cases_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Override the cases file (default: each run's cases.tsv).")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def eval_cmd(runs, cases_path, out):
    """Score search runs: MRR on both tracks and the improvement per run."""
    manifest = RunManifest("eval", {"runs": list(runs)})
    rows = []
    effects: dict[tuple[str, int], float] = {}
    for run_dir in runs:
        run_dir = Path(run_dir)
        with open(run_dir / "manifest.json", encoding="utf-8") as f:
            run_config = json.load(f)["config"]
        cases_file = Path(cases_path) if cases_path else run_dir / "cases.tsv"
        correct = _read_cases(cases_file)
        org_cases = _cases_from(run_dir / "org.rankings.tsv", correct)
        com_cases = _cases_from(run_dir / "com.rankings.tsv", correct)
        mrr_org, mrr_com = mrr(org_cases), mrr(com_cases)
        tag = run_config.get("original_model", "external")
        dim = int(run_config.get("original_dim", 0))
        effect = mrr_com - mrr_org
        rows.append((run_dir.name, tag, dim, mrr_org, mrr_com, effect))
        effects[(tag, dim)] = effect
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        f.write("dataset\to\td\tMRR_org\tMRR_com\tEffectMRR\n")
        for name, tag, dim, mrr_org, mrr_com, effect in rows:
            f.write(f"{name}\t{tag}\t{dim}\t{mrr_org:.9g}\t{mrr_com:.9g}\t{effect:.9g}\n")
        if len(effects) == 4:
            try:
                avg = average_effect_mrr(effects)
                f.write(f"average\t-\t-\t-\t-\t{avg:.9g}\n")
            except err.MissingConfiguration:
                pass
    manifest.add_output(out_path)
    manifest.write(out_path.parent)
    click.echo(f"evaluation report -> {out_path}")


def _cases_from(rankings_path: Path, correct: dict[str, str]) -> list[SearchCase]:
    from astsearch.search import RankedList
    cases = []
    for query_id, candidates in _read_rankings(rankings_path).items():
        cases.append(SearchCase(query_id, correct[query_id],
                                RankedList(query_id, candidates)))
    return cases


# ---------------------------------------------------------------- compare-targets

@cli.command("compare-targets")
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", default=5, show_default=True)
@click.option("--hidden", default=64, show_default=True)
@click.option("--steps", default=5000, show_default=True)
@click.option("--batch", default=32, show_default=True)
@click.option("--trivially-shared", default=2, show_default=True)
@click.option("--seed", default=1234, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def compare_targets(dataset, depth, hidden, steps, batch, trivially_shared, seed, out):
    """Train identical translators against code tokens vs tree summaries and
    score both with shared-n-gram-filtered BLEU on the test split."""
    manifest = RunManifest("compare-targets", {
        "depth": depth, "hidden": hidden, "steps": steps,
        "trivially_shared": trivially_shared})
    manifest.add_input("dataset", dataset)
    manifest.seeds["translator"] = seed
    all_records = load_dataset(dataset).records
    train_code, train_repr, _ = build_parallel_corpora(
        filter_split(all_records, "train"), ReprConfig(depth), "train")
    test_code, test_repr, _ = build_parallel_corpora(
        filter_split(all_records, "test"), ReprConfig(depth), "test")

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    scores = {}
    for kind, train_corpus, test_corpus in (
            ("code_tokens", train_code, test_code),
            ("asttrans", train_repr, test_repr)):
        config = desk_profile(hidden_units=hidden, train_steps=steps,
                              batch_size=batch, rng_seed=seed)
        model, _report = train_translator(train_corpus, config)
        save_checkpoint(out_dir / f"{kind}.ckpt", model)
        hypotheses = [translate(model, p.source).tokens for p in test_corpus.pairs]
        references = [list(p.target) for p in test_corpus.pairs]
        scores[kind] = crystal_bleu_4(hypotheses, references, trivially_shared)

    report_path = out_dir / "report.tsv"
    with open(report_path, "w", encoding="utf-8", newline="\n") as f:
        f.write("dataset\ttarget_kind\tCrystalBLEU4\tMeteor\n")
        for kind in ("code_tokens", "asttrans"):
            f.write(f"{Path(dataset).stem}\t{kind}\t{scores[kind]:.9g}\tNA\n")
    manifest.add_output(report_path)
    manifest.write(out_dir)
    click.echo(f"code_tokens {scores['code_tokens']:.4f} vs "
               f"asttrans {scores['asttrans']:.4f} -> {report_path}")


# ---------------------------------------------------------------- sweep

@cli.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--param", required=True, type=click.Choice(["depth", "weight"]))
@click.option("--values", required=True,
              help="Comma-separated sweep values, e.g. 0.1,0.2 or 2,3,4.")
@click.option("--original-query-vectors", "qvec_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--original-cand-vectors", "cvec_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--split", default="test", show_default=True)
@click.option("--depth", default=5, show_default=True, help="Fixed depth for weight sweeps.")
@click.option("--w", default=0.1, show_default=True, help="Fixed weight for depth sweeps.")
@click.option("--hidden", default=64, show_default=True)
@click.option("--steps", default=5000, show_default=True)
@click.option("--batch", default=32, show_default=True)
@click.option("--embed-epochs", default=5, show_default=True)
@click.option("--seed", default=1234, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def sweep(dataset, param, values, qvec_file, cvec_file, split, depth, w,
          hidden, steps, batch, embed_epochs, seed, out):
    """Rerun the pipeline over a parameter grid, reusing cached extractions."""
    try:
        parsed = ([int(v) for v in values.split(",")] if param == "depth"
                  else [float(v) for v in values.split(",")])
    except ValueError as e:
        raise click.UsageError(f"bad --values: {e}") from None
    manifest = RunManifest("sweep", {"param": param, "values": parsed, "split": split,
                                     "depth": depth, "w": w})
    manifest.add_input("dataset", dataset)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    all_records = load_dataset(dataset).records
    eval_records = filter_split(all_records, split) if split != "all" else all_records
    ids = [r.id for r in eval_records]
    org_q = _restrict(load_embedding_set(qvec_file), ids, "query")
    org_c = _restrict(load_embedding_set(cvec_file), ids, "candidate")
    org_matrix = build_sim_matrix(org_q, org_c, kind="original")
    correct = {i: i for i in ids}
    org_cases = _matrix_cases(org_matrix, correct)
    mrr_org = mrr(org_cases)

    rows = []
    if param == "weight":
        aug_matrix = _pipeline_aug_matrix(dataset, all_records, eval_records, depth,
                                          hidden, steps, batch, embed_epochs, seed, out_dir)
        for value in parsed:
            com = combine(org_matrix, aug_matrix, CombineConfig(value))
            effect = mrr(_matrix_cases(com, correct)) - mrr_org
            rows.append((value, mrr_org, mrr_org + effect, effect))
    else:
        for value in parsed:
            aug_matrix = _pipeline_aug_matrix(dataset, all_records, eval_records, value,
                                              hidden, steps, batch, embed_epochs, seed, out_dir)
            com = combine(org_matrix, aug_matrix, CombineConfig(w))
            effect = mrr(_matrix_cases(com, correct)) - mrr_org
            rows.append((value, mrr_org, mrr_org + effect, effect))

    report_path = out_dir / "sweep.tsv"
    with open(report_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{param}\tMRR_org\tMRR_com\tEffectMRR\n")
        for value, m_org, m_com, effect in rows:
            f.write(f"{value:g}\t{m_org:.9g}\t{m_com:.9g}\t{effect:.9g}\n")
    manifest.add_output(report_path)
    manifest.write(out_dir)
    click.echo(f"sweep report ({len(rows)} rows) -> {report_path}")


def _matrix_cases(matrix: SimMatrix, correct: dict[str, str]) -> list[SearchCase]:
    return [SearchCase(r.query_id, correct[r.query_id], r) for r in rank_all(matrix)]


def _pipeline_aug_matrix(dataset, all_records, eval_records, depth, hidden, steps,
                         batch, embed_epochs, seed, out_dir):
    """Extract (cached), train embedder + translator, build the augmented matrix."""
    cache = ExtractionCache()
    key = cache_key(file_sha256(dataset), f"depth={depth}", "extract-v1")
    entry = cache.lookup(key)
    if entry is None:
        entry = cache.store(key)
        train_code, train_repr, _ = build_parallel_corpora(
            filter_split(all_records, "train"), ReprConfig(depth), "train")
        with open(entry / "train.src", "w", encoding="utf-8", newline="\n") as f:
            for p in train_repr.pairs:
                f.write(" ".join(p.source) + "\n")
        with open(entry / "train.repr.tgt", "w", encoding="utf-8", newline="\n") as f:
            for p in train_repr.pairs:
                f.write(" ".join(p.target) + "\n")
    train_corpus = load_parallel_corpus(entry / "train.src", entry / "train.repr.tgt")

    embed_cfg = EmbedConfig(epochs=embed_epochs, rng_seed=seed)
    embedder = train_embedder([list(p.target) for p in train_corpus.pairs], embed_cfg)
    config = desk_profile(hidden_units=hidden, train_steps=steps,
                          batch_size=batch, rng_seed=seed)
    translator, _ = train_translator(train_corpus, config)

    ids = [r.id for r in eval_records]
    query_rows, cand_rows = [], []
    for record in eval_records:
        translation = translate(translator, tokenize_query(record.query))
        query_rows.append(embed_tokens(embedder, translation.tokens).values
                          if translation.tokens else np.zeros(embed_cfg.dim))
        tokens = list(text_seq(parse_code(record.code, record.language), depth).tokens)
        cand_rows.append(embed_tokens(embedder, tokens).values
                         if tokens else np.zeros(embed_cfg.dim))
    aug_q = EmbeddingSet(ids, np.array(query_rows), AUGMENTED)
    aug_c = EmbeddingSet(ids, np.array(cand_rows), AUGMENTED)
    return build_sim_matrix(aug_q, aug_c)


# ---------------------------------------------------------------- entry point

def main(argv=None):
    threads = thread_count()
    if threads:
        import torch
        torch.set_num_threads(threads)
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except (click.UsageError, err.ConfigError) as e:
        click.echo(f"usage error: {e}", err=True)
        return 1
    except SystemExit as e:
        return int(e.code or 0)
    except DATA_ERRORS as e:
        click.echo(f"data error: {e}", err=True)
        return 2
    except err.AstSearchError as e:
        click.echo(f"internal error: {e}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
