"""Skip-gram embedder tests: training behavior, pooling, persistence."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from astsearch.embed import (
    EmbedConfig, EmbedderModel, embed_tokens, load_model, save_model, train_embedder,
)
from astsearch.errors import (
    DegenerateVocab, EmptyCorpus, EmptySequence, FormatVersionMismatch,
)
from astsearch.search import cosine_similarity

SMALL = EmbedConfig(dim=16, epochs=3, subwords_enabled=False, rng_seed=7)


@pytest.fixture(scope="module")
def cooccurrence_model():
    """A and B co-occur in every sentence; C lives in unrelated contexts."""
    rng = np.random.default_rng(7)
    ab_fillers = [f"x{i}" for i in range(6)]
    c_fillers = [f"y{i}" for i in range(6)]
    corpus = []
    for _ in range(200):
        corpus.append([ab_fillers[rng.integers(0, 6)], "A", "B",
                       ab_fillers[rng.integers(0, 6)]])
        corpus.append([c_fillers[rng.integers(0, 6)], "C", c_fillers[rng.integers(0, 6)]])
    config = EmbedConfig(dim=16, epochs=8, subwords_enabled=False, rng_seed=3)
    return train_embedder(corpus, config)


class TestTraining:
    def test_degenerate_vocab(self):
        with pytest.raises(DegenerateVocab):
            train_embedder([["same", "same"], ["same"]], SMALL)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_embedder([], SMALL)
        with pytest.raises(EmptyCorpus):
            train_embedder([["a"], []], SMALL)

    def test_cooccurring_tokens_end_up_closer(self, cooccurrence_model):
        model = cooccurrence_model
        a = embed_tokens(model, ["A"]).values
        b = embed_tokens(model, ["B"]).values
        c = embed_tokens(model, ["C"]).values
        assert cosine_similarity(a, b) > cosine_similarity(a, c)

    def test_loss_non_increasing_within_tolerance(self, cooccurrence_model):
        losses = cooccurrence_model.epoch_losses
        assert len(losses) == 8
        for earlier, later in zip(losses, losses[1:]):
            assert later <= earlier * 1.05

    def test_no_non_finite_vectors(self, cooccurrence_model):
        assert np.all(np.isfinite(cooccurrence_model.input_vectors))
        assert np.all(np.isfinite(cooccurrence_model.output_vectors))

    def test_deterministic_given_seed(self):
        corpus = [["a", "b", "c"], ["b", "c", "d"], ["a", "d"]] * 10
        m1 = train_embedder(corpus, SMALL)
        m2 = train_embedder(corpus, SMALL)
        assert np.array_equal(m1.input_vectors, m2.input_vectors)
        assert np.array_equal(m1.output_vectors, m2.output_vectors)

    def test_min_count_prunes_vocab(self):
        corpus = [["common", "other", "rare"]] + [["common", "other"]] * 5
        config = EmbedConfig(dim=8, epochs=1, min_token_count=2,
                             subwords_enabled=False, rng_seed=1)
        model = train_embedder(corpus, config)
        assert "rare" not in model.vocab
        assert {"common", "other"} <= set(model.vocab)

    def test_vocab_bounded_by_summary_vocabulary(self, desk_java_path):
        import json
        from astsearch.ast_repr import parse_code, text_seq
        sequences, node_types = [], set()
        with open(desk_java_path, encoding="utf-8") as f:
            for line in f:
                record = json.loads(line)
                ast = parse_code(record["code"], "java")
                node_types.update(n.node_type for n in ast.nodes.values())
                sequences.append(list(text_seq(ast, 5).tokens))
        model = train_embedder(sequences, SMALL)
        assert len(model.vocab) <= 2 * len(node_types)


class TestEmbedTokens:
    def test_single_in_vocab_token_is_normalized_vector(self, cooccurrence_model):
        model = cooccurrence_model
        raw = model.input_vectors[model.vocab["A"]]
        expected = raw / np.linalg.norm(raw)
        assert np.allclose(embed_tokens(model, ["A"]).values, expected)

    def test_repetition_invariance(self, cooccurrence_model):
        one = embed_tokens(cooccurrence_model, ["A"]).values
        many = embed_tokens(cooccurrence_model, ["A"] * 7).values
        assert np.allclose(one, many)

    def test_empty_sequence_rejected(self, cooccurrence_model):
        with pytest.raises(EmptySequence):
            embed_tokens(cooccurrence_model, [])

    @given(st.permutations(["A", "B", "C", "x0", "y1"]))
    @settings(max_examples=30, deadline=None)
    def test_order_invariance(self, tokens):
        model = _PERMUTATION_MODEL
        base = embed_tokens(model, ["A", "B", "C", "x0", "y1"]).values
        assert np.allclose(embed_tokens(model, list(tokens)).values, base)

    def test_oov_with_subwords_disabled_is_zero_and_counted(self, cooccurrence_model):
        model = cooccurrence_model
        before = model.oov_tokens_seen
        vec = embed_tokens(model, ["never-seen-token"]).values
        assert np.all(vec == 0.0)
        assert model.oov_tokens_seen == before + 1

    def test_oov_with_subwords_gets_nonzero_vector(self):
        corpus = [["alpha", "beta"], ["beta", "gamma"]] * 5
        config = EmbedConfig(dim=8, epochs=1, subwords_enabled=True,
                             subword_buckets=512, rng_seed=2)
        model = train_embedder(corpus, config)
        vec = embed_tokens(model, ["alphabet"]).values
        assert np.linalg.norm(vec) > 0


_PERMUTATION_MODEL = None


def setup_module(module):
    global _PERMUTATION_MODEL
    rng = np.random.default_rng(7)
    corpus = []
    for _ in range(30):
        corpus.append(["A", "B", "C", f"x{rng.integers(0, 3)}", f"y{rng.integers(0, 3)}"])
    module._PERMUTATION_MODEL = train_embedder(
        corpus, EmbedConfig(dim=8, epochs=2, subwords_enabled=False, rng_seed=1))
    globals()["_PERMUTATION_MODEL"] = module._PERMUTATION_MODEL


class TestPersistence:
    def test_roundtrip_bit_exact(self, cooccurrence_model, tmp_path):
        path = tmp_path / "model.vec"
        save_model(cooccurrence_model, path)
        loaded = load_model(path)
        assert loaded.vocab == cooccurrence_model.vocab
        assert np.array_equal(loaded.input_vectors, cooccurrence_model.input_vectors)
        assert np.array_equal(loaded.output_vectors, cooccurrence_model.output_vectors)
        for tokens in (["A"], ["B", "C"], ["A", "zzz-oov", "x0"]):
            assert np.array_equal(embed_tokens(cooccurrence_model, tokens).values,
                                  embed_tokens(loaded, tokens).values)

    def test_roundtrip_with_subwords(self, tmp_path):
        corpus = [["alpha", "beta"], ["beta", "gamma"]] * 5
        config = EmbedConfig(dim=8, epochs=1, subword_buckets=256, rng_seed=4)
        model = train_embedder(corpus, config)
        save_model(model, tmp_path / "m.vec")
        loaded = load_model(tmp_path / "m.vec")
        oov = ["betamax"]
        assert np.array_equal(embed_tokens(model, oov).values,
                              embed_tokens(loaded, oov).values)

    def test_truncated_sidecar_rejected(self, cooccurrence_model, tmp_path):
        path = tmp_path / "model.vec"
        save_model(cooccurrence_model, path)
        sidecar = tmp_path / "model.vec.npz"
        sidecar.write_bytes(sidecar.read_bytes()[:100])
        with pytest.raises(FormatVersionMismatch):
            load_model(path)

    def test_truncated_text_rejected(self, cooccurrence_model, tmp_path):
        path = tmp_path / "model.vec"
        save_model(cooccurrence_model, path)
        content = path.read_text(encoding="utf-8").splitlines()
        broken = content[0] + "\n" + content[1][:20] + "\n"
        path.write_text(broken, encoding="utf-8")
        with pytest.raises(FormatVersionMismatch):
            load_model(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            load_model(tmp_path / "nope.vec")

    def test_text_export_format(self, cooccurrence_model, tmp_path):
        path = tmp_path / "model.vec"
        save_model(cooccurrence_model, path)
        with open(path, encoding="utf-8") as f:
            header = f.readline().split()
            assert len(header) == 2
            count, dim = int(header[0]), int(header[1])
            lines = f.read().splitlines()
        assert count == len(lines) == len(cooccurrence_model.vocab)
        for line in lines:
            parts = line.split(" ")
            assert len(parts) == dim + 1
            [float(v) for v in parts[1:]]
