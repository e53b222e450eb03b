"""Translator tests: gradients, memorization, attention, decoding, persistence."""

import numpy as np
import pytest
import torch

from astsearch.errors import ConfigError, DivergedLoss, EmptyCorpus, EmptySequence
from astsearch.translator import (
    Pair, ParallelCorpus, Seq2Seq, Seq2SeqConfig, Vocab, attention_weights,
    load_checkpoint, make_batch, parameter_count, save_checkpoint,
    train_translator, translate,
)
from astsearch.translator.data import SPECIALS


def tiny_corpus():
    pairs = [
        Pair("0", ("find", "the", "sum"), ("alpha", "beta")),
        Pair("1", ("count", "items"), ("beta", "gamma", "alpha")),
    ]
    return ParallelCorpus(pairs)


def build_model(corpus, **overrides):
    config = Seq2SeqConfig(**{
        "hidden_units": 4, "train_steps": 10, "validate_every": 10,
        "batch_size": 2, "rng_seed": 11, **overrides})
    src_vocab = Vocab.build((p.source for p in corpus.pairs), config.src_vocab_cap)
    tgt_vocab = Vocab.build((p.target for p in corpus.pairs), config.tgt_vocab_cap)
    return Seq2Seq(config, src_vocab, tgt_vocab), config


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            Seq2SeqConfig(train_steps=10, validate_every=100)
        with pytest.raises(ConfigError):
            Seq2SeqConfig(hidden_units=0)
        with pytest.raises(ConfigError):
            Seq2SeqConfig(src_vocab_cap=3)
        with pytest.raises(ConfigError):
            Seq2SeqConfig(decode_mode="sampled")

    def test_reference_defaults(self):
        config = Seq2SeqConfig()
        assert config.encoder_layers == config.decoder_layers == 2
        assert config.hidden_units == 500
        assert config.train_steps == 100_000
        assert config.validate_every == 1_000
        assert config.checkpoint_every == 10_000


class TestParameterCount:
    @pytest.mark.parametrize("hidden,layers", [(4, 1), (8, 2), (16, 3)])
    def test_closed_form_matches_torch(self, hidden, layers):
        corpus = tiny_corpus()
        model, config = build_model(corpus, hidden_units=hidden,
                                    encoder_layers=layers, decoder_layers=layers)
        expected = parameter_count(config, len(model.src_vocab), len(model.tgt_vocab))
        assert model.parameter_total() == expected

    def test_asymmetric_layers(self):
        corpus = tiny_corpus()
        model, config = build_model(corpus, encoder_layers=1, decoder_layers=3)
        assert model.parameter_total() == parameter_count(
            config, len(model.src_vocab), len(model.tgt_vocab))


class TestGradients:
    def test_finite_difference_check(self):
        """Analytic gradients vs central differences on 20 sampled weights."""
        corpus = tiny_corpus()
        model, config = build_model(corpus, dtype="float64")
        batch = make_batch(corpus.pairs, model.src_vocab, model.tgt_vocab, config)

        loss = model.loss(*batch)
        loss.backward()
        params = [p for p in model.parameters() if p.grad is not None]

        rng = np.random.default_rng(101)
        h = 1e-4
        checked = 0
        failures = []
        while checked < 20:
            tensor = params[int(rng.integers(0, len(params)))]
            flat_index = int(rng.integers(0, tensor.numel()))
            analytic = float(tensor.grad.reshape(-1)[flat_index])
            if abs(analytic) < 1e-8:
                continue  # avoid division blowup on dead weights
            with torch.no_grad():
                original = float(tensor.reshape(-1)[flat_index])
                tensor.reshape(-1)[flat_index] = original + h
                plus = float(model.loss(*batch))
                tensor.reshape(-1)[flat_index] = original - h
                minus = float(model.loss(*batch))
                tensor.reshape(-1)[flat_index] = original
            numeric = (plus - minus) / (2 * h)
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric))
            if rel >= 1e-3:
                failures.append((flat_index, analytic, numeric, rel))
            checked += 1
        assert not failures, failures

    def test_batch_reorder_invariance(self):
        corpus = tiny_corpus()
        model, config = build_model(corpus, dtype="float64")
        fwd = make_batch(corpus.pairs, model.src_vocab, model.tgt_vocab, config)
        rev = make_batch(list(reversed(corpus.pairs)), model.src_vocab,
                         model.tgt_vocab, config)
        with torch.no_grad():
            assert float(model.loss(*fwd)) == pytest.approx(
                float(model.loss(*rev)), rel=1e-12)


class TestTraining:
    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            train_translator(ParallelCorpus([]), Seq2SeqConfig(
                hidden_units=4, train_steps=10, validate_every=10))

    def test_single_pair_memorization_loss_drops(self):
        corpus = ParallelCorpus([Pair("0", ("a", "b", "c"), ("x", "y", "z"))])
        config = Seq2SeqConfig(hidden_units=16, train_steps=100, validate_every=50,
                               batch_size=1, rng_seed=3)
        _, report = train_translator(corpus, config)
        first = report.train_losses[0][1]
        last = report.train_losses[-1][1]
        assert last < first

    def test_diverged_loss_reports_step(self):
        corpus = tiny_corpus()
        config = Seq2SeqConfig(hidden_units=8, train_steps=10, validate_every=10,
                               batch_size=2, learning_rate=1e38, rng_seed=0)
        with pytest.raises(DivergedLoss) as exc:
            train_translator(corpus, config)
        assert exc.value.step >= 1

    def test_deterministic_training(self):
        corpus = tiny_corpus()
        config = dict(hidden_units=8, train_steps=20, validate_every=10,
                      batch_size=2, rng_seed=9)
        m1, _ = train_translator(corpus, Seq2SeqConfig(**config))
        m2, _ = train_translator(corpus, Seq2SeqConfig(**config))
        for p1, p2 in zip(m1.parameters(), m2.parameters()):
            assert torch.equal(p1, p2)

    def test_best_validation_checkpoint_returned(self):
        corpus = ParallelCorpus([Pair(str(i), ("w", f"s{i}"), (f"t{i}",))
                                 for i in range(8)])
        config = Seq2SeqConfig(hidden_units=8, train_steps=60, validate_every=20,
                               batch_size=4, rng_seed=2)
        model, report = train_translator(corpus, config)
        assert report.best_step in [s for s, _ in report.valid_losses]
        assert report.best_valid_loss == min(v for _, v in report.valid_losses)


@pytest.fixture(scope="module")
def untrained():
    model, _ = build_model(tiny_corpus(), hidden_units=8, max_target_len=12)
    model.eval()
    return model


class TestDecoding:
    def test_untrained_decode_terminates_without_control_tokens(self, untrained):
        result = translate(untrained, ["find", "the", "sum"])
        assert len(result.tokens) <= untrained.config.max_target_len
        assert not set(result.tokens) & set(SPECIALS)
        assert all(t in untrained.tgt_vocab.tokens for t in result.tokens)

    def test_unk_only_query_terminates(self, untrained):
        result = translate(untrained, ["zzz", "qqq", "www"])
        assert len(result.tokens) <= untrained.config.max_target_len

    def test_empty_query_rejected(self, untrained):
        with pytest.raises(EmptySequence):
            translate(untrained, [])

    def test_decode_is_deterministic(self, untrained):
        a = translate(untrained, ["count", "items"])
        b = translate(untrained, ["count", "items"])
        assert a.tokens == b.tokens and a.truncated == b.truncated

    def test_truncation_flag(self, untrained):
        result = translate(untrained, ["find", "items"])
        assert isinstance(result.truncated, bool)
        if len(result.tokens) < untrained.config.max_target_len:
            assert not result.truncated

    def test_beam_terminates_and_is_deterministic(self, untrained):
        a = translate(untrained, ["find", "the", "sum"], mode="beam", beam_width=3)
        b = translate(untrained, ["find", "the", "sum"], mode="beam", beam_width=3)
        assert a.tokens == b.tokens
        assert len(a.tokens) <= untrained.config.max_target_len


class TestAttention:
    def test_rows_sum_to_one(self):
        model, _ = build_model(tiny_corpus(), hidden_units=8)
        weights = attention_weights(model, ["find", "the", "sum"])
        if weights.shape[0]:
            assert np.allclose(weights.sum(axis=1), 1.0, atol=1e-6)

    def test_single_source_token_gets_full_attention(self):
        model, _ = build_model(tiny_corpus(), hidden_units=8)
        weights = attention_weights(model, ["find"])
        assert weights.shape[1] == 1
        if weights.shape[0]:
            assert np.allclose(weights, 1.0, atol=1e-6)


class TestCheckpoint:
    def test_roundtrip_preserves_decoding(self, tmp_path):
        corpus = tiny_corpus()
        config = Seq2SeqConfig(hidden_units=8, train_steps=30, validate_every=10,
                               batch_size=2, rng_seed=4)
        model, _ = train_translator(corpus, config)
        path = tmp_path / "model.ckpt"
        save_checkpoint(path, model)
        loaded = load_checkpoint(path)
        for query in (["find", "the", "sum"], ["count", "items"]):
            assert translate(model, query).tokens == translate(loaded, query).tokens

    def test_corrupt_checkpoint_rejected(self, tmp_path):
        from astsearch.errors import FormatVersionMismatch
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"not a checkpoint")
        with pytest.raises(FormatVersionMismatch):
            load_checkpoint(path)
