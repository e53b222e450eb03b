"""Sequence-to-sequence translation from queries to tree summaries."""

from astsearch.translator.data import (
    BOS, EOS, PAD, UNK, Pair, ParallelCorpus, Vocab,
    load_parallel_corpus, save_parallel_corpus,
)
from astsearch.translator.model import (
    Seq2Seq, Seq2SeqConfig, desk_profile, parameter_count,
)
from astsearch.translator.train import TrainReport, make_batch, train_translator
from astsearch.translator.decode import Translation, attention_weights, translate
from astsearch.translator.checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "BOS", "EOS", "PAD", "UNK", "Pair", "ParallelCorpus", "Vocab",
    "load_parallel_corpus", "save_parallel_corpus",
    "Seq2Seq", "Seq2SeqConfig", "desk_profile", "parameter_count",
    "TrainReport", "make_batch", "train_translator",
    "Translation", "attention_weights", "translate",
    "load_checkpoint", "save_checkpoint",
]
