"""Unsupervised skip-gram token embeddings with negative sampling.

Trains input/output vector matrices over token sequences; optional hashed
character n-gram buckets give out-of-vocabulary tokens a subword vector.
Sequence vectors are means of L2-normalized token vectors. Training is
seeded and sequential by default so results are reproducible.
"""

import json
import zipfile
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from astsearch.errors import (
    DegenerateVocab, EmptyCorpus, EmptySequence, FormatVersionMismatch,
)
from astsearch.search import EmbeddingVector

FORMAT_VERSION = 1
_NEG_EXPONENT = 0.75
_MIN_LR_FRACTION = 1e-4


@dataclass(frozen=True)
class EmbedConfig:
    dim: int = 100
    window: int = 5
    negative_samples: int = 5
    epochs: int = 5
    learning_rate: float = 0.05
    min_token_count: int = 1
    subwords_enabled: bool = True
    subword_min_n: int = 3
    subword_max_n: int = 6
    subword_buckets: int = 20000
    rng_seed: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.window < 1:
            raise ValueError("dim and window must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")


@dataclass
class EmbedderModel:
    vocab: dict[str, int]
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    bucket_vectors: np.ndarray | None
    config: EmbedConfig
    epoch_losses: list[float] = field(default_factory=list)
    oov_tokens_seen: int = 0

    def token_vector(self, token: str) -> np.ndarray:
        """Raw (unnormalized) vector for one token; zero when unknown and
        subwords are disabled."""
        index = self.vocab.get(token)
        if index is not None:
            return _compose(self.input_vectors[index], token, self.bucket_vectors, self.config)
        self.oov_tokens_seen += 1
        if self.bucket_vectors is None:
            return np.zeros(self.config.dim)
        hashes = _subword_hashes(token, self.config)
        return self.bucket_vectors[hashes].sum(axis=0)


def _fnv1a(data: bytes) -> int:
    h = 2166136261
    for byte in data:
        h ^= byte
        h = (h * 16777619) & 0xFFFFFFFF
    return h


def _subword_hashes(token: str, config: EmbedConfig) -> list[int]:
    padded = f"<{token}>"
    hashes = []
    for n in range(config.subword_min_n, config.subword_max_n + 1):
        for i in range(len(padded) - n + 1):
            hashes.append(_fnv1a(padded[i:i + n].encode("utf-8")) % config.subword_buckets)
    return hashes


def _compose(word_vec: np.ndarray, token: str, buckets: np.ndarray | None,
             config: EmbedConfig) -> np.ndarray:
    if buckets is None:
        return word_vec
    hashes = _subword_hashes(token, config)
    return (word_vec + buckets[hashes].sum(axis=0)) / (1 + len(hashes))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


def train_embedder(corpus: list[list[str]], config: EmbedConfig = EmbedConfig()) -> EmbedderModel:
    """Skip-gram with negative sampling over token sequences.

    Deterministic for a fixed rng_seed (single-threaded numpy updates).
    """
    if not corpus:
        raise EmptyCorpus("corpus has no sequences")
    for seq in corpus:
        if not seq:
            raise EmptyCorpus("corpus contains an empty sequence")

    counts: dict[str, int] = {}
    for seq in corpus:
        for token in seq:
            counts[token] = counts.get(token, 0) + 1
    kept = sorted((t for t, c in counts.items() if c >= config.min_token_count),
                  key=lambda t: (-counts[t], t))
    if len(kept) < 2:
        raise DegenerateVocab(f"only {len(kept)} distinct tokens meet "
                              f"min_token_count={config.min_token_count}")
    vocab = {t: i for i, t in enumerate(kept)}

    rng = np.random.default_rng(config.rng_seed)
    vsize, dim = len(vocab), config.dim
    input_vectors = (rng.random((vsize, dim)) - 0.5) / dim
    output_vectors = np.zeros((vsize, dim))
    buckets = None
    if config.subwords_enabled:
        buckets = (rng.random((config.subword_buckets, dim)) - 0.5) / dim

    freq = np.array([counts[t] for t in kept], dtype=np.float64) ** _NEG_EXPONENT
    neg_probs = freq / freq.sum()
    # precomputed subword hash lists per vocab token
    hash_lists = [_subword_hashes(t, config) for t in kept] if buckets is not None else None

    indexed = [[vocab[t] for t in seq if t in vocab] for seq in corpus]
    indexed = [seq for seq in indexed if seq]
    total_positions = sum(len(s) for s in indexed) * config.epochs
    processed = 0
    lr0 = config.learning_rate
    losses = []

    for _epoch in range(config.epochs):
        epoch_loss = 0.0
        pair_count = 0
        for seq in indexed:
            for center_pos, center in enumerate(seq):
                lr = max(lr0 * (1 - processed / max(total_positions, 1)),
                         lr0 * _MIN_LR_FRACTION)
                processed += 1
                span = int(rng.integers(1, config.window + 1))
                lo = max(0, center_pos - span)
                hi = min(len(seq), center_pos + span + 1)
                contexts = [seq[i] for i in range(lo, hi) if i != center_pos]
                if not contexts:
                    continue
                if hash_lists is not None:
                    hashes = hash_lists[center]
                    h = (input_vectors[center] + buckets[hashes].sum(axis=0)) / (1 + len(hashes))
                else:
                    hashes = None
                    h = input_vectors[center]
                for context in contexts:
                    negatives = rng.choice(vsize, size=config.negative_samples, p=neg_probs)
                    targets = np.concatenate(([context], negatives))
                    labels = np.zeros(len(targets))
                    labels[0] = 1.0
                    out = output_vectors[targets]
                    scores = out @ h
                    probs = _sigmoid(scores)
                    epoch_loss += float(-np.log(np.clip(probs[0], 1e-10, None))
                                        - np.log(np.clip(1 - probs[1:], 1e-10, None)).sum())
                    pair_count += 1
                    g = (probs - labels) * lr
                    grad_h = g @ out
                    output_vectors[targets] -= np.outer(g, h)
                    if hashes is not None:
                        share = grad_h / (1 + len(hashes))
                        input_vectors[center] -= share
                        np.subtract.at(buckets, hashes, share)
                    else:
                        input_vectors[center] -= grad_h
        losses.append(epoch_loss / max(pair_count, 1))

    model = EmbedderModel(vocab, input_vectors, output_vectors, buckets, config, losses)
    if not np.all(np.isfinite(input_vectors)) or not np.all(np.isfinite(output_vectors)):
        raise DegenerateVocab("training produced non-finite vectors")
    return model


def embed_tokens(model: EmbedderModel, tokens: list[str]) -> EmbeddingVector:
    """Mean of L2-normalized per-token vectors (bag of tokens: order-free)."""
    if not tokens:
        raise EmptySequence("cannot embed an empty token sequence")
    acc = np.zeros(model.config.dim)
    for token in tokens:
        vec = model.token_vector(token)
        norm = np.linalg.norm(vec)
        if norm > 0:
            acc += vec / norm
    return EmbeddingVector(acc / len(tokens))


def save_model(model: EmbedderModel, path: str | Path) -> None:
    """Text vector table at `path` plus a binary sidecar `path + '.npz'`.

    The text file is the interchange format (header "count dim", one token
    per line); the sidecar carries output/bucket matrices bit-exactly.
    """
    path = Path(path)
    tokens = sorted(model.vocab, key=model.vocab.get)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(tokens)} {model.config.dim}\n")
        for token in tokens:
            row = model.input_vectors[model.vocab[token]]
            f.write(token + " " + " ".join(repr(float(v)) for v in row) + "\n")
    arrays = {
        "format_version": np.array([FORMAT_VERSION]),
        "config_json": np.frombuffer(json.dumps(asdict(model.config)).encode("utf-8"),
                                     dtype=np.uint8),
        "input_vectors": model.input_vectors,
        "output_vectors": model.output_vectors,
        "epoch_losses": np.array(model.epoch_losses),
    }
    if model.bucket_vectors is not None:
        arrays["bucket_vectors"] = model.bucket_vectors
    np.savez(_sidecar(path), **arrays)


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".npz")


def load_model(path: str | Path) -> EmbedderModel:
    """Inverse of save_model; round-trip is bit-exact on vocab and vectors."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            header = f.readline().split()
            if len(header) != 2:
                raise FormatVersionMismatch(f"malformed header in {path}")
            count, dim = int(header[0]), int(header[1])
            tokens = []
            for line in f:
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise FormatVersionMismatch(
                        f"token row with {len(parts) - 1} values, expected {dim}")
                tokens.append(parts[0])
        if len(tokens) != count:
            raise FormatVersionMismatch(f"expected {count} tokens, found {len(tokens)}")
        data = np.load(_sidecar(path))
    except (OSError, ValueError, zipfile.BadZipFile, EOFError) as e:
        if isinstance(e, OSError):
            raise
        raise FormatVersionMismatch(f"unreadable model file: {e}") from e
    if int(data["format_version"][0]) != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"format version {int(data['format_version'][0])}, expected {FORMAT_VERSION}")
    config = EmbedConfig(**json.loads(bytes(data["config_json"]).decode("utf-8")))
    input_vectors = data["input_vectors"]
    if input_vectors.shape != (count, dim):
        raise FormatVersionMismatch("vector table does not match text header")
    buckets = data["bucket_vectors"] if "bucket_vectors" in data.files else None
    return EmbedderModel(
        vocab={t: i for i, t in enumerate(tokens)},
        input_vectors=input_vectors,
        output_vectors=data["output_vectors"],
        bucket_vectors=buckets,
        config=config,
        epoch_losses=list(data["epoch_losses"]),
    )
