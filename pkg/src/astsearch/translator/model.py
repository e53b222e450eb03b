"""Encoder-decoder LSTM with global multiplicative attention."""

from dataclasses import dataclass, field

import torch
from torch import nn

from astsearch.errors import ConfigError, ShapeMismatch
from astsearch.translator.data import PAD, Vocab


@dataclass
class Seq2SeqConfig:
    encoder_layers: int = 2
    decoder_layers: int = 2
    hidden_units: int = 500
    train_steps: int = 100_000
    validate_every: int = 1_000
    checkpoint_every: int = 10_000
    max_source_len: int = 100
    max_target_len: int = 100
    src_vocab_cap: int = 50_000
    tgt_vocab_cap: int = 50_000
    batch_size: int = 64
    learning_rate: float = 1.0
    lr_decay: float = 0.5
    start_decay_steps: int | None = None  # default: train_steps // 2
    decay_steps: int | None = None        # default: train_steps // 10
    grad_clip: float = 5.0
    rng_seed: int = 1234
    decode_mode: str = "greedy"  # or "beam"
    beam_width: int = 5
    deterministic: bool = True
    dtype: str = "float32"

    def __post_init__(self):
        if self.encoder_layers < 1 or self.decoder_layers < 1 or self.hidden_units < 1:
            raise ConfigError("layer counts and hidden_units must be >= 1")
        if self.train_steps < self.validate_every:
            raise ConfigError("train_steps must be >= validate_every")
        if min(self.src_vocab_cap, self.tgt_vocab_cap) < 4:
            raise ConfigError("vocab caps must be >= 4 (pad/bos/eos/unk are reserved)")
        if self.decode_mode not in ("greedy", "beam"):
            raise ConfigError(f"unknown decode mode {self.decode_mode!r}")
        if self.start_decay_steps is None:
            self.start_decay_steps = max(1, self.train_steps // 2)
        if self.decay_steps is None:
            self.decay_steps = max(1, self.train_steps // 10)

    def torch_dtype(self) -> torch.dtype:
        return {"float32": torch.float32, "float64": torch.float64}[self.dtype]


def desk_profile(**overrides) -> Seq2SeqConfig:
    """Reduced profile: verifies mechanisms on CPU in minutes, not hours."""
    base = dict(hidden_units=64, train_steps=5_000, validate_every=250,
                checkpoint_every=2_500, batch_size=32)
    base.update(overrides)
    # keep the schedule valid when only train_steps is dialed down
    if "validate_every" not in overrides:
        base["validate_every"] = min(base["validate_every"], base["train_steps"])
    if "checkpoint_every" not in overrides:
        base["checkpoint_every"] = min(base["checkpoint_every"], base["train_steps"])
    return Seq2SeqConfig(**base)


def parameter_count(config: Seq2SeqConfig, src_vocab_size: int, tgt_vocab_size: int) -> int:
    """Closed-form size of the network: embeddings, gated recurrences
    (4 gates, two bias vectors per layer), attention, and output projection."""
    h = config.hidden_units
    lstm_layer = 8 * h * h + 8 * h
    return (src_vocab_size * h + tgt_vocab_size * h
            + (config.encoder_layers + config.decoder_layers) * lstm_layer
            + h * h          # attention bilinear map
            + 2 * h * h      # attentional projection [context; state] -> state
            + h * tgt_vocab_size + tgt_vocab_size)  # generator


class Seq2Seq(nn.Module):
    """LSTM encoder-decoder; decoder states attend over encoder outputs with
    a bilinear score, and the attentional state feeds the token projection."""

    def __init__(self, config: Seq2SeqConfig, src_vocab: Vocab, tgt_vocab: Vocab):
        super().__init__()
        self.config = config
        self.src_vocab = src_vocab
        self.tgt_vocab = tgt_vocab
        h = config.hidden_units
        dtype = config.torch_dtype()
        torch.manual_seed(config.rng_seed)
        self.src_emb = nn.Embedding(len(src_vocab), h, padding_idx=PAD, dtype=dtype)
        self.tgt_emb = nn.Embedding(len(tgt_vocab), h, padding_idx=PAD, dtype=dtype)
        self.encoder = nn.LSTM(h, h, num_layers=config.encoder_layers, dtype=dtype)
        self.decoder = nn.LSTM(h, h, num_layers=config.decoder_layers, dtype=dtype)
        self.attn_score = nn.Linear(h, h, bias=False, dtype=dtype)
        self.attn_combine = nn.Linear(2 * h, h, bias=False, dtype=dtype)
        self.generator = nn.Linear(h, len(tgt_vocab), dtype=dtype)
        actual = sum(p.numel() for p in self.parameters())
        expected = parameter_count(config, len(src_vocab), len(tgt_vocab))
        if actual != expected:
            raise ShapeMismatch(f"parameter count {actual} != closed form {expected}")

    def parameter_total(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def encode(self, src: torch.Tensor, src_lens: torch.Tensor):
        """src: (S, B) int64. Returns (outputs (S,B,H), final state)."""
        emb = self.src_emb(src)
        packed = nn.utils.rnn.pack_padded_sequence(
            emb, src_lens.cpu(), enforce_sorted=False)
        outputs, state = self.encoder(packed)
        outputs, _ = nn.utils.rnn.pad_packed_sequence(outputs, total_length=src.shape[0])
        return outputs, self._bridge(state)

    def _bridge(self, state):
        """Carry encoder layers into the decoder; zero-fill any extra layers."""
        h, c = state
        ld = self.config.decoder_layers
        if h.shape[0] == ld:
            return h, c
        if h.shape[0] > ld:
            return h[:ld].contiguous(), c[:ld].contiguous()
        pad_shape = (ld - h.shape[0], h.shape[1], h.shape[2])
        zeros = torch.zeros(pad_shape, dtype=h.dtype)
        return torch.cat([h, zeros]), torch.cat([c, zeros])

    def attend(self, dec_out: torch.Tensor, enc_out: torch.Tensor,
               src_pad_mask: torch.Tensor):
        """dec_out: (T,B,H), enc_out: (S,B,H), src_pad_mask: (S,B) bool.

        Returns the attentional states (T,B,H) and attention distributions
        (T,B,S); every distribution row sums to 1 over real source positions.
        """
        scores = torch.einsum("tbh,sbh->tbs", dec_out, self.attn_score(enc_out))
        mask = src_pad_mask.transpose(0, 1).unsqueeze(0)  # (1,B,S)
        scores = scores.masked_fill(mask, float("-inf"))
        weights = torch.softmax(scores, dim=2)
        context = torch.einsum("tbs,sbh->tbh", weights, enc_out)
        combined = torch.tanh(self.attn_combine(torch.cat([context, dec_out], dim=2)))
        return combined, weights

    def forward(self, src: torch.Tensor, src_lens: torch.Tensor,
                tgt_in: torch.Tensor):
        """Teacher-forced pass. Returns logits (T, B, V)."""
        enc_out, state = self.encode(src, src_lens)
        dec_emb = self.tgt_emb(tgt_in)
        dec_out, _ = self.decoder(dec_emb, state)
        src_pad_mask = src == PAD
        combined, _ = self.attend(dec_out, enc_out, src_pad_mask)
        return self.generator(combined)

    def loss(self, src: torch.Tensor, src_lens: torch.Tensor,
             tgt_in: torch.Tensor, tgt_out: torch.Tensor) -> torch.Tensor:
        """Sum-reduced cross entropy over non-pad target positions."""
        logits = self.forward(src, src_lens, tgt_in)
        return nn.functional.cross_entropy(
            logits.reshape(-1, logits.shape[-1]), tgt_out.reshape(-1),
            ignore_index=PAD, reduction="sum")
