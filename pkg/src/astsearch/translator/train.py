"""Training loop: teacher-forced cross entropy, SGD with gradient clipping
and stepped learning-rate decay, periodic validation and checkpoints."""

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path

import torch

from astsearch.errors import DivergedLoss, EmptyCorpus
from astsearch.translator.data import BOS, EOS, PAD, ParallelCorpus, Vocab
from astsearch.translator.model import Seq2Seq, Seq2SeqConfig
from astsearch.translator.checkpoint import save_checkpoint


@dataclass
class TrainReport:
    steps_run: int
    train_losses: list[tuple[int, float]] = field(default_factory=list)
    valid_losses: list[tuple[int, float]] = field(default_factory=list)
    best_step: int = 0
    best_valid_loss: float = math.inf


def make_batch(pairs, src_vocab: Vocab, tgt_vocab: Vocab, config: Seq2SeqConfig):
    """Pad and tensorize a list of pairs: (src, src_lens, tgt_in, tgt_out)."""
    srcs = [src_vocab.encode(p.source[:config.max_source_len]) for p in pairs]
    tgts = [tgt_vocab.encode(p.target[:config.max_target_len]) for p in pairs]
    max_s = max(len(s) for s in srcs)
    max_t = max(len(t) for t in tgts) + 1  # room for BOS/EOS shift
    batch = len(pairs)
    src = torch.full((max_s, batch), PAD, dtype=torch.long)
    tgt_in = torch.full((max_t, batch), PAD, dtype=torch.long)
    tgt_out = torch.full((max_t, batch), PAD, dtype=torch.long)
    src_lens = torch.zeros(batch, dtype=torch.long)
    for j, (s, t) in enumerate(zip(srcs, tgts)):
        src[:len(s), j] = torch.tensor(s, dtype=torch.long)
        src_lens[j] = len(s)
        tgt_in[:len(t) + 1, j] = torch.tensor([BOS] + t, dtype=torch.long)
        tgt_out[:len(t) + 1, j] = torch.tensor(t + [EOS], dtype=torch.long)
    return src, src_lens, tgt_in, tgt_out


def _lr_at(step: int, config: Seq2SeqConfig) -> float:
    if step < config.start_decay_steps:
        return config.learning_rate
    decays = 1 + (step - config.start_decay_steps) // config.decay_steps
    return config.learning_rate * (config.lr_decay ** decays)


def _mean_token_loss(model: Seq2Seq, corpus: ParallelCorpus,
                     config: Seq2SeqConfig) -> float:
    total, tokens = 0.0, 0
    with torch.no_grad():
        for start in range(0, len(corpus.pairs), config.batch_size):
            chunk = corpus.pairs[start:start + config.batch_size]
            src, src_lens, tgt_in, tgt_out = make_batch(
                chunk, model.src_vocab, model.tgt_vocab, config)
            total += float(model.loss(src, src_lens, tgt_in, tgt_out))
            tokens += int((tgt_out != PAD).sum())
    return total / max(tokens, 1)


def train_translator(corpus: ParallelCorpus, config: Seq2SeqConfig,
                     valid_corpus: ParallelCorpus | None = None,
                     checkpoint_dir: str | Path | None = None
                     ) -> tuple[Seq2Seq, TrainReport]:
    """Train on the given split and return the best-validation model.

    Validation uses `valid_corpus` when given, otherwise the training split.
    Deterministic under a fixed config.rng_seed in deterministic mode.
    """
    if not corpus.pairs:
        raise EmptyCorpus("training corpus is empty")
    if config.deterministic:
        torch.set_num_threads(1)
    torch.manual_seed(config.rng_seed)

    src_vocab = Vocab.build((p.source for p in corpus.pairs), config.src_vocab_cap)
    tgt_vocab = Vocab.build((p.target for p in corpus.pairs), config.tgt_vocab_cap)
    model = Seq2Seq(config, src_vocab, tgt_vocab)
    held_out = valid_corpus if valid_corpus is not None and valid_corpus.pairs else corpus

    optimizer = torch.optim.SGD(model.parameters(), lr=config.learning_rate)
    generator = torch.Generator().manual_seed(config.rng_seed)
    report = TrainReport(steps_run=0)
    best_state = copy.deepcopy(model.state_dict())
    order: list[int] = []

    for step in range(1, config.train_steps + 1):
        if len(order) < config.batch_size:
            order.extend(torch.randperm(len(corpus.pairs), generator=generator).tolist())
        picks, order = order[:config.batch_size], order[config.batch_size:]
        batch_pairs = [corpus.pairs[i] for i in picks]
        src, src_lens, tgt_in, tgt_out = make_batch(batch_pairs, src_vocab, tgt_vocab, config)

        lr = _lr_at(step, config)
        for group in optimizer.param_groups:
            group["lr"] = lr
        optimizer.zero_grad()
        loss = model.loss(src, src_lens, tgt_in, tgt_out)
        if not torch.isfinite(loss):
            raise DivergedLoss(step)
        loss.backward()
        torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
        optimizer.step()
        for p in model.parameters():
            if not torch.all(torch.isfinite(p)):
                raise DivergedLoss(step)

        token_count = int((tgt_out != PAD).sum())
        report.train_losses.append((step, float(loss.detach()) / max(token_count, 1)))

        if step % config.validate_every == 0 or step == config.train_steps:
            valid_loss = _mean_token_loss(model, held_out, config)
            report.valid_losses.append((step, valid_loss))
            if valid_loss < report.best_valid_loss:
                report.best_valid_loss = valid_loss
                report.best_step = step
                best_state = copy.deepcopy(model.state_dict())
        if checkpoint_dir is not None and step % config.checkpoint_every == 0:
            save_checkpoint(Path(checkpoint_dir) / f"step_{step}.ckpt", model)
        report.steps_run = step

    model.load_state_dict(best_state)
    if checkpoint_dir is not None:
        save_checkpoint(Path(checkpoint_dir) / "best.ckpt", model)
    return model, report
