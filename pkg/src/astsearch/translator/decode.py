"""Greedy and beam decoding, with per-step attention distributions."""

from dataclasses import dataclass

import numpy as np
import torch

from astsearch.errors import EmptySequence
from astsearch.translator.data import BOS, EOS, PAD
from astsearch.translator.model import Seq2Seq


@dataclass
class Translation:
    tokens: list[str]
    truncated: bool
    attention: np.ndarray  # decode steps x source length


def _encode_query(model: Seq2Seq, query_tokens) -> tuple[torch.Tensor, torch.Tensor, tuple]:
    tokens = list(query_tokens)[:model.config.max_source_len]
    if not tokens:
        raise EmptySequence("query is empty after tokenization")
    ids = model.src_vocab.encode(tokens)
    src = torch.tensor(ids, dtype=torch.long).unsqueeze(1)  # (S,1)
    src_lens = torch.tensor([len(ids)], dtype=torch.long)
    enc_out, state = model.encode(src, src_lens)
    return src, enc_out, state


def _step(model: Seq2Seq, token_id: int, state, enc_out, src_pad_mask):
    emb = model.tgt_emb(torch.tensor([[token_id]], dtype=torch.long))
    dec_out, state = model.decoder(emb, state)
    combined, weights = model.attend(dec_out, enc_out, src_pad_mask)
    logits = model.generator(combined)[0, 0]
    return logits, state, weights[0, 0]


def translate(model: Seq2Seq, query_tokens, mode: str | None = None,
              beam_width: int | None = None) -> Translation:
    """Decode until EOS or max_target_len; control tokens never appear in
    the output. Deterministic given (model, query, mode)."""
    mode = mode or model.config.decode_mode
    with torch.no_grad():
        if mode == "beam":
            return _beam(model, query_tokens, beam_width or model.config.beam_width)
        return _greedy(model, query_tokens)


def _greedy(model: Seq2Seq, query_tokens) -> Translation:
    src, enc_out, state = _encode_query(model, query_tokens)
    src_pad_mask = src == PAD
    out_ids: list[int] = []
    attn_rows: list[np.ndarray] = []
    token = BOS
    truncated = True
    for _ in range(model.config.max_target_len):
        logits, state, attn = _step(model, token, state, enc_out, src_pad_mask)
        logits[PAD] = float("-inf")
        logits[BOS] = float("-inf")
        token = int(torch.argmax(logits))
        if token == EOS:
            truncated = False
            break
        out_ids.append(token)
        attn_rows.append(attn.numpy().copy())
    attention = np.vstack(attn_rows) if attn_rows else np.zeros((0, src.shape[0]))
    return Translation(model.tgt_vocab.decode(out_ids), truncated, attention)


def _beam(model: Seq2Seq, query_tokens, width: int) -> Translation:
    src, enc_out, state = _encode_query(model, query_tokens)
    src_pad_mask = src == PAD
    # beams: (ids, logprob, state, attn rows, ended)
    beams = [([], 0.0, state, [], False)]
    for _ in range(model.config.max_target_len):
        if all(b[4] for b in beams):
            break
        grown = []
        for ids, score, st, rows, ended in beams:
            if ended:
                grown.append((ids, score, st, rows, True))
                continue
            prev = ids[-1] if ids else BOS
            logits, new_state, attn = _step(model, prev, st, enc_out, src_pad_mask)
            logits[PAD] = float("-inf")
            logits[BOS] = float("-inf")
            logprobs = torch.log_softmax(logits, dim=0)
            top = torch.topk(logprobs, min(width, logprobs.shape[0]))
            for logp, tok in zip(top.values.tolist(), top.indices.tolist()):
                if tok == EOS:
                    grown.append((ids, score + logp, new_state, rows, True))
                else:
                    grown.append((ids + [tok], score + logp, new_state,
                                  rows + [attn.numpy().copy()], False))
        grown.sort(key=lambda b: -b[1])
        beams = grown[:width]
    best = max(beams, key=lambda b: b[1])
    ids, _, _, rows, ended = best
    attention = np.vstack(rows) if rows else np.zeros((0, src.shape[0]))
    return Translation(model.tgt_vocab.decode(ids), not ended, attention)


def attention_weights(model: Seq2Seq, query_tokens) -> np.ndarray:
    """Greedy-decode attention matrix: one distribution over source
    positions per emitted step (each row sums to 1)."""
    return translate(model, query_tokens, mode="greedy").attention
