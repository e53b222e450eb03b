"""Self-describing checkpoint files: config + vocabularies + parameters."""

from dataclasses import asdict
from pathlib import Path

import torch

from astsearch.errors import FormatVersionMismatch
from astsearch.translator.data import Vocab
from astsearch.translator.model import Seq2Seq, Seq2SeqConfig

CHECKPOINT_VERSION = 1


def save_checkpoint(path: str | Path, model: Seq2Seq) -> None:
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "config": asdict(model.config),
        "src_vocab": model.src_vocab.tokens,
        "tgt_vocab": model.tgt_vocab.tokens,
        "state": model.state_dict(),
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    torch.save(payload, path)


def load_checkpoint(path: str | Path) -> Seq2Seq:
    try:
        payload = torch.load(path, weights_only=False)
    except Exception as e:  # torch raises various unpickling errors
        raise FormatVersionMismatch(f"unreadable checkpoint {path}: {e}") from e
    version = payload.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise FormatVersionMismatch(f"checkpoint version {version}, expected {CHECKPOINT_VERSION}")
    config = Seq2SeqConfig(**payload["config"])
    model = Seq2Seq(config, Vocab(payload["src_vocab"]), Vocab(payload["tgt_vocab"]))
    model.load_state_dict(payload["state"])
    model.eval()
    return model
