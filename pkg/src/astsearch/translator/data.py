"""Parallel corpora and vocabularies for the sequence translator."""

from dataclasses import dataclass, field
from pathlib import Path

from astsearch.errors import EmptyCorpus

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ["<pad>", "<bos>", "<eos>", "<unk>"]


@dataclass(frozen=True)
class Pair:
    pair_id: str
    source: tuple[str, ...]
    target: tuple[str, ...]


@dataclass
class ParallelCorpus:
    """Aligned (source tokens, target tokens) pairs for one split."""
    pairs: list[Pair]
    split: str = "train"

    def __post_init__(self):
        for p in self.pairs:
            if not p.source or not p.target:
                raise EmptyCorpus(f"pair {p.pair_id!r} has an empty side")

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class Vocab:
    tokens: list[str] = field(default_factory=lambda: list(SPECIALS))
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, seq) -> list[int]:
        return [self.index.get(t, UNK) for t in seq]

    def decode(self, ids) -> list[str]:
        return [self.tokens[i] for i in ids if i not in (PAD, BOS, EOS)]

    @classmethod
    def build(cls, sequences, cap: int) -> "Vocab":
        """Most frequent tokens up to cap (including the 4 reserved slots)."""
        if cap < len(SPECIALS):
            raise ValueError(f"vocab cap must be >= {len(SPECIALS)}")
        counts: dict[str, int] = {}
        for seq in sequences:
            for token in seq:
                counts[token] = counts.get(token, 0) + 1
        kept = sorted(counts, key=lambda t: (-counts[t], t))[:cap - len(SPECIALS)]
        return cls(tokens=list(SPECIALS) + kept)


def load_parallel_corpus(src_path: str | Path, tgt_path: str | Path,
                         split: str = "train") -> ParallelCorpus:
    """Two aligned line-per-example token files."""
    with open(src_path, encoding="utf-8") as f:
        src_lines = [line.rstrip("\n") for line in f]
    with open(tgt_path, encoding="utf-8") as f:
        tgt_lines = [line.rstrip("\n") for line in f]
    if len(src_lines) != len(tgt_lines):
        raise EmptyCorpus(
            f"{src_path} has {len(src_lines)} lines but {tgt_path} has {len(tgt_lines)}")
    pairs = [Pair(str(i), tuple(s.split()), tuple(t.split()))
             for i, (s, t) in enumerate(zip(src_lines, tgt_lines))]
    return ParallelCorpus(pairs, split)


def save_parallel_corpus(corpus: ParallelCorpus, src_path: str | Path,
                         tgt_path: str | Path) -> None:
    with open(src_path, "w", encoding="utf-8", newline="\n") as f:
        for p in corpus.pairs:
            f.write(" ".join(p.source) + "\n")
    with open(tgt_path, "w", encoding="utf-8", newline="\n") as f:
        for p in corpus.pairs:
            f.write(" ".join(p.target) + "\n")
