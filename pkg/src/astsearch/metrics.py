"""Retrieval and translation quality metrics.

Retrieval: Top-K accuracy, mean reciprocal rank, and the improvement in MRR
that a combined similarity matrix achieves over the original track, plus its
average over the four (model, dimension) evaluation configurations.

Translation: cumulative 4-gram corpus BLEU computed after discarding the
most frequent ("trivially shared") n-grams of the reference corpus, which
dominate token statistics in source code.
"""

import math
from collections import Counter
from dataclasses import dataclass

from astsearch.errors import (
    CaseSetMismatch, EmptyCaseSet, LengthMismatch, MissingConfiguration,
)
from astsearch.search import RankedList


@dataclass
class SearchCase:
    """One query, the id of its correct candidate, and the ranked pool."""
    query_id: str
    correct_candidate_id: str
    ranked: RankedList

    @property
    def rank(self) -> int:
        try:
            return self.ranked.rank_of[self.correct_candidate_id]
        except KeyError:
            raise CaseSetMismatch(
                f"correct candidate {self.correct_candidate_id!r} absent from "
                f"ranking of query {self.query_id!r}") from None


@dataclass
class EvaluationConfig:
    """Labels one evaluation cell: original model tag and its dimension."""
    original_model: str
    original_dim: int
    augmented_model: str = "tree-summary"


def top_k_accuracy(cases: list[SearchCase], k: int) -> float:
    """Fraction of cases whose correct candidate ranks within the first k."""
    if not cases:
        raise EmptyCaseSet("no search cases")
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for c in cases if c.rank <= k) / len(cases)


def mrr(cases: list[SearchCase]) -> float:
    """Mean of reciprocal ranks of the correct candidates."""
    if not cases:
        raise EmptyCaseSet("no search cases")
    return sum(1.0 / c.rank for c in cases) / len(cases)


def effect_mrr(org_cases: list[SearchCase], com_cases: list[SearchCase]) -> float:
    """Combined-track MRR minus original-track MRR; positive means the
    augmentation improved the original retrieval."""
    if [c.query_id for c in org_cases] != [c.query_id for c in com_cases]:
        raise CaseSetMismatch("case lists must cover the same queries in the same order")
    for o, c in zip(org_cases, com_cases):
        if o.correct_candidate_id != c.correct_candidate_id:
            raise CaseSetMismatch(
                f"query {o.query_id!r} has different correct candidates in the two lists")
    return mrr(com_cases) - mrr(org_cases)


def average_effect_mrr(effects: dict[tuple[str, int], float]) -> float:
    """Mean improvement over the full 2x2 grid of (model, dimension) cells."""
    if len(effects) != 4:
        raise MissingConfiguration(f"expected 4 configurations, got {len(effects)}")
    models = {o for o, _ in effects}
    dims = {d for _, d in effects}
    if len(models) != 2 or len(dims) != 2:
        raise MissingConfiguration(
            f"expected a 2x2 grid, got models={sorted(models)} dims={sorted(dims)}")
    for o in models:
        for d in dims:
            if (o, d) not in effects:
                raise MissingConfiguration(f"missing configuration ({o!r}, {d})")
    return sum(effects.values()) / 4.0


# --- n-gram translation scoring ---

def _ngram_counts(tokens: list[str], max_n: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_n + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i:i + n])] += 1
    return counts


def trivially_shared_ngrams(references: list[list[str]], count: int,
                            max_n: int = 4) -> set[tuple[str, ...]]:
    """The `count` most frequent n-grams (orders 1..max_n pooled) of the
    reference corpus; frequency ties break lexicographically."""
    if count <= 0:
        return set()
    totals: Counter = Counter()
    for ref in references:
        totals.update(_ngram_counts(ref, max_n))
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return {ngram for ngram, _ in ranked[:count]}


def crystal_bleu_4(hypotheses: list[list[str]], references: list[list[str]],
                   trivially_shared: int = 500) -> float:
    """Corpus-level cumulative 4-gram BLEU over shared-n-gram-filtered counts.

    The `trivially_shared` most frequent n-grams of the reference corpus are
    removed from both hypothesis and reference multisets before the modified
    precisions are computed. No smoothing: any zero precision zeroes the
    score. Brevity penalty uses raw (unfiltered) token lengths.
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise LengthMismatch("empty corpus")
    shared = trivially_shared_ngrams(references, trivially_shared)

    clipped = [0] * 4
    total = [0] * 4
    ref_total = [0] * 4
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, 5):
            hyp_counts = Counter(
                {g: c for g, c in _order_ngrams(hyp, n).items() if g not in shared})
            ref_counts = Counter(
                {g: c for g, c in _order_ngrams(ref, n).items() if g not in shared})
            total[n - 1] += sum(hyp_counts.values())
            ref_total[n - 1] += sum(ref_counts.values())
            clipped[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    log_sum = 0.0
    for n in range(4):
        if total[n] == 0:
            # nothing left to score at this order: vacuous when the reference
            # side is also empty, a miss otherwise
            if ref_total[n] == 0:
                continue
            return 0.0
        if clipped[n] == 0:
            return 0.0
        log_sum += 0.25 * math.log(clipped[n] / total[n])

    if hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * math.exp(log_sum)


def _order_ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
