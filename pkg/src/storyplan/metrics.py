"""Evaluation metrics for event sequences and stories.

Token sequences are lowercased whitespace tokens, the same tokenization
events use, so event-sequence and story evaluation share one path. All
referenced/diversity metrics return fractions in [0, 1]; intra-story
repetition is on a percent scale in [0, 100].

The intra-story repetition variant implemented here is prefix word
trigrams on a percent scale; reports carry that label since the metric
family admits other granularities.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels

IR_VARIANT = "prefix-trigram-percent"


def ngrams(tokens, n):
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def distinct_n(corpus, n):
    """Unique n-gram types across the corpus over total n-gram tokens; 0 if none."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0
    seen = set()
    for seq in corpus:
        grams = ngrams(seq, n)
        total += len(grams)
        seen.update(grams)
    return len(seen) / total if total else 0.0


def bleu_n(candidate, references, n):
    """Sentence BLEU: geometric mean of modified n-gram precisions up to n,
    add-one smoothed where a precision would be zero, times the brevity
    penalty against the closest-length reference. Empty candidate -> 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not candidate:
        return 0.0
    references = [r for r in references if r]
    if not references:
        return 0.0
    log_sum = 0.0
    for k in range(1, n + 1):
        cand_counts = Counter(ngrams(candidate, k))
        total = sum(cand_counts.values())
        clipped = 0
        for gram, count in cand_counts.items():
            best = max(Counter(ngrams(ref, k))[gram] for ref in references)
            clipped += min(count, best)
        if clipped == 0:
            precision = (clipped + 1) / (total + 1)
        else:
            precision = clipped / total
        log_sum += math.log(precision)
    c = len(candidate)
    r = min((abs(len(ref) - c), len(ref)) for ref in references)[1]
    bp = 1.0 if c >= r else math.exp(1.0 - r / c)
    return bp * math.exp(log_sum / n)


def rouge_n(candidate, reference, n):
    """(recall, precision, f1) over clipped n-gram overlap; zeros when the
    reference (or candidate side, for precision) has no n-grams."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ref_counts = Counter(ngrams(reference, n))
    cand_counts = Counter(ngrams(candidate, n))
    overlap = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
    ref_total = sum(ref_counts.values())
    cand_total = sum(cand_counts.values())
    recall = overlap / ref_total if ref_total else 0.0
    precision = overlap / cand_total if cand_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return recall, precision, f1


def _lcs(candidate, reference):
    ids = {}
    a = np.fromiter((ids.setdefault(t, len(ids)) for t in candidate), dtype=np.int64,
                    count=len(candidate))
    b = np.fromiter((ids.setdefault(t, len(ids)) for t in reference), dtype=np.int64,
                    count=len(reference))
    return kernels.lcs_length(a, b)


def rouge_l(candidate, reference):
    """(recall, precision, f1) from the longest common subsequence."""
    if not candidate or not reference:
        return 0.0, 0.0, 0.0
    lcs = _lcs(candidate, reference)
    recall = lcs / len(reference)
    precision = lcs / len(candidate)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return recall, precision, f1


def intra_story_repetition(sentences):
    """Percent of each sentence's word trigrams already seen earlier in the story.

    Position 1 is 0 by definition; positions with fewer than 3 tokens
    contribute 0 (callers may count them via short_sentence_count).
    """
    values = []
    seen = set()
    for i, sent in enumerate(sentences):
        grams = ngrams(sent, 3)
        if i == 0 or not grams:
            values.append(0.0)
        else:
            repeated = sum(1 for g in grams if g in seen)
            values.append(100.0 * repeated / len(grams))
        seen.update(grams)
    return values


def short_sentence_count(stories):
    return sum(1 for story in stories for sent in story if len(sent) < 3)


def ir_aggregate(stories):
    """Mean over positions >= 2 of intra-story repetition, averaged across stories."""
    story_means = []
    for sentences in stories:
        values = intra_story_repetition(sentences)[1:]
        if values:
            story_means.append(sum(values) / len(values))
    return sum(story_means) / len(story_means) if story_means else 0.0


def repetition_curve(stories):
    """Per-position mean repetition across stories: [(position, mean, count)]."""
    sums = {}
    counts = {}
    for sentences in stories:
        for pos, value in enumerate(intra_story_repetition(sentences), start=1):
            sums[pos] = sums.get(pos, 0.0) + value
            counts[pos] = counts.get(pos, 0) + 1
    return [(pos, sums[pos] / counts[pos], counts[pos]) for pos in sorted(sums)]


@dataclass
class MetricReport:
    """Named metric values plus the repetition curve and corpus sizes."""

    mode: str
    metrics: dict
    curve: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)

    def to_text(self):
        width = max(len(name) for name in self.metrics) if self.metrics else 0
        lines = [f"mode: {self.mode}"]
        for key, value in self.counts.items():
            lines.append(f"{key}: {value}")
        for key, value in self.labels.items():
            lines.append(f"{key}: {value}")
        lines.append("")
        for name, value in self.metrics.items():
            lines.append(f"{name.ljust(width)}  {value:.6f}")
        if self.curve:
            lines.append("")
            lines.append("intra-story repetition curve (position mean-percent stories):")
            for pos, mean, cnt in self.curve:
                lines.append(f"  {pos} {mean:.6f} {cnt}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        out = {"mode": self.mode, "metrics": self.metrics, "counts": self.counts}
        if self.labels:
            out["labels"] = self.labels
        if self.curve:
            out["repetition_curve"] = [
                {"position": pos, "mean_percent": mean, "stories": cnt}
                for pos, mean, cnt in self.curve
            ]
        return out


def evaluate_events(hypotheses, references):
    """Referenced evaluation of planned event sequences against golden ones.

    Both arguments map story_id to a token sequence (the flattened event
    tokens of one story). Produces R-1/R-2/R-L (F1), B-1/B-2, D-1/D-2.

    Raises:
        ValueError: hypothesis and reference ids differ (lists them).
    """
    hyp_ids = set(hypotheses)
    ref_ids = set(references)
    if hyp_ids != ref_ids:
        missing = sorted(ref_ids - hyp_ids)
        extra = sorted(hyp_ids - ref_ids)
        raise ValueError(
            f"story id mismatch: missing from hypothesis {missing}; not in reference {extra}"
        )
    ids = sorted(hyp_ids)
    pairs = [(hypotheses[i], references[i]) for i in ids]
    metrics = {
        "R-1": _mean(rouge_n(c, r, 1)[2] for c, r in pairs),
        "R-2": _mean(rouge_n(c, r, 2)[2] for c, r in pairs),
        "R-L": _mean(rouge_l(c, r)[2] for c, r in pairs),
        "B-1": _mean(bleu_n(c, [r], 1) for c, r in pairs),
        "B-2": _mean(bleu_n(c, [r], 2) for c, r in pairs),
        "D-1": distinct_n([c for c, _ in pairs], 1),
        "D-2": distinct_n([c for c, _ in pairs], 2),
    }
    return MetricReport(mode="events", metrics=metrics, counts={"stories": len(ids)})


def evaluate_stories(stories):
    """Unreferenced evaluation of stories (lists of sentence token lists):
    IR-A plus D-2/D-3/D-4 over flattened story tokens, with the
    per-position repetition curve."""
    flat = [[tok for sent in story for tok in sent] for story in stories]
    metrics = {
        "IR-A": ir_aggregate(stories),
        "D-2": distinct_n(flat, 2),
        "D-3": distinct_n(flat, 3),
        "D-4": distinct_n(flat, 4),
    }
    return MetricReport(
        mode="stories",
        metrics=metrics,
        curve=repetition_curve(stories),
        counts={
            "stories": len(stories),
            "short_sentences": short_sentence_count(stories),
        },
        labels={"ir_variant": IR_VARIANT},
    )


def _mean(values):
    values = list(values)
    return sum(values) / len(values) if values else 0.0
