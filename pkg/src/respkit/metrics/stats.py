"""Run-to-run consistency and perturbation-robustness statistics."""

from __future__ import annotations

import random

import numpy as np
from scipy import stats as scipy_stats

from ..errors import InsufficientDataError, ValidationError
from .quality import QUALITY_DIMENSIONS, judge_quality


def icc_2_1(matrix) -> tuple[float, bool]:
    """ICC(2,1): two-way random effects, absolute agreement, single measure.

    Rows are subjects, columns raters. Returns (icc, degenerate); a
    zero-variance table is degenerate and reported as perfect agreement.
    """
    x = np.asarray(matrix, dtype=float)
    n, k = x.shape
    if n < 2 or k < 2:
        raise InsufficientDataError("ICC needs at least 2 subjects and 2 raters")
    grand = x.mean()
    row_means = x.mean(axis=1)
    col_means = x.mean(axis=0)
    msr = k * ((row_means - grand) ** 2).sum() / (n - 1)
    msc = n * ((col_means - grand) ** 2).sum() / (k - 1)
    residual = x - row_means[:, None] - col_means[None, :] + grand
    mse = (residual**2).sum() / ((n - 1) * (k - 1))
    denominator = msr + (k - 1) * mse + k * (msc - mse) / n
    if denominator == 0.0:
        return 1.0, True
    return (msr - mse) / denominator, False


def consistency_stats(score_runs: list[list[float]]) -> dict:
    """Per-sample std statistics and ICC across repeated scoring runs.

    ``score_runs`` holds one list of run scores per sample; all samples need
    the same number of runs (at least two).
    """
    if not score_runs:
        raise InsufficientDataError("no samples")
    lengths = {len(runs) for runs in score_runs}
    if len(lengths) != 1:
        raise ValidationError(f"unequal run counts per sample: {sorted(lengths)}")
    if lengths.pop() < 2:
        raise InsufficientDataError("need at least two runs per sample")

    matrix = np.asarray(score_runs, dtype=float)
    stds = matrix.std(axis=1, ddof=1)
    if len(score_runs) >= 2:
        icc, degenerate = icc_2_1(matrix)
        icc = float(icc)
    else:
        icc, degenerate = None, False  # ICC needs at least two subjects
    return {
        "mean_std": float(stds.mean()),
        "median_std": float(np.median(stds)),
        "p90_std": float(np.percentile(stds, 90)),
        "max_std": float(stds.max()),
        "icc": icc,
        "icc_degenerate": degenerate,
    }


def cliffs_delta(a, b) -> float:
    """Pairwise dominance of a over b: (#(a>b) - #(a<b)) / (|a|*|b|)."""
    a = list(a)
    b = list(b)
    if not a or not b:
        raise InsufficientDataError("empty sample")
    gt = sum(1 for x in a for y in b if x > y)
    lt = sum(1 for x in a for y in b if x < y)
    return (gt - lt) / (len(a) * len(b))


def paired_t_one_sided(a, b) -> dict:
    """Paired one-sided t test of mean(a - b) > 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError("paired samples differ in length")
    n = a.size
    if n < 2:
        raise InsufficientDataError("need at least two paired samples")
    diff = a - b
    sd = diff.std(ddof=1)
    if sd == 0.0:
        t = 0.0 if diff.mean() == 0.0 else float("inf") * np.sign(diff.mean())
    else:
        t = diff.mean() / (sd / np.sqrt(n))
    p = float(scipy_stats.t.sf(t, df=n - 1))
    return {"t": float(t), "df": n - 1, "p": p}


def _mismatch_indices(n: int, seed: int) -> list[int]:
    """A seeded permutation with no fixed points (each response gets another review)."""
    rng = random.Random(seed)
    idx = list(range(n))
    rng.shuffle(idx)
    for i in range(n):
        if idx[i] == i:
            j = (i + 1) % n
            idx[i], idx[j] = idx[j], idx[i]
    return idx


def robustness_harness(samples: list[dict], judge, seed: int = 0) -> dict:
    """Score original/rewritten/mismatched conditions and compare them.

    Each sample carries ``review_segment``, ``response``, and optionally
    ``rewritten`` (a degraded rewrite) and ``alignments``. The mismatched
    condition pairs every response with another sample's review, drawn by a
    seeded permutation. Emits per-condition dimension means plus paired
    one-sided t statistics and Cliff's delta of original over each condition.
    """
    if len(samples) < 2:
        raise InsufficientDataError("robustness check needs at least 2 samples")

    mismatch = _mismatch_indices(len(samples), seed)
    conditions = {
        "original": [(s["review_segment"], s["response"], s.get("alignments")) for s in samples],
        "mismatched": [
            (samples[mismatch[i]]["review_segment"], s["response"], None)
            for i, s in enumerate(samples)
        ],
    }
    if all("rewritten" in s for s in samples):
        conditions["rewritten"] = [
            (s["review_segment"], s["rewritten"], s.get("alignments")) for s in samples
        ]

    scores: dict[str, dict[str, list[int]]] = {}
    for name, triples in conditions.items():
        per_dim: dict[str, list[int]] = {dim: [] for dim in QUALITY_DIMENSIONS}
        for review, response, alignments in triples:
            block = judge_quality(review, response, alignments, judge)
            for dim, parsed in block.dimensions().items():
                per_dim[dim].append(parsed.score)
        scores[name] = per_dim

    result = {
        "means": {
            name: {dim: float(np.mean(vals)) for dim, vals in per_dim.items()}
            for name, per_dim in scores.items()
        },
        "tests": {},
    }
    for name in conditions:
        if name == "original":
            continue
        result["tests"][name] = {
            dim: {
                **paired_t_one_sided(scores["original"][dim], scores[name][dim]),
                "cliffs_delta": cliffs_delta(scores["original"][dim], scores[name][dim]),
            }
            for dim in QUALITY_DIMENSIONS
        }
    return result
