"""Length-control and plan-control metrics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from statistics import median

from ..textnorm import lcs_length


@dataclass
class LenControl:
    diff: int
    met: bool


def len_control(generated_words: int, limit: int) -> LenControl:
    """Signed word headroom against the limit; the limit itself counts as met."""
    diff = limit - generated_words
    return LenControl(diff=diff, met=diff >= 0)


def batch_len_control(samples: list[tuple[int, int]]) -> dict:
    """Aggregate (generated, limit) samples into %met and the median difference."""
    results = [len_control(g, l) for g, l in samples]
    if not results:
        return {"percent_met": 0.0, "median_diff": 0.0}
    return {
        "percent_met": sum(r.met for r in results) / len(results),
        "median_diff": median(r.diff for r in results),
    }


def plan_labels_prf(plan_labels: list[str], generated_labels: list[str]) -> dict:
    """Multiset precision/recall/F1 of generated action labels against the plan."""
    plan_counts = Counter(plan_labels)
    gen_counts = Counter(generated_labels)
    overlap = sum((plan_counts & gen_counts).values())
    precision = overlap / len(generated_labels) if generated_labels else 0.0
    recall = overlap / len(plan_labels) if plan_labels else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"precision": precision, "recall": recall, "f1": f1}


@dataclass
class PlanMatch:
    """Plan indices matched per generated action, in generation order; -1 = unmatched."""

    m: list[int]

    @property
    def s(self) -> list[int]:
        return [v for v in self.m if v >= 0]

    @property
    def s_star(self) -> list[int]:
        return sorted(self.s)


def match_generated_to_plan(plan_labels: list[str], generated_labels: list[str]) -> PlanMatch:
    """Greedy left-to-right matching of generated actions to plan actions.

    Each generated action takes the earliest plan action with the same label
    that has not been consumed yet; without one it maps to -1.
    """
    consumed = [False] * len(plan_labels)
    m = []
    for label in generated_labels:
        matched = -1
        for idx, plan_label in enumerate(plan_labels):
            if not consumed[idx] and plan_label == label:
                consumed[idx] = True
                matched = idx
                break
        m.append(matched)
    return PlanMatch(m=m)


def order_fidelity(m: list[int]) -> float:
    """How well matched actions preserve plan order: LCS(s, sorted(s)) / |s|.

    Defined as 0 when no action matched.
    """
    s = [v for v in m if v >= 0]
    if not s:
        return 0.0
    return lcs_length(s, sorted(s)) / len(s)
