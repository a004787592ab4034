"""Tone-stance profiles and discourse transition flow."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UndefinedMetricError
from ..taxonomy import ARGUMENTATIVE_STANCES, STANCES


def _stance_and_mass(span) -> tuple[str, int]:
    if isinstance(span, dict):
        return span["stance"], int(span["word_count"])
    return span.stance, int(span.word_count)


@dataclass
class StanceProfile:
    """Word-weighted stance proportions of one or more responses."""

    proportions: dict[str, float]
    arg_load: float

    def __getitem__(self, stance: str) -> float:
        return self.proportions[stance]


def stance_profile(labeled_spans) -> StanceProfile:
    """Word-weighted proportion of each stance class plus the argumentative load.

    Argumentative load sums the Cooperative, Defensive, and Hedge shares.
    Raises when the spans carry no words at all.
    """
    mass = {stance: 0 for stance in STANCES}
    for span in labeled_spans:
        stance, words = _stance_and_mass(span)
        if stance not in mass:
            raise UndefinedMetricError(f"unknown stance class {stance!r}")
        mass[stance] += words
    total = sum(mass.values())
    if total == 0:
        raise UndefinedMetricError("stance profile undefined: zero word mass")
    proportions = {stance: mass[stance] / total for stance in STANCES}
    arg_load = sum(proportions[s] for s in ARGUMENTATIVE_STANCES)
    return StanceProfile(proportions=proportions, arg_load=arg_load)


def transition_flow(responses, n_bins: int = 10) -> dict:
    """Stance-by-position densities and adjacent-span transition counts.

    Each span lands in the relative-position bin of its word midpoint; per-bin
    stance distributions are word-weighted and normalized to 1. Transitions
    count adjacent (from-stance, to-stance) span pairs across all responses.
    """
    density = [[0.0] * len(STANCES) for _ in range(n_bins)]
    transitions = [[0] * len(STANCES) for _ in range(len(STANCES))]
    stance_idx = {s: i for i, s in enumerate(STANCES)}

    for spans in responses:
        spans = list(spans)
        if not spans:
            continue
        parsed = [_stance_and_mass(sp) for sp in spans]
        total = sum(words for _, words in parsed)
        offset = 0
        for stance, words in parsed:
            midpoint = offset + words / 2
            frac = midpoint / total if total else 0.0
            bin_idx = min(int(frac * n_bins), n_bins - 1)
            density[bin_idx][stance_idx[stance]] += words
            offset += words
        for (prev, _), (cur, _) in zip(parsed, parsed[1:]):
            transitions[stance_idx[prev]][stance_idx[cur]] += 1

    for row in density:
        row_total = sum(row)
        if row_total:
            for i in range(len(row)):
                row[i] /= row_total

    return {"stances": list(STANCES), "position_density": density, "transitions": transitions}
