"""Stance profile and transition flow tests."""

import random

import pytest

from respkit.errors import UndefinedMetricError
from respkit.metrics.discourse import stance_profile, transition_flow
from respkit.taxonomy import STANCES


def span(stance, words):
    return {"stance": stance, "word_count": words}


def test_profile_weighted_proportions():
    profile = stance_profile([span("Cooperative", 60), span("Hedge", 20), span("Social", 20)])
    assert profile["Cooperative"] == pytest.approx(0.6)
    assert profile["Defensive"] == 0.0
    assert profile["Hedge"] == pytest.approx(0.2)
    assert profile["Social"] == pytest.approx(0.2)
    assert profile["Other"] == 0.0
    assert profile.arg_load == pytest.approx(0.8)


def test_profile_single_other_span():
    profile = stance_profile([span("Other", 42)])
    assert profile["Other"] == 1.0
    assert profile.arg_load == 0.0


def test_profile_human_corpus_reference_masses():
    # word masses proportional to the published human tone-stance profile
    profile = stance_profile(
        [
            span("Cooperative", 454),
            span("Defensive", 48),
            span("Hedge", 277),
            span("Social", 76),
            span("Other", 145),
        ]
    )
    assert profile["Cooperative"] == pytest.approx(0.454)
    assert profile["Defensive"] == pytest.approx(0.048)
    assert profile["Hedge"] == pytest.approx(0.277)
    assert profile["Social"] == pytest.approx(0.076)
    assert profile["Other"] == pytest.approx(0.145)
    assert profile.arg_load == pytest.approx(0.779)


def test_profile_zero_mass_is_undefined():
    with pytest.raises(UndefinedMetricError):
        stance_profile([span("Social", 0)])


def test_profile_identities_hold_on_random_inputs():
    rng = random.Random(4)
    for _ in range(500):
        spans = [
            span(rng.choice(STANCES), rng.randint(0, 40))
            for _ in range(rng.randint(1, 8))
        ]
        if sum(s["word_count"] for s in spans) == 0:
            continue
        profile = stance_profile(spans)
        assert sum(profile.proportions.values()) == pytest.approx(1.0, abs=1e-9)
        assert profile.arg_load == pytest.approx(
            1.0 - profile["Social"] - profile["Other"], abs=1e-9
        )


def test_transition_one_span_density():
    flow = transition_flow([[span("Hedge", 10)]], n_bins=4)
    hedge = flow["stances"].index("Hedge")
    # midpoint at 0.5 -> bin 2 of 4
    assert flow["position_density"][2][hedge] == 1.0
    assert sum(sum(row) for row in flow["transitions"]) == 0


def test_transition_alternating_stances():
    spans = [span("Cooperative", 5), span("Social", 5), span("Cooperative", 5), span("Social", 5)]
    flow = transition_flow([spans])
    coop = flow["stances"].index("Cooperative")
    soc = flow["stances"].index("Social")
    transitions = flow["transitions"]
    assert transitions[coop][soc] == 2
    assert transitions[soc][coop] == 1
    total = sum(sum(row) for row in transitions)
    assert total == 3


def test_transition_matches_counting_oracle():
    responses = [
        [span("Social", 4), span("Cooperative", 12), span("Other", 4)],
        [span("Cooperative", 10), span("Hedge", 10)],
        [span("Defensive", 6)],
    ]
    flow = transition_flow(responses, n_bins=2)
    idx = {s: i for i, s in enumerate(flow["stances"])}

    # transition counts by hand: Soc->Coop, Coop->Oth, Coop->Hed
    expected = [[0] * 5 for _ in range(5)]
    expected[idx["Social"]][idx["Cooperative"]] = 1
    expected[idx["Cooperative"]][idx["Other"]] = 1
    expected[idx["Cooperative"]][idx["Hedge"]] = 1
    assert flow["transitions"] == expected

    # bin masses by hand (word-weighted, midpoints):
    # resp1 total 20: Soc mid 2 (bin 0), Coop mid 10 (bin 1), Oth mid 18 (bin 1)
    # resp2 total 20: Coop mid 5 (bin 0), Hed mid 15 (bin 1)
    # resp3 total 6: Def mid 3 (bin 1)
    bin0 = {"Social": 4, "Cooperative": 10}
    bin1 = {"Cooperative": 12, "Other": 4, "Hedge": 10, "Defensive": 6}
    for stance, mass in bin0.items():
        assert flow["position_density"][0][idx[stance]] == pytest.approx(mass / 14)
    for stance, mass in bin1.items():
        assert flow["position_density"][1][idx[stance]] == pytest.approx(mass / 32)


def test_transition_bins_normalized():
    rng = random.Random(8)
    responses = [
        [span(rng.choice(STANCES), rng.randint(1, 20)) for _ in range(rng.randint(1, 6))]
        for _ in range(10)
    ]
    flow = transition_flow(responses, n_bins=10)
    for row in flow["position_density"]:
        total = sum(row)
        assert total == pytest.approx(1.0) or total == 0.0
