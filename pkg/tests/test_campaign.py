import json

import pytest
from pydantic import ValidationError

from mtpack.campaign import (
    DEFAULT_SIZES,
    SEARCH_VERIFIED,
    THEOREM_BACKED,
    CampaignConfig,
    TrialRecord,
    format_report,
    read_records,
    reverify_candidate,
    run_campaign,
    run_trial,
)
from mtpack.exceptions import InvalidSpec
from mtpack.mtg import serialize_mtg


@pytest.fixture
def three_partite_config():
    return CampaignConfig.make(family="3partite", sizes=[4, 4, 4], trials=3, seed=11)


def test_same_config_same_report(three_partite_config):
    """
    Test that a campaign is reproducible and independent of the worker count
    """
    first = run_campaign(three_partite_config, workers=1)
    second = run_campaign(three_partite_config, workers=1)
    parallel = run_campaign(three_partite_config, workers=2)
    assert first.records == second.records == parallel.records
    assert [r.seed for r in first.records] == [11, 12, 13]


def test_3partite_trials_are_diverse(three_partite_config):
    """
    Test that small 3-partite trials are diversified and agree with the
    oracle
    """
    report = run_campaign(three_partite_config, workers=1)
    for record in report.records:
        assert record.backing == THEOREM_BACKED
        assert record.k == 2 and record.delta_plus >= 3
        assert record.oracle == "agrees"
        if record.outcome == "diverse":
            assert len(set(record.lengths)) >= 2
        else:
            assert record.outcome == "packed"
    assert report.counts["error"] == 0
    assert not report.candidates


def test_oracle_only_family():
    """
    Test that four-part hunts fall back to the exact search
    """
    config = CampaignConfig.make(family="4partite", sizes=[3, 3, 3, 3], trials=2, seed=5)
    report = run_campaign(config, workers=1)
    for record in report.records:
        assert record.algorithm == "exists_k_disjoint"
        assert record.backing == SEARCH_VERIFIED
        assert record.outcome == "packed"
    assert report.summary()["backing"] == SEARCH_VERIFIED


def test_bt_family_uses_k_from_group_count():
    """
    Test that BT trials take k from the number of groups
    """
    record = run_trial(CampaignConfig.make(family="bt", sizes=[3, 3, 3, 3]), 0)
    assert record.k == 2
    assert record.algorithm == "pack_triangle_free"
    assert record.lengths == [4, 4]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"family": "3partite", "sizes": [4, 4, 4], "trials": 0},
        {"family": "3partite", "sizes": [4, 4]},
        {"family": "bt", "sizes": [2, 2, 2]},
        {"family": "multipartite", "sizes": [3, 3], "size_ranges": [(1, 2), (1, 2)]},
        {"family": "multipartite", "size_ranges": [(3, 2), (1, 2)]},
        {"family": "multipartite", "sizes": [3, 3], "k_min": 3, "k_max": 2},
    ],
)
def test_invalid_configs(kwargs):
    """
    Test that inconsistent campaign settings are rejected
    """
    with pytest.raises(InvalidSpec):
        CampaignConfig.make(**kwargs)


def test_json_report_reads_back(three_partite_config):
    """
    Test that JSON reports end with a summary object and that the records
    read back unchanged
    """
    report = run_campaign(three_partite_config, workers=1)
    text = format_report(report, "json")
    lines = text.splitlines()
    assert len(lines) == 4
    summary = json.loads(lines[-1])
    assert summary["summary"] is True
    assert summary["trials"] == 3
    assert read_records(text) == report.records

    plain = format_report(report, "text").splitlines()
    assert plain[0].startswith("trial=0 seed=11 family=3partite sizes=4,4,4 k=2")
    assert plain[-1].startswith("family=3partite trials=3")


def test_candidates_carry_their_instance(k_star_3, triangle):
    """
    Test that a candidate needs its instance, and that re-verification
    reruns the exact search on it
    """
    with pytest.raises(ValidationError):
        TrialRecord(index=0, seed=0, family="multipartite", sizes=[1, 1, 1], k=2,
                    outcome="counterexample-candidate")
    record = TrialRecord(index=0, seed=0, family="multipartite", sizes=[1, 1, 1], k=2,
                         outcome="counterexample-candidate", mtg=serialize_mtg(k_star_3))
    assert reverify_candidate(record)
    record = record.model_copy(update={"k": 1, "mtg": serialize_mtg(triangle)})
    assert not reverify_candidate(record)


def test_split_family_is_search_verified():
    """
    Test that split digraph trials are packed by the exact search
    """
    config = CampaignConfig.make(family="split", sizes=[5, 7], trials=2, seed=3)
    report = run_campaign(config, workers=1)
    assert [r.outcome for r in report.records] == ["packed", "packed"]
    assert all(r.backing == SEARCH_VERIFIED for r in report.records)


def test_bipartite_default_sizes_meet_the_bound():
    """
    Test that the default bipartite sizes admit delta+ >= 3 within the
    sampling cap, so every trial is packed
    """
    config = CampaignConfig.make(family="bipartite", sizes=DEFAULT_SIZES["bipartite"], trials=2, seed=3)
    report = run_campaign(config, workers=1)
    for record in report.records:
        assert record.outcome == "packed"
        assert record.delta_plus >= 3
        assert record.lengths == [4, 4]
