import pytest

import kholes.verify as verify
from kholes.errors import UnknownSuite
from kholes.geometry import PointSet, validate_general_position
from kholes.verify import SUITES, Case, bowl_fan, bowl_window, nested_convex, replay, run_suite, trial_seed


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("bogus", 1)
    with pytest.raises(UnknownSuite):
        replay("bogus", {"case": {"points": []}})


def test_trial_seed_is_stable():
    assert trial_seed("harborth", 1, 0) == trial_seed("harborth", 1, 0)
    assert trial_seed("harborth", 1, 0) != trial_seed("harborth", 1, 1)
    assert trial_seed("harborth", 1, 0) != trial_seed("fourhole", 1, 0)
    assert 0 <= trial_seed("x", 0, 0) < 2**64


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_passes_small(name):
    n = {"thm21": 40, "prop36": 40, "lemma31": 40, "lemma41": 40, "pipeline": 40, "horton": 16}.get(name)
    res = run_suite(name, 6, n, seed=2)
    assert res.passed, [f.problems for f in res.failures]
    assert res.trials >= 1


def test_suite_is_deterministic_and_thread_independent():
    a = run_suite("dp_oracle", 8, seed=5)
    b = run_suite("dp_oracle", 8, seed=5, workers=2)
    assert a.to_dict() == b.to_dict()


def test_failure_carries_seed_and_replays(monkeypatch):
    # make the harborth check demand an impossible count so every trial fails
    real = SUITES["harborth"]
    strict = verify.Suite("harborth", 10, real.make, lambda c: (["forced"], {}) if len(c.points) == 10 else ([], {}))
    monkeypatch.setitem(SUITES, "harborth", strict)
    res = run_suite("harborth", 3, seed=9)
    assert len(res.failures) == 3
    f = res.failures[1]
    assert f.seed == trial_seed("harborth", 9, 1)
    rebuilt = real.make(f.seed, 10, 1)
    assert rebuilt.to_dict() == f.case
    assert replay("harborth", f.to_dict()) == ["forced"]


def test_replay_of_genuine_counterexample():
    # four points have no 5-hole: the harborth check flags them
    case = Case(PointSet([(0, 0), (5, 1), (2, 7), (1, 3)]))
    assert replay("harborth", {"case": case.to_dict()}) == ["no 5-hole"]


def test_all_aggregates_every_suite():
    res = run_suite("all", 2, 30, seed=1)
    assert set(res.metrics) == set(SUITES)
    assert res.passed


def test_structured_builders():
    for seed in range(5):
        w = bowl_window(seed, 11)
        assert len(w) == 12 and validate_general_position(w) is None
        assert validate_general_position(bowl_fan(seed)) is None
    nc = nested_convex(1, 50)
    assert len(nc) == 50 and validate_general_position(nc) is None
