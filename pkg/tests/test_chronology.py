import random

import pytest

from setevo import (
    Chronology,
    ChronologyInfeasible,
    Ground,
    SurjectivityGap,
    check_axioms,
    chronology_of,
    example_square,
    from_chronology,
    naturals,
)


def pair_walk():
    return from_chronology(
        Chronology.from_rules(lambda x: x, lambda x: x + 2), naturals(0)
    )


class TestChronologyReading:
    def test_square_element_nine(self):
        reading = chronology_of(example_square(), 12)
        assert reading.appears[9] == 2
        assert reading.vanishes[9] == 10

    def test_square_element_one(self):
        reading = chronology_of(example_square(), 6)
        assert reading.appears[1] == 1
        assert reading.vanishes[1] == 2

    def test_pair_walk_reading(self):
        reading = chronology_of(pair_walk(), 20)
        assert reading.appears[0] == 1 and reading.vanishes[0] == 2
        for x in range(1, 18):
            assert reading.appears[x] == x
            assert reading.vanishes[x] == x + 2

    def test_open_elements_are_undetermined(self):
        reading = chronology_of(pair_walk(), 10)
        assert 10 in reading.undetermined
        assert "still present" in reading.undetermined[10]

    def test_noncontiguous_elements_are_undetermined(self):
        from setevo import Evolution

        stages = [frozenset({1, 2}), frozenset({2}), frozenset({1, 2, 3}), frozenset({3, 4})]
        evo = Evolution(
            lambda k: stages[k - 1] if k <= 4 else frozenset(),
            Ground.finite([1, 2, 3, 4]),
            "gappy",
        )
        reading = chronology_of(evo, 4)
        assert 1 in reading.undetermined
        assert "not contiguous" in reading.undetermined[1]


class TestFromChronology:
    def test_interleaved_lifespans(self):
        chron = Chronology.from_rules(lambda x: x // 2, lambda x: x // 2 + 2 + (x % 2))
        evo = from_chronology(chron, naturals(0))
        assert evo.stage(1) == frozenset({0, 1, 2, 3})
        assert evo.stage(2) == frozenset({1, 2, 3, 4, 5})

    def test_pair_rule(self):
        evo = pair_walk()
        for k in range(1, 12):
            assert evo.stage(k) == frozenset({k - 1, k})

    def test_lifespan_below_two_is_infeasible(self):
        chron = Chronology.from_table({"a": 0, "b": 1}, {"a": 1, "b": 3})
        evo = from_chronology(chron, Ground.finite(["a", "b"]))
        with pytest.raises(ChronologyInfeasible) as excinfo:
            evo.stage(1)
        assert excinfo.value.element == "a"

    def test_missing_appearance_is_a_gap(self):
        # appearance value 1 is realized by nobody
        appears = {0: 0, 1: 0, 2: 2, 3: 3}
        vanishes = {0: 2, 1: 3, 2: 4, 3: 5}
        evo = from_chronology(
            Chronology.from_table(appears, vanishes), Ground.finite(appears)
        )
        with pytest.raises(SurjectivityGap) as excinfo:
            evo.stage(1)
        assert excinfo.value.stage_index == 1
        assert "appearance 1" in str(excinfo.value)

    def test_missing_disappearance_is_a_gap(self):
        # nobody dies at stage 3 (no D == 3)
        appears = {0: 0, 1: 1, 2: 2, 3: 3}
        vanishes = {0: 2, 1: 4, 2: 4, 3: 5}
        evo = from_chronology(
            Chronology.from_table(appears, vanishes), Ground.finite(appears)
        )
        assert evo.stage(1) == frozenset({0, 1})
        with pytest.raises(SurjectivityGap) as excinfo:
            evo.stage(2)
        assert "disappearance 3" in str(excinfo.value)

    def test_constructed_evolution_passes_axioms(self):
        chron = Chronology.from_rules(lambda x: x // 2, lambda x: x // 2 + 2 + (x % 2))
        report = check_axioms(from_chronology(chron, naturals(0)), 24)
        assert report.verdicts[1] == "PASS"
        assert report.verdicts[2] == "PASS"
        assert report.verdicts[3] == "PASS"
        assert not report.violations


def random_feasible_chronology(rng: random.Random, max_index: int):
    """Backbone covering every appearance 0..N plus jittered extras."""
    n = rng.randint(12, max_index)
    appears: dict[int, int] = {}
    vanishes: dict[int, int] = {}
    next_id = 0
    for a in range(n + 1):
        appears[next_id] = a
        vanishes[next_id] = a + 2
        next_id += 1
    for _ in range(rng.randint(0, n)):
        a = rng.randint(0, n)
        jitter = 0
        while rng.random() < 0.5:
            jitter += 1
        appears[next_id] = a
        vanishes[next_id] = a + 2 + jitter
        next_id += 1
    return appears, vanishes, n


class TestRoundTrip:
    def test_seeded_round_trip_suite(self):
        rng = random.Random(20240817)
        for _ in range(40):
            appears, vanishes, n = random_feasible_chronology(rng, 60)
            evo = from_chronology(
                Chronology.from_table(appears, vanishes), Ground.finite(appears)
            )
            horizon = n
            report = check_axioms(evo, horizon)
            assert report.verdicts[1] == "PASS"
            assert report.verdicts[2] == "PASS"
            assert report.verdicts[3] == "PASS"
            reading = chronology_of(evo, horizon)
            for x, d in vanishes.items():
                if d <= horizon:
                    # appearance 0 is observationally stage 1
                    assert reading.appears[x] == max(appears[x], 1)
                    assert reading.vanishes[x] == d

    def test_round_trip_on_the_interleaved_model(self):
        chron = Chronology.from_rules(lambda x: x // 2, lambda x: x // 2 + 2 + (x % 2))
        evo = from_chronology(chron, naturals(0))
        reading = chronology_of(evo, 15)
        for x in range(0, 20):
            if x // 2 + 2 + (x % 2) <= 15:
                assert reading.appears[x] == max(x // 2, 1)
                assert reading.vanishes[x] == x // 2 + 2 + (x % 2)
