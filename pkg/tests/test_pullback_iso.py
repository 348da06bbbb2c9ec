import random

import pytest

from setevo import (
    Bijection,
    Chronology,
    Evolution,
    Ground,
    MapDescriptor,
    NotABijection,
    SurjectivityViolated,
    check_axioms,
    chronology_of,
    example_square,
    from_chronology,
    is_isoevolved,
    naturals,
    pullback,
)


def pair_walk():
    return from_chronology(
        Chronology.from_rules(lambda x: x, lambda x: x + 2), naturals(0)
    )


class TestPullback:
    def test_identity_map_keeps_stages(self):
        evo = pair_walk()
        ident = MapDescriptor(
            apply=lambda y: y, domain=naturals(0), preimage=lambda e: (e,), label="id"
        )
        pulled = pullback(ident, evo)
        for k in range(1, 10):
            assert pulled.stage(k) == evo.stage(k)

    def test_halving_map_doubles_stages(self):
        f = MapDescriptor(
            apply=lambda y: y // 2,
            domain=naturals(0),
            preimage=lambda e: (2 * e, 2 * e + 1),
            label="half",
        )
        pulled = pullback(f, pair_walk())
        for k in range(1, 10):
            assert pulled.stage(k) == frozenset({2 * k - 2, 2 * k - 1, 2 * k, 2 * k + 1})

    def test_missing_preimage_is_rejected(self):
        base = Evolution(
            lambda k: frozenset({k, k + 1, 7}) if k < 7 else frozenset({7}),
            Ground.finite(range(1, 9)),
            "with-seven",
        )
        mapping = {y: y for y in range(1, 9) if y != 7}
        mapping[9] = 8  # domain covers everything except 7
        f = MapDescriptor.from_table(mapping, label="no-seven")
        with pytest.raises(SurjectivityViolated) as excinfo:
            pullback(f, base)
        assert excinfo.value.element == 7

    def test_chronologies_compose_with_the_map(self):
        f = MapDescriptor(
            apply=lambda y: y // 2,
            domain=naturals(0),
            preimage=lambda e: (2 * e, 2 * e + 1),
            label="half",
        )
        base = pair_walk()
        pulled = pullback(f, base)
        horizon = 20
        base_reading = chronology_of(base, horizon)
        pulled_reading = chronology_of(pulled, horizon)
        for y, a in pulled_reading.appears.items():
            assert a == base_reading.appears[y // 2]
            assert pulled_reading.vanishes[y] == base_reading.vanishes[y // 2]


def _random_surjection(rng, base_elements):
    """A finite MapDescriptor whose image covers base_elements."""
    mapping = {}
    next_id = 0
    for e in base_elements:
        fiber = rng.randint(1, 3)
        for _ in range(fiber):
            mapping[next_id] = e
            next_id += 1
    return MapDescriptor.from_table(mapping, label="onto")


def _random_stage_model(rng):
    """Finite stage list, sometimes deliberately broken."""
    ground = list(range(rng.randint(4, 9)))
    stages = []
    alive = set(rng.sample(ground, 2))
    for _ in range(rng.randint(4, 7)):
        stages.append(frozenset(alive))
        leaving = {x for x in alive if rng.random() < 0.4}
        joining = {x for x in ground if x not in alive and rng.random() < 0.3}
        alive = (alive - leaving) | joining
    flavor = rng.random()
    if flavor < 0.3 and len(stages) >= 3:
        stages[1] = stages[0]  # kill the churn condition
    elif flavor < 0.5 and len(stages) >= 4:
        stages[2] = frozenset()  # often breaks empty persistence
    evo = Evolution(
        lambda k, s=tuple(stages): s[k - 1] if k <= len(s) else frozenset(),
        Ground.finite(ground),
        "random",
    )
    return evo, len(stages)


class TestPullbackEquivalence:
    def test_verdicts_transfer_across_random_surjections(self):
        rng = random.Random(95014)
        for _ in range(60):
            base, horizon = _random_stage_model(rng)
            horizon = max(horizon, 3)
            f = _random_surjection(rng, base.ground.members)
            pulled = pullback(f, base)
            base_report = check_axioms(base, horizon)
            pulled_report = check_axioms(pulled, horizon)
            for condition in (1, 2, 3):
                assert base_report.verdicts[condition] == pulled_report.verdicts[condition]
            for condition in (1, 2):
                assert {v.location for v in base_report.violations_for(condition)} == {
                    v.location for v in pulled_report.violations_for(condition)
                }


class TestIsoevolution:
    def test_identity_is_an_isoevolution(self):
        evo = pair_walk()
        assert is_isoevolved(evo, evo, Bijection.identity(), 12).ok

    def test_relabeled_square_matches_stagewise_images(self):
        evo = example_square()
        shifted = Evolution(
            lambda n: frozenset(x + 1 for x in evo.stage(n)),
            naturals(2),
            "square+1",
        )
        report = is_isoevolved(evo, shifted, Bijection(lambda x: x + 1, "x+1"), 16)
        assert report.ok

    def test_cardinality_mismatch_fails_at_stage_one(self):
        report = is_isoevolved(
            example_square(), pair_walk(), Bijection(lambda x: x - 1, "shift"), 4
        )
        assert not report.ok
        assert report.first_mismatch == 1

    def test_collision_is_not_a_bijection(self):
        evo = pair_walk()
        with pytest.raises(NotABijection):
            is_isoevolved(evo, evo, Bijection(lambda x: x // 2, "collapse"), 8)

    def test_finite_ground_gap_is_not_a_bijection(self):
        a = Evolution(
            lambda k: frozenset({1, 2}) if k == 1 else frozenset({2, 3}) if k == 2 else frozenset(),
            Ground.finite([1, 2, 3]),
            "a",
        )
        b = Evolution(
            lambda k: a.stage(k), Ground.finite([1, 2, 3, 4]), "b"
        )
        with pytest.raises(NotABijection):
            is_isoevolved(a, b, Bijection.identity(), 3)

    def test_failure_reports_symmetric_difference(self):
        evo = pair_walk()
        other = Evolution(
            lambda k: frozenset({k - 1, k, k + 1}), naturals(0), "triple"
        )
        report = is_isoevolved(evo, other, Bijection.identity(), 6)
        assert report.first_mismatch == 1
        assert report.extra == (2,)
