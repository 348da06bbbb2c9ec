import random

import pytest

from setevo import (
    Couple,
    FoundersInvalid,
    ancestry_check,
    check_axioms,
    children_of,
    couples,
    founders,
    genealogy_model,
    generational_evolution,
    prime_counting,
    prime_model,
    toy_three_generation_model,
)


def sieve_oracle(bound):
    """Independent trial-division prime list for cross-checking the sieve."""
    primes = []
    for n in range(2, bound + 1):
        if all(n % p for p in primes if p * p <= n):
            primes.append(n)
    return primes


class TestPrimeModel:
    def test_prime_counting_matches_trial_division(self):
        bound = 200
        primes = sieve_oracle(bound)
        pi = prime_counting(bound)
        for y in range(bound + 1):
            assert pi[y] == sum(1 for p in primes if p <= y)

    def test_rho_of_nine_is_eight(self):
        model = prime_model(100)
        # primes up to 9 are 2, 3, 5, 7
        assert model.reproduction[9] == 8

    def test_marriage_follows_successor(self):
        model = prime_model(100)
        assert model.marriage[9] == 10

    def test_partition_is_odd_even(self):
        model = prime_model(40)
        assert model.males == frozenset(range(1, 41, 2))
        assert model.females == frozenset(range(2, 41, 2))
        assert model.males | model.females == frozenset(range(1, 41))

    def test_children_of_couple_one_two(self):
        # pi(2) = 1 and pi(3) = 2, so only y = 2 maps to mother 2
        model = prime_model(100)
        assert children_of(model, Couple(1, 2)) == frozenset({2})

    def test_children_of_nine_ten_by_enumeration_oracle(self):
        # brute force: y is a child of (9, 10) iff 2 * pi(y) == 10
        bound = 100
        primes = sieve_oracle(bound)
        expected = frozenset(
            y
            for y in range(1, bound + 1)
            if 2 * sum(1 for p in primes if p <= y) == 10
        )
        model = prime_model(bound)
        assert children_of(model, Couple(9, 10)) == expected
        assert expected == frozenset({11, 12})

    def test_couple_with_unmothered_wife_has_no_children(self):
        model = genealogy_model(
            males=["a", "b"],
            females=["x", "y"],
            marriage={"a": "x", "b": "y"},
            reproduction={"b": "x"},
        )
        assert children_of(model, Couple("b", "y")) == frozenset()

    def test_prime_founders(self):
        model = prime_model(100)
        m_founders, f_founders = founders(model)
        assert m_founders == frozenset({1})
        assert f_founders == frozenset()

    def test_bound_minimum(self):
        with pytest.raises(ValueError):
            prime_model(3)


class TestFounders:
    def test_no_marriages_means_everyone_is_a_founder(self):
        model = genealogy_model(
            males=["a", "b"],
            females=["x", "y"],
            marriage={},
            reproduction={"a": "x"},
        )
        m_founders, f_founders = founders(model)
        assert m_founders == model.males
        assert f_founders == model.females

    def test_toy_founders(self):
        model, _, _ = toy_three_generation_model()
        assert founders(model) == (frozenset({"m1"}), frozenset({"f1"}))


class TestGenerationalEvolution:
    def test_toy_trace_stages(self):
        model, m1, f1 = toy_three_generation_model()
        trace, _ = generational_evolution(model, m1, f1, 5)
        assert [set(s) for s in trace.stages] == [
            {"m1", "f1", "m2", "f2"},
            {"m2", "f2", "m3", "f3"},
            {"m3", "f3"},
            set(),
            set(),
        ]

    def test_stage_four_of_the_evolution_is_empty(self):
        model, m1, f1 = toy_three_generation_model()
        _, evolution = generational_evolution(model, m1, f1, 3)
        assert evolution.stage(4) == frozenset()
        assert evolution.stage(9) == frozenset()

    def test_evolution_agrees_with_the_trace(self):
        model, m1, f1 = toy_three_generation_model()
        trace, evolution = generational_evolution(model, m1, f1, 5)
        for k in range(1, 6):
            assert evolution.stage(k) == trace.stage(k)

    def test_terminal_generation_fails_churn_at_pair_two_three(self):
        model, m1, f1 = toy_three_generation_model()
        _, evolution = generational_evolution(model, m1, f1, 6)
        report = check_axioms(evolution, 8)
        assert report.verdicts[2] == "FAIL"
        locations = [v.location for v in report.violations_for(2)]
        assert locations == [2]
        (violation,) = report.violations_for(2)
        assert "E_3 ∖ E_2 = ∅" in violation.detail

    def test_other_conditions_pass_on_the_toy(self):
        model, m1, f1 = toy_three_generation_model()
        _, evolution = generational_evolution(model, m1, f1, 6)
        report = check_axioms(evolution, 8)
        assert report.verdicts[1] == "PASS"
        assert report.verdicts[3] == "PASS"
        assert report.verdicts[4] == "PASS"

    def test_prime_model_founders_are_invalid_seeds(self):
        model = prime_model(100)
        with pytest.raises(FoundersInvalid):
            generational_evolution(model, frozenset({1}), frozenset({2}), 4)

    def test_placement_property_on_the_toy(self):
        model, m1, f1 = toy_three_generation_model()
        trace, _ = generational_evolution(model, m1, f1, 5)
        assert trace.placement_ok

    def test_stage_zero_collects_the_unreached(self):
        model = genealogy_model(
            males=["m1", "m2", "loner"],
            females=["f1", "f2"],
            marriage={"m1": "f1"},
            reproduction={"m2": "f1", "f2": "f1"},
        )
        m_f, f_f = founders(model)
        trace, _ = generational_evolution(model, frozenset({"m1"}), frozenset({"f1"}), 4)
        assert "loner" in trace.stage_zero
        assert trace.stage(1) <= trace.stage_zero | trace.stage(1)

    def test_generations_shrink_to_empty_and_stay(self):
        model, m1, f1 = toy_three_generation_model()
        trace, _ = generational_evolution(model, m1, f1, 8)
        empties = [i for i, g in enumerate(trace.generations, 1) if not g]
        if empties:
            assert empties == list(range(empties[0], len(trace.generations) + 1))


class TestAncestry:
    def test_toy_trace_is_clean(self):
        model, m1, f1 = toy_three_generation_model()
        trace, _ = generational_evolution(model, m1, f1, 5)
        report = ancestry_check(model, trace.generations)
        assert report.ok

    def test_duplicated_generation_member_fails_disjointness(self):
        model, _, _ = toy_three_generation_model()
        report = ancestry_check(model, [{"m1", "f1"}, {"m2", "f2", "m1"}])
        assert report.generation_disjoint == "FAIL"
        assert any("m1" in w for w in report.witnesses)

    def test_empty_trace_is_vacuously_clean(self):
        model, _, _ = toy_three_generation_model()
        assert ancestry_check(model, []).ok

    def test_self_descent_cycle_detected(self):
        model = genealogy_model(
            males=["a"],
            females=["x"],
            marriage={"a": "x"},
            reproduction={"a": "x"},  # a is his own couple's child
        )
        report = ancestry_check(model, [{"a", "x"}])
        assert report.acyclic == "FAIL"
        assert any("cycle" in w for w in report.witnesses)

    def test_children_disjointness_across_random_models(self):
        rng = random.Random(4242)
        for _ in range(30):
            n = rng.randint(3, 8)
            males = [f"m{i}" for i in range(n)]
            females = [f"f{i}" for i in range(n)]
            marriage = {m: f for m, f in zip(males, females) if rng.random() < 0.8}
            reproduction = {}
            everyone = males + females
            for person in everyone:
                if rng.random() < 0.6:
                    reproduction[person] = rng.choice(females)
            model = genealogy_model(males, females, marriage, reproduction)
            seen = {}
            for couple in couples(model):
                kids = children_of(model, couple)
                for kid in kids:
                    assert kid not in seen, (kid, seen.get(kid), couple)
                    seen[kid] = couple
