import math

import pytest

from setevo import (
    CatalogUnsupported,
    IntervalSet,
    SignObstruction,
    construct_convergent_evolution,
    parse_integrand,
)


def simpson(f, lo, hi, panels=4096):
    """Independent composite-Simpson oracle for antiderivative checks."""
    h = (hi - lo) / panels
    total = f(lo) + f(hi)
    for i in range(1, panels):
        total += (4 if i % 2 else 2) * f(lo + i * h)
    return total * h / 3


class TestIntegrandCatalog:
    def test_descriptor_parses_bit_exactly(self):
        phi = parse_integrand("const:0.1")
        assert phi.terms[0].value == 0.1

    def test_descriptor_round_trip(self):
        phi = parse_integrand("pow:-0.5,1,0+const:-1")
        again = parse_integrand(phi.descriptor())
        assert again == phi

    def test_flagship_antiderivative(self):
        phi = parse_integrand("pow:-0.5+const:-1")
        # antiderivative is 2*sqrt(x) - x
        for x in (0.0, 0.25, 0.5, 1.0):
            assert phi.antiderivative(x) == pytest.approx(
                2 * math.sqrt(x) - x, abs=1e-15
            )
        assert phi.integral_between(0.0, 1.0) == 1.0

    def test_poly_matches_quadrature(self):
        phi = parse_integrand("poly:1,-3,0.5")
        expected = simpson(phi.evaluate, 0.0, 1.0)
        assert phi.integral_between(0.0, 1.0) == pytest.approx(expected, abs=1e-12)

    def test_pow_matches_quadrature_away_from_the_pole(self):
        phi = parse_integrand("pow:-0.5")
        expected = simpson(phi.evaluate, 0.25, 0.75, panels=8192)
        assert phi.integral_between(0.25, 0.75) == pytest.approx(expected, abs=1e-9)

    def test_indicator_integrates_to_overlap(self):
        phi = parse_integrand("ind:0.2,0.5")
        assert phi.integral_between(0.0, 1.0) == pytest.approx(0.3, abs=1e-15)
        assert phi.integral_between(0.3, 0.4) == pytest.approx(0.1, abs=1e-15)

    def test_combination_evaluates_termwise(self):
        phi = parse_integrand("poly:0,1+const:2")
        assert phi.evaluate(0.5) == 2.5

    def test_scientific_notation_survives_the_plus_split(self):
        phi = parse_integrand("const:1e+2")
        assert phi.evaluate(0.0) == 100.0

    def test_unknown_kind_rejected(self):
        with pytest.raises(CatalogUnsupported):
            parse_integrand("sin:1")

    def test_alpha_at_most_minus_one_rejected(self):
        with pytest.raises(CatalogUnsupported):
            parse_integrand("pow:-1")
        with pytest.raises(CatalogUnsupported):
            parse_integrand("pow:-1.5")

    def test_pow_below_shift_is_a_domain_error(self):
        phi = parse_integrand("pow:0.5,1,0.5")
        with pytest.raises(ValueError):
            phi.evaluate(0.25)


@pytest.fixture(scope="module")
def built():
    phi = parse_integrand("pow:-0.5+const:-1")
    return construct_convergent_evolution(phi, tol=0.05, horizon=400)


class TestFlagshipConstruction:

    def test_target_is_exactly_one(self, built):
        _, report = built
        assert report.target == 1.0

    def test_window_certificate(self, built):
        _, report = built
        assert report.sup_error <= 0.05
        assert report.window_start == 1

    def test_telescoping_identity(self, built):
        construction, report = built
        assert report.telescoping_max <= 1e-9
        for k in (1, 5, 50, 399):
            lhs = (
                construction.stage_integral(k)
                + construction.dead_sum_at(k)
                + construction.unborn_sum_at(k)
            )
            assert lhs == pytest.approx(construction.target, abs=1e-9)

    def test_prefix_axioms(self, built):
        construction, _ = built
        report = construction.axiom_report()
        assert report.verdicts[1] == "PASS"
        assert report.verdicts[2] == "PASS"
        assert report.verdicts[3] == "PASS"
        assert not report.violations

    def test_stage_integrals_recompute_exactly(self, built):
        construction, report = built
        phi = construction.phi
        for k in (1, 7, 123):
            region = construction.evolution.stage(k)
            assert phi.integral_on(region) == pytest.approx(
                report.stage_integrals[k - 1], abs=1e-12
            )

    def test_report_is_labeled_a_witness(self, built):
        _, report = built
        assert report.kind == "constructive witness"
        assert report.single_signed


class TestSignHandling:
    def test_bounded_single_sign_is_obstructed(self):
        with pytest.raises(SignObstruction):
            construct_convergent_evolution(parse_integrand("const:1"), 0.05, 64)
        with pytest.raises(SignObstruction):
            construct_convergent_evolution(parse_integrand("poly:0,1"), 0.05, 64)

    def test_zero_integrand_converges_trivially(self):
        _, report = construct_convergent_evolution(parse_integrand("const:0"), 0.05, 64)
        assert report.target == 0.0
        assert report.sup_error == 0.0

    def test_mixed_sign_zero_total(self):
        # phi(x) = x - 0.5 integrates to zero and changes sign at 0.5
        phi = parse_integrand("poly:-0.5,1")
        construction, report = construct_convergent_evolution(phi, 0.02, 200)
        assert report.target == 0.0
        assert not report.single_signed
        assert report.sup_error <= 0.02
        axioms = construction.axiom_report()
        assert axioms.verdicts[1] == "PASS"
        assert axioms.verdicts[2] == "PASS"
        assert axioms.verdicts[3] == "PASS"

    def test_mixed_sign_nonzero_total(self):
        phi = parse_integrand("poly:-0.25,1")  # total 0.25, changes sign
        _, report = construct_convergent_evolution(phi, 0.05, 200)
        assert report.sup_error <= 0.05

    def test_unbounded_tail_note_present(self):
        phi = parse_integrand("pow:-0.5+const:-1")
        _, report = construct_convergent_evolution(phi, 0.05, 100)
        assert any("window" in note for note in report.notes)


class TestConstructionShape:
    def test_every_stage_sees_birth_death_and_overlap(self):
        phi = parse_integrand("pow:-0.5+const:-1")
        construction, _ = construct_convergent_evolution(phi, 0.05, 100)
        evo = construction.evolution
        for k in range(1, 60):
            a, b = evo.stage(k), evo.stage(k + 1)
            assert not a.intersection(b).is_empty
            assert not a.difference(b).is_empty
            assert not b.difference(a).is_empty

    def test_stages_stay_inside_the_carrier(self):
        phi = parse_integrand("pow:-0.5+const:-1")
        construction, _ = construct_convergent_evolution(phi, 0.05, 100)
        carrier = construction.carrier
        for k in range(1, 40):
            assert construction.evolution.stage(k).subset_of(carrier)

    def test_pole_at_the_shift_inside_carrier_rejected(self):
        phi = parse_integrand("pow:-0.5,1,0.25")
        with pytest.raises(CatalogUnsupported):
            construct_convergent_evolution(phi, 0.05, 64)

    def test_bad_parameters_rejected(self):
        phi = parse_integrand("pow:-0.5+const:-1")
        with pytest.raises(ValueError):
            construct_convergent_evolution(phi, -0.1, 64)
        with pytest.raises(ValueError):
            construct_convergent_evolution(phi, 0.05, 4)
