import json
from pathlib import Path

import pytest

from setevo import SchemaError, UnknownKind, parse_model, parse_model_object
from setevo.cli import build_parser, emit_csv, main

MODELS = Path(__file__).parent / "models"
GOLDEN = Path(__file__).parent / "golden"


class TestParseModel:
    def test_example_square_kind(self):
        model = parse_model(str(MODELS / "square.json"))
        assert model.discrete is not None
        assert model.discrete.stage(1) == frozenset({1, 2, 3, 4})

    def test_prime_genealogy_kind(self):
        model = parse_model(str(MODELS / "prime100.json"))
        assert model.genealogy_model is not None
        assert model.genealogy_model.marriage[9] == 10

    def test_unknown_kind(self):
        with pytest.raises(UnknownKind):
            parse_model_object({"kind": "nope"})

    def test_schema_error_carries_a_pointer(self):
        with pytest.raises(SchemaError) as excinfo:
            parse_model_object({"kind": "sliding-window", "width": 2})
        assert excinfo.value.pointer == "/step"

    def test_nested_pointer_on_bad_stage(self):
        with pytest.raises(SchemaError) as excinfo:
            parse_model_object(
                {"kind": "explicit-stages", "stages": [[1, 2], "oops"]}
            )
        assert excinfo.value.pointer == "/stages/1"

    def test_bad_weight_sum_is_a_schema_error(self):
        with pytest.raises(SchemaError) as excinfo:
            parse_model_object(
                {
                    "kind": "explicit-stages",
                    "stages": [[1, 2]],
                    "measure": {"weights": {"1": 0.5, "2": 0.2}},
                }
            )
        assert "measure" in excinfo.value.pointer

    def test_missing_file(self):
        with pytest.raises(SchemaError):
            parse_model("does-not-exist.json")

    def test_geom_pair_stages(self):
        model = parse_model(str(MODELS / "geom_pair.json"))
        assert model.discrete.stage(1) == frozenset({0, 1})
        assert model.discrete.stage(32) == frozenset({31, 32})
        assert model.measure is not None

    def test_explicit_interval_stages(self):
        model = parse_model_object(
            {
                "kind": "explicit-stages",
                "stages": [
                    {"intervals": [[0.0, 2.0]]},
                    {"intervals": [[1.0, 3.0]]},
                ],
            }
        )
        assert model.real is not None
        assert model.real.stage(2).contains(2.5)
        assert model.real.stage(3).is_empty


class TestCliParser:
    def test_subcommands_parse(self):
        parser = build_parser()
        args = parser.parse_args(["check", "m.json", "--horizon", "64"])
        assert args.command == "check"
        assert args.horizon == 64

    def test_construct_requires_out(self):
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args(["construct-convergent", "--phi", "const:0"])

    def test_unknown_command_exits_with_usage(self):
        assert main(["frobnicate"]) == 2


class TestCheckCommand:
    def test_square_passes(self, capsys):
        assert main(["check", str(MODELS / "square.json"), "--horizon", "64"]) == 0
        out = capsys.readouterr().out
        assert "condition 1: PASS" in out
        assert "condition 4: UNKNOWN" in out

    def test_toy_genealogy_fails_condition_two(self, capsys):
        assert main(["check", str(MODELS / "toy_genealogy.json"), "--horizon", "8"]) == 1
        out = capsys.readouterr().out
        assert "condition 2: FAIL" in out
        assert "E_3 ∖ E_2 = ∅" in out

    def test_window_model_checks_clean(self):
        assert main(["check", str(MODELS / "window21.json"), "--horizon", "24"]) == 0

    def test_symbolic_model_delegates(self, capsys):
        assert main(["check", str(MODELS / "pullback_origin.json"), "--horizon", "16"]) == 0
        out = capsys.readouterr().out
        assert "delegated" in out

    def test_atom_model_checks_clean(self):
        assert main(["check", str(MODELS / "atoms.json"), "--horizon", "24"]) == 0

    def test_missing_model_is_usage_error(self, capsys):
        assert main(["check", "missing.json"]) == 2
        assert "error:" in capsys.readouterr().err


class TestMeasureCommand:
    def test_geom_pair_threshold(self, capsys):
        rc = main(
            [
                "measure",
                str(MODELS / "geom_pair.json"),
                "--horizon",
                "32",
                "--epsilon",
                "1e-3",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "below epsilon from stage 11" in out

    def test_model_without_measure_is_rejected(self, capsys):
        assert main(["measure", str(MODELS / "square.json")]) == 2


class TestTraceCommand:
    def test_first_rows_match_hand_computation(self, capsys, tmp_path):
        csv_path = tmp_path / "trace.csv"
        rc = main(
            [
                "trace",
                str(MODELS / "geom_pair.json"),
                "--horizon",
                "3",
                "--csv",
                str(csv_path),
            ]
        )
        assert rc == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "k,cardinality,measure,integral"
        assert lines[1] == "1,2,0.75,"
        assert lines[2] == "2,2,0.375,"

    def test_empty_stage_row(self, tmp_path):
        model = tmp_path / "short.json"
        model.write_text(
            json.dumps(
                {
                    "kind": "explicit-stages",
                    "stages": [[0, 1], [1, 2], [2, 3]],
                    "measure": {"geometric": True},
                }
            )
        )
        csv_path = tmp_path / "trace.csv"
        assert main(["trace", str(model), "--horizon", "4", "--csv", str(csv_path)]) == 0
        lines = csv_path.read_text().splitlines()
        assert lines[4] == "4,0,0,"

    def test_golden_fixture_matches_byte_for_byte(self, tmp_path):
        csv_path = tmp_path / "fresh.csv"
        main(
            [
                "trace",
                str(MODELS / "geom_pair.json"),
                "--horizon",
                "8",
                "--csv",
                str(csv_path),
            ]
        )
        assert csv_path.read_bytes() == (GOLDEN / "geom_pair_trace.csv").read_bytes()

    def test_two_runs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for target in (a, b):
            main(
                [
                    "trace",
                    str(MODELS / "geom_pair.json"),
                    "--horizon",
                    "16",
                    "--csv",
                    str(target),
                ]
            )
        assert a.read_bytes() == b.read_bytes()


class TestGenealogyCommand:
    def test_toy_report(self, capsys):
        rc = main(["genealogy", str(MODELS / "toy_genealogy.json"), "--horizon", "5"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "generation 1: 'f1','m1'" in out
        assert "ancestry acyclicity: PASS" in out
        assert "placement: PASS" in out

    def test_non_genealogy_model_rejected(self):
        assert main(["genealogy", str(MODELS / "square.json")]) == 2


class TestReduceCommand:
    def test_geom_pair_not_found(self, capsys):
        rc = main(["reduce", str(MODELS / "geom_pair.json"), "--horizon", "24"])
        assert rc == 0
        assert "NOT-FOUND-WITHIN-BOUNDS" in capsys.readouterr().out


class TestConstructCommand:
    def test_round_trip_through_check(self, tmp_path, capsys):
        out_file = tmp_path / "conv.json"
        rc = main(
            [
                "construct-convergent",
                "--phi",
                "pow:-0.5+const:-1",
                "--tol",
                "0.05",
                "--horizon",
                "120",
                "--out",
                str(out_file),
            ]
        )
        assert rc == 0
        capsys.readouterr()
        assert main(["check", str(out_file), "--horizon", "120"]) == 0
        out = capsys.readouterr().out
        assert "condition 1: PASS" in out
        assert "condition 2: PASS" in out
        assert "condition 3: PASS" in out

    def test_obstructed_integrand_is_reported(self, capsys):
        rc = main(
            [
                "construct-convergent",
                "--phi",
                "const:1",
                "--tol",
                "0.05",
                "--horizon",
                "64",
                "--out",
                "unused.json",
            ]
        )
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestEmitCsv:
    def test_blank_fields_and_line_endings(self, tmp_path):
        path = tmp_path / "rows.csv"
        emit_csv([(1, None, 0.5, None), (2, 3, None, 1.25)], str(path))
        data = path.read_bytes()
        assert data == b"k,cardinality,measure,integral\n1,,0.5,\n2,3,,1.25\n"

    def test_seventeen_significant_digits(self, tmp_path):
        path = tmp_path / "rows.csv"
        emit_csv([(1, None, 0.1 + 0.2, None)], str(path))
        assert b"0.30000000000000004" in path.read_bytes()
