import json

import pytest

from whmm import build_model, fixture_path, sample_trajectory, save_json, save_trajectories
from whmm.cli import main

WOD = str(fixture_path("war_on_drugs.problem.json"))
THREE_WORLDS = str(fixture_path("three_worlds.json"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_valid_model(self, capsys, tmp_path):
        model_doc = {
            "states": [{"label": "a"}, {"label": "b", "role": "goal"}],
            "transitions": [[0.5, 0.5], [0.0, 1.0]],
            "initial": [1.0, 0.0],
        }
        path = tmp_path / "model.json"
        save_json(model_doc, path)
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 0
        assert "OK" in out

    def test_invalid_model_names_row_and_sum(self, capsys, tmp_path):
        model_doc = {
            "states": [{"label": "a"}, {"label": "b"}],
            "transitions": [[0.5, 0.4], [0.0, 1.0]],
            "initial": [1.0, 0.0],
        }
        path = tmp_path / "bad.json"
        save_json(model_doc, path)
        code, _, err = run(capsys, "validate", str(path))
        assert code == 1
        assert "row 0" in err
        assert "0.9" in err

    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["validate"])  # missing path
        assert exc.value.code == 2


@pytest.fixture()
def model_file(tmp_path):
    doc = {
        "states": [{"label": "start"}, {"label": "done", "role": "goal"}],
        "transitions": [[0.9, 0.1], [0.0, 1.0]],
        "initial": [1.0, 0.0],
        "weights": [1.0, 2.0],
    }
    path = tmp_path / "chain.json"
    save_json(doc, path)
    return str(path)


class TestReachAndViterbi:
    def test_reach_true_kernel(self, capsys, model_file):
        code, out, _ = run(capsys, "reach", model_file, "--from", "start",
                           "--targets", "done", "--horizon", "2")
        assert code == 0
        assert "0.1900000000" in out

    def test_reach_structured_matches_text(self, capsys, model_file):
        _, out, _ = run(capsys, "reach", model_file, "--from", "start",
                        "--targets", "goal", "--horizon", "2", "--format", "structured")
        data = json.loads(out)
        assert data["probability"] == pytest.approx(0.19)

    def test_reach_subjective(self, capsys, model_file):
        _, out, _ = run(capsys, "reach", model_file, "--from", "start", "--targets", "done",
                        "--horizon", "2", "--subjective", "--format", "structured")
        assert json.loads(out)["probability"] == pytest.approx(1 - (9 / 11) ** 2)

    def test_viterbi(self, capsys, model_file):
        code, out, _ = run(capsys, "viterbi", model_file, "--from", "start", "--to", "done",
                           "--horizon", "3")
        assert code == 0
        assert "start -> done" in out

    def test_viterbi_no_path_is_domain_error(self, capsys, tmp_path):
        doc = {
            "states": [{"label": "a"}, {"label": "b"}],
            "transitions": [[1.0, 0.0], [0.0, 1.0]],
            "initial": [1.0, 0.0],
        }
        path = tmp_path / "frozen.json"
        save_json(doc, path)
        code, _, err = run(capsys, "viterbi", str(path), "--from", "a", "--to", "b",
                           "--horizon", "4")
        assert code == 1
        assert "no_path" in err

    def test_unknown_state_label(self, capsys, model_file):
        code, _, err = run(capsys, "reach", model_file, "--from", "nowhere",
                           "--targets", "done", "--horizon", "2")
        assert code == 1
        assert "nowhere" in err


class TestCheck:
    def test_truth_per_world(self, capsys):
        code, out, _ = run(capsys, "check", THREE_WORLDS, "[](B -> C)")
        assert code == 0
        assert out.splitlines() == ["A: false", "B: true", "notB: true",
                                    "C: true", "notC: true"]

    def test_single_world(self, capsys):
        _, out, _ = run(capsys, "check", THREE_WORLDS, "<>(B & <>C)", "--world", "A")
        assert out.strip() == "A: true"

    def test_undeclared_atom_warns_but_evaluates(self, capsys):
        code, out, err = run(capsys, "check", THREE_WORLDS, "[](B -> mystery)")
        assert code == 0
        assert "mystery" in err
        assert "A: false" in out

    def test_parse_error_is_domain_error(self, capsys):
        code, _, err = run(capsys, "check", THREE_WORLDS, "[](B -> )")
        assert code == 1
        assert "offset" in err


class TestAuditSimulateSummarize:
    def test_audit_text(self, capsys):
        code, out, _ = run(capsys, "audit", WOD)
        assert code == 0
        assert "ccb footprint: true" in out
        assert "policy B" in out

    def test_audit_structured(self, capsys):
        _, out, _ = run(capsys, "audit", WOD, "--format", "structured")
        data = json.loads(out)
        assert data["ccb_footprint"] is True
        assert data["subjective_argmax"] == ["B"]

    def test_simulate_reproducible_byte_identical(self, capsys):
        code1, out1, _ = run(capsys, "simulate", WOD, "--n", "100", "--seed", "7")
        code2, out2, _ = run(capsys, "simulate", WOD, "--n", "100", "--seed", "7")
        assert code1 == code2 == 0
        assert out1 == out2
        _, structured1, _ = run(capsys, "simulate", WOD, "--n", "100", "--seed", "7",
                                "--format", "structured")
        _, structured2, _ = run(capsys, "simulate", WOD, "--n", "100", "--seed", "7",
                                "--format", "structured")
        assert structured1 == structured2

    def test_simulate_writes_log_then_summarize_agrees(self, capsys, tmp_path):
        log = tmp_path / "records.jsonl"
        _, sim_out, _ = run(capsys, "simulate", WOD, "--n", "50", "--seed", "3",
                            "--out", str(log), "--format", "structured")
        assert len(log.read_text().splitlines()) == 50
        code, sum_out, _ = run(capsys, "summarize", str(log), "--problem", WOD,
                               "--format", "structured")
        assert code == 0
        assert json.loads(sum_out)["counts"] == json.loads(sim_out)["counts"]

    def test_text_and_structured_carry_same_figures(self, capsys):
        _, text, _ = run(capsys, "simulate", WOD, "--n", "40", "--seed", "11")
        _, structured, _ = run(capsys, "simulate", WOD, "--n", "40", "--seed", "11",
                               "--format", "structured")
        data = json.loads(structured)
        assert f"ccb rate:           {data['ccb_rate']:.4f}" in text
        for label, count in data["counts"].items():
            assert f"{label}: {count:5d}" in text


class TestFitWeights:
    def test_recovers_planted_weight(self, capsys, tmp_path):
        model = build_model(["lo", "hi"], [[0.6, 0.4], [0.3, 0.7]], [1, 0])
        planted = model.with_weights([1.0, 3.0])
        paths = [sample_trajectory(planted, 100, seed=i, subjective=True)
                 for i in range(40)]
        log = tmp_path / "paths.jsonl"
        save_trajectories(paths, model, log)
        from whmm import model_to_dict
        model_path = tmp_path / "model.json"
        save_json(model_to_dict(model), model_path)
        code, out, _ = run(capsys, "fit-weights", str(log), str(model_path),
                           "--format", "structured")
        assert code == 0
        data = json.loads(out)
        assert data["converged"] is True
        assert 2.5 <= data["weights"]["hi"] <= 3.5


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
