import json

import numpy as np
import pytest
from click.testing import CliRunner
from jsonschema import ValidationError

from concept_align.main import cli
from concept_align.services.masks.archive import write_raw_activations
from concept_align.services.reporting.schema import validate_report


@pytest.fixture
def runner():
    # click >= 8.2 always separates stderr and no longer accepts mix_stderr
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()


def _explain(runner, archive_dir, *extra, neuron="neuron.nam", env=None):
    args = [
        "explain",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--neuron", str(archive_dir / neuron),
        "--max-length", "2",
        *extra,
    ]
    return runner.invoke(cli, args, env=env)


def test_explain_worked_example(runner, archive_dir):
    result = _explain(runner, archive_dir)
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["unit"] == "neuron"
    assert report["algorithm"] == "optimal"
    assert report["label"] in ("(c1 AND c2)", "(c2 AND c1)")
    assert report["iou"] == {"num": 2, "den": 3, "value": "0.666666666667"}
    assert report["optimal_flag"] is True
    assert report["config"]["operators"] == ["OR", "AND", "AND NOT"]
    validate_report("RunReport", report)


def test_beams_agree(runner, archive_dir):
    labels = []
    for algorithm in ("beam", "beam-vanilla"):
        result = _explain(runner, archive_dir, "--algorithm", algorithm, "--beam-size", "1")
        assert result.exit_code == 0, result.stderr
        report = json.loads(result.stdout)
        assert report["config"]["beam_size"] == 1
        labels.append(report["label"])
    assert labels == ["(c2 AND c1)", "(c2 AND c1)"]


def test_brute_force_ranking(runner, archive_dir):
    result = _explain(runner, archive_dir, "--algorithm", "brute", "--top", "3")
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert len(report["ranking"]) == 3
    assert report["ranking"][0]["label"] == "(c1 AND c2)"
    assert report["stats"]["visited"] == 21


def test_activation_file_is_binarized(runner, archive_dir):
    write_raw_activations(np.array([[3.0, 2.0, 1.0, 0.0, -1.0, -2.0]], dtype=np.float32), archive_dir / "raw.naf")
    result = _explain(runner, archive_dir, "--quantile", "0.5", neuron="raw.naf")
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["iou"]["num"] == 2


def test_seedless_output_is_byte_identical(runner, archive_dir):
    first = _explain(runner, archive_dir, "--seedless-output")
    second = _explain(runner, archive_dir, "--seedless-output")
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["stats"]["elapsed_ms"] == 0.0


def test_missing_dataset_is_usage_error(runner, tmp_path):
    result = runner.invoke(cli, ["explain", "--dataset", str(tmp_path / "none.cma"), "--neuron", str(tmp_path)])
    assert result.exit_code == 2
    assert "Usage" in result.stderr


def test_unknown_operator_is_usage_error(runner, archive_dir):
    result = _explain(runner, archive_dir, "--operators", "or,xor")
    assert result.exit_code == 2
    assert result.stdout == ""


def test_corrupt_archive_exit_code(runner, archive_dir):
    path = archive_dir / "concepts.cma"
    path.write_bytes(path.read_bytes()[:-1])
    result = _explain(runner, archive_dir)
    assert result.exit_code == 3
    assert "payload size mismatch" in result.stderr


def test_dimension_mismatch_exit_code(runner, archive_dir):
    write_raw_activations(np.zeros((2, 6), dtype=np.float32) + np.arange(6), archive_dir / "wide.naf")
    result = _explain(runner, archive_dir, "--quantile", "0.5", neuron="wide.naf")
    assert result.exit_code == 3


def test_budget_exit_code(runner, archive_dir):
    result = _explain(runner, archive_dir, "--budget-nodes", "1")
    assert result.exit_code == 4
    report = json.loads(result.stdout)
    assert report["optimal_flag"] is False
    assert report["warnings"] == ["budget_exhausted"]


def test_brute_force_cap_exit_code(runner, archive_dir):
    result = _explain(runner, archive_dir, "--algorithm", "brute", env={"CONCEPT_ALIGN_BRUTE_FORCE_CAP": "5"})
    assert result.exit_code == 2
    assert "cap" in result.stderr


def test_stats(runner, archive_dir):
    result = runner.invoke(cli, [
        "stats",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--neuron", str(archive_dir / "neuron.nam"),
        "--max-length", "2",
    ])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert [c["diou"] for c in report["concepts"]] == ["2/5", "2/4", "2/5"]
    assert report["neuron"] == {"n_total": 3, "nu": 1, "nc": 2, "sec": 2, "seu": 1}
    assert report["disjoint_matrix"] == [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert report["state_space"]["labels"] == 21
    assert "per_sample" not in report


def _gen(runner, out, *extra):
    result = runner.invoke(cli, ["gen", "--out", str(out), "--seed", "5", "--units", "3", *extra])
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


def test_gen_is_deterministic(runner, tmp_path):
    first = _gen(runner, tmp_path / "a")
    second = _gen(runner, tmp_path / "b")
    assert len(first["units"]) == 3
    assert (tmp_path / "a" / "concepts.cma").read_bytes() == (tmp_path / "b" / "concepts.cma").read_bytes()
    for a, b in zip(first["units"], second["units"]):
        assert open(a, "rb").read() == open(b, "rb").read()


def test_gen_rejects_bad_config(runner, tmp_path):
    result = runner.invoke(cli, ["gen", "--out", str(tmp_path), "--overlap-density", "1.5"])
    assert result.exit_code == 2


def test_compare_against_itself(runner, tmp_path):
    _gen(runner, tmp_path)
    result = runner.invoke(cli, [
        "compare",
        "--dataset", str(tmp_path / "concepts.cma"),
        "--units-dir", str(tmp_path / "units"),
        "--baseline", "optimal",
    ])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["summary"]["units"] == 3
    assert report["summary"]["diff_pct"] == 0.0
    assert report["summary"]["same_pct"] == 100.0
    assert [u["unit"] for u in report["units"]] == ["unit_0000", "unit_0001", "unit_0002"]
    validate_report("ComparisonReport", report)


def test_compare_single_unit(runner, archive_dir):
    result = runner.invoke(cli, [
        "compare",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--units-dir", str(archive_dir),
        "--max-length", "2",
        "--beam-size", "1",
    ])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["baseline"] == "beam"
    assert [u["unit"] for u in report["units"]] == ["neuron"]
    assert report["units"][0]["category"] == "Same"
    assert report["config"]["beam_size"] == 1


def test_compare_jobs_do_not_change_results(runner, tmp_path):
    _gen(runner, tmp_path)
    args = [
        "compare",
        "--dataset", str(tmp_path / "concepts.cma"),
        "--units-dir", str(tmp_path / "units"),
        "--seedless-output",
    ]
    serial = runner.invoke(cli, args)
    parallel = runner.invoke(cli, args + ["--jobs", "2"])
    assert serial.exit_code == parallel.exit_code == 0
    assert serial.stdout == parallel.stdout


def test_bench(runner, archive_dir):
    result = runner.invoke(cli, [
        "bench",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--units-dir", str(archive_dir),
        "--max-length", "2",
    ])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert [row["algorithm"] for row in report["rows"]] == ["optimal", "beam", "beam-vanilla", "brute"]
    assert all(row["units"] == 1 for row in report["rows"])
    brute = report["rows"][-1]
    assert brute["visited_mean"] == 21.0
    assert brute["visited_std"] == 0.0
    validate_report("BenchReport", report)


def test_bench_rejects_unknown_algorithm(runner, archive_dir):
    result = runner.invoke(cli, [
        "bench",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--units-dir", str(archive_dir),
        "--algorithms", "optimal,greedy",
    ])
    assert result.exit_code == 2


def test_schema_rejects_malformed_report():
    with pytest.raises(ValidationError):
        validate_report("RunReport", {"unit": "u", "algorithm": "optimal"})


def _stats(runner, archive_dir, *extra):
    return runner.invoke(cli, [
        "stats",
        "--dataset", str(archive_dir / "concepts.cma"),
        "--neuron", str(archive_dir / "neuron.nam"),
        "--max-length", "2",
        *extra,
    ])


def test_stats_for_given_label(runner, archive_dir):
    result = _stats(runner, archive_dir, "--label", "(c1 AND c2)")
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    label = report["label"]
    assert label["label"] == "(c1 AND c2)"
    assert label["iou"] == {"num": 2, "den": 3, "value": "0.666666666667"}
    assert [p["label"] for p in label["prefixes"]] == ["c1", "(c1 AND c2)"]
    assert [p["diou"] for p in label["prefixes"]] == ["2/5", "2/3"]
    assert label["prefixes"][1]["quantities"] == {"ic": 2, "iu": 0, "ec": 0, "eu": 0}
    validate_report("QuantityReport", report)


def test_stats_rejects_unknown_label(runner, archive_dir):
    result = _stats(runner, archive_dir, "--label", "(c1 XOR c2)")
    assert result.exit_code == 2
    assert result.stdout == ""
