import json
from pathlib import Path

import numpy as np
import pytest

from emopt.campaign import (
    CampaignConfig,
    cell_seed,
    default_max_iterations,
    emit_tables,
    load_report,
    run_campaign,
    worker_count,
)
from emopt import benchmarks
from emopt.engine import EmoParams


def tiny_config(tmp_path, **overrides):
    defaults = dict(
        functions=("f1",),
        algorithms=("emo", "obemo"),
        runs=6,
        base_seed=99,
        emo=EmoParams(population_size=12, max_iterations=8),
        max_iterations=8,
        output_dir=str(tmp_path / "out"),
        plots=False,
        threads=1,
    )
    defaults.update(overrides)
    return CampaignConfig(**defaults)


class TestSeeding:
    def test_stable_across_calls(self):
        assert cell_seed(42, "f1", "emo", 0) == cell_seed(42, "f1", "emo", 0)

    def test_distinct_per_cell(self):
        seeds = {
            cell_seed(42, fid, alg, k)
            for fid in ("f1", "f2")
            for alg in ("emo", "obemo")
            for k in range(10)
        }
        assert len(seeds) == 40

    def test_insensitive_to_other_cells(self):
        # Editing the function list elsewhere must not shift run seeds.
        assert cell_seed(7, "f3", "obemo", 4) == cell_seed(7, "f3", "obemo", 4)
        assert cell_seed(7, "f3", "obemo", 4) != cell_seed(8, "f3", "obemo", 4)

    def test_dimension_based_caps(self):
        assert default_max_iterations(benchmarks.lookup("f1")) == 2000
        assert default_max_iterations(benchmarks.lookup("f10")) == 1000


class TestWorkerCount:
    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("EMOPT_THREADS", "1")
        assert worker_count(8) == 1

    def test_requested(self, monkeypatch):
        monkeypatch.delenv("EMOPT_THREADS", raising=False)
        assert worker_count(3) == 3


class TestRunCampaign:
    def test_unknown_function_rejected_before_running(self, tmp_path):
        with pytest.raises(KeyError):
            run_campaign(tiny_config(tmp_path, functions=("f99",)))

    def test_unknown_algorithm_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            tiny_config(tmp_path, algorithms=("emo", "annealing"))

    def test_aggregates_and_tests_present(self, tmp_path):
        report = run_campaign(tiny_config(tmp_path))
        assert len(report.aggregates) == 2
        assert len(report.comparisons) == 1
        assert report.aggregates[0].runs == 6

    def test_single_run_skips_wilcoxon_with_warning(self, tmp_path):
        with pytest.warns(UserWarning, match="minimum sample size"):
            report = run_campaign(tiny_config(tmp_path, runs=1))
        assert report.comparisons == []

    def test_parallel_matches_serial(self, tmp_path):
        serial = run_campaign(tiny_config(tmp_path, threads=1))
        parallel = run_campaign(tiny_config(tmp_path, threads=2))
        for a, b in zip(serial.aggregates, parallel.aggregates):
            assert a.best_values == b.best_values
            assert a.iteration_counts == b.iteration_counts


@pytest.fixture(scope="module")
def emitted(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("campaign")
    config = tiny_config(tmp_path)
    report = run_campaign(config)
    written = emit_tables(report, config.output_dir, plots=False)
    return config, report, written


class TestEmitTables:

    def test_expected_files(self, emitted):
        config, _, written = emitted
        names = {p.name for p in written}
        assert names == {
            "comparison.csv",
            "wilcoxon.csv",
            "trace_f1_emo.csv",
            "trace_f1_obemo.csv",
            "report.json",
        }

    def test_comparison_shape(self, emitted):
        config, _, _ = emitted
        lines = (Path(config.output_dir) / "comparison.csv").read_text().splitlines()
        assert lines[0] == "function,algorithm,averaged_best,averaged_iterations,averaged_evaluations"
        assert len(lines) == 3  # header + 2 algorithms x 1 function

    def test_wilcoxon_shape(self, emitted):
        config, _, _ = emitted
        lines = (Path(config.output_dir) / "wilcoxon.csv").read_text().splitlines()
        assert lines[0] == "function,pair,metric,statistic,p_value,significant"
        assert len(lines) == 3  # best + iterations for the single pair

    def test_trace_monotone(self, emitted):
        config, _, _ = emitted
        lines = (Path(config.output_dir) / "trace_f1_obemo.csv").read_text().splitlines()
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))

    def test_json_validates_against_shipped_schema(self, emitted):
        jsonschema = pytest.importorskip("jsonschema")
        from importlib.resources import files

        config, _, _ = emitted
        schema = json.loads(files("emopt").joinpath("report_schema.json").read_text())
        payload = json.loads((Path(config.output_dir) / "report.json").read_text())
        jsonschema.validate(payload, schema)

    def test_incomplete_report_refused(self, emitted, tmp_path):
        _, report, _ = emitted
        import dataclasses

        broken = dataclasses.replace(report, complete=False)
        with pytest.raises(ValueError):
            emit_tables(broken, tmp_path / "x", plots=False)

    def test_unwritable_output_dir(self, emitted):
        _, report, _ = emitted
        with pytest.raises(OSError):
            emit_tables(report, "/dev/null/cannot", plots=False)


class TestDeterminism:
    def test_byte_identical_reruns_with_parallelism(self, tmp_path):
        texts = []
        for attempt, workers in enumerate((2, 1)):
            config = tiny_config(
                tmp_path, output_dir=str(tmp_path / f"out{attempt}"), threads=workers
            )
            report = run_campaign(config)
            emit_tables(report, config.output_dir, plots=False)
            texts.append(
                {
                    p.name: p.read_bytes()
                    for p in sorted(Path(config.output_dir).iterdir())
                    if p.suffix in (".csv", ".json")
                }
            )
        assert texts[0] == texts[1]


class TestLoadReport:
    def test_round_trip_reemission_identical(self, tmp_path):
        config = tiny_config(tmp_path)
        report = run_campaign(config)
        emit_tables(report, config.output_dir, plots=False)
        before = {
            p.name: p.read_bytes()
            for p in Path(config.output_dir).iterdir()
            if p.suffix == ".csv"
        }
        reloaded = load_report(config.output_dir)
        emit_tables(reloaded, config.output_dir, plots=False)
        after = {
            p.name: p.read_bytes()
            for p in Path(config.output_dir).iterdir()
            if p.suffix == ".csv"
        }
        assert before == after

    def test_missing_report(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_report(tmp_path)

    def test_incomplete_report_rejected(self, tmp_path):
        config = tiny_config(tmp_path)
        report = run_campaign(config)
        emit_tables(report, config.output_dir, plots=False)
        path = Path(config.output_dir) / "report.json"
        payload = json.loads(path.read_text())
        payload["complete"] = False
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError):
            load_report(config.output_dir)


class TestPlots:
    def test_figures_written(self, tmp_path):
        config = tiny_config(tmp_path, plots=True)
        report = run_campaign(config)
        written = emit_tables(report, config.output_dir, plots=True)
        figures = [p for p in written if p.suffix == ".png"]
        assert len(figures) == 1
        assert figures[0].name == "fig_f1.png"
        assert figures[0].stat().st_size > 1000
