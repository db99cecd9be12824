"""Command-line round trips in-process, with manifests and exit codes."""

import json

import pytest

from soaguard.cli import build_parser, main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """One generate+train pass shared by the CLI tests (training dominates)."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus"
    models = root / "models"
    assert main(["generate", "--n", "250", "--seed", "3", "--noise", "0.05", "--out", str(corpus)]) == 0
    assert main(["train", "--corpus", str(corpus), "--seed", "0", "--out", str(models)]) == 0
    return root, corpus, models


def test_generate_writes_docs_sidecars_and_manifest(workspace):
    _, corpus, _ = workspace
    docs = sorted(corpus.glob("*.json"))
    truths = sorted(corpus.glob("*.truth.json"))
    assert len(truths) == 250
    assert len(docs) == 250 + 250 + 1  # documents + sidecars + run manifest
    manifest = json.loads((corpus / "run_manifest.json").read_text())
    assert manifest["command"] == "generate"
    assert manifest["arguments"]["n"] == 250
    assert manifest["arguments"]["seed"] == 3
    assert manifest["document_count"] == 250


def test_generate_is_reproducible_from_its_manifest(workspace, tmp_path):
    _, corpus, _ = workspace
    manifest = json.loads((corpus / "run_manifest.json").read_text())
    rerun = tmp_path / "again"
    argv = ["generate", "--out", str(rerun)]
    for flag in ("n", "seed", "noise"):
        argv += [f"--{flag}", str(manifest["arguments"][flag])]
    assert main(argv) == 0
    for path in sorted(corpus.glob("soa-*.json")):
        assert (rerun / path.name).read_bytes() == path.read_bytes(), path.name


def test_train_manifest_records_checksums_and_metrics(workspace):
    _, _, models = workspace
    manifest = json.loads((models / "run_manifest.json").read_text())
    assert manifest["command"] == "train"
    assert set(manifest["model_checksums"]) == {
        "goal_rec",
        "position",
        "balance_mention",
        "insurance",
        "table",
    }
    for task, accuracy in manifest["held_out_accuracy"].items():
        assert accuracy >= 0.9, task


def test_analyze_to_file_and_stdout_agree(workspace, tmp_path, capsys):
    _, corpus, models = workspace
    doc_path = next(p for p in sorted(corpus.glob("soa-*.json")) if ".truth" not in p.name)
    out = tmp_path / "analysis.json"
    assert main(["analyze", "--doc", str(doc_path), "--models", str(models), "--out", str(out)]) == 0
    progress = capsys.readouterr().out
    assert "analyzed soa-" in progress and " ms " in progress
    file_payload = json.loads(out.read_text())
    assert "elapsed_ms" not in file_payload  # file outputs stay byte-reproducible

    assert main(["analyze", "--doc", str(doc_path), "--models", str(models)]) == 0
    captured = capsys.readouterr()
    stdout_payload = json.loads(captured.out)
    assert stdout_payload["run_manifest"]["command"] == "analyze"
    assert stdout_payload["assessment"] == file_payload["assessment"]
    assert "analyzed soa-" in captured.err


def test_analyze_file_output_is_stable_across_runs(workspace, tmp_path, capsys):
    _, corpus, models = workspace
    doc_path = next(p for p in sorted(corpus.glob("soa-*.json")) if ".truth" not in p.name)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["analyze", "--doc", str(doc_path), "--models", str(models), "--out", str(a)])
    main(["analyze", "--doc", str(doc_path), "--models", str(models), "--out", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_batch_parallelism_does_not_change_outputs(workspace, tmp_path, capsys):
    root, corpus, models = workspace
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    base = ["batch", "--corpus", str(corpus), "--models", str(models)]
    assert main(base + ["--jobs", "1", "--out", str(serial)]) == 0
    assert main(base + ["--jobs", "4", "--out", str(parallel)]) == 0
    capsys.readouterr()
    assert (serial / "batch.csv").read_bytes() == (parallel / "batch.csv").read_bytes()
    serial_files = sorted(p.name for p in serial.glob("*.assessment.json"))
    assert len(serial_files) == 250
    for name in serial_files[:10]:
        assert (serial / name).read_bytes() == (parallel / name).read_bytes()
    manifest = json.loads((parallel / "run_manifest.json").read_text())
    assert manifest["command"] == "batch"
    assert manifest["document_count"] == 250
    assert len(manifest["per_document_ms"]) == 250


def test_batch_can_persist_into_a_data_dir(workspace, tmp_path, capsys):
    _, corpus, models = workspace
    out = tmp_path / "out"
    data = tmp_path / "data"
    assert (
        main(
            [
                "batch",
                "--corpus",
                str(corpus),
                "--models",
                str(models),
                "--out",
                str(out),
                "--data-dir",
                str(data),
                "--jobs",
                "4",
            ]
        )
        == 0
    )
    capsys.readouterr()
    from soaguard.store import DocumentStore

    store = DocumentStore(data)
    ids = store.list_ids()
    assert len(ids) == 250
    assert store.get_analysis(ids[0]) is not None


def test_evaluate_reports_agreement(workspace, tmp_path, capsys):
    _, _, models = workspace
    eval_corpus = tmp_path / "eval"
    out = tmp_path / "evaluation.json"
    assert main(["generate", "--n", "60", "--seed", "7", "--noise", "0.05", "--out", str(eval_corpus)]) == 0
    assert (
        main(["evaluate", "--corpus", str(eval_corpus), "--models", str(models), "--out", str(out)])
        == 0
    )
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert payload["n_documents"] == 60
    for task, metrics in payload["tasks"].items():
        assert metrics["macro_f1"] >= 0.9, task
    for kri, metrics in payload["kris"].items():
        assert metrics["accuracy"] >= 0.9, kri
    assert payload["overall"]["accuracy"] >= 0.85


def test_report_from_assessments_matches_batch_csv(workspace, tmp_path, capsys):
    _, corpus, models = workspace
    batch_out = tmp_path / "batch"
    assert (
        main(
            ["batch", "--corpus", str(corpus), "--models", str(models), "--jobs", "4", "--out", str(batch_out)]
        )
        == 0
    )
    report_csv = tmp_path / "report.csv"
    assert main(["report", "--assessments", str(batch_out), "--out", str(report_csv)]) == 0
    capsys.readouterr()
    assert report_csv.read_bytes() == (batch_out / "batch.csv").read_bytes()


def test_report_requires_a_source(tmp_path, capsys):
    code = main(["report", "--out", str(tmp_path / "r.csv")])
    captured = capsys.readouterr()
    assert code == 1
    assert "provide --assessments or --data-dir" in captured.err


def test_runtime_errors_exit_1(tmp_path, capsys):
    code = main(["analyze", "--doc", str(tmp_path / "missing.json"), "--models", str(tmp_path)])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err.startswith("error:")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "10"])  # --out missing
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_parser_covers_all_subcommands():
    parser = build_parser()
    actions = {
        a.dest: a for a in parser._subparsers._group_actions  # noqa: SLF001 (introspection)
    }
    choices = actions["command"].choices
    assert set(choices) == {"generate", "train", "analyze", "batch", "evaluate", "report", "serve"}
