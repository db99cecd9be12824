"""End-to-end training and document analysis on the trained bundle."""

import json

import pytest

from soaguard.kris import load_policy
from soaguard.model import enumerate_units
from soaguard.pipeline import (
    MODEL_FILES,
    analysis_to_dict,
    analyze_document,
    collect_examples,
    label_document,
    load_models,
    model_checksums,
    save_models,
)
from soaguard.ratings import KRI_IDS
from soaguard.synth import generate_document, CorpusProfile


def test_collect_examples_covers_every_unit(small_corpus):
    text_examples, table_examples = collect_examples(small_corpus)
    n_sentences = sum(
        1 for doc, _ in small_corpus for u in enumerate_units(doc) if u.kind == "sentence"
    )
    n_tables = sum(
        1 for doc, _ in small_corpus for u in enumerate_units(doc) if u.kind == "table"
    )
    assert len(text_examples["goal_rec"]) == n_sentences
    assert len(text_examples["position"]) == n_sentences
    assert len(text_examples["insurance"]) == n_sentences
    # balance_mention also judges table units from their flattened text.
    assert len(text_examples["balance_mention"]) == n_sentences + n_tables
    assert len(table_examples) == n_tables


def test_trained_bundle_reports_held_out_accuracy(bundle):
    metrics = bundle.metrics()
    assert set(metrics) == {"goal_rec", "position", "balance_mention", "insurance", "table"}
    for task, accuracy in metrics.items():
        assert accuracy >= 0.9, task


def test_save_load_round_trip_predicts_identically(tmp_path, bundle, eval_corpus):
    save_models(bundle, tmp_path)
    for _, filename in MODEL_FILES:
        assert (tmp_path / filename).exists()
    loaded = load_models(tmp_path)
    assert model_checksums(loaded) == model_checksums(bundle)
    for doc, _ in eval_corpus[:5]:
        assert label_document(doc, loaded) == label_document(doc, bundle)


def test_label_document_covers_all_tasks(bundle, eval_corpus):
    doc, _ = eval_corpus[0]
    labels = label_document(doc, bundle)
    sentence_ids = {u.unit_id for u in enumerate_units(doc) if u.kind == "sentence"}
    table_ids = {u.unit_id for u in enumerate_units(doc) if u.kind == "table"}
    assert set(labels.unit_labels["goal_rec"]) == sentence_ids
    assert set(labels.unit_labels["balance_mention"]) == sentence_ids | table_ids
    assert set(labels.table_types) == table_ids


def test_analyze_document_produces_six_kris(bundle, eval_corpus):
    doc, _ = eval_corpus[0]
    analysis = analyze_document(doc, bundle)
    assert tuple(r.kri_id for r in analysis.kri_results) == KRI_IDS
    assert analysis.assessment.document_id == doc.id
    assert analysis.elapsed_ms > 0
    assert analysis.assessment.policy_hash == load_policy().policy_hash


def test_analysis_dict_is_json_ready(bundle, eval_corpus):
    doc, _ = eval_corpus[1]
    data = analysis_to_dict(analyze_document(doc, bundle))
    assert set(data) == {"assessment", "kri_results", "advice_map", "elapsed_ms"}
    encoded = json.dumps(data)
    decoded = json.loads(encoded)
    assert decoded["assessment"]["document_id"] == doc.id
    assert {r["kri_id"] for r in decoded["kri_results"]} == set(KRI_IDS)
    for link in decoded["advice_map"]["links"]:
        assert set(link) == {"goal_id", "recommendation_id", "confidence"}


def test_analysis_agrees_with_truth_on_a_clean_document(bundle):
    profile = CorpusProfile(name="spotcheck")
    doc, truth = generate_document(profile, seed=12345)
    analysis = analyze_document(doc, bundle)
    got = {r.kri_id: r.rating.value for r in analysis.kri_results}
    assert got == truth.intended_kri
    assert analysis.assessment.overall.value == truth.intended_overall


def test_load_models_rejects_a_missing_file(tmp_path, bundle):
    save_models(bundle, tmp_path)
    (tmp_path / "insurance.json").unlink()
    with pytest.raises(FileNotFoundError):
        load_models(tmp_path)
