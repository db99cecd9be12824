"""Command line entry points: generate, train, analyze, batch, evaluate,
report, serve.

Every file-producing run writes a run manifest next to its outputs with the
seeds, input paths, model checksums, and per-document timing needed to
reproduce it. Commands that print to stdout embed the manifest in the printed
JSON instead.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .aggregate import assessment_from_dict, rank_documents
from .corpusio import read_corpus, read_documents, write_corpus
from .errors import SoaGuardError
from .kris import load_policy
from .metrics import evaluate_corpus
from .model import parse_document
from .pipeline import (
    analysis_to_dict,
    analyze_document,
    load_models,
    model_checksums,
    save_models,
    train_models,
)
from .report import export_csv
from .store import DocumentStore
from .synth import generate_corpus
from .tables import load_taxonomy


def _manifest(command: str, args: argparse.Namespace, **extra) -> dict:
    manifest = {
        "package_version": __version__,
        "command": command,
        "started_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "arguments": {
            k: str(v) if isinstance(v, Path) else v
            for k, v in sorted(vars(args).items())
            if k != "func" and v is not None
        },
    }
    manifest.update(extra)
    return manifest


def _write_manifest(directory: Path, manifest: dict) -> None:
    path = directory / "run_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_policy_arg(args: argparse.Namespace):
    return load_policy(args.policy) if getattr(args, "policy", None) else load_policy()


def _strip_timing(analysis: dict) -> dict:
    # File outputs must be byte-reproducible from the manifest inputs; wall
    # clock goes in the manifest and the printed timing line instead.
    return {k: v for k, v in analysis.items() if k != "elapsed_ms"}


def cmd_generate(args: argparse.Namespace) -> int:
    corpus = generate_corpus(args.n, seed=args.seed, noise=args.noise)
    out = Path(args.out)
    written = write_corpus(corpus, out)
    _write_manifest(
        out,
        _manifest(
            "generate",
            args,
            outputs=[p.name for p in written],
            document_count=len(corpus),
        ),
    )
    print(f"wrote {len(corpus)} documents and sidecars to {out}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    corpus = read_corpus(args.corpus)
    if not corpus:
        raise SoaGuardError(f"no documents with truth sidecars under {args.corpus}")
    started = time.perf_counter()
    bundle = train_models(corpus, seed=args.seed)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    out = Path(args.out)
    save_models(bundle, out)
    _write_manifest(
        out,
        _manifest(
            "train",
            args,
            model_checksums=model_checksums(bundle),
            held_out_accuracy=bundle.metrics(),
            train_documents=len(corpus),
            total_ms=round(elapsed_ms, 3),
        ),
    )
    for task, accuracy in bundle.metrics().items():
        print(f"{task}: held-out accuracy {accuracy:.4f}")
    print(f"saved 5 models to {out}")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    doc = parse_document(Path(args.doc).read_text(encoding="utf-8"))
    bundle = load_models(args.models)
    policy = _load_policy_arg(args)
    result = analyze_document(doc, bundle, policy=policy, taxonomy=load_taxonomy())
    analysis = analysis_to_dict(result)
    manifest = _manifest(
        "analyze",
        args,
        model_checksums=model_checksums(bundle),
        policy_hash=policy.policy_hash,
        per_document_ms={doc.id: round(result.elapsed_ms, 3)},
    )
    timing_line = (
        f"analyzed {doc.id} in {result.elapsed_ms:.1f} ms "
        f"(overall {result.assessment.overall.value})"
    )
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(
            json.dumps(_strip_timing(analysis), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        _write_manifest(out.parent, manifest)
        print(timing_line)
    else:
        analysis["run_manifest"] = manifest
        print(json.dumps(analysis, indent=2, sort_keys=True))
        print(timing_line, file=sys.stderr)
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    docs = read_documents(args.corpus)
    if not docs:
        raise SoaGuardError(f"no documents under {args.corpus}")
    bundle = load_models(args.models)
    policy = _load_policy_arg(args)
    taxonomy = load_taxonomy()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    store = DocumentStore(args.data_dir) if args.data_dir else None

    def work(doc):
        return analyze_document(doc, bundle, policy=policy, taxonomy=taxonomy)

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(work, docs))
    total_ms = (time.perf_counter() - started) * 1000.0

    timings = {}
    assessments = []
    for doc, result in zip(docs, results):
        analysis = analysis_to_dict(result)
        (out / f"{doc.id}.assessment.json").write_text(
            json.dumps(_strip_timing(analysis), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        timings[doc.id] = round(result.elapsed_ms, 3)
        assessments.append(result.assessment)
        if store is not None:
            store.put_document(doc)
            store.put_analysis(doc.id, analysis)
        print(f"{doc.id}: {result.assessment.overall.value} in {result.elapsed_ms:.1f} ms")
    (out / "batch.csv").write_text(export_csv(assessments), encoding="utf-8")
    _write_manifest(
        out,
        _manifest(
            "batch",
            args,
            model_checksums=model_checksums(bundle),
            policy_hash=policy.policy_hash,
            per_document_ms=timings,
            total_ms=round(total_ms, 3),
            document_count=len(docs),
        ),
    )
    print(f"batch of {len(docs)} documents in {total_ms / 1000.0:.1f} s -> {out / 'batch.csv'}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    corpus = read_corpus(args.corpus)
    if not corpus:
        raise SoaGuardError(f"no documents with truth sidecars under {args.corpus}")
    bundle = load_models(args.models)
    policy = _load_policy_arg(args)
    report = evaluate_corpus(bundle, corpus, policy=policy, taxonomy=load_taxonomy())
    payload = report.to_dict()
    manifest = _manifest(
        "evaluate",
        args,
        model_checksums=model_checksums(bundle),
        policy_hash=policy.policy_hash,
        document_count=report.n_documents,
    )
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        _write_manifest(out.parent, manifest)
        print(f"evaluated {report.n_documents} documents -> {out}")
    else:
        payload["run_manifest"] = manifest
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    if not args.data_dir and not args.assessments:
        raise SoaGuardError("provide --assessments or --data-dir")
    assessments = []
    if args.data_dir:
        store = DocumentStore(args.data_dir)
        for document_id in store.list_ids():
            analysis = store.get_analysis(document_id)
            if analysis is not None:
                assessments.append(assessment_from_dict(analysis["assessment"]))
    else:
        directory = Path(args.assessments)
        for path in sorted(directory.glob("*.assessment.json")):
            data = json.loads(path.read_text(encoding="utf-8"))
            assessments.append(assessment_from_dict(data["assessment"]))
    if not assessments:
        raise SoaGuardError("no assessments found to report on")
    csv_text = export_csv(assessments)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text, encoding="utf-8")
    _write_manifest(
        out.parent,
        _manifest("report", args, document_count=len(assessments), outputs=[out.name]),
    )
    worst = rank_documents(assessments)[0]
    print(f"wrote {len(assessments)} rows to {out}; highest risk: {worst.document_id}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    bundle = load_models(args.models) if args.models else None
    app = create_app(
        store=DocumentStore(args.data_dir) if args.data_dir else DocumentStore(),
        bundle=bundle,
        policy=_load_policy_arg(args),
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soaguard", description="Advice-document risk rating toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a labeled synthetic corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train the five classifiers from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("analyze", help="rate one document")
    p.add_argument("--doc", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--policy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("batch", help="rate a corpus directory and export CSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--policy")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--data-dir", dest="data_dir")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("evaluate", help="score the pipeline against truth sidecars")
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--policy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="export the assessment CSV")
    p.add_argument("--assessments", help="directory of *.assessment.json files")
    p.add_argument("--data-dir", dest="data_dir", help="document store root")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP review service")
    p.add_argument("--models")
    p.add_argument("--policy")
    p.add_argument("--data-dir", dest="data_dir")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SoaGuardError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
