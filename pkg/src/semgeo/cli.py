"""Command line front end: embed, project, diagnose, compare, serve.

Exit codes follow one convention across subcommands: 0 success, 1 for
runtime failures (provider errors, compute errors, unreadable docs),
2 for argument problems (missing files, bad method or parameter names,
mismatched inputs).  Diagnostics go to standard error; results and
tables go to standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cache import EmbeddingCache
from .errors import (DatasetError, GeometryError, ProviderError, SemgeoError,
                     UnimplementedMethod)
from .pipeline import (compute_doc, diagnose_doc, load_provider_config,
                       provider_from_dict, resolve_dataset)
from .projdoc import ProjectionDoc, load_doc, save_doc
from .providers import ProviderConfig, fetch_embeddings

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_param(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise argparse.ArgumentTypeError(
            f"--param wants key=value, got {text!r}")
    raw = raw.strip()
    try:
        return key, int(raw)
    except ValueError:
        pass
    try:
        return key, float(raw)
    except ValueError:
        return key, raw


def _provider(args) -> ProviderConfig:
    if getattr(args, "provider_config", None):
        return load_provider_config(args.provider_config)
    return ProviderConfig.mock()


# -- embed --------------------------------------------------------------


def cmd_embed(args) -> int:
    try:
        ds = resolve_dataset(args.dataset)
        cfg = _provider(args)
    except (OSError, ValueError, DatasetError) as exc:
        _err(f"semgeo embed: {exc}")
        return EXIT_USAGE
    cache = EmbeddingCache(args.cache_dir)
    try:
        m = fetch_embeddings(cfg, ds.items, cache=cache)
    except ProviderError as exc:
        _err(f"semgeo embed: {exc}")
        return EXIT_FAILURE
    # fetch_embeddings fills the cache only on network fetches; this
    # command's contract is a populated cache for every item, so write
    # the rows back unconditionally (mock rows included)
    for it, row in zip(ds.items, m.values):
        cache.put(cfg.model_id, it.text, row)
    print(f"{m.rows} x {m.dim} embeddings for dataset {ds.id!r} "
          f"(model {cfg.model_id!r}), cache at {args.cache_dir}")
    return EXIT_OK


# -- project ------------------------------------------------------------


def cmd_project(args) -> int:
    try:
        ds = resolve_dataset(args.dataset)
        cfg = _provider(args)
    except (OSError, ValueError, DatasetError) as exc:
        _err(f"semgeo project: {exc}")
        return EXIT_USAGE
    params = dict(args.param or [])
    cache = EmbeddingCache(args.cache_dir) if args.cache_dir else None
    try:
        doc = compute_doc(ds, cfg, method=args.method, params=params,
                          out_dims=args.dims, seed=args.seed, cache=cache)
    except UnimplementedMethod as exc:
        _err(f"semgeo project: {exc}")
        return EXIT_USAGE
    except ValueError as exc:
        _err(f"semgeo project: {exc}")
        return EXIT_USAGE
    except ProviderError as exc:
        _err(f"semgeo project: {exc}")
        return EXIT_FAILURE
    except (GeometryError, SemgeoError, FloatingPointError) as exc:
        _err(f"semgeo project: {exc}")
        return EXIT_FAILURE
    if args.out:
        save_doc(doc, args.out)
        print(f"wrote {args.out} ({doc.id})")
    else:
        print(doc.to_json())
    return EXIT_OK


# -- diagnose -----------------------------------------------------------


def _fmt_value(v: float) -> str:
    return f"{v:12.6f}"


def report_table(diag: dict) -> str:
    """Fixed-width rendering of a diagnostics block."""
    width = 28
    lines = [f"{'metric':<{width}}{'value':>12}",
             "-" * (width + 12)]
    for name in sorted(diag.get("scores", {})):
        lines.append(f"{name:<{width}}{_fmt_value(diag['scores'][name])}")
    for name, value in sorted(diag.get("per_category", {}).items()):
        lines.append(f"{name:<{width}}{_fmt_value(value)}")
    flags = diag.get("flags", {})
    if flags:
        lines.append("")
        lines.append(f"{'flag':<{width}}{'state':>12}")
        lines.append("-" * (width + 12))
        for name in sorted(flags):
            state = "yes" if flags[name] else "no"
            lines.append(f"{name:<{width}}{state:>12}")
    skipped = diag.get("skipped", {})
    if skipped:
        lines.append("")
        lines.append("skipped:")
        for name in sorted(skipped):
            lines.append(f"  {name}: {skipped[name]}")
    return "\n".join(lines)


def cmd_diagnose(args) -> int:
    try:
        doc = load_doc(args.doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _err(f"semgeo diagnose: cannot read {args.doc}: {exc}")
        return EXIT_FAILURE
    try:
        updated = diagnose_doc(doc)
    except (SemgeoError, ValueError) as exc:
        _err(f"semgeo diagnose: {exc}")
        return EXIT_FAILURE
    save_doc(updated, args.doc)
    print(report_table(updated.diagnostics))
    return EXIT_OK


# -- compare ------------------------------------------------------------


def _doc_diag(doc: ProjectionDoc) -> dict:
    if doc.diagnostics is not None:
        return doc.diagnostics
    return diagnose_doc(doc).diagnostics


def compare_docs(docs: list[ProjectionDoc]) -> dict:
    """Comparison payload: one row per doc, columns = union of scores."""
    rows = []
    for doc in docs:
        diag = _doc_diag(doc)
        rows.append({
            "id": doc.id,
            "method": doc.method,
            "model_id": doc.model_id,
            "seed": doc.seed,
            "scores": diag.get("scores", {}),
            "flags": diag.get("flags", {}),
        })
    metrics = sorted({m for r in rows for m in r["scores"]})
    return {"dataset_id": docs[0].dataset_id, "metrics": metrics,
            "rows": rows}


def compare_table(payload: dict) -> str:
    metrics = payload["metrics"]
    head = ["doc", "method", "model"] + metrics
    body = []
    for r in payload["rows"]:
        cells = [r["id"][:10], r["method"], r["model_id"]]
        for m in metrics:
            v = r["scores"].get(m)
            cells.append("-" if v is None else f"{v:.4f}")
        body.append(cells)
    widths = [max(len(head[i]), *(len(row[i]) for row in body)) if body
              else len(head[i]) for i in range(len(head))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*head), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*row) for row in body]
    return "\n".join(lines)


def cmd_compare(args) -> int:
    docs = []
    for path in args.docs:
        try:
            docs.append(load_doc(path))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            _err(f"semgeo compare: cannot read {path}: {exc}")
            return EXIT_USAGE
    dataset_ids = sorted({d.dataset_id for d in docs})
    if len(dataset_ids) > 1:
        _err("semgeo compare: docs cover different datasets: "
             + ", ".join(dataset_ids))
        return EXIT_USAGE
    try:
        payload = compare_docs(docs)
    except (SemgeoError, ValueError) as exc:
        _err(f"semgeo compare: {exc}")
        return EXIT_FAILURE
    print(compare_table(payload))
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"\nwrote {args.out}")
    else:
        print()
        print(text)
    return EXIT_OK


# -- serve --------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cache_dir=args.cache_dir)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semgeo",
        description="Embed lexicons, project them to 2-D/3-D, and score "
                    "the resulting geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_provider(p):
        p.add_argument("--provider-config", metavar="PATH",
                       help="JSON provider settings; omitted = built-in "
                            "mock provider")

    p = sub.add_parser("embed", help="fetch embeddings into the cache")
    p.add_argument("--dataset", required=True,
                   help="dataset file path or bundled dataset id")
    add_provider(p)
    p.add_argument("--cache-dir", required=True, metavar="DIR")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("project", help="compute a projection document")
    p.add_argument("--dataset", required=True,
                   help="dataset file path or bundled dataset id")
    add_provider(p)
    p.add_argument("--method", default="phate")
    p.add_argument("--param", action="append", type=_parse_param,
                   metavar="KEY=VALUE", help="method parameter (repeatable)")
    p.add_argument("--dims", type=int, choices=(2, 3), default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH",
                   help="output JSON path; omitted = print to stdout")
    p.add_argument("--cache-dir", metavar="DIR",
                   help="embedding cache to consult and fill")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("diagnose",
                       help="score a projection document in place")
    p.add_argument("doc", help="projection document JSON path")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("compare",
                       help="tabulate diagnostics across documents")
    p.add_argument("docs", nargs="+", help="projection document paths")
    p.add_argument("--out", metavar="PATH", help="write the JSON here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cache-dir", metavar="DIR",
                   help="root for the embedding cache and memo store")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
