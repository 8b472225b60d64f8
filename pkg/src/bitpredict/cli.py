"""Command-line interface.

Subcommands:
  generate   synthesize corpora from a noisy-regression rule
  analyze    bias / autocorrelation / collision statistics of a corpus
  train      fit one predictor on a window and write a JSON checkpoint
  evaluate   run one experiment spec against a corpus
  sweep      run a grid of experiment specs, emit reports and tables
  serve      start the human-vs-predictor game service

Spec and grid files are JSON; see README for the schema.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines, harness, qtrain
from .bitstream import (
    Bitstream,
    DGram,
    SyntheticRule,
    autocorrelation,
    collision_frequency,
    read_corpus,
    synthesize,
    write_corpus,
    zero_bias,
)
from .predictors import PredictorSpec, build


def _parse_bits(text: str) -> tuple[int, ...]:
    parts = text.replace(",", " ").split()
    if len(parts) == 1 and len(parts[0]) > 1:
        parts = list(parts[0])
    return tuple(int(p) for p in parts)


def cmd_generate(args) -> int:
    coeffs = _parse_bits(args.coefficients)
    seed_bits = _parse_bits(args.seed_bits) if args.seed_bits else (0,) * len(coeffs)
    rule = SyntheticRule(coeffs, seed_bits, args.flip)
    rng = np.random.default_rng(args.seed)
    streams = [
        synthesize(rule, args.length, rng, stream_id=f"synthetic-{i:04d}")
        for i in range(args.count)
    ]
    write_corpus(streams, args.out)
    print(f"wrote {len(streams)} streams of length {args.length} to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    corpus = read_corpus(args.corpus)
    if not corpus:
        print("empty corpus")
        return 1
    for stream in corpus:
        line = f"{stream.id}: n={len(stream)} f0={zero_bias(stream):.3f}"
        max_lag = min(args.max_lag, len(stream) - 2)
        if max_lag >= 1:
            taps = autocorrelation(stream, max_lag)
            shown = " ".join(
                "-" if a is None else f"{a:.3f}" for a in taps[: args.show_taps]
            )
            line += f" a[1..{args.show_taps}]={shown}"
        if args.depth:
            values = []
            for gram_bits in _all_grams(args.depth):
                cp = collision_frequency(DGram(gram_bits), stream.bits)
                if cp is not None:
                    values.append(cp)
            if values:
                line += f" mean_cp(d={args.depth})={float(np.mean(values)):.3f}"
        print(line)
    return 0


def _all_grams(depth: int):
    for index in range(2**depth):
        yield tuple((index >> (depth - 1 - s)) & 1 for s in range(depth))


def cmd_train(args) -> int:
    corpus = read_corpus(args.corpus)
    by_id = {s.id: s for s in corpus}
    stream = by_id.get(args.stream) if args.stream else corpus[0]
    if stream is None:
        print(f"stream {args.stream!r} not found", file=sys.stderr)
        return 1
    window = stream.bits[args.offset : args.offset + args.width]
    if len(window) < args.width:
        print("window does not fit inside the stream", file=sys.stderr)
        return 1
    spec = PredictorSpec.from_dict(json.loads(Path(args.predictor).read_text()))
    predictor = build(spec, args.depth)
    predictor.fit(window, np.random.default_rng(args.seed))
    checkpoint = _checkpoint(spec, predictor)
    Path(args.out).write_text(json.dumps(checkpoint, sort_keys=True, indent=2))
    print(f"checkpoint written to {args.out}")
    return 0


def _checkpoint(spec: PredictorSpec, predictor) -> dict:
    if spec.kind == "quantum":
        return {"spec": spec.to_dict(), "model": qtrain.model_to_dict(predictor.model)}
    if spec.kind == "oracle":
        return {"spec": spec.to_dict(), "model": baselines.oracle_to_dict(predictor.model)}
    if spec.kind == "logistic":
        return {"spec": spec.to_dict(), "model": baselines.logistic_to_dict(predictor.model)}
    return {"spec": spec.to_dict(), "model": baselines.mlp_to_dict(predictor.model)}


def _load_experiment(path: str) -> harness.ExperimentSpec:
    return harness.ExperimentSpec.from_dict(json.loads(Path(path).read_text()))


def cmd_evaluate(args) -> int:
    corpus = read_corpus(args.corpus)
    spec = _load_experiment(args.spec)
    report = harness.run_experiment(spec, corpus)
    print(harness.format_table([report]))
    if args.out_json:
        Path(args.out_json).write_text(harness.reports_to_json([report]))
    if args.out_csv:
        Path(args.out_csv).write_text(harness.reports_to_csv([report]))
    return 0


def cmd_sweep(args) -> int:
    corpus = read_corpus(args.corpus)
    grid = [
        harness.ExperimentSpec.from_dict(entry)
        for entry in json.loads(Path(args.grid).read_text())
    ]
    reports = harness.run_sweep(grid, corpus, parallelism=args.parallelism)
    labels = sorted({r.spec.table_label for r in reports})
    tables = []
    for label in labels:
        subset = [r for r in reports if r.spec.table_label == label]
        tables.append(harness.format_table(subset, label))
    combined = "\n".join(tables)
    print(combined, end="")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "reports.json").write_text(harness.reports_to_json(reports))
        (out / "reports.csv").write_text(harness.reports_to_csv(reports))
        (out / "tables.txt").write_text(combined)
        print(f"reports written to {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bitpredict", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthesize a corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--length", type=int, default=1000)
    p.add_argument("--coefficients", default="0,0,1", help="rule taps, e.g. 1,0,1")
    p.add_argument("--seed-bits", default="", help="initial bits, defaults to zeros")
    p.add_argument("--flip", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="descriptive statistics of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--max-lag", type=int, default=36)
    p.add_argument("--show-taps", type=int, default=8)
    p.add_argument("--depth", type=int, default=0, help="also report collision stats")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("train", help="train one predictor, write a checkpoint")
    p.add_argument("--corpus", required=True)
    p.add_argument("--stream", default="")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--width", type=int, default=125)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--predictor", required=True, help="JSON predictor spec file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="run one experiment spec")
    p.add_argument("--corpus", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--out-json", default="")
    p.add_argument("--out-csv", default="")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="run a grid of experiments")
    p.add_argument("--corpus", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--out-dir", default="")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="start the game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None, help="directory with the built web UI")
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
