#!/usr/bin/env python3
"""Negative-sampling run on a multi-megabyte corpus slice, followed by the
correlation protocol over the stock probe words.

By default a deterministic synthetic corpus of about 5.5 MB is generated
(and cached) under data/generated/.  Point --corpus at a real text file,
or set SGLAB_CORPUS, to use your own data; --max-bytes trims it.

Usage:
    python3 scripts/run_slice_experiment.py [--epochs 3] [--k 5] [--c 3]
            [--dim 128] [--threads 1] [--top-n 2000] [--out-dir runs/slice]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from sglab.analysis import DEFAULT_PROBE_WORDS, correlation, emit_report
from sglab.cooccur import count_cooccurrences
from sglab.corpus import build_vocab, encode, tokenize_file
from sglab.sgns import SgnsConfig, train_sgns
from sglab.synthetic import ensure_slice_corpus

REPO = Path(__file__).resolve().parent.parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default=None)
    ap.add_argument("--max-bytes", type=int, default=None)
    ap.add_argument("--min-count", type=int, default=5)
    ap.add_argument("--epochs", type=int, default=3)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--c", type=int, default=3)
    ap.add_argument("--dim", type=int, default=128)
    ap.add_argument("--lr", type=float, default=0.025)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--top-n", type=int, default=2000)
    ap.add_argument("--out-dir", default=None)
    args = ap.parse_args()

    if args.corpus:
        corpus_path = Path(args.corpus)
    else:
        corpus_path = ensure_slice_corpus(REPO / "data" / "generated" / "slice.txt")
    print(f"corpus: {corpus_path} "
          f"({corpus_path.stat().st_size / 1e6:.2f} MB)")

    tokens = tokenize_file(corpus_path, max_bytes=args.max_bytes)
    vocab = build_vocab(tokens, min_count=args.min_count)
    ids = encode(tokens, vocab)
    print(f"{len(tokens)} tokens, {len(vocab)} word types kept "
          f"(min count {args.min_count})")

    cfg = SgnsConfig(negatives=args.k, learning_rate=args.lr,
                     epochs=args.epochs, radius=args.c, dim=args.dim,
                     seed=args.seed)
    started = time.perf_counter()
    emb = train_sgns(ids, cfg, num_words=len(vocab), threads=args.threads)
    print(f"trained in {time.perf_counter() - started:.1f}s "
          f"(k={args.k}, c={args.c}, dim={args.dim}, "
          f"epochs={args.epochs}, threads={args.threads})")

    table = count_cooccurrences(ids, args.c, num_words=len(vocab))
    top_n = min(args.top_n, len(vocab))
    present = [w for w in DEFAULT_PROBE_WORDS if w in vocab]
    missing = [w for w in DEFAULT_PROBE_WORDS if w not in vocab]
    if missing:
        print(f"probes not in vocabulary, skipped: {', '.join(missing)}")
    results = [correlation(emb, table, vocab, word, n=top_n)
               for word in present]

    print(f"\ncounted-vs-model correlation over the top {top_n} words")
    print(f"{'word':<12} {'corr':>7} {'slope':>8} {'intercept':>10}")
    for r in results:
        print(f"{r.probe_word:<12} {r.corr:>7.3f} {r.slope:>8.3f} "
              f"{r.intercept:>10.4f}")
    corrs = np.array([r.corr for r in results])
    print(f"\n{(corrs > 0).sum()}/{len(results)} positive, "
          f"mean {corrs.mean():.3f}, min {corrs.min():.3f}, "
          f"max {corrs.max():.3f}")

    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_report(results, out / "correlation.tsv")
        print(f"artifacts -> {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
