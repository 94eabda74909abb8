"""Command-line pipeline: build-vocab, count, train, validate.

Settings resolve in three layers: built-in defaults, then a key=value
config file (--config), then explicit flags.  The fully resolved config
lands in a JSON manifest next to each command's artifacts, so a run can
be repeated from its manifest alone.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .analysis import (
    DEFAULT_PROBE_WORDS,
    correlation,
    emit_profile,
    emit_report,
    optimal_E,
    optimality_report,
)
from .cooccur import count_cooccurrences, save_cooccur_tsv
from .corpus import Vocabulary, build_vocab, encode, tokenize_file
from .embeddings import load_embeddings, save_embeddings
from .errors import SglabError, TrainingDivergedError
from .exact import TrainConfig, train_exact
from .manifest import RunManifest, sha256_file, write_manifest
from .sgns import SgnsConfig, train_sgns
from .softmax import average_log_prob_grouped


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this project reserves 2
    for data errors, so usage problems are rerouted to exit code 1."""

    def error(self, message):
        raise UsageError(message)


def _opt_int(text):
    return None if text in (None, "", "none") else int(text)


def _opt_float(text):
    return None if text in (None, "", "none") else float(text)


def parse_config_file(path: str | Path) -> dict:
    """Flat key = value lines; # comments and blank lines are skipped.

    Section headers like [train] are tolerated and ignored so simple TOML
    files can be reused as-is.
    """
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        if "=" not in line:
            raise UsageError(f"config line is not key=value: {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip().strip("\"'")
    return values


def _resolve(args, schema: dict) -> dict:
    """defaults < config file < flags, with string coercion for the file."""
    cfg = {key: default for key, (default, _) in schema.items()}
    if getattr(args, "config", None):
        file_values = parse_config_file(args.config)
        for key, val in file_values.items():
            if key not in schema:
                raise UsageError(f"unknown config key: {key!r}")
            cfg[key] = schema[key][1](val)
    for key in schema:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    return cfg


def _read_corpus(path: str, max_bytes: int | None):
    if not Path(path).is_file():
        raise FileNotFoundError(f"corpus file does not exist: {path}")
    return tokenize_file(path, max_bytes=max_bytes)


def _finish(command, cfg, inputs, seed, artifacts, started) -> None:
    manifest = RunManifest(
        command=command,
        config={k: (str(v) if isinstance(v, Path) else v) for k, v in cfg.items()},
        input_digests={str(p): sha256_file(p) for p in inputs},
        seed=seed,
        artifacts=[str(a) for a in artifacts],
        duration_seconds=round(time.time() - started, 3),
    )
    write_manifest(manifest, str(artifacts[0]) + ".manifest.json")


# ---------------------------------------------------------------------------
# subcommands


_VOCAB_SCHEMA = {
    "min_count": (1, int),
    "max_bytes": (None, _opt_int),
}


def cmd_build_vocab(args) -> int:
    started = time.time()
    cfg = _resolve(args, _VOCAB_SCHEMA)
    if cfg["min_count"] < 1:
        raise UsageError("--min-count must be >= 1")
    tokens = _read_corpus(args.corpus, cfg["max_bytes"])
    vocab = build_vocab(tokens, min_count=cfg["min_count"])
    if len(vocab) == 0:
        print("warning: corpus produced an empty vocabulary", file=sys.stderr)
    out = Path(args.out or Path(args.corpus).stem + ".vocab.tsv")
    vocab.save_tsv(out)
    print(f"{len(vocab)} words -> {out}")
    _finish("build-vocab", cfg, [args.corpus], None, [out], started)
    return 0


_COUNT_SCHEMA = {
    "radius": (2, int),
    "max_bytes": (None, _opt_int),
}


def cmd_count(args) -> int:
    started = time.time()
    cfg = _resolve(args, _COUNT_SCHEMA)
    if cfg["radius"] < 1:
        raise UsageError("--c must be >= 1")
    tokens = _read_corpus(args.corpus, cfg["max_bytes"])
    if not Path(args.vocab).is_file():
        raise FileNotFoundError(f"vocabulary file does not exist: {args.vocab}")
    vocab = Vocabulary.load_tsv(args.vocab)
    ids = encode(tokens, vocab)
    table = count_cooccurrences(ids, cfg["radius"], num_words=len(vocab))
    out = Path(args.out or Path(args.corpus).stem + ".cooccur.tsv")
    save_cooccur_tsv(table, vocab, out)
    print(f"{table.pair_counts.nnz} pairs -> {out}")
    _finish("count", cfg, [args.corpus, args.vocab], None, [out], started)
    return 0


_TRAIN_SCHEMA = {
    "radius": (None, _opt_int),       # per-mode default filled in below
    "epochs": (None, _opt_int),
    "dim": (None, _opt_int),
    "lr": (None, _opt_float),
    "seed": (0, int),
    "min_count": (1, int),
    "max_bytes": (None, _opt_int),
    "k": (5, int),
    "subsample": (None, _opt_float),
    "threads": (None, _opt_int),
    "update": ("full_batch", str),
    "lr_schedule": ("linear_decay", str),
}

_EXACT_DEFAULTS = {"radius": 2, "epochs": 500, "dim": 16, "lr": 0.3}
_SGNS_DEFAULTS = {"radius": 5, "epochs": 1, "dim": 128, "lr": 0.025}


def cmd_train(args) -> int:
    started = time.time()
    cfg = _resolve(args, _TRAIN_SCHEMA)
    if args.mode == "exact":
        for flag, name in ((args.k, "--k"), (args.subsample, "--subsample"),
                           (args.threads, "--threads")):
            if flag is not None:
                raise UsageError(f"{name} applies to sgns mode only")
    else:
        for flag, name in ((args.update, "--update"),
                           (args.lr_schedule, "--lr-schedule")):
            if flag is not None:
                raise UsageError(f"{name} applies to exact mode only")
    mode_defaults = _EXACT_DEFAULTS if args.mode == "exact" else _SGNS_DEFAULTS
    for key, value in mode_defaults.items():
        if cfg[key] is None:
            cfg[key] = value
    if cfg["threads"] is None:
        cfg["threads"] = int(os.environ.get("SGLAB_THREADS", "1"))

    tokens = _read_corpus(args.corpus, cfg["max_bytes"])
    vocab = build_vocab(tokens, min_count=cfg["min_count"])
    if len(vocab) == 0:
        raise ValueError("corpus produced an empty vocabulary, nothing to train")
    ids = encode(tokens, vocab)
    base = Path(args.out or Path(args.corpus).stem)
    log_path = Path(args.log or str(base) + ".log.csv")

    if args.mode == "exact":
        train_cfg = TrainConfig(
            learning_rate=cfg["lr"], epochs=cfg["epochs"], radius=cfg["radius"],
            dim=cfg["dim"], seed=cfg["seed"], mode=cfg["update"],
            lr_schedule=cfg["lr_schedule"],
        )
        emb = train_exact(ids, train_cfg, num_words=len(vocab),
                          log_path=log_path)
    else:
        train_cfg = SgnsConfig(
            negatives=cfg["k"], learning_rate=cfg["lr"], epochs=cfg["epochs"],
            radius=cfg["radius"], dim=cfg["dim"], seed=cfg["seed"],
            subsample_threshold=cfg["subsample"],
        )
        emb = train_sgns(ids, train_cfg, num_words=len(vocab),
                         log_path=log_path, threads=cfg["threads"])

    vocab_path = Path(str(base) + ".vocab.tsv")
    vocab.save_tsv(vocab_path)
    in_path, out_path = save_embeddings(emb, vocab.words, base)
    print(f"trained {args.mode}: {len(vocab)} words, dim {cfg['dim']} -> {in_path}")
    _finish(f"train-{args.mode}", cfg, [args.corpus], cfg["seed"],
            [in_path, out_path, vocab_path, log_path], started)
    return 0


_VALIDATE_SCHEMA = {
    "radius": (2, int),
    "top_n": (None, _opt_int),
    "prob_mode": ("full_window", str),
    "max_bytes": (None, _opt_int),
}


def cmd_validate(args) -> int:
    started = time.time()
    cfg = _resolve(args, _VALIDATE_SCHEMA)
    if cfg["radius"] < 1:
        raise UsageError("--c must be >= 1")
    if cfg["prob_mode"] not in ("full_window", "actual"):
        raise UsageError("--prob-mode must be full_window or actual")
    vec_words, emb = load_embeddings(args.embeddings)
    vocab_path = Path(args.vocab or args.embeddings + ".vocab.tsv")
    if not vocab_path.is_file():
        raise FileNotFoundError(f"vocabulary file does not exist: {vocab_path}")
    vocab = Vocabulary.load_tsv(vocab_path)
    if len(vocab) != emb.num_words:
        raise ValueError(
            f"vocabulary has {len(vocab)} words but embeddings have "
            f"{emb.num_words} rows"
        )
    if vec_words != vocab.words:
        raise ValueError(
            "embedding files and vocabulary list different words; pass the "
            "vocabulary the embeddings were trained with via --vocab"
        )
    tokens = _read_corpus(args.corpus, cfg["max_bytes"])
    ids = encode(tokens, vocab)
    table = count_cooccurrences(ids, cfg["radius"], num_words=len(vocab))

    probes = args.probe or [w for w in DEFAULT_PROBE_WORDS if w in vocab]
    if not probes:
        raise ValueError("no probe words given and none of the defaults "
                         "are in the vocabulary")
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    artifacts = []
    if len(probes) == 1:
        report = optimality_report(emb, table, vocab, probes[0],
                                   mode=cfg["prob_mode"])
        table_path = out_dir / f"optimality_{probes[0]}.tsv"
        emit_report(report, table_path)
        profile_path = out_dir / f"profile_{probes[0]}.csv"
        emit_profile(report, profile_path)
        artifacts += [table_path, profile_path]
        print(f"probe {probes[0]}: max context deviation "
              f"{report.max_context_deviation:.4f}, max non-context "
              f"{report.max_noncontext_prob:.4f}")
    else:
        results = [
            correlation(emb, table, vocab, probe, n=cfg["top_n"],
                        mode=cfg["prob_mode"])
            for probe in probes
        ]
        corr_path = out_dir / "correlation.tsv"
        emit_report(results, corr_path)
        artifacts.append(corr_path)
        mean_corr = float(np.mean([r.corr for r in results]))
        print(f"{len(results)} probes, mean corr {mean_corr:.4f} -> {corr_path}")

    e_now = average_log_prob_grouped(emb, table)
    e_best = optimal_E(table)
    print(f"E = {e_now:.6f}, attainable optimum = {e_best:.6f}, "
          f"gap = {e_best - e_now:.6f}")
    _finish("validate", cfg, [args.corpus, vocab_path], None,
            artifacts, started)
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="sglab",
                     description="skip-gram training and validation lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-vocab", help="count word types in a corpus")
    p.add_argument("corpus")
    p.add_argument("--min-count", dest="min_count", type=int, default=None)
    p.add_argument("--max-bytes", dest="max_bytes", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(run=cmd_build_vocab)

    p = sub.add_parser("count", help="build a co-occurrence table")
    p.add_argument("corpus")
    p.add_argument("--vocab", required=True)
    p.add_argument("--c", dest="radius", type=int, default=None,
                   help="window radius")
    p.add_argument("--max-bytes", dest="max_bytes", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("train", help="train embeddings")
    p.add_argument("mode", choices=("exact", "sgns"))
    p.add_argument("corpus")
    p.add_argument("--c", dest="radius", type=int, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--min-count", dest="min_count", type=int, default=None)
    p.add_argument("--max-bytes", dest="max_bytes", type=int, default=None)
    p.add_argument("--k", type=int, default=None,
                   help="negative samples per slot (sgns only)")
    p.add_argument("--subsample", type=float, default=None,
                   help="frequent-word subsampling threshold (sgns only)")
    p.add_argument("--threads", type=int, default=None,
                   help="hogwild sweep threads (sgns only)")
    p.add_argument("--update", choices=("full_batch", "per_position"),
                   default=None, help="exact-mode update granularity")
    p.add_argument("--lr-schedule", dest="lr_schedule",
                   choices=("linear_decay", "constant"), default=None)
    p.add_argument("--out", default=None,
                   help="basename for .in.vec/.out.vec/.vocab.tsv")
    p.add_argument("--log", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(run=cmd_train)

    p = sub.add_parser("validate",
                       help="compare model probabilities against counts")
    p.add_argument("embeddings", help="basename used at training time")
    p.add_argument("corpus")
    p.add_argument("--vocab", default=None)
    p.add_argument("--probe", nargs="*", action="extend", default=None)
    p.add_argument("--top-n", dest="top_n", type=int, default=None)
    p.add_argument("--c", dest="radius", type=int, default=None)
    p.add_argument("--prob-mode", dest="prob_mode",
                   choices=("full_window", "actual"), default=None)
    p.add_argument("--max-bytes", dest="max_bytes", type=int, default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(run=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except TrainingDivergedError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError, SglabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
