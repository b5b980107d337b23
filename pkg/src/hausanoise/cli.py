"""Command-line front end: clean, profile, calibrate, corrupt, evaluate, audit.

Every command takes explicit input/output paths, draws all randomness from
a --seed flag (never the clock), and drops a .manifest.json next to each
output file recording the flags, seeds, and content digests needed to
reproduce it. Exit codes: 0 success, 1 validation error, 2 I/O error,
3 calibration did not converge.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .calibrate import CalibrationOptions, calibrate
from .corpus import (
    SentenceRecord,
    clean_text,
    read_corpus,
    read_lexicon,
    read_pairs,
    segment_sentences,
    write_pairs,
)
from .dedup import (
    DEFAULT_NUM_PERM,
    DEFAULT_SHINGLE,
    DEFAULT_THRESHOLD,
    audit_overlap,
)
from .errors import ValidationError
from .metrics import evaluate_corpus
from .noise import NoiseConfig, generate_parallel_corpus, write_traces
from .profile import (
    DEFAULT_BINS,
    DEFAULT_BUCKET_CAP,
    DEFAULT_EPS,
    DEFAULT_MIN_SAMPLES,
    DistanceHistogram,
    profile_corpus,
)


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _flag_map(args):
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key == "func":
            continue
        flags[key] = value
    return flags


def _write_manifests(command, args, seed, inputs, outputs, started):
    manifest = {
        "command": command,
        "flags": _flag_map(args),
        "seed": seed,
        "inputs": {str(p): _digest(p) for p in inputs},
        "outputs": {str(p): _digest(p) for p in outputs},
        "version": __version__,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    payload = json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True)
    for out in outputs:
        with open(str(out) + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")


def _emit_doc(doc, path):
    """Write a JSON document to path, or stdout when no path is given."""
    payload = json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(payload)
        return []
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)
    return [path]


def _records(lines, source):
    return [
        SentenceRecord(id=i, text=text, source=source)
        for i, text in enumerate(lines)
    ]


def cmd_clean(args):
    started = time.monotonic()
    source = args.source if args.source is not None else os.path.basename(args.infile)
    next_id = 0
    with open(args.infile, "r", encoding="utf-8") as src:
        with open(args.out, "w", encoding="utf-8") as dst:
            paragraph = []

            def flush():
                nonlocal next_id
                if not paragraph:
                    return
                cleaned = clean_text(" ".join(paragraph))
                paragraph.clear()
                if not cleaned:
                    return
                for rec in segment_sentences(cleaned, source=source, start_id=next_id):
                    dst.write(rec.text + "\n")
                    next_id = rec.id + 1

            for line in src:
                if line.strip():
                    paragraph.append(line.strip())
                else:
                    flush()
            flush()
    _write_manifests("clean", args, None, [args.infile], [args.out], started)
    return 0


def cmd_profile(args):
    started = time.monotonic()
    sentences = read_corpus(args.infile)
    lexicon = read_lexicon(args.lexicon)
    histogram, info = profile_corpus(
        sentences,
        lexicon,
        eps=args.eps,
        min_samples=args.min_samples,
        bins=args.bins,
        cap=args.bucket_cap,
    )
    doc = {"histogram": histogram.to_dict()}
    doc.update(info)
    outputs = _emit_doc(doc, args.out)
    _write_manifests(
        "profile", args, None, [args.infile, args.lexicon], outputs, started
    )
    return 0


def _load_target_histogram(path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValidationError("target profile must be a JSON object")
    if "histogram" in doc:
        doc = doc["histogram"]
    try:
        return DistanceHistogram.from_dict(doc)
    except (KeyError, TypeError) as exc:
        raise ValidationError("target profile is missing histogram fields") from exc


def cmd_calibrate(args):
    started = time.monotonic()
    target = _load_target_histogram(args.target)
    lines = read_corpus(args.corpus)
    records = _records(lines, os.path.basename(args.corpus))
    options = CalibrationOptions(
        iterations=args.iterations,
        threshold=args.threshold,
        seed=args.seed,
        min_sentences=args.min_sentences,
        sample_size=args.sample_size,
        workers=args.workers,
    )
    result = calibrate(target, records, options)
    result.config.save(args.out)
    outputs = [args.out]
    outputs += _emit_doc(result.to_dict(), args.result)
    _write_manifests(
        "calibrate", args, args.seed, [args.target, args.corpus], outputs, started
    )
    return 0 if result.converged else 3


def cmd_corrupt(args):
    started = time.monotonic()
    config = NoiseConfig.load(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    lines = read_corpus(args.infile)
    records = _records(lines, os.path.basename(args.infile))
    pairs, _ = generate_parallel_corpus(records, config, workers=args.workers)
    write_pairs([(p.noisy, p.clean) for p in pairs], args.out)
    outputs = [args.out]
    if args.traces is not None:
        write_traces(pairs, args.traces)
        outputs.append(args.traces)
    _write_manifests(
        "corrupt", args, config.seed, [args.config, args.infile], outputs, started
    )
    return 0


def cmd_evaluate(args):
    started = time.monotonic()
    if args.pairs is not None:
        if args.ref is not None or args.hyp is not None:
            raise ValidationError("--pairs cannot be combined with --ref/--hyp")
        pairs = read_pairs(args.pairs)
        hyps = [noisy for noisy, _ in pairs]
        refs = [clean for _, clean in pairs]
        inputs = [args.pairs]
    else:
        if args.ref is None or args.hyp is None:
            raise ValidationError("need --ref and --hyp, or --pairs")
        refs = read_corpus(args.ref)
        hyps = read_corpus(args.hyp)
        inputs = [args.ref, args.hyp]
    report = evaluate_corpus(refs, hyps)
    doc = report.to_dict()
    for name in ("bleu", "meteor", "token_f1", "wer", "cer"):
        print("%-10s %.4f" % (name, doc[name]))
    print("%-10s %d" % ("pairs", doc["pair_count"]))
    outputs = []
    if args.out is not None:
        outputs = _emit_doc(doc, args.out)
    _write_manifests("evaluate", args, None, inputs, outputs, started)
    return 0


def cmd_audit(args):
    started = time.monotonic()
    corpus_a = read_corpus(args.file_a)
    corpus_b = read_corpus(args.file_b)
    report = audit_overlap(
        corpus_a,
        corpus_b,
        threshold=args.threshold,
        num_perm=args.num_perm,
        shingle_size=args.shingle,
        seed=args.seed,
        exact_check=args.exact,
        workers=args.workers,
    )
    outputs = _emit_doc(report.to_dict(), args.out)
    _write_manifests(
        "audit", args, args.seed, [args.file_a, args.file_b], outputs, started
    )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hausanoise",
        description="Profile, synthesize, and evaluate character-level noise "
        "for Hausa text.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="clean raw text and segment sentences")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--source", default=None, help="source label for records")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("profile", help="profile error distances in a noisy corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--min-samples", type=int, default=DEFAULT_MIN_SAMPLES)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--bucket-cap", type=int, default=DEFAULT_BUCKET_CAP)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("calibrate", help="search noise probabilities to match a profile")
    p.add_argument("--target", required=True, help="profile document to match")
    p.add_argument("--corpus", required=True, help="clean sentences, one per line")
    p.add_argument("--out", required=True, help="winning NoiseConfig file")
    p.add_argument("--result", default=None, help="calibration result document")
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--threshold", type=float, default=0.15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-size", type=int, default=2000)
    p.add_argument("--min-sentences", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("corrupt", help="generate a noisy/clean parallel corpus")
    p.add_argument("--config", required=True, help="NoiseConfig JSON file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="noisy<TAB>clean output")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--traces", default=None, help="optional trace sidecar")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("evaluate", help="score a correction system")
    p.add_argument("--ref", default=None)
    p.add_argument("--hyp", default=None)
    p.add_argument("--pairs", default=None, help="noisy<TAB>clean TSV")
    p.add_argument("--out", default=None, help="metric report document")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("audit", help="report approximate overlap between corpora")
    p.add_argument("--a", dest="file_a", required=True)
    p.add_argument("--b", dest="file_b", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--num-perm", type=int, default=DEFAULT_NUM_PERM)
    p.add_argument("--shingle", type=int, default=DEFAULT_SHINGLE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="re-check with exact Jaccard")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; the contract reserves 2 for I/O
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except UnicodeDecodeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return 2


def entry():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
