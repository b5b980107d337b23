"""Compare the compiled strdist backend against the pure-Python fallback.

Times the three kernels (scalar levenshtein, pairwise matrix, alignment
backtrace) on identical inputs and checks both backends agree bit-for-bit.

    python3 benchmarks/bench_strdist.py [--words 400] [--pairs 20000]
"""

import argparse
import random
import time

import numpy as np

from hausanoise.strdist import _pure

try:
    from hausanoise.strdist import _speedups
except ImportError:
    _speedups = None

ALPHABET = "abcdegihjklmnorstuwyzɓɗƙƴ"


def make_words(n, rng):
    return [
        "".join(rng.choice(ALPHABET) for _ in range(rng.randint(3, 12)))
        for _ in range(n)
    ]


def bench(label, fn, repeat=1):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def run(backend, name, words, pairs, sentences):
    times = {}
    times["levenshtein"], lev = bench(
        name, lambda: [backend.levenshtein(a, b) for a, b in pairs], repeat=3
    )
    out = np.zeros((len(words), len(words)))
    times["pairwise"], _ = bench(
        name, lambda: backend.pairwise_normalized(words, out)
    )
    times["align"], subs = bench(
        name, lambda: [backend.align_substitutions(a, b) for a, b in sentences],
        repeat=3,
    )
    return times, (lev, out.copy(), subs)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", type=int, default=400)
    parser.add_argument("--pairs", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    words = make_words(args.words, rng)
    pairs = [
        (rng.choice(words), rng.choice(words)) for _ in range(args.pairs)
    ]
    sentences = [
        (" ".join(rng.choice(words) for _ in range(10)),
         " ".join(rng.choice(words) for _ in range(10)))
        for _ in range(2000)
    ]

    backends = [("pure-python", _pure)]
    if _speedups is not None:
        backends.insert(0, ("c-extension", _speedups))

    results = {}
    for name, backend in backends:
        times, outputs = run(backend, name, words, pairs, sentences)
        results[name] = (times, outputs)
        for op, wall in times.items():
            print("%-12s %-12s %8.3fs" % (name, op, wall))

    if len(results) == 2:
        fast = results["c-extension"]
        slow = results["pure-python"]
        assert fast[1][0] == slow[1][0], "levenshtein outputs differ"
        assert np.array_equal(fast[1][1], slow[1][1]), "matrices differ"
        assert fast[1][2] == slow[1][2], "alignments differ"
        print()
        for op in ("levenshtein", "pairwise", "align"):
            ratio = slow[0][op] / fast[0][op]
            print("%-12s speedup %6.1fx" % (op, ratio))
    else:
        print("compiled extension not available; benched fallback only")


if __name__ == "__main__":
    main()
