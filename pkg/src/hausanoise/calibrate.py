"""Random-search calibration of noise probabilities.

Each iteration samples the nine probabilities log-uniformly inside
per-key bounds anchored to the default configuration, corrupts a fixed
calibration sample, and scores the resulting changed-word distance
histogram against the target with Jensen-Shannon distance. The best
(js, iteration) pair wins, so batched and serial runs pick the same
config.
"""

import hashlib
import json
import math
import random
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .errors import EmptyProfileError, ValidationError
from .noise import (
    DEFAULT_PROBABILITIES,
    PROBABILITY_FIELDS,
    NoiseConfig,
    apply_noise,
    mix_seed,
)
from .profile import DistanceHistogram, changed_word_distances

PROBABILITY_FLOOR = 1e-4
_SMOOTH = 1e-12


def js_distance(p_hist, q_hist):
    """Jensen-Shannon distance (base-2 logs, so the value lies in [0,1])."""
    if tuple(p_hist.bin_edges) != tuple(q_hist.bin_edges):
        raise ValidationError("histograms have mismatched bin edges")
    return _js_arrays(np.asarray(p_hist.mass), np.asarray(q_hist.mass))


def _js_arrays(p, q):
    p = np.where(p > 0, p, _SMOOTH)
    q = np.where(q > 0, q, _SMOOTH)
    m = (p + q) / 2.0
    kl_pm = float(np.sum(p * np.log2(p / m)))
    kl_qm = float(np.sum(q * np.log2(q / m)))
    return math.sqrt(max(0.0, (kl_pm + kl_qm) / 2.0))


@dataclass(frozen=True)
class CalibrationOptions:
    iterations: int = 500
    threshold: float = 0.15
    seed: int = 0
    min_sentences: int = 2000
    sample_size: int = 2000
    workers: int = 1


@dataclass(frozen=True)
class CalibrationResult:
    config: NoiseConfig
    js: float
    iterations: int
    target_hash: str
    converged: bool
    threshold: float
    js_history: tuple = ()

    def best_curve(self):
        """Best-so-far js after each iteration; non-increasing by construction."""
        curve = []
        best = math.inf
        for value in self.js_history:
            best = min(best, value)
            curve.append(best)
        return curve

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "js": self.js if math.isfinite(self.js) else None,
            "iterations": self.iterations,
            "target_hash": self.target_hash,
            "converged": self.converged,
            "threshold": self.threshold,
            "js_history": [js if math.isfinite(js) else None for js in self.js_history],
        }


def hash_histogram(histogram):
    payload = json.dumps(histogram.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def sample_config(base_seed, iteration):
    """Draw one candidate config; a pure function of (base_seed, iteration)."""
    seed = mix_seed(base_seed, iteration)
    rng = random.Random(seed)
    probs = {}
    for name in PROBABILITY_FIELDS:
        high = max(4.0 * DEFAULT_PROBABILITIES[name], PROBABILITY_FLOOR)
        low = PROBABILITY_FLOOR
        probs[name] = math.exp(rng.uniform(math.log(low), math.log(high)))
    return NoiseConfig(seed=seed, **probs)


def synthetic_mass(config, sample, bin_edges):
    """Changed-word distance mass for one config over the fixed sample."""
    pairs = [apply_noise(sentence, config) for sentence in sample]
    samples = changed_word_distances(pairs)
    if not samples:
        raise EmptyProfileError("candidate config produced no changed words")
    counts, _ = np.histogram(np.asarray(samples), bins=np.asarray(bin_edges))
    return counts / len(samples)


def _evaluate(args):
    iteration, base_seed, sample, bin_edges, target_mass = args
    config = sample_config(base_seed, iteration)
    try:
        mass = synthetic_mass(config, sample, bin_edges)
    except EmptyProfileError:
        return iteration, math.inf
    return iteration, _js_arrays(mass, np.asarray(target_mass))


def calibrate(target, clean_corpus, options=CalibrationOptions()):
    """Search for a NoiseConfig whose synthetic profile matches the target."""
    corpus = list(clean_corpus)
    if len(corpus) < options.min_sentences:
        raise ValidationError(
            "calibration needs at least %d sentences, got %d"
            % (options.min_sentences, len(corpus))
        )
    sample = corpus[: options.sample_size]
    edges = tuple(target.bin_edges)
    target_mass = tuple(target.mass)
    digest = hash_histogram(target)

    tasks = [
        (i, options.seed, sample, edges, target_mass)
        for i in range(options.iterations)
    ]
    if options.workers > 1 and tasks:
        with get_context().Pool(options.workers) as pool:
            scored = pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (options.workers * 4)))
    else:
        scored = [_evaluate(task) for task in tasks]

    history = tuple(js for _, js in sorted(scored))
    finite = [(js, i) for i, js in scored if math.isfinite(js)]
    if finite:
        best_js, best_iter = min(finite)
        best_config = sample_config(options.seed, best_iter)
        converged = best_js <= options.threshold
    else:
        # nothing searched (or nothing scored): carry the default config
        best_config = NoiseConfig.defaults(seed=options.seed)
        try:
            mass = synthetic_mass(best_config, sample, edges)
            best_js = _js_arrays(mass, np.asarray(target_mass))
        except EmptyProfileError:
            best_js = math.inf
        converged = False

    return CalibrationResult(
        config=best_config,
        js=best_js,
        iterations=options.iterations,
        target_hash=digest,
        converged=converged,
        threshold=options.threshold,
        js_history=history,
    )
