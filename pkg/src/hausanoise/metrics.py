"""Correction-quality metrics: BLEU, METEOR, token F1, WER, CER.

BLEU follows the canonical corpus scorer configured as
nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp, reported on [0,1].
METEOR is the exact-match stage with the classic parameters
(Fmean = 10PR/(R+9P), penalty = 0.5*(chunks/matches)^3). WER and CER
pool edit counts over the corpus, so values above 1 are possible for
hypotheses much longer than their references.
"""

import math
import re
from collections import Counter
from dataclasses import dataclass

from .errors import UndefinedMetricError, ValidationError
from .strdist import levenshtein, token_edit_distance

_BLEU_ORDER = 4

_13A_PUNCT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_AFTER = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_BEFORE = re.compile(r"([\.,])([^0-9])")
_13A_DASH = re.compile(r"([0-9])(-)")
_WS = re.compile(r"\s+")


def tokenize_13a(line):
    """mteval-v13a tokenization as used by the WMT BLEU convention."""
    norm = line.replace("<skipped>", "")
    norm = norm.replace("\n", " ")
    norm = norm.replace("&quot;", '"')
    norm = norm.replace("&amp;", "&")
    norm = norm.replace("&lt;", "<")
    norm = norm.replace("&gt;", ">")
    norm = " {} ".format(norm)
    norm = _13A_PUNCT.sub(" \\1 ", norm)
    norm = _13A_PERIOD_AFTER.sub("\\1 \\2 ", norm)
    norm = _13A_PERIOD_BEFORE.sub(" \\1 \\2", norm)
    norm = _13A_DASH.sub("\\1 \\2 ", norm)
    return _WS.sub(" ", norm).strip()


def _ngram_counts(tokens, max_order=_BLEU_ORDER):
    counts = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i:i + n])] += 1
    return counts


def bleu_corpus(refs, hyps):
    """Corpus BLEU on [0,1]; single reference per hypothesis."""
    if len(refs) != len(hyps):
        raise ValidationError(
            "reference and hypothesis lists differ in length (%d vs %d)"
            % (len(refs), len(hyps))
        )
    correct = [0] * _BLEU_ORDER
    total = [0] * _BLEU_ORDER
    sys_len = 0
    ref_len = 0
    for ref, hyp in zip(refs, hyps):
        hyp_tokens = tokenize_13a(hyp.rstrip()).split()
        ref_tokens = tokenize_13a(ref.rstrip()).split()
        sys_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        hyp_ngrams = _ngram_counts(hyp_tokens)
        ref_ngrams = _ngram_counts(ref_tokens)
        for ngram, count in hyp_ngrams.items():
            order = len(ngram)
            correct[order - 1] += min(count, ref_ngrams.get(ngram, 0))
            total[order - 1] += count

    precisions = [0.0] * _BLEU_ORDER
    smooth_mteval = 1.0
    for n in range(_BLEU_ORDER):
        if total[n] == 0:
            break
        if correct[n] == 0:
            # exponential smoothing: each successive zero halves the credit
            smooth_mteval *= 2.0
            precisions[n] = 1.0 / (smooth_mteval * total[n])
        else:
            precisions[n] = correct[n] / total[n]

    brevity_penalty = 1.0
    if sys_len < ref_len:
        brevity_penalty = math.exp(1.0 - ref_len / sys_len) if sys_len > 0 else 0.0

    log_sum = sum(
        math.log(p) if p > 0.0 else -9999999999 for p in precisions
    )
    return brevity_penalty * math.exp(log_sum / _BLEU_ORDER)


def _min_chunks(ref_tokens, hyp_tokens):
    """(matches, chunks) for a maximum matching with fewest chunks.

    Exact branch-and-bound over occurrence assignments: hypothesis
    positions are decided left to right, preferring the ref position that
    extends the current chunk, and a branch dies as soon as it cannot
    beat the best complete alignment found so far.
    """
    ref_counts = Counter(ref_tokens)
    hyp_counts = Counter(hyp_tokens)
    need = {t: min(ref_counts[t], c) for t, c in hyp_counts.items() if t in ref_counts}
    matches = sum(need.values())
    if matches == 0:
        return 0, 0

    ref_positions = {}
    for j, token in enumerate(ref_tokens):
        ref_positions.setdefault(token, []).append(j)
    hyp_matchable = [i for i, t in enumerate(hyp_tokens) if need.get(t)]
    remaining = Counter(hyp_tokens[i] for i in hyp_matchable)

    best = [matches]  # chunks can never exceed matches

    def dfs(idx, used, last_hyp, last_ref, chunks, left, still_needed):
        if chunks >= best[0]:
            return
        if idx == len(hyp_matchable):
            best[0] = chunks
            return
        i = hyp_matchable[idx]
        token = hyp_tokens[i]
        candidates = [j for j in ref_positions[token] if j not in used]
        preferred = last_ref + 1 if i == last_hyp + 1 else None
        ordered = sorted(candidates, key=lambda j: (j != preferred, j))
        for j in ordered:
            extends = i == last_hyp + 1 and j == last_ref + 1
            used.add(j)
            still_needed[token] -= 1
            left[token] -= 1
            dfs(idx + 1, used, i, j, chunks + (0 if extends else 1),
                left, still_needed)
            left[token] += 1
            still_needed[token] += 1
            used.discard(j)
        # skipping is allowed only while surplus occurrences remain
        if left[token] - 1 >= still_needed[token]:
            left[token] -= 1
            dfs(idx + 1, used, last_hyp, last_ref, chunks, left, still_needed)
            left[token] += 1

    dfs(0, set(), -2, -2, 0, remaining, dict(need))
    return matches, best[0]


def meteor(ref, hyp):
    """Exact-match METEOR for one sentence pair."""
    ref_tokens = ref.split()
    hyp_tokens = hyp.split()
    matches, chunks = _min_chunks(ref_tokens, hyp_tokens)
    if matches == 0:
        return 0.0
    precision = matches / len(hyp_tokens)
    recall = matches / len(ref_tokens)
    fmean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (chunks / matches) ** 3
    return fmean * (1.0 - penalty)


def token_f1(ref, hyp):
    """Multiset token overlap F1 for one sentence pair."""
    ref_tokens = Counter(ref.split())
    hyp_tokens = Counter(hyp.split())
    if not ref_tokens and not hyp_tokens:
        return 1.0
    if not ref_tokens or not hyp_tokens:
        return 0.0
    overlap = sum((ref_tokens & hyp_tokens).values())
    if overlap == 0:
        return 0.0
    precision = overlap / sum(hyp_tokens.values())
    recall = overlap / sum(ref_tokens.values())
    return 2.0 * precision * recall / (precision + recall)


def cer(ref, hyp):
    """Character error rate for one pair: symbol edits over ref length."""
    if not ref:
        raise UndefinedMetricError("CER is undefined for an empty reference")
    return levenshtein(ref, hyp) / len(ref)


def wer(ref, hyp):
    """Word error rate for one pair: token edits over ref token count."""
    ref_tokens = ref.split()
    if not ref_tokens:
        raise UndefinedMetricError("WER is undefined for an empty reference")
    return token_edit_distance(ref_tokens, hyp.split()) / len(ref_tokens)


@dataclass(frozen=True)
class MetricReport:
    bleu: float
    meteor: float
    token_f1: float
    wer: float
    cer: float
    pair_count: int

    def to_dict(self):
        return {
            "bleu": self.bleu,
            "meteor": self.meteor,
            "token_f1": self.token_f1,
            "wer": self.wer,
            "cer": self.cer,
            "pair_count": self.pair_count,
        }


def evaluate_corpus(refs, hyps):
    """All five metrics over aligned reference/hypothesis lists."""
    refs = list(refs)
    hyps = list(hyps)
    if len(refs) != len(hyps):
        raise ValidationError(
            "reference and hypothesis lists differ in length (%d vs %d)"
            % (len(refs), len(hyps))
        )
    if not refs:
        raise ValidationError("cannot evaluate an empty corpus")

    word_edits = 0
    word_total = 0
    char_edits = 0
    char_total = 0
    meteor_sum = 0.0
    f1_sum = 0.0
    for ref, hyp in zip(refs, hyps):
        if not ref:
            raise UndefinedMetricError("CER is undefined for an empty reference")
        ref_tokens = ref.split()
        if not ref_tokens:
            raise UndefinedMetricError("WER is undefined for an empty reference")
        char_edits += levenshtein(ref, hyp)
        char_total += len(ref)
        word_edits += token_edit_distance(ref_tokens, hyp.split())
        word_total += len(ref_tokens)
        meteor_sum += meteor(ref, hyp)
        f1_sum += token_f1(ref, hyp)

    return MetricReport(
        bleu=bleu_corpus(refs, hyps),
        meteor=meteor_sum / len(refs),
        token_f1=f1_sum / len(refs),
        wer=word_edits / word_total,
        cer=char_edits / char_total,
        pair_count=len(refs),
    )
