import math

import pytest

from hausanoise.dedup import (
    MinHashSignature,
    audit_overlap,
    estimate_jaccard,
    exact_jaccard,
    minhash,
    pick_banding,
    shingle,
)
from hausanoise.errors import ValidationError

from hausa_text import make_corpus


def test_shingle_windows():
    got = shingle("ba shi da", k=2)
    assert got == {("ba", "shi"), ("shi", "da")}
    got = shingle("Wannan ƴa ta ce gobe", k=3)
    assert got == {
        ("Wannan", "ƴa", "ta"),
        ("ƴa", "ta", "ce"),
        ("ta", "ce", "gobe"),
    }


def test_shingle_short_text_single_tuple():
    assert shingle("ba", k=3) == {("ba",)}
    assert shingle("ba zai", k=3) == {("ba", "zai")}


def test_shingle_empty_and_bad_k():
    assert shingle("", k=3) == set()
    assert shingle("   ", k=3) == set()
    with pytest.raises(ValidationError):
        shingle("ba", k=0)


def test_shingle_k1_is_token_set():
    assert shingle("ina zuwa ina", k=1) == {("ina",), ("zuwa",)}


def test_minhash_rejects_empty_set():
    with pytest.raises(ValidationError):
        minhash(set())


def test_minhash_deterministic_and_seed_sensitive():
    s = shingle("ina zuwa gida gobe da safe")
    a = minhash(s, seed=7)
    b = minhash(s, seed=7)
    c = minhash(s, seed=8)
    assert a == b
    assert a.hashes != c.hashes


def test_estimate_identical_sets_is_one():
    s = shingle("mutanen kauye sun taru a dandali")
    assert estimate_jaccard(minhash(s), minhash(s)) == 1.0


def test_estimate_rejects_mismatched_signatures():
    s = shingle("ina zuwa gida")
    with pytest.raises(ValidationError):
        estimate_jaccard(minhash(s, num_perm=64), minhash(s, num_perm=128))
    with pytest.raises(ValidationError):
        estimate_jaccard(minhash(s, seed=1), minhash(s, seed=2))


def test_signature_requires_components():
    with pytest.raises(ValidationError):
        MinHashSignature(hashes=(), shingle_size=3, seed=0)


def test_pick_banding_midpoints():
    assert pick_banding(128, 0.5) == (32, 4)
    assert pick_banding(128, 0.9) == (8, 16)
    assert pick_banding(16, 0.5) == (8, 2)


def _planted_pair_sets(num_shared, num_extra, tag):
    """Two shingle sets with exact Jaccard num_shared/(num_shared+2*num_extra)."""
    shared = {(f"{tag}s{i}",) for i in range(num_shared)}
    left = shared | {(f"{tag}a{i}",) for i in range(num_extra)}
    right = shared | {(f"{tag}b{i}",) for i in range(num_extra)}
    return left, right


@pytest.mark.parametrize(
    "num_shared,num_extra",
    [(5, 10), (8, 8), (10, 5), (16, 2)],
    ids=["j0.2", "j0.33", "j0.5", "j0.8"],
)
def test_estimator_unbiased(num_shared, num_extra):
    num_perm = 128
    pairs = 200
    target = num_shared / (num_shared + 2 * num_extra)
    total = 0.0
    for p in range(pairs):
        left, right = _planted_pair_sets(num_shared, num_extra, f"p{p}.")
        assert exact_jaccard(left, right) == pytest.approx(target)
        total += estimate_jaccard(
            minhash(left, num_perm), minhash(right, num_perm)
        )
    tol = 3.0 * math.sqrt(target * (1.0 - target) / num_perm)
    assert abs(total / pairs - target) <= tol


def test_audit_self_overlap_is_identity():
    texts = sorted(set(make_corpus(60, seed=311)))
    report = audit_overlap(texts, texts, threshold=0.5)
    assert {(a, b, e) for a, b, e in report.pairs} == {
        (i, i, 1.0) for i in range(len(texts))
    }
    assert report.bands == 32 and report.rows == 4


def test_audit_disjoint_vocabulary_empty():
    left = [f"axa{i} bxb{i} cxc{i} dxd{i} exe{i}" for i in range(30)]
    right = [f"fxf{i} gxg{i} hxh{i} ixi{i} jxj{i}" for i in range(30)]
    report = audit_overlap(left, right, threshold=0.5)
    assert report.pairs == ()


def _base_sentence(idx, length=20):
    return " ".join(f"w{idx}t{j}" for j in range(length))


def test_audit_recovers_planted_near_duplicates():
    left = [_base_sentence(i) for i in range(40)]
    right = [_base_sentence(100 + i) for i in range(30)]
    planted = {}
    for slot, src in enumerate([1, 4, 9, 13, 22, 28, 31, 35]):
        words = left[src].split()
        words[slot % 2] = "changedword"
        planted[(src, len(right))] = " ".join(words)
        right.append(planted[(src, len(right))])

    for (src, dst), text in planted.items():
        j = exact_jaccard(shingle(left[src]), shingle(text))
        assert j >= 0.8

    report = audit_overlap(left, right, threshold=0.5)
    found = {(a, b) for a, b, _ in report.pairs}
    assert set(planted) <= found
    assert found == set(planted)
    for _, _, estimate in report.pairs:
        assert estimate >= 0.5
    estimates = [e for _, _, e in report.pairs]
    assert estimates == sorted(estimates, reverse=True)


def test_audit_exact_check_filters_lucky_estimates():
    left = [_base_sentence(i) for i in range(10)]
    right = list(left)
    loose = audit_overlap(left, right, threshold=0.5)
    strict = audit_overlap(left, right, threshold=0.5, exact_check=True)
    assert strict.pairs == loose.pairs


def test_audit_symmetry():
    left = [_base_sentence(i) for i in range(15)]
    right = [_base_sentence(i + 10) for i in range(15)]
    words = left[3].split()
    words[0] = "swapped"
    right[7] = " ".join(words)
    fwd = audit_overlap(left, right, threshold=0.5)
    rev = audit_overlap(right, left, threshold=0.5)
    assert {(a, b, e) for a, b, e in fwd.pairs} == {
        (b, a, e) for a, b, e in rev.pairs
    }


def test_audit_deterministic():
    texts = make_corpus(40, seed=77)
    one = audit_overlap(texts, texts[:20], threshold=0.5, seed=5)
    two = audit_overlap(texts, texts[:20], threshold=0.5, seed=5)
    assert one == two
    assert one.to_dict() == two.to_dict()


def test_audit_worker_count_does_not_change_report():
    texts = make_corpus(50, seed=13)
    serial = audit_overlap(texts, texts[10:40], threshold=0.5)
    parallel = audit_overlap(texts, texts[10:40], threshold=0.5, workers=4)
    assert serial == parallel


def test_audit_validates_inputs():
    with pytest.raises(ValidationError):
        audit_overlap([], ["ina gida"])
    with pytest.raises(ValidationError):
        audit_overlap(["ina gida"], ["ina gida"], threshold=0.0)
    with pytest.raises(ValidationError):
        audit_overlap(["ina gida"], ["ina gida"], threshold=1.5)
