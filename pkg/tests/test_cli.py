import json
import hashlib
import subprocess
import sys

import pytest

from hausanoise.cli import main
from hausanoise.noise import NoiseConfig

from hausa_text import ALL_WORDS, make_corpus


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture
def clean_file(tmp_path):
    path = tmp_path / "clean.txt"
    path.write_text("\n".join(make_corpus(120, seed=42)) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "defaults.conf"
    NoiseConfig.defaults(seed=3).save(path)
    return path


def test_clean_strips_artifacts_and_segments(tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text(
        "#Hausa Labarai daga gidan rediyo [3]. Ana sa ran za a kammala.\n"
        "\n"
        "Wannan shiri ne mai kyau.\n",
        encoding="utf-8",
    )
    out = tmp_path / "clean.txt"
    before = sha(raw)
    assert main(["clean", "--in", str(raw), "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == (
        "Labarai daga gidan rediyo .\n"
        "Ana sa ran za a kammala.\n"
        "Wannan shiri ne mai kyau.\n"
    )
    assert sha(raw) == before
    manifest = json.loads((tmp_path / "clean.txt.manifest.json").read_text())
    assert manifest["command"] == "clean"
    assert str(raw) in manifest["inputs"]
    assert manifest["outputs"][str(out)] == sha(out)


def test_corrupt_is_deterministic_across_reruns_and_workers(
    tmp_path, clean_file, config_file
):
    outs = []
    for name, workers in (("a.tsv", "1"), ("b.tsv", "1"), ("c.tsv", "4")):
        out = tmp_path / name
        code = main(
            [
                "corrupt",
                "--config", str(config_file),
                "--in", str(clean_file),
                "--out", str(out),
                "--seed", "7",
                "--workers", workers,
            ]
        )
        assert code == 0
        outs.append(sha(out))
    assert outs[0] == outs[1] == outs[2]


def test_corrupt_seed_changes_output(tmp_path, clean_file, config_file):
    hashes = {}
    for seed in ("7", "8"):
        out = tmp_path / ("s%s.tsv" % seed)
        assert main(
            ["corrupt", "--config", str(config_file), "--in", str(clean_file),
             "--out", str(out), "--seed", seed]
        ) == 0
        hashes[seed] = sha(out)
    assert hashes["7"] != hashes["8"]


def test_corrupt_writes_replayable_traces(tmp_path, clean_file, config_file):
    out = tmp_path / "pairs.tsv"
    traces = tmp_path / "traces.jsonl"
    assert main(
        ["corrupt", "--config", str(config_file), "--in", str(clean_file),
         "--out", str(out), "--traces", str(traces)]
    ) == 0
    from hausanoise.corpus import read_pairs
    from hausanoise.noise import NoiseTrace

    pairs = read_pairs(out)
    lines = traces.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(pairs)
    for (noisy, clean), line in zip(pairs, lines):
        assert NoiseTrace.from_json(line).replay(clean) == noisy


def test_corrupt_rejects_bad_probability(tmp_path, clean_file):
    bad = tmp_path / "bad.conf"
    doc = NoiseConfig.defaults().to_dict()
    doc["remove_spaces"] = 1.2
    bad.write_text(json.dumps(doc), encoding="utf-8")
    out = tmp_path / "x.tsv"
    code = main(
        ["corrupt", "--config", str(bad), "--in", str(clean_file), "--out", str(out)]
    )
    assert code == 1
    assert not out.exists()


def test_evaluate_identity_reports_zero_error(tmp_path, clean_file, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["evaluate", "--ref", str(clean_file), "--hyp", str(clean_file),
         "--out", str(out)]
    )
    assert code == 0
    table = capsys.readouterr().out
    assert "wer        0.0000" in table
    assert "cer        0.0000" in table
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["bleu"] == pytest.approx(1.0)
    assert doc["wer"] == 0.0 and doc["cer"] == 0.0
    assert doc["pair_count"] == 120


def test_evaluate_pairs_mode_matches_ref_hyp_mode(tmp_path, clean_file, config_file, capsys):
    pairs = tmp_path / "pairs.tsv"
    assert main(
        ["corrupt", "--config", str(config_file), "--in", str(clean_file),
         "--out", str(pairs)]
    ) == 0
    out_a = tmp_path / "a.json"
    assert main(["evaluate", "--pairs", str(pairs), "--out", str(out_a)]) == 0

    noisy = tmp_path / "noisy.txt"
    noisy.write_text(
        "".join(line.split("\t")[0] + "\n"
                for line in pairs.read_text(encoding="utf-8").splitlines()),
        encoding="utf-8",
    )
    out_b = tmp_path / "b.json"
    assert main(
        ["evaluate", "--ref", str(clean_file), "--hyp", str(noisy),
         "--out", str(out_b)]
    ) == 0
    capsys.readouterr()
    assert out_a.read_text() == out_b.read_text()


def test_evaluate_flag_combinations(tmp_path, clean_file, capsys):
    assert main(["evaluate", "--ref", str(clean_file)]) == 1
    pairs = tmp_path / "p.tsv"
    pairs.write_text("a\tb\n", encoding="utf-8")
    assert main(
        ["evaluate", "--pairs", str(pairs), "--ref", str(clean_file),
         "--hyp", str(clean_file)]
    ) == 1
    capsys.readouterr()


def _write_lexicon(tmp_path):
    lex = tmp_path / "words.txt"
    lex.write_text("\n".join(sorted(ALL_WORDS)) + "\n", encoding="utf-8")
    return lex


def _make_noisy(tmp_path, clean_file, config_file):
    pairs = tmp_path / "pairs.tsv"
    assert main(
        ["corrupt", "--config", str(config_file), "--in", str(clean_file),
         "--out", str(pairs)]
    ) == 0
    noisy = tmp_path / "noisy.txt"
    noisy.write_text(
        "".join(line.split("\t")[0] + "\n"
                for line in pairs.read_text(encoding="utf-8").splitlines()),
        encoding="utf-8",
    )
    return noisy


def test_profile_then_calibrate_roundtrip(tmp_path, clean_file, config_file, capsys):
    noisy = _make_noisy(tmp_path, clean_file, config_file)
    lex = _write_lexicon(tmp_path)
    profile_doc = tmp_path / "profile.json"
    assert main(
        ["profile", "--in", str(noisy), "--lexicon", str(lex),
         "--out", str(profile_doc)]
    ) == 0
    doc = json.loads(profile_doc.read_text(encoding="utf-8"))
    assert doc["eps"] == 0.4
    assert doc["min_samples"] == 2
    assert len(doc["histogram"]["mass"]) == 20
    assert doc["histogram"]["sample_count"] > 0

    config_out = tmp_path / "fit.conf"
    result_out = tmp_path / "fit.result.json"
    code = main(
        ["calibrate", "--target", str(profile_doc), "--corpus", str(clean_file),
         "--out", str(config_out), "--result", str(result_out),
         "--iterations", "8", "--threshold", "0.99", "--seed", "11",
         "--sample-size", "60", "--min-sentences", "50"]
    )
    capsys.readouterr()
    assert code == 0
    fitted = NoiseConfig.load(config_out)
    assert 0.0 <= fitted.remove_spaces <= 1.0
    result = json.loads(result_out.read_text(encoding="utf-8"))
    assert result["converged"] is True
    assert result["js"] <= 0.99
    assert (tmp_path / "fit.conf.manifest.json").exists()


def test_calibrate_nonconvergence_exits_three(tmp_path, clean_file, config_file, capsys):
    noisy = _make_noisy(tmp_path, clean_file, config_file)
    lex = _write_lexicon(tmp_path)
    profile_doc = tmp_path / "profile.json"
    assert main(
        ["profile", "--in", str(noisy), "--lexicon", str(lex),
         "--out", str(profile_doc)]
    ) == 0
    config_out = tmp_path / "fit.conf"
    code = main(
        ["calibrate", "--target", str(profile_doc), "--corpus", str(clean_file),
         "--out", str(config_out), "--iterations", "2", "--threshold", "0.000001",
         "--seed", "11", "--sample-size", "60", "--min-sentences", "50"]
    )
    capsys.readouterr()
    assert code == 3
    assert config_out.exists()


def test_calibrate_deterministic_across_workers(tmp_path, clean_file, config_file, capsys):
    noisy = _make_noisy(tmp_path, clean_file, config_file)
    lex = _write_lexicon(tmp_path)
    profile_doc = tmp_path / "profile.json"
    assert main(
        ["profile", "--in", str(noisy), "--lexicon", str(lex),
         "--out", str(profile_doc)]
    ) == 0
    hashes = []
    for name, workers in (("w1", "1"), ("w4", "4")):
        config_out = tmp_path / ("%s.conf" % name)
        result_out = tmp_path / ("%s.json" % name)
        main(
            ["calibrate", "--target", str(profile_doc), "--corpus", str(clean_file),
             "--out", str(config_out), "--result", str(result_out),
             "--iterations", "6", "--threshold", "0.99", "--seed", "2",
             "--sample-size", "40", "--min-sentences", "50",
             "--workers", workers]
        )
        hashes.append((sha(config_out), sha(result_out)))
    capsys.readouterr()
    assert hashes[0] == hashes[1]


def test_audit_identity_pairs(tmp_path, clean_file, capsys):
    out = tmp_path / "overlap.json"
    code = main(
        ["audit", "--a", str(clean_file), "--b", str(clean_file),
         "--threshold", "0.5", "--num-perm", "128", "--shingle", "3",
         "--seed", "0", "--out", str(out)]
    )
    capsys.readouterr()
    assert code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    ids = {(a, b) for a, b, _ in doc["pairs"]}
    n = len([l for l in clean_file.read_text(encoding="utf-8").splitlines() if l])
    assert {(i, i) for i in range(n)} <= ids
    assert doc["bands"] == 32 and doc["rows"] == 4


def test_audit_deterministic_across_workers(tmp_path, clean_file, capsys):
    hashes = []
    for name, workers in (("o1.json", "1"), ("o4.json", "4"), ("o8.json", "8")):
        out = tmp_path / name
        assert main(
            ["audit", "--a", str(clean_file), "--b", str(clean_file),
             "--workers", workers, "--out", str(out)]
        ) == 0
        hashes.append(sha(out))
    capsys.readouterr()
    assert hashes[0] == hashes[1] == hashes[2]


def test_unknown_command_and_flag_exit_one(capsys):
    assert main(["frobnicate"]) == 1
    assert main(["evaluate", "--no-such-flag", "x"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_missing_input_exits_two(tmp_path, capsys):
    out = tmp_path / "x.txt"
    code = main(["clean", "--in", str(tmp_path / "absent.txt"), "--out", str(out)])
    assert code == 2
    assert "i/o error" in capsys.readouterr().err


def test_inputs_never_mutated(tmp_path, clean_file, config_file):
    before = (sha(clean_file), sha(config_file))
    main(
        ["corrupt", "--config", str(config_file), "--in", str(clean_file),
         "--out", str(tmp_path / "o.tsv")]
    )
    assert (sha(clean_file), sha(config_file)) == before


def test_console_script_reports_version():
    proc = subprocess.run(
        [sys.executable, "-m", "hausanoise.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.1.0"
