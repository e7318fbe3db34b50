import json
import subprocess
import sys

import pytest

from wordengage.cli import main


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    code = main(["synth", "--out-dir", str(out), "--users", "200", "--tweets-per-user", "60",
                 "--seed", "4"])
    assert code == 0
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def body(text):
    return [l for l in text.splitlines() if not l.startswith("#")]


class TestLexiconValidate:
    def test_demo(self, capsys):
        code, out, _ = run(capsys, "lexicon-validate")
        assert code == 0
        assert out.startswith("ok: 12 categories")

    def test_bad_file(self, capsys, tmp_path):
        path = tmp_path / "bad.dic"
        path.write_text("%\n1\tanger\n%\nmad*\t7\n")
        code, _, err = run(capsys, "lexicon-validate", "--lexicon", str(path))
        assert code == 1
        assert "error:" in err and "line 4" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "lexicon-validate", "--lexicon", str(tmp_path / "none.dic"))
        assert code == 1 and "cannot read" in err


class TestPipeline:
    def test_correlate_signs_follow_manifest(self, capsys, synth_dir):
        manifest = json.loads((synth_dir / "manifest.json").read_text())
        code, out, _ = run(capsys, "correlate", "--corpus", str(synth_dir / "corpus.jsonl"),
                           "--format", "json")
        assert code == 0
        tables = json.loads(out)["correlations"]
        for target in ("response", "retweet"):
            got = {c["category"]: c["r"] for c in tables[target]}
            for p in manifest["planted"]:
                if abs(p[target]) >= 0.15:
                    assert got[p["category"]] * p[target] > 0

    def test_score_then_correlate_from_profiles(self, capsys, synth_dir, tmp_path):
        prof = tmp_path / "profiles.tsv"
        corpus = str(synth_dir / "corpus.jsonl")
        assert run(capsys, "score", "--corpus", corpus, "-o", str(prof))[0] == 0
        _, direct, _ = run(capsys, "correlate", "--corpus", corpus)
        _, via, _ = run(capsys, "correlate", "--profiles", str(prof))
        assert body(direct) == body(via)

    def test_rates(self, capsys, synth_dir):
        code, out, _ = run(capsys, "rates", "--corpus", str(synth_dir / "corpus.jsonl"), "--format", "json")
        obj = json.loads(out)
        assert code == 0 and len(obj["rates"]) == 200
        assert set(obj["summary"]) == {"response_rate", "retweet_rate"}

    def test_cv_table_shape(self, capsys, synth_dir):
        code, out, _ = run(capsys, "cv", "--corpus", str(synth_dir / "corpus.jsonl"), "--model", "ols",
                           "--folds", "5")
        assert code == 0
        rows = [l.split("\t") for l in body(out)]
        assert rows[0] == ["features", "response_mae", "retweet_mae"]
        assert [r[0] for r in rows[1:]] == ["all categories", "significant categories"]
        assert all(0 <= float(v) <= 1 for r in rows[1:] for v in r[1:])

    def test_cv_classification_json(self, capsys, synth_dir):
        code, out, _ = run(capsys, "cv", "--corpus", str(synth_dir / "corpus.jsonl"), "--task",
                           "classification", "--model", "gnb", "--folds", "5", "--format", "json")
        reports = json.loads(out)["reports"]
        assert code == 0 and len(reports) == 4
        assert all(r["metric"] == "auc" for r in reports)

    def test_train(self, capsys, synth_dir, tmp_path):
        out = tmp_path / "model.json"
        code, _, _ = run(capsys, "train", "--corpus", str(synth_dir / "corpus.jsonl"), "--target",
                         "retweet", "--model", "ridge", "-o", str(out))
        obj = json.loads(out.read_text())
        assert code == 0
        assert obj["kind"] == "ridge" and len(obj["columns"]) == 12
        assert obj["meta"]["target"] == "retweet"

    def test_train_wrong_task(self, capsys, synth_dir):
        code, _, err = run(capsys, "train", "--corpus", str(synth_dir / "corpus.jsonl"), "--model", "gnb")
        assert code == 1 and "does not fit" in err


class TestExitCodes:
    def test_empty_corpus(self, capsys, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        code, _, err = run(capsys, "score", "--corpus", str(path))
        assert code == 1 and "empty corpus" in err

    def test_malformed_line(self, capsys, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"tweet_id": "a"}\n')
        code, _, err = run(capsys, "rates", "--corpus", str(path))
        assert code == 1 and "line 1" in err

    def test_degenerate(self, capsys, tmp_path):
        lines = [json.dumps({"tweet_id": f"t{i}", "user_id": "solo", "kind": "authored",
                             "text": "hope we talk together about it"}) for i in range(12)]
        path = tmp_path / "solo.jsonl"
        path.write_text("\n".join(lines) + "\n")
        code, _, err = run(capsys, "correlate", "--corpus", str(path))
        assert code == 2 and "error:" in err

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["score", "--bogus"])
        code = exc.value.code
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_plant_spec(self, capsys, tmp_path):
        code, _, err = run(capsys, "synth", "--out-dir", str(tmp_path), "--plant", "anger:0.1")
        assert code == 1 and "--plant" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wordengage", "lexicon-validate"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("ok:")
