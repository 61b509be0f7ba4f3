from __future__ import annotations

import io
import json

import pytest

from cranno import fixtures
from cranno.cli import main
from cranno.corpus import serialize_corpus
from cranno.recipe import serialize_log


@pytest.fixture
def golden_answers() -> list[str]:
    log = fixtures.golden_log()
    return [entry.answer for entry in log.entries]


class TestReplay:
    def test_records_output_has_six_crs(self, capsys):
        assert main(["replay", "--corpus", "scare_frag", "--session", "golden",
                     "--format", "records"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(line) for line in lines]
        crs = [r for r in records if r["label"] == "cr"]
        assert len(crs) == 6
        assert crs[0] == {"turn": 1, "label": "cr", "source": 0, "level": "L3"}

    def test_text_output(self, capsys):
        assert main(["replay", "--corpus", "scare_frag",
                     "--session", "golden"]) == 0
        out = capsys.readouterr().out
        assert "cabinet nine" in out
        assert "cr L4 src (3)" in out

    def test_missing_corpus_is_data_error(self, capsys):
        assert main(["replay", "--corpus", "nope", "--session", "golden"]) == 1
        assert "error:" in capsys.readouterr().err


class TestValidate:
    def test_clean_corpus(self, capsys, tmp_path):
        path = tmp_path / "ok.jsonl"
        path.write_text(serialize_corpus(fixtures.fragment_corpus()), "utf-8")
        assert main(["validate", "--corpus", str(path)]) == 0
        assert "ok: 17 turns" in capsys.readouterr().out

    def test_gap_in_indices_fails(self, capsys, tmp_path):
        lines = [
            '{"dialogue": "d", "index": 0, "speaker": "A", "kind": "utterance", "text": "x"}',
            '{"dialogue": "d", "index": 2, "speaker": "A", "kind": "utterance", "text": "y"}',
        ]
        path = tmp_path / "broken.jsonl"
        path.write_text("\n".join(lines) + "\n", "utf-8")
        assert main(["validate", "--corpus", str(path)]) == 1
        out = capsys.readouterr().out
        assert "violation" in out
        assert "line 2" in out


class TestStats:
    def test_text(self, capsys):
        assert main(["stats", "--corpus", "scare_frag", "--session", "golden"]) == 0
        out = capsys.readouterr().out
        assert "35.3% of turns" in out

    def test_records(self, capsys):
        assert main(["stats", "--corpus", "scare_frag", "--session", "golden",
                     "--format", "records"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["crs"] == 6
        assert record["turns"] == 17


class TestKappa:
    def test_self_agreement(self, capsys):
        assert main(["kappa", "--corpus", "scare_frag", "--session", "golden",
                     "--session", "golden"]) == 0
        out = capsys.readouterr().out
        assert "kappa: 1.00" in out

    def test_records(self, capsys):
        assert main(["kappa", "--corpus", "scare_frag", "--session", "golden",
                     "--session", "golden", "--format", "records"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["kappa"] == 1.0
        assert record["n_items"] == 17

    def test_needs_two_sessions(self):
        with pytest.raises(SystemExit) as err:
            main(["kappa", "--corpus", "scare_frag", "--session", "golden"])
        assert err.value.code == 2


class TestCompare:
    def test_table4_text(self, capsys):
        assert main(["compare", "--fixtures", "table4"]) == 0
        out = capsys.readouterr().out
        assert "6.8" in out and "3.1" in out
        assert "Scare" in out and "Bielefeld" in out

    def test_records(self, capsys):
        assert main(["compare", "--format", "records"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(line) for line in lines]
        assert len(records) == 4
        assert records[3]["total_turns"] == 11350

    def test_unknown_fixture_set(self, capsys):
        assert main(["compare", "--fixtures", "table9"]) == 1


class TestUsageErrors:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as err:
            main(["replay", "--corpus", "scare_frag"])
        assert err.value.code == 2


class TestCorpusDirResolution:
    def test_env_dir_lookup(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "mine.jsonl").write_text(
            serialize_corpus(fixtures.fragment_corpus()), "utf-8"
        )
        monkeypatch.setenv("CRANNO_CORPUS_DIR", str(tmp_path))
        assert main(["validate", "--corpus", "mine"]) == 0

    def test_bundled_wins_only_as_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CRANNO_CORPUS_DIR", str(tmp_path))
        assert main(["validate", "--corpus", "scare_frag"]) == 0


class TestAnnotateInteractive:
    def test_full_golden_run_writes_identical_file(
        self, tmp_path, monkeypatch, capsys, golden_answers
    ):
        out_path = tmp_path / "mine.session.jsonl"
        monkeypatch.setattr(
            "sys.stdin", io.StringIO("\n".join(golden_answers) + "\n")
        )
        assert main([
            "annotate", "--corpus", "scare_frag", "--dialogue", "s2",
            "--annotator", "golden", "--session", str(out_path),
        ]) == 0
        assert out_path.read_text("utf-8") == serialize_log(fixtures.golden_log())

    def test_autosave_and_resume(self, tmp_path, monkeypatch, capsys,
                                 golden_answers):
        out_path = tmp_path / "mine.session.jsonl"
        first, rest = golden_answers[:10], golden_answers[10:]
        monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(first) + "\nquit\n"))
        assert main([
            "annotate", "--corpus", "scare_frag", "--dialogue", "s2",
            "--annotator", "golden", "--session", str(out_path),
        ]) == 0
        partial = out_path.read_text("utf-8")
        assert len(partial.splitlines()) == 11  # header + ten answers
        monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(rest) + "\n"))
        assert main([
            "annotate", "--corpus", "scare_frag", "--dialogue", "s2",
            "--annotator", "golden", "--session", str(out_path),
        ]) == 0
        assert out_path.read_text("utf-8") == serialize_log(fixtures.golden_log())
        assert "resuming session at answer 10" in capsys.readouterr().err

    def test_illegal_answer_reprompts(self, tmp_path, monkeypatch, capsys):
        out_path = tmp_path / "mine.session.jsonl"
        monkeypatch.setattr("sys.stdin", io.StringIO("bogus\nyes\nquit\n"))
        assert main([
            "annotate", "--corpus", "scare_frag", "--dialogue", "s2",
            "--annotator", "a1", "--session", str(out_path),
        ]) == 0
        assert "error:" in capsys.readouterr().err
        assert len(out_path.read_text("utf-8").splitlines()) == 2

    def test_resume_identity_mismatch(self, tmp_path, monkeypatch):
        out_path = tmp_path / "mine.session.jsonl"
        out_path.write_text(serialize_log(fixtures.golden_log()), "utf-8")
        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        assert main([
            "annotate", "--corpus", "scare_frag", "--dialogue", "s2",
            "--annotator", "someone_else", "--session", str(out_path),
        ]) == 1
