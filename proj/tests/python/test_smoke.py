import csv
import io
import json
import os
from pathlib import Path

import pytest

import skillcompat

FIXTURES = Path(os.environ.get("SKILLCOMPAT_FIXTURE_DIR", Path(__file__).parent.parent / "fixtures"))

SMALL = """schema = skillcompat-config/1

[experiment]
framework = stt
games = 2
seed = 5
workers = 1
max_plies = 24

[pool]
seed = 3
length = 24

[evaluator]
engine = builtin-strong
nodes = 200

[agent.weak]
kind = builtin-weak

[agent.strong]
kind = builtin-strong
nodes = 200

[team.focal]
senior = strong
junior = weak

[team.alter]
senior = strong
junior = weak
"""


def test_perft_and_moves():
    assert skillcompat.perft(depth=3) == 8902
    assert skillcompat.perft("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", 2) == 191
    assert len(skillcompat.legal_moves("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")) == 20


def test_win_share():
    assert skillcompat.win_share(665, 0, 335) == pytest.approx(66.5)
    assert skillcompat.win_share_se(0, 10, 0) == 0.0


def test_errors_are_translated():
    with pytest.raises(skillcompat.SkillcompatError):
        skillcompat.perft("not a fen", 1)
    with pytest.raises(RuntimeError):
        skillcompat.run("/nonexistent/config.ini")


def test_pipeline(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(SMALL)
    assert skillcompat.config_hash(SMALL) == skillcompat.config_hash("# note\n" + SMALL)

    summaries = skillcompat.run(str(cfg), out=str(tmp_path / "out"))
    assert len(summaries) == 1
    s = summaries[0]
    assert s["n"] + s["aborted"] == 2
    label = s["label"]
    records = tmp_path / "out" / f"{label}.records.jsonl"
    plies = sum(len(json.loads(line)["plies"]) for line in records.read_text().splitlines())

    n = skillcompat.annotate(str(records), str(tmp_path / "losses.jsonl"), config=str(cfg))
    assert n == plies

    text = skillcompat.report(
        [str(tmp_path / "losses.jsonl")], [str(tmp_path / "out" / f"{label}.summary.json")], str(tmp_path / "rep")
    )
    assert text == (tmp_path / "rep" / "report.txt").read_text()
    assert "Mean loss by actor" in text


def test_agreement(tmp_path):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(SMALL)
    rows = list(csv.reader(io.StringIO(skillcompat.agreement(str(cfg), ["weak", "strong"], str(FIXTURES / "corpus.fen")))))
    assert rows[0] == ["agent", "weak", "strong"]
    assert rows[1][1] == rows[2][2] == "1.000000"
    assert rows[1][2] == rows[2][1]
