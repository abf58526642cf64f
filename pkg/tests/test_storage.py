from __future__ import annotations

import sqlite3
from pathlib import Path

from src.storage import init_db, insert_checks, insert_summary, load_checks
from src.verify import CheckOutcome

OUTCOMES = [
    CheckOutcome(0, "partition", True, "V=4 E=5"),
    CheckOutcome(0, "deletion", True, "V=5 E=6"),
    CheckOutcome(0, "contraction", False, "V=5 E=6 rejected contractions=[4]", informational=True),
    CheckOutcome(1, "amplitude", False, "n=3 N=2"),
]


def test_checks_round_trip(tmp_path: Path) -> None:
    db = tmp_path / "verify.sqlite3"
    init_db(db)
    insert_checks("run-a", 7, OUTCOMES, db_path=db)
    insert_checks("run-b", 8, OUTCOMES[:1], db_path=db)

    rows = load_checks("run-a", db_path=db)
    assert [(r[0], r[1], r[2]) for r in rows] == [
        (0, "partition", 1),
        (0, "deletion", 1),
        (0, "contraction", 0),
        (1, "amplitude", 0),
    ]
    assert len(load_checks("run-b", db_path=db)) == 1
    assert load_checks("run-c", db_path=db) == []


def test_summary_ignores_informational_failures(tmp_path: Path) -> None:
    db = tmp_path / "verify.sqlite3"
    init_db(db)
    insert_summary("run-a", 7, 2, OUTCOMES, db_path=db)
    with sqlite3.connect(db) as conn:
        row = conn.execute("SELECT seed, count, checks, failures FROM verify_summary WHERE run_id = 'run-a'").fetchone()
    assert row == (7, 2, 4, 1)


def test_init_db_is_idempotent(tmp_path: Path) -> None:
    db = tmp_path / "verify.sqlite3"
    init_db(db)
    init_db(db)
    assert load_checks("anything", db_path=db) == []
