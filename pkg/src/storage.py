"""SQLite ledger for ``verify`` runs.

Two tables:

* **verify_checks**: one row per (instance, check) pair.  Stores the
  check name, pass/fail flag and a short detail string; rows of one
  run share a run_id.

* **verify_summary**: one row per run.  Stores the seed, instance count,
  number of checks performed and number of failures.
"""

from __future__ import annotations

import sqlite3
from pathlib import Path
from typing import Iterable

from .verify import CheckOutcome

DB_PATH: Path = Path("verify.sqlite3")

_CREATE_CHECKS = """\
CREATE TABLE IF NOT EXISTS verify_checks (
    run_id      TEXT,
    seed        INTEGER,
    instance    INTEGER,
    check_name  TEXT,
    passed      INTEGER,
    detail      TEXT
);
"""

_CREATE_SUMMARY = """\
CREATE TABLE IF NOT EXISTS verify_summary (
    run_id      TEXT,
    seed        INTEGER,
    count       INTEGER,
    checks      INTEGER,
    failures    INTEGER
);
"""


def get_conn(db_path: Path | str | None = None) -> sqlite3.Connection:
    """Return a new SQLite connection to *db_path* (default :data:`DB_PATH`)."""
    path = Path(db_path) if db_path is not None else DB_PATH
    return sqlite3.connect(str(path))


def init_db(db_path: Path | str | None = None) -> None:
    """Create the ``verify_checks`` and ``verify_summary`` tables if absent."""
    conn = get_conn(db_path)
    try:
        conn.execute(_CREATE_CHECKS)
        conn.execute(_CREATE_SUMMARY)
        conn.commit()
    finally:
        conn.close()


def insert_checks(
    run_id: str,
    seed: int,
    outcomes: Iterable[CheckOutcome],
    *,
    db_path: Path | str | None = None,
) -> None:
    conn = get_conn(db_path)
    try:
        conn.executemany(
            """
            INSERT INTO verify_checks
                (run_id, seed, instance, check_name, passed, detail)
            VALUES (?, ?, ?, ?, ?, ?)
            """,
            [(run_id, seed, o.instance, o.check, 1 if o.passed else 0, o.detail) for o in outcomes],
        )
        conn.commit()
    finally:
        conn.close()


def insert_summary(
    run_id: str,
    seed: int,
    count: int,
    outcomes: list[CheckOutcome],
    *,
    db_path: Path | str | None = None,
) -> None:
    """Persist the run totals; informational outcomes count as checks but never as failures."""
    failures = sum(1 for o in outcomes if not o.passed and not o.informational)
    conn = get_conn(db_path)
    try:
        conn.execute(
            """
            INSERT INTO verify_summary
                (run_id, seed, count, checks, failures)
            VALUES (?, ?, ?, ?, ?)
            """,
            (run_id, seed, count, len(outcomes), failures),
        )
        conn.commit()
    finally:
        conn.close()


def load_checks(run_id: str, *, db_path: Path | str | None = None) -> list[tuple]:
    conn = get_conn(db_path)
    try:
        rows = conn.execute(
            "SELECT instance, check_name, passed, detail FROM verify_checks "
            "WHERE run_id = ? ORDER BY rowid",
            (run_id,),
        ).fetchall()
    finally:
        conn.close()
    return rows
