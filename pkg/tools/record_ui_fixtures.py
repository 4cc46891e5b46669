"""Record real service responses as JSON fixtures for the frontend tests.

Each fixture file captures one HTTP exchange: the request (method, path,
body) and the response (status, parsed JSON).  The frontend test suite
replays these through a fetch stub, so every value the UI renders in tests
is a value the real service produced.

Run from the repo root after any change to the service surface:

    python tools/record_ui_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from fairfuse.service import create_app
from fairfuse.session import SessionStore

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "src" / "test" / "fixtures"
DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "fairfuse" / "fixtures"

SINGLETON_CANDIDATES = """id,name,team\ns1,Vega,North\ns2,Wren,South\n"""
SINGLETON_RANKINGS = """position,R1\n1,s1\n2,s2\n"""


def record(client: TestClient, name: str, method: str, path: str, body: dict | None) -> dict:
    if method == "GET":
        resp = client.get(path)
    elif method == "DELETE":
        resp = client.delete(path)
    else:
        resp = client.post(path, json=body)
    fixture = {
        "request": {"method": method, "path": path, "body": body},
        "status": resp.status_code,
        "response": resp.json(),
    }
    out = FIXTURE_DIR / f"{name}.json"
    out.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"{name}: {method} {path} -> {resp.status_code}")
    return fixture["response"]


def main(tmp_dir: str) -> int:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    store = SessionStore(tmp_dir)
    client = TestClient(create_app(store))

    candidates = (DATA_DIR / "employee_candidates.csv").read_text(encoding="utf-8")
    rankings = (DATA_DIR / "employee_rankings.csv").read_text(encoding="utf-8")

    created = record(
        client,
        "employee_create",
        "POST",
        "/sessions",
        {"protected": "role", "candidates_csv": candidates, "rankings_csv": rankings},
    )
    sid = created["session_id"]

    consensus = record(
        client,
        "employee_consensus_t09",
        "POST",
        f"/sessions/{sid}/consensus",
        {"t": 0.9},
    )
    gen_id = consensus["result"]["ranking"]["id"]
    print(f"  consensus feasible={consensus['result']['feasible']} "
          f"achieved={consensus['result']['achieved_arp']}")

    # The sole HR candidate; dragging it to the top maximises the HR rate.
    edited = record(
        client,
        "employee_edit_up",
        "POST",
        f"/sessions/{sid}/rankings/{gen_id}/edit",
        {"candidate": "e01", "position": 1},
    )
    edited_id = edited["ranking"]["id"]
    print(f"  edit -> {edited_id} hr_fpr={edited['report']['per_group']['Human Resources']['fpr']}")

    record(
        client,
        "employee_edit_noop",
        "POST",
        f"/sessions/{sid}/rankings/{edited_id}/edit",
        {"candidate": "e01", "position": 1},
    )
    record(client, "employee_similarity", "GET", f"/sessions/{sid}/similarity", None)
    record(client, "employee_session", "GET", f"/sessions/{sid}", None)
    record(
        client,
        "employee_consensus_bad_t",
        "POST",
        f"/sessions/{sid}/consensus",
        {"t": 1.5},
    )
    record(
        client,
        "employee_edit_base_rejected",
        "POST",
        f"/sessions/{sid}/rankings/base:R1/edit",
        {"candidate": "e01", "position": 2},
    )

    single = record(
        client,
        "singleton_create",
        "POST",
        "/sessions",
        {
            "protected": "team",
            "candidates_csv": SINGLETON_CANDIDATES,
            "rankings_csv": SINGLETON_RANKINGS,
        },
    )
    record(
        client,
        "singleton_consensus_t1",
        "POST",
        f"/sessions/{single['session_id']}/consensus",
        {"t": 1.0},
    )
    return 0


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        sys.exit(main(tmp))
