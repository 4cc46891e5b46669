"""Bundled demonstration datasets (see tools/generate_fixtures.py)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

FIXTURE_NAMES = (
    "scholarship_candidates.csv",
    "scholarship_scores.csv",
    "employee_candidates.csv",
    "employee_rankings.csv",
)


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled CSV (installed packages keep real files)."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {FIXTURE_NAMES}")
    return Path(str(resources.files(__package__).joinpath(name)))
