"""Deterministic display names for candidate files that ship without any.

Names are assigned by row order from a fixed list; once the list is
exhausted a numeric suffix keeps them distinct ("Avery", ..., "Avery 2").
"""

from __future__ import annotations

NAMES = (
    "Avery", "Bailey", "Cameron", "Dakota", "Ellis", "Finley", "Gray",
    "Harper", "Indigo", "Jordan", "Kendall", "Logan", "Morgan", "Noel",
    "Oakley", "Parker", "Quinn", "Reese", "Sawyer", "Tatum", "Umber",
    "Vesper", "Winter", "Xen", "Yael", "Zion", "Arden", "Blair", "Casey",
    "Devon", "Emerson", "Frankie", "Greer", "Hollis", "Ira", "Jules",
    "Kai", "Lane", "Marlowe", "Nico", "Onyx", "Peyton", "Ray", "Sage",
    "Teagan", "Uma", "Vale", "Wren", "Xavier", "Yuri", "Zephyr", "Ash",
    "Briar", "Cove", "Dune", "Ember", "Fern", "Gale", "Haven", "Iris",
    "Juno", "Kit", "Lake", "Moss", "North", "Ocean", "Pine", "Quill",
    "Rain", "Sky", "Thorne", "Ursa", "Vega", "West", "Xyla", "York",
    "Zane", "Aspen", "Birch", "Cedar",
)


def name_for(index: int) -> str:
    """Display name for the candidate at 0-based row ``index``."""
    if index < 0:
        raise ValueError(f"index must be non-negative, got {index}")
    base = NAMES[index % len(NAMES)]
    round_ = index // len(NAMES)
    return base if round_ == 0 else f"{base} {round_ + 1}"
