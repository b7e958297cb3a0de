"""Python interface to the skillcompat experiment library."""

from ._core import (
    SkillcompatError,
    agreement,
    annotate,
    config_hash,
    legal_moves,
    perft,
    report,
    run,
    win_share,
    win_share_se,
)

__all__ = [
    "SkillcompatError",
    "agreement",
    "annotate",
    "config_hash",
    "legal_moves",
    "perft",
    "report",
    "run",
    "win_share",
    "win_share_se",
]
