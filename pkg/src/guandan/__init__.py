"""GuanDan match simulator: rules engine, per-player encoders, room-based
JSON protocol, baseline agents, and a parallel self-play harness."""

__version__ = "0.1.0"

from .cards import Card, Mode, build_deck, compare_rank, shuffle_deal
from .combos import (
    Combination,
    CombinationType,
    beats,
    classify,
    legal_back_tributes,
    legal_plays,
    legal_tributes,
)

__all__ = [
    "Card",
    "Mode",
    "build_deck",
    "compare_rank",
    "shuffle_deal",
    "Combination",
    "CombinationType",
    "beats",
    "classify",
    "legal_back_tributes",
    "legal_plays",
    "legal_tributes",
    "__version__",
]
