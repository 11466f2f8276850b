"""LLM-guided corruption planning: prompt, parse, vote, validate."""

from .clients import API_KEY_ENV, ChatClient, HttpChatClient, TranscriptReplayClient
from .parsing import SelectionRun, parse_response
from .prompt import DomainProfile, build_prompt
from .rules import DOMAIN_IDS, PlanRules, Violation, default_rules, validate_plan
from .voting import (
    CorruptionPlan,
    PlanEntry,
    extract_plan,
    load_plan,
    select_plan,
    selection_heatmap,
    tally_votes,
)

__all__ = [
    "API_KEY_ENV",
    "ChatClient",
    "HttpChatClient",
    "TranscriptReplayClient",
    "SelectionRun",
    "parse_response",
    "DomainProfile",
    "build_prompt",
    "DOMAIN_IDS",
    "PlanRules",
    "Violation",
    "default_rules",
    "validate_plan",
    "CorruptionPlan",
    "PlanEntry",
    "extract_plan",
    "load_plan",
    "select_plan",
    "selection_heatmap",
    "tally_votes",
]
