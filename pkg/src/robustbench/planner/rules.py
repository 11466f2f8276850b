"""Curated domain knowledge: corruptions a plan must or must never contain."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .voting import CorruptionPlan

DOMAIN_IDS = ("driving", "handheld", "manufacturing", "medical", "people", "satellite")

_ALL = frozenset(DOMAIN_IDS)


@dataclass(frozen=True)
class PlanRules:
    """Per-domain whitelist (must select) and blacklist (must not select)."""

    whitelist: Mapping[str, frozenset[str]] = field(default_factory=dict)
    blacklist: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "whitelist", dict(self.whitelist))
        object.__setattr__(self, "blacklist", dict(self.blacklist))
        for domain in self.whitelist.keys() & self.blacklist.keys():
            overlap = self.whitelist[domain] & self.blacklist[domain]
            if overlap:
                raise ValueError(
                    f"domain {domain!r} lists {sorted(overlap)} as both required and forbidden"
                )


def _by_domain(kind_to_domains: Mapping[str, frozenset[str]]) -> dict[str, frozenset[str]]:
    table: dict[str, set[str]] = {}
    for kind, domains in kind_to_domains.items():
        for domain in domains:
            table.setdefault(domain, set()).add(kind)
    return {domain: frozenset(kinds) for domain, kinds in table.items()}


def default_rules() -> PlanRules:
    """The shipped rule set over the six stock domains."""
    whitelist = _by_domain(
        {
            "Brightness": _ALL,
            "Contrast": _ALL,
            "GaussianNoise": _ALL,
            "CloudGenerator": frozenset({"satellite"}),
            "ImageFlipHorizontal": frozenset({"people", "satellite", "handheld"}),
            "MotionBlur": frozenset({"driving", "satellite", "people"}),
            "PerspectiveTransformation": frozenset({"medical", "people", "handheld"}),
            "Rain": frozenset({"driving"}),
            "Shadow": frozenset({"driving"}),
        }
    )
    blacklist = _by_domain(
        {
            "CloudGenerator": frozenset({"medical", "manufacturing", "people"}),
            "ImageFlipVertical": frozenset({"driving", "people"}),
            "Rain": frozenset({"medical", "manufacturing"}),
            "Shadow": frozenset({"medical"}),
        }
    )
    return PlanRules(whitelist=whitelist, blacklist=blacklist)


@dataclass(frozen=True)
class Violation:
    rule: str  # "MissingWhitelisted" | "ForbiddenBlacklisted"
    domain_id: str
    kind: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "domain_id": self.domain_id, "kind": self.kind}


def validate_plan(plan: CorruptionPlan, rules: PlanRules) -> list[Violation]:
    """All rule breaches of a plan; an empty list means conformant."""
    chosen = set(plan.kinds)
    violations = [
        Violation("MissingWhitelisted", plan.domain_id, kind)
        for kind in sorted(rules.whitelist.get(plan.domain_id, frozenset()) - chosen)
    ]
    violations.extend(
        Violation("ForbiddenBlacklisted", plan.domain_id, kind)
        for kind in sorted(rules.blacklist.get(plan.domain_id, frozenset()) & chosen)
    )
    return violations
