"""Prompt construction for corruption selection."""

from __future__ import annotations

from dataclasses import dataclass

from ..corruptions import CorruptionKind

_TEMPLATE = """You are an expert in data augmentation for deep learning.

I need augmentation recommendations for the following domain:
"{description}"

Provide a list of augmentation names with a brief explanation of why each is useful in this domain.

The following augmentations are available:
{catalog_block}

Using these augmentations, provide recommendations in the following format:

Example:
1. HistEqualization: Enhancing contrast through histogram equalization is crucial for highlighting subtle differences in knee joint structures. This helps the model identify small variations indicative of arthritis progression.
2. GaussianBlur: Simulates blurring effects that may occur in real-world imaging, helping the model learn to handle reduced detail while still identifying key features.
3. ImageRotation: Slightly rotating images introduces variability to account for different imaging angles. This improves the model's robustness to positional variations in medical scans.

Now, generate recommendations specific to the domain provided."""


@dataclass(frozen=True)
class DomainProfile:
    """An application domain as presented to the planning model."""

    domain_id: str
    description: str
    display_name: str = ""

    def __post_init__(self) -> None:
        if not self.domain_id:
            raise ValueError("domain_id must be nonempty")
        if not self.description.strip():
            raise ValueError("domain description must be nonempty")
        if not self.display_name:
            object.__setattr__(self, "display_name", self.domain_id)


def build_prompt(profile: DomainProfile, kinds: list[CorruptionKind]) -> str:
    """Render the selection prompt for one domain.

    Everything except the quoted domain description is fixed text; the
    catalog block lists each kind as "- Name: description" in catalog order.
    """
    if not kinds:
        raise ValueError("catalog must be nonempty")
    catalog_block = "\n".join(f"- {k.name}: {k.description}" for k in kinds)
    return _TEMPLATE.format(description=profile.description, catalog_block=catalog_block)
