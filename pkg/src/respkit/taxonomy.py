"""Review item types, response action labels, and their stance classes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError

ITEM_TYPES = ("Criticism", "Question", "Request")

STANCES = ("Cooperative", "Defensive", "Hedge", "Social", "Other")

# 16 response action labels grouped into the five stance classes.
ACTION_STANCE = {
    "answer question": "Cooperative",
    "task has been done": "Cooperative",
    "task will be done in next version": "Cooperative",
    "accept for future work": "Cooperative",
    "concede criticism": "Cooperative",
    "refute question": "Defensive",
    "reject criticism": "Defensive",
    "contradict assertion": "Defensive",
    "reject request": "Defensive",
    "mitigate importance of the question": "Hedge",
    "mitigate criticism": "Hedge",
    "social": "Social",
    "follow-up question": "Other",
    "structure": "Other",
    "summarize": "Other",
    "other": "Other",
}

ACTIONS = tuple(ACTION_STANCE)

# Stance classes that carry argumentative load.
ARGUMENTATIVE_STANCES = ("Cooperative", "Defensive", "Hedge")


def stance_of(action: str) -> str:
    """Map an action label to its stance class."""
    try:
        return ACTION_STANCE[action]
    except KeyError:
        raise ValidationError(f"unknown response action label: {action!r}") from None


def is_action(label: str) -> bool:
    return label in ACTION_STANCE


@dataclass
class ReviewItem:
    """A typed span within a review that requires a response."""

    item_id: str
    item_type: str
    span: str

    def __post_init__(self):
        if self.item_type not in ITEM_TYPES:
            raise ValidationError(f"unknown review item type: {self.item_type!r}")
        if not self.span:
            raise ValidationError(f"review item {self.item_id} has an empty span")


@dataclass
class ResponsePlan:
    """Ordered response action labels per review item."""

    actions_by_item: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for item_id, labels in self.actions_by_item.items():
            for label in labels:
                if not is_action(label):
                    raise ValidationError(
                        f"plan for item {item_id} uses unknown action {label!r}"
                    )

    def flat_labels(self, item_order: list[str] | None = None) -> list[str]:
        """Plan actions as one sequence, following item order then in-item order."""
        keys = item_order if item_order is not None else list(self.actions_by_item)
        out: list[str] = []
        for key in keys:
            out.extend(self.actions_by_item.get(key, []))
        return out

    def is_empty(self) -> bool:
        return not any(self.actions_by_item.values())
