"""Validation reports shared by all validators."""

from __future__ import annotations

from dataclasses import dataclass

# C1..C6 follow the six forest axioms; "covering" and "schema" cover
# structural problems that are not one of the six.
TAGS = ("C1", "C2", "C3", "C4", "C5", "C6", "covering", "schema")


@dataclass(frozen=True, order=True)
class Violation:
    tag: str
    where: str
    message: str

    def to_json(self) -> dict:
        return {"tag": self.tag, "where": self.where, "message": self.message}

    def __str__(self):
        return f"[{self.tag}] {self.where}: {self.message}"


def sorted_report(violations) -> list[Violation]:
    return sorted(set(violations))
