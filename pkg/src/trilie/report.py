"""Check results shared by every validator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Report:
    """Outcome of a check: ``ok`` plus an optional witness of failure (or success)."""

    name: str
    ok: bool
    witness: Any = None
    details: dict = field(default_factory=dict)
    parts: tuple["Report", ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, name: str, **details) -> "Report":
        return cls(name, True, None, details)

    @classmethod
    def failed(cls, name: str, witness=None, **details) -> "Report":
        return cls(name, False, witness, details)

    @classmethod
    def combine(cls, name: str, parts: Iterable["Report"], **details) -> "Report":
        parts = tuple(parts)
        bad = next((p for p in parts if not p.ok), None)
        return cls(name, bad is None, None if bad is None else (bad.name, bad.witness), details, parts)

    def renamed(self, name: str) -> "Report":
        return Report(name, self.ok, self.witness, self.details, self.parts)

    def part(self, name: str) -> "Report":
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        text = f"{pad}{self.name}: {'pass' if self.ok else 'FAIL'}"
        if not self.ok and self.witness is not None and not self.parts:
            text += f" (witness {self.witness})"
        out = [text]
        for p in self.parts:
            out.extend(p.lines(indent + 1))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
