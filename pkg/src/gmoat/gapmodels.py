"""Prime-gap growth models used as step-size budgets.

Each model maps a norm p to the largest step the corresponding conjecture
permits near p:

* RH       c * sqrt(p) * log p
* CRAMER   c * (log p)^2
* BHP      p^(1/2 + delta)      (delta defaults to 0.025, exponent 21/40)
* CONSTANT a fixed value, for calibration runs

Logs are natural by default; use_log10 substitutes base 10 to match the
decimal simplification used by the closed-form dominance tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .arith import NormSegment
from .errors import DomainError


class GapKind(str, Enum):
    RH = "rh"
    CRAMER = "cramer"
    BHP = "bhp"
    CONSTANT = "const"


@dataclass(frozen=True)
class GapModel:
    kind: GapKind
    c: float = 1.0
    delta: float = 0.025
    const_value: float = 1.0
    use_log10: bool = False

    def __post_init__(self):
        if self.c <= 0:
            raise DomainError("gap coefficient c must be positive")
        if self.delta < 0:
            raise DomainError("BHP exponent offset delta must be >= 0")
        if self.const_value <= 0:
            raise DomainError("constant gap value must be positive")

    def describe(self) -> str:
        if self.kind is GapKind.CONSTANT:
            return f"const({self.const_value})"
        if self.kind is GapKind.BHP:
            return f"bhp(delta={self.delta})"
        base = "log10" if self.use_log10 else "ln"
        return f"{self.kind.value}(c={self.c},{base})"


def gap_value(model: GapModel, p: int) -> float:
    """Step budget at norm p (p >= 2)."""
    if p < 2:
        raise DomainError(f"gap models are defined for p >= 2, got {p}")
    if model.kind is GapKind.CONSTANT:
        return model.const_value
    if model.kind is GapKind.BHP:
        return p ** (0.5 + model.delta)
    lg = math.log10(p) if model.use_log10 else math.log(p)
    if model.kind is GapKind.RH:
        return model.c * math.sqrt(p) * lg
    if model.kind is GapKind.CRAMER:
        return model.c * lg * lg
    raise DomainError(f"unknown gap kind {model.kind!r}")


def segment_max_gap(model: GapModel, segment: NormSegment) -> float:
    """Supremum of the step budget over a segment: the value at segment.hi."""
    return gap_value(model, segment.hi)
