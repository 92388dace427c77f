from __future__ import annotations
from typing import NewType

# Typed integers (keep chain degrees, tower positions and primes apart)
Degree     = NewType("Degree", int)
LevelIndex = NewType("LevelIndex", int)
Prime      = NewType("Prime", int)

__all__ = ["Degree", "LevelIndex", "Prime"]
