"""Integer-indexed chains of subspaces of a module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import DimensionError
from .exactnum import linalg as la


@dataclass(frozen=True, eq=False)
class Flag:
    """Subspaces ``F_lo, ..., F_hi`` of ``Scalar^ambient_dim``.

    Outside the stored range the flag is extended by ``F_i = 0`` for ``i < lo``
    and ``F_i = V`` for ``i > hi``.  Two flags compare equal when they agree at
    every index after this extension.
    """

    ambient_dim: int
    lo: int
    subspaces: tuple

    @classmethod
    def from_mapping(cls, ambient_dim: int, spaces: Mapping[int, la.SubspaceBasis]) -> "Flag":
        if not spaces:
            return cls(ambient_dim, 0, ())
        lo, hi = min(spaces), max(spaces)
        subs = []
        for i in range(lo, hi + 1):
            s = spaces[i]
            if s.ambient_dim != ambient_dim:
                raise DimensionError("flag member has the wrong ambient dimension")
            subs.append(s)
        return cls(ambient_dim, lo, tuple(subs))

    @classmethod
    def trivial(cls, ambient_dim: int, at: int = 0) -> "Flag":
        """``F_i = 0`` for ``i < at`` and ``F_i = V`` from ``at`` on."""
        return cls(ambient_dim, at, (la.full_space(ambient_dim),))

    @property
    def hi(self) -> int:
        return self.lo + len(self.subspaces) - 1

    def at(self, i: int) -> la.SubspaceBasis:
        if i < self.lo:
            return la.zero_space(self.ambient_dim)
        if i > self.hi:
            return la.full_space(self.ambient_dim)
        return self.subspaces[i - self.lo]

    __getitem__ = at

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_nested(self) -> bool:
        return all(la.subspace_contains(self.at(i + 1), self.at(i)) for i in self.indices())

    def dims(self) -> list[tuple[int, int]]:
        return [(i, self.at(i).dim) for i in self.indices()]

    def codims(self) -> list[tuple[int, int]]:
        return [(i, self.ambient_dim - self.at(i).dim) for i in self.indices()]

    def image(self, g) -> "Flag":
        """The flag ``g F`` for a constant matrix ``g``."""
        return Flag(self.ambient_dim, self.lo, tuple(s.image(g) for s in self.subspaces))

    def canonical(self) -> tuple:
        """Hashable key: the stored range trimmed of leading zeros and trailing ``V``."""
        subs = list(self.subspaces)
        lo = self.lo
        while subs and subs[0].is_zero():
            subs.pop(0)
            lo += 1
        while subs and subs[-1].is_full():
            subs.pop()
        if not subs:
            # a pure step 0 | V; the step position is what matters
            return (self.ambient_dim, lo, ())
        return (self.ambient_dim, lo, tuple(s.basis for s in subs))

    def __eq__(self, other):
        if not isinstance(other, Flag):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Flag(dim={self.ambient_dim}, " + ", ".join(f"F{i}:{d}" for i, d in self.dims()) + ")"
