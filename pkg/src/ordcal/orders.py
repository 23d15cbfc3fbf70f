"""Tree-like linear orderings on finite ordinals.

A sign sequence ``N`` of length ``max(length - 1, 0)`` orders ``{0, ..., length-1}``:
for ``a < b`` (as integers) we put ``a`` before ``b`` when ``N[a] == +1`` and after
it when ``N[a] == -1``.  The comparison between two ordinals is therefore decided
by the sign of the smaller one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class NotTreeLike(ValueError):
    """Raised when an ordering cannot come from a sign sequence."""


@dataclass(frozen=True)
class TreeOrder:
    length: int
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.signs) != max(self.length - 1, 0):
            raise ValueError(
                f"expected {max(self.length - 1, 0)} signs for length {self.length}, "
                f"got {len(self.signs)}"
            )
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be -1 or +1")

    @classmethod
    def from_signs(cls, signs) -> "TreeOrder":
        signs = tuple(signs)
        return cls(len(signs) + 1, signs)

    def _check(self, *idx):
        for i in idx:
            if not 0 <= i < self.length:
                raise IndexError(f"ordinal {i} out of range for length {self.length}")

    def compare(self, a: int, b: int) -> int:
        """-1 if ``a <_N b``, 0 if equal, +1 if ``b <_N a``."""
        self._check(a, b)
        if a == b:
            return 0
        if a < b:
            return -1 if self.signs[a] == 1 else 1
        return 1 if self.signs[b] == 1 else -1

    def less(self, a: int, b: int) -> bool:
        return self.compare(a, b) < 0

    @cached_property
    def linearization(self) -> tuple[int, ...]:
        # 0 goes in front of (or behind) the order on [1, length), recursively
        out: list[int] = []
        back: list[int] = []
        for a in range(self.length):
            if a == self.length - 1 or self.signs[a] == 1:
                out.append(a)
            else:
                back.append(a)
        return tuple(out + back[::-1])

    @cached_property
    def positions(self) -> dict[int, int]:
        return {a: k for k, a in enumerate(self.linearization)}

    def restrict(self, indices) -> list[int]:
        """The given indices sorted ascending by ``<_N``."""
        pos = self.positions
        return sorted(indices, key=pos.__getitem__)

    def segments(self, alpha: int, mu: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """``(L, R)``: the ordinals below ``mu`` left resp. right of ``[alpha, mu)``."""
        if not 0 <= alpha < mu <= self.length:
            raise IndexError(f"need 0 <= alpha < mu <= {self.length}, got {alpha}, {mu}")
        block = range(alpha, mu)
        left, right = [], []
        for b in range(mu):
            if alpha <= b:
                continue
            if all(self.less(b, g) for g in block):
                left.append(b)
            elif all(self.less(g, b) for g in block):
                right.append(b)
            else:
                raise AssertionError("block [alpha, mu) is not convex")  # pragma: no cover
        return tuple(left), tuple(right)


def linearize(t: TreeOrder) -> list[int]:
    return list(t.linearization)


def compare(t: TreeOrder, a: int, b: int) -> int:
    return t.compare(a, b)


def segments(t: TreeOrder, alpha: int, mu: int):
    return t.segments(alpha, mu)


def reconstruct_signs(order) -> TreeOrder:
    """Recover the sign sequence from an ascending linearization.

    For each ``a`` the block ``[a + 1, length)`` must lie entirely on one side of ``a``.
    """
    order = list(order)
    n = len(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    pos = {a: k for k, a in enumerate(order)}
    signs = []
    for a in range(n - 1):
        after = [pos[b] > pos[a] for b in range(a + 1, n)]
        if all(after):
            signs.append(1)
        elif not any(after):
            signs.append(-1)
        else:
            raise NotTreeLike(f"not tree-like: [{a + 1}, {n}) straddles {a}")
    return TreeOrder(n, tuple(signs))


def is_convex(order_positions: dict[int, int], subset, universe) -> bool:
    """Whether ``subset`` is convex inside ``universe`` for the given positions."""
    subset = set(subset)
    if not subset:
        return True
    lo = min(order_positions[s] for s in subset)
    hi = max(order_positions[s] for s in subset)
    return all(b in subset for b in universe if lo <= order_positions[b] <= hi)
