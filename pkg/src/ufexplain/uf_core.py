"""Union-find forests over the elements 0..n-1.

Two representations live here:

* :class:`IntForest` -- the canonical forest, encoded as a single list of
  signed integers.  A negative cell marks a root and stores the class size
  as its absolute value; a non-negative cell is a parent pointer.  All
  operations are functional: unions return a new forest.
* :class:`CompressedForest` -- a plain parent-pointer forest (self-loop at
  roots) that compresses paths during finds.  It is mutable and exists so
  that rep queries can be answered fast without disturbing the canonical
  forest, whose shape the explain machinery depends on.
"""

from __future__ import annotations

from .errors import CorruptForestError, OutOfRangeError

__all__ = ["IntForest", "CompressedForest"]


class IntForest:
    """Signed-integer union-find forest; treat instances as immutable."""

    __slots__ = ("cells",)

    def __init__(self, cells):
        self.cells = list(cells)

    @classmethod
    def init(cls, n: int) -> "IntForest":
        """A forest of n singleton classes (n = 0 is allowed)."""
        if n < 0:
            raise OutOfRangeError(f"element count must be non-negative, got {n}")
        return cls([-1] * n)

    @property
    def n(self) -> int:
        return len(self.cells)

    def _check(self, x: int) -> None:
        if not 0 <= x < len(self.cells):
            raise OutOfRangeError(f"element {x} outside 0..{len(self.cells) - 1}")

    def parent_of(self, x: int) -> int:
        """Parent of x; x itself when x is a root."""
        self._check(x)
        c = self.cells[x]
        return x if c < 0 else c

    def rep_of(self, x: int) -> int:
        """Root of x's class, following parent pointers.

        Bounded by n steps; exceeding that means the forest is corrupt.
        """
        self._check(x)
        cells = self.cells
        v = x
        for _ in range(len(cells) + 1):
            c = cells[v]
            if c < 0:
                return v
            v = c
        raise CorruptForestError(f"parent pointers from {x} do not reach a root")

    def union(self, x: int, y: int) -> "IntForest":
        """Merge the classes of x and y by pointing rep(x) at rep(y).

        A no-op (the same forest) when x and y are already equivalent.
        """
        rx = self.rep_of(x)
        ry = self.rep_of(y)
        if rx == ry:
            return self
        cells = list(self.cells)
        cells[ry] += cells[rx]  # both negative: sizes add up
        cells[rx] = ry
        return IntForest(cells)

    def union_size(self, x: int, y: int) -> "IntForest":
        """Merge by size: the smaller class is attached beneath the larger.

        Ties attach y's root beneath x's root.
        """
        rx = self.rep_of(x)
        ry = self.rep_of(y)
        if rx == ry:
            return self
        if -self.cells[rx] < -self.cells[ry]:
            return self.union(x, y)
        return self.union(y, x)

    def size(self, x: int) -> int:
        """Number of elements in x's class."""
        return -self.cells[self.rep_of(x)]

    def eq_class(self, x: int) -> set:
        """All elements equivalent to x, by a linear scan."""
        r = self.rep_of(x)
        return {y for y in range(len(self.cells)) if self.rep_of(y) == r}

    def parent_array(self) -> list:
        """Parent pointers with self-loops at roots (golden-shape form)."""
        return [self.parent_of(x) for x in range(len(self.cells))]

    def rep_table(self) -> list:
        """rep_of for every element, as a list."""
        return [self.rep_of(x) for x in range(len(self.cells))]

    def check_invariants(self) -> None:
        """Raise CorruptForestError unless the signed encoding is sound.

        Checks the pointer bound, acyclicity (every walk reaches a root),
        and the size bookkeeping at the roots.
        """
        n = len(self.cells)
        sizes = {}
        for i, c in enumerate(self.cells):
            if c >= n:
                raise CorruptForestError(f"cell {i} points outside the forest")
            if c < 0:
                sizes[i] = -c
        if sum(sizes.values()) != n:
            raise CorruptForestError("root sizes do not sum to the element count")
        counts = {r: 0 for r in sizes}
        for x in range(n):
            counts[self.rep_of(x)] += 1  # rep_of also detects cycles
        if counts != sizes:
            raise CorruptForestError("recorded sizes disagree with class sizes")

    def __eq__(self, other):
        return isinstance(other, IntForest) and self.cells == other.cells

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"IntForest({self.cells!r})"


class CompressedForest:
    """Mutable parent-pointer forest with full path compression on find."""

    __slots__ = ("parents",)

    def __init__(self, parents):
        self.parents = list(parents)

    @classmethod
    def init(cls, n: int) -> "CompressedForest":
        if n < 0:
            raise OutOfRangeError(f"element count must be non-negative, got {n}")
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.parents)

    def _check(self, x: int) -> None:
        if not 0 <= x < len(self.parents):
            raise OutOfRangeError(f"element {x} outside 0..{len(self.parents) - 1}")

    def find_compress(self, x: int) -> int:
        """Root of x; repoints every node on the walk directly at the root."""
        self._check(x)
        parents = self.parents
        r = x
        for _ in range(len(parents) + 1):
            p = parents[r]
            if p == r:
                break
            r = p
        else:
            raise CorruptForestError(f"parent pointers from {x} do not reach a root")
        v = x
        while parents[v] != r:
            parents[v], v = r, parents[v]
        return r

    def union(self, x: int, y: int) -> None:
        """Point the root of x's class at the root of y's class."""
        rx = self.find_compress(x)
        ry = self.find_compress(y)
        if rx != ry:
            self.parents[rx] = ry

    def rep_table(self) -> list:
        return [self.find_compress(x) for x in range(len(self.parents))]

    def __repr__(self):
        return f"CompressedForest({self.parents!r})"
