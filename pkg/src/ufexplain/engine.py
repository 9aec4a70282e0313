"""Imperative, array-backed union-find engine with certificate queries.

An :class:`Engine` owns four flat structures: the signed by-size forest,
the associated-union array, a dynamically grown union log, and a
path-compressed twin forest.  Rep queries (``find``/``same_class``) go to
the twin, which may flatten paths at will; ``explain`` walks the untouched
by-size forest, whose shape the annotations describe.

The log records unions exactly as the caller passed them, even when the
by-size heuristic attaches in the opposite direction; the annotation at
the losing root plus a subtree check during explain recover the
orientation.

The hot loops live in a kernel chosen at import time: the compiled
extension ``ufexplain._speedups`` when it has been built, else the pure
Python twin ``ufexplain._kernel_py``.  Both implement one documented
contract and every Engine accepts a ``backend`` override, which is how the
benchmark compares the two.
"""

from __future__ import annotations

from array import array
from typing import List, Optional, Tuple

from . import _kernel_py
from .certificates import EqProof, Refl
from .errors import (
    CorruptForestError,
    FuelExhaustedError,
    OutOfRangeError,
    record_fuel_exhaustion,
)
from .ufe_log import Policy, REDUNDANT, UfeState, ufe_init, ufe_union

try:
    from . import _speedups
except ImportError:  # extension not built; the pure kernel is always there
    _speedups = None

__all__ = ["DynArray", "Engine", "available_backends", "default_backend"]


def available_backends() -> List[str]:
    backends = ["pure"]
    if _speedups is not None:
        backends.insert(0, "compiled")
    return backends


def default_backend() -> str:
    return "compiled" if _speedups is not None else "pure"


def _resolve_kernel(backend: str):
    if backend == "auto":
        return _speedups if _speedups is not None else _kernel_py
    if backend == "pure":
        return _kernel_py
    if backend == "compiled":
        if _speedups is None:
            raise RuntimeError(
                "compiled backend requested but ufexplain._speedups is not built"
            )
        return _speedups
    raise ValueError(f"unknown backend {backend!r}")


class DynArray:
    """Growable store of int pairs over one flat signed-64-bit buffer.

    Doubles its capacity when full, so pushes are amortized constant; the
    ``element_copies`` counter records how many stored entries have been
    moved by growth so the amortization claim is testable.
    """

    __slots__ = ("storage", "length", "capacity", "element_copies")

    INITIAL_CAPACITY = 4

    def __init__(self):
        self.capacity = self.INITIAL_CAPACITY
        self.storage = array("q", bytes(16 * self.capacity))
        self.length = 0
        self.element_copies = 0

    def __len__(self) -> int:
        return self.length

    def push(self, a: int, b: int) -> None:
        if self.length == self.capacity:
            self.capacity *= 2
            grown = array("q", bytes(16 * self.capacity))
            grown[: 2 * self.length] = self.storage
            self.storage = grown
            self.element_copies += self.length
        i = 2 * self.length
        self.storage[i] = a
        self.storage[i + 1] = b
        self.length += 1

    def entry(self, i: int) -> Tuple[int, int]:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.storage[2 * i], self.storage[2 * i + 1])

    def pairs(self) -> List[Tuple[int, int]]:
        s = self.storage
        m = self.length
        return list(zip(s[0 : 2 * m : 2], s[1 : 2 * m : 2]))


class Engine:
    """Union-find over 0..n-1 answering find, union, and explain queries."""

    __slots__ = ("_n", "_kernel", "_backend", "_cells", "_au", "_twin", "_log", "_out")

    def __init__(self, n: int, backend: str = "auto"):
        if n < 0:
            raise OutOfRangeError(f"element count must be non-negative, got {n}")
        self._n = n
        self._kernel = _resolve_kernel(backend)
        self._backend = "compiled" if getattr(self._kernel, "compiled", False) else "pure"
        self._cells = array("q", [-1]) * n if n else array("q")
        self._au = array("q", [-1]) * n if n else array("q")
        self._twin = array("q", range(n))
        self._log = DynArray()
        self._out = array("q")

    @property
    def n(self) -> int:
        return self._n

    @property
    def backend_name(self) -> str:
        return self._backend

    def _check(self, x: int) -> None:
        if not 0 <= x < self._n:
            raise OutOfRangeError(f"element {x} outside 0..{self._n - 1}")

    def add_union(self, a: int, b: int) -> bool:
        """Merge the classes of a and b; False when already merged.

        Effective unions are appended to the log as (a, b) and annotate
        whichever root lost the by-size comparison.
        """
        self._check(a)
        self._check(b)
        child, winner = self._kernel.union_size(self._cells, a, b)
        if child < 0:
            return False
        self._au[child] = self._log.length
        self._log.push(a, b)
        # Mirror the attach direction so twin reps match forest reps.
        rc = self._kernel.find_compress(self._twin, child)
        rw = self._kernel.find_compress(self._twin, winner)
        self._twin[rc] = rw
        return True

    def find(self, x: int) -> int:
        """Representative of x, answered by the path-compressed twin."""
        self._check(x)
        return self._kernel.find_compress(self._twin, x)

    def same_class(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)

    def explain(self, x: int, y: int) -> Optional[EqProof]:
        """Certificate that x = y, or None when they are not equivalent.

        Total: out-of-range distinct elements yield None; x = y is always
        certified by reflexivity.  The returned proof validates against
        ``log_pairs()`` and concludes exactly (x, y).
        """
        if x == y:
            return Refl(x) if x >= 0 else None
        if not (0 <= x < self._n and 0 <= y < self._n):
            return None
        if not self.same_class(x, y):
            return None
        log_len = self._log.length
        # Sized so the fuel budget (2*log_len + 2 expansions, <= 5 ops each
        # plus one) always trips before the opcode buffer can fill, even on
        # corrupt state.
        need = 2 * (10 * log_len + 12)
        if len(self._out) < need:
            self._out = array("q", bytes(8 * need))
        try:
            nops = self._kernel.explain_ops(
                self._cells, self._au, self._log.storage, log_len, x, y, self._out
            )
        except FuelExhaustedError:
            record_fuel_exhaustion()
            raise
        return self._kernel.build_proof(self._out, nops)

    def snapshot(self) -> UfeState:
        """The functional by-size state obtained by replaying the log."""
        st = ufe_init(self._n, Policy.BY_SIZE)
        for a, b in self._log.pairs():
            nxt = ufe_union(st, a, b)
            if nxt is REDUNDANT:
                raise CorruptForestError("engine log contains a redundant union")
            st = nxt
        return st

    # Read-only views of the internal arrays, for tests and refinement checks.

    def forest_cells(self) -> List[int]:
        return list(self._cells)

    def au_entries(self) -> List[Optional[int]]:
        return [None if v < 0 else v for v in self._au]

    def log_pairs(self) -> List[Tuple[int, int]]:
        return self._log.pairs()

    def twin_parents(self) -> List[int]:
        return list(self._twin)

    def log_element_copies(self) -> int:
        return self._log.element_copies
