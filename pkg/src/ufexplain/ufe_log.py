"""The functional union-find-with-explain value and the naive explain.

A :class:`UfeState` couples a forest with the chronological log of the
unions that built it, starting from singletons.  Only *effective* unions
(arguments in distinct classes at the time) are ever logged; redundant ones
are answered with the :data:`REDUNDANT` signal and leave the state alone.

:func:`explain_naive` is the slow, obviously-correct certificate builder:
it peels the log from the most recent union backwards, emitting an
assumption step whenever the peeled union is what connected the two query
elements.  The fast path (:mod:`ufexplain.ufe_fast`) and the imperative
engine are both tested against it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .certificates import (
    OP_ASSM,
    OP_REFL,
    OP_SYM,
    OP_TRANS,
    EqProof,
    Refl,
    proof_from_ops,
)
from .errors import EmptyLogError, OutOfRangeError
from .uf_core import IntForest

__all__ = [
    "Policy",
    "UfeState",
    "REDUNDANT",
    "ufe_init",
    "ufe_union",
    "rollback",
    "explain_naive",
    "explain_partial",
    "replay_forest",
    "prefix_rep_tables",
    "is_well_formed",
]


class Policy(enum.Enum):
    """How logged unions are replayed into the forest."""

    RAW = "raw"          # rep(a) is always attached beneath rep(b)
    BY_SIZE = "by_size"  # the smaller class is attached beneath the larger


class _Redundant:
    """Singleton signal: the requested union would not change the relation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "REDUNDANT"


REDUNDANT = _Redundant()


def _apply_union(forest: IntForest, policy: Policy, a: int, b: int) -> IntForest:
    if policy is Policy.RAW:
        return forest.union(a, b)
    return forest.union_size(a, b)


@dataclass(frozen=True)
class UfeState:
    """Immutable forest + union log; build via ufe_init/ufe_union."""

    n: int
    policy: Policy
    unions: Tuple[Tuple[int, int], ...]
    forest: IntForest

    def rep_of(self, x: int) -> int:
        return self.forest.rep_of(x)


def ufe_init(n: int, policy: Policy = Policy.RAW) -> UfeState:
    """A state over n elements with an empty log."""
    return UfeState(n, policy, (), IntForest.init(n))


def ufe_union(st: UfeState, a: int, b: int) -> Union[UfeState, _Redundant]:
    """Append the effective union (a, b), or signal that it is redundant."""
    ra = st.forest.rep_of(a)  # also range-checks
    rb = st.forest.rep_of(b)
    if ra == rb:
        return REDUNDANT
    forest = _apply_union(st.forest, st.policy, a, b)
    return UfeState(st.n, st.policy, st.unions + ((a, b),), forest)


def rollback(st: UfeState) -> UfeState:
    """Undo the most recent union by replaying the shortened log."""
    if not st.unions:
        raise EmptyLogError("rollback on an empty union log")
    unions = st.unions[:-1]
    return UfeState(st.n, st.policy, unions, replay_forest(st.n, st.policy, unions))


def replay_forest(n: int, policy: Policy, unions) -> IntForest:
    forest = IntForest.init(n)
    for a, b in unions:
        forest = _apply_union(forest, policy, a, b)
    return forest


def prefix_rep_tables(st: UfeState) -> List[List[int]]:
    """rep tables for every log prefix: tables[k][x] = rep of x after k unions.

    Built incrementally in O(|unions| * n); the naive explain recursion
    consults these instead of re-deriving rollback states pair by pair.
    """
    n = st.n
    reps = [list(range(n))]
    forest = IntForest.init(n)
    for a, b in st.unions:
        prev = reps[-1]
        ra = prev[a]
        rb = prev[b]
        forest = _apply_union(forest, st.policy, a, b)
        winner = forest.rep_of(a)
        child = ra if winner == rb else rb
        reps.append([winner if r == child else r for r in prev])
    return reps


def _naive_ops(reps, unions, x: int, y: int) -> List[int]:
    """Flat postfix opcode stream [tag, arg, ...] of the naive recursion.

    Precondition: x and y share a class after all of ``unions``.  The
    recursion is run on an explicit stack so certificates may nest
    arbitrarily deep.  Levels at which the most recent union is redundant
    for (x, y) are skipped wholesale by binary search over the prefix
    tables (connectivity is monotone in the prefix length); the emitted
    tree is identical to peeling them one by one.

    Stack encoding: a tuple (p, q, k) is a pending sub-certificate under
    log prefix k; a bare int m >= 0 emits the assumption step for union m,
    -1 emits transitivity, and -2 emits symmetry.
    """
    out = []
    emit = out.append
    stack = [(x, y, len(unions))]
    push = stack.append
    pop = stack.pop
    while stack:
        item = pop()
        if type(item) is int:
            if item >= 0:
                emit(OP_ASSM)
                emit(item)
            elif item == -1:
                emit(OP_TRANS)
                emit(0)
            else:
                emit(OP_SYM)
                emit(0)
            continue
        p, q, hi = item
        lo = 0
        if p != q:
            while lo < hi:
                mid = (lo + hi) >> 1
                if reps[mid][p] == reps[mid][q]:
                    hi = mid
                else:
                    lo = mid + 1
        if lo == 0:
            emit(OP_REFL)
            emit(p)
            continue
        m = lo - 1
        a, b = unions[m]
        r = reps[m]
        if r[p] == r[a]:
            push(-1)
            push((b, q, m))
            push(-1)
            push(m)
            push((p, a, m))
        else:
            push(-1)
            push((a, q, m))
            push(-1)
            push(-2)
            push(m)
            push((p, b, m))
    return out


def explain_naive(st: UfeState, x: int, y: int) -> EqProof:
    """Certificate for x = y built by peeling the union log backwards.

    Assumes (x, y) is in the equivalence closure of the log; on other
    inputs the result is still a proof term, just not one that concludes
    (x, y).  Use :func:`explain_partial` for validated queries.
    """
    if not (0 <= x < st.n and 0 <= y < st.n):
        raise OutOfRangeError(f"elements ({x}, {y}) outside 0..{st.n - 1}")
    reps = prefix_rep_tables(st)
    flat = iter(_naive_ops(reps, st.unions, x, y))
    return proof_from_ops(zip(flat, flat))


def explain_partial(st: UfeState, x: int, y: int) -> Optional[EqProof]:
    """explain_naive behind a membership test; total.

    Membership in the closure is decided without the oracle: x = y always
    holds by reflexivity, and otherwise both elements must be in range
    with equal representatives.
    """
    if x == y:
        return Refl(x) if x >= 0 else None
    if 0 <= x < st.n and 0 <= y < st.n and st.forest.rep_of(x) == st.forest.rep_of(y):
        return explain_naive(st, x, y)
    return None


def is_well_formed(st: UfeState) -> bool:
    """Replay-check validity, effectiveness, and the cached forest."""
    try:
        forest = IntForest.init(st.n)
        for a, b in st.unions:
            if not (0 <= a < st.n and 0 <= b < st.n):
                return False
            if forest.rep_of(a) == forest.rep_of(b):
                return False
            forest = _apply_union(forest, st.policy, a, b)
    except Exception:
        return False
    return forest == st.forest
