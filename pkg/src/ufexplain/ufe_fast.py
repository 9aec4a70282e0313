"""The efficient explain: edge annotations, root walks, LCA, newest union.

Every non-root vertex of the forest carries the index of the union that
created its parent edge (its *associated union*).  To certify x = y the
fast recursion finds the lowest common ancestor of x and y, picks the
newest annotated edge on the two paths down from it, and splits the query
at the endpoints of that union.  The result is structurally identical to
the naive log-peeling recursion, which is the central claim the test suite
hammers on.

One subtlety: under the by-size policy a union (a, b) may attach b's root
beneath a's root, so the child subtree of the newest edge can contain
either endpoint of the logged pair.  The recursion therefore decides with
a subtree-membership walk which endpoint sits on the query element's side
and applies the symmetry step exactly when the log pair is oriented the
other way.  Under the raw policy the child side always holds the first
endpoint and the check degenerates to the textbook branch choice.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .certificates import (
    OP_ASSM,
    OP_REFL,
    OP_SYM,
    OP_TRANS,
    EqProof,
    proof_from_ops,
)
from .errors import (
    CorruptForestError,
    FuelExhaustedError,
    NotSameClassError,
    OutOfRangeError,
    record_fuel_exhaustion,
)
from .uf_core import IntForest
from .ufe_log import UfeState, _apply_union

__all__ = [
    "assoc_unions",
    "awalk_verts_from_rep",
    "ufa_lca",
    "find_newest_on_path",
    "opt_le",
    "explain_fast",
]

OptIdx = Optional[int]


def opt_le(p: OptIdx, q: OptIdx) -> bool:
    """Order on optional indices: None sits strictly below every index."""
    if p is None:
        return True
    return q is not None and p <= q


def assoc_unions(st: UfeState) -> List[OptIdx]:
    """Associated-union annotations, recomputed by replaying the log.

    Entry x holds the index of the union whose edge made x a non-root;
    roots stay None.  Exactly one entry is written per union: the root of
    the class that got attached.
    """
    au: List[OptIdx] = [None] * st.n
    forest = IntForest.init(st.n)
    for i, (a, b) in enumerate(st.unions):
        ra = forest.rep_of(a)
        rb = forest.rep_of(b)
        forest = _apply_union(forest, st.policy, a, b)
        winner = forest.rep_of(a)
        child = ra if winner == rb else rb
        au[child] = i
    return au


def awalk_verts_from_rep(uf: IntForest, x: int) -> List[int]:
    """Vertices of the walk from rep_of(x) down to x, both ends included."""
    uf._check(x)
    cells = uf.cells
    walk = [x]
    v = x
    for _ in range(len(cells) + 1):
        c = cells[v]
        if c < 0:
            walk.reverse()
            return walk
        v = c
        walk.append(v)
    raise CorruptForestError(f"parent pointers from {x} do not reach a root")


def ufa_lca(uf: IntForest, x: int, y: int) -> int:
    """Lowest common ancestor: last vertex of the longest common prefix
    of the two root-to-node walks.  Requires x and y to share a class."""
    px = awalk_verts_from_rep(uf, x)
    py = awalk_verts_from_rep(uf, y)
    if px[0] != py[0]:
        raise NotSameClassError(
            f"elements {x} and {y} are in different classes, no common ancestor"
        )
    lca = px[0]
    for vx, vy in zip(px[1:], py[1:]):
        if vx != vy:
            break
        lca = vx
    return lca


def find_newest_on_path(st: UfeState, au: List[OptIdx], y: int, x: int) -> OptIdx:
    """Newest associated union strictly below y on the path from y down to x.

    y must be an ancestor of x (in practice the LCA of x with some other
    element); the walk ascends from x via parent pointers.  None when the
    path is empty (y = x).
    """
    if y == x:
        return None
    cells = st.forest.cells
    best: OptIdx = None
    v = x
    for _ in range(len(cells) + 1):
        a = au[v]
        if a is not None and (best is None or a > best):
            best = a
        c = cells[v]
        if c < 0:
            raise NotSameClassError(f"{y} is not an ancestor of {x}")
        v = c
        if v == y:
            return best
    raise NotSameClassError(f"{y} is not an ancestor of {x}")


def _fast_ops(
    forest: IntForest,
    au: List[OptIdx],
    unions: Tuple[Tuple[int, int], ...],
    x: int,
    y: int,
) -> List[int]:
    """Flat postfix opcode stream [tag, arg, ...] of the fast recursion.

    Preconditions: x, y in range and same class.  Driven by an explicit
    work stack with a fuel budget of 2*|unions| + 2 expansions; running
    out of fuel means the termination invariant is broken and raises.

    Stack encoding mirrors the naive emitter: a tuple (p, q) is a pending
    sub-certificate, a bare int m >= 0 emits the assumption step for
    union m, -1 emits transitivity, and -2 emits symmetry.  The LCA and
    newest-annotation scans are unrolled onto the parent pointers instead
    of going through awalk_verts_from_rep; this is the hot loop of the
    oracle-equivalence suite.
    """
    cells = forest.cells
    out: List[int] = []
    emit = out.append
    fuel = 2 * len(unions) + 2
    stack = [(x, y)]
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
        p, q = item
        if p == q:
            emit(OP_REFL)
            emit(p)
            continue
        fuel -= 1
        if fuel < 0:
            record_fuel_exhaustion()
            raise FuelExhaustedError(
                f"explain exceeded {2 * len(unions) + 2} expansions"
            )
        # depth and root of both elements
        dp = 0
        v = p
        c = cells[v]
        while c >= 0:
            v = c
            c = cells[v]
            dp += 1
        rp = v
        dq = 0
        v = q
        c = cells[v]
        while c >= 0:
            v = c
            c = cells[v]
            dq += 1
        if rp != v:
            raise NotSameClassError(
                f"elements {p} and {q} are in different classes"
            )
        # lift the deeper side, then walk up in lockstep to the LCA
        up = p
        uq = q
        while dp > dq:
            up = cells[up]
            dp -= 1
        while dq > dp:
            uq = cells[uq]
            dq -= 1
        while up != uq:
            up = cells[up]
            uq = cells[uq]
        lca = up
        # newest annotation strictly below the LCA on each path
        best_p = -1
        vert_p = -1
        v = p
        while v != lca:
            a = au[v]
            if a is not None and a > best_p:
                best_p = a
                vert_p = v
            v = cells[v]
        best_q = -1
        vert_q = -1
        v = q
        while v != lca:
            a = au[v]
            if a is not None and a > best_q:
                best_q = a
                vert_q = v
            v = cells[v]
        # optional order: -1 plays None, so plain <= is the lifting
        if best_q <= best_p:
            i, cvert, on_p_side = best_p, vert_p, True
        else:
            i, cvert, on_p_side = best_q, vert_q, False
        a, b = unions[i]
        # the child subtree of the newest edge holds exactly one of a, b;
        # p pairs with a exactly when they are on the same side of it
        v = a
        while True:
            if v == cvert:
                a_on_child_side = True
                break
            c = cells[v]
            if c < 0:
                a_on_child_side = False
                break
            v = c
        if a_on_child_side == on_p_side:
            push(-1)
            push((b, q))
            push(-1)
            push(i)
            push((p, a))
        else:
            push(-1)
            push((a, q))
            push(-1)
            push(-2)
            push(i)
            push((p, b))
    return out


def explain_fast(st: UfeState, x: int, y: int) -> EqProof:
    """Certificate for x = y via the annotated forest.

    Requires x and y in range and in the same class; produces the same
    tree as :func:`ufexplain.ufe_log.explain_naive` on every valid input.
    """
    if not (0 <= x < st.n and 0 <= y < st.n):
        raise OutOfRangeError(f"elements ({x}, {y}) outside 0..{st.n - 1}")
    if st.forest.rep_of(x) != st.forest.rep_of(y):
        raise NotSameClassError(f"elements {x} and {y} are in different classes")
    au = assoc_unions(st)
    flat = iter(_fast_ops(st.forest, au, st.unions, x, y))
    return proof_from_ops(zip(flat, flat))
