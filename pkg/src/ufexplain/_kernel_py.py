"""Pure-Python engine kernel; reference for the compiled twin.

The engine stores its state in flat signed-64-bit buffers and calls into
one of two interchangeable kernels: this module, or the Cython extension
``ufexplain._speedups`` built from the same contract.  Both expose:

* ``rep_of(cells, x)`` -- root of x in the signed forest, no mutation.
* ``find_compress(parents, x)`` -- root of x in the twin forest, with full
  two-pass path compression.
* ``union_size(cells, x, y)`` -- by-size merge; returns ``(child, winner)``
  roots, or ``(-1, -1)`` when x and y already share a class.
* ``explain_ops(cells, au, log, log_len, x, y, out)`` -- write the postfix
  opcode stream of the fast explain recursion into ``out`` (flat
  tag/argument pairs) and return the number of opcodes.
* ``build_proof(out, nops)`` -- materialize the proof tree for an opcode
  buffer.
* ``proof_stats(proof)`` -- certificate statistics (here simply the
  routine from ufexplain.certificates; the compiled twin reimplements it).

Buffer conventions: ``cells`` is the signed forest (negative = root with
size), ``au`` holds the associated-union index per element with -1 for
"none", ``log`` is the union log flattened two cells per entry, and
``out`` must have room for ``2 * (10 * log_len + 12)`` cells: the fuel
budget of 2 * log_len + 2 expansions emits at most five opcodes each plus
one, so fuel always runs out before the buffer can.  Opcode tags match
ufexplain.certificates (OP_ASSM..OP_TRANS).

explain_ops assumes x != y, both in range, and same class; the engine
checks all three before calling.
"""

from .certificates import (
    OP_ASSM,
    OP_REFL,
    OP_SYM,
    OP_TRANS,
    proof_from_ops,
    proof_stats,
)
from .errors import (
    CorruptForestError,
    FuelExhaustedError,
    NotSameClassError,
)

compiled = False

_EXPAND = -1


def build_proof(out, nops):
    """Materialize the proof tree for a postfix opcode buffer."""
    flat = iter(out[: 2 * nops])
    return proof_from_ops(zip(flat, flat))


def rep_of(cells, x):
    n = len(cells)
    v = x
    for _ in range(n + 1):
        c = cells[v]
        if c < 0:
            return v
        v = c
    raise CorruptForestError(f"parent pointers from {x} do not reach a root")


def find_compress(parents, x):
    n = len(parents)
    r = x
    for _ in range(n + 1):
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


def union_size(cells, x, y):
    rx = rep_of(cells, x)
    ry = rep_of(cells, y)
    if rx == ry:
        return (-1, -1)
    if -cells[rx] < -cells[ry]:
        child, winner = rx, ry
    else:
        child, winner = ry, rx
    cells[winner] += cells[child]
    cells[child] = winner
    return (child, winner)


def _depth_and_root(cells, x):
    d = 0
    v = x
    n = len(cells)
    for _ in range(n + 1):
        c = cells[v]
        if c < 0:
            return d, v
        v = c
        d += 1
    raise CorruptForestError(f"parent pointers from {x} do not reach a root")


def _in_subtree(cells, c, v):
    while True:
        if v == c:
            return True
        p = cells[v]
        if p < 0:
            return False
        v = p


def explain_ops(cells, au, log, log_len, x, y, out):
    fuel = 2 * log_len + 2
    pos = 0
    stack = [(_EXPAND, x, y)]
    while stack:
        kind, p, q = stack.pop()
        if kind >= 0:
            out[pos] = kind
            out[pos + 1] = p
            pos += 2
            continue
        if p == q:
            out[pos] = OP_REFL
            out[pos + 1] = p
            pos += 2
            continue
        fuel -= 1
        if fuel < 0:
            raise FuelExhaustedError(
                f"explain exceeded {2 * log_len + 2} expansions"
            )
        dp, rp = _depth_and_root(cells, p)
        dq, rq = _depth_and_root(cells, q)
        if rp != rq:
            raise NotSameClassError(f"elements {p} and {q} are in different classes")
        # Lift the deeper element, then step both up to the meeting point.
        up, uq = p, q
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
        # Newest annotation strictly below the LCA on each path (-1 = none).
        best_p, vert_p = -1, -1
        v = p
        while v != lca:
            a = au[v]
            if a > best_p:
                best_p, vert_p = a, v
            v = cells[v]
        best_q, vert_q = -1, -1
        v = q
        while v != lca:
            a = au[v]
            if a > best_q:
                best_q, vert_q = a, v
            v = cells[v]
        if best_q <= best_p:
            i, c, on_p_side = best_p, vert_p, True
        else:
            i, c, on_p_side = best_q, vert_q, False
        a = log[2 * i]
        b = log[2 * i + 1]
        if _in_subtree(cells, c, a) == on_p_side:
            stack.append((OP_TRANS, 0, 0))
            stack.append((_EXPAND, b, q))
            stack.append((OP_TRANS, 0, 0))
            stack.append((OP_ASSM, i, 0))
            stack.append((_EXPAND, p, a))
        else:
            stack.append((OP_TRANS, 0, 0))
            stack.append((_EXPAND, a, q))
            stack.append((OP_TRANS, 0, 0))
            stack.append((OP_SYM, 0, 0))
            stack.append((OP_ASSM, i, 0))
            stack.append((_EXPAND, p, b))
    return pos // 2
