# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled engine kernel; same contract as ufexplain._kernel_py.

See that module's docstring for the buffer conventions.  The hot loops
here run on typed memoryviews over the engine's array('q') buffers.
"""

from libc.stdlib cimport free, malloc

from .certificates import Assm, ProofStats, Refl, Sym, Trans
from .errors import (
    CorruptForestError,
    FuelExhaustedError,
    NotSameClassError,
)

compiled = True

# Opcode tags; keep in sync with ufexplain.certificates.
cdef long long OP_ASSM = 0
cdef long long OP_REFL = 1
cdef long long OP_SYM = 2
cdef long long OP_TRANS = 3
cdef long long EXPAND = -1


cdef Py_ssize_t _rep(long long[::1] cells, Py_ssize_t x) except -2:
    cdef Py_ssize_t n = cells.shape[0]
    cdef Py_ssize_t v = x
    cdef Py_ssize_t step
    cdef long long c
    for step in range(n + 1):
        c = cells[v]
        if c < 0:
            return v
        v = <Py_ssize_t> c
    raise CorruptForestError(f"parent pointers from {x} do not reach a root")


def rep_of(long long[::1] cells, Py_ssize_t x):
    return _rep(cells, x)


def find_compress(long long[::1] parents, Py_ssize_t x):
    cdef Py_ssize_t n = parents.shape[0]
    cdef Py_ssize_t r = x
    cdef Py_ssize_t v, nxt, step
    cdef bint found = False
    for step in range(n + 1):
        if parents[r] == r:
            found = True
            break
        r = <Py_ssize_t> parents[r]
    if not found:
        raise CorruptForestError(f"parent pointers from {x} do not reach a root")
    v = x
    while parents[v] != r:
        nxt = <Py_ssize_t> parents[v]
        parents[v] = r
        v = nxt
    return r


def union_size(long long[::1] cells, Py_ssize_t x, Py_ssize_t y):
    cdef Py_ssize_t rx = _rep(cells, x)
    cdef Py_ssize_t ry = _rep(cells, y)
    cdef Py_ssize_t child, winner
    if rx == ry:
        return (-1, -1)
    if -cells[rx] < -cells[ry]:
        child, winner = rx, ry
    else:
        child, winner = ry, rx
    cells[winner] += cells[child]
    cells[child] = winner
    return (child, winner)


cdef Py_ssize_t _depth(long long[::1] cells, Py_ssize_t x, Py_ssize_t* root) except -2:
    cdef Py_ssize_t n = cells.shape[0]
    cdef Py_ssize_t d = 0
    cdef Py_ssize_t v = x
    cdef Py_ssize_t step
    cdef long long c
    for step in range(n + 1):
        c = cells[v]
        if c < 0:
            root[0] = v
            return d
        v = <Py_ssize_t> c
        d += 1
    raise CorruptForestError(f"parent pointers from {x} do not reach a root")


cdef bint _in_subtree(long long[::1] cells, Py_ssize_t c, Py_ssize_t v):
    cdef long long p
    while True:
        if v == c:
            return True
        p = cells[v]
        if p < 0:
            return False
        v = <Py_ssize_t> p


def explain_ops(
    long long[::1] cells,
    long long[::1] au,
    long long[::1] log,
    Py_ssize_t log_len,
    Py_ssize_t x,
    Py_ssize_t y,
    long long[::1] out,
):
    cdef Py_ssize_t fuel = 2 * log_len + 2
    cdef Py_ssize_t out_cap = out.shape[0]
    # <= 6 pushes per fuelled expansion, so fuel runs out before the stack
    cdef Py_ssize_t stack_cap = 12 * log_len + 32
    cdef long long* stack = <long long*> malloc(3 * stack_cap * sizeof(long long))
    if stack == NULL:
        raise MemoryError()
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t pos = 0
    cdef long long kind
    cdef Py_ssize_t p, q, dp, dq, rp, rq, up, uq, lca, v, i, c, a, b
    cdef long long best_p, best_q, ann
    cdef Py_ssize_t vert_p, vert_q
    cdef bint on_p_side
    try:
        stack[0] = EXPAND
        stack[1] = x
        stack[2] = y
        sp = 1
        while sp > 0:
            sp -= 1
            kind = stack[3 * sp]
            p = <Py_ssize_t> stack[3 * sp + 1]
            q = <Py_ssize_t> stack[3 * sp + 2]
            if kind >= 0:
                if pos + 2 > out_cap:
                    raise CorruptForestError("explain opcode buffer overflow")
                out[pos] = kind
                out[pos + 1] = p
                pos += 2
                continue
            if p == q:
                if pos + 2 > out_cap:
                    raise CorruptForestError("explain opcode buffer overflow")
                out[pos] = OP_REFL
                out[pos + 1] = p
                pos += 2
                continue
            fuel -= 1
            if fuel < 0:
                raise FuelExhaustedError(
                    f"explain exceeded {2 * log_len + 2} expansions"
                )
            dp = _depth(cells, p, &rp)
            dq = _depth(cells, q, &rq)
            if rp != rq:
                raise NotSameClassError(
                    f"elements {p} and {q} are in different classes"
                )
            up = p
            uq = q
            while dp > dq:
                up = <Py_ssize_t> cells[up]
                dp -= 1
            while dq > dp:
                uq = <Py_ssize_t> cells[uq]
                dq -= 1
            while up != uq:
                up = <Py_ssize_t> cells[up]
                uq = <Py_ssize_t> cells[uq]
            lca = up
            best_p = -1
            vert_p = -1
            v = p
            while v != lca:
                ann = au[v]
                if ann > best_p:
                    best_p = ann
                    vert_p = v
                v = <Py_ssize_t> cells[v]
            best_q = -1
            vert_q = -1
            v = q
            while v != lca:
                ann = au[v]
                if ann > best_q:
                    best_q = ann
                    vert_q = v
                v = <Py_ssize_t> cells[v]
            if best_q <= best_p:
                i = <Py_ssize_t> best_p
                c = vert_p
                on_p_side = True
            else:
                i = <Py_ssize_t> best_q
                c = vert_q
                on_p_side = False
            a = <Py_ssize_t> log[2 * i]
            b = <Py_ssize_t> log[2 * i + 1]
            if sp + 6 > stack_cap:
                raise CorruptForestError("explain work stack overflow")
            if _in_subtree(cells, c, a) == on_p_side:
                stack[3 * sp] = OP_TRANS
                stack[3 * sp + 1] = 0
                stack[3 * sp + 2] = 0
                stack[3 * (sp + 1)] = EXPAND
                stack[3 * (sp + 1) + 1] = b
                stack[3 * (sp + 1) + 2] = q
                stack[3 * (sp + 2)] = OP_TRANS
                stack[3 * (sp + 2) + 1] = 0
                stack[3 * (sp + 2) + 2] = 0
                stack[3 * (sp + 3)] = OP_ASSM
                stack[3 * (sp + 3) + 1] = i
                stack[3 * (sp + 3) + 2] = 0
                stack[3 * (sp + 4)] = EXPAND
                stack[3 * (sp + 4) + 1] = p
                stack[3 * (sp + 4) + 2] = a
                sp += 5
            else:
                stack[3 * sp] = OP_TRANS
                stack[3 * sp + 1] = 0
                stack[3 * sp + 2] = 0
                stack[3 * (sp + 1)] = EXPAND
                stack[3 * (sp + 1) + 1] = a
                stack[3 * (sp + 1) + 2] = q
                stack[3 * (sp + 2)] = OP_TRANS
                stack[3 * (sp + 2) + 1] = 0
                stack[3 * (sp + 2) + 2] = 0
                stack[3 * (sp + 3)] = OP_SYM
                stack[3 * (sp + 3) + 1] = 0
                stack[3 * (sp + 3) + 2] = 0
                stack[3 * (sp + 4)] = OP_ASSM
                stack[3 * (sp + 4) + 1] = i
                stack[3 * (sp + 4) + 2] = 0
                stack[3 * (sp + 5)] = EXPAND
                stack[3 * (sp + 5) + 1] = p
                stack[3 * (sp + 5) + 2] = b
                sp += 6
            continue
    finally:
        free(stack)
    return pos // 2


def build_proof(long long[::1] out, Py_ssize_t nops):
    """Materialize the proof tree for a postfix opcode buffer."""
    cdef list stack = []
    cdef Py_ssize_t i
    cdef long long tag
    cdef object q
    for i in range(nops):
        tag = out[2 * i]
        if tag == OP_ASSM:
            stack.append(Assm(out[2 * i + 1]))
        elif tag == OP_REFL:
            stack.append(Refl(out[2 * i + 1]))
        elif tag == OP_SYM:
            stack.append(Sym(stack.pop()))
        elif tag == OP_TRANS:
            q = stack.pop()
            stack.append(Trans(stack.pop(), q))
        else:
            raise ValueError(f"unknown proof opcode {tag}")
    if len(stack) != 1:
        raise ValueError(f"opcode stream left {len(stack)} trees, expected 1")
    return stack[0]


def proof_stats(proof):
    """Compiled twin of ufexplain.certificates.proof_stats."""
    cdef Py_ssize_t assms = 0
    cdef Py_ssize_t nodes = 0
    cdef Py_ssize_t d1, d2
    cdef list work = [proof]
    cdef list ready = [False]
    cdef list depths = []
    cdef object node, t
    cdef bint is_ready
    while work:
        node = work.pop()
        is_ready = ready.pop()
        t = type(node)
        if t is Assm:
            assms += 1
            nodes += 1
            depths.append(1)
        elif t is Refl:
            nodes += 1
            depths.append(1)
        elif t is Sym:
            if is_ready:
                depths[len(depths) - 1] += 1
            else:
                nodes += 1
                work.append(node)
                ready.append(True)
                work.append(node.inner)
                ready.append(False)
        elif t is Trans:
            if is_ready:
                d2 = depths.pop()
                d1 = depths.pop()
                depths.append((d1 if d1 >= d2 else d2) + 1)
            else:
                nodes += 1
                work.append(node)
                ready.append(True)
                work.append(node.right)
                ready.append(False)
                work.append(node.left)
                ready.append(False)
        else:
            raise TypeError(f"not a proof node: {node!r}")
    return ProofStats(assms, nodes, depths[0])
