"""Equality certificates: proof terms, their checker, and a closure oracle.

A certificate is a finite tree built from four constructors:

* ``Assm(i)``   -- cite the i-th logged union as an equation,
* ``Refl(x)``   -- x equals itself,
* ``Sym(p)``    -- flip the conclusion of p,
* ``Trans(p, q)`` -- glue two conclusions sharing a midpoint.

:func:`check` derives the unique conclusion of a certificate bottom-up
against a concrete union log and rejects ill-formed steps.  The brute-force
:func:`equiv_closure` computes the same relation by plain graph search and
serves as the independent oracle everything else is tested against.

Textual certificate format (used by the workbench, one term per line)::

    term := "(assm" INT ")" | "(refl" INT ")"
          | "(sym" term ")" | "(trans" term term ")"

with decimal integers and arbitrary whitespace between tokens.

All traversals here are iterative: certificates produced for large
workloads nest far deeper than the interpreter's recursion limit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Set, Tuple, Union

from .errors import (
    AssumptionIndexError,
    CertificateParseError,
    OutOfRangeError,
    TransitivityMismatchError,
)

__all__ = [
    "Assm",
    "Refl",
    "Sym",
    "Trans",
    "EqProof",
    "ProofStats",
    "check",
    "equiv_closure",
    "proof_stats",
    "proof_from_ops",
    "proofs_equal",
    "format_proof",
    "parse_proof",
    "OP_ASSM",
    "OP_REFL",
    "OP_SYM",
    "OP_TRANS",
]


@dataclass(slots=True)
class Assm:
    index: int


@dataclass(slots=True)
class Refl:
    element: int


@dataclass(slots=True)
class Sym:
    inner: "EqProof"


@dataclass(slots=True)
class Trans:
    left: "EqProof"
    right: "EqProof"


EqProof = Union[Assm, Refl, Sym, Trans]

# Postfix opcode tags shared with the engine kernels.
OP_ASSM = 0
OP_REFL = 1
OP_SYM = 2
OP_TRANS = 3


def check(unions: Sequence[Tuple[int, int]], proof: EqProof) -> Tuple[int, int]:
    """Derive the conclusion (x, y) of ``proof`` against the union log.

    Raises :class:`AssumptionIndexError` when an assumption index is out of
    range and :class:`TransitivityMismatchError` when the premises of a
    transitivity step do not share a midpoint.
    """
    work = [(proof, False)]
    results = []
    nunions = len(unions)
    while work:
        node, ready = work.pop()
        t = type(node)
        if t is Assm:
            i = node.index
            if not 0 <= i < nunions:
                raise AssumptionIndexError(
                    f"assumption {i} out of range for a log of {nunions} unions"
                )
            a, b = unions[i]
            results.append((a, b))
        elif t is Refl:
            x = node.element
            results.append((x, x))
        elif t is Sym:
            if ready:
                a, b = results.pop()
                results.append((b, a))
            else:
                work.append((node, True))
                work.append((node.inner, False))
        elif t is Trans:
            if ready:
                q = results.pop()
                p = results.pop()
                if p[1] != q[0]:
                    raise TransitivityMismatchError(
                        f"transitivity premises conclude {p} and {q}: "
                        f"midpoint {p[1]} != {q[0]}"
                    )
                results.append((p[0], q[1]))
            else:
                work.append((node, True))
                work.append((node.right, False))
                work.append((node.left, False))
        else:
            raise TypeError(f"not a proof node: {node!r}")
    assert len(results) == 1
    return results[0]


def equiv_closure(unions: Iterable[Tuple[int, int]], n: int) -> Set[Tuple[int, int]]:
    """The equivalence closure of the logged pairs, restricted to 0..n-1.

    (x, y) is included iff x = y or x and y are connected in the undirected
    graph whose edges are the logged pairs.  Computed by breadth-first
    search; deliberately independent of any union-find machinery so it can
    act as the brute-force oracle.
    """
    adj = {x: [] for x in range(n)}
    for a, b in unions:
        if not (0 <= a < n and 0 <= b < n):
            raise OutOfRangeError(f"union ({a}, {b}) outside 0..{n - 1}")
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    relation = set()
    for start in range(n):
        if seen[start]:
            continue
        component = []
        queue = deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            component.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        for x in component:
            for y in component:
                relation.add((x, y))
    return relation


class ProofStats(NamedTuple):
    assm_count: int
    node_count: int
    depth: int


def proof_stats(proof: EqProof) -> ProofStats:
    """Count assumption leaves and nodes, and measure the tree height."""
    assms = 0
    nodes = 0
    depths = []
    work = [(proof, False)]
    while work:
        node, ready = work.pop()
        t = type(node)
        if t is Assm:
            assms += 1
            nodes += 1
            depths.append(1)
        elif t is Refl:
            nodes += 1
            depths.append(1)
        elif t is Sym:
            if ready:
                depths.append(depths.pop() + 1)
            else:
                nodes += 1
                work.append((node, True))
                work.append((node.inner, False))
        elif t is Trans:
            if ready:
                d2 = depths.pop()
                d1 = depths.pop()
                depths.append(max(d1, d2) + 1)
            else:
                nodes += 1
                work.append((node, True))
                work.append((node.right, False))
                work.append((node.left, False))
        else:
            raise TypeError(f"not a proof node: {node!r}")
    return ProofStats(assms, nodes, depths[0])


def proof_from_ops(ops: Iterable[Tuple[int, int]]) -> EqProof:
    """Assemble a proof tree from a postfix opcode stream.

    Each item is an ``(opcode, argument)`` pair; OP_ASSM and OP_REFL push a
    leaf, OP_SYM wraps the top of the stack, OP_TRANS combines the top two
    (the argument of OP_SYM and OP_TRANS is ignored).  This is the one
    shared builder, so every producer agrees on how transitivity chains
    associate (to the left).
    """
    stack = []
    for op, arg in ops:
        if op == OP_ASSM:
            stack.append(Assm(arg))
        elif op == OP_REFL:
            stack.append(Refl(arg))
        elif op == OP_SYM:
            stack.append(Sym(stack.pop()))
        elif op == OP_TRANS:
            q = stack.pop()
            stack.append(Trans(stack.pop(), q))
        else:
            raise ValueError(f"unknown proof opcode {op}")
    if len(stack) != 1:
        raise ValueError(f"opcode stream left {len(stack)} trees, expected 1")
    return stack[0]


def proofs_equal(p: EqProof, q: EqProof) -> bool:
    """Structural tree equality, safe for arbitrarily deep certificates."""
    stack = [(p, q)]
    while stack:
        a, b = stack.pop()
        ta = type(a)
        if ta is not type(b):
            return False
        if ta is Assm:
            if a.index != b.index:
                return False
        elif ta is Refl:
            if a.element != b.element:
                return False
        elif ta is Sym:
            stack.append((a.inner, b.inner))
        elif ta is Trans:
            stack.append((a.left, b.left))
            stack.append((a.right, b.right))
        else:
            raise TypeError(f"not a proof node: {a!r}")
    return True


def format_proof(proof: EqProof) -> str:
    """Render a proof in the textual certificate format."""
    parts = []
    stack = [proof]
    while stack:
        item = stack.pop()
        if type(item) is str:
            parts.append(item)
            continue
        t = type(item)
        if t is Assm:
            parts.append(f"(assm {item.index})")
        elif t is Refl:
            parts.append(f"(refl {item.element})")
        elif t is Sym:
            parts.append("(sym ")
            stack.append(")")
            stack.append(item.inner)
        elif t is Trans:
            parts.append("(trans ")
            stack.append(")")
            stack.append(item.right)
            stack.append(" ")
            stack.append(item.left)
        else:
            raise TypeError(f"not a proof node: {item!r}")
    return "".join(parts)


def _tokenize(text: str):
    tokens = []
    i = 0
    size = len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            tokens.append((ch, i))
            i += 1
            continue
        j = i
        while j < size and not text[j].isspace() and text[j] not in "()":
            j += 1
        tokens.append((text[i:j], i))
        i = j
    return tokens


_ARITIES = {"assm": 1, "refl": 1, "sym": 1, "trans": 2}


def parse_proof(text: str) -> EqProof:
    """Parse one textual certificate; whitespace between tokens is free."""
    tokens = _tokenize(text)
    frames = []
    result = None
    pos = 0
    while pos < len(tokens):
        tok, offset = tokens[pos]
        if tok == "(":
            pos += 1
            if pos >= len(tokens):
                raise CertificateParseError("unterminated term", offset)
            name, name_off = tokens[pos]
            if name not in _ARITIES:
                raise CertificateParseError(f"unknown constructor {name!r}", name_off)
            frames.append([name, name_off])
        elif tok == ")":
            if not frames:
                raise CertificateParseError("unbalanced ')'", offset)
            name, name_off, *args = frames.pop()
            node = _build_node(name, args, name_off)
            if frames:
                frames[-1].append(node)
            elif result is None:
                result = node
            else:
                raise CertificateParseError("more than one term", offset)
        else:
            if not frames:
                raise CertificateParseError(f"unexpected token {tok!r}", offset)
            if not tok.isdigit():
                raise CertificateParseError(f"expected an integer, got {tok!r}", offset)
            frames[-1].append(int(tok))
        pos += 1
    if frames:
        raise CertificateParseError("unterminated term", frames[-1][1])
    if result is None:
        raise CertificateParseError("empty certificate", 0)
    return result


def _build_node(name: str, args: list, offset: int) -> EqProof:
    if len(args) != _ARITIES[name]:
        raise CertificateParseError(
            f"{name} takes {_ARITIES[name]} argument(s), got {len(args)}", offset
        )
    if name in ("assm", "refl"):
        if type(args[0]) is not int:
            raise CertificateParseError(f"{name} takes an integer", offset)
        return Assm(args[0]) if name == "assm" else Refl(args[0])
    if any(type(a) is int for a in args):
        raise CertificateParseError(f"{name} takes sub-proofs, not integers", offset)
    if name == "sym":
        return Sym(args[0])
    return Trans(args[0], args[1])


def conclusion_or_none(
    unions: Sequence[Tuple[int, int]], proof: EqProof
) -> Optional[Tuple[int, int]]:
    """check, but returning None instead of raising on a rejection."""
    try:
        return check(unions, proof)
    except (AssumptionIndexError, TransitivityMismatchError):
        return None
