"""Workload generation, script execution, and benchmarking CLI.

Two workload families exercise the engine at opposite extremes:

* ``wide``: chain unions (i, i+1) over 2**n_exp elements.  Replayed with
  union-by-size this collapses into a single star rooted at 0, and
  certificates grow linearly with the element count.
* ``balanced``: log2(n) rounds of stride-doubling unions producing
  binomial-style trees, with certificates growing logarithmically.

Query pairs are drawn uniformly from the elements with a seeded splitmix64
generator (64-bit add-shift-multiply mixing, reduced into range by plain
modulo), so a (shape, n_exp, queries, seed) tuple reproduces the workload
byte for byte on any platform.

Script format, one command per line, ``#`` starts a comment::

    init N        create the engine over elements 0..N-1 (must come first)
    union A B     merge the classes of A and B
    explain A B   emit a certificate for A = B, or the literal ``none``

Certificates are written in the textual format of
:mod:`ufexplain.certificates` and every emitted certificate is validated
with the checker before the run is reported as successful.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import List, Optional, TextIO, Tuple

from .certificates import check, format_proof
from .engine import Engine, available_backends
from .errors import OutOfRangeError, ScriptError

try:
    # compiled twin of the certificate statistics; the benchmark walks
    # hundreds of millions of proof nodes, so this matters there
    from ._speedups import proof_stats
except ImportError:
    from .certificates import proof_stats

__all__ = [
    "SplitMix64",
    "Workload",
    "gen_wide",
    "gen_balanced",
    "workload_script",
    "RunReport",
    "run_script",
    "BenchResult",
    "bench",
    "CSV_HEADER",
    "main",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator (splitmix-style finalizer)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-enough draw in 0..bound-1 by modulo reduction (no
        rejection; the bias at 2**26 elements is far below anything the
        scaling checks could see)."""
        return self.next_u64() % bound


@dataclass
class Workload:
    shape: str
    n_exp: int
    unions: List[Tuple[int, int]]
    queries: List[Tuple[int, int]]
    seed: int

    @property
    def elements(self) -> int:
        return 1 << self.n_exp


def _queries(n_exp: int, count: int, seed: int) -> List[Tuple[int, int]]:
    rng = SplitMix64(seed)
    n = 1 << n_exp
    return [(rng.below(n), rng.below(n)) for _ in range(count)]


def gen_wide(n_exp: int, query_count: int = 0, seed: int = 0) -> Workload:
    """Adjacent-pair chain unions; a star under union-by-size."""
    if n_exp < 1:
        raise ValueError(f"wide workload needs n_exp >= 1, got {n_exp}")
    n = 1 << n_exp
    unions = [(i, i + 1) for i in range(n - 1)]
    return Workload("wide", n_exp, unions, _queries(n_exp, query_count, seed), seed)


def gen_balanced(n_exp: int, query_count: int = 0, seed: int = 0) -> Workload:
    """Stride-doubling rounds; binomial-style trees under union-by-size.

    Round k unions (i, i + 2**k) for i = 0, 2**(k+1), 2*2**(k+1), ... in
    ascending order.
    """
    if n_exp < 1:
        raise ValueError(f"balanced workload needs n_exp >= 1, got {n_exp}")
    n = 1 << n_exp
    unions = []
    for k in range(n_exp):
        step = 1 << (k + 1)
        half = 1 << k
        unions.extend((i, i + half) for i in range(0, n, step))
    return Workload("balanced", n_exp, unions, _queries(n_exp, query_count, seed), seed)


_GENERATORS = {"wide": gen_wide, "balanced": gen_balanced}


def workload_script(w: Workload) -> str:
    """Render a workload as a runnable script (deterministic bytes)."""
    lines = [
        f"# shape={w.shape} n_exp={w.n_exp} queries={len(w.queries)} seed={w.seed}",
        f"init {w.elements}",
    ]
    lines.extend(f"union {a} {b}" for a, b in w.unions)
    lines.extend(f"explain {a} {b}" for a, b in w.queries)
    return "\n".join(lines) + "\n"


@dataclass
class RunReport:
    commands: int = 0
    effective_unions: int = 0
    redundant_unions: int = 0
    explains: int = 0
    proofs_validated: int = 0
    proofs_none: int = 0
    failures: int = 0

    def summary(self) -> str:
        return (
            f"{self.commands} commands: {self.effective_unions} effective unions "
            f"({self.redundant_unions} redundant), {self.explains} explains "
            f"({self.proofs_validated} validated, {self.proofs_none} none), "
            f"{self.failures} failures"
        )


def run_script(path: str, emit: Optional[TextIO] = None) -> RunReport:
    """Execute a script against one engine, validating every certificate.

    Certificates (or ``none``) are written one per line to ``emit`` when
    given.  Malformed lines, out-of-range elements, and certificates that
    fail validation raise :class:`ScriptError` carrying the line number.
    """
    report = RunReport()
    engine: Optional[Engine] = None
    log_pairs: List[Tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            op, args = fields[0], fields[1:]
            try:
                nums = [int(tok) for tok in args]
            except ValueError:
                raise ScriptError(f"non-integer argument in {line!r}", lineno) from None
            report.commands += 1
            if op == "init":
                if engine is not None:
                    raise ScriptError("duplicate init", lineno)
                if len(nums) != 1 or nums[0] < 0:
                    raise ScriptError("init takes one non-negative count", lineno)
                engine = Engine(nums[0])
                continue
            if engine is None:
                raise ScriptError(f"{op!r} before init", lineno)
            if len(nums) != 2:
                raise ScriptError(f"{op!r} takes two elements", lineno)
            a, b = nums
            if op == "union":
                try:
                    effective = engine.add_union(a, b)
                except OutOfRangeError as exc:
                    raise ScriptError(str(exc), lineno) from None
                if effective:
                    report.effective_unions += 1
                    log_pairs.append((a, b))
                else:
                    report.redundant_unions += 1
            elif op == "explain":
                report.explains += 1
                proof = engine.explain(a, b)
                if proof is None:
                    report.proofs_none += 1
                    if emit is not None:
                        emit.write("none\n")
                    continue
                conclusion = check(log_pairs, proof)
                if conclusion != (a, b):
                    report.failures += 1
                    raise ScriptError(
                        f"certificate concludes {conclusion}, wanted ({a}, {b})",
                        lineno,
                    )
                report.proofs_validated += 1
                if emit is not None:
                    emit.write(format_proof(proof))
                    emit.write("\n")
            else:
                raise ScriptError(f"unknown command {op!r}", lineno)
    return report


CSV_HEADER = "shape,n_exp,elements,union_seconds,explain_seconds,queries,mean_assm_count"


@dataclass
class BenchResult:
    shape: str
    n_exp: int
    elements: int
    union_seconds: float
    explain_seconds: float
    queries: int
    mean_assm_count: float
    backend: str

    def csv_row(self) -> str:
        return (
            f"{self.shape},{self.n_exp},{self.elements},"
            f"{self.union_seconds:.6f},{self.explain_seconds:.6f},"
            f"{self.queries},{self.mean_assm_count:.3f}"
        )


def bench(
    shape: str,
    n_exp: int,
    query_count: int,
    seed: int,
    backend: str = "auto",
) -> BenchResult:
    """Build a workload, run it, and time the union and explain phases.

    Union and explain timings are separate monotonic-clock sums; the
    per-certificate statistics are gathered outside the timed sections.
    """
    if shape not in _GENERATORS:
        raise ValueError(f"unknown shape {shape!r}")
    w = _GENERATORS[shape](n_exp, query_count, seed)
    engine = Engine(w.elements, backend=backend)
    t0 = time.perf_counter()
    for a, b in w.unions:
        engine.add_union(a, b)
    union_seconds = time.perf_counter() - t0
    explain_seconds = 0.0
    total_assms = 0
    for a, b in w.queries:
        t0 = time.perf_counter()
        proof = engine.explain(a, b)
        explain_seconds += time.perf_counter() - t0
        if proof is not None:
            total_assms += proof_stats(proof).assm_count
    mean = total_assms / len(w.queries) if w.queries else 0.0
    return BenchResult(
        shape,
        n_exp,
        w.elements,
        union_seconds,
        explain_seconds,
        query_count,
        mean,
        engine.backend_name,
    )


def _cmd_gen(args) -> int:
    w = _GENERATORS[args.shape](args.n, args.queries, args.seed)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(workload_script(w))
    print(
        f"wrote {args.out}: {w.elements} elements, {len(w.unions)} unions, "
        f"{len(w.queries)} queries",
        file=sys.stderr,
    )
    return 0


def _cmd_run(args) -> int:
    emit_handle = None
    try:
        if args.emit_proofs is not None:
            emit_handle = open(args.emit_proofs, "w", encoding="utf-8")
            report = run_script(args.script, emit_handle)
        else:
            report = run_script(args.script, sys.stdout)
    except (ScriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if emit_handle is not None:
            emit_handle.close()
    print(report.summary(), file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    try:
        result = bench(args.shape, args.n, args.queries, args.seed, args.backend)
    except (ValueError, RuntimeError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    row = result.csv_row()
    if args.csv:
        try:
            with open(args.csv, "a", encoding="utf-8") as handle:
                if handle.tell() == 0:
                    handle.write(CSV_HEADER + "\n")
                handle.write(row + "\n")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    print(CSV_HEADER)
    print(row)
    print(f"# backend={result.backend}", file=sys.stderr)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ufexplain",
        description="Union-find workloads with machine-checkable equality certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a workload script")
    gen.add_argument("--shape", choices=sorted(_GENERATORS), required=True)
    gen.add_argument("--n", type=int, required=True, help="log2 of the element count")
    gen.add_argument("--queries", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="execute a script, validating certificates")
    run.add_argument("script")
    run.add_argument("--emit-proofs", default=None, metavar="FILE")
    run.set_defaults(func=_cmd_run)

    bench_p = sub.add_parser("bench", help="time a workload and emit a CSV row")
    bench_p.add_argument("--shape", choices=sorted(_GENERATORS), required=True)
    bench_p.add_argument("--n", type=int, required=True, help="log2 of the element count")
    bench_p.add_argument("--queries", type=int, default=1000)
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--csv", default=None, metavar="FILE")
    bench_p.add_argument(
        "--backend",
        choices=["auto"] + available_backends(),
        default="auto",
        help="engine kernel to use (default: compiled when built)",
    )
    bench_p.set_defaults(func=_cmd_bench)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
