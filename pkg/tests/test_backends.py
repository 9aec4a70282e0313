"""Cross-checks between the compiled kernel and its pure-Python twin."""

import random
import time
from array import array

import pytest

from ufexplain import _kernel_py
from ufexplain.certificates import proofs_equal
from ufexplain.engine import Engine, available_backends
from ufexplain.workbench import bench, gen_balanced

compiled = pytest.importorskip(
    "ufexplain._speedups", reason="compiled kernel not built"
)


def random_engine_pair(rnd, n):
    return Engine(n, backend="compiled"), Engine(n, backend="pure")


def test_engines_agree_operation_by_operation(rnd):
    for _ in range(10):
        n = rnd.randint(1, 48)
        fast, pure = random_engine_pair(rnd, n)
        for _ in range(3 * n):
            op = rnd.random()
            a, b = rnd.randrange(n), rnd.randrange(n)
            if op < 0.5:
                assert fast.add_union(a, b) == pure.add_union(a, b)
                assert fast.forest_cells() == pure.forest_cells()
                assert fast.au_entries() == pure.au_entries()
                assert fast.log_pairs() == pure.log_pairs()
            elif op < 0.7:
                assert fast.find(a) == pure.find(a)
                assert fast.twin_parents() == pure.twin_parents()
            else:
                pf, pp = fast.explain(a, b), pure.explain(a, b)
                if pp is None:
                    assert pf is None
                else:
                    assert pf is not None
                    assert proofs_equal(pf, pp)


def test_kernel_primitives_agree(rnd):
    for _ in range(50):
        n = rnd.randint(1, 40)
        cells_a = array("q", [-1]) * n
        cells_b = array("q", [-1]) * n
        for _ in range(n):
            x, y = rnd.randrange(n), rnd.randrange(n)
            assert compiled.union_size(cells_a, x, y) == _kernel_py.union_size(
                cells_b, x, y
            )
            assert cells_a == cells_b
            z = rnd.randrange(n)
            assert compiled.rep_of(cells_a, z) == _kernel_py.rep_of(cells_b, z)


def test_find_compress_mutations_agree(rnd):
    for _ in range(50):
        n = rnd.randint(1, 30)
        # build one random valid forest, then compress both copies
        parents = list(range(n))
        order = list(range(n))
        rnd.shuffle(order)
        for i, v in enumerate(order[1:], start=1):
            parents[v] = order[rnd.randrange(i)]
        pa = array("q", parents)
        pb = array("q", parents)
        for _ in range(2 * n):
            x = rnd.randrange(n)
            assert compiled.find_compress(pa, x) == _kernel_py.find_compress(pb, x)
            assert pa == pb


def test_proof_materialization_and_stats_agree(rnd):
    from ufexplain.certificates import proof_stats as pure_stats

    for _ in range(20):
        n = rnd.randint(2, 32)
        e = Engine(n, backend="compiled")
        for _ in range(2 * n):
            e.add_union(rnd.randrange(n), rnd.randrange(n))
        x = rnd.randrange(n)
        for y in range(n):
            if not e.same_class(x, y):
                continue
            proof = e.explain(x, y)
            pure_engine = Engine(n, backend="pure")
            for a, b in e.log_pairs():
                pure_engine.add_union(a, b)
            assert proofs_equal(proof, pure_engine.explain(x, y))
            assert compiled.proof_stats(proof) == pure_stats(proof)


def test_backend_speed_comparison_smoke():
    # not an assertion on speed, only that both run the same workload;
    # prints a one-line comparison for the curious
    t0 = time.perf_counter()
    fast = bench("balanced", 10, 200, 7, backend="compiled")
    t_fast = time.perf_counter() - t0
    t0 = time.perf_counter()
    pure = bench("balanced", 10, 200, 7, backend="pure")
    t_pure = time.perf_counter() - t0
    assert fast.mean_assm_count == pure.mean_assm_count
    print(
        f"\nbalanced n=10, 200 queries: compiled {t_fast:.3f}s "
        f"vs pure {t_pure:.3f}s"
    )


def test_gen_workloads_identical_across_backends():
    w = gen_balanced(6, query_count=64, seed=21)
    results = {}
    for backend in available_backends():
        e = Engine(w.elements, backend=backend)
        for a, b in w.unions:
            e.add_union(a, b)
        results[backend] = [e.explain(a, b) for a, b in w.queries]
    if len(results) == 2:
        for pf, pp in zip(results["compiled"], results["pure"]):
            assert proofs_equal(pf, pp)
