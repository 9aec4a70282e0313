"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria complete.  Every tolerance and time budget is asserted here, not
just reported.
"""

import math
import random
import time

from ufexplain import errors
from ufexplain.certificates import (
    Assm,
    OP_REFL,
    Refl,
    Sym,
    Trans,
    check,
    equiv_closure,
    proof_from_ops,
    proofs_equal,
)
from ufexplain.engine import Engine
from ufexplain.errors import (
    AssumptionIndexError,
    TransitivityMismatchError,
)
from ufexplain.uf_core import IntForest
from ufexplain.ufe_fast import _fast_ops, assoc_unions
from ufexplain.ufe_log import (
    Policy,
    REDUNDANT,
    _naive_ops,
    explain_partial,
    prefix_rep_tables,
    ufe_init,
    ufe_union,
)
from ufexplain.workbench import CSV_HEADER, bench, gen_balanced, gen_wide

from conftest import random_state

_SEED_BASE = 0x5EED_2026


def _report(num, title, ok, t0):
    status = "PASS" if ok else "FAIL"
    print(f"\n[{status}] criterion {num}: {title} ({time.perf_counter() - t0:.1f}s)")


def _effective_pair(rnd, reps, n):
    for _ in range(8):
        a = rnd.randrange(n)
        b = rnd.randrange(n)
        if reps[a] != reps[b]:
            return a, b
    classes = {}
    for x in range(n):
        classes.setdefault(reps[x], []).append(x)
    if len(classes) < 2:
        return None
    ra, rb = rnd.sample(sorted(classes), 2)
    return rnd.choice(classes[ra]), rnd.choice(classes[rb])


def _state_arrays(n, policy, index):
    """Deterministic random state as flat arrays plus prefix rep tables.

    The annotation array uses -1 for "no associated union", which the
    functional emitters accept alongside the None encoding.
    """
    seed = _SEED_BASE ^ (n << 20) ^ (index << 2) ^ (policy is Policy.BY_SIZE)
    rnd = random.Random(seed)
    k = rnd.randint(0, n - 1)
    cells = [-1] * n
    au = [-1] * n
    unions = []
    reps = [list(range(n))]
    prev = reps[0]
    for j in range(k):
        pair = _effective_pair(rnd, prev, n)
        if pair is None:
            break
        a, b = pair
        ra, rb = prev[a], prev[b]
        if policy is Policy.BY_SIZE and not (-cells[ra] < -cells[rb]):
            child, winner = rb, ra
        else:
            child, winner = ra, rb
        cells[winner] += cells[child]
        cells[child] = winner
        au[child] = j
        unions.append((a, b))
        prev = [winner if r == child else r for r in prev]
        reps.append(prev)
    return cells, au, unions, reps


def _naive_decision(reps, unions, p, q):
    """Branch taken by the naive recursion at the pair (p, q), p != q."""
    lo = 0
    hi = len(unions)
    while lo < hi:
        mid = (lo + hi) >> 1
        if reps[mid][p] == reps[mid][q]:
            hi = mid
        else:
            lo = mid + 1
    m = lo - 1
    a, b = unions[m]
    r = reps[m]
    if r[p] == r[a]:
        return m, False, (p, a), (b, q)
    return m, True, (p, b), (a, q)


def _fast_decision(cells, au, unions, p, q):
    """Branch taken by the annotated-forest recursion at (p, q), p != q."""
    dp = 0
    v = p
    c = cells[v]
    while c >= 0:
        v = c
        c = cells[v]
        dp += 1
    dq = 0
    v = q
    c = cells[v]
    while c >= 0:
        v = c
        c = cells[v]
        dq += 1
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
    best_p = -1
    vert_p = -1
    v = p
    while v != lca:
        a = au[v]
        if a > best_p:
            best_p = a
            vert_p = v
        v = cells[v]
    best_q = -1
    vert_q = -1
    v = q
    while v != lca:
        a = au[v]
        if a > best_q:
            best_q = a
            vert_q = v
        v = cells[v]
    if best_q <= best_p:
        i, cvert, on_p_side = best_p, vert_p, True
    else:
        i, cvert, on_p_side = best_q, vert_q, False
    a, b = unions[i]
    v = a
    while True:
        if v == cvert:
            a_on_child = True
            break
        c = cells[v]
        if c < 0:
            a_on_child = False
            break
        v = c
    if a_on_child == on_p_side:
        return i, False, (p, a), (b, q)
    return i, True, (p, b), (a, q)


def _memoized_streams(queries, decide):
    """Opcode streams for all queried pairs, assembled from one decision
    per distinct pair.  Recursions with consistent decisions form a DAG
    (the cited union index strictly decreases), which the iteration
    bound asserts."""
    memo = {}
    decisions = {}
    steps = 0
    limit = 40 * len(queries) * 64 + 1000
    for top in queries:
        stack = [top]
        while stack:
            steps += 1
            assert steps < limit, "memoized explain recursion is not a DAG"
            pq = stack[-1]
            if pq in memo:
                stack.pop()
                continue
            p, q = pq
            if p == q:
                memo[pq] = (1, p)  # OP_REFL
                stack.pop()
                continue
            dec = decisions.get(pq)
            if dec is None:
                dec = decide(p, q)
                decisions[pq] = dec
            i, sym, s1, s2 = dec
            m1 = memo.get(s1)
            m2 = memo.get(s2)
            if m1 is None or m2 is None:
                if m1 is None:
                    stack.append(s1)
                if m2 is None:
                    stack.append(s2)
                continue
            if sym:
                memo[pq] = m1 + (0, i, 2, 0, 3, 0) + m2 + (3, 0)
            else:
                memo[pq] = m1 + (0, i, 3, 0) + m2 + (3, 0)
            stack.pop()
    return memo


def test_criterion_1_oracle_equivalence():
    """Fast explain equals naive explain, both policies, every pair.

    All same-class ordered pairs are compared through per-state memoized
    streams (one branch decision per distinct pair, assembled bottom-up);
    on every state a sample of pairs is additionally run through the
    shipped emitters to pin the memoized streams to the real code paths.
    """
    t0 = time.perf_counter()
    ok = False
    try:
        rnd = random.Random(_SEED_BASE + 1)
        pairs_checked = 0
        spot_checks = 0
        for n in range(2, 65):
            for policy in (Policy.RAW, Policy.BY_SIZE):
                for i in range(100):
                    cells, au, unions, reps = _state_arrays(n, policy, i)
                    final = reps[-1]
                    classes = {}
                    for x in range(n):
                        classes.setdefault(final[x], []).append(x)
                    queries = [
                        (x, y)
                        for members in classes.values()
                        for x in members
                        for y in members
                    ]
                    naive_memo = _memoized_streams(
                        queries, lambda p, q: _naive_decision(reps, unions, p, q)
                    )
                    fast_memo = _memoized_streams(
                        queries, lambda p, q: _fast_decision(cells, au, unions, p, q)
                    )
                    for pq in queries:
                        assert naive_memo[pq] == fast_memo[pq], (
                            f"divergence at n={n} policy={policy} "
                            f"state={i} pair={pq}"
                        )
                        pairs_checked += 1
                    # pin the memoized streams to the shipped emitters
                    forest = IntForest(cells)
                    for pq in rnd.sample(queries, min(3, len(queries))):
                        naive = _naive_ops(reps, unions, *pq)
                        fast = _fast_ops(forest, au, unions, *pq)
                        assert tuple(naive) == naive_memo[pq]
                        assert tuple(fast) == fast_memo[pq]
                        naive_it = iter(naive)
                        fast_it = iter(fast)
                        assert proofs_equal(
                            proof_from_ops(zip(naive_it, naive_it)),
                            proof_from_ops(zip(fast_it, fast_it)),
                        )
                        spot_checks += 1
        assert pairs_checked > 1_000_000
        assert spot_checks > 30_000
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"criterion 1 took {elapsed:.1f}s, budget 60s"
        ok = True
    finally:
        _report(1, "explain_fast == explain_naive on every same-class pair", ok, t0)


def test_criterion_2_soundness_completeness():
    """explain_partial is Some iff the closure oracle says so; proofs check."""
    t0 = time.perf_counter()
    ok = False
    try:
        rnd = random.Random(_SEED_BASE + 2)
        states = 0
        some_count = 0
        while states < 120:
            n = rnd.randint(0, 32)
            policy = rnd.choice([Policy.RAW, Policy.BY_SIZE])
            st = random_state(rnd, n, policy)
            closure = equiv_closure(st.unions, n)
            for x in range(n):
                for y in range(n):
                    proof = explain_partial(st, x, y)
                    assert (proof is not None) == ((x, y) in closure)
                    if proof is not None:
                        assert check(st.unions, proof) == (x, y)
                        some_count += 1
            states += 1
        assert some_count > 10_000
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"criterion 2 took {elapsed:.1f}s, budget 30s"
        ok = True
    finally:
        _report(2, "soundness + completeness against the closure oracle", ok, t0)


def test_criterion_3_engine_refinement():
    """Engine arrays, twin partition, and explain match the functional state."""
    t0 = time.perf_counter()
    ok = False
    try:
        rnd = random.Random(_SEED_BASE + 3)
        for _ in range(100):
            n = rnd.randint(1, 64)
            e = Engine(n)
            mirror = ufe_init(n, Policy.BY_SIZE)
            tables = None
            for _ in range(rnd.randint(1, 200)):
                roll = rnd.random()
                a, b = rnd.randrange(n), rnd.randrange(n)
                if roll < 0.55:
                    effective = e.add_union(a, b)
                    nxt = ufe_union(mirror, a, b)
                    assert effective == (nxt is not REDUNDANT)
                    if effective:
                        mirror = nxt
                        tables = None
                elif roll < 0.7:
                    assert e.find(a) == mirror.forest.rep_of(a)
                elif roll < 0.85:
                    same = mirror.forest.rep_of(a) == mirror.forest.rep_of(b)
                    assert e.same_class(a, b) == same
                # refinement triple, after every operation
                assert e.forest_cells() == mirror.forest.cells
                assert e.au_entries() == assoc_unions(mirror)
                assert e.log_pairs() == list(mirror.unions)
                assert [e.find(x) for x in range(n)] == mirror.forest.rep_table()
                # explain agreement on sampled pairs
                if tables is None:
                    tables = prefix_rep_tables(mirror)
                for _ in range(2):
                    x, y = rnd.randrange(n), rnd.randrange(n)
                    mine = e.explain(x, y)
                    if x == y:
                        assert mine == Refl(x)
                    elif tables[-1][x] != tables[-1][y]:
                        assert mine is None
                    else:
                        flat = iter(_naive_ops(tables, mirror.unions, x, y))
                        oracle = proof_from_ops(zip(flat, flat))
                        assert mine is not None and proofs_equal(mine, oracle)
            # snapshot materializes the same functional state
            assert e.snapshot() == mirror
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"criterion 3 took {elapsed:.1f}s, budget 60s"
        ok = True
    finally:
        _report(3, "engine refines the functional state after every op", ok, t0)


WIDE_GOLDENS = {
    1: [0, 0],
    2: [0, 0, 0, 0],
    3: [0] * 8,
    4: [0] * 16,
}

BALANCED_GOLDENS = {
    1: [0, 0],
    2: [0, 0, 0, 2],
    3: [0, 0, 0, 2, 0, 4, 4, 6],
}


def test_criterion_4_golden_shapes():
    """Replayed generator unions reproduce the pinned forest shapes."""
    t0 = time.perf_counter()
    ok = False
    try:
        from ufexplain.ufe_log import replay_forest

        for n_exp, parents in WIDE_GOLDENS.items():
            w = gen_wide(n_exp)
            forest = replay_forest(w.elements, Policy.BY_SIZE, w.unions)
            assert forest.parent_array() == parents, f"wide {n_exp}"
        for n_exp, parents in BALANCED_GOLDENS.items():
            w = gen_balanced(n_exp)
            forest = replay_forest(w.elements, Policy.BY_SIZE, w.unions)
            assert forest.parent_array() == parents, f"balanced {n_exp}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"criterion 4 took {elapsed:.2f}s, budget 1s"
        ok = True
    finally:
        _report(4, "generator forests match the stored goldens", ok, t0)


def test_criterion_5_proof_step_scaling():
    """Linear growth on wide, logarithmic on balanced; big smoke run."""
    t0 = time.perf_counter()
    ok = False
    try:
        wide_10 = bench("wide", 10, 1000, 42)
        wide_12 = bench("wide", 12, 1000, 42)
        ratio = wide_12.mean_assm_count / wide_10.mean_assm_count
        assert 3.0 <= ratio <= 5.0, f"wide scaling ratio {ratio:.2f} outside [3, 5]"

        bal_8 = bench("balanced", 8, 1000, 42)
        bal_16 = bench("balanced", 16, 1000, 42)
        ratio = bal_16.mean_assm_count / bal_8.mean_assm_count
        assert ratio < 3.0, f"balanced scaling ratio {ratio:.2f} not < 3"

        scaling_elapsed = time.perf_counter() - t0
        assert scaling_elapsed < 120.0, (
            f"scaling checks took {scaling_elapsed:.1f}s, budget 120s"
        )

        smoke_t0 = time.perf_counter()
        smoke = bench("wide", 18, 1000, 42)
        smoke_elapsed = time.perf_counter() - smoke_t0
        assert smoke_elapsed < 600.0, (
            f"wide n_exp=18 bench took {smoke_elapsed:.1f}s, budget 600s"
        )
        row = smoke.csv_row()
        fields = row.split(",")
        assert len(fields) == len(CSV_HEADER.split(","))
        assert fields[0] == "wide" and fields[2] == str(1 << 18)
        assert float(fields[3]) > 0 and float(fields[4]) > 0
        print(f"\n  smoke CSV: {row} ({smoke_elapsed:.1f}s, {smoke.backend})")
        ok = True
    finally:
        _report(5, "proof-step scaling (linear wide, logarithmic balanced)", ok, t0)


def test_criterion_6_depth_bound():
    """Walk lengths stay within floor(log2(class size)) + 1 under by-size."""
    t0 = time.perf_counter()
    ok = False
    try:
        checked = 0
        for n in range(2, 65):
            for i in range(100):
                cells, _au, _unions, _reps = _state_arrays(n, Policy.BY_SIZE, i)
                for x in range(n):
                    depth = 0
                    v = x
                    while cells[v] >= 0:
                        v = cells[v]
                        depth += 1
                    size = -cells[v]
                    assert depth + 1 <= math.floor(math.log2(size)) + 1
                    checked += 1
        assert checked > 100_000
        ok = True
    finally:
        _report(6, "by-size walk length <= floor(log2(size)) + 1", ok, t0)


def _proof_positions(proof):
    """(path, node) pairs in preorder; a path is a tuple of attribute names."""
    out = []
    stack = [((), proof)]
    while stack:
        path, node = stack.pop()
        out.append((path, node))
        t = type(node)
        if t is Sym:
            stack.append((path + ("inner",), node.inner))
        elif t is Trans:
            stack.append((path + ("left",), node.left))
            stack.append((path + ("right",), node.right))
    return out


def _replace_at(proof, path, replacement):
    """Rebuild the proof with the node at path swapped out."""
    if not path:
        return replacement
    spine = [proof]
    for attr in path[:-1]:
        spine.append(getattr(spine[-1], attr))
    node = replacement
    for parent, attr in zip(reversed(spine), reversed(path)):
        if type(parent) is Sym:
            node = Sym(node)
        elif attr == "left":
            node = Trans(node, parent.right)
        else:
            node = Trans(parent.left, node)
    return node


def test_criterion_7_checker_fuzzing():
    """10,000 single-mutation certificates are all rejected, correctly."""
    t0 = time.perf_counter()
    ok = False
    try:
        rnd = random.Random(_SEED_BASE + 7)
        pool = []
        while len(pool) < 300:
            n = rnd.randint(2, 12)
            st = random_state(rnd, n, rnd.choice([Policy.RAW, Policy.BY_SIZE]))
            if not st.unions:
                continue
            reps = st.forest.rep_table()
            pair = None
            for x in range(n):
                for y in range(n):
                    if x != y and reps[x] == reps[y]:
                        pair = (x, y)
                        break
                if pair:
                    break
            if pair is None:
                continue
            proof = explain_partial(st, *pair)
            assert check(st.unions, proof) == pair
            pool.append((st.unions, proof))

        index_mutants = 0
        while index_mutants < 5000:
            unions, proof = pool[index_mutants % len(pool)]
            positions = [
                (path, node)
                for path, node in _proof_positions(proof)
                if type(node) is Assm
            ]
            path, node = positions[rnd.randrange(len(positions))]
            bumped = Assm(len(unions) + rnd.randrange(5))
            mutant = _replace_at(proof, path, bumped)
            try:
                check(unions, mutant)
            except AssumptionIndexError:
                index_mutants += 1
            else:
                raise AssertionError("index-bumped certificate was accepted")

        midpoint_mutants = 0
        attempts = 0
        while midpoint_mutants < 5000:
            attempts += 1
            assert attempts < 200_000
            unions, proof = pool[attempts % len(pool)]
            positions = [
                (path, node)
                for path, node in _proof_positions(proof)
                if type(node) is Trans
            ]
            path, node = positions[rnd.randrange(len(positions))]
            la, lb = check(unions, node.left)
            ra, rb = check(unions, node.right)
            if rb == la:
                continue  # swapping would stay derivable, not a mismatch
            mutant = _replace_at(proof, path, Trans(node.right, node.left))
            try:
                check(unions, mutant)
            except TransitivityMismatchError:
                midpoint_mutants += 1
            except AssumptionIndexError:
                raise AssertionError("midpoint mutant rejected for the wrong reason")
            else:
                raise AssertionError("midpoint-swapped certificate was accepted")

        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"criterion 7 took {elapsed:.1f}s, budget 10s"
        ok = True
    finally:
        _report(7, "10,000 mutated certificates rejected, 0 false accepts", ok, t0)


def test_criterion_8_fuel_never_exhausted():
    """No explain anywhere in this suite ran out of fuel."""
    t0 = time.perf_counter()
    ok = False
    try:
        assert errors.fuel_exhaustion_count() == 0
        ok = True
    finally:
        _report(8, "termination guard never fired (counter = 0)", ok, t0)
