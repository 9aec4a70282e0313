"""Shared builders for randomized states and engines."""

import random

import pytest

from ufexplain.ufe_log import Policy, REDUNDANT, ufe_init, ufe_union


def effective_pair(rnd: random.Random, rep_table):
    """A pair (a, b) with distinct reps under rep_table, or None."""
    n = len(rep_table)
    for _ in range(8):
        a = rnd.randrange(n)
        b = rnd.randrange(n)
        if rep_table[a] != rep_table[b]:
            return a, b
    classes = {}
    for x in range(n):
        classes.setdefault(rep_table[x], []).append(x)
    if len(classes) < 2:
        return None
    ra, rb = rnd.sample(sorted(classes), 2)
    return rnd.choice(classes[ra]), rnd.choice(classes[rb])


def random_state(rnd: random.Random, n: int, policy: Policy, k: int | None = None):
    """A state over n elements built from k random effective unions."""
    if k is None:
        k = rnd.randint(0, max(0, n - 1))
    st = ufe_init(n, policy)
    for _ in range(k):
        pair = effective_pair(rnd, st.forest.rep_table())
        if pair is None:
            break
        nxt = ufe_union(st, *pair)
        assert nxt is not REDUNDANT
        st = nxt
    return st


@pytest.fixture
def rnd():
    return random.Random(0xC0FFEE)
