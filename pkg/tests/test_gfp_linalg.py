import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlie.gfp_linalg import (
    DenseMat,
    SparseMat,
    kernel_basis,
    lucas_binomial,
    rank,
    rref,
    solve,
)


def _span_canonical(p, vectors, ncols):
    if not vectors:
        return []
    a = np.array(vectors, dtype=np.int64).reshape(len(vectors), ncols)
    rref(a, p)
    return [tuple(row) for row in a if row.any()]

PRIMES = [2, 3, 5, 7, 11, 13]


def test_lucas_trivial_cases():
    assert lucas_binomial(5, 0, 3) == 1
    assert lucas_binomial(3, -1, 5) == 0
    assert lucas_binomial(3, 4, 5) == 0


def test_lucas_derived_cases():
    # 6 mod 3, via the factorial definition C(4,2) = 6
    assert lucas_binomial(4, 2, 3) == 0
    # digits of 10 in base 3 are 101, of 5 are 012; middle digit 0 < 1
    assert lucas_binomial(10, 5, 3) == 0


def test_lucas_rejects_bad_arguments():
    with pytest.raises(ValueError):
        lucas_binomial(4, 2, 4)
    with pytest.raises(ValueError):
        lucas_binomial(-1, 0, 3)


def test_lucas_factorial_oracle_500_random():
    rng = random.Random(12)
    for _ in range(500):
        p = rng.choice(PRIMES)
        n = rng.randrange(0, 200)
        k = rng.randrange(-5, n + 6)
        expected = math.comb(n, k) % p if 0 <= k <= n else 0
        assert lucas_binomial(n, k, p) == expected


@given(
    n=st.integers(min_value=0, max_value=3000),
    k=st.integers(min_value=-10, max_value=3010),
    p=st.sampled_from(PRIMES),
)
@settings(max_examples=200, deadline=None)
def test_lucas_matches_comb(n, k, p):
    expected = math.comb(n, k) % p if 0 <= k <= n else 0
    assert lucas_binomial(n, k, p) == expected


# ---------------------------------------------------------------------------


def _random_sparse(rng, p, rows, cols, density=0.3):
    entries = []
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                entries.append((r, c, rng.randrange(1, p)))
    return SparseMat.from_entries(p, rows, cols, entries)


def test_rank_trivial():
    assert rank(DenseMat.zeros(5, 3, 3)) == 0
    assert rank(DenseMat.identity(7, 4)) == 4
    assert rank(SparseMat(3, 4, 2, ())) == 0


def test_rank_derived_2x2():
    m = DenseMat.from_rows(5, [[1, 2], [2, 4]])
    assert rank(m) == 1
    assert rank(SparseMat.from_dense(m)) == 1


def test_kernel_trivial():
    assert kernel_basis(DenseMat.identity(3, 4)) == []
    z = DenseMat.zeros(3, 2, 5)
    ker = kernel_basis(z)
    assert len(ker) == 5
    arr = np.array(ker)
    assert np.array_equal(np.sort(arr.sum(axis=0)), np.ones(5))


def test_kernel_derived_line():
    m = DenseMat.from_rows(3, [[1, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 1
    v = ker[0]
    assert (v[0] + v[1]) % 3 == 0 and v.any()


def test_solve_examples():
    ident = DenseMat.identity(5, 3)
    b = np.array([1, 2, 3])
    assert np.array_equal(solve(ident, b), b)
    assert solve(DenseMat.zeros(5, 2, 2), [1, 0]) is None
    x = solve(DenseMat.from_rows(5, [[2]]), [3])
    assert list(x) == [4]
    with pytest.raises(ValueError):
        solve(DenseMat.identity(5, 3), [1, 2])


def test_sparse_validation():
    with pytest.raises(ValueError):
        SparseMat(5, 2, 2, ((0, 0, 0),))
    with pytest.raises(ValueError):
        SparseMat(5, 2, 2, ((0, 0, 1), (0, 0, 2)))
    with pytest.raises(ValueError):
        SparseMat(5, 2, 2, ((2, 0, 1),))


@given(
    p=st.sampled_from([2, 3, 5, 7]),
    rows=st.integers(min_value=0, max_value=8),
    cols=st.integers(min_value=0, max_value=8),
    seed=st.integers(min_value=0, max_value=10**6),
)
@settings(max_examples=150, deadline=None)
def test_rank_properties(p, rows, cols, seed):
    rng = random.Random(seed)
    m = _random_sparse(rng, p, rows, cols)
    d = m.to_dense()
    r = rank(m)
    assert r == rank(d)
    assert r == rank(m.transpose())
    ker = kernel_basis(m)
    assert len(ker) == cols - r
    assert _span_canonical(p, ker, cols) == _span_canonical(
        p, kernel_basis(d), cols
    )
    for v in ker:
        assert not m.matvec(v).any()


def test_rank_sparse_vs_dense_on_larger_matrices():
    for p in (2, 3, 5, 7):
        rng = random.Random(p * 31)
        m = _random_sparse(rng, p, 60, 35, density=0.08)
        d = m.to_dense()
        r = rank(m)
        assert r == rank(d)
        ker = kernel_basis(m)
        assert len(ker) == 35 - r
        for v in ker[:5]:
            assert not m.matvec(v).any()


def test_elimination_is_deterministic():
    rng = random.Random(99)
    m = _random_sparse(rng, 5, 20, 20, density=0.2)
    first = [tuple(v) for v in kernel_basis(m)]
    second = [tuple(v) for v in kernel_basis(m)]
    assert first == second


@given(
    p=st.sampled_from([2, 3, 5, 7]),
    rows=st.integers(min_value=1, max_value=7),
    cols=st.integers(min_value=1, max_value=7),
    seed=st.integers(min_value=0, max_value=10**6),
)
@settings(max_examples=150, deadline=None)
def test_solve_agrees_with_dense(p, rows, cols, seed):
    rng = random.Random(seed)
    m = _random_sparse(rng, p, rows, cols)
    d = m.to_dense()
    b = np.array([rng.randrange(p) for _ in range(rows)], dtype=np.int64)
    xs = solve(m, b)
    xd = solve(d, b)
    assert (xs is None) == (xd is None)
    if xs is not None:
        assert np.array_equal(m.matvec(xs), b % p)
        assert np.array_equal((d.a @ xd) % p, b % p)
