import numpy as np
import pytest

from modlie.lie_core import bracket
from modlie.repmod import adjoint_rep, dual, is_isomorphic, validate_module
from modlie.zassenhaus import (
    SpecError,
    build_algebra,
    build_module,
    divided_power_module,
    invariant_form,
    restricted_zassenhaus,
    simple_module,
    verma,
    verma_twisted,
    witt_algebra,
)

GRID = [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (3, 3)]


def test_dimensions_on_grid():
    for p, m in GRID:
        n = p**m
        assert witt_algebra(p, m).dim == n
        assert verma(p, m, 1).dim == n
        assert divided_power_module(p, m, 1).dim == n
        assert restricted_zassenhaus(p, m).env.dim == n + m - 1


def test_witt_high_brackets_vanish():
    for p, m in [(3, 2), (5, 1)]:
        W = witt_algebra(p, m)
        n = p**m
        eye = np.eye(n, dtype=np.int64)
        for a in range(n):
            for b in range(a + 1, n):
                if (a - 1) + (b - 1) > n - 2:
                    assert not bracket(W, eye[a], eye[b]).any()


def test_verma_action_values():
    V = verma(3, 1, 1)
    # e_1 . (e_{-1}^2 x 1) = 2 e_{-1} x 1
    col = V.action[2][:, 2]
    assert list(col) == [0, 2, 0]
    # e_0 weight ladder
    for p, m, lam in [(3, 1, 1), (5, 1, 0), (3, 2, 2)]:
        V = verma(p, m, lam)
        diag = np.diag(V.action[1])
        expected = [(lam - a) % p for a in range(p**m)]
        assert list(diag) == expected


def test_verma_twisted_validates_and_wraps():
    for p, m in [(3, 1), (5, 1), (3, 2)]:
        for lam in range(p):
            for c in range(1, p):
                M = verma_twisted(p, m, lam, c)
                assert validate_module(M).ok
                assert M.action[0][0, p**m - 1] == c


def test_adjoint_is_verma_p_minus_2():
    for p, m in [(3, 1), (3, 2), (5, 1), (7, 1)]:
        W = witt_algebra(p, m)
        A = adjoint_rep(W)
        assert validate_module(A).ok
        assert is_isomorphic(A, verma(p, m, p - 2)) is True
        assert is_isomorphic(dual(A), verma(p, m, 1)) is True


def test_divided_power_natural_orbit():
    # with lam = 0 the derivative orbit of the top divided power spans all
    p, m = 3, 2
    A = divided_power_module(p, m, 0)
    n = p**m
    v = np.zeros(n, dtype=np.int64)
    v[n - 1] = 1
    seen = [v]
    for _ in range(n - 1):
        v = A.action[0] @ v % p
        seen.append(v)
    assert np.linalg.matrix_rank(np.array(seen)) == n


def test_simple_module_labels_and_sizes():
    assert simple_module(3, 2, 0).label == "S(0)"
    assert simple_module(3, 2, 2).dim == 8
    assert simple_module(5, 1, 3).dim == 5
    with pytest.raises(ValueError):
        simple_module(2, 1, 1)


def test_invariant_form_p3():
    for m in [1, 2]:
        g = invariant_form(3, m)
        n = 3**m
        assert np.linalg.matrix_rank(g.astype(float)) == n  # quick sanity
        from modlie.gfp_linalg import DenseMat, rank

        assert rank(DenseMat(3, g.copy())) == n
        W = witt_algebra(3, m)
        eye = np.eye(n, dtype=np.int64)
        # ad-invariance ([x,y],z) + (y,[x,z]) = 0 on all basis triples
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    s = bracket(W, eye[x], eye[y]) @ g @ eye[z]
                    s += eye[y] @ g @ bracket(W, eye[x], eye[z])
                    assert s % 3 == 0
        # support only on i + j = 3^m - 3, i.e. positions a + b = n - 1
        for a in range(n):
            for b in range(n):
                if a + b != n - 1:
                    assert g[a, b] == 0
    with pytest.raises(ValueError):
        invariant_form(5, 1)


def test_spec_builders():
    ctx = build_algebra("witt:3,2")
    assert ctx.algebra.dim == 9
    env = build_algebra("envelope:3,2")
    assert env.algebra.dim == 10 and env.envelope is not None
    bor = build_algebra("borel:5,1")
    assert bor.algebra.dim == 4
    V = build_module(ctx, "verma:2")
    assert V.dim == 9 and V.label == "V(2)"
    Vd = build_module(ctx, "dual:verma:2")
    assert Vd.dim == 9
    A = build_module(env, "adjoint")
    assert A.dim == 10
    Ve = build_module(env, "verma:1")
    assert Ve.dim == 9 and len(Ve.action) == 10
    assert build_module(ctx, "trivial").dim == 1
    assert build_module(ctx, "simple:2").dim == 8
    assert build_module(ctx, "dpow:1").dim == 9
    assert build_module(ctx, "verma:1,2").label == "V(1;c=2)"
    for bad in ["witt:4,1", "witt:3", "nope:3,1", "witt:a,b"]:
        with pytest.raises(SpecError):
            build_algebra(bad)
    for bad in ["verma", "verma:x", "dpow:1,2", "mystery:1"]:
        with pytest.raises(SpecError):
            build_module(ctx, bad)
    with pytest.raises(SpecError):
        build_module(bor, "verma:1")
