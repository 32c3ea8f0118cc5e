import numpy as np
import pytest

from modlie.lie_core import CharacterDesc, SubspaceDesc, sigma_character
from modlie.repmod import (
    ModuleDesc,
    adjoint_rep,
    composition_series,
    dual,
    extend_to_envelope,
    intertwiner_space,
    invariants,
    is_isomorphic,
    is_simple,
    module_from_json,
    module_to_json,
    quotient_module,
    restrict_to,
    spin,
    submodule_structure,
    trivial_module,
    twist,
    validate_module,
)
from modlie.zassenhaus import (
    borel,
    divided_power_module,
    f_lambda,
    restricted_zassenhaus,
    simple_module,
    verma,
    witt_algebra,
)


def test_validate_module_basics():
    W = witt_algebra(3, 2)
    assert validate_module(trivial_module(W)).ok
    assert validate_module(adjoint_rep(W)).ok
    for lam in range(3):
        assert validate_module(verma(3, 2, lam)).ok
    bad = ModuleDesc(W, tuple(np.eye(2, dtype=np.int64) for _ in range(9)))
    assert not validate_module(bad).ok


def test_dual_involution_and_trivial():
    V = verma(5, 1, 3)
    assert validate_module(dual(V)).ok
    dd = dual(dual(V))
    assert all(np.array_equal(a, b) for a, b in zip(dd.action, V.action))
    T = trivial_module(witt_algebra(3, 1))
    assert all(np.array_equal(a, b) for a, b in zip(dual(T).action, T.action))


def test_twist_shifts_weight():
    p, m = 3, 2
    W = witt_algebra(p, m)
    B = borel(p, m)
    sigma = sigma_character(W, B.space)
    # reinterpret sigma over the Borel's own coordinates and negate it
    balg = B.alg
    full = SubspaceDesc.full(p, balg.dim)
    minus = CharacterDesc(full, tuple((-v) % p for v in sigma.values))
    for lam in range(p):
        F = f_lambda(balg, lam)
        tw = twist(F, minus)
        expected = f_lambda(balg, lam + 1)
        assert all(np.array_equal(a, b) for a, b in zip(tw.action, expected.action))
        back = twist(tw, CharacterDesc(full, sigma.values))
        assert all(np.array_equal(a, b) for a, b in zip(back.action, F.action))


def test_twist_rejects_nonvanishing_character():
    W = witt_algebra(3, 1)
    full = SubspaceDesc.full(3, 3)
    with pytest.raises(ValueError):
        twist(adjoint_rep(W), CharacterDesc(full, (1, 0, 0)))


def test_restrict_and_extend_roundtrip():
    p, m = 3, 2
    E = restricted_zassenhaus(p, m)
    V = verma(p, m, 1)
    ext = extend_to_envelope(V, E)
    assert validate_module(ext).ok
    # the new generator acts as rho(e_{-1})^p
    assert np.array_equal(
        ext.action[9], np.linalg.matrix_power(V.action[0], 3) % p
    )
    eye = np.eye(E.env.dim, dtype=np.int64)
    wspan = SubspaceDesc.from_vectors(p, E.env.dim, [eye[k] for k in range(9)])
    back = restrict_to(ext, wspan)
    assert all(np.array_equal(a, b) for a, b in zip(back.action, V.action))


def test_spin_and_invariants():
    p, m = 3, 1
    V2 = verma(p, m, 2)  # lam = p-1: one-dimensional socle at the top
    eye = np.eye(3, dtype=np.int64)
    assert spin(V2, [eye[0]]).is_full()
    top = spin(V2, [eye[2]])
    assert top.dim == 1
    assert invariants(V2).dim == 1
    V1 = verma(p, m, 1)
    assert invariants(V1).is_zero()
    assert spin(V1, [eye[0]]).is_full()
    T = trivial_module(witt_algebra(p, m))
    assert invariants(T).is_full()


def test_is_simple_on_verma_family():
    assert is_simple(trivial_module(witt_algebra(3, 1))) is True
    assert is_simple(verma(5, 1, 2)) is True
    assert is_simple(verma(3, 1, 1)) is True
    assert is_simple(verma(3, 2, 1)) is True
    # both degenerate weights are not simple
    assert is_simple(verma(3, 1, 0)) is False
    assert is_simple(verma(5, 1, 4)) is False


def test_composition_series_degenerate_weights():
    for p, m in [(3, 1), (5, 1), (3, 2)]:
        n = p**m
        s0 = composition_series(verma(p, m, 0), seed=1)
        assert [d for d, _ in s0.factors] == [n - 1, 1]
        stop = composition_series(verma(p, m, p - 1), seed=1)
        assert [d for d, _ in stop.factors] == [1, n - 1]
        assert stop.flags[0].dim == 1 and stop.flags[-1].is_full()
        simple = composition_series(verma(p, m, 1), seed=1)
        assert [d for d, _ in simple.factors] == [n]


def test_submodule_and_quotient_consistency():
    V = verma(3, 2, 2)
    eye = np.eye(9, dtype=np.int64)
    top = spin(V, [eye[8]])
    sub = submodule_structure(V, top)
    assert validate_module(sub).ok and sub.dim == 1
    quot = quotient_module(V, top)
    assert validate_module(quot).ok and quot.dim == 8
    assert is_simple(quot) is True


def test_intertwiners_and_isomorphism():
    W = witt_algebra(3, 1)
    A = adjoint_rep(W)
    assert is_isomorphic(A, A) is True
    V = verma(3, 1, 1)  # p - 2 = 1
    assert is_isomorphic(A, V) is True
    space = intertwiner_space(A, V)
    assert space
    for t in space:
        for i in range(3):
            assert np.array_equal(
                t @ A.action[i] % 3, V.action[i] @ t % 3
            )
    assert is_isomorphic(A, trivial_module(W)) is False
    # dual(V(lam)) is V(p-1-lam)
    for p, m in [(3, 1), (5, 1), (3, 2)]:
        for lam in range(p):
            assert is_isomorphic(dual(verma(p, m, lam)), verma(p, m, (p - 1 - lam) % p)) is True


def test_divided_power_isomorphisms():
    for p, m in [(3, 1), (5, 1), (3, 2)]:
        for lam in range(p):
            A = divided_power_module(p, m, (lam + 1) % p)
            assert is_isomorphic(A, verma(p, m, lam)) is True


def test_self_duality_only_at_p3():
    for p, m in [(3, 1), (3, 2), (5, 1), (7, 1)]:
        W = witt_algebra(p, m)
        A = adjoint_rep(W)
        expected = p == 3
        assert is_isomorphic(A, dual(A)) is expected


def test_simple_module_constructions():
    for p, m in [(3, 1), (5, 1), (3, 2)]:
        n = p**m
        assert simple_module(p, m, 0).dim == 1
        assert simple_module(p, m, p - 1).dim == n - 1
        if p > 3:
            assert simple_module(p, m, 2).dim == n


def test_module_json_roundtrip():
    V = verma(3, 1, 2)
    obj = module_to_json(V)
    back = module_from_json(obj)
    assert back.dim == V.dim and back.label == V.label
    assert all(np.array_equal(a, b) for a, b in zip(back.action, V.action))


def test_module_json_with_algebra_path(tmp_path):
    import json

    from modlie.lie_core import algebra_to_json

    V = verma(3, 1, 1)
    apath = tmp_path / "alg.json"
    apath.write_text(json.dumps(algebra_to_json(V.algebra)))
    obj = module_to_json(V, algebra_ref=str(apath))
    back = module_from_json(obj)
    assert back.algebra.dim == 3
    assert all(np.array_equal(a, b) for a, b in zip(back.action, V.action))
