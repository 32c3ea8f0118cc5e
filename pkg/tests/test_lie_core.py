import numpy as np
import pytest

from modlie.lie_core import (
    GradingDesc,
    SubspaceDesc,
    algebra_from_json,
    algebra_to_json,
    bracket,
    center,
    derived_series,
    derived_subalgebra,
    ideal_closure,
    is_abelian,
    is_ideal,
    is_nilpotent,
    is_solvable,
    lie_algebra,
    lower_central_series,
    quotient,
    sigma_character,
    validate_algebra,
    validate_grading,
)
from modlie.zassenhaus import borel, nilradical, witt_algebra

GRID = [(2, 1), (3, 1), (3, 2), (5, 1), (7, 1), (5, 2), (3, 3)]


def abelian(p, n):
    return lie_algebra(p, tuple(f"a{i}" for i in range(n)), {})


def sl2_like(p):
    # [h,e] = 2e, [h,f] = -2f, [e,f] = h on basis (e, h, f)
    return lie_algebra(
        p,
        ("e", "h", "f"),
        {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}},
    )


def test_validate_abelian_and_witt():
    assert validate_algebra(abelian(3, 4)).ok
    for p, m in [(3, 1), (3, 2), (5, 1), (7, 1), (2, 1)]:
        assert validate_algebra(witt_algebra(p, m)).ok


def test_validate_catches_antisymmetry():
    L = lie_algebra(5, ("a", "b"), {(0, 1): {0: 1}})
    L.brackets[(1, 0)] = {0: 1}  # deliberately corrupt
    rep = validate_algebra(L)
    assert not rep.ok
    assert any("antisymmetry" in f for f in rep.failures)


def test_validate_catches_jacobi():
    # [[x,y],z] + [[y,z],x] + [[z,x],y] = -z here, so Jacobi fails
    bad = lie_algebra(
        3, ("x", "y", "z"), {(0, 1): {2: 1}, (0, 2): {0: 1}, (1, 2): {0: 1}}
    )
    rep = validate_algebra(bad)
    assert not rep.ok and any("Jacobi" in f for f in rep.failures)


def test_bracket_examples():
    W = witt_algebra(3, 1)
    eye = np.eye(3, dtype=np.int64)
    x = np.array([1, 2, 1], dtype=np.int64)
    assert not bracket(W, x, x).any()
    # [e_1, e_-1] = -e_0
    assert list(bracket(W, eye[2], eye[0])) == [0, 2, 0]
    # [e_0, e_j] = j e_j
    for p, m in [(3, 2), (5, 1), (7, 1)]:
        W = witt_algebra(p, m)
        n = p**m
        eye = np.eye(n, dtype=np.int64)
        for b in range(n):
            j = b - 1
            expected = np.zeros(n, dtype=np.int64)
            expected[b] = j % p
            assert np.array_equal(bracket(W, eye[1], eye[b]), expected)
    with pytest.raises(ValueError):
        bracket(witt_algebra(3, 1), [1, 0], [0, 1, 0])


def test_center_cases():
    assert center(abelian(5, 3)).dim == 3
    assert center(witt_algebra(3, 1)).is_zero()


def test_series_and_predicates():
    assert is_abelian(abelian(3, 2))
    assert derived_subalgebra(abelian(3, 2)).is_zero()
    B = borel(3, 2).alg
    assert is_solvable(B) and not is_nilpotent(B)
    U = nilradical(3, 2).alg
    assert is_nilpotent(U) and is_solvable(U)
    W = witt_algebra(3, 2)
    assert not is_solvable(W)
    assert derived_subalgebra(W).is_full()
    assert len(derived_series(B)) >= 2
    assert lower_central_series(U)[-1].is_zero()


def test_witt_p2_derived_dim_one():
    W = witt_algebra(2, 1)
    assert W.dim == 2
    d = derived_subalgebra(W)
    assert d.dim == 1 and not is_abelian(W)


def test_ideals_and_quotient():
    W = witt_algebra(3, 2)
    B = borel(3, 2)
    U = nilradical(3, 2)
    # the positive part is an ideal of the non-negative part, inside W coords
    balg = B.alg
    eye = np.eye(balg.dim, dtype=np.int64)
    u_in_b = SubspaceDesc.from_vectors(3, balg.dim, [eye[k] for k in range(1, balg.dim)])
    assert is_ideal(balg, u_in_b)
    Q = quotient(balg, u_in_b)
    assert Q.dim == 1 and validate_algebra(Q).ok
    # spinning the top weight vector through W recovers all of W
    top = np.zeros(9, dtype=np.int64)
    top[8] = 1
    closure = ideal_closure(W, SubspaceDesc.from_vectors(3, 9, [top]))
    assert closure.is_full()
    with pytest.raises(ValueError):
        quotient(W, B.space)  # the Borel is not an ideal of W


def test_subalgebra_structure_validates():
    for p, m in [(3, 2), (5, 1)]:
        B = borel(p, m)
        assert validate_algebra(B.alg).ok
        U = nilradical(p, m)
        assert validate_algebra(U.alg).ok


def test_sigma_character():
    for p, m in [(3, 1), (3, 2), (5, 1), (5, 2)]:
        W = witt_algebra(p, m)
        B = borel(p, m)
        chi = sigma_character(W, B.space)
        # sigma(e_i) = -delta_{i0}
        expected = tuple(
            (p - 1) if k == 0 else 0 for k in range(B.space.dim)
        )
        assert chi.values == expected
    W = witt_algebra(3, 1)
    full = SubspaceDesc.full(3, 3)
    assert sigma_character(W, full).values == (0, 0, 0)
    with pytest.raises(ValueError):
        # span(e_1, e_-1) is not a subalgebra of W(3,1)
        eye = np.eye(3, dtype=np.int64)
        sigma_character(W, SubspaceDesc.from_vectors(3, 3, [eye[0], eye[2]]))


def test_gradings():
    W = witt_algebra(3, 1)
    assert validate_grading(W, W.grading).ok
    assert validate_grading(W, GradingDesc((0, 0, 0))).ok
    bad = GradingDesc((-1, 1, 1))
    assert not validate_grading(W, bad).ok
    for p, m in GRID:
        Wm = witt_algebra(p, m)
        assert validate_grading(Wm, Wm.grading).ok


def test_json_roundtrip():
    for p, m in [(3, 2), (5, 1)]:
        W = witt_algebra(p, m)
        obj = algebra_to_json(W)
        back = algebra_from_json(obj)
        assert back.p == W.p and back.labels == W.labels
        assert back.brackets == W.brackets
        assert back.grading == W.grading
        assert algebra_to_json(back) == obj
    B = borel(3, 2).alg
    obj = algebra_to_json(B)
    back = algebra_from_json(obj)
    assert back.pmap.images == B.pmap.images
