import numpy as np
import pytest

from modlie.gfp_linalg import mat_pow_mod
from modlie.lie_core import SubspaceDesc, ad_matrix, center, validate_algebra
from modlie.repmod import validate_module
from modlie.restricted import (
    PMap,
    jacobson_s_terms,
    minimal_p_envelope,
    pmap_apply,
    restricted_induced_module,
    validate_pmap,
)
from modlie.zassenhaus import (
    borel,
    f_lambda,
    nilradical,
    restricted_zassenhaus,
    torus,
    verma,
    witt_algebra,
)
from modlie.lie_core import lie_algebra


def abelian(p, n):
    return lie_algebra(p, tuple(f"a{i}" for i in range(n)), {})


def test_pmap_apply_basics():
    B = borel(3, 2).alg
    eye = np.eye(B.dim, dtype=np.int64)
    for i in range(B.dim):
        assert np.array_equal(pmap_apply(B, B.pmap, eye[i]), B.pmap.image(i))
    A = abelian(5, 3)
    zero = PMap(tuple((0,) * 3 for _ in range(3)))
    assert not pmap_apply(A, zero, [1, 2, 3]).any()


def test_borel_pmap_table():
    # the only non-toral basis element with a nonzero p-th power in the
    # non-negative part of W(3,2) is e_2, with image 2 e_6
    B = borel(3, 2).alg
    images = B.pmap.images
    assert images[0][0] == 1  # e_0 is toral
    expected = {2: (6, 2)}
    for i in range(1, B.dim):
        nz = {k: v for k, v in enumerate(images[i]) if v}
        if i in expected:
            k, v = expected[i]
            assert nz == {k: v}
        else:
            assert nz == {}


def test_validate_pmap_on_generators():
    for p, m in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2)]:
        B = borel(p, m)
        assert validate_pmap(B.alg, B.alg.pmap).ok
        U = nilradical(p, m)
        assert validate_pmap(U.alg, U.alg.pmap).ok
        T = torus(p, m)
        assert validate_pmap(T.alg, T.alg.pmap).ok


def test_nilradical_is_p_unipotent():
    for p, m in [(3, 2), (5, 2), (3, 3)]:
        U = nilradical(p, m).alg
        for i in range(U.dim):
            once = pmap_apply(U, U.pmap, np.eye(U.dim, dtype=np.int64)[i])
            twice = pmap_apply(U, U.pmap, once)
            assert not twice.any()


def test_validate_pmap_catches_bad_toral_image():
    B = borel(3, 1).alg
    bad = PMap(tuple((0,) * B.dim for _ in range(B.dim)))
    rep = validate_pmap(B, bad)
    assert not rep.ok and any("b_0" in f for f in rep.failures)


def test_jacobson_terms_zero_cases():
    W = witt_algebra(3, 2)
    zero = np.zeros(9, dtype=np.int64)
    assert all(not s.any() for s in jacobson_s_terms(W, zero, np.eye(9, dtype=np.int64)[3]))
    A = abelian(7, 4)
    assert all(
        not s.any()
        for s in jacobson_s_terms(A, np.array([1, 2, 3, 4]), np.array([4, 3, 2, 1]))
    )


def test_jacobson_sum_against_matrix_powers():
    # in the faithful adjoint realisation of the envelope, x^[p] is the
    # p-th matrix power, so Jacobson's formula can be cross-checked exactly
    for p, m in [(3, 2), (5, 1), (7, 1)]:
        E = restricted_zassenhaus(p, m)
        env = E.env
        rng = np.random.default_rng(7)
        for _ in range(4):
            x = rng.integers(0, p, env.dim)
            y = rng.integers(0, p, env.dim)
            Ax = ad_matrix(env, x)
            Ay = ad_matrix(env, y)
            lhs = mat_pow_mod((Ax + Ay) % p, p, p)
            rhs = (mat_pow_mod(Ax, p, p) + mat_pow_mod(Ay, p, p)) % p
            for s in jacobson_s_terms(env, x, y):
                rhs = (rhs + ad_matrix(env, s)) % p
            assert np.array_equal(lhs, rhs)


def test_minimal_envelope_witt():
    # W(3,1) is already restricted; W(3,2) needs one extra generator
    E1 = restricted_zassenhaus(3, 1)
    assert E1.env.dim == 3
    E2 = restricted_zassenhaus(3, 2)
    assert E2.env.dim == 10
    assert E2.provenance[9] == (0, 1)
    assert validate_algebra(E2.env).ok
    assert validate_pmap(E2.env, E2.env.pmap).ok
    assert center(E2.env).is_zero()
    # [L, L] of the envelope lands inside the embedded algebra
    from modlie.lie_core import derived_subalgebra

    d = derived_subalgebra(E2.env)
    for row in d.basis:
        assert not np.array(row[9:]).any()


def test_envelope_dims_grid():
    for p, m in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)]:
        E = restricted_zassenhaus(p, m)
        assert E.env.dim == p**m + m - 1
        # (ad e_{-1})^{p^m} = 0
        assert not mat_pow_mod(witt_algebra(p, m).ad(0), p**m, p).any()


def test_envelope_rejects_nonzero_center():
    U = nilradical(3, 2).alg  # nilpotent, so its centre is nonzero
    with pytest.raises(ValueError):
        minimal_p_envelope(U)


def test_restricted_induced_trivial_case():
    # K = env with the full space recovers V itself
    E = restricted_zassenhaus(3, 1)
    env = E.env
    B = borel(3, 1)
    # full-space K over the envelope:
    K = SubspaceDesc.full(3, env.dim)
    from modlie.lie_core import subalgebra_structure
    from modlie.repmod import adjoint_rep

    V = adjoint_rep(subalgebra_structure(env, K))
    M = restricted_induced_module(env, K, V, [])
    assert M.dim == V.dim
    assert all(np.array_equal(a, b) for a, b in zip(M.action, V.action))


def _borel_in_envelope(p, m):
    E = restricted_zassenhaus(p, m)
    env = E.env
    n = p**m
    eye = np.eye(env.dim, dtype=np.int64)
    K = SubspaceDesc.from_vectors(p, env.dim, [eye[k] for k in range(1, n)])
    cobasis = [eye[0]] + [eye[n + r] for r in range(m - 1)]
    return E, K, cobasis


def test_restricted_induced_weights_m1():
    from modlie.lie_core import subalgebra_structure

    E, K, cobasis = _borel_in_envelope(3, 1)
    lam = 2
    V = f_lambda(subalgebra_structure(E.env, K), lam)
    M = restricted_induced_module(E.env, K, V, cobasis)
    assert M.dim == 3
    assert validate_module(M).ok
    e0 = M.action[1]
    assert np.array_equal(np.diag(e0), np.array([lam, lam - 1, lam - 2]) % 3)


def test_restricted_induced_is_verma():
    from modlie.lie_core import subalgebra_structure
    from modlie.repmod import is_isomorphic

    for p, m, lam in [(3, 1, 0), (3, 1, 2), (3, 2, 1), (5, 1, 3)]:
        E, K, cobasis = _borel_in_envelope(p, m)
        V = f_lambda(subalgebra_structure(E.env, K), lam)
        M = restricted_induced_module(E.env, K, V, cobasis)
        assert validate_module(M).ok
        assert M.dim == p**m
        # compare against the direct Verma construction, extended to the envelope
        from modlie.repmod import extend_to_envelope

        Vr = extend_to_envelope(verma(p, m, lam), E)
        assert is_isomorphic(M, Vr, seed=5) is True
