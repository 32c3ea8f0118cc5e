"""Validator sweep over every built-in generator on the whole grid."""

import pytest

from modlie.lie_core import validate_algebra, validate_grading
from modlie.repmod import adjoint_rep, trivial_module, validate_module
from modlie.restricted import validate_pmap
from modlie.zassenhaus import (
    borel,
    divided_power_module,
    nilradical,
    restricted_zassenhaus,
    simple_module,
    torus,
    verma,
    witt_algebra,
)

FULL_GRID = [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (3, 3)]
ODD_GRID = [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)]


@pytest.mark.parametrize("p,m", FULL_GRID)
def test_algebras_validate(p, m):
    W = witt_algebra(p, m)
    assert validate_algebra(W).ok
    assert validate_grading(W, W.grading).ok
    E = restricted_zassenhaus(p, m)
    assert validate_algebra(E.env).ok
    assert validate_pmap(E.env, E.env.pmap).ok
    if E.env.grading is not None:
        assert validate_grading(E.env, E.env.grading).ok
    for sub in (borel(p, m), torus(p, m)):
        assert validate_algebra(sub.alg).ok
        assert validate_pmap(sub.alg, sub.alg.pmap).ok
    if p**m > 2:
        U = nilradical(p, m)
        assert validate_algebra(U.alg).ok
        assert validate_pmap(U.alg, U.alg.pmap).ok


@pytest.mark.parametrize("p,m", ODD_GRID)
def test_modules_validate(p, m):
    W = witt_algebra(p, m)
    assert validate_module(adjoint_rep(W)).ok
    assert validate_module(trivial_module(W)).ok
    for lam in range(p):
        assert validate_module(verma(p, m, lam)).ok
        assert validate_module(divided_power_module(p, m, lam)).ok
    for lam in (0, 1, p - 1):
        assert validate_module(simple_module(p, m, lam)).ok
