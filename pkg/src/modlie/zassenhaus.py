"""Generators for the rank-one Cartan-type family: the graded algebra W(m)
spanned by e_{-1}..e_{p^m-2}, its distinguished subalgebras, its minimal
p-envelope, and the attached modules (one-dimensional weight modules,
baby Verma modules, divided-power realisations, simple quotients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import DEFAULT_SEED
from .gfp_linalg import is_prime, lucas_binomial
from .lie_core import (
    GradingDesc,
    LieAlgebraDesc,
    SubspaceDesc,
    lie_algebra,
    subalgebra_structure,
)
from .repmod import (
    ModuleDesc,
    adjoint_rep,
    dual,
    extend_to_envelope,
    is_simple,
    quotient_module,
    trivial_module,
    validate_module,
)
from .restricted import EnvelopeDesc, PMap, minimal_p_envelope

__all__ = [
    "ZassParams",
    "SubalgebraData",
    "witt_algebra",
    "borel",
    "nilradical",
    "torus",
    "restricted_zassenhaus",
    "f_lambda",
    "verma",
    "verma_twisted",
    "divided_power_module",
    "simple_module",
    "invariant_form",
    "AlgebraContext",
    "SpecError",
    "build_algebra",
    "build_module",
]


@dataclass(frozen=True)
class ZassParams:
    p: int
    m: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.m < 1:
            raise ValueError("m must be a positive integer")


@dataclass
class SubalgebraData:
    """A distinguished subalgebra: its span in W(m) plus its own structure."""

    space: SubspaceDesc
    alg: LieAlgebraDesc


def _check(p, m):
    ZassParams(p, m)
    return p**m


def witt_algebra(p: int, m: int) -> LieAlgebraDesc:
    """Basis e_{-1}..e_{p^m-2} at positions 0..p^m-1, graded by deg e_i = i.

    [e_i, e_j] = (C(i+j+1, j) - C(i+j+1, i)) e_{i+j} when the target index
    stays in range, 0 otherwise.
    """
    n = _check(p, m)
    labels = tuple(f"e_{i}" for i in range(-1, n - 1))
    sc = {}
    for a in range(n):
        for b in range(a + 1, n):
            i, j = a - 1, b - 1
            if not (-1 <= i + j <= n - 2):
                continue
            c = (lucas_binomial(i + j + 1, j, p) - lucas_binomial(i + j + 1, i, p)) % p
            if c:
                sc[(a, b)] = {i + j + 1: c}
    L = lie_algebra(p, labels, sc)
    L.grading = GradingDesc(tuple(range(-1, n - 1)))
    return L


def _weight_pmap(p, m, offset):
    """The p-operation table for the span of e_offset..e_{p^m-2}.

    e_0 is toral, e_i with i = p^t - 1 powers into (p-1)! e_{pi}, and every
    other basis element is p-nilpotent.
    """
    n = p**m
    wilson = math.factorial(p - 1) % p
    dim = n - 1 - offset
    images = []
    for q in range(dim):
        i = q + offset
        img = [0] * dim
        if i == 0:
            img[0 - offset] = 1
        else:
            t = 0
            pt = 1
            while pt < i + 1:
                pt *= p
                t += 1
            if pt == i + 1 and 1 <= t <= m - 1:
                img[p * i - offset] = wilson
        images.append(tuple(img))
    return PMap(tuple(images))


def borel(p: int, m: int) -> SubalgebraData:
    """The non-negative part e_0..e_{p^m-2}, restricted by the weight p-map."""
    n = _check(p, m)
    W = witt_algebra(p, m)
    eye = np.eye(n, dtype=np.int64)
    space = SubspaceDesc.from_vectors(p, n, [eye[k] for k in range(1, n)])
    alg = subalgebra_structure(W, space)
    alg.pmap = _weight_pmap(p, m, 0)
    return SubalgebraData(space, alg)


def nilradical(p: int, m: int) -> SubalgebraData:
    """The strictly positive part e_1..e_{p^m-2}; p-unipotent."""
    n = _check(p, m)
    W = witt_algebra(p, m)
    eye = np.eye(n, dtype=np.int64)
    space = SubspaceDesc.from_vectors(p, n, [eye[k] for k in range(2, n)])
    alg = subalgebra_structure(W, space)
    alg.pmap = _weight_pmap(p, m, 1)
    return SubalgebraData(space, alg)


def torus(p: int, m: int) -> SubalgebraData:
    n = _check(p, m)
    W = witt_algebra(p, m)
    eye = np.eye(n, dtype=np.int64)
    space = SubspaceDesc.from_vectors(p, n, [eye[1]])
    alg = subalgebra_structure(W, space)
    alg.pmap = PMap(((1,),))
    return SubalgebraData(space, alg)


def restricted_zassenhaus(p: int, m: int) -> EnvelopeDesc:
    """Minimal p-envelope of W(m), cross-checked against its closed form.

    The envelope appends the iterated p-th powers of ad e_{-1}; each new
    generator g_r shifts the graded basis by p^r steps:
    [g_r, e_j] = e_{j - p^r}.
    """
    n = _check(p, m)
    W = witt_algebra(p, m)
    E = minimal_p_envelope(W)
    env = E.env
    if env.dim != n + m - 1:
        raise RuntimeError(
            f"envelope dimension {env.dim} differs from the closed form {n + m - 1}"
        )
    for k, (src, r) in enumerate(E.provenance[n:]):
        if (src, r) != (0, k + 1):
            raise RuntimeError("unexpected envelope provenance")
        g = n + k
        pr = p ** (k + 1)
        for b in range(n):
            j = b - 1
            expected = {}
            if j - pr >= -1:
                expected = {j - pr + 1: 1}
            if env.bracket_basis(g, b) != expected:
                raise RuntimeError(
                    "envelope bracket disagrees with the shift [g_r, e_j] = e_{j-p^r}"
                )
        for g2 in range(n, env.dim):
            if g2 != g and env.bracket_basis(g, g2):
                raise RuntimeError("envelope generators fail to commute")
    return E


# ---------------------------------------------------------------------------
# modules


def f_lambda(balg: LieAlgebraDesc, lam: int) -> ModuleDesc:
    """One-dimensional weight module over the non-negative subalgebra:
    e_0 acts by lam, all higher e_i act by zero."""
    p = balg.p
    acts = [np.zeros((1, 1), dtype=np.int64) for _ in range(balg.dim)]
    acts[0][0, 0] = lam % p
    return ModuleDesc(balg, tuple(acts), label=f"F({lam % p})")


def _verma_matrices(p, m, lam, c):
    n = p**m
    lam %= p
    acts = []
    down = np.zeros((n, n), dtype=np.int64)
    for a in range(n - 1):
        down[a + 1, a] = 1
    down[0, n - 1] = c % p
    acts.append(down)
    for i in range(0, n - 1):
        mat = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            if a - i < 0:
                continue
            coeff = (
                lam * lucas_binomial(a, i, p) - lucas_binomial(a, i + 1, p)
            ) % p
            if i % 2:
                coeff = (-coeff) % p
            if coeff:
                mat[a - i, a] = coeff
        acts.append(mat)
    return tuple(acts)


def verma(p: int, m: int, lam: int) -> ModuleDesc:
    """Baby Verma module on the basis e_{-1}^a (x) 1, a = 0..p^m-1.

    e_{-1} raises a by one (annihilating the top), e_0 acts with weight
    lam - a, and e_i lowers a by i with the binomial coefficient
    (-1)^i (lam C(a,i) - C(a,i+1)).
    """
    _check(p, m)
    W = witt_algebra(p, m)
    M = ModuleDesc(W, _verma_matrices(p, m, lam, 0), label=f"V({lam % p})")
    rep = validate_module(M)
    if not rep:
        raise ValueError(f"Verma construction failed the module axioms: {rep.failures[:2]}")
    return M


def verma_twisted(p: int, m: int, lam: int, c: int) -> ModuleDesc:
    """Verma variant where the top power of e_{-1} wraps around with factor c.

    Whether the wrapped action table satisfies the module axioms is decided
    by the validator, not assumed.
    """
    _check(p, m)
    W = witt_algebra(p, m)
    M = ModuleDesc(
        W, _verma_matrices(p, m, lam, c), label=f"V({lam % p};c={c % p})"
    )
    rep = validate_module(M)
    if not rep:
        raise ValueError(
            f"twisted Verma table is not a module for lambda={lam}, c={c}"
        )
    return M


def divided_power_module(p: int, m: int, lam: int) -> ModuleDesc:
    """The divided-power space x^(0)..x^(p^m-1) with f d acting by
    f d(g) + lam d(f) g; lam = 0 is the natural module."""
    n = _check(p, m)
    lam %= p
    W = witt_algebra(p, m)
    acts = []
    down = np.zeros((n, n), dtype=np.int64)
    for a in range(1, n):
        down[a - 1, a] = 1
    acts.append(down)
    for i in range(0, n - 1):
        mat = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            if a + i >= n:
                continue
            coeff = (
                lucas_binomial(a + i, i + 1, p)
                + lam * lucas_binomial(a + i, i, p)
            ) % p
            if coeff:
                mat[a + i, a] = coeff
        acts.append(mat)
    M = ModuleDesc(W, tuple(acts), label=f"A({lam})")
    rep = validate_module(M)
    if not rep:
        raise ValueError(f"divided-power table failed the module axioms: {rep.failures[:2]}")
    return M


def simple_module(p: int, m: int, lam: int, seed: int = DEFAULT_SEED) -> ModuleDesc:
    """The simple module with highest weight lam: the Verma module away
    from the two degenerate weights, the trivial module at 0, and the
    codimension-one Verma quotient at p-1.  The output is certified simple."""
    n = _check(p, m)
    if p == 2:
        raise ValueError("simple quotients are only classified for p > 2")
    lam %= p
    if lam == 0:
        M = trivial_module(witt_algebra(p, m))
        M.label = "S(0)"
    elif lam == p - 1:
        V = verma(p, m, lam)
        eye = np.eye(n, dtype=np.int64)
        top = SubspaceDesc.from_vectors(p, n, [eye[n - 1]])
        M = quotient_module(V, top)
        M.label = f"S({lam})"
    else:
        M = verma(p, m, lam)
        M.label = f"S({lam})"
    if is_simple(M, seed) is not True:
        raise ValueError(f"constructed module failed the simplicity certificate (lam={lam})")
    return M


def invariant_form(p: int, m: int) -> np.ndarray:
    """Gram matrix of (e_i, e_j) = top divided-power coefficient of
    x^(i+1) x^(j+1); only defined at p = 3."""
    if p != 3:
        raise ValueError("the invariant form exists only at p = 3")
    n = _check(p, m)
    gram = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        b = n - 1 - a
        if 0 <= b < n:
            gram[a, b] = lucas_binomial(n - 1, a, p)
    return gram


# ---------------------------------------------------------------------------
# spec-string builders shared by the CLI and the verification suite


class SpecError(ValueError):
    pass


@dataclass
class AlgebraContext:
    spec: str
    kind: str  # witt | borel | envelope
    p: int
    m: int
    algebra: LieAlgebraDesc
    envelope: EnvelopeDesc | None = None


def _parse_pm(body: str, spec: str):
    parts = body.split(",")
    if len(parts) != 2:
        raise SpecError(f"expected '<name>:p,m' in {spec!r}")
    try:
        p, m = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise SpecError(f"non-integer parameters in {spec!r}") from exc
    try:
        ZassParams(p, m)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return p, m


def build_algebra(spec: str) -> AlgebraContext:
    if ":" not in spec:
        raise SpecError(f"malformed algebra spec {spec!r}")
    name, body = spec.split(":", 1)
    if name == "witt":
        p, m = _parse_pm(body, spec)
        return AlgebraContext(spec, "witt", p, m, witt_algebra(p, m))
    if name == "borel":
        p, m = _parse_pm(body, spec)
        return AlgebraContext(spec, "borel", p, m, borel(p, m).alg)
    if name == "envelope":
        p, m = _parse_pm(body, spec)
        env = restricted_zassenhaus(p, m)
        return AlgebraContext(spec, "envelope", p, m, env.env, env)
    raise SpecError(f"unknown algebra spec {spec!r}")


def _parse_lambda(body: str, spec: str):
    parts = body.split(",")
    try:
        vals = [int(x) for x in parts]
    except ValueError as exc:
        raise SpecError(f"non-integer parameters in {spec!r}") from exc
    if len(vals) == 1:
        return vals[0], 0
    if len(vals) == 2:
        return vals[0], vals[1]
    raise SpecError(f"too many parameters in {spec!r}")


def build_module(ctx: AlgebraContext, spec: str, seed: int = DEFAULT_SEED) -> ModuleDesc:
    if spec == "adjoint":
        return adjoint_rep(ctx.algebra)
    if spec == "trivial":
        return trivial_module(ctx.algebra)
    if spec.startswith("dual:"):
        return dual(build_module(ctx, spec[len("dual:") :], seed))
    if ":" not in spec:
        raise SpecError(f"malformed module spec {spec!r}")
    name, body = spec.split(":", 1)
    if name in ("verma", "dpow", "simple"):
        if ctx.kind not in ("witt", "envelope"):
            raise SpecError(f"module spec {spec!r} needs a witt or envelope algebra")
        lam, c = _parse_lambda(body, spec)
        if name == "verma":
            M = verma_twisted(ctx.p, ctx.m, lam, c) if c % ctx.p else verma(ctx.p, ctx.m, lam)
        elif name == "dpow":
            if c:
                raise SpecError(f"dpow takes a single parameter in {spec!r}")
            M = divided_power_module(ctx.p, ctx.m, lam)
        else:
            if c:
                raise SpecError(f"simple takes a single parameter in {spec!r}")
            M = simple_module(ctx.p, ctx.m, lam, seed)
        if ctx.kind == "envelope":
            M = extend_to_envelope(M, ctx.envelope)
        return M
    raise SpecError(f"unknown module spec {spec!r}")
