"""Restricted structures: p-mappings, minimal p-envelopes, induced modules.

A p-mapping is stored on the basis only; values on arbitrary elements are
obtained through Jacobson's formula, accumulating the correction terms
pairwise in a fixed basis order.  The result is order independent once
the basis table actually is a p-mapping, which ``validate_pmap`` checks
first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gfp_linalg import mat_pow_mod, rref
from .lie_core import (
    GradingDesc,
    LieAlgebraDesc,
    SubspaceDesc,
    ValidationReport,
    ad_matrix,
    algebra_key,
    bracket,
    center,
    lie_algebra,
    subalgebra_structure,
    validate_grading,
)

__all__ = [
    "PMap",
    "EnvelopeDesc",
    "pmap_apply",
    "jacobson_s_terms",
    "validate_pmap",
    "minimal_p_envelope",
    "p_ideal_closure",
    "restricted_induced_module",
]


@dataclass(frozen=True)
class PMap:
    """Images of the basis under the p-operation, as coordinate tuples."""

    images: tuple

    def image(self, i: int) -> np.ndarray:
        return np.array(self.images[i], dtype=np.int64)


@dataclass
class EnvelopeDesc:
    """A p-envelope of L realised inside gl(L).

    ``provenance[k] = (i, r)`` records that the k-th basis element of the
    envelope is the p^r-th power of ad(b_i); evaluating the provenance in
    the adjoint representation reproduces the envelope basis exactly.
    """

    env: LieAlgebraDesc
    embed: np.ndarray  # env.dim x L.dim, column j = image of b_j
    provenance: tuple
    source: LieAlgebraDesc
    matrices: tuple  # raw gl(L) matrices realising the envelope basis


def jacobson_s_terms(L: LieAlgebraDesc, x, y):
    """The s_1..s_{p-1} of Jacobson's formula for the pair (x, y).

    i*s_i(x, y) is the coefficient of t^(i-1) in ad(tx+y)^(p-1)(x),
    computed by iterating ad(tx+y) on x as a polynomial in t with vector
    coefficients.
    """
    p = L.p
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    poly = [x % p]
    for _ in range(p - 1):
        nxt = [np.zeros(L.dim, dtype=np.int64) for _ in range(len(poly) + 1)]
        for d, coeff in enumerate(poly):
            if coeff.any():
                nxt[d] = (nxt[d] + bracket(L, y, coeff)) % p
                nxt[d + 1] = (nxt[d + 1] + bracket(L, x, coeff)) % p
        poly = nxt
    terms = []
    for i in range(1, p):
        c = poly[i - 1] if i - 1 < len(poly) else np.zeros(L.dim, dtype=np.int64)
        inv = pow(i, p - 2, p)
        terms.append((c * inv) % p)
    return terms


def pmap_apply(L: LieAlgebraDesc, pm: PMap, x) -> np.ndarray:
    """x^[p] for an arbitrary x, via the Jacobson extension of the basis table.

    Over F_p the leading semilinear coefficients alpha^p equal alpha, so
    (sum alpha_i b_i)^[p] = sum alpha_i b_i^[p] + correction terms,
    accumulated left to right in basis order.
    """
    p = L.p
    x = np.mod(np.asarray(x, dtype=np.int64), p)
    support = [int(i) for i in np.nonzero(x)[0]]
    result = np.zeros(L.dim, dtype=np.int64)
    partial = np.zeros(L.dim, dtype=np.int64)
    for idx, i in enumerate(support):
        term = np.zeros(L.dim, dtype=np.int64)
        term[i] = x[i]
        result = (result + x[i] * pm.image(i)) % p
        if idx > 0:
            for s in jacobson_s_terms(L, partial, term):
                result = (result + s) % p
        partial = (partial + term) % p
    return result


def validate_pmap(L: LieAlgebraDesc, pm: PMap) -> ValidationReport:
    """Check the p-mapping axioms through the adjoint representation.

    (a) ad(b_i^[p]) = (ad b_i)^p for every basis index;
    (b) the Jacobson extension of every basis pair is again compatible
        with the adjoint, which over F_p suffices by additive generation.
    """
    failures = []
    p = L.p
    if len(pm.images) != L.dim:
        return ValidationReport(False, ["image count does not match dim"])
    eye = np.eye(L.dim, dtype=np.int64)
    for i in range(L.dim):
        lhs = ad_matrix(L, pm.image(i))
        rhs = mat_pow_mod(L.ad(i), p, p)
        if not np.array_equal(lhs, rhs):
            failures.append(f"ad(b_{i}^[p]) != (ad b_{i})^p")
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            z = pmap_apply(L, pm, eye[i] + eye[j])
            lhs = ad_matrix(L, z)
            rhs = mat_pow_mod(np.mod(L.ad(i) + L.ad(j), p), p, p)
            if not np.array_equal(lhs, rhs):
                failures.append(f"Jacobson extension fails on pair ({i},{j})")
    return ValidationReport(not failures, failures)


# ---------------------------------------------------------------------------
# minimal p-envelope of a centreless algebra


def _express_many(p: int, basis_flat: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Coordinates of each target column over the independent columns of basis_flat."""
    n = basis_flat.shape[1]
    aug = np.concatenate([basis_flat, targets], axis=1) % p
    pivots = rref(aug, p)
    if pivots[: n] != list(range(n)) or len(pivots) != n:
        raise AssertionError("target outside the span of the envelope basis")
    return aug[:n, n:] % p


def minimal_p_envelope(L: LieAlgebraDesc) -> EnvelopeDesc:
    """Close ad(L) inside gl(L) under p-th matrix powers.

    Requires a trivial centre so that ad is injective; the span is grown
    in deterministic basis order, appending each new p-th power as a raw
    matrix and echelon-reducing for the membership test only.
    """
    p = L.p
    if not center(L).is_zero():
        raise ValueError("minimal p-envelope construction needs a trivial centre")
    mats = [L.ad(i).copy() for i in range(L.dim)]
    provenance = [(i, 0) for i in range(L.dim)]
    span = np.array([m.reshape(-1) for m in mats], dtype=np.int64)
    rref(span, p)
    idx = 0
    while idx < len(mats):
        cand = mat_pow_mod(mats[idx], p, p)
        flat = cand.reshape(1, -1)
        stacked = np.concatenate([span, flat], axis=0)
        piv = rref(stacked, p)
        if len(piv) > span.shape[0]:
            src, r = provenance[idx]
            mats.append(cand)
            provenance.append((src, r + 1))
            span = stacked[: len(piv)]
        idx += 1

    env_dim = len(mats)
    basis_flat = np.stack([m.reshape(-1) for m in mats], axis=1) % p

    targets = []
    for a in range(env_dim):
        for b in range(a + 1, env_dim):
            comm = np.mod(mats[a] @ mats[b] - mats[b] @ mats[a], p)
            targets.append(comm.reshape(-1))
    for a in range(env_dim):
        targets.append(mat_pow_mod(mats[a], p, p).reshape(-1))
    coords = _express_many(p, basis_flat, np.stack(targets, axis=1))

    labels = list(L.labels)
    for src, r in provenance[L.dim :]:
        labels.append(f"{L.labels[src]}^[p^{r}]")
    sc = {}
    col = 0
    for a in range(env_dim):
        for b in range(a + 1, env_dim):
            row = {
                int(k): int(coords[k, col])
                for k in np.nonzero(coords[:, col])[0]
            }
            if row:
                sc[(a, b)] = row
            col += 1
    env = lie_algebra(p, tuple(labels), sc)
    images = tuple(
        tuple(int(coords[k, col + a]) for k in range(env_dim))
        for a in range(env_dim)
    )
    env.pmap = PMap(images)

    if L.grading is not None:
        degs = [L.grading.deg[src] * p**r for src, r in provenance]
        g = GradingDesc(tuple(degs))
        if validate_grading(env, g):
            env.grading = g

    embed = np.zeros((env_dim, L.dim), dtype=np.int64)
    embed[: L.dim, :] = np.eye(L.dim, dtype=np.int64)
    return EnvelopeDesc(env, embed, tuple(provenance), L, tuple(mats))


def p_ideal_closure(L: LieAlgebraDesc, pm: PMap, S: SubspaceDesc) -> SubspaceDesc:
    """Smallest p-ideal containing S: close under brackets and the p-map."""
    from .lie_core import ideal_closure

    span = S
    while True:
        grown = ideal_closure(L, span)
        for row in list(grown.basis):
            img = pmap_apply(L, pm, row)
            if not grown.contains(img):
                grown = SubspaceDesc.from_vectors(
                    L.p, L.dim, list(grown.basis) + [img]
                )
        if grown.dim == span.dim:
            return grown
        span = grown


# ---------------------------------------------------------------------------
# induced modules over restricted enveloping algebras


class _Straightener:
    """Terminating rewriting of words over an adapted basis of a restricted
    algebra: complement letters first, subalgebra letters last.

    Rules, applied at the first violating position: (i) swap out-of-order
    adjacent letters via xy = yx + [x,y]; (ii) collapse a run of p equal
    letters through the p-operation.  Both strictly decrease the order
    (word length, inversion count), so normal forms are reached.
    """

    def __init__(self, p, bracket_letters, pmap_letters):
        self.p = p
        self.bracket_letters = bracket_letters  # (a,b) -> int vector
        self.pmap_letters = pmap_letters  # letter -> int vector
        self.memo = {}

    def _children(self, word):
        p = self.p
        for t in range(len(word) - 1):
            a, b = word[t], word[t + 1]
            if a > b:
                out = {word[:t] + (b, a) + word[t + 2 :]: 1}
                z = self.bracket_letters[(a, b)]
                for k in np.nonzero(z)[0]:
                    w2 = word[:t] + (int(k),) + word[t + 2 :]
                    out[w2] = (out.get(w2, 0) + int(z[k])) % p
                return out
        run = 1
        for t in range(1, len(word) + 1):
            if t < len(word) and word[t] == word[t - 1]:
                run += 1
                if run == p:
                    out = {}
                    z = self.pmap_letters[word[t]]
                    for k in np.nonzero(z)[0]:
                        w2 = word[: t - p + 1] + (int(k),) + word[t + 1 :]
                        out[w2] = (out.get(w2, 0) + int(z[k])) % p
                    return out
            else:
                run = 1
        return None

    def normal_form(self, word):
        known = self.memo.get(word)
        if known is not None:
            return known
        children = self._children(word)
        if children is None:
            result = {word: 1}
        else:
            result = {}
            for w2, c in children.items():
                if c % self.p == 0:
                    continue
                for w3, c3 in self.normal_form(w2).items():
                    v = (result.get(w3, 0) + c * c3) % self.p
                    if v:
                        result[w3] = v
                    elif w3 in result:
                        del result[w3]
        self.memo[word] = result
        return result


def restricted_induced_module(
    env: LieAlgebraDesc, K: SubspaceDesc, V, cobasis
):
    """Module induced from a restricted module V of the p-subalgebra K.

    The basis is {c_1^{a_1} ... c_r^{a_r} (x) v_t : 0 <= a_j <= p-1} over
    the ordered cobasis; generator actions are computed by straightening
    words in the restricted enveloping algebra and absorbing trailing
    K-letters into the action on V.
    """
    from .repmod import ModuleDesc

    p = env.p
    if env.pmap is None:
        raise ValueError("the ambient algebra must carry a p-mapping")
    r = len(cobasis)
    n = env.dim
    cols = [np.asarray(c, dtype=np.int64) % p for c in cobasis] + [
        np.array(row, dtype=np.int64) for row in K.basis
    ]
    if len(cols) != n:
        raise ValueError("cobasis does not complement K")
    T = np.stack(cols, axis=1) % p
    aug = np.concatenate([T, np.eye(n, dtype=np.int64)], axis=1)
    piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise ValueError("cobasis does not complement K")
    Tinv = aug[:, n:] % p

    bracket_letters = {}
    for a in range(n):
        for b in range(n):
            if a != b:
                w = bracket(env, T[:, a], T[:, b])
                bracket_letters[(a, b)] = Tinv @ w % p
    pmap_letters = [Tinv @ pmap_apply(env, env.pmap, T[:, a]) % p for a in range(n)]

    for a in range(r, n):
        if pmap_letters[a][:r].any():
            raise ValueError("K is not closed under the p-operation")
        for b in range(r, n):
            if a != b and bracket_letters[(a, b)][:r].any():
                raise ValueError("K is not closed under the bracket")

    K_alg = subalgebra_structure(env, K)
    if algebra_key(V.algebra) != algebra_key(K_alg):
        raise ValueError("V is not a module over the given subalgebra")
    for q in range(K.dim):
        img = pmap_letters[r + q][r:]
        target = np.zeros((V.dim, V.dim), dtype=np.int64)
        for q2 in np.nonzero(img)[0]:
            target = (target + int(img[q2]) * V.action[int(q2)]) % p
        if not np.array_equal(mat_pow_mod(V.action[q], p, p), target):
            raise ValueError("V is not a restricted K-module")

    straight = _Straightener(p, bracket_letters, pmap_letters)
    exps = [()]
    for _ in range(r):
        exps = [e + (a,) for e in exps for a in range(p)]
    exp_index = {e: i for i, e in enumerate(exps)}
    dim_v = V.dim
    dim_mod = len(exps) * dim_v

    def absorb(word, vec):
        """Split a normal word into cobasis exponents and K-action on vec."""
        cut = len(word)
        while cut > 0 and word[cut - 1] >= r:
            cut -= 1
        head, tail = word[:cut], word[cut:]
        for letter in reversed(tail):
            vec = V.action[letter - r] @ vec % p
        e = tuple(head.count(ell) for ell in range(r))
        return e, vec

    actions = []
    eye_v = np.eye(dim_v, dtype=np.int64)
    for g in range(n):
        alpha = Tinv @ np.eye(n, dtype=np.int64)[:, g] % p
        mat = np.zeros((dim_mod, dim_mod), dtype=np.int64)
        for e, ei in exp_index.items():
            word = tuple(
                ell for ell, count in enumerate(e) for _ in range(count)
            )
            for letter in np.nonzero(alpha)[0]:
                for w2, c in straight.normal_form((int(letter),) + word).items():
                    for t in range(dim_v):
                        e2, vec = absorb(w2, eye_v[:, t].copy())
                        col = ei * dim_v + t
                        rows = exp_index[e2] * dim_v
                        mat[rows : rows + dim_v, col] = (
                            mat[rows : rows + dim_v, col]
                            + int(alpha[letter]) * c * vec
                        ) % p
        actions.append(mat)
    label = f"ind({V.label})" if V.label else None
    return ModuleDesc(env, tuple(actions), label=label)
