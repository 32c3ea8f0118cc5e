"""Finite-dimensional Lie algebras over F_p by sparse structure constants.

An algebra is described by its bracket table on basis pairs; antisymmetric
counterparts are synthesised at construction time, so callers only supply
brackets for i < j.  Subspaces are canonicalised to reduced row echelon
form, which makes equality of spans representation independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gfp_linalg import DenseMat, is_prime, kernel_basis, rref

__all__ = [
    "LieAlgebraDesc",
    "GradingDesc",
    "CharacterDesc",
    "SubspaceDesc",
    "ValidationReport",
    "lie_algebra",
    "validate_algebra",
    "bracket",
    "ad_matrix",
    "center",
    "derived_subalgebra",
    "derived_series",
    "lower_central_series",
    "is_abelian",
    "is_solvable",
    "is_nilpotent",
    "is_ideal",
    "ideal_closure",
    "quotient",
    "subalgebra_structure",
    "sigma_character",
    "validate_grading",
    "algebra_to_json",
    "algebra_from_json",
    "algebra_key",
]


@dataclass
class ValidationReport:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class GradingDesc:
    """Integer degree per basis index; valid when [L_a, L_b] lands in L_{a+b}."""

    deg: tuple


@dataclass(frozen=True)
class SubspaceDesc:
    """Subspace of F_p^n stored as reduced-echelon basis rows."""

    p: int
    ambient_dim: int
    basis: tuple  # tuple of coordinate tuples, RREF rows
    pivots: tuple

    @classmethod
    def from_vectors(cls, p: int, ambient_dim: int, vectors) -> "SubspaceDesc":
        vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
        if not vectors:
            return cls(p, ambient_dim, (), ())
        a = np.array(vectors, dtype=np.int64) % p
        pivots = rref(a, p)
        rows = tuple(tuple(int(x) for x in a[i]) for i in range(len(pivots)))
        return cls(p, ambient_dim, rows, tuple(pivots))

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "SubspaceDesc":
        return cls(p, ambient_dim, (), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "SubspaceDesc":
        eye = np.eye(ambient_dim, dtype=np.int64)
        rows = tuple(tuple(int(x) for x in r) for r in eye)
        return cls(p, ambient_dim, rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def basis_array(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        return np.array(self.basis, dtype=np.int64)

    def reduce(self, v) -> np.ndarray:
        """Residue of v after clearing all pivot coordinates."""
        w = np.mod(np.asarray(v, dtype=np.int64), self.p)
        for row, piv in zip(self.basis, self.pivots):
            c = int(w[piv])
            if c:
                w = (w - c * np.array(row, dtype=np.int64)) % self.p
        return w

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def coords_of(self, v):
        """Coordinates of v over the echelon basis, or None if outside."""
        w = np.mod(np.asarray(v, dtype=np.int64), self.p)
        coords = np.array([w[piv] for piv in self.pivots], dtype=np.int64)
        if not self.basis:
            return coords if not w.any() else None
        rec = coords @ self.basis_array() % self.p
        if np.array_equal(rec, w):
            return coords
        return None


@dataclass(frozen=True)
class CharacterDesc:
    """Linear functional on a subspace, given by values on its echelon basis."""

    space: SubspaceDesc
    values: tuple

    def value_on(self, v) -> int:
        coords = self.space.coords_of(v)
        if coords is None:
            raise ValueError("vector outside the character's domain")
        return int(sum(int(c) * int(w) for c, w in zip(coords, self.values)) % self.space.p)


@dataclass
class LieAlgebraDesc:
    """Lie algebra over F_p with a sparse bracket table.

    ``brackets`` maps ordered pairs (i, j) to {k: coefficient of b_k}.
    Both orders are stored; the constructor helper ``lie_algebra``
    synthesises missing antisymmetric counterparts.
    """

    p: int
    labels: tuple
    brackets: dict
    pmap: object | None = None  # restricted.PMap when the algebra is restricted
    grading: GradingDesc | None = None
    _ad: list = field(default_factory=list, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.brackets.get((i, j), {})

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad(b_i) with columns [b_i, b_j]."""
        if not self._ad:
            self._ad.extend([None] * self.dim)
        if self._ad[i] is None:
            a = np.zeros((self.dim, self.dim), dtype=np.int64)
            for j in range(self.dim):
                for k, c in self.bracket_basis(i, j).items():
                    a[k, j] = c % self.p
            self._ad[i] = a
        return self._ad[i]


def lie_algebra(p: int, labels, sc) -> LieAlgebraDesc:
    """Build an algebra from structure constants given for i < j."""
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    labels = tuple(labels)
    n = len(labels)
    table: dict = {}
    for (i, j), row in sc.items():
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bracket ({i},{j}) out of range")
        cleaned = {k: v % p for k, v in row.items() if v % p}
        for k in cleaned:
            if not 0 <= k < n:
                raise ValueError(f"bracket ({i},{j}) hits index {k} out of range")
        if cleaned:
            table[(i, j)] = cleaned
    for (i, j) in list(table):
        if (j, i) not in table and i != j:
            table[(j, i)] = {k: (-v) % p for k, v in table[(i, j)].items()}
    return LieAlgebraDesc(p, labels, table)


def bracket(L: LieAlgebraDesc, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape != (L.dim,) or y.shape != (L.dim,):
        raise ValueError("vector length does not match the algebra dimension")
    out = np.zeros(L.dim, dtype=np.int64)
    for i in np.nonzero(x)[0]:
        xi = int(x[i])
        for j in np.nonzero(y)[0]:
            coeff = xi * int(y[j])
            for k, c in L.bracket_basis(int(i), int(j)).items():
                out[k] += coeff * c
    return np.mod(out, L.p)


def ad_matrix(L: LieAlgebraDesc, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    a = np.zeros((L.dim, L.dim), dtype=np.int64)
    for i in np.nonzero(x)[0]:
        a += int(x[i]) * L.ad(int(i))
    return np.mod(a, L.p)


def validate_algebra(L: LieAlgebraDesc) -> ValidationReport:
    """Check alternation, antisymmetry and the Jacobi identity on all triples."""
    failures = []
    p = L.p
    for (i, j), row in L.brackets.items():
        if i == j and any(v % p for v in row.values()):
            failures.append(f"[b_{i},b_{i}] != 0")
    for (i, j) in L.brackets:
        if i < j:
            fwd = L.bracket_basis(i, j)
            bwd = L.bracket_basis(j, i)
            keys = set(fwd) | set(bwd)
            if any((fwd.get(k, 0) + bwd.get(k, 0)) % p for k in keys):
                failures.append(f"antisymmetry fails on pair ({i},{j})")
    n = L.dim
    eye = np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            bij = bracket(L, eye[i], eye[j])
            for k in range(j + 1, n):
                s = bracket(L, bij, eye[k])
                s += bracket(L, bracket(L, eye[j], eye[k]), eye[i])
                s += bracket(L, bracket(L, eye[k], eye[i]), eye[j])
                if np.mod(s, p).any():
                    failures.append(f"Jacobi fails on triple ({i},{j},{k})")
    return ValidationReport(not failures, failures)


def validate_grading(L: LieAlgebraDesc, g: GradingDesc) -> ValidationReport:
    failures = []
    deg = g.deg
    if len(deg) != L.dim:
        return ValidationReport(False, ["degree list length mismatch"])
    for (i, j), row in L.brackets.items():
        for k, c in row.items():
            if c % L.p and deg[k] != deg[i] + deg[j]:
                failures.append(
                    f"[b_{i},b_{j}] has a component of wrong degree at b_{k}"
                )
    return ValidationReport(not failures, failures)


# ---------------------------------------------------------------------------
# structural subspaces


def center(L: LieAlgebraDesc) -> SubspaceDesc:
    n = L.dim
    stacked = np.zeros((n * n, n), dtype=np.int64)
    for j in range(n):
        stacked[:, j] = L.ad(j).reshape(-1)
    ker = kernel_basis(DenseMat(L.p, stacked))
    return SubspaceDesc.from_vectors(L.p, n, ker)


def _span_of_brackets(L: LieAlgebraDesc, A: SubspaceDesc, B: SubspaceDesc) -> SubspaceDesc:
    vecs = []
    for u in A.basis:
        for v in B.basis:
            w = bracket(L, u, v)
            if w.any():
                vecs.append(w)
    return SubspaceDesc.from_vectors(L.p, L.dim, vecs)


def derived_subalgebra(L: LieAlgebraDesc) -> SubspaceDesc:
    full = SubspaceDesc.full(L.p, L.dim)
    return _span_of_brackets(L, full, full)


def derived_series(L: LieAlgebraDesc):
    """L ⊇ [L,L] ⊇ [[L,L],[L,L]] ⊇ ... until the terms stabilise."""
    series = [SubspaceDesc.full(L.p, L.dim)]
    while True:
        nxt = _span_of_brackets(L, series[-1], series[-1])
        if nxt.basis == series[-1].basis:
            break
        series.append(nxt)
        if nxt.is_zero():
            break
    return series


def lower_central_series(L: LieAlgebraDesc):
    full = SubspaceDesc.full(L.p, L.dim)
    series = [full]
    while True:
        nxt = _span_of_brackets(L, full, series[-1])
        if nxt.basis == series[-1].basis:
            break
        series.append(nxt)
        if nxt.is_zero():
            break
    return series


def is_abelian(L: LieAlgebraDesc) -> bool:
    return derived_subalgebra(L).is_zero()


def is_solvable(L: LieAlgebraDesc) -> bool:
    return derived_series(L)[-1].is_zero()


def is_nilpotent(L: LieAlgebraDesc) -> bool:
    return lower_central_series(L)[-1].is_zero()


def is_ideal(L: LieAlgebraDesc, S: SubspaceDesc) -> bool:
    for i in range(L.dim):
        ad_i = L.ad(i)
        for row in S.basis:
            if not S.contains(ad_i @ np.array(row, dtype=np.int64) % L.p):
                return False
    return True


def ideal_closure(L: LieAlgebraDesc, S: SubspaceDesc) -> SubspaceDesc:
    """Smallest ideal containing S, by spinning under all ad matrices."""
    span = S
    queue = [np.array(r, dtype=np.int64) for r in S.basis]
    while queue:
        v = queue.pop()
        for i in range(L.dim):
            w = L.ad(i) @ v % L.p
            res = span.reduce(w)
            if res.any():
                span = SubspaceDesc.from_vectors(
                    L.p, L.dim, list(span.basis) + [res]
                )
                queue.append(res)
    return span


def is_subalgebra(L: LieAlgebraDesc, S: SubspaceDesc) -> bool:
    for a in range(S.dim):
        for b in range(a + 1, S.dim):
            w = bracket(L, S.basis[a], S.basis[b])
            if not S.contains(w):
                return False
    return True


def subalgebra_structure(L: LieAlgebraDesc, S: SubspaceDesc) -> LieAlgebraDesc:
    """Structure constants of a subalgebra on its echelon basis."""
    if not is_subalgebra(L, S):
        raise ValueError("subspace is not closed under the bracket")
    labels = tuple(f"s{i}" for i in range(S.dim))
    sc = {}
    for a in range(S.dim):
        for b in range(a + 1, S.dim):
            w = bracket(L, S.basis[a], S.basis[b])
            coords = S.coords_of(w)
            row = {k: int(c) for k, c in enumerate(coords) if c % L.p}
            if row:
                sc[(a, b)] = row
    sub = lie_algebra(L.p, labels, sc)
    if L.grading is not None:
        # a graded subalgebra inherits degrees when its basis is homogeneous
        degs = []
        for rowvec in S.basis:
            support = [i for i, c in enumerate(rowvec) if c % L.p]
            ds = {L.grading.deg[i] for i in support}
            if len(ds) != 1:
                degs = None
                break
            degs.append(ds.pop())
        if degs is not None:
            g = GradingDesc(tuple(degs))
            if validate_grading(sub, g):
                sub.grading = g
    return sub


def quotient(L: LieAlgebraDesc, I: SubspaceDesc) -> LieAlgebraDesc:
    """Quotient algebra on the non-pivot coordinates of the ideal's echelon form."""
    if not is_ideal(L, I):
        raise ValueError("subspace is not an ideal")
    comp = [i for i in range(L.dim) if i not in set(I.pivots)]
    labels = tuple(L.labels[i] for i in comp)
    pos = {c: t for t, c in enumerate(comp)}
    eye = np.eye(L.dim, dtype=np.int64)
    sc = {}
    for a in range(len(comp)):
        for b in range(a + 1, len(comp)):
            w = I.reduce(bracket(L, eye[comp[a]], eye[comp[b]]))
            row = {pos[int(k)]: int(w[k]) for k in np.nonzero(w)[0]}
            if row:
                sc[(a, b)] = row
    return lie_algebra(L.p, labels, sc)


def sigma_character(L: LieAlgebraDesc, K: SubspaceDesc) -> CharacterDesc:
    """Trace of the induced action on L/K, one value per basis element of K."""
    if not is_subalgebra(L, K):
        raise ValueError("K is not a subalgebra")
    comp = [i for i in range(L.dim) if i not in set(K.pivots)]
    eye = np.eye(L.dim, dtype=np.int64)
    values = []
    for row in K.basis:
        tr = 0
        for c in comp:
            w = K.reduce(bracket(L, row, eye[c]))
            tr += int(w[c])
        values.append(tr % L.p)
    chi = CharacterDesc(K, tuple(values))
    for a in range(K.dim):
        for b in range(K.dim):
            w = bracket(L, K.basis[a], K.basis[b])
            if chi.value_on(w) != 0:
                raise AssertionError("trace character fails to kill [K,K]")
    return chi


def algebra_key(L: LieAlgebraDesc):
    """Structural identity of an algebra, for equality and caching."""
    items = []
    for (i, j), row in sorted(L.brackets.items()):
        if i < j:
            items.append((i, j, tuple(sorted(row.items()))))
    return (L.p, L.dim, tuple(items))


# ---------------------------------------------------------------------------
# JSON wire format


def algebra_to_json(L: LieAlgebraDesc, provenance=None) -> dict:
    out = {
        "p": L.p,
        "dim": L.dim,
        "labels": list(L.labels),
        "brackets": [
            {
                "i": i,
                "j": j,
                "coeffs": [[k, v] for k, v in sorted(row.items())],
            }
            for (i, j), row in sorted(L.brackets.items())
            if i < j
        ],
    }
    if L.pmap is not None:
        out["pmap"] = [list(map(int, img)) for img in L.pmap.images]
    if L.grading is not None:
        out["grading"] = list(L.grading.deg)
    if provenance is not None:
        out["provenance"] = [[int(s), int(r)] for s, r in provenance]
    return out


def algebra_from_json(obj: dict) -> LieAlgebraDesc:
    from .restricted import PMap

    p = int(obj["p"])
    dim = int(obj["dim"])
    labels = tuple(obj.get("labels") or [f"b{i}" for i in range(dim)])
    if len(labels) != dim:
        raise ValueError("label count does not match dim")
    sc = {}
    for ent in obj.get("brackets", []):
        i, j = int(ent["i"]), int(ent["j"])
        if i >= j:
            raise ValueError("bracket entries must satisfy i < j")
        sc[(i, j)] = {int(k): int(v) for k, v in ent["coeffs"]}
    L = lie_algebra(p, labels, sc)
    if obj.get("pmap") is not None:
        L.pmap = PMap(tuple(tuple(int(x) % p for x in img) for img in obj["pmap"]))
        if len(L.pmap.images) != dim:
            raise ValueError("pmap image count does not match dim")
    if obj.get("grading") is not None:
        g = GradingDesc(tuple(int(d) for d in obj["grading"]))
        rep = validate_grading(L, g)
        if not rep:
            raise ValueError(f"grading invalid: {rep.failures[:3]}")
        L.grading = g
    return L
