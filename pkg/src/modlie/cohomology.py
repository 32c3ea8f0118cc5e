"""Chevalley-Eilenberg cochain complexes and their cohomology over F_p.

The cochain basis in degree n is the set of colexicographically ordered
n-subsets of the algebra basis, tensored with the module basis, module
index fastest.  The differential is

    (d psi)(x_0..x_n) = sum_i (-1)^i x_i . psi(.. x^_i ..)
                      + sum_{i<j} (-1)^{i+j} psi([x_i,x_j], .., x^_i, .., x^_j, ..)

with the bracket inserted as the first argument; this convention is
normative for representatives and theta matrices.

Dimension computations run on a block decomposition: whenever the algebra
carries a validated integer grading and the module action is graded, the
differential preserves the total weight of a cochain, so ranks split into
many small independent blocks.  The trivial grading recovers the generic
single-block computation, and both paths produce identical dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gfp_linalg import DenseMat, SparseMat, kernel_basis, mat_pow_mod, rref
from .lie_core import (
    LieAlgebraDesc,
    SubspaceDesc,
    bracket,
    subalgebra_structure,
    validate_grading,
)
from .repmod import ModuleDesc, invariants, restrict_to

__all__ = [
    "CoboundaryData",
    "CohomologyResult",
    "NormalizingElement",
    "GradedComplex",
    "coboundary",
    "cochain_dim",
    "cohomology_dims",
    "theta_action",
    "induced_action_on_H",
    "torus_invariants_of_H",
    "normalizing_element",
    "internal_element",
    "restricted_h1",
    "infer_module_grading",
]


@lru_cache(maxsize=None)
def _colex(n: int, k: int):
    if k == 0:
        return ((),)
    if k > n:
        return ()
    out = []
    for top in range(k - 1, n):
        for rest in _colex(top, k - 1):
            out.append(rest + (top,))
    return tuple(out)


def colex_subsets(n: int, k: int):
    """All k-subsets of range(n) in colexicographic order: S precedes T
    exactly when the largest element where they differ lies in T."""
    return list(_colex(n, k))


def cochain_dim(L: LieAlgebraDesc, M: ModuleDesc, n: int) -> int:
    from math import comb

    return comb(L.dim, n) * M.dim


@dataclass
class CoboundaryData:
    algebra: LieAlgebraDesc
    module: ModuleDesc
    degree: int
    subsets: tuple  # n-subsets in colex order
    matrix: SparseMat  # C^n -> C^{n+1}


@dataclass
class CohomologyResult:
    dims: tuple
    representatives: list | None = None


def _action_entries(M: ModuleDesc):
    """Nonzero entries of each action matrix, as [(s, t, value)] per index."""
    out = []
    for a in M.action:
        rr, cc = np.nonzero(a)
        out.append([(int(s), int(t), int(a[s, t])) for s, t in zip(rr, cc)])
    return out


def _insert_sign(rest: tuple, k: int):
    """Sorted insertion of k into the increasing tuple rest, with sign."""
    pos = 0
    while pos < len(rest) and rest[pos] < k:
        pos += 1
    sign = -1 if pos % 2 else 1
    return rest[:pos] + (k,) + rest[pos:], sign


def _d_entries(L: LieAlgebraDesc, M: ModuleDesc, row_subsets, act_entries):
    """Entries of d^n, yielded as (row_subset, s, col_subset, t, value).

    row_subsets are the (n+1)-subsets; the caller routes the items to
    global indices or to graded blocks.
    """
    p = L.p
    dim_m = M.dim
    for T in row_subsets:
        for a, j in enumerate(T):
            S = T[:a] + T[a + 1 :]
            sign = -1 if a % 2 else 1
            for s, t, v in act_entries[j]:
                yield T, s, S, t, sign * v
        for a in range(len(T)):
            for b in range(a + 1, len(T)):
                row = L.bracket_basis(T[a], T[b])
                if not row:
                    continue
                rest = T[:a] + T[a + 1 : b] + T[b + 1 :]
                sign_ab = -1 if (a + b) % 2 else 1
                for k, c in row.items():
                    if k in rest:
                        continue
                    S, sign_ins = _insert_sign(rest, k)
                    val = (sign_ab * sign_ins * c) % p
                    if val:
                        for t in range(dim_m):
                            yield T, t, S, t, val


def coboundary(L: LieAlgebraDesc, M: ModuleDesc, n: int) -> CoboundaryData:
    """The full sparse matrix of d^n on the colex subset basis."""
    if not 0 <= n <= L.dim:
        raise ValueError(f"degree {n} outside 0..{L.dim}")
    subsets_n = colex_subsets(L.dim, n)
    subsets_n1 = colex_subsets(L.dim, n + 1)
    col_index = {S: i for i, S in enumerate(subsets_n)}
    row_index = {T: i for i, T in enumerate(subsets_n1)}
    dim_m = M.dim
    entries = (
        (row_index[T] * dim_m + s, col_index[S] * dim_m + t, v)
        for T, s, S, t, v in _d_entries(L, M, subsets_n1, _action_entries(M))
    )
    mat = SparseMat.from_entries(
        L.p, len(subsets_n1) * dim_m, len(subsets_n) * dim_m, entries
    )
    return CoboundaryData(L, M, n, tuple(subsets_n), mat)


# ---------------------------------------------------------------------------
# gradings of modules


def infer_module_grading(L: LieAlgebraDesc, M: ModuleDesc, ldeg):
    """Integer degrees on the module basis making every action matrix
    homogeneous, found by propagation; None when no consistent choice
    exists.  Only differences within a connected component matter."""
    deg = [None] * M.dim
    for start in range(M.dim):
        if deg[start] is not None:
            continue
        deg[start] = 0
        queue = [start]
        while queue:
            t = queue.pop()
            for i, a in enumerate(M.action):
                step = ldeg[i]
                for s in np.nonzero(a[:, t])[0]:
                    want = deg[t] + step
                    if deg[s] is None:
                        deg[s] = want
                        queue.append(int(s))
                    elif deg[s] != want:
                        return None
                for s in np.nonzero(a[t, :])[0]:
                    want = deg[t] - step
                    if deg[s] is None:
                        deg[s] = want
                        queue.append(int(s))
                    elif deg[s] != want:
                        return None
    return tuple(deg)


def _choose_gradings(L: LieAlgebraDesc, M: ModuleDesc):
    if L.grading is not None and validate_grading(L, L.grading).ok:
        ldeg = L.grading.deg
        if any(ldeg):
            mdeg = infer_module_grading(L, M, ldeg)
            if mdeg is not None:
                return ldeg, mdeg
    return (0,) * L.dim, (0,) * M.dim


# ---------------------------------------------------------------------------
# block-decomposed complex


class _EchelonReducer:
    """Incremental echelon basis with tagged rows, supporting expression
    of new vectors as combinations of the stored ones."""

    def __init__(self, p):
        self.p = p
        self.rows = []  # (pivot, normalised vector, tag)

    def reduce_record(self, v):
        v = v.copy() % self.p
        coeffs = {}
        for pivot, row, tag in self.rows:
            c = int(v[pivot])
            if c:
                v = (v - c * row) % self.p
                if tag is not None:
                    coeffs[tag] = (coeffs.get(tag, 0) + c) % self.p
        return coeffs, v

    def add(self, v, tag):
        _, res = self.reduce_record(v)
        nz = np.nonzero(res)[0]
        if nz.size == 0:
            return False
        pivot = int(nz[0])
        inv = pow(int(res[pivot]), self.p - 2, self.p)
        self.rows.append((pivot, res * inv % self.p, tag))
        return True


class GradedComplex:
    """Per-weight blocks of the cochain complex up to degree n_max + 1."""

    def __init__(self, L: LieAlgebraDesc, M: ModuleDesc, n_max: int, check=True):
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        self.L = L
        self.M = M
        self.n_max = n_max
        self.p = L.p
        self.ldeg, self.mdeg = _choose_gradings(L, M)
        act_entries = _action_entries(M)

        self.items = []  # per n: dict weight -> list of (subset, t)
        self.position = []  # per n: dict (subset, t) -> (weight, local index)
        for n in range(n_max + 2):
            if n > L.dim:
                self.items.append({})
                self.position.append({})
                continue
            blocks: dict = {}
            pos: dict = {}
            for S in colex_subsets(L.dim, n):
                base = -sum(self.ldeg[i] for i in S)
                for t in range(M.dim):
                    w = base + self.mdeg[t]
                    lst = blocks.setdefault(w, [])
                    pos[(S, t)] = (w, len(lst))
                    lst.append((S, t))
            self.items.append(blocks)
            self.position.append(pos)

        self.dmat = []  # per n in 0..n_max: dict weight -> np.ndarray
        for n in range(min(n_max, L.dim) + 1):
            mats: dict = {}
            row_blocks = self.items[n + 1]
            col_blocks = self.items[n]
            for w in set(row_blocks) | set(col_blocks):
                rows = len(row_blocks.get(w, ()))
                cols = len(col_blocks.get(w, ()))
                if rows and cols:
                    mats[w] = np.zeros((rows, cols), dtype=np.int64)
            row_subsets = colex_subsets(L.dim, n + 1)
            for T, s, S, t, v in _d_entries(L, M, row_subsets, act_entries):
                wr, r = self.position[n + 1][(T, s)]
                wc, c = self.position[n][(S, t)]
                if wr != wc:
                    raise AssertionError("differential does not preserve the weight")
                mats[wr][r, c] += v
            for w in mats:
                np.mod(mats[w], self.p, out=mats[w])
            self.dmat.append(mats)

        if check:
            for n in range(len(self.dmat) - 1):
                for w, upper in self.dmat[n + 1].items():
                    lower = self.dmat[n].get(w)
                    if lower is not None and (upper @ lower % self.p).any():
                        raise AssertionError(f"d o d != 0 in degree {n}, weight {w}")

        self._ranks: dict = {}
        self._hdata: dict = {}

    # -- ranks and dimensions

    def rank_d(self, n: int) -> int:
        if n < 0 or n >= len(self.dmat):
            return 0
        if n not in self._ranks:
            total = 0
            for a in self.dmat[n].values():
                total += len(rref(a.copy(), self.p))
            self._ranks[n] = total
        return self._ranks[n]

    def space_dim(self, n: int) -> int:
        return sum(len(v) for v in self.items[n].values())

    def h_dim(self, n: int) -> int:
        return self.space_dim(n) - self.rank_d(n) - self.rank_d(n - 1)

    def dims(self):
        return tuple(self.h_dim(n) for n in range(self.n_max + 1))

    # -- representatives

    def h_block_data(self, n: int):
        """Per weight: an echelon reducer over [image | representatives]
        and the list of representative vectors (local block coordinates)."""
        if n in self._hdata:
            return self._hdata[n]
        data = {}
        for w, block_items in self.items[n].items():
            size = len(block_items)
            red = _EchelonReducer(self.p)
            dm1 = self.dmat[n - 1].get(w) if n >= 1 else None
            if dm1 is not None:
                for col in range(dm1.shape[1]):
                    red.add(dm1[:, col], None)
            dn = self.dmat[n].get(w)
            if dn is not None:
                kers = kernel_basis(DenseMat(self.p, dn.copy()))
            else:
                kers = [np.eye(size, dtype=np.int64)[i] for i in range(size)]
            reps = []
            for v in kers:
                if red.add(v, len(reps)):
                    reps.append(v % self.p)
            data[w] = (red, reps)
        self._hdata[n] = data
        return data

    def h_offsets(self, n: int):
        """Global H^n indexing: weight -> starting offset, in sorted order."""
        offsets = {}
        total = 0
        for w in sorted(self.h_block_data(n)):
            reps = self.h_block_data(n)[w][1]
            offsets[w] = total
            total += len(reps)
        return offsets, total

    def representatives(self, n: int):
        """Cocycle representatives of H^n as global coordinate vectors."""
        subsets = colex_subsets(self.L.dim, n)
        index = {S: i for i, S in enumerate(subsets)}
        dim_m = self.M.dim
        out = []
        data = self.h_block_data(n)
        for w in sorted(data):
            block_items = self.items[n][w]
            for rep in data[w][1]:
                v = np.zeros(len(subsets) * dim_m, dtype=np.int64)
                for local, (S, t) in enumerate(block_items):
                    v[index[S] * dim_m + t] = rep[local]
                out.append(v)
        return out

    # -- theta action on blocks

    def _theta_block(self, n: int, elem: "NormalizingElement", w: int):
        """theta^n(elem) from the weight-w block of C^n into weight w + delta.

        The column for delta_S picks up, besides the module action on its
        value, a row for every T = S minus kappa plus j with brk[kappa, j]
        nonzero: substituting [x, u_j] into slot j of T reaches S exactly
        through its kappa component.
        """
        delta = elem.degree
        src = self.items[n].get(w, [])
        dst = self.items[n].get(w + delta, [])
        dst_pos = {it: i for i, it in enumerate(dst)}
        mat = np.zeros((len(dst), len(src)), dtype=np.int64)
        act = elem.action
        brk = elem.bracket_cols
        for cloc, (S, t) in enumerate(src):
            for s in np.nonzero(act[:, t])[0]:
                key = (S, int(s))
                if key in dst_pos:
                    mat[dst_pos[key], cloc] += int(act[s, t])
            for a, kappa in enumerate(S):
                rest = S[:a] + S[a + 1 :]
                for j in np.nonzero(brk[kappa, :])[0]:
                    j = int(j)
                    if j == kappa:
                        key = (S, t)
                        if key in dst_pos:
                            mat[dst_pos[key], cloc] -= int(brk[kappa, kappa])
                        continue
                    if j in rest:
                        continue
                    T2, sign_ins = _insert_sign(rest, j)
                    sign = sign_ins if a % 2 == 0 else -sign_ins
                    key = (T2, t)
                    if key in dst_pos:
                        mat[dst_pos[key], cloc] -= sign * int(brk[kappa, j])
        return np.mod(mat, self.p)

    def check_normalizing(self, elem: "NormalizingElement"):
        """theta commutes with d exactly when the element acts on L by a
        derivation and on M compatibly with that action; verify both."""
        p = self.p
        L, M = self.L, self.M
        eye = np.eye(L.dim, dtype=np.int64)
        D = elem.bracket_cols
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                w = np.zeros(L.dim, dtype=np.int64)
                for k, c in L.bracket_basis(i, j).items():
                    w[k] = c
                lhs = D @ w % p
                rhs = (
                    bracket(L, D[:, i], eye[j]) + bracket(L, eye[i], D[:, j])
                ) % p
                if not np.array_equal(lhs, rhs):
                    raise ValueError("element does not act on L by a derivation")
        for j in range(L.dim):
            comm = (elem.action @ M.action[j] - M.action[j] @ elem.action) % p
            if not np.array_equal(comm, M.act_matrix(D[:, j])):
                raise ValueError(
                    "module action is incompatible; theta would not commute with d"
                )

    def induced_action(self, n: int, elem: "NormalizingElement") -> np.ndarray:
        """Matrix of the induced action on H^n on the representative basis.

        The normalizing preconditions (which force theta d = d theta) are
        checked first; on top of that every mapped representative must
        land back in the cocycle space, which is verified exactly."""
        delta = elem.degree
        if delta is None:
            raise ValueError("element is not homogeneous for the chosen grading")
        self.check_normalizing(elem)
        p = self.p
        data = self.h_block_data(n)
        offsets, total = self.h_offsets(n)
        out = np.zeros((total, total), dtype=np.int64)
        for w in sorted(data):
            reps = data[w][1]
            if not reps:
                continue
            th = self._theta_block(n, elem, w)
            wt = w + delta
            if wt not in data:
                if th.size and any((th @ np.array(r) % p).any() for r in reps):
                    raise AssertionError("theta image leaves the cochain blocks")
                continue
            red_dst = data[wt][0]
            for k, rep in enumerate(reps):
                if not th.size:
                    continue
                y = th @ rep % p
                coeffs, res = red_dst.reduce_record(y)
                if res.any():
                    raise AssertionError("theta image is not a cocycle")
                for tag, c in coeffs.items():
                    out[offsets[wt] + tag, offsets[w] + k] = c
        return out


@dataclass
class NormalizingElement:
    """An element acting on a complex: brackets with the algebra basis
    (columns, in algebra coordinates) plus its action on the module, and
    its weight under the chosen grading (None if inhomogeneous)."""

    bracket_cols: np.ndarray
    action: np.ndarray
    degree: int | None


def internal_element(gc: GradedComplex, x) -> list:
    """Decompose an algebra element into homogeneous normalizing elements."""
    L, M = gc.L, gc.M
    x = np.mod(np.asarray(x, dtype=np.int64), L.p)
    parts: dict = {}
    for i in np.nonzero(x)[0]:
        parts.setdefault(gc.ldeg[int(i)], np.zeros(L.dim, dtype=np.int64))[
            int(i)
        ] = x[i]
    out = []
    for dlt, vec in sorted(parts.items()):
        cols = np.zeros((L.dim, L.dim), dtype=np.int64)
        eye = np.eye(L.dim, dtype=np.int64)
        for j in range(L.dim):
            cols[:, j] = bracket(L, vec, eye[j])
        out.append(NormalizingElement(cols, M.act_matrix(vec), dlt))
    return out


def normalizing_element(L_amb, M_amb, sub: SubspaceDesc, x):
    """Restrict the situation to a subalgebra normalised by x.

    Returns (sub_algebra, restricted module, NormalizingElement) with the
    bracket action of x expressed in the subalgebra coordinates.
    """
    sub_alg = subalgebra_structure(L_amb, sub)
    M_sub = restrict_to(M_amb, sub)
    x = np.asarray(x, dtype=np.int64)
    cols = np.zeros((sub.dim, sub.dim), dtype=np.int64)
    for j, row in enumerate(sub.basis):
        w = bracket(L_amb, x, row)
        coords = sub.coords_of(w)
        if coords is None:
            raise ValueError("element does not normalize the subalgebra")
        cols[:, j] = coords
    elem = NormalizingElement(cols, M_amb.act_matrix(x), None)
    return sub_alg, M_sub, elem


def _elem_degree(gc: GradedComplex, elem: NormalizingElement):
    """Weight of a normalizing element for gc's grading, or None."""
    deltas = set()
    for j in range(gc.L.dim):
        for k in np.nonzero(elem.bracket_cols[:, j])[0]:
            deltas.add(gc.ldeg[int(k)] - gc.ldeg[j])
    for s, t in zip(*np.nonzero(elem.action)):
        deltas.add(gc.mdeg[int(s)] - gc.mdeg[int(t)])
    if not deltas:
        return 0
    if len(deltas) == 1:
        return deltas.pop()
    return None


# ---------------------------------------------------------------------------
# public operations


def cohomology_dims(
    L: LieAlgebraDesc, M: ModuleDesc, n_max: int, check=True, representatives=False
) -> CohomologyResult:
    """Dimensions of H^0..H^n_max; H^0 is cross-checked against the joint
    kernel of the action matrices.  With representatives=True, cocycle
    representatives are returned per degree in global cochain coordinates."""
    if not 0 <= n_max <= L.dim:
        raise ValueError(f"n_max {n_max} outside 0..{L.dim}")
    gc = GradedComplex(L, M, n_max, check=check)
    dims = gc.dims()
    if check and dims[0] != invariants(M).dim:
        raise AssertionError("H^0 disagrees with the invariants of the module")
    reps = None
    if representatives:
        reps = [gc.representatives(n) for n in range(n_max + 1)]
    return CohomologyResult(dims, reps)


def theta_action(L: LieAlgebraDesc, M: ModuleDesc, x, n: int) -> SparseMat:
    """Global matrix on C^n of the derivation action of x on cochains:
    (x.psi)(u_1..u_n) = x.(psi(u_1..u_n)) - sum_i psi(u_1,..,[x,u_i],..,u_n)."""
    p = L.p
    subsets = colex_subsets(L.dim, n)
    index = {S: i for i, S in enumerate(subsets)}
    dim_m = M.dim
    act = M.act_matrix(x)
    eye = np.eye(L.dim, dtype=np.int64)
    brk = np.zeros((L.dim, L.dim), dtype=np.int64)
    for j in range(L.dim):
        brk[:, j] = bracket(L, x, eye[j])
    act_nz = list(zip(*np.nonzero(act)))
    entries = []
    for S in subsets:
        si = index[S]
        for s, t in act_nz:
            entries.append((si * dim_m + int(s), si * dim_m + int(t), int(act[s, t])))
        for a, kappa in enumerate(S):
            rest = S[:a] + S[a + 1 :]
            for j in np.nonzero(brk[kappa, :])[0]:
                j = int(j)
                v = int(brk[kappa, j])
                if j == kappa:
                    for t in range(dim_m):
                        entries.append((si * dim_m + t, si * dim_m + t, -v))
                    continue
                if j in rest:
                    continue
                T2, sign_ins = _insert_sign(rest, j)
                sign = sign_ins if a % 2 == 0 else -sign_ins
                ri = index[T2]
                for t in range(dim_m):
                    entries.append((ri * dim_m + t, si * dim_m + t, -sign * v))
    size = len(subsets) * dim_m
    return SparseMat.from_entries(p, size, size, entries)


def induced_action_on_H(L: LieAlgebraDesc, M: ModuleDesc, x, n: int, gc=None) -> np.ndarray:
    """Matrix of x acting on H^n, on the representative basis chosen by
    echelon pivots.  Raises if theta and d fail to commute."""
    if gc is None:
        gc = GradedComplex(L, M, n)
    total = gc.h_dim(n)
    out = np.zeros((total, total), dtype=np.int64)
    for elem in internal_element(gc, x):
        out = (out + gc.induced_action(n, elem)) % L.p
    return out


def torus_invariants_of_H(sub_alg, M_sub, elem: NormalizingElement, n: int, gc=None) -> int:
    """Dimension of the kernel of the induced action of elem on H^n."""
    if gc is None:
        gc = GradedComplex(sub_alg, M_sub, n)
    if elem.degree is None:
        elem = NormalizingElement(
            elem.bracket_cols, elem.action, _elem_degree(gc, elem)
        )
    mat = gc.induced_action(n, elem)
    if mat.shape[0] == 0:
        return 0
    return len(kernel_basis(DenseMat(gc.p, mat.copy())))


# ---------------------------------------------------------------------------
# restricted 1-cohomology via restricted derivations


def restricted_h1(L: LieAlgebraDesc, pm, M: ModuleDesc) -> int:
    """dim of restricted derivations L -> M modulo inner ones.

    A restricted derivation satisfies the Leibniz rule and sends b^[p] to
    rho(b)^(p-1) d(b); checking the p-condition on a basis suffices over
    F_p because the defect is p-semilinear.  M itself must be restricted.
    """
    p = L.p
    if pm is None:
        raise ValueError("the algebra carries no p-mapping")
    for i in range(L.dim):
        if not np.array_equal(
            mat_pow_mod(M.action[i], p, p), M.act_matrix(pm.image(i))
        ):
            raise ValueError("module is not restricted for the given p-mapping")

    ldeg, mdeg = _choose_gradings(L, M)
    eye = np.eye(L.dim, dtype=np.int64)

    def unknown(j, t):
        return j * M.dim + t

    rows = []
    for i in range(L.dim):
        ai = M.action[i]
        for j in range(i + 1, L.dim):
            aj = M.action[j]
            brk = L.bracket_basis(i, j)
            for t in range(M.dim):
                ent = {}
                for k, c in brk.items():
                    ent[unknown(k, t)] = (ent.get(unknown(k, t), 0) + c) % p
                for t2 in np.nonzero(ai[t, :])[0]:
                    key = unknown(j, int(t2))
                    ent[key] = (ent.get(key, 0) - int(ai[t, t2])) % p
                for t2 in np.nonzero(aj[t, :])[0]:
                    key = unknown(i, int(t2))
                    ent[key] = (ent.get(key, 0) + int(aj[t, t2])) % p
                ent = {k: v for k, v in ent.items() if v}
                if ent:
                    rows.append(ent)
    for i in range(L.dim):
        img = pm.image(i)
        powm = mat_pow_mod(M.action[i], p - 1, p)
        for t in range(M.dim):
            ent = {}
            for k in np.nonzero(img)[0]:
                key = unknown(int(k), t)
                ent[key] = (ent.get(key, 0) + int(img[k])) % p
            for t2 in np.nonzero(powm[t, :])[0]:
                key = unknown(i, int(t2))
                ent[key] = (ent.get(key, 0) - int(powm[t, t2])) % p
            ent = {k: v for k, v in ent.items() if v}
            if ent:
                rows.append(ent)

    def delta_of(key):
        j, t = divmod(key, M.dim)
        return mdeg[t] - ldeg[j]

    buckets: dict = {}
    graded = True
    for ent in rows:
        ds = {delta_of(k) for k in ent}
        if len(ds) != 1:
            graded = False
            break
        buckets.setdefault(ds.pop(), []).append(ent)
    if not graded:
        ldeg = (0,) * L.dim
        mdeg = (0,) * M.dim
        buckets = {0: rows}

    total_solutions = 0
    for dlt in buckets:
        cols = sorted(
            {unknown(j, t) for j in range(L.dim) for t in range(M.dim) if delta_of(unknown(j, t)) == dlt}
        )
        col_pos = {k: i for i, k in enumerate(cols)}
        a = np.zeros((len(buckets[dlt]), len(cols)), dtype=np.int64)
        for r, ent in enumerate(buckets[dlt]):
            for k, v in ent.items():
                a[r, col_pos[k]] = v
        total_solutions += len(cols) - len(rref(a, p))
    # unknowns whose weight class produced no constraint rows are free
    seen = set(buckets)
    for j in range(L.dim):
        for t in range(M.dim):
            d = delta_of(unknown(j, t))
            if d not in seen:
                total_solutions += 1

    inner = M.dim - invariants(M).dim
    return total_solutions - inner
