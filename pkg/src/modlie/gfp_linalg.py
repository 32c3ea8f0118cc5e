"""Exact linear algebra over the prime field F_p.

Everything downstream (structure constants, module actions, coboundary
matrices) funnels into the rank/kernel/solve routines here, so they are
kept exact: plain integers reduced mod p, no floating point anywhere.

Two matrix flavours are supported.  ``DenseMat`` wraps a numpy int64
array and is reduced by vectorized Gauss-Jordan elimination with partial
pivoting.  ``SparseMat`` stores (row, col, value) triples and is reduced
by a Markowitz-style elimination that picks pivots of low fill; the
coboundary matrices of cochain complexes are extremely sparse and this
keeps them that way.  Results never depend on the pivot order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "is_prime",
    "lucas_binomial",
    "DenseMat",
    "SparseMat",
    "rank",
    "kernel_basis",
    "solve",
    "rref",
    "mat_mul_mod",
    "mat_pow_mod",
]


def mat_mul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.mod(a @ b, p)


def mat_pow_mod(a: np.ndarray, e: int, p: int) -> np.ndarray:
    """a**e mod p by repeated squaring; e >= 0."""
    n = a.shape[0]
    result = np.eye(n, dtype=np.int64)
    base = np.mod(a, p)
    while e:
        if e & 1:
            result = np.mod(result @ base, p)
        base = np.mod(base @ base, p)
        e >>= 1
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def lucas_binomial(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) mod p, computed digit-wise in base p.

    k outside [0, n] yields 0; this convention is what the graded bracket
    formula needs at its boundary terms.
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        result = result * (math.comb(ni, ki) % p) % p
        n //= p
        k //= p
    return result


# ---------------------------------------------------------------------------
# matrix containers


def _as_int_array(entries, rows: int, cols: int, p: int) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64).reshape(rows, cols)
    return np.mod(a, p)


@dataclass(frozen=True)
class DenseMat:
    """Row-major dense matrix over F_p."""

    p: int
    a: np.ndarray  # shape (rows, cols), entries in [0, p)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")

    @classmethod
    def from_rows(cls, p: int, rows) -> "DenseMat":
        rows = list(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(p, _as_int_array(rows, len(rows), ncols, p))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "DenseMat":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "DenseMat":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def transpose(self) -> "DenseMat":
        return DenseMat(self.p, self.a.T.copy())


@dataclass(frozen=True)
class SparseMat:
    """Matrix over F_p stored as (row, col, value) triples, values nonzero."""

    p: int
    rows: int
    cols: int
    triples: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        seen = set()
        for r, c, v in self.triples:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of range")
            if v % self.p == 0:
                raise ValueError(f"entry ({r},{c}) stores a zero value")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            seen.add((r, c))

    @classmethod
    def from_entries(cls, p: int, rows: int, cols: int, entries) -> "SparseMat":
        """Build from an iterable of (row, col, value); repeats are summed."""
        acc: dict = {}
        for r, c, v in entries:
            acc[(r, c)] = (acc.get((r, c), 0) + v) % p
        triples = tuple(
            (r, c, v) for (r, c), v in sorted(acc.items()) if v % p != 0
        )
        return cls(p, rows, cols, triples)

    @classmethod
    def from_dense(cls, m: DenseMat) -> "SparseMat":
        rr, cc = np.nonzero(m.a)
        triples = tuple(
            (int(r), int(c), int(m.a[r, c])) for r, c in zip(rr, cc)
        )
        return cls(m.p, m.rows, m.cols, triples)

    def to_dense(self) -> DenseMat:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, c, v in self.triples:
            a[r, c] = v % self.p
        return DenseMat(self.p, a)

    def transpose(self) -> "SparseMat":
        return SparseMat(
            self.p,
            self.cols,
            self.rows,
            tuple(sorted((c, r, v) for r, c, v in self.triples)),
        )

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros(self.rows, dtype=np.int64)
        for r, c, v in self.triples:
            out[r] += v * x[c]
        return np.mod(out, self.p)

    @property
    def nnz(self) -> int:
        return len(self.triples)


# ---------------------------------------------------------------------------
# dense elimination


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form of ``a`` mod p, in place.

    Returns the list of pivot columns.  Only rows that actually have a
    nonzero entry in the pivot column are updated, which keeps sparse
    inputs cheap even in the dense representation.
    """
    rows, cols = a.shape
    np.mod(a, p, out=a)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        upd = np.nonzero(a[:, c])[0]
        upd = upd[upd != r]
        if upd.size:
            a[upd] = (a[upd] - np.outer(a[upd, c], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def _dense_rank(m: DenseMat) -> int:
    return len(rref(m.a.copy(), m.p))


def _dense_kernel(m: DenseMat):
    a = m.a.copy()
    p = m.p
    pivots = rref(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-int(a[i, f])) % p
        basis.append(v)
    return basis


def _dense_solve(m: DenseMat, b):
    p = m.p
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    if b.shape != (m.rows,):
        raise ValueError("right-hand side length does not match row count")
    aug = np.concatenate([m.a % p, b.reshape(-1, 1)], axis=1)
    pivots = rref(aug, p)
    if pivots and pivots[-1] == m.cols:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = aug[i, m.cols]
    return x


# ---------------------------------------------------------------------------
# sparse elimination (Markowitz pivoting)


class _SparseElim:
    """Forward elimination on a sparse matrix with min-fill pivot choice.

    At each step the pivot column is an active column of minimal count
    (ties towards the smallest column index) and within it the row of
    minimal length (ties towards the smallest row index); this is the
    classical Markowitz heuristic specialised to F_p.  Eliminated pivot
    rows are frozen with their pivot normalised to 1: a frozen row can
    only involve its own pivot, later pivots and free columns, so kernel
    vectors and solutions come out by back-substitution in reverse
    elimination order.
    """

    def __init__(self, sp: SparseMat, aug: dict | None = None):
        self.p = sp.p
        self.ncols = sp.cols
        self.rows: dict = {}
        for r, c, v in sp.triples:
            self.rows.setdefault(r, {})[c] = v % sp.p
        self.aug = dict(aug) if aug else {}
        self.colrows: dict = {}
        for r, row in self.rows.items():
            for c in row:
                self.colrows.setdefault(c, set()).add(r)
        self.pivot_rows = []  # (pivot col, normalised row dict) in order
        self._heap = [(len(rs), c) for c, rs in self.colrows.items()]
        heapq.heapify(self._heap)

    def _pick_pivot(self):
        while self._heap:
            cnt, c = heapq.heappop(self._heap)
            rs = self.colrows.get(c)
            if not rs:
                continue
            if len(rs) != cnt:
                heapq.heappush(self._heap, (len(rs), c))
                continue
            r = min(rs, key=lambda rr: (len(self.rows[rr]), rr))
            return r, c
        return None

    def run(self):
        p = self.p
        while True:
            piv = self._pick_pivot()
            if piv is None:
                break
            r, c = piv
            row = self.rows.pop(r)
            for cc in row:
                s = self.colrows[cc]
                s.discard(r)
                if not s:
                    del self.colrows[cc]
            inv = pow(row[c], p - 2, p)
            if inv != 1:
                row = {cc: vv * inv % p for cc, vv in row.items()}
                if r in self.aug:
                    self.aug[r] = self.aug[r] * inv % p
            rhs = self.aug.pop(r, 0)
            for r2 in list(self.colrows.get(c, ())):
                row2 = self.rows[r2]
                f = row2[c]
                for cc, vv in row.items():
                    nv = (row2.get(cc, 0) - f * vv) % p
                    if nv:
                        if cc not in row2:
                            self.colrows.setdefault(cc, set()).add(r2)
                        row2[cc] = nv
                    elif cc in row2:
                        del row2[cc]
                        s = self.colrows[cc]
                        s.discard(r2)
                        if not s:
                            del self.colrows[cc]
                if rhs or r2 in self.aug:
                    self.aug[r2] = (self.aug.get(r2, 0) - f * rhs) % p
                if not row2:
                    del self.rows[r2]
            self.pivot_rows.append((c, row, rhs))
        return self

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def kernel(self):
        p = self.p
        pivot_cols = [c for c, _, _ in self.pivot_rows]
        pivot_set = set(pivot_cols)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for f in free:
            x = {f: 1}
            for c, row, _ in reversed(self.pivot_rows):
                s = 0
                for cc, vv in row.items():
                    if cc != c and cc in x:
                        s += vv * x[cc]
                s %= p
                if s:
                    x[c] = (-s) % p
            v = np.zeros(self.ncols, dtype=np.int64)
            for cc, vv in x.items():
                v[cc] = vv
            basis.append(v)
        return basis

    def solution(self):
        """A particular solution once run() has consumed an augmented rhs.

        Rows reduced to zero (or absent from the matrix) must also have a
        zero right-hand side, otherwise the system is inconsistent.
        """
        p = self.p
        if any(v % p for v in self.aug.values()):
            return None
        x = {}
        for c, row, rhs in reversed(self.pivot_rows):
            s = rhs
            for cc, vv in row.items():
                if cc != c and cc in x:
                    s -= vv * x[cc]
            x[c] = s % p
        v = np.zeros(self.ncols, dtype=np.int64)
        for cc, vv in x.items():
            v[cc] = vv
        return v


def _sparse_solve(m: SparseMat, b):
    b = np.mod(np.asarray(b, dtype=np.int64), m.p)
    if b.shape != (m.rows,):
        raise ValueError("right-hand side length does not match row count")
    aug = {r: int(b[r]) for r in range(m.rows) if b[r]}
    return _SparseElim(m, aug).run().solution()


# ---------------------------------------------------------------------------
# public dispatchers


def rank(m) -> int:
    """Rank over F_p; accepts DenseMat or SparseMat."""
    if isinstance(m, DenseMat):
        return _dense_rank(m)
    if isinstance(m, SparseMat):
        return _SparseElim(m).run().rank
    raise TypeError(f"unsupported matrix type {type(m)!r}")


def kernel_basis(m):
    """Basis of the right null space {v : M v = 0}, as int64 vectors."""
    if isinstance(m, DenseMat):
        return _dense_kernel(m)
    if isinstance(m, SparseMat):
        return _SparseElim(m).run().kernel()
    raise TypeError(f"unsupported matrix type {type(m)!r}")


def solve(m, b):
    """Some x with M x = b, or None if the system is inconsistent."""
    if isinstance(m, DenseMat):
        return _dense_solve(m, b)
    if isinstance(m, SparseMat):
        return _sparse_solve(m, b)
    raise TypeError(f"unsupported matrix type {type(m)!r}")
