"""Matrix spaces M(n, m) over F_q: exact linear algebra, counting, enumeration.

A Mat is an immutable n x m array of field-element encodings together with
its FieldSpec.  Subspaces are kept in reduced row echelon form, so equal
subspaces have identical representations.  GF(2) matrices additionally use
a bit-packed row form (bit j = column j) on the rank/kernel hot paths.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .budget import Budget, ensure
from .errors import (DomainError, FieldMismatch, PreconditionViolated,
                     ShapeMismatch)
from .gf import FieldSpec, Fq, field

# --- vectors (tuples of encodings) -----------------------------------------

def vec_index(q: int, v: Sequence[int]) -> int:
    """Lexicographic code of a vector; first coordinate most significant."""
    a = 0
    for x in v:
        a = a * q + x
    return a


def vec_from_index(q: int, length: int, idx: int) -> tuple[int, ...]:
    out = [0] * length
    for j in range(length - 1, -1, -1):
        out[j] = idx % q
        idx //= q
    return tuple(out)


def vec_add(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.add(a, b) for a, b in zip(u, v))


def vec_sub(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.sub(a, b) for a, b in zip(u, v))


def vec_smul(spec: FieldSpec, c: int, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.mul(c, x) for x in v)


def vec_dot(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    t = 0
    for a, b in zip(u, v):
        t = spec.add(t, spec.mul(a, b))
    return t


# --- row reduction ----------------------------------------------------------

def rref_rows(spec: FieldSpec, rows: Iterable[Sequence[int]], ncols: int,
              pivot_cols: int | None = None):
    """Reduced row echelon form.

    Pivots are searched only in the first pivot_cols columns (default: all).
    Returns (pivots, reduced, leftover): leftover rows vanish on the pivot
    range but may be nonzero beyond it.
    """
    limit = ncols if pivot_cols is None else pivot_cols
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        pr = None
        for i in range(r, len(work)):
            if work[i][c]:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        lead = work[r][c]
        if lead != 1:
            inv = spec.inv(lead)
            work[r] = [spec.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                row_r = work[r]
                work[i] = [spec.sub(x, spec.mul(f, y)) for x, y in zip(work[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    reduced = [tuple(w) for w in work[:r]]
    leftover = [tuple(w) for w in work[r:] if any(w)]
    return tuple(pivots), reduced, leftover


def rank_bits(rows: Sequence[int]) -> int:
    """Rank of GF(2) rows packed as ints."""
    basis: list[int] = []
    rank = 0
    for r in rows:
        for b in basis:
            rr = r ^ b
            if rr < r:
                r = rr
        if r:
            basis.append(r)
            basis.sort(reverse=True)
            rank += 1
    return rank


def rref_bits(rows: Sequence[int], ncols: int) -> tuple[tuple[int, ...], list[int]]:
    """(pivots, reduced rows) for GF(2) rows, pivot = lowest column index."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        mask = 1 << c
        pr = None
        for i in range(r, len(work)):
            if work[i] & mask:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        for i in range(len(work)):
            if i != r and work[i] & mask:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(pivots), work[:r]


# --- Mat --------------------------------------------------------------------

class Mat:
    __slots__ = ("field", "n", "m", "rows", "_bits", "_hash")

    def __init__(self, spec: FieldSpec, rows: Iterable[Iterable[int]], m: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            m = len(rows[0]) if m is None else m
            if any(len(r) != m for r in rows):
                raise ShapeMismatch("ragged rows")
        elif m is None:
            m = 0
        for r in rows:
            for x in r:
                if not 0 <= x < spec.q:
                    raise DomainError(f"entry {x} not an encoding for q={spec.q}")
        self.field = spec
        self.n = len(rows)
        self.m = m
        self.rows = rows
        self._bits = None
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec, n: int, m: int) -> "Mat":
        return cls(spec, tuple((0,) * m for _ in range(n)), m)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Mat":
        return cls(spec, tuple(tuple(1 if i == j else 0 for j in range(n))
                               for i in range(n)), n)

    @classmethod
    def from_index(cls, spec: FieldSpec, n: int, m: int, idx: int) -> "Mat":
        flat = vec_from_index(spec.q, n * m, idx)
        return cls(spec, tuple(flat[i * m:(i + 1) * m] for i in range(n)), m)

    # basic properties -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.m)

    def index(self) -> int:
        a = 0
        q = self.field.q
        for row in self.rows:
            for x in row:
                a = a * q + x
        return a

    def bits(self) -> tuple[int, ...]:
        """GF(2) packed rows, bit j = column j."""
        if self.field.q != 2:
            raise DomainError("bit packing is a GF(2) representation")
        if self._bits is None:
            self._bits = tuple(sum(x << j for j, x in enumerate(row))
                               for row in self.rows)
        return self._bits

    def entry(self, i: int, j: int) -> Fq:
        return Fq(self.field, self.rows[i][j])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def _chk(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            raise ShapeMismatch(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch("matrices over different fields")
        return other

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._chk(other)
        if o.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} + {o.shape}")
        f = self.field
        return Mat(f, tuple(tuple(f.add(a, b) for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.rows, o.rows)), self.m)

    def __sub__(self, other):
        o = self._chk(other)
        if o.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} - {o.shape}")
        f = self.field
        return Mat(f, tuple(tuple(f.sub(a, b) for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.rows, o.rows)), self.m)

    def __neg__(self):
        f = self.field
        return Mat(f, tuple(tuple(f.neg(a) for a in r) for r in self.rows), self.m)

    def __matmul__(self, other):
        o = self._chk(other)
        if self.m != o.n:
            raise ShapeMismatch(f"{self.shape} @ {o.shape}")
        f = self.field
        ocols = list(zip(*o.rows)) if o.rows else [()] * o.m
        out = []
        for r in self.rows:
            out.append(tuple(vec_dot(f, r, c) for c in ocols))
        return Mat(f, tuple(out), o.m)

    def smul(self, c: int) -> "Mat":
        f = self.field
        return Mat(f, tuple(tuple(f.mul(c, a) for a in r) for r in self.rows), self.m)

    def transpose(self) -> "Mat":
        if not self.rows:
            return Mat(self.field, tuple(() for _ in range(self.m)), 0)
        return Mat(self.field, tuple(zip(*self.rows)), self.n)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product A v, v of length m."""
        if len(v) != self.m:
            raise ShapeMismatch("vector length != m")
        f = self.field
        return tuple(vec_dot(f, r, v) for r in self.rows)

    def rapply(self, a: Sequence[int]) -> tuple[int, ...]:
        """Row-functional product a^T A, a of length n."""
        if len(a) != self.n:
            raise ShapeMismatch("functional length != n")
        f = self.field
        out = []
        for j in range(self.m):
            t = 0
            for i in range(self.n):
                t = f.add(t, f.mul(a[i], self.rows[i][j]))
            out.append(t)
        return tuple(out)

    def trace_val(self) -> int:
        if self.n != self.m:
            raise ShapeMismatch("trace needs a square matrix")
        f = self.field
        t = 0
        for i in range(self.n):
            t = f.add(t, self.rows[i][i])
        return t

    def det_val(self) -> int:
        if self.n != self.m:
            raise ShapeMismatch("determinant needs a square matrix")
        f = self.field
        work = [list(r) for r in self.rows]
        det = 1
        for c in range(self.n):
            pr = None
            for i in range(c, self.n):
                if work[i][c]:
                    pr = i
                    break
            if pr is None:
                return 0
            if pr != c:
                work[c], work[pr] = work[pr], work[c]
                det = f.neg(det)
            lead = work[c][c]
            det = f.mul(det, lead)
            inv = f.inv(lead)
            for i in range(c + 1, self.n):
                if work[i][c]:
                    fct = f.mul(inv, work[i][c])
                    work[i] = [f.sub(x, f.mul(fct, y))
                               for x, y in zip(work[i], work[c])]
        return det

    # identity -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Mat) and other.field == self.field
                and other.rows == self.rows and other.m == self.m)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.m, self.rows))
        return self._hash

    def __repr__(self):
        return f"Mat({self.field.q}, {self.n}x{self.m}, {self.rows})"

    # literal serialization -------------------------------------------------

    def to_literal(self) -> str:
        if self.field.q <= 10:
            body = ";".join("".join(str(x) for x in r) for r in self.rows)
        else:
            body = ";".join(",".join(str(x) for x in r) for r in self.rows)
        return f"q={self.field.q};n={self.n};m={self.m};rows={body}"


def mat_from_literal(text: str, spec: FieldSpec | None = None) -> Mat:
    """Parse 'q=..;n=..;m=..;rows=..' with rows semicolon-separated."""
    text = text.strip()
    if not text.startswith("q="):
        raise DomainError(f"bad matrix literal {text!r}")
    head, _, tail = text.partition(";rows=")
    parts = dict(kv.split("=", 1) for kv in head.split(";"))
    q, n, m = int(parts["q"]), int(parts["n"]), int(parts["m"])
    spec = spec if spec is not None else field(q)
    if spec.q != q:
        raise FieldMismatch(f"literal q={q} but field has q={spec.q}")
    if n == 0:
        return Mat(spec, (), m)
    if m == 0:
        return Mat(spec, tuple(() for _ in range(n)), 0)
    rows = []
    row_texts = tail.split(";") if tail else []
    if len(row_texts) != n:
        raise DomainError(f"expected {n} rows, got {len(row_texts)}")
    for rt in row_texts:
        if "," in rt:
            row = tuple(int(x) for x in rt.split(","))
        else:
            row = tuple(int(ch) for ch in rt)
        if len(row) != m:
            raise DomainError(f"row {rt!r} has wrong length")
        rows.append(row)
    return Mat(spec, rows, m)


# --- Subspace ---------------------------------------------------------------

class Subspace:
    """A subspace of F_q^ambient, held as canonical RREF basis rows."""

    __slots__ = ("field", "ambient", "rows", "_hash")

    def __init__(self, spec: FieldSpec, ambient: int, rref_basis: tuple[tuple[int, ...], ...]):
        self.field = spec
        self.ambient = ambient
        self.rows = rref_basis
        self._hash = hash((spec, ambient, rref_basis))

    @classmethod
    def from_vectors(cls, spec: FieldSpec, ambient: int,
                     vecs: Iterable[Sequence[int]]) -> "Subspace":
        _, reduced, _ = rref_rows(spec, vecs, ambient)
        return cls(spec, ambient, tuple(reduced))

    @classmethod
    def zero(cls, spec: FieldSpec, ambient: int) -> "Subspace":
        return cls(spec, ambient, ())

    @classmethod
    def full(cls, spec: FieldSpec, ambient: int) -> "Subspace":
        return cls(spec, ambient,
                   tuple(tuple(1 if i == j else 0 for j in range(ambient))
                         for i in range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence[int]) -> bool:
        f = self.field
        w = list(v)
        for row in self.rows:
            piv = next(j for j, x in enumerate(row) if x)
            if w[piv]:
                c = w[piv]
                w = [f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        return not any(w)

    def coords(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients of v over the RREF basis, or None if v is outside."""
        f = self.field
        w = list(v)
        cs = []
        for row in self.rows:
            piv = next(j for j, x in enumerate(row) if x)
            c = w[piv]
            cs.append(c)
            if c:
                w = [f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        if any(w):
            return None
        return tuple(cs)

    def sum_(self, other: "Subspace") -> "Subspace":
        self._chk(other)
        return Subspace.from_vectors(self.field, self.ambient, self.rows + other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: left-zero rows of rref([U|U],[W|0]) carry the meet."""
        self._chk(other)
        amb = self.ambient
        block = [tuple(r) + tuple(r) for r in self.rows]
        block += [tuple(r) + (0,) * amb for r in other.rows]
        # rows that vanish on the left half after pivoting there span the meet
        _, _, leftover = rref_rows(self.field, block, 2 * amb, pivot_cols=amb)
        return Subspace.from_vectors(self.field, amb, [row[amb:] for row in leftover])

    def _chk(self, other: "Subspace"):
        if other.field != self.field or other.ambient != self.ambient:
            raise ShapeMismatch("subspaces in different ambient spaces")

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All member vectors (q^dim of them)."""
        f = self.field
        for cs in itertools.product(range(f.q), repeat=self.dim):
            v = (0,) * self.ambient
            for c, row in zip(cs, self.rows):
                if c:
                    v = vec_add(f, v, vec_smul(f, c, row))
            yield v

    def key(self) -> tuple[int, ...]:
        return tuple(vec_index(self.field.q, r) for r in self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.field == self.field
                and other.ambient == self.ambient and other.rows == self.rows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(q={self.field.q}, ambient={self.ambient}, dim={self.dim})"


# --- rank / kernel / image / agreement --------------------------------------

def rank(A: Mat) -> int:
    if A.field.q == 2:
        return rank_bits(A.bits())
    _, reduced, _ = rref_rows(A.field, A.rows, A.m)
    return len(reduced)


def kernel(A: Mat) -> Subspace:
    """Right null space {v in F^m : A v = 0}."""
    f = A.field
    pivots, reduced, _ = rref_rows(f, A.rows, A.m)
    pivset = set(pivots)
    free = [j for j in range(A.m) if j not in pivset]
    basis = []
    for fc in free:
        v = [0] * A.m
        v[fc] = 1
        for row, pc in zip(reduced, pivots):
            if row[fc]:
                v[pc] = f.neg(row[fc])
        basis.append(tuple(v))
    return Subspace.from_vectors(f, A.m, basis)


def image(A: Mat) -> Subspace:
    """Column space, a subspace of F^n."""
    return Subspace.from_vectors(A.field, A.n, tuple(zip(*A.rows)) if A.rows else ())


def row_space(A: Mat) -> Subspace:
    return Subspace.from_vectors(A.field, A.m, A.rows)


def agreement(A1: Mat, A2: Mat) -> Subspace:
    """The subspace {v : A1 v = A2 v} = ker(A1 - A2)."""
    return kernel(A1 - A2)


def agreement_dim(A1: Mat, A2: Mat) -> int:
    return A1.m - rank(A1 - A2)


def dual_agreement_dim(A1: Mat, A2: Mat) -> int:
    """dim{a : a^T A1 = a^T A2} = n - rank(A1 - A2)."""
    return A1.n - rank(A1 - A2)


def delete_rc(A: Mat, dcols: int, drows: int) -> Mat:
    """Drop the first dcols columns and drows rows."""
    if dcols > A.m or drows > A.n:
        raise ShapeMismatch("deleting more than present")
    return Mat(A.field, tuple(r[dcols:] for r in A.rows[drows:]), A.m - dcols)


def block_agreement_dim(A1p: Mat, A2p: Mat, D0: Mat, F0: Mat,
                        D0p: Mat, F0p: Mat) -> int:
    """dim{z in ker(D0) : (A1' - A2' + F0' D0') z in colspace(F0)}.

    Shapes: A1', A2': h x w; D0: * x w with independent rows; D0': u x w;
    F0: h x * with independent columns; F0': h x u.
    """
    spec = A1p.field
    for M in (A2p, D0, F0, D0p, F0p):
        if M.field != spec:
            raise FieldMismatch("mixed fields in block data")
    h, w = A1p.shape
    if A2p.shape != (h, w):
        raise ShapeMismatch("A1' and A2' differ in shape")
    if D0.m != w or D0p.m != w:
        raise ShapeMismatch("D0/D0' column count must match A' columns")
    if F0.n != h or F0p.n != h:
        raise ShapeMismatch("F0/F0' row count must match A' rows")
    if F0p.m != D0p.n:
        raise ShapeMismatch("F0' columns must match D0' rows")
    if rank(D0) != D0.n:
        raise PreconditionViolated("D0 rows must be linearly independent")
    if rank(F0) != F0.m:
        raise PreconditionViolated("F0 columns must be linearly independent")
    K = kernel(D0)
    if K.dim == 0:
        return 0
    M = A1p - A2p + (F0p @ D0p)
    f0_cols = tuple(zip(*F0.rows)) if F0.rows and F0.m else ()
    imgs = [M.apply(z) for z in K.rows]
    r_f0 = len(rref_rows(spec, f0_cols, h)[1]) if f0_cols else 0
    r_all = len(rref_rows(spec, list(f0_cols) + imgs, h)[1])
    return K.dim - (r_all - r_f0)


# --- counting ---------------------------------------------------------------

def gaussian_binomial(m: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^m."""
    if d < 0 or d > m:
        raise DomainError(f"need 0 <= d <= m, got d={d}, m={m}")
    num = den = 1
    for i in range(1, d + 1):
        num *= q ** (m - i + 1) - 1
        den *= q ** (d - i + 1) - 1
    assert num % den == 0
    return num // den


def count_rank_d(n: int, m: int, d: int, q: int) -> int:
    """Number of n x m matrices over F_q of rank exactly d."""
    if d < 0 or d > min(n, m):
        return 0
    out = gaussian_binomial(m, d, q) * gaussian_binomial(n, d, q)
    for i in range(1, d + 1):
        out *= q ** d - q ** (i - 1)
    return out


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def m_qt(n: int, q: int, t: int) -> int:
    """|{sigma in GL(n, q) : sigma fixes e_1, ..., e_t pointwise}|."""
    if not 0 <= t <= n:
        raise DomainError(f"need 0 <= t <= n, got t={t}")
    out = 1
    for i in range(1, n - t + 1):
        out *= q ** n - q ** (i + t - 1)
    return out


def phi(m: int, n: int, t: int, q: int) -> Fraction:
    """Density of {A in M(n, m) : dim ker A = t} inside M(n, m)."""
    if not 0 <= t <= m:
        raise DomainError(f"need 0 <= t <= m, got t={t}")
    if n < m - t:
        raise DomainError("rank m - t cannot exceed n")
    num = gaussian_binomial(m, t, q)
    for i in range(1, m - t + 1):
        num *= q ** n - q ** (i - 1)
    return Fraction(num, q ** (n * m))


def count_subspaces_avoiding(n: int, k: int, d: int, q: int) -> int:
    """d-dim subspaces of F_q^n meeting a fixed k-dim subspace trivially."""
    if d < 0 or k < 0 or d + k > n:
        raise DomainError("need d + k <= n with d, k >= 0")
    num = den = 1
    for i in range(1, d + 1):
        num *= q ** n - q ** (k + i - 1)
        den *= q ** d - q ** (i - 1)
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class CountReport:
    kind: str
    params: dict
    value: object  # int or Fraction

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "params": self.params,
                           "value": str(self.value)}, sort_keys=True)


# --- enumeration ------------------------------------------------------------

def enumerate_all(spec: FieldSpec, n: int, m: int,
                  budget: Budget | None = None) -> Iterator[Mat]:
    """All of M(n, m) in lexicographic row-major order of entry encodings."""
    b = ensure(budget)
    b.check_items(spec.q ** (n * m))
    for flat in itertools.product(range(spec.q), repeat=n * m):
        yield Mat(spec, tuple(flat[i * m:(i + 1) * m] for i in range(n)), m)


def enumerate_rank(spec: FieldSpec, n: int, m: int, d: int,
                   budget: Budget | None = None) -> Iterator[Mat]:
    for A in enumerate_all(spec, n, m, budget):
        if rank(A) == d:
            yield A


def enumerate_gl(spec: FieldSpec, n: int,
                 budget: Budget | None = None) -> Iterator[Mat]:
    for A in enumerate_all(spec, n, n, budget):
        if rank(A) == n:
            yield A


def enumerate_sl(spec: FieldSpec, n: int,
                 budget: Budget | None = None) -> Iterator[Mat]:
    for A in enumerate_all(spec, n, n, budget):
        if rank(A) == n and A.det_val() == 1:
            yield A


def enumerate_range(spec: FieldSpec, n: int, m: int, lo: int, hi: int) -> Iterator[Mat]:
    """Index slice [lo, hi) of the full-space enumeration (range-splittable)."""
    for idx in range(lo, hi):
        yield Mat.from_index(spec, n, m, idx)


# --- censuses (independent counting oracles) --------------------------------

def rank_census(spec: FieldSpec, n: int, m: int,
                budget: Budget | None = None) -> tuple[int, ...]:
    """Counts of matrices in M(n, m) by rank, by exhaustive enumeration.

    Runs a DFS over rows keeping an incremental echelon basis, so each of
    the q^(nm) matrices costs one row reduction.
    """
    b = ensure(budget)
    b.check_items(spec.q ** (n * m), "rank census")
    counts = [0] * (min(n, m) + 1)
    if n == 0 or m == 0:
        counts[0] = 1
        return tuple(counts)
    if spec.q == 2:
        _census_rec_gf2(n, m, 0, [0] * (m + 1), 0, counts)
    else:
        _census_rec(spec, n, m, 0, [None] * m, 0, counts)
    return tuple(counts)


def _census_rec_gf2(n: int, m: int, depth: int, basis_by_msb: list[int],
                    nb: int, counts: list[int]) -> None:
    last = depth == n - 1
    for r in range(1 << m):
        rr = r
        while rr:
            b = basis_by_msb[rr.bit_length()]
            if not b:
                break
            rr ^= b
        if rr:
            if last:
                counts[nb + 1] += 1
            else:
                h = rr.bit_length()
                basis_by_msb[h] = rr
                _census_rec_gf2(n, m, depth + 1, basis_by_msb, nb + 1, counts)
                basis_by_msb[h] = 0
        else:
            if last:
                counts[nb] += 1
            else:
                _census_rec_gf2(n, m, depth + 1, basis_by_msb, nb, counts)


def _census_rec(spec: FieldSpec, n: int, m: int, depth: int,
                basis_by_lead: list, nb: int, counts: list[int]) -> None:
    last = depth == n - 1
    for flat in itertools.product(range(spec.q), repeat=m):
        row = list(flat)
        lead = None
        for j in range(m):
            if row[j]:
                b = basis_by_lead[j]
                if b is None:
                    lead = j
                    break
                c = row[j]
                row = [spec.sub(x, spec.mul(c, y)) for x, y in zip(row, b)]
        if lead is not None:
            inv = spec.inv(row[lead])
            if inv != 1:
                row = [spec.mul(inv, x) for x in row]
            if last:
                counts[nb + 1] += 1
            else:
                basis_by_lead[lead] = row
                _census_rec(spec, n, m, depth + 1, basis_by_lead, nb + 1, counts)
                basis_by_lead[lead] = None
        else:
            if last:
                counts[nb] += 1
            else:
                _census_rec(spec, n, m, depth + 1, basis_by_lead, nb, counts)


@lru_cache(maxsize=None)
def rank_table(spec: FieldSpec, n: int, m: int) -> tuple[int, ...]:
    """rank of Mat.from_index(spec, n, m, i) for every index i."""
    Budget().check_items(spec.q ** (n * m), "rank table")
    out = []
    for A in enumerate_all(spec, n, m):
        out.append(rank(A))
    return tuple(out)


@lru_cache(maxsize=None)
def subspaces_of_dim(spec: FieldSpec, ambient: int, d: int) -> tuple[Subspace, ...]:
    """All d-dimensional subspaces, sorted by canonical basis key."""
    if d < 0 or d > ambient:
        return ()
    if d == 0:
        return (Subspace.zero(spec, ambient),)
    seen: dict[tuple, Subspace] = {}
    Budget().check_items(spec.q ** (d * ambient), "subspace enumeration")
    for flat in itertools.product(range(spec.q), repeat=d * ambient):
        vecs = tuple(flat[i * ambient:(i + 1) * ambient] for i in range(d))
        S = Subspace.from_vectors(spec, ambient, vecs)
        if S.dim == d:
            seen.setdefault(S.key(), S)
    return tuple(seen[k] for k in sorted(seen))
