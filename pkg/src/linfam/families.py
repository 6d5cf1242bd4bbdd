"""Families of linear maps, restrictions, and junta decompositions.

A Restriction pins a partial map on each side: column constraints demand
sigma(v) = w, row constraints demand a^T sigma = b^T.  A Family is an
explicit member set living inside the coset cut out by its context
restriction; measures are relative to that coset.  On top of this the
module implements captureability and quasiregularity searches, the
iterative weak regularity decomposition, and density-increment bootstraps.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .budget import Budget, ensure
from .errors import (DomainError, DomainOverlap, FieldMismatch,
                     InconsistentRestriction, NotQuasiregular, ShapeMismatch,
                     StepBudgetExhausted)
from .gf import FieldSpec
from .matspace import (Mat, Subspace, mat_from_literal, rank_bits, rref_rows,
                       subspaces_of_dim, vec_dot, vec_index, vec_sub)


@lru_cache(maxsize=None)
def all_vectors(spec: FieldSpec, length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(spec.q), repeat=length))


def _canon_pairs(spec: FieldSpec, pairs, dom_len: int, img_len: int):
    """Canonical RREF form of (domain vector, image vector) constraint pairs.

    Pivoting happens only on domain coordinates; a dependency among domain
    vectors with mismatched images leaves a nonzero leftover image, which
    means the constraints define no partial map.
    """
    if not pairs:
        return ()
    rows = [tuple(v) + tuple(w) for v, w in pairs]
    for v, w in pairs:
        if len(v) != dom_len or len(w) != img_len:
            raise ShapeMismatch("constraint vector of wrong length")
    _, reduced, leftover = rref_rows(spec, rows, dom_len + img_len, pivot_cols=dom_len)
    if leftover:
        raise InconsistentRestriction("dependent domain vectors with conflicting images")
    return tuple((r[:dom_len], r[dom_len:]) for r in reduced)


class Restriction:
    """Independent column and row constraints on matrices in M(n, m)."""

    __slots__ = ("field", "n", "m", "cols", "rows", "_hash")

    def __init__(self, spec: FieldSpec, n: int, m: int,
                 cols: Iterable = (), rows: Iterable = ()):
        self.field = spec
        self.n = n
        self.m = m
        self.cols = _canon_pairs(spec, list(cols), m, n)
        self.rows = _canon_pairs(spec, list(rows), n, m)
        for v, w in self.cols:
            for a, b in self.rows:
                if vec_dot(spec, a, w) != vec_dot(spec, b, v):
                    raise InconsistentRestriction(
                        "column and row constraints disagree on the overlap")
        self._hash = hash((spec, n, m, self.cols, self.rows))

    @classmethod
    def empty(cls, spec: FieldSpec, n: int, m: int) -> "Restriction":
        return cls(spec, n, m)

    # structure ------------------------------------------------------------

    @property
    def dim_col(self) -> int:
        return len(self.cols)

    @property
    def dim_row(self) -> int:
        return len(self.rows)

    @property
    def complexity(self) -> int:
        return len(self.cols) + len(self.rows)

    def col_domain(self) -> Subspace:
        return Subspace.from_vectors(self.field, self.m, [v for v, _ in self.cols])

    def row_domain(self) -> Subspace:
        return Subspace.from_vectors(self.field, self.n, [a for a, _ in self.rows])

    def key(self):
        q = self.field.q
        return (self.complexity, self.dim_col,
                tuple(vec_index(q, v) for v, _ in self.cols),
                tuple(vec_index(q, w) for _, w in self.cols),
                tuple(vec_index(q, a) for a, _ in self.rows),
                tuple(vec_index(q, b) for _, b in self.rows))

    # predicates -----------------------------------------------------------

    def matches(self, M: Mat) -> bool:
        return (all(M.apply(v) == w for v, w in self.cols)
                and all(M.rapply(a) == b for a, b in self.rows))

    def avoids(self, M: Mat) -> bool:
        """True iff M disagrees on every nonzero domain element, both sides."""
        spec = self.field
        col_diffs = [vec_sub(spec, M.apply(v), w) for v, w in self.cols]
        if not _frame_independent(spec, col_diffs):
            return False
        row_diffs = [vec_sub(spec, M.rapply(a), b) for a, b in self.rows]
        return _frame_independent(spec, row_diffs)

    # combination ----------------------------------------------------------

    def merge(self, other: "Restriction") -> "Restriction":
        if other.field != self.field or (other.n, other.m) != (self.n, self.m):
            raise ShapeMismatch("merging restrictions on different spaces")
        return Restriction(self.field, self.n, self.m,
                           self.cols + other.cols, self.rows + other.rows)

    def dual(self) -> "Restriction":
        """The same constraints read on transposed matrices."""
        return Restriction(self.field, self.m, self.n,
                           cols=self.rows, rows=self.cols)

    def translate(self, A0: Mat) -> "Restriction":
        """Constraints equivalent to these after members shift by -A0."""
        spec = self.field
        return Restriction(spec, self.n, self.m,
                           cols=[(v, vec_sub(spec, w, A0.apply(v))) for v, w in self.cols],
                           rows=[(a, vec_sub(spec, b, A0.rapply(a))) for a, b in self.rows])

    def coset_cardinality(self) -> int:
        return self.field.q ** ((self.m - self.dim_col) * (self.n - self.dim_row))

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {"cols": [[list(v), list(w)] for v, w in self.cols],
                "rows": [[list(a), list(b)] for a, b in self.rows]}

    @classmethod
    def from_dict(cls, spec: FieldSpec, n: int, m: int, d: dict) -> "Restriction":
        return cls(spec, n, m,
                   cols=[(tuple(v), tuple(w)) for v, w in d.get("cols", [])],
                   rows=[(tuple(a), tuple(b)) for a, b in d.get("rows", [])])

    def __eq__(self, other):
        return (isinstance(other, Restriction) and other.field == self.field
                and (other.n, other.m) == (self.n, self.m)
                and other.cols == self.cols and other.rows == self.rows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return (f"Restriction(q={self.field.q}, {self.n}x{self.m}, "
                f"cols={self.cols}, rows={self.rows})")


def _frame_independent(spec: FieldSpec, diffs: list) -> bool:
    k = len(diffs)
    if k == 0:
        return True
    if k == 1:
        return any(diffs[0])
    if k == 2:
        d1, d2 = diffs
        if not any(d1) or not any(d2):
            return False
        i = next(j for j, x in enumerate(d1) if x)
        c = spec.div(d2[i], d1[i])
        return d2 != tuple(spec.mul(c, x) for x in d1)
    _, reduced, _ = rref_rows(spec, diffs, len(diffs[0]))
    return len(reduced) == k


def coset_cardinality(R: Restriction) -> int:
    return R.coset_cardinality()


def _coset_system(R: Restriction):
    """RREF of the linear system on the n*m entries cut out by R."""
    spec = R.field
    n, m = R.n, R.m
    eqs = []  # rows of length n*m plus rhs
    for v, w in R.cols:
        for i in range(n):
            row = [0] * (n * m)
            for j in range(m):
                row[i * m + j] = v[j]
            eqs.append((row, w[i]))
    for a, bb in R.rows:
        for j in range(m):
            row = [0] * (n * m)
            for i in range(n):
                row[i * m + j] = a[i]
            eqs.append((row, bb[j]))
    aug = [tuple(r) + (rhs,) for r, rhs in eqs]
    pivots, reduced, leftover = rref_rows(spec, aug, n * m + 1, pivot_cols=n * m)
    if leftover:
        raise InconsistentRestriction("restriction admits no matrix")
    pivset = set(pivots)
    free = [j for j in range(n * m) if j not in pivset]
    return pivots, reduced, free


def _coset_member(R: Restriction, pivots, reduced, free, assign) -> Mat:
    spec = R.field
    n, m = R.n, R.m
    flat = [0] * (n * m)
    for j, val in zip(free, assign):
        flat[j] = val
    for row, pc in zip(reduced, pivots):
        val = row[n * m]
        for j in free:
            if row[j] and flat[j]:
                val = spec.sub(val, spec.mul(row[j], flat[j]))
        flat[pc] = val
    return Mat(spec, tuple(tuple(flat[i * m:(i + 1) * m]) for i in range(n)), m)


def coset_base(R: Restriction) -> Mat:
    """The member of R's coset with all free entries zero."""
    pivots, reduced, free = _coset_system(R)
    return _coset_member(R, pivots, reduced, free, (0,) * len(free))


def enumerate_coset(R: Restriction, budget: Budget | None = None) -> list[Mat]:
    """All matrices satisfying R, sorted in enumeration (index) order."""
    b = ensure(budget)
    b.check_items(R.coset_cardinality(), "coset enumeration")
    pivots, reduced, free = _coset_system(R)
    out = [_coset_member(R, pivots, reduced, free, assign)
           for assign in itertools.product(range(R.field.q), repeat=len(free))]
    out.sort(key=Mat.index)
    return out


class Family:
    """An explicit set of matrices inside the coset of a context restriction."""

    __slots__ = ("field", "n", "m", "members", "context", "_sorted")

    def __init__(self, spec: FieldSpec, n: int, m: int,
                 members: Iterable[Mat], context: Restriction | None = None):
        self.field = spec
        self.n = n
        self.m = m
        self.context = context if context is not None else Restriction.empty(spec, n, m)
        if (self.context.n, self.context.m) != (n, m) or self.context.field != spec:
            raise ShapeMismatch("context restriction on a different space")
        mem = frozenset(members)
        for M in mem:
            if M.field != spec:
                raise FieldMismatch("member over a different field")
            if M.shape != (n, m):
                raise ShapeMismatch(f"member shape {M.shape} != ({n}, {m})")
            if not self.context.matches(M):
                raise InconsistentRestriction("member violates the context restriction")
        self.members = mem
        self._sorted = None

    # constructors ---------------------------------------------------------

    @classmethod
    def full_space(cls, spec: FieldSpec, n: int, m: int,
                   budget: Budget | None = None) -> "Family":
        R = Restriction.empty(spec, n, m)
        return cls(spec, n, m, enumerate_coset(R, budget), R)

    @classmethod
    def empty(cls, spec: FieldSpec, n: int, m: int) -> "Family":
        return cls(spec, n, m, ())

    @classmethod
    def from_coset(cls, R: Restriction, budget: Budget | None = None) -> "Family":
        return cls(R.field, R.n, R.m, enumerate_coset(R, budget), R)

    # structure ------------------------------------------------------------

    def sorted_members(self) -> tuple[Mat, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.members, key=Mat.index))
        return self._sorted

    def measure(self) -> Fraction:
        return Fraction(len(self.members), self.context.coset_cardinality())

    def restrict(self, R: Restriction) -> "Family":
        """Members also satisfying R, in the refined coset."""
        _check_trivial_overlap(self.context, R)
        merged = self.context.merge(R)
        kept = [M for M in self.members if R.matches(M)]
        return Family(self.field, self.n, self.m, kept, merged)

    def restrict_avoiding(self, R: Restriction) -> "Family":
        """Members disagreeing with R everywhere; context unchanged."""
        _check_trivial_overlap(self.context, R)
        kept = [M for M in self.members if R.avoids(M)]
        return Family(self.field, self.n, self.m, kept, self.context)

    def dual(self) -> "Family":
        return Family(self.field, self.m, self.n,
                      (M.transpose() for M in self.members), self.context.dual())

    def translate(self, A0: Mat) -> "Family":
        return Family(self.field, self.n, self.m,
                      (M - A0 for M in self.members), self.context.translate(A0))

    def __contains__(self, M: Mat) -> bool:
        return M in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self):
        return (f"Family(q={self.field.q}, {self.n}x{self.m}, "
                f"|members|={len(self.members)}, ctx complexity={self.context.complexity})")

    # file format ----------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.field.q},{self.n},{self.m}"]
        for v, w in self.context.cols:
            lines.append("col " + "".join(map(str, v)) + " -> " + "".join(map(str, w)))
        for a, b in self.context.rows:
            lines.append("row " + "".join(map(str, a)) + " -> " + "".join(map(str, b)))
        for M in self.sorted_members():
            lines.append(M.to_literal())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, spec: FieldSpec | None = None) -> "Family":
        from .gf import field as gf_field
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise DomainError("empty family file")
        q, n, m = (int(x) for x in lines[0].split(","))
        spec = spec if spec is not None else gf_field(q)
        cols, rows, members = [], [], []
        for ln in lines[1:]:
            if ln.startswith("col ") or ln.startswith("row "):
                kind, rest = ln[:3], ln[4:]
                left, _, right = rest.partition("->")
                u = tuple(int(c) for c in left.strip())
                w = tuple(int(c) for c in right.strip())
                (cols if kind == "col" else rows).append((u, w))
            else:
                members.append(mat_from_literal(ln, spec))
        ctx = Restriction(spec, n, m, cols, rows)
        return cls(spec, n, m, members, ctx)


def _check_trivial_overlap(ctx: Restriction, R: Restriction) -> None:
    if R.dim_col:
        D = ctx.col_domain()
        S = R.col_domain()
        if D.sum_(S).dim != D.dim + S.dim:
            raise DomainOverlap("column domains meet the context non-trivially")
    if R.dim_row:
        D = ctx.row_domain()
        A = R.row_domain()
        if D.sum_(A).dim != D.dim + A.dim:
            raise DomainOverlap("row domains meet the context non-trivially")


# --- quarter-power thresholds ----------------------------------------------

@dataclass(frozen=True)
class QPow:
    """coeff * q**exp with a possibly fractional exponent, compared exactly."""
    q: int
    coeff: Fraction
    exp: Fraction

    def as_float(self) -> float:
        return float(self.coeff) * self.q ** float(self.exp)

    def describe(self) -> str:
        return f"{self.coeff}*{self.q}^({self.exp})"


def leq_threshold(x: Fraction, eps) -> bool:
    """Exact x <= eps for eps a Fraction or a QPow (x >= 0)."""
    if isinstance(eps, QPow):
        d = eps.exp.denominator
        lhs = Fraction(x) ** d
        rhs = (eps.coeff ** d) * Fraction(eps.q) ** int(eps.exp * d)
        return lhs <= rhs
    return x <= eps


def default_regularity_eps(q: int, m: int, n: int, r: int) -> QPow:
    return QPow(q, Fraction(1), Fraction(-min(m, n) * r) + Fraction(r * r, 4))


# --- capture / quasiregularity searches ------------------------------------

class _SearchCtx:
    """Per-family caches for the restriction searches."""

    def __init__(self, F: Family, weights: dict[Mat, Fraction] | None = None):
        self.F = F
        self.spec = F.field
        if weights is None:
            self.items = [(M, 1) for M in F.sorted_members()]
        else:
            self.items = sorted(weights.items(), key=lambda kv: kv[0].index())
        self.total = sum(w for _, w in self.items)
        self._col: dict = {}
        self._row: dict = {}

    def col(self, v):
        out = self._col.get(v)
        if out is None:
            out = tuple(M.apply(v) for M, _ in self.items)
            self._col[v] = out
        return out

    def row(self, a):
        out = self._row.get(a)
        if out is None:
            out = tuple(M.rapply(a) for M, _ in self.items)
            self._row[a] = out
        return out

    def buckets(self, colbasis, rowbasis) -> dict:
        cols = [self.col(v) for v in colbasis]
        rows = [self.row(a) for a in rowbasis]
        out: dict = {}
        for i, (_, wt) in enumerate(self.items):
            key = (tuple(c[i] for c in cols), tuple(r[i] for r in rows))
            out[key] = out.get(key, 0) + wt
        return out


def _domains(spec: FieldSpec, m: int, n: int, s: int, ctx: Restriction):
    """Constraint domains of total dimension <= s avoiding the context,
    in deterministic lexicographic order."""
    col_ctx = ctx.col_domain()
    row_ctx = ctx.row_domain()
    out = []
    for total in range(s + 1):
        for c in range(total + 1):
            r = total - c
            if c > m - col_ctx.dim or r > n - row_ctx.dim:
                continue
            col_spaces = [S for S in subspaces_of_dim(spec, m, c)
                          if S.sum_(col_ctx).dim == c + col_ctx.dim]
            row_spaces = [A for A in subspaces_of_dim(spec, n, r)
                          if A.sum_(row_ctx).dim == r + row_ctx.dim]
            for S in col_spaces:
                for A in row_spaces:
                    out.append((S.rows, A.rows))
    return out


def is_captureable(F: Family, s: int, eps) -> Restriction | None:
    """Lexicographically first (Pi, pi) of complexity <= s whose avoiders
    have context measure <= eps, or None."""
    spec = F.field
    n, m = F.n, F.m
    card = F.context.coset_cardinality()
    # largest avoider count still within eps, for early loop exits
    lo, hi = 0, card
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if leq_threshold(Fraction(mid, card), eps):
            lo = mid
        else:
            hi = mid - 1
    max_avoid = lo
    sc = _SearchCtx(F)
    wvecs = all_vectors(spec, n)
    bvecs = all_vectors(spec, m)
    for colbasis, rowbasis in _domains(spec, m, n, s, F.context):
        buckets = sc.buckets(colbasis, rowbasis)
        items = sorted(buckets.items())
        c, r = len(colbasis), len(rowbasis)
        # a single difference vector is independent iff it is nonzero
        simple = c <= 1 and r <= 1
        for ws in itertools.product(wvecs, repeat=c):
            for bs in itertools.product(bvecs, repeat=r):
                avoid = 0
                for (us, vs), cnt in items:
                    if simple:
                        if us and us[0] == ws[0]:
                            continue
                        if vs and vs[0] == bs[0]:
                            continue
                    else:
                        cd = [vec_sub(spec, u, w) for u, w in zip(us, ws)]
                        if not _frame_independent(spec, cd):
                            continue
                        rd = [vec_sub(spec, v, b) for v, b in zip(vs, bs)]
                        if not _frame_independent(spec, rd):
                            continue
                    avoid += cnt
                    if avoid > max_avoid:
                        break
                if avoid <= max_avoid:
                    return Restriction(spec, n, m,
                                       cols=list(zip(colbasis, ws)),
                                       rows=list(zip(rowbasis, bs)))
    return None


def _density_scan(sc: _SearchCtx, s: int):
    """Yield (restriction pieces, conditional density) over all nonempty
    refinements of complexity <= s, in lexicographic order."""
    F = sc.F
    spec = F.field
    n, m = F.n, F.m
    dc, dr = F.context.dim_col, F.context.dim_row
    for colbasis, rowbasis in _domains(spec, m, n, s, F.context):
        c, r = len(colbasis), len(rowbasis)
        sub_card = spec.q ** ((m - dc - c) * (n - dr - r))
        buckets = sc.buckets(colbasis, rowbasis)
        for (us, vs) in sorted(buckets):
            wt = buckets[(us, vs)]
            density = Fraction(wt, sub_card)
            yield colbasis, rowbasis, us, vs, density


def is_quasiregular(F: Family, s: int, alpha: Fraction) -> Restriction | None:
    """None iff no complexity-<= s restriction pushes the conditional
    density above alpha * mu(F); otherwise the first violating witness."""
    mu = F.measure()
    bound = alpha * mu
    sc = _SearchCtx(F)
    for colbasis, rowbasis, us, vs, density in _density_scan(sc, s):
        if density > bound:
            return Restriction(F.field, F.n, F.m,
                               cols=list(zip(colbasis, us)),
                               rows=list(zip(rowbasis, vs)))
    return None


def max_density_ratio(F: Family, s: int) -> tuple[Fraction, Restriction | None]:
    """Largest conditional-density blow-up over restrictions of complexity
    <= s, with its first witness.  (mu(F) must be positive.)"""
    mu = F.measure()
    if mu == 0:
        raise DomainError("density ratio undefined for an empty family")
    best, best_w = Fraction(0), None
    sc = _SearchCtx(F)
    for colbasis, rowbasis, us, vs, density in _density_scan(sc, s):
        ratio = density / mu
        if ratio > best:
            best = ratio
            best_w = Restriction(F.field, F.n, F.m,
                                 cols=list(zip(colbasis, us)),
                                 rows=list(zip(rowbasis, vs)))
    return best, best_w


def function_quasiregular_witness(spec: FieldSpec, n: int, m: int,
                                  weights: dict[Mat, Fraction], s: int,
                                  C: Fraction) -> Restriction | None:
    """First complexity-<= s restriction with conditional mean > C * mean,
    for a nonnegative function given by its support weights."""
    base = Family(spec, n, m, weights.keys())
    sc = _SearchCtx(base, weights)
    mean = Fraction(sc.total, spec.q ** (n * m))
    bound = C * mean
    for colbasis, rowbasis, us, vs, density in _density_scan(sc, s):
        if density > bound:
            return Restriction(spec, n, m, cols=list(zip(colbasis, us)),
                               rows=list(zip(rowbasis, vs)))
    return None


def quasiregular_implies_uncaptureable_check(F: Family, b: int, N: int,
                                             delta: Fraction, beta: Fraction) -> dict:
    """Hypotheses: context complexity <= b, mu >= delta, (1, beta)-quasiregular,
    beta < q^(min(m,n) - N - b) / 2.  Conclusion checked exactly: F is not
    (N, delta/2)-captureable."""
    from .errors import HypothesisUnmet
    spec = F.field
    mu = F.measure()
    if F.context.complexity > b:
        raise HypothesisUnmet(f"context complexity {F.context.complexity} > b={b}")
    if mu < delta:
        raise HypothesisUnmet(f"measure {mu} below delta={delta}")
    wit = is_quasiregular(F, 1, beta)
    if wit is not None:
        raise NotQuasiregular(f"(1, {beta})-quasiregularity fails at {wit!r}")
    cap = Fraction(spec.q ** (min(F.m, F.n) - N - b), 2)
    if not beta < cap:
        raise HypothesisUnmet(f"beta={beta} not below {cap}")
    witness = is_captureable(F, N, delta / 2)
    return {"holds": witness is None, "witness": witness,
            "mu": mu, "beta": beta, "beta_cap": cap}


# --- regularity decomposition ----------------------------------------------

@dataclass
class TreeNode:
    id: int
    parent: int | None
    depth: int
    restriction: Restriction
    status: str = "open"           # open | internal | good | bad
    capture: Restriction | None = None
    children: list = dc_field(default_factory=list)


@dataclass
class DecompositionLog:
    q: int
    n: int
    m: int
    r: int
    s: int
    eps_desc: str
    nodes: list

    def to_json(self) -> str:
        out = []
        for nd in self.nodes:
            out.append({
                "id": nd.id, "parent": nd.parent, "depth": nd.depth,
                "status": nd.status,
                "restriction": nd.restriction.to_dict(),
                "capture": nd.capture.to_dict() if nd.capture else None,
                "children": list(nd.children),
            })
        return json.dumps({"q": self.q, "n": self.n, "m": self.m,
                           "r": self.r, "s": self.s, "eps": self.eps_desc,
                           "nodes": out}, sort_keys=True)


class Junta:
    """Union of restriction cosets with declared complexity parameters."""

    __slots__ = ("field", "n", "m", "components", "C", "r")

    def __init__(self, spec: FieldSpec, n: int, m: int,
                 components: Iterable[Restriction], C: int, r: int):
        comps = tuple(components)
        if len(comps) > C:
            raise DomainError(f"{len(comps)} components exceed declared C={C}")
        for R in comps:
            if R.complexity > r:
                raise DomainError("component complexity exceeds declared r")
            if R.field != spec or (R.n, R.m) != (n, m):
                raise ShapeMismatch("component on a different space")
        self.field = spec
        self.n = n
        self.m = m
        self.components = comps
        self.C = C
        self.r = r

    def contains(self, M: Mat) -> bool:
        return any(R.matches(M) for R in self.components)

    def dual(self) -> "Junta":
        return Junta(self.field, self.m, self.n,
                     (R.dual() for R in self.components), self.C, self.r)

    def to_json(self) -> str:
        return json.dumps([R.to_dict() for R in self.components], sort_keys=True)

    @classmethod
    def from_json(cls, spec: FieldSpec, n: int, m: int, text: str,
                  C: int | None = None, r: int | None = None) -> "Junta":
        comps = [Restriction.from_dict(spec, n, m, d) for d in json.loads(text)]
        if r is None:
            r = max((R.complexity for R in comps), default=0)
        if C is None:
            C = max(1, len(comps))
        return cls(spec, n, m, comps, C, r)

    def __repr__(self):
        return (f"Junta(q={self.field.q}, {self.n}x{self.m}, "
                f"{len(self.components)} components, C={self.C}, r={self.r})")


def regularity_decompose(F: Family, r: int, s: int, eps=None,
                         budget: Budget | None = None) -> tuple[Junta, DecompositionLog]:
    """Iterative capture tree: internal nodes are captureable, leaves at
    depth r are bad, other leaves are uncaptureable and feed the junta."""
    if r < 1 or s < 1:
        raise DomainError("need r >= 1 and s >= 1")
    spec = F.field
    q = spec.q
    if eps is None:
        eps = default_regularity_eps(q, F.m, F.n, r)
    b = ensure(budget)
    root = TreeNode(0, None, 0, Restriction.empty(spec, F.n, F.m))
    nodes = [root]
    stack = [0]
    good: list[Restriction] = []
    while stack:
        b.check_clock("regularity decomposition")
        nid = stack.pop()
        node = nodes[nid]
        sub = F.restrict(node.restriction) if node.restriction.complexity else F
        if node.depth >= r:
            node.status = "bad"
            continue
        witness = is_captureable(sub, s, eps)
        if witness is None:
            node.status = "good"
            good.append(F.context.merge(node.restriction))
            continue
        node.status = "internal"
        node.capture = witness
        for x in _nonzero_span_vectors(spec, [v for v, _ in witness.cols]):
            wx = _partial_image(spec, witness.cols, x)
            child_R = _try_extend(node.restriction, spec, F.n, F.m, col=(x, wx))
            if child_R is None:
                continue
            child = TreeNode(len(nodes), nid, node.depth + 1, child_R)
            nodes.append(child)
            node.children.append(child.id)
            stack.append(child.id)
        for a in _nonzero_span_vectors(spec, [a for a, _ in witness.rows]):
            ba = _partial_image(spec, witness.rows, a)
            child_R = _try_extend(node.restriction, spec, F.n, F.m, row=(a, ba))
            if child_R is None:
                continue
            child = TreeNode(len(nodes), nid, node.depth + 1, child_R)
            nodes.append(child)
            node.children.append(child.id)
            stack.append(child.id)
    C = max(1, (q ** s - 1) ** r)
    junta = Junta(spec, F.n, F.m, good, C, r)
    eps_desc = eps.describe() if isinstance(eps, QPow) else str(eps)
    log = DecompositionLog(q, F.n, F.m, r, s, eps_desc, nodes)
    return junta, log


def _nonzero_span_vectors(spec: FieldSpec, basis: list) -> list:
    """Nonzero vectors of the span, in lexicographic order."""
    if not basis:
        return []
    length = len(basis[0])
    out = set()
    for cs in itertools.product(range(spec.q), repeat=len(basis)):
        v = (0,) * length
        for c, bvec in zip(cs, basis):
            if c:
                v = tuple(spec.add(x, spec.mul(c, y)) for x, y in zip(v, bvec))
        if any(v):
            out.add(v)
    return sorted(out, key=lambda v: vec_index(spec.q, v))


def _partial_image(spec: FieldSpec, pairs, x):
    """Image of x under the partial map given by canonical (v, w) pairs."""
    S = Subspace.from_vectors(spec, len(pairs[0][0]), [v for v, _ in pairs])
    cs = S.coords(x)
    # canonical pairs have RREF domain rows, so coords follow pivot order
    img_len = len(pairs[0][1])
    out = (0,) * img_len
    for c, (_, w) in zip(cs, pairs):
        if c:
            out = tuple(spec.add(u, spec.mul(c, y)) for u, y in zip(out, w))
    return out


def _try_extend(base: Restriction, spec, n, m, col=None, row=None):
    try:
        return Restriction(spec, n, m,
                           cols=base.cols + ((col,) if col else ()),
                           rows=base.rows + ((row,) if row else ()))
    except InconsistentRestriction:
        # no matrix satisfies the extended constraints; the branch is empty
        return None


def measure_outside_junta(F: Family, J: Junta) -> Fraction:
    out = sum(1 for M in F.members if not J.contains(M))
    return Fraction(out, F.context.coset_cardinality())


# --- bootstrap via density increments ---------------------------------------

def bootstrap_quasiregular(F: Family, s_target: int, alpha: Fraction,
                           max_steps: int | None = None) -> tuple[tuple[Restriction, ...], Family]:
    """Restrict along alpha-violations until (s_target, alpha)-quasiregular.

    Each step multiplies the conditional measure by more than alpha, so for
    alpha > 1 at most log_alpha(1/mu) steps can happen.
    """
    if alpha <= 1:
        raise DomainError("need alpha > 1 for a terminating bootstrap")
    chain: list[Restriction] = []
    cur = F
    steps = 0
    while True:
        witness = is_quasiregular(cur, s_target, alpha)
        if witness is None:
            return tuple(chain), cur
        if max_steps is not None and steps >= max_steps:
            raise StepBudgetExhausted("bootstrap step budget exhausted",
                                      chain=tuple(chain), family=cur)
        cur = cur.restrict(witness)
        chain.append(witness)
        steps += 1


# --- intersection testers ---------------------------------------------------

def t_intersecting_witness(F: Family, t: int):
    """A pair with agreement dimension < t, or None if F is t-intersecting."""
    mem = F.sorted_members()
    spec = F.field
    if spec.q == 2:
        bits = [M.bits() for M in mem]
        for i in range(len(mem)):
            bi = bits[i]
            for j in range(i + 1, len(mem)):
                diff = tuple(x ^ y for x, y in zip(bi, bits[j]))
                if F.m - rank_bits(diff) < t:
                    return mem[i], mem[j]
        return None
    from .matspace import agreement_dim
    for i in range(len(mem)):
        for j in range(i + 1, len(mem)):
            if agreement_dim(mem[i], mem[j]) < t:
                return mem[i], mem[j]
    return None


def exact_agreement_witness(F: Family, t: int):
    """A distinct pair with agreement dimension exactly t, or None."""
    mem = F.sorted_members()
    spec = F.field
    if spec.q == 2:
        bits = [M.bits() for M in mem]
        for i in range(len(mem)):
            bi = bits[i]
            for j in range(i + 1, len(mem)):
                diff = tuple(x ^ y for x, y in zip(bi, bits[j]))
                if F.m - rank_bits(diff) == t:
                    return mem[i], mem[j]
        return None
    from .matspace import agreement_dim
    for i in range(len(mem)):
        for j in range(i + 1, len(mem)):
            if agreement_dim(mem[i], mem[j]) == t:
                return mem[i], mem[j]
    return None


def is_t_intersecting(F: Family, t: int):
    """Every distinct pair agrees on >= t dimensions.  (bool, witness pair)."""
    w = t_intersecting_witness(F, t)
    return w is None, w


def is_intersection_free(F: Family, t_minus_1: int):
    """No distinct pair agrees on exactly t_minus_1 dimensions."""
    w = exact_agreement_witness(F, t_minus_1)
    return w is None, w


def partial_agreement_dim(spec: FieldSpec, pairs1, pairs2, dom_len: int,
                          img_len: int) -> int:
    """dim{v in S1 meet S2 : Pi1 v = Pi2 v} via intersecting the graphs."""
    amb = dom_len + img_len
    G1 = Subspace.from_vectors(spec, amb, [tuple(v) + tuple(w) for v, w in pairs1])
    G2 = Subspace.from_vectors(spec, amb, [tuple(v) + tuple(w) for v, w in pairs2])
    return G1.intersect(G2).dim


def is_strongly_t_intersecting(J: Junta, t: int):
    """Every component pair (i = j included) agrees on >= t dimensions on
    the column side or the row side.  Returns (bool, witness pair)."""
    spec = J.field
    comps = J.components
    for i in range(len(comps)):
        for j in range(i, len(comps)):
            Ri, Rj = comps[i], comps[j]
            if i == j:
                if Ri.dim_col >= t or Ri.dim_row >= t:
                    continue
                return False, (i, j)
            col = partial_agreement_dim(spec, Ri.cols, Rj.cols, J.m, J.n) \
                if Ri.cols and Rj.cols else 0
            if col >= t:
                continue
            row = partial_agreement_dim(spec, Ri.rows, Rj.rows, J.n, J.m) \
                if Ri.rows and Rj.rows else 0
            if row >= t:
                continue
            return False, (i, j)
    return True, None


# --- junta measure -----------------------------------------------------------

def _merged_cardinality(spec: FieldSpec, n: int, m: int,
                        rs: Sequence[Restriction]) -> int:
    try:
        merged = rs[0]
        for R in rs[1:]:
            merged = merged.merge(R)
    except InconsistentRestriction:
        return 0
    return merged.coset_cardinality()


def junta_measure(J: Junta, budget: Budget | None = None) -> Fraction:
    """Exact measure of the member union, by inclusion-exclusion for up to
    12 components and by enumeration under budget beyond that."""
    spec = J.field
    total_card = spec.q ** (J.n * J.m)
    comps = J.components
    if not comps:
        return Fraction(0)
    if len(comps) <= 12:
        acc = 0
        for k in range(1, len(comps) + 1):
            sign = 1 if k % 2 == 1 else -1
            for subset in itertools.combinations(comps, k):
                acc += sign * _merged_cardinality(spec, J.n, J.m, subset)
        return Fraction(acc, total_card)
    b = ensure(budget)
    b.check_items(total_card, "junta measure enumeration")
    count = 0
    for idx in range(total_card):
        if J.contains(Mat.from_index(spec, J.n, J.m, idx)):
            count += 1
    return Fraction(count, total_card)
