"""Extremal constructions over GL: fixed-prefix families and their rivals.

The objects here are the conjectured optima for the forbidden-agreement
problem on invertible maps and the machinery used to stress them at desk
scale: families fixing a prefix of the standard basis, field-cycle
subgroups whose nonidentity quotients never fix a vector, counts of
prefix-fixing maps that nearly agree with a given outside map, and
exhaustive or sampled maximality checks.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterator, Sequence

from .budget import Budget, ensure
from .errors import (BudgetExceeded, DomainError, GeneratorSearchFailed,
                     PreconditionViolated)
from .families import Family
from .gf import FieldSpec, field
from .matspace import (Mat, Subspace, agreement_dim, enumerate_gl,
                       gaussian_binomial, gl_order, kernel, m_qt, rank,
                       rref_rows, subspaces_of_dim, vec_from_index)
from . import mis

__all__ = [
    "canonical_family",
    "canonical_family_size",
    "derangement_bound",
    "derangement_construct",
    "derangement_construct_count",
    "derangement_enumerate",
    "derangement_enumerate_many",
    "derangement_ratio_chain",
    "fixed_prefix_dim",
    "report_to_json",
    "singer_cycle",
    "sl_family",
    "verify_extremal_bound",
]


# --- incremental echelon over F_q -------------------------------------------

def _reduce(spec: FieldSpec, piv: dict, v):
    """Reduce v against pivot rows; (lead, remainder) or None if dependent."""
    w = tuple(v)
    while True:
        lead = next((j for j, x in enumerate(w) if x), None)
        if lead is None:
            return None
        row = piv.get(lead)
        if row is None:
            return lead, w
        c = w[lead]
        w = tuple(spec.sub(x, spec.mul(c, y)) for x, y in zip(w, row))


def _push(spec: FieldSpec, piv: dict, v) -> bool:
    r = _reduce(spec, piv, v)
    if r is None:
        return False
    lead, w = r
    inv = spec.inv(w[lead])
    piv[lead] = tuple(spec.mul(inv, x) for x in w)
    return True


def _unit(n: int, j: int) -> tuple[int, ...]:
    return tuple(1 if k == j else 0 for k in range(n))


def _mat_from_columns(spec: FieldSpec, cols: Sequence[Sequence[int]]) -> Mat:
    n = len(cols[0])
    rows = tuple(tuple(c[i] for c in cols) for i in range(n))
    return Mat(spec, rows, len(cols))


def _mat_inverse(A: Mat) -> Mat:
    spec, n = A.field, A.n
    aug = [tuple(A.rows[i]) + _unit(n, i) for i in range(n)]
    pivots, reduced, _ = rref_rows(spec, aug, 2 * n, pivot_cols=n)
    if len(pivots) != n:
        raise DomainError("matrix is singular")
    return Mat(spec, tuple(r[n:] for r in reduced), n)


# --- prefix-fixing invertible families --------------------------------------

def _fixing_columns(spec: FieldSpec, n: int, t: int,
                    budget: Budget | None = None) -> Iterator[tuple]:
    """Column tuples of every invertible map fixing e_1 .. e_t, in
    lexicographic order of the chosen column encodings."""
    if not 1 <= t <= n:
        raise DomainError(f"need 1 <= t <= n, got t={t}")
    b = ensure(budget)
    b.check_items(m_qt(n, spec.q, t), "fixed-prefix enumeration")
    units = [_unit(n, j) for j in range(t)]
    piv0: dict = {}
    for u in units:
        _push(spec, piv0, u)
    cands = [vec_from_index(spec.q, n, i) for i in range(1, spec.q ** n)]
    cols = list(units)
    seen = 0

    def rec(piv: dict) -> Iterator[tuple]:
        nonlocal seen
        if len(cols) == n:
            seen += 1
            if seen % 4096 == 0:
                b.check_clock("fixed-prefix enumeration")
            yield tuple(cols)
            return
        for v in cands:
            r = _reduce(spec, piv, v)
            if r is None:
                continue
            lead, w = r
            child = dict(piv)
            inv = spec.inv(w[lead])
            child[lead] = tuple(spec.mul(inv, x) for x in w)
            cols.append(v)
            yield from rec(child)
            cols.pop()

    return rec(piv0)


def canonical_family(n: int, q: int, t: int, side: str = "column",
                     budget: Budget | None = None) -> Family:
    """All invertible maps fixing e_1 .. e_t; or the transpose family.

    The transpose of a map whose columns are c_1 .. c_n has those as its
    rows, so the row side falls out of the same enumeration.
    """
    if side not in ("column", "row"):
        raise DomainError(f"side must be column or row, got {side!r}")
    spec = field(q)
    members = []
    for cols in _fixing_columns(spec, n, t, budget):
        if side == "column":
            members.append(_mat_from_columns(spec, cols))
        else:
            members.append(Mat(spec, cols, n))
    return Family(spec, n, n, members)


def canonical_family_size(n: int, q: int, t: int,
                          budget: Budget | None = None) -> int:
    """Member count by walking the enumeration, never materializing it."""
    return sum(1 for _ in _fixing_columns(field(q), n, t, budget))


# --- field-cycle subgroup ----------------------------------------------------

def _poly_divides(spec: FieldSpec, d: tuple, f: tuple) -> bool:
    """Whether monic d divides monic f (coefficient order: constant first)."""
    rem = list(f)
    dd = len(d) - 1
    for top in range(len(f) - 1, dd - 1, -1):
        c = rem[top]
        if c:
            for k in range(dd + 1):
                rem[top - dd + k] = spec.sub(rem[top - dd + k],
                                             spec.mul(c, d[k]))
    return not any(rem)


def _smallest_irreducible(spec: FieldSpec, n: int) -> tuple:
    """Monic irreducible of degree n with the smallest encoded low part."""
    q = spec.q
    divisors = []
    for deg in range(1, n // 2 + 1):
        for enc in range(q ** deg):
            divisors.append(vec_from_index(q, deg, enc)[::-1] + (1,))
    for enc in range(q ** n):
        low = tuple(reversed(vec_from_index(q, n, enc)))
        f = low + (1,)
        if all(not _poly_divides(spec, d, f) for d in divisors):
            return f
    raise GeneratorSearchFailed(f"no irreducible of degree {n} over q={q}")


def _shift_mod(spec: FieldSpec, v: tuple, f: tuple) -> tuple:
    """Multiply by x modulo the monic f (degree n = len(v))."""
    n = len(v)
    carry = v[-1]
    out = [0] + list(v[:-1])
    if carry:
        for k in range(n):
            out[k] = spec.sub(out[k], spec.mul(carry, f[k]))
    return tuple(out)


def _ext_mul(spec: FieldSpec, a: tuple, b: tuple, f: tuple) -> tuple:
    n = len(a)
    acc = (0,) * n
    power = a
    for k in range(n):
        c = b[k]
        if c:
            acc = tuple(spec.add(x, spec.mul(c, y))
                        for x, y in zip(acc, power))
        if k + 1 < n:
            power = _shift_mod(spec, power, f)
    return acc


def singer_cycle(n: int, q: int, budget: Budget | None = None) -> Family:
    """A cyclic subgroup of GL(n, q) of order q^n - 1 in which distinct
    members disagree on every nonzero vector.

    The space F_q^n is read as the degree-n field extension in the power
    basis of the smallest irreducible modulus; members are the matrices
    of multiplication by powers of a generator found by exhaustive search
    from the smallest encoded element.
    """
    spec = field(q)
    order = q ** n - 1
    ensure(budget).check_items(order * order, "generator search")
    f = _smallest_irreducible(spec, n)
    one = _unit(n, 0)
    gen = None
    for enc in range(2, q ** n):
        g = tuple(reversed(vec_from_index(q, n, enc)))
        acc, k = g, 1
        while acc != one:
            acc = _ext_mul(spec, acc, g, f)
            k += 1
        if k == order:
            gen = g
            break
    if gen is None:
        raise GeneratorSearchFailed(f"no multiplicative generator for q={q}, n={n}")
    members = []
    elt = one
    for _ in range(order):
        col = elt
        cols = []
        for _ in range(n):
            cols.append(col)
            col = _shift_mod(spec, col, f)
        members.append(_mat_from_columns(spec, cols))
        elt = _ext_mul(spec, elt, gen, f)
    assert len({M.index() for M in members}) == order
    return Family(spec, n, n, members)


# --- near-agreement derangement counts --------------------------------------

def fixed_prefix_dim(tau: Mat, t: int) -> int:
    """dim of {v in span(e_1 .. e_t) : tau v = v}."""
    spec, n = tau.field, tau.n
    rows = tuple(tuple(spec.sub(tau.rows[i][j], 1 if i == j else 0)
                       for j in range(t)) for i in range(n))
    return t - rank(Mat(spec, rows, t))


def _check_tau(n: int, q: int, t: int, tau: Mat) -> None:
    if tau.n != n or tau.m != n or tau.field.q != q:
        raise DomainError("tau must be a square matrix of the stated shape")
    if rank(tau) != n:
        raise PreconditionViolated("tau must be invertible")
    if fixed_prefix_dim(tau, t) > t - 1:
        raise PreconditionViolated(
            "tau must not fix the whole of span(e_1 .. e_t)")


def derangement_enumerate(n: int, q: int, t: int, tau: Mat,
                          budget: Budget | None = None) -> int:
    """Exact count of prefix-fixing invertible maps whose agreement with
    tau has dimension exactly t - 1."""
    return derangement_enumerate_many(n, q, t, [tau], budget)[0]


def derangement_enumerate_many(n: int, q: int, t: int, taus: Sequence[Mat],
                               budget: Budget | None = None) -> list[int]:
    """One shared pass of the prefix-fixing enumeration, counted per tau."""
    for tau in taus:
        _check_tau(n, q, t, tau)
    if q == 2:
        return _derangement_counts_gf2(n, t, taus, budget)
    spec = field(q)
    counts = [0] * len(taus)
    for cols in _fixing_columns(spec, n, t, budget):
        sigma = _mat_from_columns(spec, cols)
        for i, tau in enumerate(taus):
            if agreement_dim(sigma, tau) == t - 1:
                counts[i] += 1
    return counts


def _derangement_counts_gf2(n: int, t: int, taus: Sequence[Mat],
                            budget: Budget | None) -> list[int]:
    """Bit-packed column walk: columns are ints, independence and the
    per-tau difference ranks are tracked by incremental elimination."""
    b = ensure(budget)
    b.check_items(m_qt(n, 2, t), "fixed-prefix enumeration")
    tcols = []
    for tau in taus:
        tcols.append([sum(tau.rows[i][j] << i for i in range(n))
                      for j in range(n)])
    want = n - (t - 1)            # difference rank putting agreement at t - 1

    def reduce_bits(basis: dict, v: int):
        while v:
            h = v.bit_length() - 1
            row = basis.get(h)
            if row is None:
                return h, v
            v ^= row
        return None

    sig0: dict = {j: 1 << j for j in range(t)}
    diff0 = []
    for tc in tcols:
        dd: dict = {}
        for j in range(t):
            r = reduce_bits(dd, (1 << j) ^ tc[j])
            if r is not None:
                dd[r[0]] = r[1]
        diff0.append(dd)
    counts = [0] * len(taus)
    leaves = 0

    def rec(depth: int, sig: dict, diffs: list[dict]) -> None:
        nonlocal leaves
        last = depth == n - 1
        for cand in range(1, 1 << n):
            r = reduce_bits(sig, cand)
            if r is None:
                continue
            if last:
                leaves += 1
                if leaves % 8192 == 0:
                    b.check_clock("fixed-prefix enumeration")
                for i, dd in enumerate(diffs):
                    rk = len(dd)
                    if reduce_bits(dd, cand ^ tcols[i][depth]) is not None:
                        rk += 1
                    if rk == want:
                        counts[i] += 1
                continue
            child_sig = dict(sig)
            child_sig[r[0]] = r[1]
            child_diffs = []
            for i, dd in enumerate(diffs):
                nd = dict(dd)
                rr = reduce_bits(nd, cand ^ tcols[i][depth])
                if rr is not None:
                    nd[rr[0]] = rr[1]
                child_diffs.append(nd)
            rec(depth + 1, child_sig, child_diffs)

    if t == n:
        for i, dd in enumerate(diff0):
            if len(dd) == want:
                counts[i] += 1
    else:
        rec(t, sig0, diff0)
    return counts


def derangement_bound(n: int, q: int, t: int, d: int) -> Fraction:
    """Lower bound on the near-agreement count: a quarter of the number
    of admissible seed subspaces times the guaranteed image choices."""
    if not 0 <= d <= t - 1:
        raise DomainError(f"need 0 <= d <= t - 1, got d={d}")
    prod = gaussian_binomial(n, t - d - 1, q)
    for i in range(2 * t - d, n + 1):
        prod *= q ** n - q ** (i - 1) - q ** (i - t)
    return Fraction(prod, 4)


def derangement_ratio_chain(n: int, q: int, t: int, d: int) -> dict:
    """Exact evaluation of the chain bounding four times the count over
    the prefix-fixing family size from below by a positive constant."""
    if t < 2:
        raise DomainError("the chain argument needs t >= 2")
    if 3 * t > n:
        raise DomainError("the chain argument needs 3t <= n")
    if not 0 <= d <= t - 1:
        raise DomainError(f"need 0 <= d <= t - 1, got d={d}")
    m = m_qt(n, q, t)
    small = 1
    for i in range(1, t - d):
        small *= q ** (t - d - 1) - q ** (i - 1)
    num = 1
    for i in range(1, t - d):
        num *= q ** n - q ** (i - 1)
    for i in range(2 * t - d, n + 1):
        num *= q ** n - q ** (i - 1) - q ** (i - t)
    lhs_ratio = Fraction(num, m)
    tail = Fraction(1)
    for j in range(1, n - 2 * t + d + 2):
        tail *= 1 - Fraction(1, q ** j)
    rep = {
        "n": n, "q": q, "t": t, "d": d,
        "ratio_over_size": lhs_ratio,
        "small_denominator": small,
        "small_cap": q ** ((t - 1) ** 2),
        "tail_product": tail,
        "identity": 4 * derangement_bound(n, q, t, d) / m
                    == lhs_ratio / small,
        "holds": (small <= q ** ((t - 1) ** 2)
                  and lhs_ratio >= tail
                  and tail > Fraction(1, 4)),
    }
    return rep


# --- constructive near-agreement process ------------------------------------

def _construct_setup(n: int, q: int, t: int, tau: Mat):
    _check_tau(n, q, t, tau)
    if 3 * t > n:
        raise PreconditionViolated("the construction needs 3t <= n")
    spec = field(q)
    # fixed subspace of tau inside the prefix span, lifted to F_q^n
    block = Mat(spec, tuple(tuple(spec.sub(tau.rows[i][j], 1 if i == j else 0)
                                  for j in range(t)) for i in range(n)), t)
    D = kernel(block)
    d = D.dim
    T = Subspace.from_vectors(spec, n, [_unit(n, j) for j in range(t)])
    # preimage of the prefix span: tau v must vanish on the last n - t coords
    low = Mat(spec, tuple(tau.rows[i] for i in range(t, n)), n)
    U = T.sum_(kernel(low))
    seeds = [Wc for Wc in subspaces_of_dim(spec, n, t - d - 1)
             if Wc.intersect(U).dim == 0]
    return spec, d, seeds


def _construct_walk(n: int, q: int, t: int, tau: Mat, materialize: bool,
                    budget: Budget | None):
    """Shared walk over the process tree, one yield per leaf: the
    assembled map when materializing, otherwise 1.  Leaves are distinct
    maps whenever d = 0 (the agreement space recovers the seed) or the
    seed is unique."""
    spec, d, seeds = _construct_setup(n, q, t, tau)
    b = ensure(budget)
    leaves = 0
    cands = [vec_from_index(q, n, i) for i in range(1, q ** n)]
    for W in seeds:
        basis = [_unit(n, j) for j in range(t)] + [tuple(r) for r in W.rows]
        span: dict = {}
        for v in basis:
            if not _push(spec, span, v):
                raise DomainError("seed subspace meets the prefix span")
        for j in range(n):
            if len(basis) == n:
                break
            u = _unit(n, j)
            if _push(spec, span, u):
                basis.append(u)
        imgs = [basis[j] for j in range(t)]
        imgs += [tuple(tau.apply(v)) for v in basis[t:2 * t - d - 1]]
        img_piv: dict = {}
        for v in imgs:
            _push(spec, img_piv, v)
        diff_piv: dict = {}
        for j in range(2 * t - d - 1):
            dv = tuple(spec.sub(a, c)
                       for a, c in zip(imgs[j], tau.apply(basis[j])))
            _push(spec, diff_piv, dv)
        taus_on_basis = [tuple(tau.apply(v)) for v in basis]
        binv = _mat_inverse(_mat_from_columns(spec, basis)) if materialize else None

        def rec(depth: int, ip: dict, dp: dict):
            nonlocal leaves
            tv = taus_on_basis[depth]
            last = depth == n - 1
            for cand in cands:
                r1 = _reduce(spec, ip, cand)
                if r1 is None:
                    continue
                dv = tuple(spec.sub(a, c) for a, c in zip(cand, tv))
                r2 = _reduce(spec, dp, dv)
                if r2 is None:
                    continue
                imgs.append(cand)
                if last:
                    leaves += 1
                    if leaves % 4096 == 0:
                        b.check_clock("constructive walk")
                    yield _assemble(spec, n, imgs, binv) if materialize else 1
                else:
                    ip2 = dict(ip)
                    ip2[r1[0]] = _normalize(spec, r1)
                    dp2 = dict(dp)
                    dp2[r2[0]] = _normalize(spec, r2)
                    yield from rec(depth + 1, ip2, dp2)
                imgs.pop()

        if len(basis) == 2 * t - d - 1:
            yield _assemble(spec, n, imgs, binv) if materialize else 1
        else:
            yield from rec(2 * t - d - 1, img_piv, diff_piv)


def _normalize(spec: FieldSpec, r) -> tuple:
    lead, w = r
    inv = spec.inv(w[lead])
    return tuple(spec.mul(inv, x) for x in w)


def _assemble(spec: FieldSpec, n: int, imgs, binv: Mat) -> Mat:
    cols = []
    for k in range(n):
        acc = (0,) * n
        for j in range(n):
            c = binv.rows[j][k]
            if c:
                acc = tuple(spec.add(x, spec.mul(c, y))
                            for x, y in zip(acc, imgs[j]))
        cols.append(acc)
    return _mat_from_columns(spec, cols)


def derangement_construct(n: int, q: int, t: int, tau: Mat,
                          budget: Budget | None = None) -> Iterator[Mat]:
    """Every map the constructive process can produce: identity on the
    prefix span, equal to tau on an admissible seed subspace, images then
    extended avoiding the span of previous images and the affine shift of
    the running difference span."""
    return _construct_walk(n, q, t, tau, True, budget)


def derangement_construct_count(n: int, q: int, t: int, tau: Mat,
                                budget: Budget | None = None) -> int:
    """Number of distinct maps the process produces.

    Walk leaves are in bijection with outputs when d = 0 (the agreement
    space recovers the seed) or when only the trivial seed exists; the
    remaining cases deduplicate materialized outputs instead.
    """
    _, d, _ = _construct_setup(n, q, t, tau)
    if d == 0 or t - d - 1 == 0:
        return sum(_construct_walk(n, q, t, tau, False, budget))
    return len({M.index() for M in _construct_walk(n, q, t, tau, True, budget)})


# --- maximality checks -------------------------------------------------------

def _common_agreement_ok(members: Sequence[Mat], t: int, dual: bool) -> bool:
    spec = members[0].field
    n = members[0].n
    inter = Subspace.full(spec, n)
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            A, B = members[i], members[j]
            if dual:
                A, B = A.transpose(), B.transpose()
            inter = inter.intersect(kernel(A - B))
            if inter.dim < t:
                return False
    return inter.dim >= t


def verify_extremal_bound(n: int, q: int, t: int, mode: str,
                          budget: Budget | None = None) -> dict:
    """Stress the prefix-fixing family's optimality claim at one point.

    exhaustive: exact maximum family avoiding agreement dimension t - 1
    inside GL, against the prefix-fixing size; every optimum must carry a
    t-dimensional common-agreement subspace on one side or the other.
    sample: no single map outside the prefix-fixing family can be added.
    spectral: the ratio bound of the ambient walk operator, as context.
    Findings are exploratory: they are data at one small n, not the
    asymptotic statement.
    """
    spec = field(q)
    b = ensure(budget)
    bound = m_qt(n, q, t)
    params = {"n": n, "q": q, "t": t, "mode": mode}
    if mode == "exhaustive":
        order = gl_order(n, q)
        if order > 200:
            raise BudgetExceeded(f"exhaustive search capped near |GL| = 200, "
                                 f"got {order}")
        verts = list(enumerate_gl(spec, n))
        adj = [0] * order
        for i in range(order):
            for j in range(i + 1, order):
                if agreement_dim(verts[i], verts[j]) == t - 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        seed = 0
        for i, M in enumerate(verts):
            if all(M.rows[r][c] == (1 if r == c else 0)
                   for c in range(t) for r in range(n)):
                seed |= 1 << i
        comp = mis.complement_bitsets(adj, order)
        size, _ = mis.max_clique(comp, order, b, incumbent=(bound, seed))
        optima = mis.all_maximum_independent_sets(adj, order, b)
        normalized = all(
            _common_agreement_ok([verts[i] for i in mis.bits_of(bs)], t, False)
            or _common_agreement_ok([verts[i] for i in mis.bits_of(bs)], t, True)
            for bs in optima)
        status = "exploratory" if size == bound and normalized else "violated"
        witness = [verts[i].to_literal() for i in mis.bits_of(optima[0])]
        return {"claim": "maximum family avoiding agreement dimension t-1 "
                         "in GL matches the prefix-fixing size",
                "params": params, "value": str(size), "bound": str(bound),
                "optima": len(optima), "normalized": normalized,
                "status": status, "witness": witness}
    if mode == "sample":
        members = {}
        for cols in _fixing_columns(spec, n, t, budget):
            M = _mat_from_columns(spec, cols)
            members[M.index()] = M
        mem_list = list(members.values())
        b.check_items(gl_order(n, q) * len(mem_list), "augmentation scan")
        scanned = 0
        for sigma in enumerate_gl(spec, n):
            if sigma.index() in members:
                continue
            scanned += 1
            if scanned % 512 == 0:
                b.check_clock("augmentation scan")
            if not any(agreement_dim(sigma, M) == t - 1 for M in mem_list):
                return {"claim": "no single map outside the prefix-fixing "
                                 "family can be added",
                        "params": params, "value": str(scanned),
                        "bound": str(bound), "status": "violated",
                        "witness": [sigma.to_literal()]}
        return {"claim": "no single map outside the prefix-fixing family "
                         "can be added",
                "params": params, "value": str(scanned),
                "bound": str(bound), "status": "exploratory", "witness": []}
    if mode == "spectral":
        from .spectra import hoffman_bound, spectrum
        S = spectrum(q, n, n, t - 1)
        h = hoffman_bound(S)
        measure = Fraction(bound, q ** (n * n))
        return {"claim": "ratio bound of the ambient agreement walk, "
                         "for context",
                "params": params, "value": str(measure), "bound": str(h),
                "consistent": measure <= h,
                "status": "exploratory", "witness": []}
    raise DomainError(f"unknown mode {mode!r}")


def sl_family(n: int, q: int, t: int,
              budget: Budget | None = None) -> tuple[Family, dict]:
    """The prefix-fixing family cut down to determinant one."""
    spec = field(q)
    members = []
    for cols in _fixing_columns(spec, n, t, budget):
        M = _mat_from_columns(spec, cols)
        if M.det_val() == 1:
            members.append(M)
    total = m_qt(n, q, t)
    assert total % (q - 1) == 0
    expected = total // (q - 1)
    fam = Family(spec, n, n, members)
    rep = {"claim": "prefix-fixing determinant-one family size",
           "params": {"n": n, "q": q, "t": t},
           "value": str(len(members)), "bound": str(expected),
           "status": "confirmed" if len(members) == expected else "violated",
           "witness": []}
    return fam, rep


def report_to_json(rep: dict) -> str:
    def enc(x):
        if isinstance(x, Fraction):
            return str(x)
        raise TypeError(f"not JSON serializable: {x!r}")
    return json.dumps(rep, default=enc)
