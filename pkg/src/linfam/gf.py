"""Finite fields F_q, q = p^s, in a polynomial-basis representation.

Elements are encoded as integers in [0, q): the base-p digits of the code
are the coefficients of the residue polynomial, constant term first.  A
FieldSpec owns the arithmetic tables; Fq is a thin element wrapper for the
operator API.  Moduli default to a fixed Conway-polynomial table for
q <= 64 (so encodings are reproducible across runs) and may be overridden.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable

from .cyclo import Cyc
from .errors import DivisionByZero, DomainError, FieldMismatch, GeneratorSearchFailed

_MAX_Q = 4096

# Conway polynomials C_{p,s} for q = p^s <= 64, coefficients constant-first,
# leading coefficient included.  Degree-1 entries are x - g with g the least
# primitive root mod p.
CONWAY: dict[int, tuple[int, ...]] = {
    2: (1, 1),
    3: (1, 1),
    4: (1, 1, 1),
    5: (3, 1),
    7: (4, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    11: (9, 1),
    13: (11, 1),
    16: (1, 1, 0, 0, 1),
    17: (14, 1),
    19: (17, 1),
    23: (18, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
    29: (27, 1),
    31: (28, 1),
    32: (1, 0, 1, 0, 0, 1),
    37: (35, 1),
    41: (35, 1),
    43: (40, 1),
    47: (42, 1),
    49: (3, 6, 1),
    53: (51, 1),
    59: (57, 1),
    61: (59, 1),
    64: (1, 1, 0, 1, 1, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# --- polynomials over F_p, coefficient lists constant-first -----------------

def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pmod(a, mod, p):
    a = list(a)
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) >= len(mod):
        c = a[-1] * inv_lead % p
        if c:
            off = len(a) - len(mod)
            for i, mc in enumerate(mod):
                a[off + i] = (a[off + i] - c * mc) % p
        a.pop()
    return _ptrim(a)


def _poly_irreducible(mod: tuple[int, ...], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2."""
    deg = len(mod) - 1
    if deg < 1 or mod[-1] % p == 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            div.append(1)
            if not _pmod(mod, div, p):
                return False
    return True


class FieldSpec:
    """Arithmetic context for F_q; equality is by (p, s, modulus)."""

    __slots__ = ("p", "s", "q", "modulus", "_exp", "_log", "_neg", "_trace",
                 "_add", "_hash")

    def __init__(self, p: int, s: int, modulus: Iterable[int] | None = None):
        if not is_prime(p):
            raise DomainError(f"p={p} is not prime")
        if s < 1:
            raise DomainError("s must be >= 1")
        q = p ** s
        if q > _MAX_Q:
            raise DomainError(f"q={q} beyond supported size {_MAX_Q}")
        if modulus is None:
            modulus = CONWAY.get(q)
            if modulus is None:
                modulus = _search_irreducible(p, s)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise DomainError("modulus must be monic of degree s")
        if not _poly_irreducible(modulus, p):
            raise DomainError(f"modulus {modulus} reducible over F_{p}")
        self.p, self.s, self.q, self.modulus = p, s, q, modulus
        self._hash = hash((p, s, modulus))
        self._build_tables()

    # encoding -------------------------------------------------------------

    def coeffs_of(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def encode(self, coeffs: Iterable[int]) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + (c % self.p)
        return a

    # table construction ---------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        prod = _pmul(list(self.coeffs_of(a)), list(self.coeffs_of(b)), self.p)
        return self.encode(_pmod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        p, s, q = self.p, self.s, self.q
        if s == 1 or q > 256:
            self._add = None
        else:
            self._add = [[self.encode(tuple((x + y) % p for x, y in
                                            zip(self.coeffs_of(a), self.coeffs_of(b))))
                          for b in range(q)] for a in range(q)]
        self._neg = tuple(self.encode(tuple((-x) % p for x in self.coeffs_of(a)))
                          for a in range(q))
        gen = None
        for g in range(1, q):
            x, order = g, 1
            while x != 1:
                x = self._raw_mul(x, g)
                order += 1
            if order == q - 1:
                gen = g
                break
        if gen is None:
            raise GeneratorSearchFailed(f"no generator for q={q}")
        exp = [1] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._raw_mul(x, gen)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - (q - 1)]
        self._exp, self._log = exp, log
        trace = []
        for a in range(q):
            t, x = 0, a
            for _ in range(s):
                t = self.add(t, x)
                x = self.pow(x, p)
            trace.append(self.coeffs_of(t)[0])
        self._trace = tuple(trace)

    # element arithmetic on integer encodings ------------------------------

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        return self.encode(tuple((x + y) % self.p for x, y in
                                 zip(self.coeffs_of(a), self.coeffs_of(b))))

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.q - 1) - self._log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def trace(self, a: int) -> int:
        """Trace into the prime field: a + a^p + ... + a^(p^(s-1))."""
        return self._trace[a]

    def elements(self) -> range:
        return range(self.q)

    # identity -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.s, self.modulus) == (other.p, other.s, other.modulus))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FieldSpec(p={self.p}, s={self.s}, modulus={self.modulus})"

    # serialization --------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "s": self.s, "modulus": list(self.modulus)})

    @classmethod
    def from_json(cls, text: str) -> "FieldSpec":
        d = json.loads(text)
        return field(d["p"] ** d["s"], modulus=tuple(d["modulus"]))


def _search_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree s over F_p."""
    for code in range(p ** s):
        c, low = code, []
        for _ in range(s):
            low.append(c % p)
            c //= p
        cand = tuple(low) + (1,)
        if _poly_irreducible(cand, p):
            return cand
    raise GeneratorSearchFailed(f"no irreducible of degree {s} over F_{p}")


_FIELDS: dict[tuple[int, tuple[int, ...] | None], FieldSpec] = {}


def field(q: int, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Shared FieldSpec for the given order (cached)."""
    key = (q, tuple(modulus) if modulus is not None else None)
    spec = _FIELDS.get(key)
    if spec is None:
        p = None
        for cand in range(2, q + 1):
            if is_prime(cand) and q % cand == 0:
                p = cand
                break
        if p is None:
            raise DomainError(f"q={q} is not a prime power")
        s = 0
        qq = q
        while qq % p == 0:
            qq //= p
            s += 1
        if qq != 1:
            raise DomainError(f"q={q} is not a prime power")
        spec = FieldSpec(p, s, modulus)
        _FIELDS[key] = spec
    return spec


class Fq:
    """A field element: a FieldSpec plus an integer encoding."""

    __slots__ = ("spec", "val")

    def __init__(self, spec: FieldSpec, val: int):
        if not 0 <= val < spec.q:
            raise DomainError(f"encoding {val} out of range for q={spec.q}")
        self.spec = spec
        self.val = val

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs: Iterable[int]) -> "Fq":
        return cls(spec, spec.encode(coeffs))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs_of(self.val)

    def _chk(self, other: "Fq") -> "Fq":
        if not isinstance(other, Fq):
            raise FieldMismatch(f"expected Fq, got {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldMismatch("elements from different fields")
        return other

    def __add__(self, other):
        return Fq(self.spec, self.spec.add(self.val, self._chk(other).val))

    def __sub__(self, other):
        return Fq(self.spec, self.spec.sub(self.val, self._chk(other).val))

    def __mul__(self, other):
        return Fq(self.spec, self.spec.mul(self.val, self._chk(other).val))

    def __truediv__(self, other):
        return Fq(self.spec, self.spec.div(self.val, self._chk(other).val))

    def __neg__(self):
        return Fq(self.spec, self.spec.neg(self.val))

    def __pow__(self, e: int):
        return Fq(self.spec, self.spec.pow(self.val, e))

    def __eq__(self, other):
        return (isinstance(other, Fq) and other.spec == self.spec
                and other.val == self.val)

    def __hash__(self):
        return hash((self.spec, self.val))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"Fq(q={self.spec.q}, {self.val})"


def fq_arith(a: Fq, b: Fq, op: str) -> Fq:
    """Dispatch one arithmetic operation; op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError(f"unknown op {op!r}")


def trace_map(x: Fq) -> int:
    """Trace to the prime field, returned as a residue in [0, p)."""
    return x.spec.trace(x.val)


def char_root(p: int, j: int) -> Cyc:
    """The root of unity w^j in exact cyclotomic coordinates."""
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    return Cyc.root(p, j)


def additive_character(spec: FieldSpec, x: int) -> Cyc:
    """w^(trace(x)) as an exact cyclotomic value."""
    return Cyc.root(spec.p, spec.trace(x))


def scalar_fraction(x) -> Fraction:
    """Coerce an exact scalar (int, Fraction, rational Cyc) to Fraction."""
    if isinstance(x, Cyc):
        return x.as_fraction()
    return Fraction(x)
