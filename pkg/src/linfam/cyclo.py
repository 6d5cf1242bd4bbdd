"""Exact arithmetic in the cyclotomic field Q(w), w a primitive p-th root of unity.

Values are coefficient vectors over the power basis 1, w, ..., w^(p-2); the
relation 1 + w + ... + w^(p-1) = 0 eliminates w^(p-1), so the representation
is unique.  Coefficients are exact (int or Fraction; Python arithmetic mixes
the two transparently).  For p = 2 the field degenerates to Q with w = -1.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, InexactComparison


class Cyc:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        self.p = p
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != p - 1:
            raise DomainError(f"need {p - 1} coefficients for p={p}")

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "Cyc":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_rational(cls, p: int, x) -> "Cyc":
        return cls(p, (x,) + (0,) * (p - 2))

    @classmethod
    def root(cls, p: int, j: int) -> "Cyc":
        """w^j, reduced to the power basis."""
        j %= p
        if j == p - 1:
            return cls(p, (-1,) * (p - 1))
        c = [0] * (p - 1)
        c[j] = 1
        return cls(p, c)

    @classmethod
    def from_root_counts(cls, p: int, counts) -> "Cyc":
        """sum_j counts[j] * w^j for a length-p vector of scalars."""
        if len(counts) != p:
            raise DomainError("need one count per residue")
        top = counts[p - 1]
        return cls(p, tuple(counts[j] - top for j in range(p - 1)))

    # helpers --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.p != self.p:
                raise DomainError("mixed cyclotomic orders")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc.from_rational(self.p, other)
        return None

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.p, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Cyc(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.p, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    acc[(i + j) % p] += a * b
        top = acc[p - 1]
        return Cyc(p, tuple(acc[k] - top for k in range(p - 1)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            return Cyc(self.p, tuple(a / other for a in self.coeffs))
        return NotImplemented

    def conj(self) -> "Cyc":
        """Complex conjugate: w^j -> w^(p-j)."""
        p = self.p
        acc = [0] * p
        for j, a in enumerate(self.coeffs):
            acc[(p - j) % p] += a
        top = acc[p - 1]
        return Cyc(p, tuple(acc[k] - top for k in range(p - 1)))

    def abs2(self) -> "Cyc":
        """|z|^2, a totally real cyclotomic value."""
        return self * self.conj()

    # predicates and conversion -------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    __bool__ = lambda self: not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"not rational: {self!r}")
        return Fraction(self.coeffs[0])

    def is_real(self) -> bool:
        return self == self.conj()

    def to_complex(self) -> complex:
        w = complex(math.cos(2 * math.pi / self.p), math.sin(2 * math.pi / self.p))
        z = 0j
        pw = 1 + 0j
        for a in self.coeffs:
            z += float(a) * pw
            pw *= w
        return z

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"Cyc(p={self.p}, {list(self.coeffs)})"


def real_le(a, b) -> bool:
    """Exact a <= b for real values (Cyc, Fraction, or int).

    Rational differences are compared exactly.  Irrational real cyclotomics
    (possible only for p >= 5) fall back to floating evaluation with a
    safety margin; an inconclusive comparison raises rather than guesses.
    """
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a <= b
    p = a.p if isinstance(a, Cyc) else b.p
    ca = a if isinstance(a, Cyc) else Cyc.from_rational(p, a)
    cb = b if isinstance(b, Cyc) else Cyc.from_rational(p, b)
    diff = cb - ca
    if diff.is_rational():
        return diff.as_fraction() >= 0
    if not diff.is_real():
        raise DomainError("ordering needs real values")
    val = diff.to_complex().real
    if abs(val) < 1e-9:
        raise InexactComparison("difference too close to zero to settle in floats")
    return val > 0
