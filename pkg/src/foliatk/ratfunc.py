"""Exact rational functions as reduced pairs of polynomials.

No multivariate gcd is attempted: a quotient is stored with a monic
denominator, simplified only when the denominator divides the numerator
exactly.  Equality is decided by cross-multiplication, so chains of
arithmetic stay exact even when unreduced.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import VariableSetError
from .poly import GREVLEX, Polynomial, VariableSet


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.constant(num.varset, 1)
        if den.varset != num.varset:
            raise VariableSetError("numerator and denominator on different charts")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Polynomial.constant(num.varset, 1)
        else:
            q = num.try_divide_exact(den)
            if q is not None:
                num, den = q, Polynomial.constant(num.varset, 1)
            lc = den.leading(GREVLEX.key_function(den.varset))[1]
            if lc != 1:
                inv = Fraction(1) / lc
                num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("RationalFunction is immutable")

    @property
    def varset(self) -> VariableSet:
        return self.num.varset

    @classmethod
    def zero(cls, varset: VariableSet) -> "RationalFunction":
        return cls(Polynomial.zero(varset))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == Polynomial.constant(self.varset, 1)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction(Polynomial.constant(self.varset, other))

    def __add__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def diff(self, name: str) -> "RationalFunction":
        return RationalFunction(
            self.num.diff(name) * self.den - self.num * self.den.diff(name),
            self.den * self.den,
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # hash only structurally-normalized data; equal-but-unreduced values
        # are avoided by never using RationalFunction as a dict key downstream
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"
