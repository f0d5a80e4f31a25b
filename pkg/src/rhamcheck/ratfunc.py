"""Rational functions on a simplex, with a positivity certificate.

A RationalFunc is a pair of polynomials num/den in the affine simplex
coordinates t1..tn.  Equality is decided by cross-multiplication, so no
gcd machinery is needed; normalization only strips content, makes the
denominator monic, and cancels exact divisions.

Denominators are admitted for quadrature when they pass a Polya-style
certificate: rewritten in barycentric coordinates and multiplied by a
power of (u0+...+un), every monomial of the right degree must appear
with a strictly positive coefficient.  That is sufficient for strict
positivity on the closed simplex.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import DenominatorVanishes
from .poly import Polynomial

CERTIFICATE_POWER_BOUND = 6


class RationalFunc:
    """num/den with polynomial entries over a shared variable tuple."""

    __slots__ = ("num", "den", "_certified")

    def __init__(self, num, den=None, normalize=True):
        if den is None:
            den = Polynomial.constant(num.variables, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.variables != den.variables:
            raise ValueError("numerator and denominator over different variables")
        self.num = num
        self.den = den
        self._certified = None
        if normalize:
            self._normalize()

    def _normalize(self):
        if self.num.is_zero():
            self.den = Polynomial.constant(self.num.variables, 1)
            return
        if not self.den.is_constant():
            quot = self.num.divide_exact(self.den)
            if quot is not None:
                self.num = quot
                self.den = Polynomial.constant(self.num.variables, 1)
                return
        _, lc = self.den.leading_term()
        if lc != 1:
            inv = Fraction(1) / lc
            self.num = self.num.scale(inv)
            self.den = self.den.scale(inv)

    @classmethod
    def constant(cls, variables, value):
        return cls(Polynomial.constant(variables, value))

    @classmethod
    def from_polynomial(cls, poly):
        return cls(poly)

    @property
    def variables(self):
        return self.num.variables

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_polynomial(self):
        if not self.is_polynomial():
            return None
        return self.num.scale(Fraction(1) / self.den.constant_value())

    def __add__(self, other):
        other = self._coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        # denominators are usually powers of the same factors; dividing one
        # into the other keeps sums from blowing up quadratically
        quot = other.den.divide_exact(self.den)
        if quot is not None:
            return RationalFunc(self.num * quot + other.num, other.den)
        quot = self.den.divide_exact(other.den)
        if quot is not None:
            return RationalFunc(self.num + other.num * quot, self.den)
        return RationalFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, n):
        if n < 0:
            return RationalFunc(self.den, self.num) ** (-n)
        return RationalFunc(self.num**n, self.den**n)

    def scale(self, scalar):
        return RationalFunc(self.num.scale(scalar), self.den, normalize=False)

    def _coerce(self, other):
        if isinstance(other, RationalFunc):
            if other.variables != self.variables:
                raise ValueError("rational functions over different variables")
            return other
        if isinstance(other, Polynomial):
            return RationalFunc(other)
        return RationalFunc.constant(self.variables, other)

    def __eq__(self, other):
        if not isinstance(other, (RationalFunc, Polynomial, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return (self.num * other.den) == (other.num * self.den)

    def partial(self, index):
        """Quotient rule derivative with respect to variable `index`."""
        return RationalFunc(
            self.num.partial(index) * self.den - self.num * self.den.partial(index),
            self.den * self.den,
        )

    def substitute(self, values):
        """Substitute polynomials for the variables (e.g. affine maps)."""
        return RationalFunc(self.num.substitute(values), self.den.substitute(values))

    def eval_float(self, point):
        den = self.den.eval_float(point)
        if den == 0.0:
            raise ZeroDivisionError("denominator vanished at quadrature node")
        return self.num.eval_float(point) / den

    def eval_fraction(self, point):
        den = self.den.eval_fraction(point)
        if den == 0:
            raise ZeroDivisionError("denominator vanished at evaluation point")
        return self.num.eval_fraction(point) / den

    def certify_denominator(self, power_bound=CERTIFICATE_POWER_BOUND):
        """Check the positivity certificate; raises DenominatorVanishes."""
        if self._certified:
            return True
        if self.is_polynomial():
            self._certified = True
            return True
        if not _positive_on_simplex(self.den, power_bound):
            raise DenominatorVanishes(
                "no positivity certificate for denominator %s" % self.den
            )
        self._certified = True
        return True

    def __str__(self):
        if self.is_polynomial():
            return str(self.as_polynomial())
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = "(%s)" % num
        return "%s/(%s)" % (num, self.den)

    __repr__ = __str__


def _barycentric_homogenization(poly):
    """Coefficients of the degree-D homogenization in u0..un, t_i = u_i."""
    n = len(poly.variables)
    degree = poly.total_degree()
    out = {}
    for e, c in poly.terms.items():
        deficit = degree - sum(e)
        # multiply by (u0 + ... + un)^deficit and collect monomials in u
        for combo in combinations_with_replacement(range(n + 1), deficit):
            mult = _multinomial(combo, n + 1)
            u = [0] * (n + 1)
            u[1:] = list(e)
            for i in combo:
                u[i] += 1
            key = tuple(u)
            out[key] = out.get(key, Fraction(0)) + c * mult
    return degree, {k: v for k, v in out.items() if v}


def _multinomial(combo, nslots):
    counts = [0] * nslots
    for i in combo:
        counts[i] += 1
    total = len(combo)
    value = 1
    remaining = total
    from math import comb

    for c in counts:
        value *= comb(remaining, c)
        remaining -= c
    return value


def _positive_on_simplex(poly, power_bound):
    """Polya certificate: (sum u)^r * hom(poly) has full positive support."""
    nvars = len(poly.variables)
    degree, hom = _barycentric_homogenization(poly)
    if not hom:
        return False
    for r in range(power_bound + 1):
        if r > 0:
            bumped = {}
            for u, c in hom.items():
                for i in range(nvars + 1):
                    key = u[:i] + (u[i] + 1,) + u[i + 1 :]
                    bumped[key] = bumped.get(key, Fraction(0)) + c
            hom = {k: v for k, v in bumped.items() if v}
            degree += 1
        expected = _count_monomials(nvars + 1, degree)
        if len(hom) == expected and all(c > 0 for c in hom.values()):
            return True
    return False


def _count_monomials(nslots, degree):
    from math import comb

    return comb(degree + nslots - 1, nslots - 1)
