"""Shared evaluation of differential-form text and index-set sign rules.

Form text reuses the polynomial expression grammar; a name `d<var>` is
read as the basis differential of a declared variable, `^` between
differentials is the wedge, and `*` mixes scalars into forms:

    x*dy - y*dx        2/(1 + t1^2) * dt1        t1*t2 * dt1^dt2
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .poly import Polynomial
from .ratfunc import RationalFunc


def insert_index(i, S):
    """(sign, S u {i}) for dx_i ^ dx_S; sign 0 when i already occurs."""
    if i in S:
        return 0, None
    pos = sum(1 for s in S if s < i)
    return (-1) ** pos, tuple(sorted(S + (i,)))


def merge_sign(S1, S2):
    """Sign of sorting the concatenation of two disjoint sorted index sets."""
    inversions = sum(1 for a in S1 for b in S2 if a > b)
    return (-1) ** inversions


class _FormValue:
    """Intermediate value: homogeneous form as dict S -> RationalFunc."""

    def __init__(self, degree, terms):
        self.degree = degree
        self.terms = terms


def _wedge_terms(t1, d1, t2, d2):
    out = {}
    for S1, c1 in t1.items():
        for S2, c2 in t2.items():
            if set(S1) & set(S2):
                continue
            sign = merge_sign(S1, S2)
            S = tuple(sorted(S1 + S2))
            value = (c1 * c2).scale(sign)
            if S in out:
                out[S] = out[S] + value
            else:
                out[S] = value
    return _FormValue(d1 + d2, {S: v for S, v in out.items() if not v.is_zero()})


def _eval(node, variables):
    kind = node[0]
    if kind == "num":
        return RationalFunc.constant(variables, node[1])
    if kind == "var":
        name = node[1]
        if name in variables:
            return RationalFunc(Polynomial.variable(variables, variables.index(name)))
        if name.startswith("d") and name[1:] in variables:
            idx = variables.index(name[1:])
            return _FormValue(1, {(idx,): RationalFunc.constant(variables, 1)})
        raise ParseError("unknown name %r in form text" % name)
    if kind == "neg":
        v = _eval(node[1], variables)
        if isinstance(v, _FormValue):
            return _FormValue(v.degree, {S: -c for S, c in v.terms.items()})
        return -v
    if kind in ("+", "-"):
        a = _eval(node[1], variables)
        b = _eval(node[2], variables)
        sign = 1 if kind == "+" else -1
        if isinstance(a, _FormValue) or isinstance(b, _FormValue):
            a = _promote(a, variables)
            b = _promote(b, variables)
            if a.degree != b.degree and a.terms and b.terms:
                raise ParseError("cannot add forms of different degree")
            terms = dict(a.terms)
            for S, c in b.terms.items():
                c = c.scale(sign)
                terms[S] = terms[S] + c if S in terms else c
            degree = a.degree if a.terms or not b.terms else b.degree
            return _FormValue(degree, {S: c for S, c in terms.items() if not c.is_zero()})
        return a + b.scale(sign)
    if kind == "^":
        left = _eval(node[1], variables)
        if isinstance(left, _FormValue):
            right = _eval(node[2], variables)
            if not isinstance(right, _FormValue):
                raise ParseError("'^' after a form must wedge another form")
            return _wedge_terms(left.terms, left.degree, right.terms, right.degree)
        exponent = node[2]
        if exponent[0] != "num":
            raise ParseError("exponent must be a literal integer")
        return left ** exponent[1]
    if kind == "*":
        a = _eval(node[1], variables)
        b = _eval(node[2], variables)
        if isinstance(a, _FormValue) and isinstance(b, _FormValue):
            return _wedge_terms(a.terms, a.degree, b.terms, b.degree)
        if isinstance(a, _FormValue):
            return _FormValue(a.degree, {S: c * b for S, c in a.terms.items()})
        if isinstance(b, _FormValue):
            return _FormValue(b.degree, {S: a * c for S, c in b.terms.items()})
        return a * b
    if kind == "/":
        a = _eval(node[1], variables)
        b = _eval(node[2], variables)
        if isinstance(b, _FormValue):
            raise ParseError("cannot divide by a form")
        if isinstance(a, _FormValue):
            return _FormValue(a.degree, {S: c / b for S, c in a.terms.items()})
        return a / b
    raise ParseError("bad expression node %r" % (node,))


def _promote(value, variables):
    if isinstance(value, _FormValue):
        return value
    if value.is_zero():
        return _FormValue(0, {})
    return _FormValue(0, {(): value})


def eval_form_ast(node, variables, rational=True):
    """Evaluate parsed form text to (degree, terms dict S -> coefficient).

    With rational=False the coefficients must be polynomial and come back
    as Polynomial values; otherwise they are RationalFunc.
    """
    variables = tuple(variables)
    value = _promote(_eval(node, variables), variables)
    if rational:
        return value.degree, dict(value.terms)
    terms = {}
    for S, c in value.terms.items():
        poly = c.as_polynomial()
        if poly is None:
            raise ParseError("rational coefficient %s in a polynomial-only context" % c)
        terms[S] = poly
    return value.degree, terms
