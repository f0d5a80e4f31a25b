"""Multivariate polynomial arithmetic over exact rationals.

Polynomials are stored as a dictionary from exponent vectors to Fraction
coefficients, under a fixed degree-reverse-lexicographic term order.  On
top of the arithmetic this module provides Buchberger's algorithm (with
the product and chain criteria), normal forms modulo a Groebner basis,
and the text syntax used by scenario files and reports:

    x^2 + y^2 - 1      (1 - t1^2)/2      3*x*y - 1/2

The order is degree-compatible, so reduction never raises total degree;
the truncated de Rham machinery relies on that.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError, ResourceBudgetExceeded

DEFAULT_PAIR_BUDGET = 20000


def drl_key(expts):
    """Sort key for degrevlex: bigger key means bigger monomial."""
    return (sum(expts), tuple(-e for e in reversed(expts)))


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a, b):
    """True iff monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """An exact multivariate polynomial over a fixed ordered variable tuple."""

    __slots__ = ("variables", "terms", "_compiled")

    def __init__(self, variables, terms):
        self._compiled = None
        self.variables = tuple(variables)
        clean = {}
        nvars = len(self.variables)
        for expts, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if len(expts) != nvars:
                raise ValueError("exponent vector length != number of variables")
            clean[tuple(expts)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, value):
        value = Fraction(value)
        if value == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, index):
        expts = [0] * len(variables)
        expts[index] = 1
        return cls(variables, {tuple(expts): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_term(self):
        """(exponents, coefficient) of the degrevlex-largest term."""
        expts = max(self.terms, key=drl_key)
        return expts, self.terms[expts]

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def _check(self, other):
        if self.variables != other.variables:
            raise ValueError("polynomials over different variable tuples")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = monomial_mul(e1, e2)
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.variables, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return Polynomial.zero(self.variables)
        return Polynomial(self.variables, {e: c * scalar for e, c in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self):
        if self.is_zero():
            return self
        _, lc = self.leading_term()
        return self.scale(Fraction(1) / lc)

    def partial(self, index):
        """Termwise partial derivative with respect to variable `index`."""
        terms = {}
        for e, c in self.terms.items():
            k = e[index]
            if k == 0:
                continue
            de = list(e)
            de[index] = k - 1
            de = tuple(de)
            terms[de] = terms.get(de, Fraction(0)) + c * k
        return Polynomial(self.variables, terms)

    def substitute(self, values):
        """Substitute values[i] (a Polynomial) for variable i."""
        if len(values) != len(self.variables):
            raise ValueError("substitution arity mismatch")
        if not values:
            return self
        target_vars = values[0].variables
        result = Polynomial.zero(target_vars)
        powers = [{0: Polynomial.constant(target_vars, 1)} for _ in values]
        for e, c in sorted(self.terms.items()):
            term = Polynomial.constant(target_vars, c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if k not in powers[i]:
                    kk = max(j for j in powers[i] if j <= k)
                    acc = powers[i][kk]
                    while kk < k:
                        acc = acc * values[i]
                        kk += 1
                        powers[i][kk] = acc
                term = term * powers[i][k]
            result = result + term
        return result

    def eval_fraction(self, point):
        """Exact evaluation at a tuple of Fractions."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def eval_float(self, point):
        """Float evaluation at a tuple of floats, in a fixed term order."""
        if self._compiled is None:
            self._compiled = [
                (float(self.terms[e]), e) for e in sorted(self.terms, key=drl_key)
            ]
        total = 0.0
        for v, e in self._compiled:
            for x, k in zip(point, e):
                if k == 1:
                    v *= x
                elif k:
                    v *= x**k
            total += v
        return total

    def divide_exact(self, divisor):
        """Quotient self/divisor if the division is exact, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        self._check(divisor)
        lead_e, lead_c = divisor.leading_term()
        rem = self
        quot = Polynomial.zero(self.variables)
        while not rem.is_zero():
            re, rc = rem.leading_term()
            if not monomial_divides(lead_e, re):
                return None
            fac = Polynomial(self.variables, {monomial_div(re, lead_e): rc / lead_c})
            quot = quot + fac
            rem = rem - fac * divisor
        return quot

    def sorted_terms(self):
        """Terms in descending degrevlex order."""
        return sorted(self.terms.items(), key=lambda item: drl_key(item[0]), reverse=True)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.variables, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append("%s^%d" % (name, k))
            if not factors:
                body = _fmt_fraction(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = _fmt_fraction(abs(c)) + "*" + "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    __repr__ = __str__


def _fmt_fraction(q):
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


# ---------------------------------------------------------------------------
# division and Buchberger


def normal_form(f, basis):
    """Remainder of f under multivariate division by `basis`.

    When `basis` is a Groebner basis the remainder is the unique normal
    form; it vanishes exactly when f lies in the ideal.  Degrevlex is
    degree-compatible, so the remainder never has larger total degree
    than f.
    """
    rem_terms = {}
    h = f
    leads = [(g.leading_term()[0], g.leading_term()[1], g) for g in basis if not g.is_zero()]
    while not h.is_zero():
        he, hc = h.leading_term()
        for ge, gc, g in leads:
            if monomial_divides(ge, he):
                fac = Polynomial(h.variables, {monomial_div(he, ge): hc / gc})
                h = h - fac * g
                break
        else:
            rem_terms[he] = rem_terms.get(he, Fraction(0)) + hc
            h = h - Polynomial(h.variables, {he: hc})
    return Polynomial(f.variables, rem_terms)


def s_polynomial(f, g):
    fe, fc = f.leading_term()
    ge, gc = g.leading_term()
    lcm = monomial_lcm(fe, ge)
    mf = Polynomial(f.variables, {monomial_div(lcm, fe): Fraction(1) / fc})
    mg = Polynomial(f.variables, {monomial_div(lcm, ge): Fraction(1) / gc})
    return mf * f - mg * g


def groebner_basis(generators, pair_budget=DEFAULT_PAIR_BUDGET):
    """Reduced degrevlex Groebner basis of the ideal the generators span.

    Buchberger with the product criterion and the chain criterion; no
    F4/F5 machinery, desk-scale ideals only.  Raises
    ResourceBudgetExceeded when the pair queue outgrows `pair_budget`.
    """
    gens = [g for g in generators]
    if any(g.is_zero() for g in gens):
        raise ValueError("zero generator handed to groebner_basis")
    basis = [g.monic() for g in gens]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done = set()

    def lm(i):
        return basis[i].leading_term()[0]

    processed = 0
    while pairs:
        processed += 1
        if processed > pair_budget or len(pairs) > pair_budget:
            raise ResourceBudgetExceeded(
                "Groebner pair queue exceeded budget of %d" % pair_budget
            )
        i, j = min(pairs, key=lambda p: drl_key(monomial_lcm(lm(p[0]), lm(p[1]))))
        pairs.discard((i, j))
        done.add((i, j))
        lcm = monomial_lcm(lm(i), lm(j))
        # product criterion: coprime leading monomials reduce to zero
        if lcm == monomial_mul(lm(i), lm(j)):
            continue
        # chain criterion: a third element whose lm divides the lcm and whose
        # pairs with both i and j were already treated
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if monomial_divides(lm(k), lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        rem = normal_form(s_polynomial(basis[i], basis[j]), basis)
        if rem.is_zero():
            continue
        rem = rem.monic()
        new_index = len(basis)
        basis.append(rem)
        for k in range(new_index):
            pairs.add((k, new_index))

    reduced = _reduce_basis(basis)
    for g in gens:
        if not normal_form(g, reduced).is_zero():
            raise AssertionError("input generator does not reduce to zero: %s" % g)
    return reduced


def _reduce_basis(basis):
    """Minimalize and tail-reduce a Groebner basis (unique reduced form)."""
    # minimal set: drop any element whose lm is divisible by another kept lm
    minimal = []
    for i, g in enumerate(basis):
        ge = g.leading_term()[0]
        divisible = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            he = h.leading_term()[0]
            if monomial_divides(he, ge) and (he != ge or j < i):
                divisible = True
                break
        if not divisible:
            minimal.append(g)
    # tail reduction until stable
    changed = True
    while changed:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1 :]
            red = normal_form(minimal[i], others)
            if red.is_zero():
                minimal.pop(i)
                changed = True
                break
            red = red.monic()
            if red != minimal[i]:
                minimal[i] = red
                changed = True
    minimal.sort(key=lambda g: drl_key(g.leading_term()[0]))
    return minimal


# ---------------------------------------------------------------------------
# text syntax


def tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
            continue
        raise ParseError("unexpected character %r in %r" % (ch, text))
    return tokens


class _Parser:
    """Recursive-descent parser for the shared expression grammar."""

    def __init__(self, tokens, text):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError("trailing input in %r" % self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exponent = self.power()  # right-associative
            node = ("^", node, exponent)
        return node

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return ("num", value)
        if kind == "name":
            return ("var", value)
        if kind == "(":
            node = self.expr()
            if self.take()[0] != ")":
                raise ParseError("unbalanced parentheses in %r" % self.text)
            return node
        raise ParseError("unexpected token %r in %r" % (value, self.text))


def parse_ast(text):
    return _Parser(tokenize(text), text).parse()


def ast_to_polynomial(node, variables):
    """Evaluate a parsed expression to a Polynomial; '/' needs constant divisor."""
    kind = node[0]
    if kind == "num":
        return Polynomial.constant(variables, node[1])
    if kind == "var":
        name = node[1]
        if name not in variables:
            raise ParseError("unknown variable %r" % name)
        return Polynomial.variable(variables, variables.index(name))
    if kind == "neg":
        return -ast_to_polynomial(node[1], variables)
    if kind == "+":
        return ast_to_polynomial(node[1], variables) + ast_to_polynomial(node[2], variables)
    if kind == "-":
        return ast_to_polynomial(node[1], variables) - ast_to_polynomial(node[2], variables)
    if kind == "*":
        return ast_to_polynomial(node[1], variables) * ast_to_polynomial(node[2], variables)
    if kind == "/":
        denom = ast_to_polynomial(node[2], variables)
        if not denom.is_constant() or denom.is_zero():
            raise ParseError("polynomial syntax only divides by nonzero constants")
        return ast_to_polynomial(node[1], variables).scale(
            Fraction(1) / denom.constant_value()
        )
    if kind == "^":
        exponent = node[2]
        if exponent[0] == "neg" and exponent[1][0] == "num":
            raise ParseError("negative exponent")
        if exponent[0] != "num":
            raise ParseError("exponent must be a literal integer")
        return ast_to_polynomial(node[1], variables) ** exponent[1]
    raise ParseError("bad expression node %r" % (node,))


def parse_polynomial(text, variables):
    """Parse the shared text syntax, e.g. 'x^2 + y^2 - 1', into a Polynomial."""
    variables = tuple(variables)
    return ast_to_polynomial(parse_ast(text), variables)
