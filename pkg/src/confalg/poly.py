"""Exact polynomials in four commuting symbols.

The same class serves two roles: polynomials in the four momentum components
(the coefficient ring of the operator engine) and polynomials in the four
spacetime coordinates (the classical vector-field oracle). A polynomial is a
map from exponent vectors (e0, e1, e2, e3) to nonzero Fractions that are exact
rationals; the zero polynomial is the empty map.

Monomials are ordered graded-lex with symbol 0 most significant. "Leading"
below always means leading under that order.
"""

import math

from fractions import Fraction
from math import gcd as _igcd

NVARS = 4

_ZERO_EXP = (0, 0, 0, 0)


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial over the rationals in four symbols.

    Do not mutate the term dict after construction; hashes are cached.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms):
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash = None

    # ---- constructors ----

    @classmethod
    def zero(cls):
        return _P_ZERO

    @classmethod
    def one(cls):
        return _P_ONE

    @classmethod
    def const(cls, value):
        q = Fraction(value)
        if q == 0:
            return _P_ZERO
        return cls({_ZERO_EXP: q})

    @classmethod
    def var(cls, i, power=1):
        e = [0, 0, 0, 0]
        e[i] = power
        return cls({tuple(e): Fraction(1)})

    # ---- predicates ----

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def as_const(self):
        """The value of a constant polynomial (raises if not constant)."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and _ZERO_EXP in self.terms:
            return self.terms[_ZERO_EXP]
        raise ValueError("not a constant polynomial")

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v):
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def leading(self):
        """(exponent vector, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # ---- ring operations ----

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(out)

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return _P_ZERO
            return Polynomial({e: c * q for e, c in self.terms.items()})
        a, b = self.terms, other.terms
        if not a or not b:
            return _P_ZERO
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
                s = out.get(e)
                if s is None:
                    out[e] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = _P_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self, v):
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                e2 = list(e)
                e2[v] = k - 1
                out[tuple(e2)] = c * k
        return Polynomial(out)

    # ---- equality / hashing ----

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            self._hash = h
        return h

    def __repr__(self):
        return f"Polynomial({self.pretty()})"

    # ---- printing ----

    def pretty(self, names=("P[0]", "P[1]", "P[2]", "P[3]")):
        """Render in the expression language (monomials in descending order)."""
        if not self.terms:
            return "0"
        chunks = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for v in range(NVARS):
                if e[v] == 1:
                    factors.append(names[v])
                elif e[v] > 1:
                    factors.append(f"{names[v]}^{e[v]}")
            mag = abs(c)
            if not factors:
                body = _frac_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _frac_str(mag) + "*" + "*".join(factors)
            chunks.append(("-" if c < 0 else "+", body))
        sign, body = chunks[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text


def _frac_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_P_ZERO = Polynomial({})
_P_ONE = Polynomial({_ZERO_EXP: Fraction(1)})


#####################################################################
# exact division and gcd
#####################################################################

def exact_div(f, d):
    """f / d when d divides f exactly, else None.

    Single-divisor reduction under graded-lex: when d | f every reduction
    step finds a divisible leading term, so a failed step proves
    indivisibility.
    """
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return _P_ZERO
    ed, cd = d.leading()
    quot = {}
    rem = dict(f.terms)
    while rem:
        er = max(rem, key=_grlex_key)
        cr = rem[er]
        eq = tuple(er[i] - ed[i] for i in range(NVARS))
        if any(x < 0 for x in eq):
            return None
        cq = cr / cd
        quot[eq] = cq
        for e2, c2 in d.terms.items():
            e = tuple(eq[i] + e2[i] for i in range(NVARS))
            s = rem.get(e, Fraction(0)) - cq * c2
            if s:
                rem[e] = s
            elif e in rem:
                del rem[e]
    return Polynomial(quot)


def integer_content(p):
    """Positive rational c such that p / c has coprime integer coefficients.

    Zero polynomial has content 1 by convention.
    """
    if p.is_zero():
        return Fraction(1)
    num = 0
    den = 1
    for c in p.terms.values():
        num = _igcd(num, abs(c.numerator))
        den = den * c.denominator // _igcd(den, c.denominator)
    return Fraction(num, den)


def _int_primitive(p):
    """p scaled to coprime integer coefficients (zero stays zero)."""
    if p.is_zero():
        return p
    return p * (1 / integer_content(p))


def _positive_leading(p):
    if p.is_zero():
        return p
    _, c = p.leading()
    return -p if c < 0 else p


def _to_univar(p, v):
    """Dense coefficient list in symbol v; entries are polynomials without v."""
    deg = p.degree_in(v)
    coeffs = [dict() for _ in range(deg + 1)]
    for e, c in p.terms.items():
        e2 = list(e)
        k = e2[v]
        e2[v] = 0
        coeffs[k][tuple(e2)] = c
    return [Polynomial(d) for d in coeffs]


def _from_univar(coeffs, v):
    out = {}
    for k, poly in enumerate(coeffs):
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[v] = k
            out[tuple(e2)] = c
    return Polynomial(out)


def _trim(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(A, B):
    """Pseudo-remainder of univariate A by B (coefficient lists, deg A >= deg B).

    Computes the remainder of lb^(dA-dB+1) * A by B where lb is B's leading
    coefficient, so no coefficient division is ever needed.
    """
    dB = len(B) - 1
    lb = B[-1]
    R = list(A)
    for k in range(len(A) - 1 - dB, -1, -1):
        top = R[dB + k]
        R = [r * lb for r in R[: dB + k]]
        if not top.is_zero():
            for i in range(dB):
                R[i + k] = R[i + k] - top * B[i]
    return _trim(R)


def _content_of_list(coeffs):
    g = _P_ZERO
    for c in coeffs:
        g = _gcd_inner(g, c)
        if g == _P_ONE:
            return g
    return g


_SPECIALIZE_POINTS = ((2, 3, 5), (3, 5, 7), (5, 7, 11), (2, 9, 31))


def _eval_coeff(poly, v, point):
    """Value at an integer point of a coefficient polynomial free of v."""
    others = [u for u in range(NVARS) if u != v]
    sub = dict(zip(others, point))
    total = Fraction(0)
    for e, c in poly.terms.items():
        val = c
        for u in others:
            if e[u]:
                val = val * sub[u] ** e[u]
        total += val
    return total


def _univar_rem(a, b):
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db:
        k = len(r) - 1 - db
        q = r[-1] / lb
        for i in range(db):
            r[i + k] -= q * b[i]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _univar_primitive(r):
    """Divide a nonempty Fraction coefficient list by its rational content.

    Plain Euclid over the rationals doubles coefficient digits per step;
    stripping the content after every remainder keeps them near the size of
    the inputs, which is what makes the specialization check cheap.
    """
    num = 0
    den = 1
    for c in r:
        num = math.gcd(num, c.numerator)
        den = math.lcm(den, c.denominator)
    scale = Fraction(den, num)
    return [c * scale for c in r]


def _coprime_by_specialization(F, G, v):
    """True when the primitive parts F, G are provably coprime.

    Any common divisor h has positive degree in v (contents are already
    split off), and specializing the other symbols at a point where both
    leading coefficients survive preserves deg_v of every factor, so h maps
    to a common univariate divisor of positive degree. A degree-zero
    univariate gcd at such a point therefore certifies coprimality; a
    degenerate or unlucky point proves nothing and the next one is tried,
    and only when every point fails does the caller pay for the full
    remainder cascade.
    """
    for point in _SPECIALIZE_POINTS:
        a = [_eval_coeff(c, v, point) for c in F]
        b = [_eval_coeff(c, v, point) for c in G]
        if not a or not b or a[-1] == 0 or b[-1] == 0:
            continue
        if len(a) < len(b):
            a, b = b, a
        while b:
            a, b = b, _univar_rem(_univar_primitive(a), _univar_primitive(b))
        if len(a) == 1:
            return True
    return False


_GCD_MEMO = {}


def _monomial_gcd(f, g):
    """gcd when either side is a single term: min exponents, integer content."""
    mins = None
    ci = 0
    for p in (f, g):
        for e, cc in p.terms.items():
            ci = _igcd(ci, abs(cc.numerator))
            mins = e if mins is None else tuple(map(min, mins, e))
    return Polynomial({mins: Fraction(ci)})


def _gcd_inner(f, g):
    """gcd of integer-coefficient polynomials, integer content included.

    Returns the positive-leading primitive-times-integer gcd. Recursive
    subresultant PRS: pick the first symbol that occurs, split content off
    the univariate coefficient lists, run the Euclidean loop on
    pseudo-remainders, dividing each one by the factor the subresultant
    theory guarantees (so the loop itself never computes a content).
    Results are memoized globally; the same denominators show up over and
    over once coefficient fields get rationalized.
    """
    if f.is_zero():
        return _positive_leading(g)
    if g.is_zero():
        return _positive_leading(f)
    key = (f, g)
    hit = _GCD_MEMO.get(key)
    if hit is not None:
        return hit
    if len(f.terms) == 1 or len(g.terms) == 1:
        out = _monomial_gcd(f, g)
        _GCD_MEMO[key] = out
        _GCD_MEMO[(g, f)] = out
        return out
    used = [v for v in range(NVARS) if f.degree_in(v) > 0 or g.degree_in(v) > 0]
    if not used:
        a = abs(f.as_const())
        b = abs(g.as_const())
        out = Polynomial.const(Fraction(_igcd(a.numerator, b.numerator)))
        _GCD_MEMO[key] = out
        return out
    v = used[0]
    F = _to_univar(f, v)
    G = _to_univar(g, v)
    cf = _content_of_list(F)
    cg = _content_of_list(G)
    ppF = F if cf == _P_ONE else [exact_div(c, cf) for c in F]
    ppG = G if cg == _P_ONE else [exact_div(c, cg) for c in G]
    c = _gcd_inner(cf, cg)
    if _coprime_by_specialization(ppF, ppG, v):
        _GCD_MEMO[key] = c
        _GCD_MEMO[(g, f)] = c
        return c
    A, B = (ppF, ppG) if len(ppF) >= len(ppG) else (ppG, ppF)
    gk = _P_ONE
    hk = _P_ONE
    while B:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if R:
            beta = gk * hk**delta
            if beta != _P_ONE:
                divided = [exact_div(x, beta) for x in R]
                if None in divided:
                    # the known factor should always divide; fall back to a
                    # plain content strip rather than propagate a bad gcd
                    cr = _content_of_list(R)
                    if cr != _P_ONE:
                        R = [exact_div(x, cr) for x in R]
                else:
                    R = divided
        lead = B[-1]
        A, B = B, R
        gk = lead
        if delta == 1:
            hk = gk
        elif delta > 1:
            nhk = exact_div(gk**delta, hk ** (delta - 1))
            hk = nhk if nhk is not None else _P_ONE
    cA = _content_of_list(A)
    if cA != _P_ONE:
        A = [exact_div(x, cA) for x in A]
    gcd_pp = _from_univar(A, v)
    out = _positive_leading(_int_primitive(gcd_pp) * c)
    _GCD_MEMO[key] = out
    _GCD_MEMO[(g, f)] = out
    return out


def poly_gcd(f, g):
    """Primitive positive-leading gcd over the rationals.

    Rational content is discarded: the result is an integer-primitive
    polynomial with positive leading coefficient (1 for coprime inputs).
    """
    if f.is_zero() and g.is_zero():
        return _P_ZERO
    fi = _int_primitive(f)
    gi = _int_primitive(g)
    out = _gcd_inner(fi, gi)
    return _positive_leading(_int_primitive(out))
