"""Noncommutative normal-ordering engine.

Operators are finite sums of words over eleven letters with coefficients in
the exact field of field.py. The letters, in normal order, are

    D < J[0,1] < J[0,2] < J[0,3] < J[1,2] < J[1,3] < J[2,3] < C[0] < C[1] < C[2] < C[3]

encoded as the integers 0..10. The four momenta and the mass symbol live in
the coefficient field, not in the alphabet. Normal form: every coefficient
stands to the left of its word and every word is sorted; moving a coefficient
through a letter uses g*f = f*g + (g, f) where (g, f) is the registry
derivation, and swapping adjacent letters uses the registry letter table.

The bracket (x, y) is the commutator x*y - y*x of normalized products; with
the scaling baked into the registry tables its structure constants are the
rational ones of the operator algebra, so no imaginary unit ever appears.

All rewriting is fueled: an Algebra counts steps per top-level operation and
raises RewriteBudgetExceeded past its budget. Letter words close under the
letter table (D/J/C span a subalgebra) and derivations only ever introduce
D/J letters, so rewriting terminates; the budget guards against bugs, not
against the mathematics.
"""

import threading
from fractions import Fraction

from .errors import RewriteBudgetExceeded
from .field import FE_ONE, FE_M, FieldElem, RationalFunction, has_toplevel_space
from .poly import Polynomial

# ---- letters -------------------------------------------------------------

LETTER_D = 0
_J_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_J_CODE = {pair: 1 + i for i, pair in enumerate(_J_PAIRS)}
N_LETTERS = 11

DEFAULT_BUDGET = 10**6
MIN_BUDGET = 10**3


def letter_J(mu, nu):
    """Letter code for J[mu, nu] with mu < nu."""
    return _J_CODE[(mu, nu)]


def letter_C(mu):
    return 7 + mu


def letter_name(code):
    if code == LETTER_D:
        return "D"
    if 1 <= code <= 6:
        mu, nu = _J_PAIRS[code - 1]
        return f"J[{mu},{nu}]"
    return f"C[{code - 7}]"


class NCExpr:
    """A normalized operator: map from sorted letter words to coefficients.

    Instances are produced by an Algebra and treated as immutable. The empty
    word holds the pure-coefficient part; the empty map is zero.
    """

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms
        self._hash = None

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            if s is None:
                out[w] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[w]
                else:
                    out[w] = s
        return NCExpr(self.alg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NCExpr(self.alg, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCExpr):
            return self.alg.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalars commute with nothing in general, but scale() multiplies
        # coefficients on the left, which is exactly what a left scalar does
        return self.scale(other)

    def scale(self, c):
        if not isinstance(c, FieldElem):
            c = FieldElem.const(Fraction(c))
        if c.is_zero():
            return NCExpr(self.alg, {})
        if c == FE_ONE:
            return self
        return NCExpr(self.alg, {w: c * f for w, f in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, NCExpr) and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            self._hash = h
        return h

    def __repr__(self):
        return f"NCExpr({self.pretty()})"

    def pretty(self):
        """Canonical text form; re-parses in the expression language."""
        if not self.terms:
            return "0"
        chunks = []
        for w in sorted(self.terms, key=lambda t: (-len(t), t)):
            c = self.terms[w]
            word_txt = "*".join(letter_name(l) for l in w)
            if not w:
                chunks.append(c.pretty())
                continue
            ctxt = c.pretty()
            if ctxt == "1":
                chunks.append(word_txt)
            elif ctxt == "-1":
                chunks.append("-" + word_txt)
            elif has_toplevel_space(ctxt):
                chunks.append(f"({ctxt})*{word_txt}")
            else:
                chunks.append(f"{ctxt}*{word_txt}")
        text = chunks[0]
        for part in chunks[1:]:
            if part.startswith("-"):
                text += " - " + part[1:]
            else:
                text += " + " + part
        return text


class Algebra:
    """Rewriting engine bound to a bracket registry.

    letter_table maps ordered letter pairs (a, b), a != b, to the bracket
    (a, b) as {word: Fraction} with words of length <= 1. momentum_rules maps
    (letter, mu) to the derivation (letter, P[mu]) and mass_rules maps a
    letter to (letter, M), both as {word: FieldElem}. The mass rules for the
    C letters are installed after construction (they are built with this very
    engine); until then any rewrite needing them raises KeyError, which no
    D/J-only computation ever does.
    """

    def __init__(self, letter_table, momentum_rules, mass_rules,
                 budget=DEFAULT_BUDGET, schedule_rng=None):
        self.letter_table = letter_table
        self.momentum_rules = momentum_rules
        self.mass_rules = mass_rules
        self.budget = budget
        self.schedule_rng = schedule_rng
        self._word_memo = {}
        self._deriv_memo = {}
        self._shift_memo = {}
        self._mono_memo = {}
        self._tl = threading.local()

    # ---- fuel ----

    def _enter(self):
        depth = getattr(self._tl, "depth", 0)
        if depth == 0:
            self._tl.steps = 0
        self._tl.depth = depth + 1

    def _exit(self):
        self._tl.depth -= 1

    def _tick(self):
        steps = getattr(self._tl, "steps", 0) + 1
        if steps > self.budget:
            raise RewriteBudgetExceeded(
                f"normalization exceeded the rewrite budget of {self.budget} steps"
            )
        self._tl.steps = steps

    # ---- constructors ----

    def zero(self):
        return NCExpr(self, {})

    def scalar(self, c):
        if not isinstance(c, FieldElem):
            c = FieldElem.const(Fraction(c))
        if c.is_zero():
            return NCExpr(self, {})
        return NCExpr(self, {(): c})

    def one(self):
        return self.scalar(FE_ONE)

    def momentum(self, mu):
        return self.scalar(FieldElem.momentum(mu))

    def mass(self):
        return self.scalar(FE_M)

    def letter(self, code):
        return NCExpr(self, {(code,): FE_ONE})

    def D(self):
        return self.letter(LETTER_D)

    def J(self, mu, nu):
        """J[mu, nu] for any index pair: antisymmetric, zero on the diagonal."""
        if mu == nu:
            return self.zero()
        if mu < nu:
            return self.letter(letter_J(mu, nu))
        return NCExpr(self, {(letter_J(nu, mu),): -FE_ONE})

    def C(self, mu):
        return self.letter(letter_C(mu))

    # ---- letter-word sorting ----

    def _sort_word(self, w):
        """Normal-order a pure letter word: {word: Fraction}."""
        memo = None if self.schedule_rng is not None else self._word_memo
        if memo is not None:
            hit = memo.get(w)
            if hit is not None:
                return hit
        inversions = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not inversions:
            out = {w: Fraction(1)}
            if memo is not None:
                memo[w] = out
            return out
        if self.schedule_rng is not None:
            i = self.schedule_rng.choice(inversions)
        else:
            i = inversions[0]
        self._tick()
        a, b = w[i], w[i + 1]
        out = {}
        swapped = w[:i] + (b, a) + w[i + 2:]
        for z, c in self._sort_word(swapped).items():
            out[z] = out.get(z, Fraction(0)) + c
        for mid, c in self.letter_table[(a, b)].items():
            corr = w[:i] + mid + w[i + 2:]
            for z, c2 in self._sort_word(corr).items():
                s = out.get(z, Fraction(0)) + c * c2
                if s:
                    out[z] = s
                elif z in out:
                    del out[z]
        out = {z: c for z, c in out.items() if c}
        if memo is not None:
            memo[w] = out
        return out

    # ---- derivation of a letter on a coefficient ----

    def _letter_single(self, a, kind, mu=0):
        """Registry rule (a, P[mu]) or (a, M) as {word: FieldElem}."""
        if kind == "P":
            return self.momentum_rules[(a, mu)]
        return self.mass_rules[a]

    def _deriv_mono(self, a, exps, with_m):
        """(a, monomial) for a unit-coefficient monomial, Leibniz left-to-right."""
        key = (a, exps, with_m)
        memo = None if self.schedule_rng is not None else self._mono_memo
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        factors = []
        for v in range(4):
            factors.extend([("P", v)] * exps[v])
        if with_m:
            factors.append(("M", 0))
        if self.schedule_rng is not None:
            self.schedule_rng.shuffle(factors)
        out = self._deriv_factors(a, tuple(factors))
        if memo is not None:
            memo[key] = out
        return out

    def _deriv_factors(self, a, factors):
        if not factors:
            return {}
        self._tick()
        kind, v = factors[0]
        rest = factors[1:]
        rule = self._letter_single(a, kind, v)
        out = {}
        if rest:
            rest_fe = _factors_coeff(rest)
            for w, c in self._raw_mul_terms(rule, {(): rest_fe}):
                _acc(out, w, c)
            tail = self._deriv_factors(a, rest)
            if tail:
                f0 = _factors_coeff(factors[:1])
                for w, c in tail.items():
                    _acc(out, w, f0 * c)
        else:
            for w, c in rule.items():
                _acc(out, w, c)
        return {w: c for w, c in out.items() if not c.is_zero()}

    def deriv(self, a, g):
        """(a, g) for letter a and coefficient g, as {word: FieldElem}."""
        if g.is_rational():
            return {}
        key = (a, g)
        memo = None if self.schedule_rng is not None else self._deriv_memo
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        A, B, d = g.as_quotient()
        num = {}
        for exps, c in A.terms.items():
            for w, h in self._deriv_mono(a, exps, False).items():
                _acc(num, w, h * c)
        for exps, c in B.terms.items():
            for w, h in self._deriv_mono(a, exps, True).items():
                _acc(num, w, h * c)
        num = {w: c for w, c in num.items() if not c.is_zero()}
        if d.is_const():
            out = num
            if d.as_const() != 1:
                s = 1 / d.as_const()
                out = {w: c * s for w, c in num.items()}
        else:
            dinv = FieldElem(RationalFunction(Polynomial.one(), d))
            # (a, N/d) = (a, N) * d^-1  +  N * (a, d^-1)
            #          = (a, N) * d^-1  -  (N * d^-1) * (a, d) * d^-1
            # and N * d^-1 is g itself, a pure left coefficient.
            out = {}
            for w, c in self._raw_mul_terms(num, {(): dinv}):
                _acc(out, w, c)
            poly_rule = {}
            for exps, c in d.terms.items():
                for w, h in self._deriv_mono(a, exps, False).items():
                    _acc(poly_rule, w, h * c)
            poly_rule = {w: c for w, c in poly_rule.items() if not c.is_zero()}
            if poly_rule:
                mid = {}
                for w, c in self._raw_mul_terms(poly_rule, {(): dinv}):
                    _acc(mid, w, c)
                for w, c in mid.items():
                    _acc(out, w, -(g * c))
            out = {w: c for w, c in out.items() if not c.is_zero()}
        if memo is not None:
            memo[key] = out
        return out

    # ---- coefficient movement and products ----

    def _shift(self, u, g):
        """u * g normalized, u a sorted word, g a coefficient: {word: FieldElem}."""
        if not u:
            return {u: g}
        if g.is_rational():
            return {u: g}
        key = (u, g)
        memo = None if self.schedule_rng is not None else self._shift_memo
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        self._tick()
        head, a = u[:-1], u[-1]
        out = {}
        for z, h in self._shift(head, g).items():
            for zw, c in self._sort_word(z + (a,)).items():
                _acc(out, zw, h * c)
        for zd, hd in self.deriv(a, g).items():
            for z2, h2 in self._shift(head, hd).items():
                for zw, c in self._sort_word(z2 + zd).items():
                    _acc(out, zw, h2 * c)
        out = {w: c for w, c in out.items() if not c.is_zero()}
        if memo is not None:
            memo[key] = out
        return out

    def _raw_mul_terms(self, xterms, yterms):
        """Product of two term maps, yielding (word, coeff) pairs (unmerged)."""
        for u, f in xterms.items():
            for w, g in yterms.items():
                if not u:
                    yield w, f * g
                    continue
                for z, h in self._shift(u, g).items():
                    if not w:
                        yield z, f * h
                    else:
                        for zw, c in self._sort_word(z + w).items():
                            yield zw, (f * h) * c

    # ---- public operations ----

    def mul(self, x, y):
        self._enter()
        try:
            out = {}
            for w, c in self._raw_mul_terms(x.terms, y.terms):
                _acc(out, w, c)
            return NCExpr(self, {w: c for w, c in out.items() if not c.is_zero()})
        finally:
            self._exit()

    def dot(self, x, y):
        """Symmetrized product (x*y + y*x) / 2."""
        half = Fraction(1, 2)
        return (self.mul(x, y) + self.mul(y, x)).scale(half)

    def bracket(self, x, y):
        """The scaled commutator; rational structure constants throughout."""
        return self.mul(x, y) - self.mul(y, x)

    def normalize(self, x):
        """Idempotent re-canonicalization of an expression's term map."""
        self._enter()
        try:
            out = {}
            for u, f in x.terms.items():
                for w, c in self._sort_word(u).items():
                    _acc(out, w, f * c)
            return NCExpr(self, {w: c for w, c in out.items() if not c.is_zero()})
        finally:
            self._exit()

    def is_zero(self, x):
        return self.normalize(x).is_zero()


def _acc(out, w, c):
    s = out.get(w)
    if s is None:
        out[w] = c
    else:
        out[w] = s + c


def _factors_coeff(factors):
    """The coefficient-field product of a ("P", v) / ("M", _) factor list."""
    exps = [0, 0, 0, 0]
    m = 0
    for kind, v in factors:
        if kind == "P":
            exps[v] += 1
        else:
            m += 1
    poly = Polynomial({tuple(exps): Fraction(1)})
    fe = FieldElem.from_poly(poly)
    for _ in range(m):
        fe = fe * FE_M
    return fe
