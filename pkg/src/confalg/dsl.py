"""Expression language for operators and identities.

The grammar (one expression per string; whitespace free-form):

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "." | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" INT)?
    primary := INT
             | NAME ("[" index ("," index)* "]")?
             | "(" expr ")"
             | "br" "(" expr "," expr ")"
             | "sum" "(" NAME ("," NAME)* ":" expr ")"
    index   := INT | NAME

"*" is the operator product, "." the symmetrized half-anticommutator,
br(a, b) the scaled commutator. All four infix factors associate left and
share one precedence level; "^" takes a positive integer and binds tighter
than unary minus. Rational literals are spelled as quotients (1/2).

Indices are written lower everywhere; raising is an explicit eta
contraction. An index variable is a name: single-letter names range over
the spatial values 1..3, longer names over 0..3. sum(...) binds its
variables over those ranges; every other variable must be supplied by the
caller's assignment.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ArityError,
    DslSyntaxError,
    IndexRangeError,
    NonCoefficientDivisor,
    UnboundIndex,
    UnknownSymbol,
)

__all__ = [
    "Num", "Sym", "Add", "Sub", "Neg", "Mul", "Dot", "Div", "Pow", "Br",
    "Sum", "parse", "elaborate", "ast_pretty", "index_range", "SYMBOL_ARITY",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str
    indices: tuple  # ints and/or index-variable names


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Dot:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Br:
    left: object
    right: object


@dataclass(frozen=True)
class Sum:
    names: tuple
    body: object


# Vocabulary: name -> index count. Sigma and Xi take spatial indices only;
# everything else indexed ranges over 0..3.
SYMBOL_ARITY = {
    "P": 1,
    "J": 2,
    "D": 0,
    "C": 1,
    "M": 0,
    "X": 1,
    "S": 1,
    "Stensor": 2,
    "Sigma": 1,
    "Xi": 1,
    "Tau": 0,
    "V": 1,
    "eta": 2,
    "eps": 4,
}

_SPATIAL_SYMBOLS = frozenset({"Sigma", "Xi"})


def index_range(name):
    """Value range of an index variable: single-letter names are spatial."""
    return (1, 2, 3) if len(name) == 1 else (0, 1, 2, 3)


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_PUNCT = "+-*./^()[],:"


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "name", or the punctuation character itself
    text: str
    line: int
    col: int


def _tokenize(src):
    out = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(_Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(_Token("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            out.append(_Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    out.append(_Token("end", "", line, col))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind, what):
        t = self.peek()
        if t.kind != kind:
            shown = t.text if t.kind != "end" else "end of input"
            raise DslSyntaxError(f"expected {what}, found {shown!r}", t.line, t.col)
        return self.next()

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind in ("*", ".", "/"):
            op = self.next().kind
            rhs = self.parse_unary()
            if op == "*":
                node = Mul(node, rhs)
            elif op == ".":
                node = Dot(node, rhs)
            else:
                node = Div(node, rhs)
        return node

    def parse_unary(self):
        if self.peek().kind == "-":
            self.next()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_primary()
        if self.peek().kind == "^":
            caret = self.next()
            t = self.expect("int", "a positive integer exponent")
            n = int(t.text)
            if n < 1:
                raise DslSyntaxError(
                    "exponent must be a positive integer", caret.line, caret.col
                )
            node = Pow(node, n)
        return node

    def parse_primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Num(Fraction(int(t.text)))
        if t.kind == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")", "')'")
            return node
        if t.kind == "name":
            if t.text == "br":
                return self.parse_br()
            if t.text == "sum":
                return self.parse_sum()
            return self.parse_symbol()
        shown = t.text if t.kind != "end" else "end of input"
        raise DslSyntaxError(f"expected an expression, found {shown!r}", t.line, t.col)

    def parse_br(self):
        self.next()  # "br"
        self.expect("(", "'(' after br")
        a = self.parse_expr()
        self.expect(",", "',' between bracket arguments")
        b = self.parse_expr()
        self.expect(")", "')'")
        return Br(a, b)

    def parse_sum(self):
        kw = self.next()  # "sum"
        self.expect("(", "'(' after sum")
        names = []
        while True:
            t = self.expect("name", "an index variable name")
            if t.text in SYMBOL_ARITY or t.text in ("br", "sum"):
                raise DslSyntaxError(
                    f"{t.text!r} cannot be used as an index variable", t.line, t.col
                )
            if t.text in names:
                raise DslSyntaxError(
                    f"duplicate summation variable {t.text!r}", t.line, t.col
                )
            names.append(t.text)
            nxt = self.peek()
            if nxt.kind == ",":
                self.next()
                continue
            if nxt.kind == ":":
                self.next()
                break
            raise DslSyntaxError(
                "expected ',' or ':' in sum variable list", nxt.line, nxt.col
            )
        body = self.parse_expr()
        self.expect(")", "')'")
        if not names:
            raise DslSyntaxError("sum needs at least one variable", kw.line, kw.col)
        return Sum(tuple(names), body)

    def parse_symbol(self):
        t = self.next()
        name = t.text
        if name not in SYMBOL_ARITY:
            raise UnknownSymbol(
                f"unknown symbol {name!r} (line {t.line}, column {t.col})"
            )
        arity = SYMBOL_ARITY[name]
        indices = []
        if self.peek().kind == "[":
            self.next()
            while True:
                nt = self.peek()
                if nt.kind == "int":
                    self.next()
                    indices.append(int(nt.text))
                elif nt.kind == "name":
                    self.next()
                    if nt.text in SYMBOL_ARITY or nt.text in ("br", "sum"):
                        raise DslSyntaxError(
                            f"{nt.text!r} cannot be used as an index variable",
                            nt.line,
                            nt.col,
                        )
                    indices.append(nt.text)
                else:
                    shown = nt.text if nt.kind != "end" else "end of input"
                    raise DslSyntaxError(
                        f"expected an index, found {shown!r}", nt.line, nt.col
                    )
                nxt = self.peek()
                if nxt.kind == ",":
                    self.next()
                    continue
                if nxt.kind == "]":
                    self.next()
                    break
                raise DslSyntaxError(
                    "expected ',' or ']' in index list", nxt.line, nxt.col
                )
        if len(indices) != arity:
            raise ArityError(
                f"{name} takes {arity} index(es), got {len(indices)} "
                f"(line {t.line}, column {t.col})"
            )
        return Sym(name, tuple(indices))


def parse(src):
    """Parse one expression; errors carry the 1-based line and column."""
    p = _Parser(_tokenize(src))
    node = p.parse_expr()
    tail = p.peek()
    if tail.kind != "end":
        raise DslSyntaxError(
            f"unexpected trailing input {tail.text!r}", tail.line, tail.col
        )
    return node


# ---------------------------------------------------------------------------
# elaboration
# ---------------------------------------------------------------------------

_EPS_CACHE = {}


def _eps4(indices):
    """Totally antisymmetric symbol on lower indices, value of (0,1,2,3) = +1."""
    key = tuple(indices)
    hit = _EPS_CACHE.get(key)
    if hit is not None:
        return hit
    if len(set(key)) < 4:
        sign = 0
    else:
        sign = 1
        p = list(key)
        for a in range(4):
            for b in range(a + 1, 4):
                if p[a] > p[b]:
                    sign = -sign
    _EPS_CACHE[key] = sign
    return sign


def _resolve(indices, assignment):
    vals = []
    for ix in indices:
        if isinstance(ix, int):
            vals.append(ix)
        else:
            v = assignment.get(ix)
            if v is None:
                raise UnboundIndex(f"index variable {ix!r} has no value")
            vals.append(v)
    return vals


def _check_range(name, vals):
    lo = 1 if name in _SPATIAL_SYMBOLS else 0
    for v in vals:
        if v < lo or v > 3:
            raise IndexRangeError(
                f"index {v} out of range {lo}..3 for {name}"
            )


def elaborate(ast, assignment, obs):
    """Expand an AST into a normalized operator.

    assignment maps index-variable names to concrete values; obs is the
    observable cache whose algebra receives the result.
    """
    alg = obs.alg
    if isinstance(ast, Num):
        return alg.scalar(ast.value)
    if isinstance(ast, Sym):
        vals = _resolve(ast.indices, assignment)
        _check_range(ast.name, vals)
        return _SYMBOL_BUILDERS[ast.name](obs, vals)
    if isinstance(ast, Add):
        return elaborate(ast.left, assignment, obs) + elaborate(ast.right, assignment, obs)
    if isinstance(ast, Sub):
        return elaborate(ast.left, assignment, obs) - elaborate(ast.right, assignment, obs)
    if isinstance(ast, Neg):
        return -elaborate(ast.arg, assignment, obs)
    if isinstance(ast, Mul):
        return alg.mul(
            elaborate(ast.left, assignment, obs), elaborate(ast.right, assignment, obs)
        )
    if isinstance(ast, Dot):
        return alg.dot(
            elaborate(ast.left, assignment, obs), elaborate(ast.right, assignment, obs)
        )
    if isinstance(ast, Div):
        num = elaborate(ast.left, assignment, obs)
        den = elaborate(ast.right, assignment, obs)
        coeff = _as_coefficient(den)
        return num.scale(coeff.inv())
    if isinstance(ast, Pow):
        base = elaborate(ast.base, assignment, obs)
        out = base
        for _ in range(ast.exponent - 1):
            out = alg.mul(out, base)
        return out
    if isinstance(ast, Br):
        return alg.bracket(
            elaborate(ast.left, assignment, obs), elaborate(ast.right, assignment, obs)
        )
    if isinstance(ast, Sum):
        total = alg.zero()
        scope = dict(assignment)

        def expand(k):
            nonlocal total
            if k == len(ast.names):
                total = total + elaborate(ast.body, scope, obs)
                return
            name = ast.names[k]
            for v in index_range(name):
                scope[name] = v
                expand(k + 1)
            del scope[name]

        expand(0)
        return total
    raise TypeError(f"not an AST node: {ast!r}")


def _as_coefficient(expr):
    """The coefficient of a pure-scalar operator; anything else is rejected."""
    if expr.is_zero():
        from .field import FE_ZERO

        return FE_ZERO  # .inv() raises the division error with the right type
    words = set(expr.terms)
    if words != {()}:
        raise NonCoefficientDivisor(
            "divisor contains operator letters and is not a pure coefficient"
        )
    return expr.terms[()]


def _build_J(obs, vals):
    return obs.alg.J(vals[0], vals[1])


def _build_eta(obs, vals):
    mu, nu = vals
    if mu != nu:
        return obs.alg.zero()
    return obs.alg.scalar(Fraction(1 if mu == 0 else -1))


def _build_eps(obs, vals):
    return obs.alg.scalar(Fraction(_eps4(vals)))


_SYMBOL_BUILDERS = {
    "P": lambda obs, v: obs.alg.momentum(v[0]),
    "J": _build_J,
    "D": lambda obs, v: obs.alg.D(),
    "C": lambda obs, v: obs.alg.C(v[0]),
    "M": lambda obs, v: obs.alg.mass(),
    "X": lambda obs, v: obs.X(v[0]),
    "S": lambda obs, v: obs.S(v[0]),
    "Stensor": lambda obs, v: obs.Stensor(v[0], v[1]),
    "Sigma": lambda obs, v: obs.sigma(v[0]),
    "Xi": lambda obs, v: obs.xi(v[0]),
    "Tau": lambda obs, v: obs.tau(),
    "V": lambda obs, v: obs.V(v[0]),
    "eta": _build_eta,
    "eps": _build_eps,
}


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

# Precedence levels; higher binds tighter. All of * . / share one level and
# associate left, so a left operand at the same level prints bare while a
# right operand needs parentheses.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(node):
    if isinstance(node, (Add, Sub)):
        return _PREC_ADD
    if isinstance(node, (Mul, Dot, Div)):
        return _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _wrap(node, parent_prec, right_side):
    txt = ast_pretty(node)
    p = _prec(node)
    if p < parent_prec or (p == parent_prec and right_side):
        return f"({txt})"
    return txt


def ast_pretty(node):
    """Render an AST back to source; parse(ast_pretty(t)) == t."""
    if isinstance(node, Num):
        v = node.value
        if v.denominator == 1:
            return str(v.numerator)
        # negative rationals only arise under an explicit Neg node
        return f"{v.numerator}/{v.denominator}"
    if isinstance(node, Sym):
        if not node.indices:
            return node.name
        inner = ",".join(str(ix) for ix in node.indices)
        return f"{node.name}[{inner}]"
    if isinstance(node, Add):
        return (
            f"{_wrap(node.left, _PREC_ADD, False)} + "
            f"{_wrap(node.right, _PREC_ADD, True)}"
        )
    if isinstance(node, Sub):
        return (
            f"{_wrap(node.left, _PREC_ADD, False)} - "
            f"{_wrap(node.right, _PREC_ADD, True)}"
        )
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _PREC_NEG, False)
    if isinstance(node, Mul):
        return (
            f"{_wrap(node.left, _PREC_MUL, False)}*"
            f"{_wrap(node.right, _PREC_MUL, True)}"
        )
    if isinstance(node, Dot):
        return (
            f"{_wrap(node.left, _PREC_MUL, False)} . "
            f"{_wrap(node.right, _PREC_MUL, True)}"
        )
    if isinstance(node, Div):
        return (
            f"{_wrap(node.left, _PREC_MUL, False)}/"
            f"{_wrap(node.right, _PREC_MUL, True)}"
        )
    if isinstance(node, Pow):
        # right_side=True so a Pow base gets parentheses: the grammar allows
        # only one caret per power, so "(D^2)^3" must not print as "D^2^3"
        return f"{_wrap(node.base, _PREC_POW, True)}^{node.exponent}"
    if isinstance(node, Br):
        return f"br({ast_pretty(node.left)}, {ast_pretty(node.right)})"
    if isinstance(node, Sum):
        return f"sum({', '.join(node.names)} : {ast_pretty(node.body)})"
    raise TypeError(f"not an AST node: {node!r}")
