"""Expression language: grammar, printing, and elaboration into the engine."""

import random
from fractions import Fraction

import pytest

from confalg.conformal import build_algebra
from confalg.dsl import (
    Add,
    Br,
    Div,
    Dot,
    Mul,
    Neg,
    Num,
    Pow,
    Sub,
    Sum,
    Sym,
    SYMBOL_ARITY,
    ast_pretty,
    elaborate,
    index_range,
    parse,
)
from confalg.errors import (
    ArityError,
    DivisionByZero,
    DslSyntaxError,
    IndexRangeError,
    NonCoefficientDivisor,
    UnboundIndex,
    UnknownSymbol,
)
from confalg.field import FE_M, FieldElem


@pytest.fixture(scope="module")
def alg():
    return build_algebra()


@pytest.fixture(scope="module")
def obs(alg):
    from confalg.observables import Observables

    return Observables(alg)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_shapes():
    assert parse("P[0]") == Sym("P", (0,))
    assert parse("J[1,3]") == Sym("J", (1, 3))
    assert parse("D") == Sym("D", ())
    assert parse("1/2") == Div(Num(Fraction(1)), Num(Fraction(2)))
    assert parse("D + P[0]*M") == Add(
        Sym("D", ()), Mul(Sym("P", (0,)), Sym("M", ()))
    )
    assert parse("-D^2") == Neg(Pow(Sym("D", ()), 2))
    assert parse("br(P[1], C[1])") == Br(Sym("P", (1,)), Sym("C", (1,)))
    assert parse("sum(i : Sigma[i])") == Sum(("i",), Sym("Sigma", ("i",)))
    assert parse("X[mu] . P[nu]") == Dot(Sym("X", ("mu",)), Sym("P", ("nu",)))


def test_parse_left_association_and_parens():
    assert parse("D*M*D") == Mul(Mul(Sym("D", ()), Sym("M", ())), Sym("D", ()))
    assert parse("D*(M*D)") == Mul(Sym("D", ()), Mul(Sym("M", ()), Sym("D", ())))
    assert parse("D - M - D") == Sub(
        Sub(Sym("D", ()), Sym("M", ())), Sym("D", ())
    )
    assert parse("(D^2)^3") == Pow(Pow(Sym("D", ()), 2), 3)


def test_parse_error_positions():
    with pytest.raises(DslSyntaxError) as e:
        parse("P[0] +")
    assert (e.value.line, e.value.col) == (1, 7)
    with pytest.raises(DslSyntaxError) as e:
        parse("D D")
    assert (e.value.line, e.value.col) == (1, 3)
    with pytest.raises(DslSyntaxError) as e:
        parse("(D")
    assert (e.value.line, e.value.col) == (1, 3)
    with pytest.raises(DslSyntaxError) as e:
        parse("D $")
    assert (e.value.line, e.value.col) == (1, 3)
    with pytest.raises(UnknownSymbol) as e:
        parse("D +\nQ[0]")
    assert "line 2" in str(e.value) and "column 1" in str(e.value)


def test_parse_rejects_malformed_input():
    with pytest.raises(DslSyntaxError):
        parse("D^0")
    with pytest.raises(DslSyntaxError):
        parse("D^2^3")
    with pytest.raises(DslSyntaxError):
        parse("sum(P : D)")
    with pytest.raises(DslSyntaxError):
        parse("sum(i, i : D)")
    with pytest.raises(DslSyntaxError):
        parse("P[]")
    with pytest.raises(ArityError):
        parse("J[0]")
    with pytest.raises(ArityError):
        parse("D[1]")
    with pytest.raises(UnknownSymbol):
        parse("Spin[1]")


def test_index_variable_ranges():
    assert index_range("i") == (1, 2, 3)
    assert index_range("j") == (1, 2, 3)
    assert index_range("mu") == (0, 1, 2, 3)
    assert index_range("alpha") == (0, 1, 2, 3)


# ---------------------------------------------------------------------------
# printing round-trip
# ---------------------------------------------------------------------------

def test_pretty_round_trip_fixed_corpus():
    corpus = [
        "br(P[1], C[1])",
        "sum(i, mu : P[mu]*Sigma[i])",
        "-(D + M)^2",
        "(D + M)*(D - M)",
        "P[0]/(M*M)",
        "D . M . D",
        "D*(M*D)",
        "(D^2)^3",
        "sum(nu : eta[nu,nu]*X[nu] . P[nu])",
        "1/2*br(D, br(M, C[3]))",
    ]
    for src in corpus:
        t = parse(src)
        assert parse(ast_pretty(t)) == t, src


_NAMES = sorted(SYMBOL_ARITY)
_VARS = ("i", "j", "mu", "nu")


def _rand_sym(rng):
    name = _NAMES[rng.randrange(len(_NAMES))]
    lo = 1 if name in ("Sigma", "Xi") else 0
    indices = []
    for _ in range(SYMBOL_ARITY[name]):
        if rng.random() < 0.3:
            indices.append(_VARS[rng.randrange(len(_VARS))])
        else:
            indices.append(rng.randint(lo, 3))
    return Sym(name, tuple(indices))


def _rand_ast(rng, depth):
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return Num(Fraction(rng.randint(0, 9)))
        return _rand_sym(rng)
    k = rng.randrange(9)
    if k == 0:
        return Add(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    if k == 1:
        return Sub(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    if k == 2:
        return Neg(_rand_ast(rng, depth - 1))
    if k == 3:
        return Mul(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    if k == 4:
        return Dot(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    if k == 5:
        return Div(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    if k == 6:
        return Pow(_rand_ast(rng, depth - 1), rng.randint(1, 3))
    if k == 7:
        return Br(_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1))
    count = rng.randint(1, 2)
    names = tuple(rng.sample(_VARS, count))
    return Sum(names, _rand_ast(rng, depth - 1))


def test_pretty_round_trip_random_asts():
    # the printer must emit source that parses back to the identical tree,
    # whatever the nesting; 250 random trees up to depth 4
    rng = random.Random(20260905)
    for _ in range(250):
        t = _rand_ast(rng, 4)
        assert parse(ast_pretty(t)) == t, ast_pretty(t)


# ---------------------------------------------------------------------------
# elaboration
# ---------------------------------------------------------------------------

def test_elaborate_matches_direct_api(alg, obs):
    cases = [
        ("P[2]", alg.momentum(2)),
        ("J[0,3]", alg.J(0, 3)),
        ("M*D", alg.mul(alg.mass(), alg.D())),
        ("X[1] . P[0]", alg.dot(obs.X(1), alg.momentum(0))),
        ("br(D, C[2])", alg.bracket(alg.D(), alg.C(2))),
        ("M^2", alg.mul(alg.mass(), alg.mass())),
        ("Tau", obs.tau()),
        ("V[3]", obs.V(3)),
        ("Stensor[0,2]", obs.Stensor(0, 2)),
        ("D/2", alg.D().scale(Fraction(1, 2))),
        ("D - D", alg.zero()),
    ]
    for src, want in cases:
        assert elaborate(parse(src), {}, obs) == want, src


def test_elaborate_bracket_value(alg, obs):
    assert elaborate(parse("br(P[1], C[1])"), {}, obs) == alg.D().scale(2)


def test_elaborate_metric_and_epsilon(alg, obs):
    assert elaborate(parse("eta[0,0]"), {}, obs) == alg.scalar(1)
    assert elaborate(parse("eta[2,2]"), {}, obs) == alg.scalar(-1)
    assert elaborate(parse("eta[0,1]"), {}, obs).is_zero()
    assert elaborate(parse("eps[0,1,2,3]"), {}, obs) == alg.scalar(1)
    assert elaborate(parse("eps[1,0,2,3]"), {}, obs) == alg.scalar(-1)
    assert elaborate(parse("eps[0,0,1,2]"), {}, obs).is_zero()


def test_elaborate_sum_ranges(alg, obs):
    # single-letter variables run over 1..3, longer names over 0..3
    assert elaborate(parse("sum(i : eta[i,i])"), {}, obs) == alg.scalar(-3)
    assert elaborate(parse("sum(mu : eta[mu,mu])"), {}, obs) == alg.scalar(-2)
    m1 = FieldElem.momentum(1)
    m2 = FieldElem.momentum(2)
    m3 = FieldElem.momentum(3)
    want = alg.scalar(m1 * m1 + m2 * m2 + m3 * m3)
    assert elaborate(parse("sum(i : P[i]*P[i])"), {}, obs) == want


def test_elaborate_assignment_binding(alg, obs):
    t = parse("P[mu]")
    assert elaborate(t, {"mu": 2}, obs) == alg.momentum(2)
    with pytest.raises(UnboundIndex):
        elaborate(t, {}, obs)


def test_elaborate_linearity(alg, obs):
    a = elaborate(parse("br(D, C[1]) + 2*br(P[0], X[0])"), {}, obs)
    b = elaborate(parse("br(D, C[1])"), {}, obs) + elaborate(
        parse("br(P[0], X[0])"), {}, obs
    ).scale(2)
    assert a == b


def test_elaborate_index_range_errors(obs):
    with pytest.raises(IndexRangeError):
        elaborate(parse("Sigma[mu]"), {"mu": 0}, obs)
    with pytest.raises(IndexRangeError):
        elaborate(parse("Xi[i]"), {"i": 0}, obs)
    with pytest.raises(IndexRangeError):
        elaborate(parse("P[4]"), {}, obs)
    with pytest.raises(IndexRangeError):
        elaborate(parse("P[mu]"), {"mu": -1}, obs)


def test_elaborate_division_rules(alg, obs):
    assert elaborate(parse("D/M"), {}, obs) == alg.D().scale(FE_M.inv())
    with pytest.raises(NonCoefficientDivisor):
        elaborate(parse("D/D"), {}, obs)
    with pytest.raises(DivisionByZero):
        elaborate(parse("D/0"), {}, obs)


def test_engine_output_round_trips_through_language(alg, obs):
    # normal forms print in the same surface syntax the parser accepts, so
    # feeding a normal form back through parse+elaborate must reproduce it
    samples = [
        alg.bracket(alg.C(0), alg.D()),
        obs.X(2),
        obs.sigma(1),
        alg.bracket(obs.sigma(1), obs.sigma(2)),
        obs.tau(),
        alg.zero(),
        alg.mul(alg.C(1), alg.J(0, 1)),
    ]
    for s in samples:
        assert elaborate(parse(s.pretty()), {}, obs) == s
