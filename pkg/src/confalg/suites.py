"""Identity catalogue and suite runner.

Suite definitions live in plain-text files under catalog/. Each record is a
blank-line-separated block:

    identity <id>
    tag <suite tag>
    describe <one line of plain text>
    free <index variables checked over their full ranges>     (optional)
    sum <index variables reserved for sum() binders>          (optional)
    lhs <expression>                                          (dsl records)
    rhs <expression>
    statement <displayed form>                (builtin records; generated
                                               as "lhs = rhs" for dsl ones)
    builtin <sweep key>                                       (builtin records)

A dsl record is verified by normalizing lhs - rhs for every assignment of
its free variables (single-letter variables run over 1..3, longer names
over 0..3). Builtin records quantify over the generator set itself, which
the expression language cannot do, and run registered sweeps instead.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

from . import conformal, dsl
from .conformal import GENERATORS, gen_expr, gen_name
from .errors import ConfalgError, ConstructionFailure, UnknownIdentity
from .nc import DEFAULT_BUDGET
from .observables import Observables

__all__ = [
    "SUITE_TAGS", "Identity", "IdentityResult", "SuiteReport", "Context",
    "get_context", "load_catalog", "catalog_by_suite", "find_identity",
    "run_identity", "run_suite", "run_all", "report_to_dict", "report_text",
    "reports_to_dict", "report_json",
]

SUITE_TAGS = ("structure", "localisation", "conformal-factor", "canonical")

_CATALOG_FILES = (
    "structure.txt",
    "localisation.txt",
    "conformal_factor.txt",
    "canonical.txt",
)


# ---------------------------------------------------------------------------
# catalogue model and loader
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    id: str
    tag: str
    describe: str
    statement: str
    free: tuple
    summed: tuple
    lhs_src: str = None
    rhs_src: str = None
    lhs_ast: object = None
    rhs_ast: object = None
    builtin: str = None


def _collect_indices(ast, vars_out, binders_out):
    if isinstance(ast, dsl.Sym):
        for ix in ast.indices:
            if isinstance(ix, str):
                vars_out.add(ix)
        return
    if isinstance(ast, dsl.Sum):
        binders_out.update(ast.names)
        _collect_indices(ast.body, vars_out, binders_out)
        return
    for attr in ("left", "right", "arg", "base", "body"):
        child = getattr(ast, attr, None)
        if child is not None and not isinstance(child, (int, str)):
            _collect_indices(child, vars_out, binders_out)


def _parse_record(block, path, ids_seen):
    fields = {}
    for line in block:
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in fields:
            raise ConstructionFailure(f"{path}: duplicate {key!r} line in record")
        fields[key] = rest
    unknown = set(fields) - {
        "identity", "tag", "describe", "free", "sum", "lhs", "rhs",
        "statement", "builtin",
    }
    if unknown:
        raise ConstructionFailure(f"{path}: unknown keys {sorted(unknown)}")
    for req in ("identity", "tag", "describe"):
        if not fields.get(req):
            raise ConstructionFailure(f"{path}: record is missing {req!r}")
    ident = fields["identity"]
    if ident in ids_seen:
        raise ConstructionFailure(f"{path}: duplicate identity id {ident!r}")
    ids_seen.add(ident)
    tag = fields["tag"]
    if tag not in SUITE_TAGS:
        raise ConstructionFailure(f"{path}: {ident}: unknown suite tag {tag!r}")
    free = tuple(fields.get("free", "").split())
    summed = tuple(fields.get("sum", "").split())
    names = list(free) + list(summed)
    if len(set(names)) != len(names):
        raise ConstructionFailure(
            f"{path}: {ident}: an index variable is declared twice"
        )
    if "builtin" in fields:
        if "lhs" in fields or "rhs" in fields or free or summed:
            raise ConstructionFailure(
                f"{path}: {ident}: a builtin record takes no expressions or indices"
            )
        if not fields.get("statement"):
            raise ConstructionFailure(f"{path}: {ident}: builtin needs a statement")
        key = fields["builtin"]
        if key not in _BUILTINS:
            raise ConstructionFailure(f"{path}: {ident}: unknown builtin {key!r}")
        return Identity(
            id=ident, tag=tag, describe=fields["describe"],
            statement=fields["statement"], free=(), summed=(), builtin=key,
        )
    if "statement" in fields:
        raise ConstructionFailure(
            f"{path}: {ident}: the statement of an expression record is generated"
        )
    if "lhs" not in fields or "rhs" not in fields:
        raise ConstructionFailure(f"{path}: {ident}: needs both lhs and rhs")
    lhs_ast = dsl.parse(fields["lhs"])
    rhs_ast = dsl.parse(fields["rhs"])
    used, binders = set(), set()
    _collect_indices(lhs_ast, used, binders)
    _collect_indices(rhs_ast, used, binders)
    undeclared = (used | binders) - set(names)
    if undeclared:
        raise ConstructionFailure(
            f"{path}: {ident}: undeclared index variables {sorted(undeclared)}"
        )
    stray = binders - set(summed)
    if stray:
        raise ConstructionFailure(
            f"{path}: {ident}: sum binders {sorted(stray)} not on the sum line"
        )
    unused = set(names) - (used | binders)
    if unused:
        raise ConstructionFailure(
            f"{path}: {ident}: declared but unused variables {sorted(unused)}"
        )
    free_bound = set(free) & binders
    if free_bound:
        raise ConstructionFailure(
            f"{path}: {ident}: free variables {sorted(free_bound)} are sum-bound"
        )
    return Identity(
        id=ident, tag=tag, describe=fields["describe"],
        statement=f"{fields['lhs']} = {fields['rhs']}",
        free=free, summed=summed,
        lhs_src=fields["lhs"], rhs_src=fields["rhs"],
        lhs_ast=lhs_ast, rhs_ast=rhs_ast,
    )


def load_catalog():
    """All identities, in file order; validated on load."""
    out = []
    ids_seen = set()
    base = resources.files(__package__) / "catalog"
    for name in _CATALOG_FILES:
        text = (base / name).read_text(encoding="utf-8")
        block = []
        for raw in text.splitlines() + [""]:
            line = raw.strip()
            if line.startswith("#"):
                continue
            if line:
                block.append(line)
                continue
            if block:
                out.append(_parse_record(block, name, ids_seen))
                block = []
    return tuple(out)


_CATALOG = None


def catalog():
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = load_catalog()
    return _CATALOG


def catalog_by_suite(tag):
    return tuple(ident for ident in catalog() if ident.tag == tag)


def find_identity(ident_id):
    for ident in catalog():
        if ident.id == ident_id:
            return ident
    raise UnknownIdentity(f"no identity named {ident_id!r} in the catalogue")


# ---------------------------------------------------------------------------
# evaluation context
# ---------------------------------------------------------------------------

@dataclass
class Context:
    alg: object
    obs: object
    pair_cache: dict = field(default_factory=dict)


_CONTEXTS = {}


def get_context(budget=DEFAULT_BUDGET):
    """Shared algebra + observable cache, one per rewrite budget."""
    ctx = _CONTEXTS.get(budget)
    if ctx is None:
        alg = conformal.build_algebra(budget=budget)
        ctx = Context(alg=alg, obs=Observables(alg))
        _CONTEXTS[budget] = ctx
    return ctx


# ---------------------------------------------------------------------------
# builtin sweeps
# ---------------------------------------------------------------------------

def _gen_pairs():
    n = len(GENERATORS)
    return [
        {"a": gen_name(GENERATORS[i]), "b": gen_name(GENERATORS[j])}
        for i in range(n)
        for j in range(i + 1, n)
    ]


_GEN_BY_NAME = {gen_name(g): g for g in GENERATORS}


def _antisym_assignments(ctx):
    return _gen_pairs()


def _antisym_residual(ctx, asg):
    a = _GEN_BY_NAME[asg["a"]]
    b = _GEN_BY_NAME[asg["b"]]
    total = dict(conformal.table_bracket(a, b))
    for g, c in conformal.table_bracket(b, a).items():
        total[g] = total.get(g, 0) + c
    total = {g: c for g, c in total.items() if c}
    if not total:
        return None
    return conformal.table_expr(ctx.alg, total).pretty()


def _jacobi_assignments(ctx):
    names = [gen_name(g) for g in GENERATORS]
    return [{"a": na, "b": nb, "c": nc} for na in names for nb in names for nc in names]


def _jacobi_residual(ctx, asg):
    r = conformal.jacobi_residual(
        ctx.alg,
        _GEN_BY_NAME[asg["a"]],
        _GEN_BY_NAME[asg["b"]],
        _GEN_BY_NAME[asg["c"]],
        pair_cache=ctx.pair_cache,
    )
    return None if r.is_zero() else r.pretty()


def _poly_names_x(poly):
    return poly.pretty(names=("x0", "x1", "x2", "x3"))


def _vf_oracle_residual(ctx, asg):
    r = conformal.classical_residual(_GEN_BY_NAME[asg["a"]], _GEN_BY_NAME[asg["b"]])
    bad = [f"component {mu}: {_poly_names_x(r[mu])}" for mu in range(4) if not r[mu].is_zero()]
    return "; ".join(bad) if bad else None


def _matrix_oracle_residual(ctx, asg):
    r = conformal.matrix_residual(_GEN_BY_NAME[asg["a"]], _GEN_BY_NAME[asg["b"]])
    bad = [f"[{i}][{j}] = {r[i][j]}" for i in range(6) for j in range(6) if r[i][j]]
    return "; ".join(bad) if bad else None


def _gen_assignments(ctx):
    return [{"g": gen_name(g)} for g in GENERATORS]


def _cfactor_mass_residual(ctx, asg):
    g = _GEN_BY_NAME[asg["g"]]
    alg, obs = ctx.alg, ctx.obs
    r = alg.bracket(gen_expr(alg, g), alg.mass()) + alg.dot(
        alg.mass(), obs.lambda_at_X(g)
    )
    return None if r.is_zero() else r.pretty()


def _gen_munu_assignments(ctx):
    return [
        {"g": gen_name(g), "mu": mu, "nu": nu}
        for g in GENERATORS
        for mu in range(4)
        for nu in range(4)
    ]


def _pair_invariance_residual(ctx, asg):
    alg, obs = ctx.alg, ctx.obs
    inner = alg.bracket(alg.momentum(asg["mu"]), obs.X(asg["nu"]))
    r = alg.bracket(gen_expr(alg, _GEN_BY_NAME[asg["g"]]), inner)
    return None if r.is_zero() else r.pretty()


def _shift_consistency_residual(ctx, asg):
    alg, obs = ctx.alg, ctx.obs
    ge = gen_expr(alg, _GEN_BY_NAME[asg["g"]])
    mu, nu = asg["mu"], asg["nu"]
    lhs = alg.bracket(alg.bracket(ge, obs.X(nu)), alg.momentum(mu))
    rhs = alg.bracket(alg.bracket(ge, alg.momentum(mu)), obs.X(nu))
    r = lhs - rhs
    return None if r.is_zero() else r.pretty()


def _eta_int(mu, nu):
    if mu != nu:
        return 0
    return 1 if mu == 0 else -1


def _cfactor_sym_momentum_residual(ctx, asg):
    alg, obs = ctx.alg, ctx.obs
    g = _GEN_BY_NAME[asg["g"]]
    ge = gen_expr(alg, g)
    mu, nu = asg["mu"], asg["nu"]
    lhs = alg.bracket(alg.bracket(ge, alg.momentum(mu)), obs.X(nu)) + alg.bracket(
        alg.bracket(ge, alg.momentum(nu)), obs.X(mu)
    )
    r = lhs - obs.lambda_at_X(g).scale(2 * _eta_int(mu, nu))
    return None if r.is_zero() else r.pretty()


def _cfactor_sym_position_residual(ctx, asg):
    alg, obs = ctx.alg, ctx.obs
    g = _GEN_BY_NAME[asg["g"]]
    ge = gen_expr(alg, g)
    mu, nu = asg["mu"], asg["nu"]
    lhs = alg.bracket(alg.bracket(ge, obs.X(nu)), alg.momentum(mu)) + alg.bracket(
        alg.bracket(ge, obs.X(mu)), alg.momentum(nu)
    )
    r = lhs - obs.lambda_at_X(g).scale(2 * _eta_int(mu, nu))
    return None if r.is_zero() else r.pretty()


def _canonical_partials_assignments(ctx):
    out = [{"check": f"dX[{mu}]/dtau"} for mu in range(4)]
    out += [
        {"check": f"dXi[{i}]/dP[{j}]"} for i in range(1, 4) for j in range(1, 4)
    ]
    out += [
        {"check": f"dP[{i}]/dP[{j}]"} for i in range(1, 4) for j in range(1, 4)
    ]
    out.append({"check": "dM/dtau"})
    out.append({"check": "dM/dM"})
    return out


def _canonical_partials_residual(ctx, asg):
    alg, obs = ctx.alg, ctx.obs
    label = asg["check"]
    kind, _, wrt = label.partition("/")
    if kind.startswith("dX["):
        mu = int(kind[3])
        r = obs.canonical_partial(obs.X(mu), "tau") - obs.V(mu)
    elif kind.startswith("dXi["):
        i = int(kind[4])
        j = int(wrt[3])
        r = obs.canonical_partial(obs.xi(i), "P", j)
    elif kind.startswith("dP["):
        i = int(kind[3])
        j = int(wrt[3])
        want = alg.scalar(1 if i == j else 0)
        r = obs.canonical_partial(alg.momentum(i), "P", j) - want
    elif label == "dM/dtau":
        r = obs.canonical_partial(alg.mass(), "tau")
    else:  # dM/dM
        r = obs.canonical_partial(alg.mass(), "M") - alg.one()
    return None if r.is_zero() else r.pretty()


_BUILTINS = {
    "pair_antisymmetry": (_antisym_assignments, _antisym_residual),
    "jacobi": (_jacobi_assignments, _jacobi_residual),
    "vector_field_oracle": (_antisym_assignments, _vf_oracle_residual),
    "matrix_oracle": (_antisym_assignments, _matrix_oracle_residual),
    "cfactor_mass": (_gen_assignments, _cfactor_mass_residual),
    "pair_invariance": (_gen_munu_assignments, _pair_invariance_residual),
    "shift_consistency": (_gen_munu_assignments, _shift_consistency_residual),
    "cfactor_sym_momentum": (_gen_munu_assignments, _cfactor_sym_momentum_residual),
    "cfactor_sym_position": (_gen_munu_assignments, _cfactor_sym_position_residual),
    "canonical_partials": (
        _canonical_partials_assignments,
        _canonical_partials_residual,
    ),
}


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

@dataclass
class IdentityResult:
    id: str
    statement: str
    assignments: int
    failures: list  # [(assignment dict, residual text)]
    millis: float

    @property
    def passed(self):
        return not self.failures


@dataclass
class SuiteReport:
    suite: str
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results)


def identity_assignments(ident, ctx):
    """The ordered list of assignment dicts an identity is checked over."""
    if ident.builtin is not None:
        return _BUILTINS[ident.builtin][0](ctx)
    if not ident.free:
        return [{}]
    ranges = [dsl.index_range(name) for name in ident.free]
    return [dict(zip(ident.free, combo)) for combo in product(*ranges)]


def evaluate_assignment(ident, asg, ctx):
    """Residual text for one assignment, or None when it holds."""
    if ident.builtin is not None:
        return _BUILTINS[ident.builtin][1](ctx, asg)
    lhs = dsl.elaborate(ident.lhs_ast, asg, ctx.obs)
    rhs = dsl.elaborate(ident.rhs_ast, asg, ctx.obs)
    r = lhs - rhs
    return None if r.is_zero() else r.pretty()


def run_identity(ident, ctx=None, assignment=None):
    """Check one identity (by object or id) over all or one assignment."""
    if isinstance(ident, str):
        ident = find_identity(ident)
    if ctx is None:
        ctx = get_context()
    assignments = identity_assignments(ident, ctx)
    if assignment is not None:
        if assignment not in assignments:
            raise ConstructionFailure(
                f"{ident.id}: {assignment!r} is not one of its assignments"
            )
        assignments = [assignment]
    failures = []
    t0 = time.perf_counter()
    for asg in assignments:
        try:
            residual = evaluate_assignment(ident, asg, ctx)
        except ConfalgError as exc:
            residual = f"error: {exc}"
        if residual is not None:
            failures.append((asg, residual))
    millis = (time.perf_counter() - t0) * 1000.0
    return IdentityResult(
        id=ident.id,
        statement=ident.statement,
        assignments=len(assignments),
        failures=failures,
        millis=millis,
    )


def _run_one_task(ident, asg, ctx):
    try:
        return evaluate_assignment(ident, asg, ctx)
    except ConfalgError as exc:
        return f"error: {exc}"


def run_suite(tag, ctx=None, threads=1):
    """Every identity of one suite; deterministic result order."""
    if tag not in SUITE_TAGS:
        raise UnknownIdentity(f"no suite named {tag!r}")
    if ctx is None:
        ctx = get_context()
    idents = sorted(catalog_by_suite(tag), key=lambda i: i.id)
    if threads <= 1:
        return SuiteReport(suite=tag, results=[run_identity(i, ctx) for i in idents])
    tasks = []
    for ident in idents:
        for k, asg in enumerate(identity_assignments(ident, ctx)):
            tasks.append((ident, k, asg))
    timings = {ident.id: 0.0 for ident in idents}
    outcomes = {}

    def work(task):
        ident, k, asg = task
        s = time.perf_counter()
        residual = _run_one_task(ident, asg, ctx)
        return (ident.id, k, asg, residual, (time.perf_counter() - s) * 1000.0)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for ident_id, k, asg, residual, ms in pool.map(work, tasks):
            timings[ident_id] += ms
            if residual is not None:
                outcomes.setdefault(ident_id, []).append((k, asg, residual))
    results = []
    for ident in idents:
        fails = sorted(outcomes.get(ident.id, []))
        results.append(
            IdentityResult(
                id=ident.id,
                statement=ident.statement,
                assignments=len(identity_assignments(ident, ctx)),
                failures=[(asg, residual) for _, asg, residual in fails],
                millis=timings[ident.id],
            )
        )
    return SuiteReport(suite=tag, results=results)


def run_all(ctx=None, threads=1):
    if ctx is None:
        ctx = get_context()
    return [run_suite(tag, ctx, threads) for tag in SUITE_TAGS]


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------

def report_to_dict(report):
    """JSON form; millis is pinned to 0 so reports are byte-reproducible."""
    return {
        "suite": report.suite,
        "identities": [
            {
                "id": r.id,
                "statement": r.statement,
                "assignments": r.assignments,
                "failures": [
                    {"assignment": asg, "residual": residual}
                    for asg, residual in r.failures
                ],
                "millis": 0,
            }
            for r in report.results
        ],
        "pass": report.passed,
    }


def reports_to_dict(reports):
    return {
        "suite": "all",
        "suites": [report_to_dict(rep) for rep in reports],
        "pass": all(rep.passed for rep in reports),
    }


def report_json(reports):
    """Serialize one report or a list of them; stable field order."""
    if isinstance(reports, SuiteReport):
        payload = report_to_dict(reports)
    else:
        payload = reports_to_dict(reports)
    return json.dumps(payload, indent=2)


def report_text(report):
    lines = [f"suite {report.suite}"]
    for r in report.results:
        mark = "ok  " if r.passed else "FAIL"
        lines.append(
            f"  {mark} {r.id}  [{r.assignments} assignment"
            f"{'s' if r.assignments != 1 else ''}, {r.millis:.1f} ms]"
        )
        for asg, residual in r.failures:
            where = ", ".join(f"{k}={v}" for k, v in asg.items()) or "-"
            lines.append(f"       at {where}: {residual}")
    lines.append(f"suite {report.suite}: {'pass' if report.passed else 'FAIL'}")
    return "\n".join(lines)
