"""Error types shared across the package.

Everything raised on purpose derives from ConfalgError so the CLI can map
failures onto its exit codes without fishing for stdlib exceptions.
"""


class ConfalgError(Exception):
    """Base class for all errors raised by this package."""


# ---- exact arithmetic ----

class DivisionByZero(ConfalgError):
    """Division by the zero polynomial, rational function or field element."""


class NotInvertible(ConfalgError):
    """Field element whose conjugate norm vanishes as a polynomial."""


# ---- noncommutative engine ----

class RewriteBudgetExceeded(ConfalgError):
    """Normalization used more rewrite steps than the configured budget."""


class ConsistencyFailure(ConfalgError):
    """A supplied derivation rule contradicts the quadratic mass relation."""


# ---- algebra construction checks ----

class MismatchError(ConfalgError):
    """An oracle cross-check (classical or matrix) disagrees with the table."""


class ConstructionFailure(ConfalgError):
    """A built object failed its own validation (e.g. a non-traceless matrix)."""


# ---- expression language ----

class DslSyntaxError(ConfalgError):
    """Tokenizer or parser error; carries a 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownSymbol(ConfalgError):
    """Symbol name not in the vocabulary."""


class ArityError(ConfalgError):
    """Symbol used with the wrong number of indices."""


class UnboundIndex(ConfalgError):
    """Index variable neither assigned as free nor bound by a sum."""


class IndexRangeError(ConfalgError):
    """Index value outside the symbol's legal range."""


class NonCoefficientDivisor(ConfalgError):
    """Attempt to divide by an expression that is not a pure coefficient."""


class DegreeError(ConfalgError):
    """Classical polynomial of degree > 1 where an affine one is required."""


class UnknownIdentity(ConfalgError):
    """Identity id not present in the catalogue."""
