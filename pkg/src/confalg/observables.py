"""Derived observables over the conformal algebra.

Everything here is a finite engine expression built from the letters and the
coefficient field:

* X[mu]   localisation observable, X[mu] = J[nu,mu].(P^nu/M^2) + D.(P[mu]/M^2)
* S[mu]   spin vector (lower index), from S^mu = -1/2 eps^{mu nu rho sig}
          J[nu,rho] P[sig]/M
* Stensor[mu,nu] = eps[mu,nu,rho,sig] S^rho P^sig / M
* Sigma[j], Xi[j], Tau   the canonical spin, position and time variables
* V[mu]   velocity, V[mu] = -(M, X[mu])

Index convention: symbols carry lower indices; raising is an explicit metric
contraction and the metric is its own inverse. Spatial indices run 1..3.

The products in the spin definitions are written letter-first; the opposite
order differs by terms that cancel under the antisymmetric contraction, and
`ordering_gap` exposes the difference so tests can confirm it vanishes.
"""

from fractions import Fraction

from .conformal import build_X, eps4, eta, gen_expr
from .errors import DegreeError
from .field import FE_M, FieldElem, Q_POLY, RationalFunction
from .poly import Polynomial


def _mom_over_q(sig, sign=1):
    """P[sig]*M/M^2 = P[sig]/M as a coefficient, optionally signed."""
    return FieldElem(
        RationalFunction(Polynomial.zero(), Polynomial.one(), _reduced=True),
        RationalFunction(Polynomial.var(sig) * sign, Q_POLY),
    )


class Observables:
    """Lazy cache of the derived observables for one engine instance."""

    def __init__(self, alg):
        self.alg = alg
        self._cache = {}

    def _get(self, key, build):
        hit = self._cache.get(key)
        if hit is None:
            hit = build()
            self._cache[key] = hit
        return hit

    # ---- localisation ----

    def X(self, mu):
        return self._get(("X", mu), lambda: build_X(self.alg, mu))

    def X_upper(self, mu):
        return self._get(("X^", mu), lambda: self.X(mu).scale(eta(mu, mu)))

    # ---- spin ----

    def S_upper(self, mu):
        def build():
            alg = self.alg
            total = alg.zero()
            half = Fraction(1, 2)
            for nu in range(4):
                for rho in range(4):
                    for sig in range(4):
                        s = eps4(mu, nu, rho, sig)
                        if not s:
                            continue
                        s = s * eta(mu, mu) * eta(nu, nu) * eta(rho, rho) * eta(sig, sig)
                        j = alg.J(nu, rho)
                        term = alg.mul(j, alg.scalar(_mom_over_q(sig)))
                        total = total + term.scale(-half * s)
            return total

        return self._get(("S^", mu), build)

    def S_upper_reversed(self, mu):
        """Same contraction with the coefficient multiplied from the left."""
        def build():
            alg = self.alg
            total = alg.zero()
            half = Fraction(1, 2)
            for nu in range(4):
                for rho in range(4):
                    for sig in range(4):
                        s = eps4(mu, nu, rho, sig)
                        if not s:
                            continue
                        s = s * eta(mu, mu) * eta(nu, nu) * eta(rho, rho) * eta(sig, sig)
                        term = alg.mul(alg.scalar(_mom_over_q(sig)), alg.J(nu, rho))
                        total = total + term.scale(-half * s)
            return total

        return self._get(("S^rev", mu), build)

    def ordering_gap(self, mu):
        """Difference of the two orderings of S^mu; provably zero."""
        return self.S_upper(mu) - self.S_upper_reversed(mu)

    def S(self, mu):
        return self._get(("S", mu), lambda: self.S_upper(mu).scale(eta(mu, mu)))

    def Stensor(self, mu, nu):
        def build():
            alg = self.alg
            total = alg.zero()
            for rho in range(4):
                for sig in range(4):
                    s = eps4(mu, nu, rho, sig)
                    if not s:
                        continue
                    coeff = _mom_over_q(sig, eta(sig, sig) * s)
                    total = total + alg.mul(self.S_upper(rho), alg.scalar(coeff))
            return total

        return self._get(("St", mu, nu), build)

    # ---- canonical variables (spatial index 1..3) ----

    def sigma(self, j):
        def build():
            alg = self.alg
            p0_plus_m = FieldElem.momentum(0) + FE_M
            coeff = FieldElem.momentum(j) * p0_plus_m.inv()
            return self.S(j) - alg.mul(alg.scalar(coeff), self.S(0))

        return self._get(("sigma", j), build)

    def xi(self, j):
        def build():
            alg = self.alg
            p0 = FieldElem.momentum(0)
            p0_plus_m = p0 + FE_M
            first = alg.dot(alg.scalar(p0.inv()), alg.J(0, j))
            coeff = FE_M * (p0 * p0_plus_m).inv()
            return first - alg.mul(alg.scalar(coeff), self.Stensor(0, j))

        return self._get(("xi", j), build)

    def tau(self):
        def build():
            alg = self.alg
            a = alg.D()
            for j in range(1, 4):
                p_up = alg.scalar(FieldElem.momentum(j) * eta(j, j))
                a = a - alg.dot(p_up, self.xi(j))
            m_inv = alg.scalar(FE_M.inv())
            return alg.dot(a, m_inv)

        return self._get(("tau",), build)

    # ---- velocity ----

    def V(self, mu):
        def build():
            alg = self.alg
            return -alg.bracket(alg.mass(), self.X(mu))

        return self._get(("V", mu), build)

    # ---- conformal factors evaluated on the localisation observable ----

    def lambda_at_X(self, g):
        """lambda_g with the spacetime point replaced by X; an engine expression."""
        kind = g[0]
        if kind == "D":
            return self.alg.scalar(-1)
        if kind == "C":
            return self.X(g[1]).scale(-2)
        return self.alg.zero()

    def eval_affine_at_X(self, poly):
        """An affine classical polynomial (in the x variables) evaluated at X.

        Constant term plus linear terms only; anything of higher degree has no
        declared operator ordering and raises DegreeError.
        """
        if poly.total_degree() > 1:
            raise DegreeError(
                "only affine classical expressions can be evaluated on X"
            )
        total = self.alg.zero()
        for exps, c in poly.terms.items():
            if sum(exps) == 0:
                total = total + self.alg.scalar(FieldElem.const(c))
            else:
                mu = exps.index(1)
                total = total + self.X_upper(mu).scale(c)
        return total

    # ---- canonical derivatives ----

    def canonical_partial(self, expr, wrt, index=None):
        """Derivative of an expression in the canonical variables.

        wrt is one of "xi" (upper spatial index), "P" (lower spatial index),
        "tau" or "M":

            d/d xi^j  =  -(P[j], .)      d/d P[j]  =  (xi^j, .)
            d/d tau   =  -(M, .)         d/d M     =  (tau, .)
        """
        alg = self.alg
        if wrt == "xi":
            return -alg.bracket(alg.momentum(index), expr)
        if wrt == "P":
            return alg.bracket(self.xi(index).scale(eta(index, index)), expr)
        if wrt == "tau":
            return -alg.bracket(alg.mass(), expr)
        if wrt == "M":
            return alg.bracket(self.tau(), expr)
        raise ValueError(f"unknown canonical variable {wrt!r}")

    # ---- informational output ----

    def special_conformal_shifts(self):
        """Normal forms of (C[mu], X[nu]); no closed target, shown for inspection."""
        out = {}
        for mu in range(4):
            for nu in range(4):
                out[(mu, nu)] = self.alg.bracket(
                    gen_expr(self.alg, ("C", mu)), self.X(nu)
                )
        return out
