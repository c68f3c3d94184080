"""Derived observables: localisation, spin, canonical variables, velocity.

Everything asserted here was computed by hand from the definitions or follows
from an antisymmetry argument; nothing is a recorded engine output.
"""

from fractions import Fraction

import pytest

from confalg.conformal import build_algebra
from confalg.errors import DegreeError
from confalg.field import FE_M, FieldElem
from confalg.observables import Observables
from confalg.poly import Polynomial


@pytest.fixture(scope="module")
def alg():
    return build_algebra()


@pytest.fixture(scope="module")
def obs(alg):
    return Observables(alg)


# ---------------------------------------------------------------------------
# localisation observable
# ---------------------------------------------------------------------------

def test_momentum_localisation_pairs(alg, obs):
    # (P[mu], X[nu]) is minus the metric times the identity: the localisation
    # observable is conjugate to momentum with lower indices on both sides
    for mu in range(4):
        for nu in range(4):
            got = alg.bracket(alg.momentum(mu), obs.X(nu))
            if mu != nu:
                assert got.is_zero(), (mu, nu)
            else:
                want = alg.scalar(-1 if mu == 0 else 1)
                assert got == want, mu


def test_localisation_transforms_as_vector(alg, obs):
    assert alg.bracket(alg.J(0, 1), obs.X(0)) == obs.X(1).scale(-1)
    assert alg.bracket(alg.J(0, 1), obs.X(2)).is_zero()
    assert alg.bracket(alg.D(), obs.X(3)) == obs.X(3).scale(-1)


def test_upper_index_is_metric_contraction(obs):
    assert obs.X_upper(0) == obs.X(0)
    assert obs.X_upper(2) == obs.X(2).scale(-1)


# ---------------------------------------------------------------------------
# spin
# ---------------------------------------------------------------------------

def test_ordering_gap_vanishes(obs):
    # the two orderings of the spin contraction differ by commutator terms
    # that the antisymmetric contraction kills, so the gap must normalize to
    # zero for every component
    for mu in range(4):
        assert obs.ordering_gap(mu).is_zero(), mu


def test_spin_orthogonal_to_momentum(alg, obs):
    # S^mu P_mu contracts an alternating tensor with a symmetric product of
    # two momentum coefficients, hence vanishes identically
    total = alg.zero()
    for mu in range(4):
        total = total + alg.mul(obs.S_upper(mu), alg.scalar(FieldElem.momentum(mu)))
    assert total.is_zero()


def test_spin_tensor_is_antisymmetric(obs):
    assert (obs.Stensor(0, 1) + obs.Stensor(1, 0)).is_zero()
    assert (obs.Stensor(1, 3) + obs.Stensor(3, 1)).is_zero()
    assert obs.Stensor(2, 2).is_zero()


def test_spatial_spin_closes_as_rotations(alg, obs):
    # (sigma_1, sigma_2) = sigma_3 and cyclic: the canonical spin components
    # generate rotations among themselves
    assert alg.bracket(obs.sigma(1), obs.sigma(2)) == obs.sigma(3)
    assert alg.bracket(obs.sigma(2), obs.sigma(3)) == obs.sigma(1)
    assert alg.bracket(obs.sigma(3), obs.sigma(1)) == obs.sigma(2)


def test_spin_commutes_with_momentum_and_mass(alg, obs):
    assert alg.bracket(obs.sigma(1), alg.mass()).is_zero()
    assert alg.bracket(obs.sigma(1), alg.momentum(2)).is_zero()
    assert alg.bracket(obs.sigma(3), alg.momentum(0)).is_zero()


# ---------------------------------------------------------------------------
# velocity
# ---------------------------------------------------------------------------

def test_velocity_is_momentum_over_mass(alg, obs):
    for mu in range(4):
        want = alg.scalar(FieldElem.momentum(mu) * FE_M.inv())
        assert obs.V(mu) == want, mu


# ---------------------------------------------------------------------------
# canonical derivatives
# ---------------------------------------------------------------------------

def test_canonical_partials_are_kronecker(alg, obs):
    minus_one = alg.scalar(-1)
    one = alg.scalar(1)
    for j in (1, 2, 3):
        assert obs.canonical_partial(obs.xi(j), "xi", j) == minus_one, j
        assert obs.canonical_partial(alg.momentum(j), "P", j) == one, j
    assert obs.canonical_partial(obs.xi(1), "xi", 2).is_zero()
    assert obs.canonical_partial(alg.momentum(1), "P", 3).is_zero()
    assert obs.canonical_partial(obs.tau(), "tau") == one
    assert obs.canonical_partial(alg.mass(), "M") == one


def test_canonical_cross_partials_vanish(alg, obs):
    assert obs.canonical_partial(alg.momentum(1), "xi", 1).is_zero()
    assert obs.canonical_partial(obs.xi(2), "P", 2).is_zero()
    assert obs.canonical_partial(obs.tau(), "P", 1).is_zero()
    assert obs.canonical_partial(obs.xi(1), "tau").is_zero()
    assert obs.canonical_partial(alg.mass(), "tau").is_zero()


def test_canonical_partial_rejects_unknown_variable(alg, obs):
    with pytest.raises(ValueError):
        obs.canonical_partial(alg.mass(), "sigma", 1)


# ---------------------------------------------------------------------------
# conformal factors on X and affine evaluation
# ---------------------------------------------------------------------------

def test_lambda_on_x_by_kind(alg, obs):
    assert obs.lambda_at_X(("D",)) == alg.scalar(-1)
    assert obs.lambda_at_X(("P", 0)).is_zero()
    assert obs.lambda_at_X(("J", 1, 2)).is_zero()
    assert obs.lambda_at_X(("C", 1)) == obs.X(1).scale(-2)


def test_affine_evaluation_matches_term_by_term(alg, obs):
    p = Polynomial.var(1) * Fraction(3) + Polynomial.one() * Fraction(2)
    want = obs.X_upper(1).scale(3) + alg.scalar(FieldElem.const(Fraction(2)))
    assert obs.eval_affine_at_X(p) == want


def test_affine_evaluation_rejects_higher_degree(obs):
    with pytest.raises(DegreeError):
        obs.eval_affine_at_X(Polynomial.var(0) * Polynomial.var(0))
    with pytest.raises(DegreeError):
        obs.eval_affine_at_X(Polynomial.var(1) * Polynomial.var(2))


def test_special_conformal_shifts_cover_all_components(obs):
    shifts = obs.special_conformal_shifts()
    assert set(shifts) == {(mu, nu) for mu in range(4) for nu in range(4)}
    assert all(hasattr(v, "pretty") for v in shifts.values())
