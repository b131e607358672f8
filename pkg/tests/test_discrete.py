import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import phi
from fdpnoise.cnd import construct
from fdpnoise.discrete import (DiscreteCND, dominance_audit_discrete, moments,
                               named_distribution, round_cnd, sample_discrete, sens2_interval,
                               sens2_pure_dp, theta3, unique_sens1, verify_discrete_cnd)
from fdpnoise.pmf import DiscretePMF
from fdpnoise.tradeoff import (dominates, fixed_point, iterate, make_eps_delta, make_gdp,
                               roc_discrete)

E = math.e
FOUR = [make_eps_delta(1, 0), make_eps_delta(1, 0.05), make_gdp(1), make_eps_delta(0, 0.5)]
four_ids = [f.label for f in FOUR]
ROUND_UNIFORM = DiscretePMF.from_dict({-1: 0.25, 0: 0.5, 1: 0.25}, label="round(U)")
FLOOR_UNIFORM = DiscretePMF.from_dict({-1: 0.5, 0: 0.5}, label="floor(U)")


def dlap(eps, x):
    return (math.exp(eps) - 1) / (math.exp(eps) + 1) * math.exp(-eps * abs(x))


# ---------------------------------------------------------------- constructions

def test_round_cnd_examples():
    r = round_cnd(construct(make_eps_delta(1, 0)), 1)
    assert r.pmf.pmf(0) == pytest.approx((E - 1) / (E + 1), abs=1e-12)
    g = round_cnd(construct(make_gdp(1)), 1).pmf
    for x in range(-5, 6):
        assert g.pmf(x) == pytest.approx(phi(x + 0.5) - phi(x - 0.5), abs=1e-12)
    with pytest.raises(ValueError):
        round_cnd(construct(make_gdp(1)), 0)
    with pytest.raises(ValueError):
        round_cnd(construct(make_gdp(1)), 1.5)


def test_round_cnd_staircase():
    """Each period of 6 holds five equal levels and one half-step between them."""
    pmf = round_cnd(construct(make_eps_delta(1, 0.05)), 6).pmf
    assert pmf.is_symmetric(1e-15)
    for sign in (1, -1):
        levels = []
        for k in range(2):
            block = [pmf.pmf(sign * x) for x in range(6 * k + 4, 6 * k + 9)]
            assert max(block) - min(block) <= 1e-9
            levels.append(block[0])
        step = pmf.pmf(sign * 9)
        assert step == pytest.approx((levels[0] + levels[1]) / 2, abs=1e-9)
        assert levels[1] < step < levels[0]


@pytest.mark.parametrize("f", [make_eps_delta(1, 0), make_eps_delta(1, 0.05)], ids=lambda f: f.label)
@pytest.mark.parametrize("delta", [1, 2, 3, 6])
def test_rounding_validity(f, delta):
    rep = verify_discrete_cnd(round_cnd(construct(f), delta))
    assert rep.passed, rep.to_table()
    assert len(rep.checks_named("dominance")) == delta


def test_unique_sens1_examples():
    for eps in [0.5, 1, 3]:
        u = unique_sens1(make_eps_delta(eps, 0)).pmf
        for x in range(-6, 7):
            assert u.pmf(x) == pytest.approx(dlap(eps, x), abs=1e-10)
    f = make_gdp(1)
    assert unique_sens1(f).pmf.pmf(0) == pytest.approx(1 - 2 * fixed_point(f), abs=1e-14)
    assert unique_sens1(f).pmf.pmf(0) == pytest.approx(2 * phi(0.5) - 1, abs=1e-12)
    with pytest.raises(ValueError):
        unique_sens1(make_eps_delta(0, 0))


@pytest.mark.parametrize("f", FOUR, ids=four_ids)
def test_uniqueness(f):
    a = unique_sens1(f).pmf
    b = round_cnd(construct(f), 1).pmf
    x = np.arange(min(a.lo, b.lo), max(a.hi, b.hi) + 1)
    assert np.max(np.abs(a.pmf(x) - b.pmf(x))) <= 1e-9


@pytest.mark.parametrize("f", FOUR, ids=four_ids)
def test_central_mass_identity(f):
    u = unique_sens1(f).pmf
    c = fixed_point(f)
    for t in range(21):
        mass = float(u.mass[np.abs(u.support) <= t].sum())
        assert abs(mass - (1 - 2 * iterate(f, t)(c) if t else 1 - 2 * c)) <= 1e-10


def test_named_distribution_examples():
    assert named_distribution("discrete-laplace", eps=1).pmf(0) == pytest.approx((E - 1) / (E + 1), abs=1e-15)
    dg = named_distribution("discrete-gaussian", sigma=1)
    c = fixed_point(roc_discrete(dg, dg.shift(1)).to_tradeoff())
    assert c == pytest.approx(0.5 * (1 - dg.pmf(0)), abs=1e-9)
    assert c == pytest.approx(0.301, abs=1e-3)
    assert named_distribution("rounded-gaussian", sigma=1).pmf(0) == pytest.approx(0.382925, abs=1e-6)
    for name, kw in [("discrete-laplace", {"eps": 0}), ("rounded-gaussian", {"sigma": -1}),
                     ("discrete-gaussian", {"sigma": 0}), ("skellam", {"sigma": 1})]:
        with pytest.raises(ValueError):
            named_distribution(name, **kw)


@pytest.mark.parametrize("sigma", [0.3, 1, 2.5, 10])
def test_discrete_gaussian_theta_oracle(sigma):
    q = math.exp(-1 / (2 * sigma ** 2))
    norm = float(mpmath.jtheta(3, 0, q))
    dg = named_distribution("discrete-gaussian", sigma=sigma)
    for x in [0, 1, 3]:
        assert dg.pmf(x) == pytest.approx(math.exp(-x * x / (2 * sigma ** 2)) / norm, rel=1e-12)
    assert theta3(q, int(10 * sigma + 20)) == pytest.approx(norm, rel=1e-14)


def test_rounded_gaussian_sigma():
    rg = named_distribution("rounded-gaussian", sigma=2)
    for x in [-3, 0, 4]:
        assert rg.pmf(x) == pytest.approx(phi((x + 0.5) / 2) - phi((x - 0.5) / 2), abs=1e-14)


def test_sens2_examples():
    lo, hi = sens2_interval(1)
    assert lo == pytest.approx(0.5938455, abs=1e-7)
    assert hi == pytest.approx(0.6502446, abs=1e-7)
    d = sens2_pure_dp(1, 0.62)
    assert d.delta == 2
    rep = verify_discrete_cnd(d)
    assert rep.passed
    with pytest.raises(ValueError, match="0.5938"):
        sens2_pure_dp(1, 0.58)


def test_sens2_cdf_values():
    d = sens2_pure_dp(1, 0.62).pmf
    assert d.cdf(0) == pytest.approx(0.62, abs=1e-14)
    assert d.cdf(-1) == pytest.approx(0.38, abs=1e-14)
    assert d.cdf(-2) == pytest.approx(math.exp(-1) * 0.62, abs=1e-14)
    assert d.cdf(-3) == pytest.approx(math.exp(-1) * 0.38, abs=1e-14)


@pytest.mark.parametrize("eps", [0.3, 1, 2.5])
def test_sens2_interval_is_sharp(eps):
    """Candidates just outside the interval fail the exact ROC check."""
    from fdpnoise.discrete import _sens2_cdf_pmf
    lo, hi = sens2_interval(eps)
    f = make_eps_delta(eps, 0)
    for F0 in np.linspace(lo, hi, 5):
        assert verify_discrete_cnd(sens2_pure_dp(eps, F0)).passed
    for F0 in [lo - 1e-4, hi + 1e-4]:
        try:
            cand = DiscreteCND(_sens2_cdf_pmf(eps, F0), f, 2)
        except ValueError:
            continue
        assert not verify_discrete_cnd(cand).passed


# ---------------------------------------------------------------- verification

def test_verify_examples():
    assert verify_discrete_cnd(unique_sens1(make_eps_delta(1, 0))).passed
    dg = named_distribution("discrete-gaussian", sigma=1)
    rep = verify_discrete_cnd(DiscreteCND(dg, make_gdp(1), 1))
    assert not rep.passed
    assert [r.name for r in rep.violations] != []
    assert all(r.name != "symmetry" for r in rep.violations)
    rep = verify_discrete_cnd(DiscreteCND(ROUND_UNIFORM, make_eps_delta(0, 0.5), 1))
    assert rep.passed
    assert rep.checks_named("recurrence")[0].achieved == 0


def test_verify_flags_asymmetry():
    rep = verify_discrete_cnd(DiscreteCND(FLOOR_UNIFORM, make_eps_delta(0, 0.5), 1))
    assert not rep.checks_named("symmetry")[0].passed


# ---------------------------------------------------------------- dominance

def test_dominance_discrete_examples():
    u = unique_sens1(make_eps_delta(1, 0))
    rep = dominance_audit_discrete(u, u.pmf, (0, 0), 10)
    assert rep.passed and max(abs(r.margin) for r in rep.checks) < 1e-12
    rival = named_distribution("discrete-laplace", eps=0.8)
    rep = dominance_audit_discrete(u, rival, (0, 0), 1)
    r = [c for c in rep.checks if c.location["t"] == 1][0]
    assert r.bound == pytest.approx(1 - 2 * math.exp(-1) / (1 + E), abs=1e-12)
    assert r.bound == pytest.approx(0.8022, abs=1e-4)
    assert r.achieved == pytest.approx(1 - 2 * math.exp(-0.8) / (1 + math.exp(0.8)), abs=1e-12)
    assert rep.passed
    assert "verified" in rep.assumptions[0]


def test_round_floor_counterexample():
    assert moments(ROUND_UNIFORM, 2) == 0.5
    assert moments(FLOOR_UNIFORM, 2) == 0.5
    mean = moments(FLOOR_UNIFORM, 1)
    assert moments(FLOOR_UNIFORM, 2) - mean ** 2 == 0.25
    dcnd = DiscreteCND(ROUND_UNIFORM, make_eps_delta(0, 0.5), 1)
    assert dominance_audit_discrete(dcnd, FLOOR_UNIFORM, (-3, 3), 3).passed


def test_dominance_discrete_flags_non_private_rival():
    u = unique_sens1(make_eps_delta(1, 0))
    rep = dominance_audit_discrete(u, named_distribution("discrete-laplace", eps=2), (0, 0), 3)
    assert not rep.passed
    assert "NOT satisfied" in rep.assumptions[0]


def test_dominance_discrete_phi():
    u = unique_sens1(make_gdp(1))
    rival = named_distribution("discrete-laplace", eps=0.5)
    rep = dominance_audit_discrete(u, rival, (-2, 2), 5, phi=lambda x: x ** 2)
    assert rep.passed
    assert len(rep.checks_named("E phi(|.|)")) == 5


def test_dominance_discrete_requires_sensitivity_one():
    with pytest.raises(ValueError):
        dominance_audit_discrete(sens2_pure_dp(1, 0.62), ROUND_UNIFORM)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.4, 3), st.floats(0, 0.2),
       st.lists(st.floats(0, 1), min_size=1, max_size=5).filter(lambda w: sum(w) > 0.1))
def test_postprocessed_rivals_are_dominated(eps, delta, half):
    f = make_eps_delta(eps, delta)
    dcnd = unique_sens1(f)
    pmf = dcnd.pmf
    # keep support width <= 41 (tail beyond is counted as truncated mass)
    keep = np.abs(pmf.support) <= 20
    base = DiscretePMF(int(pmf.support[keep][0]), pmf.mass[keep],
                       pmf.truncated_mass + float(pmf.mass[~keep].sum()))
    w = np.r_[half[:0:-1], half]
    w = w / w.sum()
    rival = DiscretePMF(base.lo - (len(half) - 1), np.convolve(base.mass, w),
                        base.truncated_mass)
    # truncation perturbs the exact ROC by at most the dropped mass
    tol = 1e-9 + 2 * rival.truncated_mass
    assert dominates(roc_discrete(rival, rival.shift(1)), f, tol).holds
    rep = dominance_audit_discrete(dcnd, rival, (-3, 3), 10)
    assert "verified" in rep.assumptions[0]
    assert rep.passed, rep.to_table(5)
    # integer anti-concentration bound
    c = fixed_point(f)
    for t in range(6):
        sup = max(float(rival.mass[np.abs(rival.support - a) <= t].sum()) for a in range(-3, 4))
        assert sup <= 1 - 2 * (iterate(f, t)(c) if t else c) + 1e-9


# ---------------------------------------------------------------- moments and sampling

def test_moments():
    u = unique_sens1(make_gdp(1)).pmf
    assert moments(u, 1) == 0.0 and moments(u, 3) == 0.0
    assert moments(ROUND_UNIFORM, 2) == 0.5
    with pytest.raises(ValueError):
        moments(u, 0)


def test_sample_discrete():
    u = unique_sens1(make_eps_delta(1, 0))
    assert sample_discrete(u, 3, 0).size == 0
    s = sample_discrete(u, 3, 100_000)
    assert abs(np.mean(s == 0) - 0.462117) < 0.01
    assert np.array_equal(s[:100], sample_discrete(u, 3, 100))
    g = unique_sens1(make_gdp(1))
    s = sample_discrete(g, 9, 100_000)
    assert abs(np.mean(np.abs(s) <= 1) - (1 - 2 * phi(-1.5))) < 0.01
    assert abs(np.mean(np.abs(s) <= 1) - 0.8664) < 0.01
    with pytest.raises(ValueError):
        sample_discrete(u, 1, -2)
