import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import phi
from fdpnoise.audit import (anti_bound, audit_noise, center_mass_sup, integer_bound,
                            ratio_check, tv_shift)
from fdpnoise.cnd import concentration, construct, sample, tulap_reference_cdf, tulap_variance
from fdpnoise.discrete import named_distribution, unique_sens1
from fdpnoise.figures import EPS_GRID, central_probs
from fdpnoise.noise import (NoiseSpec, RivalNoise, cnd_noise, laplace_noise, normal_noise)
from fdpnoise.pmf import DiscretePMF
from fdpnoise.tradeoff import fixed_point, iterate, make_eps_delta, make_gdp

POINT = RivalNoise.from_pmf(DiscretePMF.from_dict({0: 1.0}, label="point"))
BUILTIN_F = [make_eps_delta(1, 0), make_eps_delta(1, 0.05), make_gdp(1), make_eps_delta(0.5, 0.1)]


def cnd_grid(f, half_width=40, n=80001):
    c = construct(f)
    x = np.linspace(-half_width, half_width, n)
    return RivalNoise.from_cdf_grid(x, c.cdf(x), c.label)


# ---------------------------------------------------------------- center_mass_sup

def test_center_mass_examples():
    for t in [0.5, 1, 3.7]:
        cm = center_mass_sup(POINT, t)
        assert cm.value == 1.0 and cm.a == pytest.approx(0, abs=0.5)
    cm = center_mass_sup(laplace_noise(1 / 5), 1)
    assert cm.value == pytest.approx(1 - math.exp(-2.5), abs=1e-12)
    assert cm.a == pytest.approx(0, abs=1e-3)


def test_center_mass_half_open_window_on_integers():
    dl = RivalNoise.from_pmf(named_distribution("discrete-laplace", eps=1))
    p = lambda x: (math.e - 1) / (math.e + 1) * math.exp(-abs(x))
    # (a-1, a+1] holds two integers; (a-3/2, a+3/2] holds three
    assert center_mass_sup(dl, 2).value == pytest.approx(p(0) + p(1), abs=1e-12)
    assert center_mass_sup(dl, 3).value == pytest.approx(p(-1) + p(0) + p(1), abs=1e-12)
    assert center_mass_sup(dl, 3).value == pytest.approx(0.8022, abs=1e-4)
    # grid and exact routes agree
    a = np.arange(-5, 5.01, 0.25)
    assert center_mass_sup(dl, 3, a).value == pytest.approx(center_mass_sup(dl, 3).value, abs=1e-15)


def test_center_mass_rejects():
    for bad in [0, -1]:
        with pytest.raises(ValueError):
            center_mass_sup(POINT, bad)


def test_center_mass_samples_exact():
    xs = np.array([0.0, 0.1, 0.2, 5.0])
    cm = center_mass_sup(RivalNoise.from_samples(xs), 0.25)
    assert cm.value == 0.75


# ---------------------------------------------------------------- anti_bound

def test_anti_bound_examples():
    assert anti_bound(make_gdp(1), 1) == pytest.approx(1 - 2 * phi(-0.5), abs=1e-14)
    assert anti_bound(make_gdp(1), 2) == pytest.approx(1 - 2 * phi(-1), abs=1e-14)
    assert anti_bound(make_eps_delta(5, 0), 1) == pytest.approx(
        (math.exp(5) - 1) / (math.exp(5) + 1), abs=1e-14)
    for bad in [0, -2, 1.5]:
        with pytest.raises(ValueError):
            anti_bound(make_gdp(1), bad)


@pytest.mark.parametrize("f", BUILTIN_F, ids=lambda f: f.label)
def test_tightness_at_integers(f):
    c = construct(f)
    for t in range(1, 11):
        achieved = c.cdf(t / 2) - c.cdf(-t / 2)
        assert abs(achieved - anti_bound(f, t)) <= 1e-9
        assert concentration(c, t) == anti_bound(f, t)


# ---------------------------------------------------------------- audit_noise

@pytest.mark.parametrize("f", BUILTIN_F[:3], ids=lambda f: f.label)
def test_audit_cnd_grid_is_tight(f):
    rep = audit_noise(cnd_grid(f), f, 10)
    assert rep.passed
    assert max(abs(r.margin) for r in rep.checks) <= 1e-6


def test_audit_point_mass_violates():
    rep = audit_noise(POINT, make_eps_delta(1, 0), 1)
    assert not rep.passed
    r = rep.checks[0]
    assert r.achieved == 1 and r.bound == pytest.approx(0.462117, abs=1e-6)
    assert any("proves" in n for n in rep.notes)
    rep = audit_noise(RivalNoise.from_samples(np.zeros(100_000)), make_eps_delta(1, 0), 1)
    assert not rep.passed
    # ten samples cannot refute anything inside the confidence band
    rep = audit_noise(RivalNoise.from_samples(np.zeros(10)), make_eps_delta(1, 0), 1)
    assert rep.passed


def test_audit_laplace_samples():
    xs = np.random.default_rng(12345).laplace(0, 1 / 5, 10 ** 6)
    rep = audit_noise(NoiseSpec(RivalNoise.from_samples(xs)), make_eps_delta(5, 0), 1)
    assert rep.passed
    r = rep.checks[0]
    assert r.achieved == pytest.approx(0.918, abs=3e-3)
    assert r.bound == pytest.approx(0.987, abs=1e-3)


def test_audit_integer_noise_uses_integer_windows():
    u = RivalNoise.from_pmf(unique_sens1(make_gdp(1)).pmf)
    rep = audit_noise(u, make_gdp(1), 8)
    assert rep.passed
    assert max(abs(r.margin) for r in rep.checks) < 1e-12
    assert [r.location["t"] for r in rep.checks] == list(range(9))
    assert integer_bound(make_gdp(1), 1) == anti_bound(make_gdp(1), 3)


def test_audit_not_applicable_at_other_sensitivity():
    rep = audit_noise(NoiseSpec(laplace_noise(1), sensitivity=2), make_eps_delta(1, 0), 3)
    assert not rep.applicable and rep.checks == []


def test_audit_empirical_band_avoids_false_violation():
    # samples from the CND itself sit on the bound; the band absorbs sampling error
    f = make_eps_delta(1, 0)
    xs = sample(construct(f), 3, 20_000)
    rep = audit_noise(RivalNoise.from_samples(xs), f, 4)
    assert rep.passed


# ---------------------------------------------------------------- ratio_check

def test_ratio_self():
    c = construct(make_eps_delta(1, 0.05))
    rep = ratio_check(c, cnd_noise(c), np.linspace(0, 5, 41))
    assert rep.passed


def test_ratio_examples():
    c5 = construct(make_eps_delta(5, 0))
    rep = ratio_check(c5, laplace_noise(0.2), [0.25])
    r = rep.checks[0]
    den = 2 * tulap_reference_cdf(5, 0.75) - 1
    assert r.achieved == pytest.approx((1 - math.exp(-1.25)) / den, abs=1e-9)
    assert r.achieved < 1
    c1 = construct(make_eps_delta(1, 0))
    tulap = RivalNoise.from_cdf(lambda x: tulap_reference_cdf(1, x), "Tulap(1)")
    r = ratio_check(c1, tulap, [0.5]).checks[0]
    expect = (2 * tulap_reference_cdf(1, 0.5) - 1) / (2 * tulap_reference_cdf(1, 1.0) - 1)
    assert r.achieved == pytest.approx(expect, abs=1e-9)
    assert r.achieved < 1


@pytest.mark.parametrize("eps", [0.5, 1, 3, 5])
def test_ratio_laplace_property(eps):
    rep = ratio_check(construct(make_eps_delta(eps, 0)), laplace_noise(1 / eps),
                      np.linspace(0, 6, 61))
    assert rep.passed


def test_ratio_detects_concentrated_rival():
    rep = ratio_check(construct(make_eps_delta(1, 0)), normal_noise(0.05), [0.5])
    assert not rep.passed


# ---------------------------------------------------------------- central probabilities of Tulap and Laplace

NOISES = {
    "laplace": laplace_noise(1.0),
    "normal": normal_noise(0.7),
    "cnd-f(1,.05)": cnd_noise(construct(make_eps_delta(1, 0.05))),
    "cnd-G1": cnd_noise(construct(make_gdp(1))),
    "dlap": RivalNoise.from_pmf(named_distribution("discrete-laplace", eps=0.7)),
    "dgauss": RivalNoise.from_pmf(named_distribution("discrete-gaussian", sigma=1.5)),
}


@pytest.mark.parametrize("name", sorted(NOISES))
def test_window_mass_below_tv(name):
    noise = NOISES[name]
    for t in [0.3, 0.5, 1, 1.7, 2, 3]:
        assert center_mass_sup(noise, t).value <= tv_shift(noise, t) + 1e-9


def test_tv_shift_closed_forms():
    for t in [0.5, 1, 2]:
        assert tv_shift(laplace_noise(1), t) == pytest.approx(1 - math.exp(-t / 2), abs=1e-9)
        assert tv_shift(normal_noise(1), t) == pytest.approx(2 * phi(t / 2) - 1, abs=1e-9)


def test_tulap_laplace_crossing():
    t_half, l_half = central_probs(EPS_GRID, 0.5)
    assert np.all(t_half >= l_half)
    t_q, l_q = central_probs(EPS_GRID, 0.25)
    sign = np.sign(t_q - l_q)
    changes = np.nonzero(np.diff(sign))[0]
    assert len(changes) == 1
    assert 1.5 < EPS_GRID[changes[0]] and EPS_GRID[changes[0] + 1] < 2.5
    assert sign[0] > 0 and sign[-1] < 0


def test_variance_cross_check():
    assert tulap_variance(5) == pytest.approx(0.097, abs=2e-3)
    assert 2 * (1 / 5) ** 2 == pytest.approx(0.08, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5), st.floats(0, 0.3), st.integers(1, 8))
def test_anti_bound_parity(eps, delta, t):
    f = make_eps_delta(eps, delta)
    k, odd = divmod(t, 2)
    start = fixed_point(f) if odd else 0.5
    expect = 1 - 2 * (iterate(f, k)(start) if k else start)
    assert anti_bound(f, t) == pytest.approx(expect, abs=1e-12)


def test_bare_pmf_accepted():
    dg = named_distribution("discrete-gaussian", sigma=0.5)
    a = audit_noise(dg, make_gdp(1))
    b = audit_noise(RivalNoise.from_pmf(dg), make_gdp(1))
    assert [c.achieved for c in a.checks] == [c.achieved for c in b.checks]
    assert not a.passed
    assert center_mass_sup(dg, 3).value == center_mass_sup(RivalNoise.from_pmf(dg), 3).value
    with pytest.raises(TypeError):
        audit_noise([0.5, 0.5], make_gdp(1))
