import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlhelm.nonlinearity import (
    Nonlinearity,
    Weight,
    check_ineq14,
    dump_model,
    load_model,
    model_from_dict,
    split_f1_f2,
    validate_f,
    validate_g,
)


@pytest.fixture
def power(power_indicator):
    return power_indicator


def test_power_eval_values(power):
    assert power.f(0.0, 2.0) == 8.0
    assert power.F(0.0, 2.0) == 4.0
    assert power.f(1.5, 2.0) == 0.0  # outside the support
    assert power.F(-3.0, 2.0) == 0.0


def test_superquadratic_growth_samples(power):
    vals = [power.F(0.0, 10.0 ** e) / 10.0 ** (2 * e) for e in range(1, 6)]
    assert all(b > 10 * a for a, b in zip(vals, vals[1:]))


def test_antiderivative_property_all_kinds():
    kinds = [
        Nonlinearity(kind="power", q=Weight(kind="bump", center=0, halfwidth=1.5), p=3.4, s0=0.7),
        Nonlinearity(kind="log", q=Weight(kind="indicator", a=-1, b=2), s=1.7, s0=1.2),
        Nonlinearity(kind="table", q=Weight(kind="constant", scale=0.8), s0=1.0,
                     table_u=tuple(np.linspace(-8, 8, 33)),
                     table_f=tuple(np.linspace(-8, 8, 33) ** 3)),
    ]
    rng = np.random.default_rng(0)
    for nl in kinds:
        for _ in range(25):
            x = rng.uniform(-1.2, 1.9)
            u = rng.uniform(-5, 5)
            d = 1e-6 * max(1.0, abs(u))
            fd = (nl.F(x, u + d) - nl.F(x, u - d)) / (2 * d)
            f = nl.f(x, u)
            assert abs(fd - f) <= 1e-6 * max(1.0, abs(f)), (nl.kind, x, u)


def test_fu_matches_finite_differences(power):
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, u = rng.uniform(-0.9, 0.9), rng.uniform(-4, 4)
        d = 1e-6
        fd = (power.f(x, u + d) - power.f(x, u - d)) / (2 * d)
        assert abs(fd - power.fu(x, u)) < 1e-5 * max(1.0, abs(power.fu(x, u)))


def test_growth_bound_power(power):
    # |f| <= a (1 + |u|^{p-1}) with a = max q
    rng = np.random.default_rng(2)
    x = rng.uniform(-2, 2, 500)
    u = rng.standard_normal(500) * 10.0 ** rng.uniform(-3, 5, 500)
    assert np.all(np.abs(power.f(x, u)) <= 1.0 * (1.0 + np.abs(u) ** 3) + 1e-12)


def test_split_f1_f2_values(power):
    # u = s0/2: f1 = f(x, s0)/4 = 1/4, f2 = f(1/2) - 1/4 = -1/8
    f1, f2 = split_f1_f2(power, 0.0, 0.5)
    assert abs(f1 - 0.25) < 1e-15
    assert abs(f2 + 0.125) < 1e-15
    # above the threshold f1 = f, f2 = 0
    f1, f2 = split_f1_f2(power, 0.0, 2.0)
    assert f1 == power.f(0.0, 2.0) and f2 == 0.0
    f1, f2 = split_f1_f2(power, 0.0, -3.0)
    assert f1 == power.f(0.0, -3.0) and f2 == 0.0
    # at zero
    assert split_f1_f2(power, 0.0, 0.0) == (0.0, 0.0)


def test_f1_continuity_and_sum(power):
    u = np.linspace(-3, 3, 1201)
    x = 0.3
    f1 = power.f1(np.full_like(u, x), u)
    f2 = power.f2(np.full_like(u, x), u)
    f = power.f(np.full_like(u, x), u)
    assert_allclose(f1 + f2, f, atol=1e-14)
    # matching values across the threshold by construction
    for s in (power.s0, -power.s0):
        d = 1e-9
        assert abs(power.f1(x, s + d) - power.f1(x, s - d)) < 1e-6


def test_f2_vanishes_off_support_and_above_threshold(power):
    assert power.f2(5.0, 0.3) == 0.0
    assert power.f2(0.0, 1.0) == 0.0
    assert power.f2(0.0, -1.7) == 0.0


def test_F1_antiderivative_of_f1(power):
    rng = np.random.default_rng(3)
    for _ in range(40):
        x, u = rng.uniform(-0.9, 0.9), rng.uniform(-3, 3)
        d = 1e-6
        fd = (power.F1(x, u + d) - power.F1(x, u - d)) / (2 * d)
        assert abs(fd - power.f1(x, u)) < 1e-5 * max(1.0, abs(power.f1(x, u)))


def test_validate_f_power_passes(power):
    rep = validate_f(power)
    assert rep.all_passed
    assert rep.passed("strong_monotone")


def test_validate_f_zero_fails_superquadratic():
    rep = validate_f(Nonlinearity.zero())
    assert not rep.passed("f3")


def test_validate_f_gaussian_fails_f0():
    nl = Nonlinearity(kind="power", q=Weight(kind="gaussian", width=1.0), p=4.0)
    rep = validate_f(nl)
    assert not rep.passed("f0")


def test_validate_f_linear_table_fails_f2():
    # f = u has a linear part at 0: (f2) must fail
    u = np.linspace(-10, 10, 41)
    nl = Nonlinearity(kind="table", q=Weight(kind="indicator", a=-1, b=1), s0=1.0,
                      table_u=tuple(u), table_f=tuple(u))
    rep = validate_f(nl)
    assert not rep.passed("f2")


def test_validate_g_power_gaussian_passes(power_radial):
    rep = validate_g(power_radial)
    assert rep.all_passed


def test_validate_g2_direct_inequality(power_radial):
    # F = q u^4/4 <= f u / 2 = q u^4 / 2 holds pointwise
    rng = np.random.default_rng(4)
    r = np.abs(rng.uniform(0, 6, 200))
    u = rng.standard_normal(200) * 3
    F = power_radial.F(r, u)
    fu = power_radial.f(r, u) * u
    assert np.all(F >= -1e-15) and np.all(F <= 0.5 * fu + 1e-12)


def test_validate_g3_fails_for_increasing_weight():
    # q increasing in r makes dF/dr > 0 somewhere
    u = np.linspace(-10, 10, 41)
    nl = Nonlinearity(kind="table", q=Weight(kind="bump", center=4.0, halfwidth=3.0),
                      s0=1.0, table_u=tuple(u), table_f=tuple(u ** 3), radial=True)
    rep = validate_g(nl)
    assert not rep.passed("g3")
    assert math.isfinite(rep.checks["g3"].worst_point[0])  # witness recorded


def test_ineq14_identity_case(power):
    # s = 0, v = 0 gives exactly zero
    u = 1.7
    expr = power.f1(0.0, u) * 0.0 + power.F1(0.0, u) - power.F1(0.0, u)
    assert expr == 0.0


def test_ineq14_sampling_power(power):
    rep = check_ineq14(power, n_samples=50_000, seed=7)
    assert rep.n_violations == 0
    assert rep.worst_margin <= 1e-12


def test_ineq14_boundary_s_minus_one(power):
    rng = np.random.default_rng(8)
    x = rng.uniform(-1.5, 1.5, 3000)
    u = rng.standard_normal(3000) * 10.0 ** rng.uniform(-2, 2, 3000)
    v = rng.standard_normal(3000) * 10.0 ** rng.uniform(-2, 2, 3000)
    expr = power.f1(x, u) * (-0.5 * u) + power.F1(x, u) - power.F1(x, v)
    scale = np.maximum(1.0, np.abs(power.F1(x, u)))
    assert np.all(expr <= 1e-12 * scale)


def test_ineq14_strong_form_with_f(power):
    # the shipped model satisfies the strengthened monotonicity, so the
    # inequality also holds with f itself
    rep = check_ineq14(power, n_samples=50_000, seed=9, use_f=True)
    assert rep.n_violations == 0


def test_model_json_roundtrip(tmp_path, power):
    path = tmp_path / "model.json"
    dump_model(power, path)
    back = load_model(path)
    assert back.kind == "power" and back.p == 4.0 and back.s0 == 1.0
    assert back.q.kind == "indicator" and back.q.a == -1.0


def test_model_spec_example_schema():
    nl = model_from_dict({"kind": "power", "p": 4.0,
                          "q": {"type": "indicator", "a": -1.0, "b": 1.0, "scale": 1.0},
                          "s0": 1.0, "radial": False})
    assert nl.f(0.0, 2.0) == 8.0


def test_model_unknown_keys_rejected():
    with pytest.raises(ValueError, match="unknown model keys"):
        model_from_dict({"kind": "power", "p": 4.0, "bogus": 1,
                         "q": {"type": "constant", "scale": 1.0}})
    with pytest.raises(ValueError, match="unknown weight keys"):
        model_from_dict({"kind": "power", "p": 4.0,
                         "q": {"type": "constant", "scale": 1.0, "oops": 2}})


def test_table_requires_bracketing_zero():
    with pytest.raises(ValueError):
        Nonlinearity(kind="table", q=Weight(kind="constant"), s0=1.0,
                     table_u=(1.0, 2.0, 3.0, 4.0), table_f=(1.0, 2.0, 3.0, 4.0))
