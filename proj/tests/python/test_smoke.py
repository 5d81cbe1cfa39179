import math

import pytest

import acipmaps as am


def test_doubling_recovery():
    f = am.build_frho(am.uniform_density())
    for x in (0.1, 0.3, 0.7, 0.9):
        assert abs(f(x) - (2 * x) % 1.0) < 1e-10


def test_modulus_descriptor():
    w = am.parse_modulus("holder:alpha=0.5,C=1")
    assert w(0.25) == pytest.approx(0.5)
    assert w.t_omega == pytest.approx(1 / 64)
    with pytest.raises(ValueError, match=r"not in K \(concavity\)"):
        am.parse_modulus("holder:alpha=2,C=1")


def test_dini():
    assert am.dini_classify(am.make_holder(0.5))["integral"] == pytest.approx(2.0, abs=1e-8)
    assert am.dini_classify(am.make_log_nondini())["verdict"] == "non_dini"


def test_acip_map_invariance():
    rho = am.build_density(am.make_almost_lipschitz())
    assert rho.certified
    f = am.build_frho(rho)
    assert am.certify_map(f)
    assert am.invariance_residual(f, rho, 1024) <= 5e-6


def test_lebesgue_member():
    f = am.build_F_omega_member(am.make_log_nondini(), 7)
    assert f.path == "lebesgue"
    assert am.lebesgue_residual(f, 1024) <= 5e-6
    a = f.breakpoint
    assert am.check_extension_condition(f.branch_deriv(1, 0.0), f.branch_deriv(1, a)) <= 1e-10
    ok, interior, endpoint = am.check_c1_circle(f)
    assert ok


def test_lebesgue_extend_callable():
    f = am.lebesgue_extend(lambda x: 2 * x, lambda x: 2.0)
    assert f(0.75) == pytest.approx(0.5)


def test_transfer_apply_preserves_constants():
    out = am.transfer_apply(am.doubling_map(), [1.0] * 65)
    assert len(out) == 65
    assert max(abs(v - 1.0) for v in out) < 1e-14


def test_birkhoff():
    f = am.build_frho(am.build_density(am.make_holder(0.5)))
    avg = am.birkhoff_average(f, lambda x: 1.0 if x <= 0.5 else 0.0, 0.123, 20000)
    assert abs(avg - 0.5) < 0.05


def test_distortion_stub():
    f = am.build_F_omega_member(am.make_zero(), 1)
    r = am.classify_distortion(f, am.make_zero(), 20)
    assert r["verdict"] == "bounded"
    assert all(l["D"] <= 1e-12 for l in r["levels"])
    assert math.isfinite(r["sigma"])
