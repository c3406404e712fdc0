import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonconvex_ag.errors import DimensionMismatchError, ParameterError
from nonconvex_ag.penalty import (
    PenaltyKind,
    PenaltySpec,
    dc_smooth_grad,
    dc_smooth_lipschitz,
    dc_smooth_value,
    penalty_value,
    prox_l1,
    soft_threshold,
)


def scad_ref(t, lam, a):
    # textbook piecewise form, written out scalar by scalar
    t = abs(t)
    if t <= lam:
        return lam * t
    if t <= a * lam:
        return (2 * a * lam * t - t * t - lam * lam) / (2 * (a - 1))
    return lam * lam * (a + 1) / 2


def mcp_ref(t, lam, g):
    t = abs(t)
    if t <= g * lam:
        return lam * t - t * t / (2 * g)
    return g * lam * lam / 2


def test_spec_validation():
    with pytest.raises(ParameterError):
        PenaltySpec.scad(-0.1)
    with pytest.raises(ParameterError):
        PenaltySpec.scad(1.0, a=2.0)
    with pytest.raises(ParameterError):
        PenaltySpec.mcp(1.0, gamma=1.0)
    with pytest.raises(ParameterError):
        PenaltySpec("lasso", 1.0, 3.0)
    assert PenaltySpec("SCAD", 1, 3.7).kind is PenaltyKind.SCAD
    assert PenaltySpec.mcp(0.2).with_lambda(0.4) == PenaltySpec.mcp(0.4)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0, 3.7, 5.0, -2.5])
def test_scad_reference_values(t):
    spec = PenaltySpec.scad(1.0, 3.7)
    assert penalty_value(spec, t) == pytest.approx(scad_ref(t, 1.0, 3.7), abs=1e-14)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 3.0, 4.0, -1.5])
def test_mcp_reference_values(t):
    spec = PenaltySpec.mcp(1.0, 3.0)
    assert penalty_value(spec, t) == pytest.approx(mcp_ref(t, 1.0, 3.0), abs=1e-14)


def test_known_points():
    # SCAD plateau (a+1) lam^2 / 2 and MCP plateau gamma lam^2 / 2
    assert penalty_value(PenaltySpec.scad(2.0, 3.0), 100.0) == pytest.approx(8.0)
    assert penalty_value(PenaltySpec.mcp(2.0, 3.0), 100.0) == pytest.approx(6.0)
    assert penalty_value(PenaltySpec.scad(0.0, 3.7), 5.0) == 0.0


def test_continuity_at_knots():
    for spec in (PenaltySpec.scad(0.7, 3.7), PenaltySpec.mcp(0.7, 2.5)):
        knots = [spec.lam, spec.shape * spec.lam]
        for k in knots:
            lo, hi = penalty_value(spec, k - 1e-10), penalty_value(spec, k + 1e-10)
            assert abs(lo - hi) < 1e-9
            lo, hi = dc_smooth_grad(spec, k - 1e-10), dc_smooth_grad(spec, k + 1e-10)
            assert abs(lo - hi) < 1e-9


def test_array_and_scalar_outputs():
    spec = PenaltySpec.scad(1.0)
    assert isinstance(penalty_value(spec, 1.5), float)
    out = dc_smooth_grad(spec, np.array([0.0, 2.0, -2.0]))
    assert out.shape == (3,)
    assert out[1] == -out[2]


@settings(max_examples=300, deadline=None)
@given(kind=st.sampled_from(["scad", "mcp"]),
       lam=st.floats(0.0, 5.0),
       shape=st.floats(2.05, 10.0),
       t=st.floats(-50.0, 50.0))
def test_split_reconstructs_penalty(kind, lam, shape, t):
    spec = PenaltySpec(kind, lam, shape)
    total = lam * abs(t) + dc_smooth_value(spec, t)
    assert total == pytest.approx(penalty_value(spec, t), abs=1e-12 * (1 + lam * abs(t)))


@settings(max_examples=200, deadline=None)
@given(kind=st.sampled_from(["scad", "mcp"]),
       lam=st.floats(0.01, 3.0),
       shape=st.floats(2.05, 8.0),
       s=st.floats(-30.0, 30.0),
       t=st.floats(-30.0, 30.0))
def test_remainder_gradient_is_lipschitz_and_monotone(kind, lam, shape, s, t):
    spec = PenaltySpec(kind, lam, shape)
    gs, gt = dc_smooth_grad(spec, s), dc_smooth_grad(spec, t)
    L = dc_smooth_lipschitz(spec)
    assert abs(gs - gt) <= L * abs(s - t) + 1e-12
    # h is concave, so h' is nonincreasing
    if s < t:
        assert gs >= gt - 1e-15
    assert abs(gs) <= lam + 1e-15


def test_remainder_gradient_finite_differences():
    rng = np.random.default_rng(0)
    for kind in ("scad", "mcp"):
        spec = PenaltySpec(kind, 0.8, 3.2)
        t = rng.uniform(-5, 5, 500)
        # stay away from the kinks of h'
        knots = np.array([spec.lam, spec.shape * spec.lam])
        t = t[np.min(np.abs(np.abs(t)[:, None] - knots), axis=1) > 1e-3]
        h = 1e-6
        fd = (dc_smooth_value(spec, t + h) - dc_smooth_value(spec, t - h)) / (2 * h)
        np.testing.assert_allclose(dc_smooth_grad(spec, t), fd, rtol=1e-6, atol=1e-8)


def test_lipschitz_constants():
    assert dc_smooth_lipschitz(PenaltySpec.scad(1.0, 3.7)) == pytest.approx(1 / 2.7)
    assert dc_smooth_lipschitz(PenaltySpec.mcp(1.0, 3.0)) == pytest.approx(1 / 3)


def test_soft_threshold():
    np.testing.assert_array_equal(soft_threshold(np.array([-3.0, -0.5, 0.0, 0.5, 3.0]), 1.0),
                                  [-2.0, 0.0, 0.0, 0.0, 2.0])
    assert soft_threshold(2.0, 0.0) == 2.0
    with pytest.raises(ParameterError):
        soft_threshold(1.0, -1.0)


def test_prox_l1_leaves_unpenalized_coordinates():
    x = np.array([1.0, 0.2, -3.0])
    y = np.array([0.5, 0.0, 1.0])
    mask = np.array([False, True, True])
    out = prox_l1(x, y, 1.0, 0.5, mask)
    np.testing.assert_allclose(out, [0.5, 0.0, -3.5])
    np.testing.assert_allclose(prox_l1(x, y, 1.0, 0.0, mask), x - y)


def test_prox_l1_is_argmin():
    # brute-force minimization of the one-dimensional prox objective
    rng = np.random.default_rng(1)
    grid = np.linspace(-30, 30, 600001)
    for _ in range(20):
        x, y, c, lam = rng.normal(0, 3), rng.normal(0, 3), rng.uniform(0.1, 2), rng.uniform(0, 2)
        obj = y * grid + (grid - x) ** 2 / (2 * c) + lam * np.abs(grid)
        u = prox_l1(np.array([x]), np.array([y]), c, lam, np.array([True]))[0]
        assert abs(u - grid[np.argmin(obj)]) < 2e-4


def test_prox_l1_errors():
    with pytest.raises(DimensionMismatchError):
        prox_l1(np.zeros(2), np.zeros(3), 1.0, 1.0, np.ones(2, bool))
    with pytest.raises(ParameterError):
        prox_l1(np.zeros(2), np.zeros(2), 0.0, 1.0, np.ones(2, bool))
    with pytest.raises(ParameterError):
        prox_l1(np.zeros(2), np.zeros(2), 1.0, -1.0, np.ones(2, bool))
