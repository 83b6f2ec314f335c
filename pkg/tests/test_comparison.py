import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eigenmoment.comparison import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    RadialFunction,
    balance_check,
    build_comparison_space,
    constant,
    radial_function_from_doc,
    spec_from_dict,
    stretching,
    tabulated,
    transplanted_convexity_check,
)
from eigenmoment.errors import InvalidBounds, InvalidWarping, OdeBlowup
from eigenmoment.quadrature import invert_monotone
from eigenmoment.warping import space_form_warping, validate_warping

ONE, ZERO = constant(1.0), constant(0.0)


def spec(b, m, R, g=ONE, h=ZERO):
    return ComparisonSpaceSpec(space_form_warping(b), BoundingFunctions(g, h), m, R)


def reciprocal_tangency():
    return RadialFunction(
        lambda r: 1.0 / (1.0 + np.asarray(r, dtype=float)),
        lambda r: -1.0 / (1.0 + np.asarray(r, dtype=float)) ** 2,
        label="reciprocal",
    )


def test_stretching_examples():
    s = stretching(BoundingFunctions(ONE, ZERO), 2.0, 513)
    assert np.allclose(s.values, s.grid.nodes, atol=1e-12)
    with pytest.raises(InvalidBounds):
        stretching(BoundingFunctions(constant(0.5), ZERO), 1.0, 129)
    s = stretching(BoundingFunctions(reciprocal_tangency(), ZERO), 1.0, 4097)
    r = s.grid.nodes
    assert np.allclose(s.values, r + r**2 / 2, atol=1e-12)
    assert s.values[-1] == pytest.approx(1.5, abs=1e-12)
    assert invert_monotone(s, 1.5) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("b,R", [(-1.0, 3.0), (0.0, 1.0), (1.0, 2.5)])
@pytest.mark.parametrize("m", [2, 3])
def test_degenerate_comparison_space(b, m, R):
    res = build_comparison_space(spec(b, m, R), 4097)
    r = res.grid.nodes
    assert np.max(np.abs(res.stretch.values - r)) <= 1e-10
    assert np.max(np.abs(res.W_on_base_grid() - np.asarray(space_form_warping(b).eval(r)))) <= 1e-8
    assert res.stretched_radius == pytest.approx(R, abs=1e-10)


def test_euclidean_fixed_point():
    res = build_comparison_space(spec(0.0, 3, 1.0), 1025)
    r = res.grid.nodes
    assert np.allclose(res.lambda_profile.values, r**2, atol=1e-14)
    W = res.W_model.warping
    s = np.linspace(0, 1, 57)
    assert np.allclose(W.eval(s), s, atol=1e-12)


@given(c=st.floats(0.0, 0.3), m=st.sampled_from([2, 3, 4]))
def test_mean_curvature_identity(c, m):
    res = build_comparison_space(spec(-1.0, m, 2.0, h=constant(c)), 2049)
    r = res.grid.nodes[1:-1]
    W = res.W_model.warping
    eta_W = W.deriv(r) / W.eval(r)
    expected = (m - 1) / np.tanh(r) - m * c
    assert np.max(np.abs((m - 1) * eta_W - expected)) <= 1e-6


@pytest.mark.parametrize("h", [0.0, 0.1, 0.4])
def test_w_model_is_normalized(h):
    res = build_comparison_space(spec(-1.0, 3, 2.0, g=reciprocal_tangency(), h=constant(h)), 2049)
    W = res.W_model.warping
    assert abs(float(W.eval(0.0))) <= 1e-6
    assert abs(float(W.deriv(0.0)) - 1.0) <= 1e-6
    assert validate_warping(W, 3, R=res.stretched_radius).valid
    assert np.all(res.lambda_profile.values[1:] > 0)
    assert np.all(np.diff(res.stretch.values) > 0)


def test_ode_blowup():
    with pytest.raises(OdeBlowup):
        build_comparison_space(spec(-1.0, 3, 50.0, h=constant(-8.0)), 1025)


def test_balance_hyperbolic_and_euclidean():
    res = build_comparison_space(spec(-1.0, 3, 5.0), 4097)
    report = balance_check(res, spec(-1.0, 3, 5.0))
    assert report.balanced and report.positive and report.worst_margin > 0
    assert report.to_dict()["balanced"] is True
    s = spec(0.0, 3, 1.0)
    report = balance_check(build_comparison_space(s, 2049), s)
    assert report.balanced and abs(report.worst_margin) < 1e-10


def test_balance_positivity_violation():
    w = space_form_warping(-1.0)
    h = RadialFunction(lambda r: np.where(np.asarray(r) > 0, 1.0 / np.tanh(np.maximum(r, 1e-6)), 1e6) + 1.0, lambda r: 0 * np.asarray(r))
    s = ComparisonSpaceSpec(w, BoundingFunctions(ONE, h), 2, 0.5)
    res = build_comparison_space(s, 257)
    report = balance_check(res, s)
    assert not report.positive and not report.balanced


def test_balance_strict_excludes_equality():
    s = spec(0.0, 3, 1.0)
    res = build_comparison_space(s, 1025)
    assert balance_check(res, s).balanced
    assert not balance_check(res, s, strict=True).balanced


@pytest.mark.parametrize("b,R", [(-1.0, 2.0), (0.0, 1.0), (1.0, 1.0)])
def test_convexity_degenerate_transplant(b, R):
    s = spec(b, 3, R)
    res = build_comparison_space(s, 2049)
    report = transplanted_convexity_check(res, s, k_small=10)
    if b > 0:
        # spherical caps are not balanced from below, so the check is gated off
        assert report.skipped and "balanced" in report.diagnostic
    else:
        assert report.holds and not report.skipped


def test_convexity_skipped_when_unbalanced():
    s = spec(-1.0, 3, 2.0, h=constant(0.1))
    report = transplanted_convexity_check(build_comparison_space(s, 1025), s)
    assert report.skipped and not report.holds
    assert "not balanced" in report.diagnostic


def test_spec_json_round_trip():
    doc = {"w": {"kind": "space_form", "b": -1.0}, "g": "one", "h": {"kind": "constant", "value": 0.1}, "m": 3, "R": 2.0}
    s = spec_from_dict(doc)
    out = s.to_dict()
    assert out["m"] == 3 and out["R"] == 2.0 and out["h"] == {"kind": "constant", "value": 0.1}
    assert spec_from_dict(out).to_dict() == out
    with pytest.raises(InvalidBounds):
        spec_from_dict({"w": {"kind": "space_form", "b": 0.0}, "m": 2})
    with pytest.raises(InvalidWarping):
        spec_from_dict({"w": {"kind": "space_form", "b": 1.0}, "m": 2, "R": 4.0})


def test_tabulated_bounds():
    r = np.linspace(0, 2, 201)
    g = tabulated(np.column_stack([r, 1 / (1 + r)]).tolist())
    ref = reciprocal_tangency()
    x = np.linspace(0.05, 1.95, 39)
    assert np.allclose(g(x), ref(x), atol=1e-6)
    assert np.allclose(g.derivative(x), ref.derivative(x), atol=1e-3)
    assert radial_function_from_doc("zero")(1.0) == 0.0
    with pytest.raises(InvalidBounds):
        radial_function_from_doc("half")
