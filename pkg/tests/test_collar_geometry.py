import numpy as np
import pytest

from nahmcollar import GeometryError, LogLaurentSeries, MetricJet, check_pe, \
    extrinsic_jets, intrinsic_geometry, weyl_EB
from nahmcollar.presets import berger_frame, flat_torus, hyperbolic_ball_metric, \
    pe_metric, quadratic_metric, round_s3
from helpers import random_diagonal_frame, random_metric_jet

I3 = np.eye(3)


def test_metric_jet_validation():
    with pytest.raises(GeometryError):
        MetricJet.from_coeffs([2.0 * I3], order=2)  # H(0) != I
    with pytest.raises(GeometryError):
        MetricJet.from_coeffs([I3, np.array([[0.0, 1.0, 0.0],
                                             [0.0, 0.0, 0.0],
                                             [0.0, 0.0, 0.0]])], order=2)
    with pytest.raises(GeometryError):
        MetricJet(LogLaurentSeries({(0, 0): I3, (1, 1): I3}, order=2))
    with pytest.raises(GeometryError):
        MetricJet(LogLaurentSeries({(-1, 0): I3, (0, 0): I3}, order=2))


def test_hyperbolic_ball_extrinsic_fixtures():
    jets = extrinsic_jets(hyperbolic_ball_metric(order=6))
    # S(x) = (x/2) / (1 - x^2/4) I
    assert np.allclose(jets.shape.coeff(1, 0), 0.5 * I3)
    assert np.allclose(jets.shape.coeff(3, 0), 0.125 * I3)
    assert jets.shape.coeff(0, 0).max() == 0.0
    # star_1 family = (1 - x^2/4) I
    assert np.allclose(jets.star1.coeff(0, 0), I3)
    assert jets.star1.entry(0, 0).coeff(1, 0) == 0.0
    assert np.allclose(jets.star1.coeff(2, 0), -0.25 * I3)
    assert np.allclose(jets.star2.coeff(2, 0), 0.25 * I3)


def test_star_family_inverse_pair(rng):
    metric = random_metric_jet(rng, order=5, scale=0.3)
    jets = extrinsic_jets(metric)
    resid = jets.star1.mul(jets.star2) - LogLaurentSeries.const(I3, 5)
    assert resid.max_abs() < 1e-12


def test_shape_riccati(rng):
    metric = random_metric_jet(rng, order=6, scale=0.3)
    jets = extrinsic_jets(metric)
    resid = jets.shape.d_dx() - jets.shape.mul(jets.shape) - jets.normal_curv
    assert resid.max_abs(k_max=4) < 1e-13


def test_round_sphere_intrinsic():
    intr = intrinsic_geometry(round_s3(), I3)
    assert np.allclose(intr.spin_conn, I3)
    assert np.allclose(intr.ricci, 2.0 * I3)
    assert intr.scalar == pytest.approx(6.0)
    assert np.allclose(intr.einstein, -I3)
    assert np.allclose(intr.schouten, 0.5 * I3)


def test_berger_intrinsic_fixture():
    intr = intrinsic_geometry(berger_frame(2.0), I3)
    assert np.allclose(intr.ricci, np.diag([8.0, -4.0, -4.0]))
    assert intr.scalar == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(intr.schouten, np.diag([8.0, -4.0, -4.0]))


def test_milnor_ricci_oracle(rng):
    # diagonal structure constants a: principal Ricci r_i = 2 mu_j mu_k
    # with mu_i = (a_j + a_k - a_i)/2
    for _ in range(20):
        frame = random_diagonal_frame(rng)
        a = np.array([frame.c[0, 1, 2], frame.c[1, 2, 0], frame.c[2, 0, 1]])
        mu = np.array([(a[1] + a[2] - a[0]) / 2.0,
                       (a[2] + a[0] - a[1]) / 2.0,
                       (a[0] + a[1] - a[2]) / 2.0])
        expected = np.diag([2.0 * mu[1] * mu[2],
                            2.0 * mu[2] * mu[0],
                            2.0 * mu[0] * mu[1]])
        intr = intrinsic_geometry(frame, I3)
        assert np.allclose(intr.ricci, expected, atol=1e-11)


def test_intrinsic_orthonormalization_consistency(rng):
    frame = round_s3()
    H = I3 + 0.4 * np.diag(rng.uniform(0.1, 1.0, 3))
    intr = intrinsic_geometry(frame, H)
    redo = intrinsic_geometry(intr.frame_orthonormal, I3)
    assert redo.scalar == pytest.approx(intr.scalar, rel=1e-10)
    assert np.allclose(redo.spin_conn, intr.spin_conn, atol=1e-12)


def test_intrinsic_validation():
    with pytest.raises(GeometryError):
        intrinsic_geometry(round_s3(), np.diag([1.0, 1.0, -1.0]))


def test_check_pe_fixtures():
    frame = round_s3()
    assert check_pe(frame, hyperbolic_ball_metric(order=6), 3) == [True, True, True]
    bumped = MetricJet.from_coeffs([I3, np.diag([1.0, 0.0, 0.0])], order=5)
    assert check_pe(flat_torus(), bumped, 1) == [False]
    b2 = berger_frame(2.0)
    assert check_pe(b2, pe_metric(b2, order=6), 3) == [True, True, True]
    assert check_pe(flat_torus(), quadratic_metric(np.diag([1.0, -1.0, 0.0])),
                    2) == [True, False]
    with pytest.raises(GeometryError):
        check_pe(frame, hyperbolic_ball_metric(order=6), 4)


def test_weyl_parts_flat_quadratic_fixture():
    # H = I + h2 x^2 on the flat torus: S0 = 0, N0 = -h2, so
    # w_E = -(1/2) tf(h2) and w_B = 0
    h2 = np.diag([1.0, -1.0, 0.0])
    w_e, w_b = weyl_EB(flat_torus(), quadratic_metric(h2))
    assert np.allclose(w_e, 0.5 * h2)
    assert np.allclose(w_b, np.zeros((3, 3)))


def test_weyl_parts_trace_free(rng):
    metric = random_metric_jet(rng, order=3, scale=0.4)
    w_e, w_b = weyl_EB(round_s3(), metric)
    assert abs(np.trace(w_e)) < 1e-12
    assert abs(np.trace(w_b)) < 1e-12
    assert np.allclose(w_b, w_b.T, atol=1e-12)
