import numpy as np
import pytest

from nahmcollar import FrameModel, GeometryError, bracket_wedge, covariant_ext_d, \
    curvature, decompose, hodge1, hodge2, wedge_bracket_star
from nahmcollar.frame_algebra import apply_form_operator, bracket_wedge_einsum
from nahmcollar.presets import flat_torus, round_s3

I3 = np.eye(3)


def test_decompose_recompose(rng):
    m = rng.normal(size=(3, 3))
    d = decompose(m)
    assert np.allclose(d.recompose(), m)
    assert np.allclose(d.sk, -d.sk.T)
    assert np.allclose(d.symtf, d.symtf.T)
    assert abs(np.trace(d.symtf)) < 1e-13


def test_hodge1_fixture():
    assert np.allclose(hodge1(np.diag([4.0, 1.0, 1.0])),
                       np.diag([0.5, 2.0, 2.0]))
    assert np.allclose(hodge1(I3), I3)


def test_hodge2_inverse(rng):
    s = _sym(rng)
    H = I3 + 0.2 * s / max(1.0, np.max(np.abs(s)))
    assert np.allclose(hodge1(H) @ hodge2(H), I3, atol=1e-12)


def test_hodge_oracle_orthonormal_frame(rng):
    # build H = A^T A from a random invertible A; the star computed by
    # transporting the orthonormal-frame star through the basis change
    # (coefficients by A^{-T}, 2-form basis by the cofactor matrix) must
    # agree with the closed form
    A = rng.normal(size=(3, 3)) + 2.0 * I3
    if np.linalg.det(A) < 0:  # the coframe change must preserve orientation
        A[:, 0] = -A[:, 0]
    H = A.T @ A
    cof = np.linalg.det(A) * np.linalg.inv(A).T
    oracle = cof.T @ np.linalg.inv(A.T)
    assert np.allclose(hodge1(H), oracle, atol=1e-10)


def test_hodge_validation():
    with pytest.raises(GeometryError):
        hodge1(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    with pytest.raises(GeometryError):
        hodge1(np.diag([1.0, -1.0, 1.0]))
    with pytest.raises(GeometryError):
        hodge2(np.zeros((3, 3)))


def test_bracket_wedge_matches_definition(rng):
    for _ in range(50):
        g = rng.normal(size=(3, 3))
        d = rng.normal(size=(3, 3))
        assert np.allclose(bracket_wedge(g, d), bracket_wedge_einsum(g, d),
                           atol=1e-12)
        assert np.allclose(bracket_wedge(g, d), bracket_wedge(d, g))


def test_bracket_wedge_identities(rng):
    g = rng.normal(size=(3, 3))
    # [theta ^ g] = (tr g) I - g^T
    assert np.allclose(bracket_wedge(I3, g), np.trace(g) * I3 - g.T)
    # (1/2)[g ^ g] = cofactor matrix of g
    cof = np.linalg.det(g) * np.linalg.inv(g).T
    assert np.allclose(0.5 * bracket_wedge(g, g), cof, atol=1e-10)
    assert np.allclose(0.5 * bracket_wedge(I3, I3), I3)


def test_wedge_bracket_star_fixtures(rng):
    assert np.allclose(wedge_bracket_star(I3, I3, I3), I3)
    g = rng.normal(size=(3, 3))
    assert np.allclose(2.0 * wedge_bracket_star(I3, g, I3),
                       np.trace(g) * I3 - g.T)
    gamma = np.diag([1.0, 2.0, 3.0])
    assert np.allclose(wedge_bracket_star(gamma, gamma, I3),
                       np.diag([6.0, 3.0, 2.0]))


def test_frame_validation():
    bad = np.zeros((3, 3, 3))
    bad[0, 1, 1] = 1.0  # not antisymmetric in the lower pair
    with pytest.raises(GeometryError):
        FrameModel(c=bad, vol=1.0)
    good = round_s3()
    with pytest.raises(GeometryError):
        FrameModel(c=good.c, vol=-1.0)
    nonjac = np.zeros((3, 3, 3))
    # [e1,e2]=e1, [e2,e3]=e2, [e3,e1]=e3: the cyclic sum is -(e1+e2+e3)
    nonjac[0, 0, 1], nonjac[0, 1, 0] = 1.0, -1.0
    nonjac[1, 1, 2], nonjac[1, 2, 1] = 1.0, -1.0
    nonjac[2, 2, 0], nonjac[2, 0, 2] = 1.0, -1.0
    with pytest.raises(GeometryError):
        FrameModel(c=nonjac, vol=1.0)


def test_round_sphere_exterior_derivative():
    frame = round_s3()
    assert np.allclose(frame.ext_d_matrix(), -2.0 * I3)
    # the soldering form is parallel for the round spin connection w = theta
    assert np.allclose(covariant_ext_d(I3, I3, frame), np.zeros((3, 3)))
    # curvature of the spin connection: f = dw + (1/2)[w^w] = -2I + I = -I
    assert np.allclose(curvature(I3, frame), -I3)


def test_flat_torus_derivative_vanishes(rng):
    frame = flat_torus()
    g = rng.normal(size=(3, 3))
    assert np.allclose(g @ frame.ext_d_matrix(), np.zeros((3, 3)))


def test_apply_form_operator_acts_on_form_index(rng):
    m = rng.normal(size=(3, 3))
    op = rng.normal(size=(3, 3))
    out = apply_form_operator(m, op)
    # row i of m holds the components of the i-th value slot
    for i in range(3):
        assert np.allclose(out[i], op @ m[i])


def _sym(rng):
    a = rng.normal(size=(3, 3))
    return 0.5 * (a + a.T)
