"""Collar geometry of an asymptotically hyperbolic metric g = x^{-2}(dx^2 + h(x)).

The boundary metric family h(x) is carried as the Gram matrix series H(x) of
a fixed left-invariant frame, normalized to H(0) = I.  Extrinsic jets (shape
operator, mean curvature, normal curvature, Hodge star family) are computed
by series algebra; intrinsic curvature of a single slice comes from the
Koszul formula in the frame.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame_algebra import (EPS, IDENTITY, FrameModel, GeometryError,
                            covariant_ext_d, sk, symtf, tf)
from .log_series import LogLaurentSeries


@dataclass(frozen=True)
class MetricJet:
    """Truncated expansion H(x) = I + h_1 x + h_2 x^2 + ... of the boundary
    metric family in a fixed frame.  No log terms, H(0) = I, all
    coefficients symmetric."""

    H: LogLaurentSeries

    def __post_init__(self):
        H = self.H
        if any(l > 0 or k < 0 for (k, l) in H.coeffs):
            raise GeometryError("metric jets must be polynomial in x")
        if np.max(np.abs(H.coeff(0, 0) - IDENTITY)) > 1e-12:
            raise GeometryError("metric jets are normalized to H(0) = I")
        for (_, _), v in H.coeffs.items():
            if np.max(np.abs(v - v.T)) > 1e-12:
                raise GeometryError("metric jet coefficients must be symmetric")

    @classmethod
    def from_coeffs(cls, coeffs, order=None):
        """Build from a list [h_0, h_1, ...] of 3x3 matrices (h_0 = I)."""
        return cls(LogLaurentSeries.from_powers(coeffs, order))

    @property
    def order(self):
        return self.H.order

    def coeff(self, k):
        return self.H.coeff(k, 0)

    def evaluate(self, x):
        return self.H.evaluate(x)

    def padded(self, order):
        """Same polynomial, declared exact to a higher truncation order."""
        return MetricJet(LogLaurentSeries(self.H.coeffs, order))


@dataclass(frozen=True)
class ExtrinsicJets:
    """Radial jets of the slice geometry.

    shape        S(x) = -1/2 H^-1 dH/dx (endomorphism series)
    mean_curv    tr S(x) (scalar series)
    normal_curv  dS/dx - S^2 (radial curvature endomorphism series)
    star1        Hodge star Lambda^1 -> Lambda^2, sqrt(det H) H^-1
    star2        Hodge star Lambda^2 -> Lambda^1, inverse of star1
    """

    shape: LogLaurentSeries
    mean_curv: LogLaurentSeries
    normal_curv: LogLaurentSeries
    star1: LogLaurentSeries
    star2: LogLaurentSeries


def extrinsic_jets(metric):
    H = metric.H
    H_inv = H.invert()
    shape = H_inv.mul(H.d_dx()).scaled(-0.5)
    normal_curv = shape.d_dx() - shape.mul(shape)
    det = H.det()
    root = det.sqrt()
    star1 = H_inv.mul(root)
    star2 = H.mul(root.invert())
    return ExtrinsicJets(shape=shape, mean_curv=shape.trace(),
                         normal_curv=normal_curv, star1=star1, star2=star2)


@dataclass(frozen=True)
class IntrinsicGeometry:
    """Curvature data of a single slice (frame components).

    gamma      Christoffel array, nabla_{e_i} e_j = gamma[l, i, j] e_l
    spin_conn  Levi-Civita connection as a valued 1-form in the
               orthonormalized frame (equals the input frame when H = I)
    ricci      Ricci as a (0,2) symmetric matrix
    scalar     scalar curvature
    einstein   Ric - (s/2) h
    schouten   Ric - (s/4) h (3-dimensional Schouten, (0,2) components)
    frame_orthonormal  FrameModel of the orthonormalized frame
    """

    gamma: np.ndarray
    spin_conn: np.ndarray
    ricci: np.ndarray
    scalar: float
    einstein: np.ndarray
    schouten: np.ndarray
    frame_orthonormal: FrameModel


def _christoffel(c, H):
    H_inv = np.linalg.inv(H)
    # Koszul: 2<nabla_i e_j, e_k> = <[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>
    K = (np.einsum("lij,lk->ijk", c, H)
         - np.einsum("ljk,li->ijk", c, H)
         + np.einsum("lki,lj->ijk", c, H))
    return 0.5 * np.einsum("lk,ijk->lij", H_inv, K)


def intrinsic_geometry(frame, H):
    H = np.asarray(H, dtype=float)
    if not np.allclose(H, H.T, atol=1e-12):
        raise GeometryError("slice Gram matrix must be symmetric")
    if np.any(np.linalg.eigvalsh(H) <= 0):
        raise GeometryError("slice Gram matrix must be positive definite")
    c = frame.c
    gamma = _christoffel(c, H)
    # R(e_i, e_j) e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_{[e_i,e_j]} e_k
    riem = (np.einsum("ljk,pil->pijk", gamma, gamma)
            - np.einsum("lik,pjl->pijk", gamma, gamma)
            - np.einsum("mij,pmk->pijk", c, gamma))
    ricci = np.einsum("iiab->ab", riem)
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.trace(np.linalg.inv(H) @ ricci))
    einstein = ricci - 0.5 * scalar * H
    schouten = ricci - 0.25 * scalar * H

    if np.allclose(H, IDENTITY, atol=1e-13):
        frame_on = frame
        gamma_on = gamma
    else:
        # orthonormalize through the symmetric square root of H
        vals, vecs = np.linalg.eigh(H)
        L = vecs @ np.diag(np.sqrt(vals)) @ vecs.T
        L_inv = np.linalg.inv(L)
        c_on = np.einsum("ak,kij,ib,jc->abc", L, c, L_inv, L_inv)
        frame_on = FrameModel(c=c_on, vol=frame.vol * float(np.linalg.det(L)))
        gamma_on = _christoffel(c_on, IDENTITY)
    # soldering: Gamma^l_{jk} = -eps_{ilk} w^i_j  =>  w^i_j = -1/2 eps_{ilk} Gamma^l_{jk}
    spin_conn = -0.5 * np.einsum("ilk,ljk->ij", EPS, gamma_on)
    return IntrinsicGeometry(gamma=gamma, spin_conn=spin_conn, ricci=ricci,
                             scalar=scalar, einstein=einstein,
                             schouten=schouten, frame_orthonormal=frame_on)


def weyl_EB(frame, metric):
    """Electric and magnetic parts of the ambient Weyl tensor at the
    boundary, as trace-free endomorphisms (w_E, w_B)."""
    jets = extrinsic_jets(metric)
    # zeros broadcast: empty jet series report 0-d coefficients
    S0 = np.zeros((3, 3)) + jets.shape.coeff(0, 0)
    N0 = np.zeros((3, 3)) + jets.normal_curv.coeff(0, 0)
    mc0 = float(jets.mean_curv.coeff(0, 0))
    intr = intrinsic_geometry(frame, IDENTITY)
    w_e = 0.5 * tf(S0 @ S0 - N0 + intr.ricci - mc0 * S0)
    curl = covariant_ext_d(intr.spin_conn, S0.T, frame)
    w_b = symtf(curl)
    return w_e, w_b


def check_pe(frame, metric, order):
    """Poincare-Einstein conditions on the metric jet, order by order.

    Returns a list of booleans for orders 1..order:
      1: h_1 = 0
      2: h_2 = -schouten(h_0)
      3: tr_{h_0} h_3 = 0
    """
    if order not in (1, 2, 3):
        raise GeometryError("PE check supports orders 1 to 3")
    tol = 1e-12
    intr = intrinsic_geometry(frame, IDENTITY)
    results = []
    if order >= 1:
        results.append(bool(np.max(np.abs(metric.coeff(1))) <= tol))
    if order >= 2:
        results.append(bool(np.max(np.abs(metric.coeff(2) + intr.schouten)) <= tol))
    if order >= 3:
        results.append(bool(abs(float(np.trace(metric.coeff(3)))) <= tol))
    return results
