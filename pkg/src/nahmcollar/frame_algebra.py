"""Pointwise algebra of su(2)-valued forms on a framed homogeneous 3-manifold.

Everything is carried in the adjoint picture: the su(2) generators sigma_i/2
are identified with the standard basis of R^3, so a Lie-algebra-valued 1-form
is a real 3x3 matrix M with M[i, j] the coefficient of theta^j tensor
sigma_i/2 (value index first, coframe index second).  Valued 2-forms use the
basis (theta^2^theta^3, theta^3^theta^1, theta^1^theta^2), which makes the
Hodge star of the identity Gram matrix the identity matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Levi-Civita tensor, EPS[i, j, k] = epsilon_{ijk}
EPS = np.zeros((3, 3, 3))
for _i, _j, _k, _s in ((0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0),
                       (0, 2, 1, -1.0), (2, 1, 0, -1.0), (1, 0, 2, -1.0)):
    EPS[_i, _j, _k] = _s

IDENTITY = np.eye(3)


class GeometryError(ValueError):
    """Raised when geometric input fails validation."""


# ----------------------------------------------------------------------
# irreducible decomposition under SO(3)


@dataclass(frozen=True)
class Decomp:
    """Skew, trace-free-symmetric and trace parts of a 3x3 matrix."""

    sk: np.ndarray
    symtf: np.ndarray
    trace: float

    def recompose(self):
        return self.sk + self.symtf + (self.trace / 3.0) * IDENTITY


def decompose(m):
    m = np.asarray(m, dtype=float)
    sk = 0.5 * (m - m.T)
    sym = 0.5 * (m + m.T)
    tr = float(np.trace(sym))
    return Decomp(sk=sk, symtf=sym - (tr / 3.0) * IDENTITY, trace=tr)


def symtf(m):
    return decompose(m).symtf


def sk(m):
    return decompose(m).sk


def tf(m):
    m = np.asarray(m, dtype=float)
    return m - (np.trace(m) / 3.0) * IDENTITY


# ----------------------------------------------------------------------
# Hodge stars


def hodge1(H):
    """Matrix of the Hodge star Lambda^1 -> Lambda^2 for the frame Gram
    matrix H: sqrt(det H) H^{-1}."""
    H = np.asarray(H, dtype=float)
    if not np.allclose(H, H.T, atol=1e-12):
        raise GeometryError("Gram matrix must be symmetric")
    det = np.linalg.det(H)
    if det <= 0 or np.any(np.linalg.eigvalsh(H) <= 0):
        raise GeometryError("Gram matrix must be positive definite")
    return np.sqrt(det) * np.linalg.inv(H)


def hodge2(H):
    """Matrix of the Hodge star Lambda^2 -> Lambda^1; inverse of hodge1."""
    H = np.asarray(H, dtype=float)
    if not np.allclose(H, H.T, atol=1e-12):
        raise GeometryError("Gram matrix must be symmetric")
    det = np.linalg.det(H)
    if det <= 0 or np.any(np.linalg.eigvalsh(H) <= 0):
        raise GeometryError("Gram matrix must be positive definite")
    return H / np.sqrt(det)


def apply_form_operator(m, op):
    """Apply a coframe operator (matrix acting on form components) to the
    form index of a valued form; value index untouched."""
    return np.asarray(m) @ np.asarray(op).T


# ----------------------------------------------------------------------
# wedge-brackets


def bracket_wedge_einsum(g, d):
    """Reference implementation of [g ^ d] straight from the definition:
    eps_{ijk} eps_{abm} g_{ia} d_{jb}."""
    return np.einsum("ijk,abm,ia,jb->km", EPS, EPS, g, d)


def bracket_wedge(g, d):
    """Components of [g ^ d] for valued 1-forms g, d: the value bracket is
    the cross product, the result lives in the 2-form basis.  Symmetric and
    bilinear in (g, d); closed form of the double-epsilon contraction."""
    g = np.asarray(g, dtype=float)
    d = np.asarray(d, dtype=float)
    gt, dt = g.T, d.T
    trg, trd = np.trace(g), np.trace(d)
    return (gt @ dt + dt @ gt - trg * dt - trd * gt
            + (trg * trd - np.trace(g @ d)) * IDENTITY)


def wedge_bracket_star(g, d, star0):
    """Hodge star of (1/2)[g ^ d]: a valued 1-form, i.e. an endomorphism.

    star0 is the 1-form star matrix (hodge1 output); the 2-form result is
    mapped back through its inverse.
    """
    two_form = 0.5 * bracket_wedge(g, d)
    return apply_form_operator(two_form, np.linalg.inv(star0))


# ----------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class FrameModel:
    """Homogeneous framed 3-manifold: structure constants c[k, i, j] with
    [e_i, e_j] = c^k_{ij} e_k (so d theta^k = -1/2 c^k_{ij} theta^i^theta^j)
    and the total coframe volume."""

    c: np.ndarray
    vol: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "c", c)
        if c.shape != (3, 3, 3):
            raise GeometryError("structure constants must be a 3x3x3 array")
        if np.max(np.abs(c + np.swapaxes(c, 1, 2))) > 1e-14:
            raise GeometryError("structure constants must be antisymmetric")
        jac = (np.einsum("mjk,lim->lijk", c, c)
               + np.einsum("mki,ljm->lijk", c, c)
               + np.einsum("mij,lkm->lijk", c, c))
        if np.max(np.abs(jac)) > 1e-12:
            raise GeometryError("structure constants violate the Jacobi identity")
        if self.vol <= 0:
            raise GeometryError("frame volume must be positive")

    def ext_d_matrix(self):
        """Matrix D with dg = g @ D for a constant valued 1-form g (2-form
        basis components)."""
        return -0.5 * np.einsum("abc,bcm->am", self.c, EPS)


def covariant_ext_d(w, g, frame):
    """Covariant exterior derivative d_w g = dg + [w ^ g] of a constant
    valued 1-form, in the 2-form basis."""
    return np.asarray(g) @ frame.ext_d_matrix() + bracket_wedge(w, g)


def curvature(w, frame):
    """Curvature 2-form f_w = dw + (1/2)[w ^ w] of a constant connection."""
    w = np.asarray(w, dtype=float)
    return w @ frame.ext_d_matrix() + 0.5 * bracket_wedge(w, w)
