"""Formal log-series expansion of self-dual connections with a Nahm pole.

In radial gauge a self-dual connection on the collar solves
d alpha / dx = -star(x) f_alpha.  With the Nahm pole residue normalized to
the soldering form, the expansion reads

    alpha(x) = theta / x + alpha_0 + sum_{k>=1, l} alpha_{k,l} x^k (log x)^l

and the coefficients are produced order by order by inverting the model
operator g -> k g + (tr g) I - g^T on each irreducible part.  The only
formally free inputs are the boundary frame metric jet and the trace-free
symmetric seed at order one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .frame_algebra import (IDENTITY, FrameModel, GeometryError,
                            apply_form_operator, bracket_wedge, curvature,
                            decompose, sk, symtf, tf)
from .collar_geometry import MetricJet, extrinsic_jets, intrinsic_geometry
from .log_series import LogLaurentSeries


class ResidueTag(enum.Enum):
    ZERO = "zero"
    NAHM_POLE = "nahm-pole"
    INVALID = "invalid"


@dataclass(frozen=True)
class ResidueClass:
    """Classification of a candidate pole residue: the tag, and for an
    admissible Nahm pole the rotation that the residue equals."""

    tag: ResidueTag
    rotation: np.ndarray | None = None


def classify_residue(R, tol=1e-9):
    """Classify a candidate Nahm pole residue in the adjoint picture.

    Nonzero residues of an admissible pole are exactly the special
    orthogonal matrices (columns r_i satisfying r_1 = r_2 x r_3 cyclically).
    """
    R = np.asarray(R, dtype=float)
    if np.max(np.abs(R)) <= tol:
        return ResidueClass(tag=ResidueTag.ZERO)
    if np.max(np.abs(R.T @ R - IDENTITY)) <= tol and np.linalg.det(R) > 0:
        return ResidueClass(tag=ResidueTag.NAHM_POLE, rotation=R)
    return ResidueClass(tag=ResidueTag.INVALID)


def normalize_residue(R, sigma):
    """Conjugate the order-one seed so the residue becomes the identity."""
    if classify_residue(R).tag is not ResidueTag.NAHM_POLE:
        raise GeometryError("only rotation residues can be normalized")
    return np.asarray(R).T @ sigma @ np.asarray(R)


def solve_torsion(T, spin_conn):
    """Unique connection alpha with star0 d_alpha theta = T:
    alpha = w + sk T - symtf T + (1/6)(tr T) theta."""
    d = decompose(T)
    return spin_conn + d.sk - d.symtf + (d.trace / 6.0) * IDENTITY


def base_connection(frame, metric):
    """Order-zero coefficient alpha_0 = w - 2 S_0^T + (1/2)(tr S_0) theta."""
    jets = extrinsic_jets(metric)
    S0 = np.zeros((3, 3)) + jets.shape.coeff(0, 0)
    mc0 = float(jets.mean_curv.coeff(0, 0))
    intr = intrinsic_geometry(frame, IDENTITY)
    return intr.spin_conn - 2.0 * S0.T + 0.5 * mc0 * IDENTITY


@dataclass(frozen=True)
class BoundaryData:
    """Input of the formal expansion: frame, metric jet, trace-free
    symmetric order-one seed, truncation order N >= 2."""

    frame: FrameModel
    metric: MetricJet
    sigma: np.ndarray
    N: int

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        object.__setattr__(self, "sigma", s)
        if np.max(np.abs(s - s.T)) > 1e-12 or abs(np.trace(s)) > 1e-12:
            raise GeometryError("sigma must be symmetric and trace-free")
        if self.N < 2:
            raise GeometryError("expansion order must be at least 2")
        if self.metric.order < self.N + 1:
            raise GeometryError("metric jet must be known to order N + 1")


@dataclass(frozen=True)
class ConnectionExpansion:
    """Truncated expansion theta/x + alpha_0 + sum alpha_{k,l} x^k log^l x."""

    frame: FrameModel
    metric: MetricJet
    alpha0: np.ndarray
    coeffs: dict
    N: int

    def coeff(self, k, l=0):
        return self.coeffs.get((k, l), np.zeros((3, 3)))

    def tilde_series(self):
        """alpha - alpha_0 as a series (includes the pole)."""
        terms = {(-1, 0): IDENTITY}
        terms.update(self.coeffs)
        return LogLaurentSeries(terms, self.N)

    def series(self):
        terms = {(-1, 0): IDENTITY, (0, 0): self.alpha0}
        for key, v in self.coeffs.items():
            terms[key] = terms.get(key, 0.0) + v
        return LogLaurentSeries(terms, self.N)

    def evaluate(self, x):
        return self.series().evaluate(x)


def _rhs_series(frame, alpha0, star2, tilde, f0):
    """-star(x) (f_{alpha0} + d_{alpha0} tilde + 1/2 [tilde ^ tilde])."""
    Dmat = frame.ext_d_matrix()
    d_term = tilde.map(lambda g: g @ Dmat + bracket_wedge(alpha0, g))
    quad = tilde.mul(tilde, product=lambda a, b: 0.5 * bracket_wedge(a, b))
    f = LogLaurentSeries.const(f0, star2.order) + d_term + quad
    return f.mul(star2, product=apply_form_operator).scaled(-1.0)


def expand(data):
    """Solve the expansion to order N.  Raises if the input jet would put a
    coefficient outside the structural index set."""
    frame, metric, N = data.frame, data.metric, data.N
    jets = extrinsic_jets(metric)
    alpha0 = base_connection(frame, metric)
    f0 = curvature(alpha0, frame)
    star2 = jets.star2
    table = {}

    def tilde():
        terms = {(-1, 0): IDENTITY}
        terms.update(table)
        return LogLaurentSeries(terms, N)

    for k in range(1, N + 1):
        l_cap = (k + 1) // 2
        rhs = _rhs_series(frame, alpha0, star2, tilde(), f0)
        # structural index-set guard: nothing may appear above the log cap
        stray = max((float(np.max(np.abs(v)))
                     for (kk, l), v in rhs.coeffs.items()
                     if kk == k - 1 and l > l_cap), default=0.0)
        if stray > 1e-8:
            raise GeometryError(f"log cap violated at order {k}")
        if k == 1:
            # order one is special: the model operator kills the trace-free
            # symmetric part, so the log coefficient absorbs it and the
            # symmetric part of alpha_1 is the free seed.
            T11 = rhs.coeff(0, 1)
            a11 = sk(T11) / 2.0 + (np.trace(T11) / 9.0) * IDENTITY
            a11 = a11 + symtf(rhs.coeff(0, 0))
            T10 = rhs.coeff(0, 0) - a11
            a1 = sk(T10) / 2.0 + data.sigma + (np.trace(T10) / 9.0) * IDENTITY
            _store(table, (1, 1), a11)
            _store(table, (1, 0), a1)
            continue
        for l in range(l_cap, -1, -1):
            T = rhs.coeff(k - 1, l) - (l + 1) * table.get((k, l + 1), 0.0)
            d = decompose(np.asarray(T))
            a = d.sk / (k + 1) + d.symtf / (k - 1) + \
                (d.trace / (k + 2)) / 3.0 * IDENTITY
            _store(table, (k, l), a)
    return ConnectionExpansion(frame=frame, metric=metric, alpha0=alpha0,
                               coeffs=table, N=N)


def _store(table, key, value):
    v = np.asarray(value, dtype=float)
    if np.max(np.abs(v)) > 0.0:
        table[key] = v


@dataclass(frozen=True)
class ObstructionPair:
    """The order-one log coefficient computed two independent ways."""

    recursive: np.ndarray
    weyl: np.ndarray

    @property
    def max_diff(self):
        return float(np.max(np.abs(self.recursive - self.weyl)))


def obstruction(frame, metric):
    """Obstruction tensor to log-free expansions.

    recursive: symtf star_0 (star_2 theta - f_{alpha_0}) from the order-one
    recursion; weyl: 2 (w_B - w_E) from the boundary Weyl tensor.
    """
    from .collar_geometry import weyl_EB

    jets = extrinsic_jets(metric)
    S2 = np.zeros((3, 3)) + jets.star1.coeff(2, 0)
    alpha0 = base_connection(frame, metric)
    f0 = curvature(alpha0, frame)
    star0_back = np.zeros((3, 3)) + jets.star2.coeff(0, 0) if jets.star2.coeffs else IDENTITY
    recursive = symtf(apply_form_operator(S2.T - f0, star0_back))
    w_e, w_b = weyl_EB(frame, metric)
    return ObstructionPair(recursive=recursive, weyl=2.0 * (w_b - w_e))


def spin_boundary_value(frame, H):
    """Trace-free part of the order-one coefficient of the spin connection
    family of a Poincare-Einstein filling: (1/2) tf(Ric^sharp)."""
    intr = intrinsic_geometry(frame, H)
    ric_sharp = np.linalg.inv(np.asarray(H, dtype=float)) @ intr.ricci
    return 0.5 * tf(ric_sharp)


def is_smooth(expansion, tol=1e-10):
    """True when every log coefficient is below tol (expansion polyhomogeneous
    without logs, equivalent to alpha_{1,1} = 0)."""
    return all(float(np.max(np.abs(v))) <= tol
               for (k, l), v in expansion.coeffs.items() if l >= 1)


def self_duality_residual(expansion):
    """Max coefficient of d alpha/dx + star(x) f_alpha through x^{N-1}."""
    frame, N = expansion.frame, expansion.N
    jets = extrinsic_jets(expansion.metric)
    Dmat = frame.ext_d_matrix()
    alpha = expansion.series()
    f = alpha.map(lambda g: g @ Dmat) + \
        alpha.mul(alpha, product=lambda a, b: 0.5 * bracket_wedge(a, b))
    residual = alpha.d_dx() + f.mul(jets.star2, product=apply_form_operator)
    return residual.max_abs(k_max=N - 1)


def rescale_boundary(frame, metric, lam):
    """Constant conformal rescaling h_0 -> lam^2 h_0, absorbed into the frame
    so the Gram normalization H(0) = I is kept: theta -> lam theta."""
    if lam <= 0:
        raise GeometryError("conformal factor must be positive")
    new_frame = FrameModel(c=frame.c / lam, vol=frame.vol * lam ** 3)
    new_metric = MetricJet(metric.H.rescale(1.0 / lam))
    return new_frame, new_metric
