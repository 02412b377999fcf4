"""Reference boundary geometries used by the CLI and the test suite."""
from __future__ import annotations

import math

import numpy as np

from .frame_algebra import EPS, IDENTITY, FrameModel, GeometryError
from .collar_geometry import MetricJet, intrinsic_geometry
from .log_series import LogLaurentSeries

DEFAULT_ORDER = 9


def flat_torus():
    """Flat 3-torus frame (abelian structure constants, unit volume)."""
    return FrameModel(c=np.zeros((3, 3, 3)), vol=1.0)


def round_s3():
    """Round 3-sphere of radius 1: [e_i, e_j] = 2 eps_{ijk} e_k."""
    return FrameModel(c=2.0 * np.transpose(EPS, (2, 0, 1)), vol=2.0 * math.pi ** 2)


def berger_frame(lam):
    """Berger sphere diag(lam^2, 1, 1) on the round frame, re-expressed in
    its own orthonormal coframe (theta^1 scaled by lam)."""
    if lam <= 0:
        raise GeometryError("Berger parameter must be positive")
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[0, 2, 1] = 2.0 * lam, -2.0 * lam
    c[1, 2, 0], c[1, 0, 2] = 2.0 / lam, -2.0 / lam
    c[2, 0, 1], c[2, 1, 0] = 2.0 / lam, -2.0 / lam
    return FrameModel(c=c, vol=lam * 2.0 * math.pi ** 2)


def flat_metric(order=DEFAULT_ORDER):
    return MetricJet.from_coeffs([IDENTITY], order=order)


def hyperbolic_ball_metric(order=DEFAULT_ORDER):
    """H(x) = (1 - x^2/4)^2 I: the round-sphere conformal infinity of
    hyperbolic 4-space in geodesic boundary coordinates."""
    coeffs = {(0, 0): IDENTITY, (2, 0): -0.5 * IDENTITY, (4, 0): IDENTITY / 16.0}
    return MetricJet(LogLaurentSeries(coeffs, order))


def quadratic_metric(h2, order=DEFAULT_ORDER):
    """H(x) = I + h2 x^2 for a symmetric h2."""
    h2 = np.asarray(h2, dtype=float)
    return MetricJet(LogLaurentSeries({(0, 0): IDENTITY, (2, 0): h2}, order))


def pe_metric(frame, order=DEFAULT_ORDER):
    """Poincare-Einstein jet to second order: H(x) = I - schouten(h_0) x^2."""
    intr = intrinsic_geometry(frame, IDENTITY)
    return quadratic_metric(-intr.schouten, order=order)


def get_preset(name, order=DEFAULT_ORDER, h2=None):
    """Resolve a preset name to (frame, metric jet).

    Names: t3-flat, s3-hyperbolic, t3-h2, berger:<lam>.
    """
    if name == "t3-flat":
        return flat_torus(), flat_metric(order)
    if name == "s3-hyperbolic":
        return round_s3(), hyperbolic_ball_metric(order)
    if name == "t3-h2":
        if h2 is None:
            h2 = np.diag([1.0, -1.0, 0.0])
        return flat_torus(), quadratic_metric(h2, order)
    if name.startswith("berger:"):
        try:
            lam = float(name.split(":", 1)[1])
        except ValueError:
            raise GeometryError(f"bad Berger parameter in preset {name!r}")
        frame = berger_frame(lam)
        return frame, pe_metric(frame, order)
    raise GeometryError(f"unknown preset {name!r}")


PRESET_NAMES = ("t3-flat", "s3-hyperbolic", "t3-h2", "berger:<lam>")
