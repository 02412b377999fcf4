"""Random geometric inputs used across the test modules."""
import numpy as np

from nahmcollar import FrameModel, GaugeJet, LogLaurentSeries, MetricJet
from nahmcollar.frame_algebra import EPS, IDENTITY


def random_symmetric(rng, scale=0.5):
    a = rng.uniform(-scale, scale, (3, 3))
    return 0.5 * (a + a.T)


def random_symtf(rng, scale=0.5):
    s = random_symmetric(rng, scale)
    return s - (np.trace(s) / 3.0) * IDENTITY


def random_metric_jet(rng, order=3, scale=0.5, pad=None):
    coeffs = [IDENTITY] + [random_symmetric(rng, scale) for _ in range(order)]
    jet = MetricJet.from_coeffs(coeffs, order)
    return jet.padded(pad) if pad is not None else jet


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_diagonal_frame(rng, lo=0.5, hi=3.0):
    """Unimodular frame with diagonal structure constants c^k_{ij} = a_k eps_{kij};
    the Jacobi identity holds for every choice of a."""
    a = rng.uniform(lo, hi, 3)
    c = np.einsum("k,kij->kij", a, EPS)
    return FrameModel(c=c, vol=1.0)


def exp_series(skew_series):
    """exp of a matrix series with positive leading power, truncated."""
    order = skew_series.order
    acc = LogLaurentSeries.const(IDENTITY, order)
    term = LogLaurentSeries.const(IDENTITY, order)
    for n in range(1, order + 1):
        term = term.mul(skew_series).scaled(1.0 / n)
        if not term.coeffs:
            break
        acc = acc + term
    return acc


def random_gauge_jet(rng, order=7, scale=0.3):
    terms = {}
    for k in range(1, order + 1):
        m = rng.uniform(-scale, scale, (3, 3))
        terms[(k, 0)] = 0.5 * (m - m.T)
    return GaugeJet(exp_series(LogLaurentSeries(terms, order)))
