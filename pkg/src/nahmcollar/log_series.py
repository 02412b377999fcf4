"""Truncated log-Laurent series in one variable.

A series is a finite sum sum_{k,l} c_{k,l} x^k (log x)^l with integer k
(negative powers allowed), l >= 0, and a truncation order N: coefficients
with k > N are not represented and are considered unknown, not zero.
Coefficient values are numpy arrays, either scalars (0-d) or 3x3 matrices;
a single series never mixes the two shapes.
"""
from __future__ import annotations

import math

import numpy as np

# Truncation order assigned to the identically-zero series; effectively
# "known to all orders" for every computation done here.
ZERO_ORDER = 10 ** 6


def _as_coeff(value):
    a = np.asarray(value, dtype=float)
    if a.ndim not in (0, 2):
        raise ValueError("series coefficients must be scalars or matrices")
    return a


def _default_product(a, b):
    if a.ndim == 2 and b.ndim == 2:
        return a @ b
    return a * b


class LogLaurentSeries:
    """Finite log-Laurent expansion with explicit truncation order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order):
        self.order = int(order)
        clean = {}
        for (k, l), v in coeffs.items():
            k = int(k)
            l = int(l)
            if l < 0:
                raise ValueError("negative log power")
            if k > self.order:
                continue
            a = _as_coeff(v)
            if np.any(a != 0.0):
                clean[(k, l)] = a
        self.coeffs = clean

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, order=ZERO_ORDER):
        return cls({}, order)

    @classmethod
    def const(cls, value, order):
        return cls({(0, 0): value}, order)

    @classmethod
    def x_power(cls, k, value, order):
        return cls({(k, 0): value}, order)

    @classmethod
    def from_powers(cls, values, order=None):
        """Series sum_k values[k] x^k from a list indexed by power k >= 0."""
        if order is None:
            order = len(values) - 1
        return cls({(k, 0): v for k, v in enumerate(values)}, order)

    # ------------------------------------------------------------------
    # inspection

    def coeff(self, k, l=0):
        """Coefficient at x^k (log x)^l; zeros of the right shape if absent."""
        if (k, l) in self.coeffs:
            return self.coeffs[(k, l)]
        for v in self.coeffs.values():
            return np.zeros_like(v)
        return np.asarray(0.0)

    def k_min(self):
        if not self.coeffs:
            return ZERO_ORDER
        return min(k for k, _ in self.coeffs)

    def terms(self):
        return sorted(self.coeffs.items())

    def max_abs(self, k_max=None):
        """Largest coefficient entry in absolute value (through k_max)."""
        best = 0.0
        for (k, _), v in self.coeffs.items():
            if k_max is not None and k > k_max:
                continue
            best = max(best, float(np.max(np.abs(v))))
        return best

    def is_matrix(self):
        for v in self.coeffs.values():
            return v.ndim == 2
        return False

    def __repr__(self):
        body = ", ".join(f"({k},{l})" for (k, l) in sorted(self.coeffs))
        return f"LogLaurentSeries(order={self.order}, terms=[{body}])"

    # ------------------------------------------------------------------
    # linear structure

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out[key] + v if key in out else v
        return LogLaurentSeries(out, min(self.order, other.order))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.map(lambda c: -c)

    def scaled(self, factor):
        return self.map(lambda c: factor * c)

    def map(self, fn):
        """Apply fn to every coefficient (same truncation order)."""
        return LogLaurentSeries({key: fn(v) for key, v in self.coeffs.items()},
                                self.order)

    def transpose(self):
        return self.map(lambda c: c.T)

    def trace(self):
        return self.map(lambda c: np.trace(c))

    # ------------------------------------------------------------------
    # multiplicative structure

    def mul(self, other, product=None):
        """Cauchy product; log powers add. Respects truncation honestly:
        the result order is min(N_a + kmin_b, N_b + kmin_a)."""
        if product is None:
            product = _default_product
        order = min(self.order + other.k_min(), other.order + self.k_min())
        order = min(order, ZERO_ORDER)
        out = {}
        for (k1, l1), a in self.coeffs.items():
            for (k2, l2), b in other.coeffs.items():
                k = k1 + k2
                if k > order:
                    continue
                key = (k, l1 + l2)
                term = product(a, b)
                out[key] = out[key] + term if key in out else term
        return LogLaurentSeries(out, order)

    def xmul(self, m):
        """Multiply by x^m (integer m, either sign)."""
        return LogLaurentSeries({(k + m, l): v for (k, l), v in self.coeffs.items()},
                                min(self.order + m, ZERO_ORDER))

    def d_dx(self):
        out = {}

        def acc(key, v):
            out[key] = out[key] + v if key in out else v

        for (k, l), v in self.coeffs.items():
            if k != 0:
                acc((k - 1, l), k * v)
            if l > 0:
                acc((k - 1, l - 1), l * v)
        return LogLaurentSeries(out, self.order - 1)

    def rescale(self, lam):
        """Substitute x -> lam * x (lam > 0); log(lam x) = log lam + log x."""
        if lam <= 0:
            raise ValueError("rescale requires a positive factor")
        out = {}
        ll = math.log(lam)
        for (k, l), v in self.coeffs.items():
            for j in range(l + 1):
                key = (k, j)
                term = (lam ** k) * math.comb(l, j) * (ll ** (l - j)) * v
                out[key] = out[key] + term if key in out else term
        return LogLaurentSeries(out, self.order)

    def invert(self):
        """Multiplicative inverse. Requires an invertible coefficient at
        (k_min, 0) and no log terms at k_min."""
        if not self.coeffs:
            raise ValueError("cannot invert the zero series")
        k0 = self.k_min()
        if any(k == k0 and l > 0 for (k, l) in self.coeffs):
            raise ValueError("log terms at the leading power are not invertible")
        lead = self.coeffs[(k0, 0)]
        shifted = self.xmul(-k0)
        if lead.ndim == 2:
            lead_inv = np.linalg.inv(lead)
            ident = np.eye(3)
        else:
            if lead == 0:
                raise ValueError("zero leading coefficient")
            lead_inv = 1.0 / lead
            ident = np.asarray(1.0)
        # shifted = lead (1 - v) with v of strictly positive order
        v = LogLaurentSeries.const(ident, shifted.order) - \
            LogLaurentSeries.const(lead_inv, ZERO_ORDER).mul(shifted)
        acc = LogLaurentSeries.const(ident, shifted.order)
        power = LogLaurentSeries.const(ident, ZERO_ORDER)
        for _ in range(max(shifted.order, 0)):
            power = power.mul(v)
            if not power.coeffs:
                break
            acc = acc + power
        inv = acc.mul(LogLaurentSeries.const(lead_inv, ZERO_ORDER))
        return inv.xmul(-k0)

    def sqrt(self):
        """Square root of a scalar series with constant term 1 and no log
        terms at order zero."""
        if self.is_matrix():
            raise ValueError("sqrt implemented for scalar series only")
        if abs(float(self.coeff(0, 0)) - 1.0) > 1e-13:
            raise ValueError("sqrt requires leading coefficient 1 at x^0")
        if any(k <= 0 and (k, l) != (0, 0) for (k, l) in self.coeffs):
            raise ValueError("sqrt requires a series starting at 1 + O(x)")
        out = {(0, 0): np.asarray(1.0)}
        lmax = max((l for (_, l) in self.coeffs), default=0)
        for k in range(1, self.order + 1):
            for l in range(k * max(lmax, 1), -1, -1):
                s = np.asarray(0.0)
                for (k1, l1), y1 in list(out.items()):
                    if k1 <= 0 or k1 >= k:
                        continue
                    y2 = out.get((k - k1, l - l1))
                    if y2 is not None and l1 <= l:
                        s = s + y1 * y2
                target = self.coeff(k, l)
                val = (target - s) / 2.0
                if np.any(val != 0.0):
                    out[(k, l)] = val
        return LogLaurentSeries(out, self.order)

    # ------------------------------------------------------------------
    # matrix-series helpers

    def entry(self, i, j):
        """Scalar series of a single matrix entry."""
        return LogLaurentSeries({key: v[i, j] for key, v in self.coeffs.items()},
                                self.order)

    def det(self):
        """Determinant of a 3x3 matrix series, as a scalar series."""
        total = LogLaurentSeries.zero(self.order)
        for perm, sign in (((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((2, 0, 1), 1.0),
                           ((0, 2, 1), -1.0), ((2, 1, 0), -1.0), ((1, 0, 2), -1.0)):
            prod = self.entry(0, perm[0]).mul(self.entry(1, perm[1]))
            prod = prod.mul(self.entry(2, perm[2]))
            total = total + prod.scaled(sign)
        return total

    # ------------------------------------------------------------------
    # evaluation

    def evaluate(self, x):
        if x <= 0:
            raise ValueError("series are defined for x > 0")
        lx = math.log(x)
        total = None
        for (k, l), v in self.coeffs.items():
            term = (x ** k) * (lx ** l) * v
            total = term if total is None else total + term
        if total is None:
            return np.asarray(0.0)
        return total
