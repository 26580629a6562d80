"""Airy function Ai on the real line, -1e5 <= x <= 10.

Maclaurin pair in the central band; on the oscillatory side the Bessel
connection Ai(-u) = sqrt(u)/3 (J_{1/3} + J_{-1/3})(zeta) reuses the Bessel
machinery (quadrature band included), and on the positive side a
Gauss-Hermite quadrature of K_{1/3} bridges the gap until the exponential
asymptotic series takes over.
"""

import math

import numpy as np

from .gammafn import DomainError
from .bessel import _j_any

__all__ = ["airy_ai"]

_AI0 = 0.3550280538878172   # Ai(0)  = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.2588194037928068  # Ai'(0) = -3^(-1/3)/Gamma(1/3)

_herm_cache = {}


def _maclaurin(x):
    x3 = x * x * x
    ft = 1.0
    fterms = [ft]
    gt = x
    gterms = [gt]
    for k in range(0, 60):
        ft *= x3 / ((3 * k + 2) * (3 * k + 3))
        gt *= x3 / ((3 * k + 3) * (3 * k + 4))
        fterms.append(ft)
        gterms.append(gt)
        if abs(ft) < 1e-20 and abs(gt) < 1e-20:
            break
    return _AI0 * math.fsum(fterms) + _AIP0 * math.fsum(gterms)


def _pos_asymptotic(x):
    zeta = (2.0 / 3.0) * x * math.sqrt(x)
    u = 1.0
    s = 1.0
    best = math.inf
    for k in range(1, 40):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        t = u / zeta ** k if k % 2 == 0 else -u / zeta ** k
        s += t
        a = abs(t)
        if a < 1e-18:
            break
        if a > best:
            s -= t  # drop the first growing term
            break
        best = a
    return math.exp(-zeta) * s / (2.0 * math.sqrt(math.pi) * x ** 0.25)


def _pos_quadrature(x):
    # Ai(x) = sqrt(x/3)/pi * K_{1/3}(zeta); K via cosh t = 1 + v^2 which
    # turns the integral into a pure Gaussian in v.
    zeta = (2.0 / 3.0) * x * math.sqrt(x)
    if 80 not in _herm_cache:
        _herm_cache[80] = np.polynomial.hermite.hermgauss(80)
    w, ww = _herm_cache[80]
    v = w / math.sqrt(zeta)
    t = np.arccosh(1.0 + v * v)
    g = np.cosh(t / 3.0) / np.sqrt(v * v + 2.0)
    k13 = math.exp(-zeta) / math.sqrt(zeta) * float(np.dot(ww, g))
    return math.sqrt(x / 3.0) / math.pi * k13


def _neg_bessel(x):
    u = -x
    zeta = (2.0 / 3.0) * u * math.sqrt(u)
    return math.sqrt(u) / 3.0 * (_j_any(1.0 / 3.0, zeta) + _j_any(-1.0 / 3.0, zeta))


def airy_ai(x):
    """Ai(x) for -1e5 <= x <= 10."""
    if not (-1e5 <= x <= 10.0):
        raise DomainError(f"airy_ai: argument {x!r} outside [-1e5, 10]")
    if x > 9.0:
        return _pos_asymptotic(x)
    if x > 4.0:
        return _pos_quadrature(x)
    if x >= -7.0:
        return _maclaurin(x)
    return _neg_bessel(x)
