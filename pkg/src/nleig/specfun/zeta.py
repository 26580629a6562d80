"""Riemann zeta on the critical line and the rescaled xi function.

zeta(1/2 + it) comes from Euler-Maclaurin summation over the whole
supported band t <= 1000 (absolute accuracy ~1e-13, and still cheap there
when vectorized) and from the Riemann-Siegel main sum with the first two
correction terms beyond (accuracy ~1e-5 to 1e-4); xi_bar warns past
t = 1000, where the Riemann-Siegel branch takes over.  The rescaled xi function

    xibar(t) = (2 pi)^(-1/2) t^(1/4) / (1/4 + t^2) e^(pi t / 4) xi(1/2 + it)

is assembled in the explicitly real form -(1/2) pi^(-1/4) (2 pi)^(-1/2)
t^(1/4) e^(pi t/4 + Re ln Gamma(1/4 + it/2)) Z(t), which neither decays nor
overflows at large t.
"""

import cmath
import math
import warnings

import numpy as np

from .gammafn import DomainError

__all__ = ["zeta_half_line", "riemann_siegel_z", "xi_bar"]

_EM_MAX_T = 1000.0
_LN_2PI = math.log(2.0 * math.pi)

# B_{2k}/(2k)! for the Euler-Maclaurin tail
_EM_BERN = (
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
    1.0 / 47900160.0, -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0, 43867.0 / 5109094217170944000.0,
)

# B_{2n}/(2n(2n-1)) for the Stirling series of ln Gamma
_STIRLING = (
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,
)


def _lngamma_complex(z):
    """Principal ln Gamma(z), Re z > 0, by recurrence into the Stirling zone."""
    shift = 0.0 + 0.0j
    while abs(z) < 12.0:
        shift -= cmath.log(z)
        z += 1.0
    s = (z - 0.5) * cmath.log(z) - z + 0.5 * _LN_2PI
    zk = z
    z2 = z * z
    for c in _STIRLING:
        s += c / zk
        zk *= z2
    return s + shift


def _theta_and_lngamma_re(t):
    """Riemann-Siegel theta(t) and Re ln Gamma(1/4 + it/2)."""
    lg = _lngamma_complex(0.25 + 0.5j * t)
    return lg.imag - 0.5 * t * math.log(math.pi), lg.real


def zeta_half_line(t):
    """zeta(1/2 + it) by Euler-Maclaurin (intended for 0 <= t <= ~1000)."""
    s = 0.5 + 1j * t
    n_cut = max(16, int(1.3 * abs(t)) + 8)
    n = np.arange(1, n_cut)
    ln_n = np.log(n)
    main = complex(np.sum(n ** (-0.5) * np.exp(-1j * t * ln_n)))
    acc = main + n_cut ** (1.0 - s) / (s - 1.0) + 0.5 * n_cut ** (-s)
    # Bernoulli tail: T_1 = s N^{-s-1} B_2/2!, ratio recurrence beyond
    term = _EM_BERN[0] * s * n_cut ** (-s - 1.0)
    acc += term
    num = s
    for k in range(1, len(_EM_BERN)):
        num *= (s + 2 * k - 1) * (s + 2 * k)
        term = _EM_BERN[k] * num * n_cut ** (-s - 2.0 * k - 1.0)
        acc += term
        if abs(term) < 1e-16 * abs(acc):
            break
    return acc


def _psi_rs(p):
    c = math.cos(2.0 * math.pi * p)
    if abs(c) < 5e-3:
        # removable singularity at p = 1/4, 3/4: Richardson from offsets
        d = 0.02
        return (4.0 * (_psi_rs(p + d) + _psi_rs(p - d))
                - (_psi_rs(p + 2 * d) + _psi_rs(p - 2 * d))) / 6.0
    return math.cos(2.0 * math.pi * (p * p - p - 0.0625)) / c


def _psi_rs_d3(p):
    h = 2e-3
    return (-_psi_rs(p - 2 * h) + 2.0 * _psi_rs(p - h)
            - 2.0 * _psi_rs(p + h) + _psi_rs(p + 2 * h)) / (2.0 * h ** 3)


def riemann_siegel_z(t):
    """Hardy Z(t): real, with Z(t) = e^{i theta(t)} zeta(1/2+it).

    Returns (Z, theta, residual) where residual is the relative imaginary
    leftover of the Euler-Maclaurin product (0.0 on the Riemann-Siegel
    branch, which is real by construction).
    """
    if t < 0.0:
        raise DomainError(f"riemann_siegel_z: need t >= 0, got {t!r}")
    theta, _ = _theta_and_lngamma_re(t)
    if t <= _EM_MAX_T:
        zv = zeta_half_line(t) * cmath.exp(1j * theta)
        denom = max(abs(zv), 1e-300)
        return zv.real, theta, abs(zv.imag) / denom
    a = math.sqrt(t / (2.0 * math.pi))
    n_cut = int(a)
    p = a - n_cut
    n = np.arange(1, n_cut + 1)
    main = 2.0 * float(np.sum(np.cos(theta - t * np.log(n)) / np.sqrt(n)))
    c0 = _psi_rs(p)
    c1 = -_psi_rs_d3(p) / (96.0 * math.pi ** 2)
    corr = (-1.0) ** (n_cut + 1) * a ** (-0.5) * (c0 + c1 / a)
    return main + corr, theta, 0.0


def xi_bar(t):
    """Rescaled Riemann xi on the critical line; real, sign changes exactly
    at the ordinates of the nontrivial zeta zeros.

    Assembled as (1/2) (2 pi)^(-1/2) pi^(-1/4) t^(1/4)
    e^(pi t/4 + Re ln Gamma(1/4 + it/2)) Z(t), which carries the sign of the
    Hardy Z function (negative just above t = 0, like zeta on the critical
    line).  With this orientation the first sign change is - to +, so the
    odd-numbered zero ordinates are the repelling directions of the
    u' = u/x + x xibar(u) flow, which is what the eigenvalue spectrum of
    y' = xibar(xy) keys off."""
    if not (t >= 0.0):
        raise DomainError(f"xi_bar: need t >= 0, got {t!r}")
    if t > 1000.0:
        warnings.warn("xi_bar accuracy degrades beyond t = 1000",
                      RuntimeWarning, stacklevel=2)
    if t == 0.0:
        return 0.0
    z, _, _ = riemann_siegel_z(t)
    _, lg_re = _theta_and_lngamma_re(t)
    scale = math.exp(0.25 * math.pi * t + lg_re)
    return (0.5 / math.sqrt(2.0 * math.pi) * math.pi ** -0.25
            * t ** 0.25 * scale * z)
