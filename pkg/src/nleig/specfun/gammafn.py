"""Gamma-family functions: log-gamma, reciprocal gamma, digamma and its
negative-axis roots.

Everything is binary64.  The reciprocal gamma is always evaluated through
the reflection identity 1/Gamma(-u) = -sin(pi u) Gamma(1+u) / pi so that the
huge Gamma(-u) values never appear; a (sign, log magnitude) variant covers
arguments where the linear value overflows.
"""

import math

from ..rootfind import newton_safeguarded

__all__ = [
    "DomainError", "PoleError",
    "sinpi", "cospi", "log_gamma", "digamma", "trigamma",
    "digamma_root", "digamma_root_seed", "recip_gamma", "recip_gamma_log",
]

_LOG_MAX = 709.0782712893384  # log(DBL_MAX)


class DomainError(ValueError):
    """Argument outside the supported domain."""


class PoleError(ValueError):
    """Argument too close to a pole."""


def sinpi(x):
    """sin(pi*x), exact at integers and accurate near them."""
    if not math.isfinite(x):
        raise DomainError(f"sinpi: non-finite argument {x!r}")
    n = math.floor(x)
    r = x - n
    if r == 0.0:
        return 0.0
    if r <= 0.5:
        s = math.sin(math.pi * r)
    else:
        s = math.sin(math.pi * (1.0 - r))
    return s if (int(n) % 2 == 0) else -s


def cospi(x):
    """cos(pi*x), exact at half-integers and accurate near them."""
    if not math.isfinite(x):
        raise DomainError(f"cospi: non-finite argument {x!r}")
    n = math.floor(x)
    r = x - n
    if r < 0.25:
        c = math.cos(math.pi * r)
    elif r <= 0.75:
        c = math.sin(math.pi * (0.5 - r))
    else:
        c = -math.cos(math.pi * (1.0 - r))
    return c if (int(n) % 2 == 0) else -c


def log_gamma(x):
    """ln Gamma(x) for x > 0.

    Exactly zero at x = 1 and x = 2; elsewhere delegates to the platform
    lgamma (correctly rounded to a few ulp, comfortably inside the 1e-13
    relative target away from the zeros of ln Gamma).
    """
    if not (x > 0.0):
        raise DomainError(f"log_gamma: need x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    return math.lgamma(x)


# Bernoulli-number coefficients B_{2k}/(2k) of the asymptotic digamma series.
_PSI_ASYM = (
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,
)


def _digamma_asym(x):
    # valid for x >= 8
    inv = 1.0 / x
    inv2 = inv * inv
    s = 0.0
    p = inv2
    for c in _PSI_ASYM:
        s += c * p
        p *= inv2
    return math.log(x) - 0.5 * inv - s


def digamma(x):
    """psi(x) = d/dx ln Gamma(x), |x| <= 1e6, not near a nonpositive integer."""
    if not math.isfinite(x) or abs(x) > 1e6:
        raise DomainError(f"digamma: argument {x!r} outside [-1e6, 1e6]")
    if x <= 0.0 and abs(x - round(x)) < 1e-12:
        raise PoleError(f"digamma: {x!r} is within 1e-12 of a pole")
    if x < 0.0:
        # reflection: psi(x) = psi(1-x) - pi*cot(pi*x)
        return digamma(1.0 - x) - math.pi * cospi(x) / sinpi(x)
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    return acc + _digamma_asym(x)


_PSI1_ASYM = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
)


def trigamma(x):
    """psi'(x); used as the Newton derivative for the digamma roots."""
    if not math.isfinite(x) or abs(x) > 1e6:
        raise DomainError(f"trigamma: argument {x!r} outside [-1e6, 1e6]")
    if x <= 0.0 and abs(x - round(x)) < 1e-12:
        raise PoleError(f"trigamma: {x!r} is within 1e-12 of a pole")
    if x < 0.0:
        s = sinpi(x)
        return -trigamma(1.0 - x) + (math.pi / s) * (math.pi / s)
    acc = 0.0
    while x < 8.0:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    s = 0.0
    p = inv * inv2
    for c in _PSI1_ASYM:
        s += c * p
        p *= inv2
    return inv + 0.5 * inv2 + s


def digamma_root_seed(k):
    """Arctangent seed for the k-th negative-axis digamma root."""
    return -k + math.atan(math.pi / math.log(k + 0.125)) / math.pi


def digamma_root(k):
    """The k-th root r_k of psi on the negative axis, r_k in (-k, -k+1).

    Newton from the arctangent seed, safeguarded by bisection inside the
    pole-to-pole bracket; |psi(r_k)| <= 1e-10 guaranteed on return.
    """
    if not (1 <= k <= 500) or k != int(k):
        raise DomainError(f"digamma_root: need integer 1 <= k <= 500, got {k!r}")
    k = int(k)
    lo = -k + 1e-9
    hi = -k + 1.0 - 1e-9
    r = newton_safeguarded(digamma, trigamma, digamma_root_seed(k), lo, hi,
                           xtol=1e-15, rtol=2e-16)
    if abs(digamma(r)) > 1e-10:
        raise RuntimeError(f"digamma_root: |psi| > 1e-10 at candidate for k={k}")
    return r


def recip_gamma_log(u):
    """(sign, log magnitude) of 1/Gamma(-u) for u >= -1.

    sign is 0 (with -inf magnitude) exactly at nonnegative integers.
    """
    if not (u >= -1.0):
        raise DomainError(f"recip_gamma: need u >= -1, got {u!r}")
    if u == -1.0:
        return 1, 0.0  # 1/Gamma(1)
    if u >= 0.0 and u == math.floor(u):
        return 0, -math.inf
    s = sinpi(u)
    sign = -1 if s > 0.0 else 1
    return sign, math.log(abs(s) / math.pi) + math.lgamma(1.0 + u)


def recip_gamma(u):
    """1/Gamma(-u) via the sine reflection; exact zero at u = 0, 1, 2, ...

    Raises OverflowError when the value exceeds binary64 (use
    recip_gamma_log there).
    """
    sign, lm = recip_gamma_log(u)
    if sign == 0:
        return 0.0
    if lm > _LOG_MAX:
        raise OverflowError(
            f"recip_gamma: |1/Gamma(-u)| overflows binary64 at u={u!r}; "
            "use recip_gamma_log")
    return sign * math.exp(lm)
