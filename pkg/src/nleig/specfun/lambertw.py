"""Real branches of the Lambert W function by Halley iteration.

W0 (principal, W >= -1) for x >= -1/e and W_{-1} (W <= -1) for
-1/e <= x < 0.  Seeds come from the branch-point square-root series near
x = -1/e and from logarithmic asymptotics elsewhere; Halley then converges
in a handful of steps to the 1e-12 round-trip target.
"""

import math

from .gammafn import DomainError

__all__ = ["lambert_w"]

_INV_E = math.exp(-1.0)


def _halley(w, x):
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            return w
        w1 = w + 1.0
        denom = ew * w1 - (w + 2.0) * f / (2.0 * w1)
        dw = f / denom
        w -= dw
        if abs(dw) <= 1e-16 * (2.0 + abs(w)):
            break
    return w


def _seed_principal(x):
    if x < -0.25:
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        return -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    if x < 2.0:
        return math.log1p(x) if x > -0.99 else x
    l1 = math.log(x)
    l2 = math.log(l1)
    return l1 - l2 + l2 / l1


def _seed_minus_one(x):
    if x < -0.27:
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        return -1.0 - p - p * p / 3.0 - 11.0 * p ** 3 / 72.0
    l1 = math.log(-x)
    l2 = math.log(-l1)
    return l1 - l2 + l2 / l1


def lambert_w(branch, x):
    """W(x) on the requested real branch: 'principal' or 'minus-one'."""
    if branch == "principal":
        if x < -_INV_E:
            if x > -_INV_E - 1e-15:  # branch point up to rounding
                return -1.0
            raise DomainError(f"lambert_w: x={x!r} below branch point -1/e")
        if x == 0.0:
            return 0.0
        w = _halley(_seed_principal(x), x)
        return max(w, -1.0)
    if branch == "minus-one":
        if not (-_INV_E <= x < 0.0):
            if -_INV_E - 1e-15 < x < 0.0:
                return -1.0
            raise DomainError(
                f"lambert_w: minus-one branch needs -1/e <= x < 0, got {x!r}")
        w = _halley(_seed_minus_one(x), x)
        return min(w, -1.0)
    raise DomainError(f"lambert_w: unknown branch {branch!r}")
