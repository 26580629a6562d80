"""Adaptive explicit integration of y'(x) = F(xy) and its scaled forms.

A scalar Dormand-Prince 5(4) pair with proportional-integral step control
and first-same-as-last reuse.  Cubic Hermite dense output locates the
derivative sign changes: + to - events are the maxima the eigenvalue
classifier counts, - to + events are the completed oscillations.  The
engine also watches u = x*y: once u sits inside the basin of a stable zero
of F with x^2 |F| well above u, the u/x drift can no longer carry it over
the next unstable zero, so the run is committed and can stop early.  A run
left ambiguous at its horizon (still hugging a separatrix) can be continued
farther by calling run() again.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .models import GeneratingFunction, ScaledProblem, eval_F, zero_table

__all__ = [
    "IntegratorConfig", "SolutionCurve", "PrecisionExhausted", "StepUnderflow",
    "Engine", "integrate", "count_maxima", "attractor_limit", "curve_to_csv",
]


class PrecisionExhausted(RuntimeError):
    """Right-hand side overflowed binary64 (reported with the location)."""


class StepUnderflow(RuntimeError):
    """Step control pushed h below h_min (reported with the location)."""


@dataclass
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    h_init: float = 0.0     # 0 -> automatic
    h_min: float = 1e-14
    h_max: float = 0.0      # 0 -> span/10
    x_max: float = 0.0      # 0 -> caller picks a model-dependent horizon

    def __post_init__(self):
        if not (1e-13 <= self.rel_tol <= 1e-6):
            raise ValueError(f"rel_tol {self.rel_tol!r} outside [1e-13, 1e-6]")
        if not (self.abs_tol > 0.0):
            raise ValueError("abs_tol must be positive")
        if not (self.h_min > 0.0):
            raise ValueError("h_min must be positive")
        if self.x_max < 0.0 or self.h_max < 0.0 or self.h_init < 0.0:
            raise ValueError("h_init, h_max, x_max must be nonnegative")


@dataclass
class SolutionCurve:
    coords: str                      # "raw" or "scaled"
    grid: np.ndarray
    values: np.ndarray
    maxima: list                     # abscissae of local maxima
    maxima_values: list
    minima: list
    minima_values: list
    terminal_u: float | None        # lim x*y estimate, None = not settled
    status: str                      # reached_end | settled | floor | max_minima
    meta: dict = field(default_factory=dict)


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_A71, _A73, _A74, _A75, _A76 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                                -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_COMMIT_MARGIN = 20.0


def _hermite(s, h, y0, y1, f0, f1):
    s2 = s * s
    s3 = s2 * s
    return ((2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * f0
            + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * f1)


def _hermite_deriv(s, h, y0, y1, f0, f1):
    # dH/ds; same sign as dH/dx for h > 0
    s2 = s * s
    return ((6 * s2 - 6 * s) * (y0 - y1)
            + h * ((3 * s2 - 4 * s + 1) * f0 + (3 * s2 - 2 * s) * f1))


class Engine:
    """Single-use integration state machine (one trajectory, one direction)."""

    def __init__(self, rhs, x0, y0, cfg, *, direction=1, record=True,
                 u_of=None, zeros=None, F_of_u=None, x_factor=1.0,
                 settle_x_min=None, stop_when_settled=True, max_minima=None,
                 event_tol_scale=None, y_floor=1e-280, nonneg=True):
        self.rhs = rhs
        self.cfg = cfg
        self.sgn = 1.0 if direction in (1, "forward") else -1.0
        self.x = float(x0)
        self.y = float(y0)
        self.f = rhs(self.x, self.y)
        self.h = 0.0
        self.err_prev = 1.0
        self.record = record
        self.xs = [self.x] if record else None
        self.ys = [self.y] if record else None
        self.maxima = []
        self.maxima_values = []
        self.minima = []
        self.minima_values = []
        self.u_of = u_of
        self.zeros = zeros
        self.F_of_u = F_of_u
        self.x_factor = x_factor
        self.settle_x_min = settle_x_min
        self.stop_when_settled = stop_when_settled
        self.max_minima = max_minima
        self.event_tol_scale = event_tol_scale
        self.y_floor = y_floor
        self.nonneg = nonneg
        self.status = None
        self.terminal_u = None
        self.attractor = None
        self._ck_x = 0.0
        self._fmid_cache = {}
        self.nfev = 1
        self.nsteps = 0

    def _initial_step(self, span):
        cfg = self.cfg
        if cfg.h_init > 0.0:
            return cfg.h_init
        sc = cfg.abs_tol + cfg.rel_tol * abs(self.y)
        d0 = abs(self.y) / sc
        d1 = abs(self.f) / sc
        h0 = 0.01 * (d0 / d1) if (d0 > 1e-5 and d1 > 1e-5) else 1e-6 * span
        h0 = min(h0, 0.1 * span)
        y1 = self.y + self.sgn * h0 * self.f
        f1 = self.rhs(self.x + self.sgn * h0, y1)
        self.nfev += 1
        d2 = abs(f1 - self.f) / sc / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6 * span, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** 0.2
        return min(100.0 * h0, h1, span)

    def run(self, x_end):
        """Advance to x_end (or an earlier stopping event).  May be called
        again with a farther x_end to continue the same trajectory."""
        cfg = self.cfg
        sgn = self.sgn
        span = abs(x_end - self.x)
        if span <= 0.0:
            if self.status is None:
                self.status = "reached_end"
            return self
        if self.event_tol_scale is None:
            self.event_tol_scale = max(abs(x_end), abs(self.x), 1.0)
        h_max = cfg.h_max if cfg.h_max > 0.0 else span / 10.0
        if self.h <= 0.0:
            self.h = min(self._initial_step(span), h_max)
        self.status = None
        rhs = self.rhs
        x, y, f = self.x, self.y, self.f
        h = self.h
        rtol, atol = cfg.rel_tol, cfg.abs_tol
        overflow_note = None
        while sgn * (x_end - x) > 1e-30:
            h = min(h, h_max, abs(x_end - x))
            if h < cfg.h_min:
                if abs(x_end - x) < 4.0 * cfg.h_min:
                    break  # close enough to the horizon
                self.x, self.y, self.f = x, y, f
                if overflow_note is not None:
                    raise PrecisionExhausted(
                        f"precision exhausted at x={x!r}: right-hand side "
                        f"overflows binary64 however small the step "
                        f"({overflow_note})")
                raise StepUnderflow(f"step underflow (h={h!r}) at x={x!r}")
            hs = sgn * h
            try:
                k1 = f
                k2 = rhs(x + _C2 * hs, y + hs * (_A21 * k1))
                k3 = rhs(x + _C3 * hs, y + hs * (_A31 * k1 + _A32 * k2))
                k4 = rhs(x + _C4 * hs, y + hs * (_A41 * k1 + _A42 * k2
                                                 + _A43 * k3))
                k5 = rhs(x + _C5 * hs, y + hs * (_A51 * k1 + _A52 * k2
                                                 + _A53 * k3 + _A54 * k4))
                k6 = rhs(x + hs, y + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3
                                           + _A64 * k4 + _A65 * k5))
                y1 = y + hs * (_A71 * k1 + _A73 * k3 + _A74 * k4 + _A75 * k5
                               + _A76 * k6)
                x1 = x + hs
                k7 = rhs(x1, y1)
            except OverflowError as exc:
                # a trial step probed past the representable range: treat
                # it like any too-rough step and retry smaller
                self.nfev += 6
                overflow_note = str(exc)
                h *= 0.2
                continue
            self.nfev += 6
            err_est = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5
                            + _E6 * k6 + _E7 * k7)
            sc = atol + rtol * max(abs(y), abs(y1))
            err = abs(err_est) / sc
            if not (err < math.inf) or not math.isfinite(y1):
                overflow_note = "non-finite step values"
                h *= 0.2
                continue
            if err <= 1.0:
                overflow_note = None
                self.nsteps += 1
                stop = self._after_step(x, y, f, x1, y1, k7, hs)
                x, y, f = x1, y1, k7
                if self.nonneg and y < 0.0:
                    y = 0.0
                    f = rhs(x, y)
                    self.nfev += 1
                err = max(err, 1e-10)
                fac = 0.95 * err ** -0.17 * self.err_prev ** 0.04
                h *= min(6.0, max(0.2, fac))
                self.err_prev = err
                if stop:
                    self.status = stop
                    break
            else:
                h *= max(0.2, 0.9 * err ** -0.2)
        self.x, self.y, self.f = x, y, f
        self.h = h
        if self.status is None:
            self.status = "reached_end"
        return self

    def _basin_f_mid(self, z_star, s_next):
        v = self._fmid_cache.get(z_star)
        if v is None:
            v = abs(self.F_of_u(0.5 * (z_star + s_next)))
            self._fmid_cache[z_star] = v
        return v

    def _after_step(self, x0, y0, f0, x1, y1, f1, hs):
        """Record samples/events; returns a stop reason or None."""
        if self.record:
            self.xs.append(x1)
            self.ys.append(y1)
        backward = hs < 0.0
        f_small, f_large = (f1, f0) if backward else (f0, f1)
        if f_small != 0.0 and (f_small > 0.0) != (f_large > 0.0):
            xe, ye = self._refine_event(x0, y0, f0, x1, y1, f1, hs)
            if f_small > 0.0:
                self.maxima.append(xe)
                self.maxima_values.append(ye)
            else:
                self.minima.append(xe)
                self.minima_values.append(ye)
                if (self.max_minima is not None
                        and len(self.minima) >= self.max_minima):
                    return "max_minima"
        if y1 <= self.y_floor and f1 <= 0.0:
            self.terminal_u = 0.0
            self.attractor = 0.0
            return "floor"
        if (self.settle_x_min is not None and self.u_of is not None
                and self.attractor is None
                and abs(x1) >= self.settle_x_min
                and abs(x1) >= 1.25 * self._ck_x):
            self._ck_x = abs(x1)
            u = self.u_of(x1, y1)
            basin = self.zeros.stable_basin(u)
            if basin is not None:
                z_star, s_next, halfgap = basin
                if abs(u - z_star) <= 0.8 * halfgap:
                    xr = abs(x1) * self.x_factor
                    f_mid = self._basin_f_mid(z_star, s_next)
                    if xr * xr * f_mid >= _COMMIT_MARGIN * max(u, 0.05):
                        self.terminal_u = u
                        self.attractor = z_star
                        if self.stop_when_settled:
                            return "settled"
        return None

    def _refine_event(self, x0, y0, f0, x1, y1, f1, hs):
        # bisect the derivative sign change on the dense output; recording
        # runs bisect the true right-hand side along the Hermite model, so
        # the located (x, y) pair satisfies F(x y) = 0 to the tolerance
        tol = 1e-10 * self.event_tol_scale
        use_rhs = self.record
        a, b = 0.0, 1.0
        da = self.rhs(x0, y0) if use_rhs else _hermite_deriv(0.0, hs, y0, y1,
                                                             f0, f1)
        if da == 0.0:
            da = f0
        for _ in range(80):
            if abs(b - a) * abs(hs) <= tol:
                break
            m = 0.5 * (a + b)
            ym = _hermite(m, hs, y0, y1, f0, f1)
            dm = (self.rhs(x0 + m * hs, ym) if use_rhs
                  else _hermite_deriv(m, hs, y0, y1, f0, f1))
            if dm == 0.0:
                a = b = m
                break
            if (dm > 0.0) == (da > 0.0):
                a, da = m, dm
            else:
                b = m
        s = 0.5 * (a + b)
        return x0 + s * hs, _hermite(s, hs, y0, y1, f0, f1)

    def curve(self, coords, meta=None):
        if self.record:
            grid = np.asarray(self.xs, dtype=float)
            vals = np.asarray(self.ys, dtype=float)
        else:
            grid = np.asarray([self.x], dtype=float)
            vals = np.asarray([self.y], dtype=float)
        maxima = list(self.maxima)
        maxima_v = list(self.maxima_values)
        minima = list(self.minima)
        minima_v = list(self.minima_values)
        if self.sgn < 0:
            grid = grid[::-1].copy()
            vals = vals[::-1].copy()
            maxima = maxima[::-1]
            maxima_v = maxima_v[::-1]
            minima = minima[::-1]
            minima_v = minima_v[::-1]
        return SolutionCurve(coords, grid, np.maximum(vals, 0.0), maxima,
                             maxima_v, minima, minima_v, self.terminal_u,
                             self.status or "reached_end", meta or {})


def _raw_rhs(model):
    kind = model.kind
    if kind == "bessel":
        from .specfun.bessel import _j_any
        nu = model.nu
        return lambda x, y: _j_any(nu, max(x * y, 0.0))
    if kind == "xibar":
        from .specfun import xi_bar
        return lambda x, y: xi_bar(max(x * y, 0.0))
    if kind == "airy":
        from .specfun import airy_ai
        return lambda x, y: airy_ai(-max(x * y, -5.0))
    return lambda x, y: eval_F(model, x * y)


def integrate(obj, initial, cfg, direction="forward", record=True, meta=None,
              stop_when_settled=False):
    """Integrate a model (raw coordinates) or a scaled problem.

    initial is (x0, y0); backward runs require x0 > 0 and integrate down to
    the origin.  Returns a SolutionCurve with maxima located to an abscissa
    accuracy of 1e-10 times the horizon.  With stop_when_settled the run
    ends as soon as x*y has committed to a stable zero of F; otherwise the
    attractor is recorded in terminal_u and integration continues to the
    horizon.
    """
    x0, y0 = float(initial[0]), float(initial[1])
    if y0 < 0.0:
        raise ValueError("initial value must satisfy y0 >= 0")
    forward = direction in (1, "forward")
    if not forward and x0 <= 0.0:
        raise ValueError("backward integration requires x0 > 0")
    if isinstance(obj, ScaledProblem):
        rhs = obj.make_rhs()
        coords = "scaled"
        u_of = obj.u_of
        model = obj.model
        settle_x_min = 1.3
        x_factor = obj.x_scale
        n = obj.n
        default_end = 3.0
    elif isinstance(obj, GeneratingFunction):
        rhs = _raw_rhs(obj)
        coords = "raw"
        u_of = lambda x, y: x * y
        model = obj
        settle_x_min = 1e-2
        x_factor = 1.0
        n = None
        default_end = 0.0
    else:
        raise TypeError(f"cannot integrate object of type {type(obj)!r}")
    if forward:
        x_end = cfg.x_max if cfg.x_max > 0.0 else default_end
        if x_end <= x0:
            raise ValueError("x_max must exceed the initial abscissa")
    else:
        x_end = 0.0
    eng = Engine(rhs, x0, y0, cfg, direction=1 if forward else -1,
                 record=record, u_of=u_of, zeros=zero_table(model),
                 F_of_u=lambda u: eval_F(model, u), x_factor=x_factor,
                 settle_x_min=settle_x_min if forward else None,
                 stop_when_settled=stop_when_settled)
    eng.run(x_end)
    md = {"model": model.spec, "n": n, "x0": x0, "y0": y0,
          "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "horizon": x_end,
          "direction": "forward" if forward else "backward",
          "nfev": eng.nfev}
    if meta:
        md.update(meta)
    return eng.curve(coords, md)


def count_maxima(curve):
    """Strict local maxima with prominence above 1e-12 * max(values).

    A strictly decreasing start counts as a boundary maximum (the
    reciprocal-gamma separatrices open with F < 0, so their first maximum
    sits at the origin itself)."""
    if len(curve.values) == 0:
        return 0
    vmax = float(np.max(curve.values))
    floor = 1e-12 * vmax
    events = sorted(
        [(x, v, "max") for x, v in zip(curve.maxima, curve.maxima_values)]
        + [(x, v, "min") for x, v in zip(curve.minima, curve.minima_values)])
    count = 0
    v0 = float(curve.values[0])
    first_base = next((ev[1] for ev in events if ev[2] == "min"),
                      float(curve.values[-1]))
    starts_down = (len(curve.values) > 1
                   and float(curve.values[1]) < v0
                   and (not events or events[0][2] == "min"))
    if starts_down and v0 - first_base > floor:
        count += 1
    for i, (x, v, kind) in enumerate(events):
        if kind != "max":
            continue
        left = next((ev[1] for ev in reversed(events[:i]) if ev[2] == "min"),
                    v0)
        right = next((ev[1] for ev in events[i + 1:] if ev[2] == "min"),
                     float(curve.values[-1]))
        if min(v - left, v - right) > floor:
            count += 1
    return count


def attractor_limit(curve, model):
    """Stable zero of F nearest to the terminal x*y, or None if the tail
    has not settled (x*y still varying or nearest zero too far)."""
    grid = curve.grid
    vals = curve.values
    if len(grid) < 8 or grid[-1] <= 0.0:
        return None
    if curve.coords == "scaled":
        raise ValueError("attractor_limit expects a raw-coordinate curve")
    u = grid * vals
    window = grid >= 0.1 * grid[-1]
    u_win = u[window]
    if len(u_win) < 2:
        return None
    u_end = float(u[-1])
    if float(np.max(u_win) - np.min(u_win)) >= 1e-4 * max(1.0, abs(u_end)):
        return None
    tab = zero_table(model)
    z, kind, halfgap = tab.nearest(u_end)
    if kind != "stable" or abs(u_end - z) >= halfgap:
        return None
    return z


def curve_to_csv(curve, path):
    """CSV with a comment header and 17-significant-digit columns."""
    cols = ("t,z" if curve.coords == "scaled" else "x,y")
    n = curve.meta.get("n")
    lines = [f"# model={curve.meta.get('model', '?')}, n={n if n is not None else '-'}, "
             f"coords={curve.coords}", cols]
    for x, y in zip(curve.grid, curve.values):
        lines.append(f"{x:.16e},{y:.16e}")
    data = "\n".join(lines) + "\n"
    from .cache import atomic_write_text
    atomic_write_text(path, data)
    return path
