"""Critical-initial-condition (eigenvalue) computation.

A trajectory's class is the number of completed oscillations: each minimum
of y marks the crossing of an unstable zero of F, so the class jumps from
n-1 to n exactly at the n-th eigenvalue.  When a run commits to a stable
asymptote, the attractor's index settles any count still in doubt; when it
is still hugging a separatrix at the horizon, the horizon is extended (the
deviation grows like exp(F' x^2 / 2), so doublings resolve fast).

find_eigen brackets the class jump around the growth-law prediction and
bisects; refine_backward instead seeds the large-x expansion of u = xy at
the n-th unstable zero and integrates backward to read E off at the origin.
"""

import json
import math
from dataclasses import dataclass

from .rootfind import RootError
from .models import ScaledProblem, eval_F, eval_F_prime, zero_table
from .ode import Engine, IntegratorConfig, count_maxima

__all__ = [
    "EigenResult", "classify", "find_eigen", "refine_backward",
    "spectrum_scan", "default_tol", "spectrum_to_csv", "spectrum_to_json",
    "BracketError",
]

_DEFAULT_TOL = {"cosine": 1e-10, "bessel": 1e-10, "airy": 1e-10,
                "rgamma": 1e-8, "xibar": 1e-6}

_WIDEN = 1.6
_WIDEN_CAP = 40
_EXTENSIONS = 7


class BracketError(RuntimeError):
    """No class jump found after the widening cap."""

    def __init__(self, msg, at_lower_bound=False):
        super().__init__(msg)
        self.at_lower_bound = at_lower_bound


def default_tol(model):
    return _DEFAULT_TOL[model.kind]


@dataclass
class EigenResult:
    n: int
    E: float
    bracket: tuple
    method: str                  # "bisection" | "backward"
    evidence: dict
    residual: float
    maxima: int | None
    model: str
    tol: float
    z0: float | None = None     # scaled initial value (when a scaling exists)
    log10_E: float | None = None

    def to_record(self):
        rec = {"model": self.model, "n": self.n, "tol": self.tol,
               "E": self.E, "lo": self.bracket[0], "hi": self.bracket[1],
               "method": self.method, "evidence": self.evidence,
               "residual": self.residual, "maxima": self.maxima}
        if self.z0 is not None:
            rec["z0"] = self.z0
        if self.log10_E is not None:
            rec["log10_E"] = self.log10_E
        return rec


def _ode_cfg(tol, cfg):
    if cfg is not None:
        return cfg
    rt = min(1e-9, max(1e-13, 0.01 * tol))
    return IntegratorConfig(rel_tol=rt, abs_tol=rt * 1e-2)


class _Shooter:
    """Classification context: scaled coordinates when the model has a
    lambda parametrization for this index, raw coordinates otherwise."""

    def __init__(self, model, n=None, cfg=None):
        self.model = model
        self.table = zero_table(model)
        self.cfg = cfg or IntegratorConfig()
        self.F_of_u = lambda u: eval_F(model, u)
        if model.kind != "xibar" and n is not None:
            self.problem = ScaledProblem(model, n)
            self.rhs = self.problem.make_rhs()
            self.u_of = self.problem.u_of
            self.x_factor = self.problem.x_scale
            self.horizon0 = 3.0
            self.settle_x_min = 1.3
            self.scaled = True
        else:
            from .ode import _raw_rhs
            self.problem = None
            self.rhs = _raw_rhs(model)
            self.u_of = lambda x, y: x * y
            self.x_factor = 1.0
            self.horizon0 = None     # per-candidate estimate
            self.settle_x_min = 1e-2
            self.scaled = False
        self.n = n

    def raw_horizon(self, y0):
        """3x the expected turning point of a raw run started at y0."""
        m = self.model
        if m.asym is not None:
            a, al, b, be = m.asym.a, m.asym.alpha, m.asym.b, m.asym.beta
            g = (1.0 + al) / (2.0 * be)
            lam = b * max(y0 / math.sqrt(a), 1e-6) ** (1.0 / g)
            x_turn = (lam / b) ** (1.0 / be - g) / math.sqrt(a)
            return 3.0 * max(x_turn, 1.0)
        if m.kind == "xibar":
            u1 = self.table.zero(2).u  # first unstable zero
            return 3.0 * max(u1, 10.0) / (0.6 * max(y0, 1e-3))
        # raw rgamma (n <= 5 use only)
        return 3.0 * max(2.0, 2.0 * y0)

    def shoot(self, y0, stop_at=None, record=False):
        """Integrate from the origin; returns (class, signal, engine)."""
        eng = Engine(self.rhs, 0.0, y0, self.cfg, record=record,
                     u_of=self.u_of, zeros=self.table, F_of_u=self.F_of_u,
                     x_factor=self.x_factor,
                     settle_x_min=self.settle_x_min, max_minima=stop_at)
        horizon = self.horizon0 if self.scaled else self.raw_horizon(y0)
        if not self.scaled and self.cfg.x_max > 0.0:
            horizon = self.cfg.x_max
        eng.run(horizon)
        ext = 0
        while eng.status == "reached_end" and ext < _EXTENSIONS:
            horizon *= 2.0
            eng.run(horizon)
            ext += 1
        if eng.status == "max_minima":
            return len(eng.minima), "maxima-jump", eng
        if eng.status in ("settled", "floor"):
            return self.table.unstable_below(eng.attractor), "attractor-jump", eng
        return len(eng.minima), "unresolved", eng

    def scale_E(self, v):
        """Bisection variable -> physical E."""
        return v * self.problem.y_scale if self.scaled else v

    def unscale_E(self, E):
        return E / self.problem.y_scale if self.scaled else E


def classify(model, E, cfg=None, n_hint=None):
    """Forward-integrate y' = F(xy), y(0) = E and return the class index
    (completed oscillations; ties broken by the attractor index)."""
    if not (E > 0.0):
        raise ValueError("classify: need E > 0")
    sh = _Shooter(model, n_hint, cfg or IntegratorConfig())
    v = sh.unscale_E(E)
    cls, _, _ = sh.shoot(v)
    return cls


def _predict(model, n):
    """Growth-law/asymptote prediction in the bisection variable."""
    if model.kind == "rgamma":
        return 1.0  # z(0) -> z_inf(0) = 1
    if model.kind == "xibar":
        u_n = zero_table(model).nth_unstable(n).u
        return 0.55 * math.sqrt(u_n)
    from .asymptotics import growth_law
    gl = growth_law(model)
    return gl.A * n ** gl.gamma_exp


def find_eigen(model, n, tol=None, cfg=None, seed=None, lo_bound=None,
               count_maxima_at_lo=True):
    """n-th eigenvalue by bisection on the classifier.

    The initial bracket is centered on the growth-law prediction with a
    +-50% margin and widened geometrically (factor 1.6, cap 40) until the
    class jumps from n-1 to n across it.
    """
    if n < 1 or n != int(n):
        raise ValueError(f"find_eigen: need integer n >= 1, got {n!r}")
    n = int(n)
    if tol is None:
        tol = default_tol(model)
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not resolvable in binary64 here")
    sh = _Shooter(model, n, _ode_cfg(tol, cfg))
    pred = seed if seed is not None else None
    if pred is None:
        pred = _predict(model, n)
    elif sh.scaled:
        pred = sh.unscale_E(pred)
    floor = None
    if lo_bound is not None:
        floor = sh.unscale_E(lo_bound)
    lo, hi = 0.5 * pred, 1.5 * pred
    if floor is not None:
        lo = max(lo, floor * (1.0 + 2.0 * tol))
        hi = max(hi, floor * (1.0 + 4.0 * tol))
    evid = {}
    cache = {}

    def above(v):
        if v not in cache:
            cls, signal, _ = sh.shoot(v, stop_at=n)
            cache[v] = (cls >= n, cls, signal)
        return cache[v]

    widened = 0
    while True:
        up, cls_lo, sig_lo = above(lo)
        if not up:
            break
        if floor is not None and lo <= floor * (1.0 + 2.0 * tol):
            # hyperfine neighbor: the jump sits inside the margin sliver
            # just above the previous eigenvalue
            up_f, cls_f, sig_f = above(floor)
            if up_f:
                raise BracketError(
                    f"class >= {n} already at the lower bound {floor!r}",
                    at_lower_bound=True)
            hi, cls_hi, sig_hi = lo, cls_lo, sig_lo
            lo, cls_lo, sig_lo = floor, cls_f, sig_f
            break
        lo /= _WIDEN
        if floor is not None:
            lo = max(lo, floor * (1.0 + 2.0 * tol))
        widened += 1
        if widened > _WIDEN_CAP:
            raise BracketError(f"no class-{n - 1} floor found for n={n}")
    while True:
        up, cls_hi, sig_hi = above(hi)
        if up:
            break
        hi *= _WIDEN
        widened += 1
        if widened > _WIDEN_CAP:
            raise BracketError(f"no class-{n} ceiling found for n={n}")
    evid["lo_class"], evid["lo_signal"] = cls_lo, sig_lo
    evid["hi_class"], evid["hi_signal"] = cls_hi, sig_hi
    evid["classifier"] = ("maxima-jump" if sig_hi == "maxima-jump"
                          else "attractor-jump")
    for _ in range(300):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        up, _, _ = above(mid)
        if up:
            hi = mid
        else:
            lo = mid
    maxima = None
    if count_maxima_at_lo:
        _, _, eng = sh.shoot(lo, record=True)
        curve = eng.curve("scaled" if sh.scaled else "raw")
        maxima = count_maxima(curve)
    E = sh.scale_E(hi)
    log10 = None
    z0 = None
    if sh.scaled:
        z0 = hi
        log10 = (math.log10(sh.problem.y_scale) + math.log10(hi))
    return EigenResult(n=n, E=E, bracket=(sh.scale_E(lo), E),
                       method="bisection", evidence=evid,
                       residual=(hi - lo) / hi, maxima=maxima,
                       model=model.spec, tol=tol, z0=z0, log10_E=log10)


def refine_backward(model, n, x0=None, cfg=None, tol=None):
    """Eigenvalue read off at the origin of a backward-integrated
    separatrix, seeded on the n-th unstable zero s via the large-x
    expansion u(x0) = s - s/(x0^2 F'(s))."""
    if n < 1 or n != int(n):
        raise ValueError(f"refine_backward: need integer n >= 1, got {n!r}")
    n = int(n)
    if tol is None:
        tol = default_tol(model)
    cfg = _ode_cfg(tol, cfg)
    s = zero_table(model).nth_unstable(n)
    fp = eval_F_prime(model, s.u)
    if not (fp > 0.0):
        raise RuntimeError(f"F'({s.u}) <= 0: not a separatrix asymptote")
    if model.kind == "rgamma":
        problem = ScaledProblem(model, n)
        t0 = 3.0
        # x0^2 F'(s) in raw units, via logs to dodge the huge factors
        ln_x2fp = (2.0 * math.log(t0) + math.log(problem.lam)
                   - problem.ln_xi + math.log(fp))
        corr = math.exp(-ln_x2fp) if ln_x2fp < 700.0 else 0.0
        z0 = (1.0 - corr) / t0
        eng = Engine(problem.make_rhs(), t0, z0, cfg, direction=-1,
                     record=True)
        eng.run(0.0)
        z_origin = eng.y
        E = z_origin * problem.y_scale if problem.y_scale < 1e300 else math.inf
        curve = eng.curve("scaled")
        mx = count_maxima(curve)
        log10 = math.log10(problem.y_scale) + math.log10(max(z_origin, 1e-300))
        est = 10.0 * cfg.rel_tol
        return EigenResult(n=n, E=E, bracket=(E * (1.0 - est), E),
                           method="backward",
                           evidence={"classifier": "backward-seed",
                                     "seed_zero": s.u, "x0": t0 * problem.x_scale},
                           residual=est, maxima=mx, model=model.spec, tol=tol,
                           z0=z_origin, log10_E=log10)
    if model.kind == "xibar":
        x_turn = s.u / 0.6  # crude: y near the turning point is O(1)
    else:
        x_turn = ScaledProblem(model, n).x_scale
    if x0 is None:
        # Start deep enough that (a) the first-correction seed
        # u(x0) = s - s/(x0^2 F') is valid (correction well inside the
        # basin) and (b) the backward contraction exp(-F'(x0^2-x_tp^2)/2)
        # drives the residual seed error below machine precision.  This
        # stays out of the stiff zone x F'(s) >> 1, where an explicit
        # pair is stability-limited.
        _, _, halfgap = zero_table(model).nearest(s.u)
        du_cap = min(0.1 * halfgap, 0.02 * s.u)
        x0 = math.sqrt(max(s.u / (fp * du_cap),
                           x_turn * x_turn + 90.0 / fp,
                           (1.3 * x_turn) ** 2))
    u0 = s.u - s.u / (x0 * x0 * fp)
    y0 = u0 / x0
    rhs = lambda x, y: eval_F(model, x * y)
    eng = Engine(rhs, x0, y0, cfg, direction=-1, record=True)
    eng.run(0.0)
    E = eng.y
    if not (E > 0.0) or not math.isfinite(E):
        raise RuntimeError(f"backward run blew up (E={E!r}); "
                           "seed too far from the separatrix")
    curve = eng.curve("raw")
    mx = count_maxima(curve)
    est = 10.0 * cfg.rel_tol
    return EigenResult(n=n, E=E, bracket=(E * (1.0 - est), E),
                       method="backward",
                       evidence={"classifier": "backward-seed",
                                 "seed_zero": s.u, "x0": x0},
                       residual=est, maxima=mx, model=model.spec, tol=tol,
                       z0=None, log10_E=math.log10(E))


def spectrum_scan(model, n_range, tol=None, cfg=None, method="bisection"):
    """Eigenvalues for every index in n_range (increasing).

    method "bisection" shoots forward and bisects the classifier jump;
    "backward" integrates each separatrix down from its seeded asymptote
    (much faster for large indices, cross-validated by the bisection path
    at small ones).  Failures are recorded per index without aborting; the
    monotonicity of the successful results is verified.
    Returns (results, errors).
    """
    ns = list(n_range)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_range must be nonempty and increasing")
    if method not in ("bisection", "backward"):
        raise ValueError(f"unknown spectrum method {method!r}")
    if tol is None:
        tol = default_tol(model)
    results = []
    errors = []
    prev = None
    for n in ns:
        seed = None
        lo_bound = None
        if model.kind == "xibar" and prev is not None:
            table = zero_table(model)
            u_prev = table.nth_unstable(prev.n).u
            u_n = table.nth_unstable(n).u
            seed = prev.E * math.sqrt(u_n / u_prev)
            lo_bound = prev.E
        try:
            if method == "backward":
                res = refine_backward(model, n, cfg=cfg, tol=tol)
            else:
                try:
                    res = find_eigen(model, n, tol=tol, cfg=cfg, seed=seed,
                                     lo_bound=lo_bound)
                except BracketError as exc:
                    if not getattr(exc, "at_lower_bound", False) or prev is None:
                        raise
                    # hyperfine pair narrower than tol: re-tighten the
                    # previous eigenvalue, then retry this one in the gap
                    tight = max(tol * 1e-4, 1e-11)
                    prev_lo = results[-2].E if len(results) >= 2 else None
                    prev2 = find_eigen(model, prev.n, tol=tight, cfg=cfg,
                                       seed=prev.E, lo_bound=prev_lo,
                                       count_maxima_at_lo=False)
                    prev2.maxima = prev.maxima
                    results[-1] = prev2
                    prev = prev2
                    res = find_eigen(model, n, tol=tight, cfg=cfg,
                                     seed=prev2.E * (1.0 + 100.0 * tight),
                                     lo_bound=prev2.E)
            results.append(res)
            prev = res
        except (BracketError, RootError, RuntimeError, OverflowError) as exc:
            errors.append({"n": n, "error": f"{type(exc).__name__}: {exc}"})
    for a, b in zip(results, results[1:]):
        if not (b.E > a.E):
            errors.append({"n": b.n,
                           "error": f"monotonicity violated: E_{b.n} <= E_{a.n}"})
    return results, errors


def spectrum_to_csv(results, path):
    lines = ["n,E,residual,method,maxima"]
    for r in results:
        mx = r.maxima if r.maxima is not None else ""
        lines.append(f"{r.n},{r.E:.16e},{r.residual:.16e},{r.method},{mx}")
    from .cache import atomic_write_text
    atomic_write_text(path, "\n".join(lines) + "\n")
    return path


def spectrum_to_json(results, path):
    payload = [r.to_record() for r in results]
    from .cache import atomic_write_text
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
