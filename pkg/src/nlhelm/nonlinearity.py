"""Nonlinearity models, assumption validators, and the f1/f2 decomposition.

A model is a weight q >= 0 combined with one of three profiles in u:

* ``power``: f(x, u) = q(x) |u|^(p-2) u with 2 < p < 2N/(N-2),
* ``log``:   f(x, u) = q(x) u log(1 + |u|^s) with s > 0,
* ``table``: f(x, u) = q(x) T(u) with T a monotone cubic interpolant.

F(x, u) is the u-antiderivative of f.  The validators sample the structural
assumptions used by the solvers: the compact-support family (f0)-(f4) for
the variational problem, the radial family (g1)-(g4) for shooting, and the
strengthened monotonicity of f(x, u)/|u| gating the ground-state minimax.
Limit-type assumptions are checked as trends on declared grids; a passing
report is evidence, not proof.

The decomposition f = f1 + f2 replaces f below the threshold s0 by the
quadratic interpolant (u/s0)^2 f(x, +-s0), making u -> f1(x, u)/|u|
globally nondecreasing; the associated inequality

    f1(x,u) [s(s/2+1) u + (1+s) v] + F1(x,u) - F1(x, (1+s)u + v) <= 0

for s >= -1 is the workhorse estimate behind the solver's energy control
and is exposed as a sampling check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

__all__ = [
    "Weight",
    "Nonlinearity",
    "CheckResult",
    "AssumptionReport",
    "ValidationGrid",
    "validate_f",
    "validate_g",
    "split_f1_f2",
    "Ineq14Report",
    "check_ineq14",
    "load_model",
    "dump_model",
]


@dataclass(frozen=True)
class Weight:
    """Nonnegative spatial weight q.

    ``kind`` is one of ``indicator`` (scale on (a, b)), ``bump``
    (scale * cos^2(pi (x-center)/(2 halfwidth)) on its support, C^1 and
    compactly supported), ``gaussian`` (scale * exp(-(x/width)^2), radially
    nonincreasing, unbounded support) or ``constant``.
    """

    kind: str
    a: float = -1.0
    b: float = 1.0
    center: float = 0.0
    halfwidth: float = 1.0
    width: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("indicator", "bump", "gaussian", "constant"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.scale < 0:
            raise ValueError("weight scale must be >= 0")
        if self.kind == "indicator" and not self.a < self.b:
            raise ValueError("indicator needs a < b")
        if self.kind == "bump" and self.halfwidth <= 0:
            raise ValueError("bump needs halfwidth > 0")
        if self.kind == "gaussian" and self.width <= 0:
            raise ValueError("gaussian needs width > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "indicator":
            out = np.where((x > self.a) & (x < self.b), self.scale, 0.0)
        elif self.kind == "bump":
            t = (x - self.center) / self.halfwidth
            out = np.where(np.abs(t) < 1.0,
                           self.scale * np.cos(0.5 * math.pi * t) ** 2, 0.0)
        elif self.kind == "gaussian":
            out = self.scale * np.exp(-((x / self.width) ** 2))
        else:
            out = np.full_like(x, self.scale)
        return float(out[()]) if out.ndim == 0 else out

    @property
    def support(self):
        """(lo, hi) for compactly supported kinds, None otherwise."""
        if self.scale == 0.0:
            return (0.0, 0.0)
        if self.kind == "indicator":
            return (self.a, self.b)
        if self.kind == "bump":
            return (self.center - self.halfwidth, self.center + self.halfwidth)
        return None

    @property
    def max_value(self) -> float:
        return self.scale


def _log_remainder(a: float, s: float) -> float:
    # M(a) = int_0^a t/(1+t^s) dt, split at t=1 where the integrand turns over
    if a == 0.0:
        return 0.0
    pts = [1.0] if a > 1.0 else None
    val, _ = quad(lambda t: t / (1.0 + t ** s), 0.0, a,
                  points=pts, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


@dataclass(frozen=True)
class Nonlinearity:
    """A concrete nonlinearity f(x, u) = q(x) * profile(u) with threshold s0."""

    kind: str
    q: Weight
    p: float = 4.0
    s: float = 1.0
    s0: float = 1.0
    radial: bool = False
    table_u: tuple = ()
    table_f: tuple = ()
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("power", "log", "table"):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "power" and self.p <= 2:
            raise ValueError("power kind needs p > 2")
        if self.kind == "log" and self.s <= 0:
            raise ValueError("log kind needs s > 0")
        if self.s0 <= 0:
            raise ValueError("threshold s0 must be > 0")
        if self.kind == "table":
            u = np.asarray(self.table_u, dtype=float)
            fv = np.asarray(self.table_f, dtype=float)
            if u.ndim != 1 or u.shape != fv.shape or len(u) < 4:
                raise ValueError("table needs matching u/f arrays with >= 4 knots")
            if np.any(np.diff(u) <= 0):
                raise ValueError("table u-knots must be strictly increasing")
            if not (u[0] <= 0.0 <= u[-1]):
                raise ValueError("table u-knots must bracket 0")
            interp = PchipInterpolator(u, fv, extrapolate=False)
            object.__setattr__(self, "_interp", interp)

    @classmethod
    def zero(cls) -> "Nonlinearity":
        """The trivial nonlinearity f = 0 (linear Helmholtz)."""
        return cls(kind="power", q=Weight(kind="constant", scale=0.0), p=4.0)

    # -- pointwise evaluation ------------------------------------------------

    def _check_table_range(self, u):
        lo, hi = self.table_u[0], self.table_u[-1]
        if np.any(u < lo) or np.any(u > hi):
            raise ValueError(f"u outside table range [{lo}, {hi}]")

    def f(self, x, u):
        """f(x, u)."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        qv = self.q(x)
        if self.kind == "power":
            out = qv * np.abs(u) ** (self.p - 2) * u
        elif self.kind == "log":
            out = qv * u * np.log1p(np.abs(u) ** self.s)
        else:
            self._check_table_range(u)
            out = qv * self._interp(u)
        return float(out[()]) if out.ndim == 0 else out

    def fu(self, x, u):
        """The u-derivative of f, used by Newton solvers."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        qv = self.q(x)
        if self.kind == "power":
            out = qv * (self.p - 1) * np.abs(u) ** (self.p - 2)
        elif self.kind == "log":
            au = np.abs(u) ** self.s
            out = qv * (np.log1p(au) + self.s * au / (1.0 + au))
        else:
            self._check_table_range(u)
            out = qv * self._interp.derivative()(u)
        return float(out[()]) if out.ndim == 0 else out

    def F(self, x, u):
        """F(x, u) = int_0^u f(x, t) dt, closed form per kind."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        qv = self.q(x)
        if self.kind == "power":
            out = qv * np.abs(u) ** self.p / self.p
        elif self.kind == "log":
            # int_0^a t log(1+t^s) dt
            #   = a^2/2 log(1+a^s) - (s/2)(a^2/2 - M(a)),  M = int t/(1+t^s)
            a = np.abs(u)
            m = np.vectorize(lambda t: _log_remainder(t, self.s))(a)
            out = qv * (0.5 * a * a * np.log1p(a ** self.s)
                        - 0.5 * self.s * (0.5 * a * a - m))
        else:
            self._check_table_range(u)
            anti = self._interp.antiderivative()
            out = qv * (anti(u) - anti(0.0))
        return float(out[()]) if out.ndim == 0 else out

    # -- f1/f2 decomposition ---------------------------------------------------

    def f1(self, x, u):
        """f above the threshold, quadratically interpolated below it."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        s0 = self.s0
        inner = (u / s0) ** 2 * np.where(u >= 0, self.f(x, s0 * np.ones_like(u)),
                                         self.f(x, -s0 * np.ones_like(u)))
        out = np.where(np.abs(u) >= s0, self.f(x, u), inner)
        return float(out[()]) if out.ndim == 0 else out

    def f2(self, x, u):
        """The bounded remainder f - f1; vanishes for |u| >= s0 and off the support."""
        out = np.asarray(self.f(x, u)) - np.asarray(self.f1(x, u))
        return float(out[()]) if out.ndim == 0 else out

    def F1(self, x, u):
        """Antiderivative of f1, piecewise closed form."""
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        s0 = self.s0
        fp = np.asarray(self.f(x, s0 * np.ones_like(u)))
        fm = np.asarray(self.f(x, -s0 * np.ones_like(u)))
        cube = u ** 3 / (3.0 * s0 * s0)
        inner = cube * np.where(u >= 0, fp, fm)
        Fu = np.asarray(self.F(x, u))
        upper = s0 / 3.0 * fp + Fu - np.asarray(self.F(x, s0 * np.ones_like(u)))
        lower = -s0 / 3.0 * fm + Fu - np.asarray(self.F(x, -s0 * np.ones_like(u)))
        out = np.where(u >= s0, upper, np.where(u <= -s0, lower, inner))
        return float(out[()]) if out.ndim == 0 else out


def split_f1_f2(nl: Nonlinearity, x, u):
    """The pair (f1, f2) at (x, u); f1 + f2 = f identically."""
    return nl.f1(x, u), nl.f2(x, u)


# ---------------------------------------------------------------------------
# assumption validators

@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_margin: float
    worst_point: tuple
    note: str = ""


@dataclass
class AssumptionReport:
    checks: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def passed(self, name: str) -> bool:
        return self.checks[name].passed

    def summary(self) -> str:
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'} {c.name}: worst {c.worst_margin:.3e}"
            f" at {c.worst_point} {c.note}"
            for c in self.checks.values()
        )


@dataclass
class ValidationGrid:
    """Sampling grid for the validators; deterministic for a fixed seed."""

    x: np.ndarray
    u: np.ndarray

    @classmethod
    def default(cls, nl: Nonlinearity, seed: int = 0, radial: bool = False):
        sup = nl.q.support
        if sup is not None and sup[1] > sup[0]:
            lo, hi = sup
            w = hi - lo
            inside = np.linspace(lo + 1e-3 * w, hi - 1e-3 * w, 21)
        else:
            lo, hi, w = -2.0, 2.0, 4.0
            inside = np.linspace(0.0 if radial else -2.0, 6.0 if radial else 2.0, 21)
        outside = np.array([hi + 0.3 * w, hi + 2.0 * w, hi + 10.0 * w])
        if not radial:
            outside = np.concatenate([outside, [lo - 0.3 * w, lo - 2.0 * w]])
        rng = np.random.default_rng(seed)
        jitter = rng.uniform(lo, hi, size=8)
        if radial:
            jitter = np.abs(jitter)
        x = np.unique(np.concatenate([inside, outside, jitter]))
        # table models only cover a finite u-range
        u_top = 6.0
        if nl.kind == "table":
            u_top = math.log10(0.98 * min(-nl.table_u[0], nl.table_u[-1]))
        mag = np.concatenate([
            np.logspace(-8, u_top, 57),
            np.linspace(0.2 * nl.s0, min(5.0 * nl.s0, 10.0 ** u_top), 25),
        ])
        mag = np.unique(mag)
        u = np.concatenate([-mag[::-1], [0.0], mag])
        return cls(x=x, u=u)


def _inside_outside(nl, grid):
    sup = nl.q.support
    if sup is None:
        inside = grid.x
        outside = np.zeros(0)
    else:
        lo, hi = sup
        mask = (grid.x > lo) & (grid.x < hi)
        inside, outside = grid.x[mask], grid.x[~mask]
    return inside, outside


def _monotone_ratio_check(nl, xs, u_line, slack=1e-10):
    """Worst decrease of u -> f(x,u)/|u| along an increasing |u| ladder."""
    worst, where = 0.0, (math.nan, math.nan)
    for x in xs:
        vals = nl.f(np.full_like(u_line, x), u_line) / np.abs(u_line)
        scale = np.maximum(1.0, np.abs(vals[:-1]))
        drop = (vals[:-1] - vals[1:]) / scale
        i = int(np.argmax(drop))
        if drop[i] > worst:
            worst, where = float(drop[i]), (float(x), float(u_line[i + 1]))
    return worst <= slack, worst, where


def validate_f(nl: Nonlinearity, grid: ValidationGrid = None, seed: int = 0) -> AssumptionReport:
    """Sampled checks of the compact-support assumptions (f0)-(f4).

    Also reports ``strong_monotone``, the strengthened global monotonicity
    of f(x,u)/|u| required by the ground-state minimax characterization.
    """
    if grid is None:
        grid = ValidationGrid.default(nl, seed=seed, radial=nl.radial)
    inside, outside = _inside_outside(nl, grid)
    u = grid.u
    unz = u[u != 0]
    checks = {}

    # (f0) vanishing off the support
    if nl.q.support is None:
        checks["f0"] = CheckResult("f0", False, math.inf, (math.nan, math.nan),
                                   "weight has unbounded support")
    else:
        worst, where = 0.0, (math.nan, math.nan)
        for x in outside:
            vals = np.abs(nl.f(np.full_like(u, x), u))
            i = int(np.argmax(vals))
            if vals[i] > worst:
                worst, where = float(vals[i]), (float(x), float(u[i]))
        checks["f0"] = CheckResult("f0", worst == 0.0, worst, where)

    # (f1) growth |f| <= a (1 + |u|^(p-1)): the sampled constant must not
    # grow along the largest |u| decade.
    p_ref = nl.p if nl.kind == "power" else 2.5
    ratios = np.zeros_like(unz)
    for x in inside:
        vals = np.abs(nl.f(np.full_like(unz, x), unz)) / (1.0 + np.abs(unz) ** (p_ref - 1))
        ratios = np.maximum(ratios, vals)
    big = np.abs(unz) >= 0.1 * np.abs(unz).max()
    mid = (np.abs(unz) >= 1.0) & ~big
    a_big = float(ratios[big].max()) if big.any() else 0.0
    a_mid = float(ratios[mid].max()) if mid.any() else 0.0
    ok = a_big <= 1.05 * max(a_mid, 1e-300) or a_big == 0.0
    checks["f1"] = CheckResult("f1", ok, a_big, (math.nan, float(np.abs(unz).max())),
                               f"sampled growth constant a ~ {max(a_big, a_mid):.3g} at p={p_ref}")

    # (f2) f = o(|u|) near u = 0, uniformly in x
    small = np.abs(unz) <= 1e-4
    m_of_u = {}
    for uu in np.unique(np.abs(unz[small])):
        vals = [abs(nl.f(x, uu)) / uu for x in np.concatenate([inside, outside])]
        m_of_u[uu] = max(vals) if vals else 0.0
    us = sorted(m_of_u)
    ms = np.array([m_of_u[t] for t in us])
    if ms.max() == 0.0:
        ok, worst = True, 0.0
    else:
        nondec = np.all(np.diff(ms) >= -1e-12 * np.maximum(1.0, ms[:-1]))
        ok = bool(nondec and ms[0] <= 0.5 * ms[-1])
        worst = float(ms[0])
    checks["f2"] = CheckResult("f2", ok, worst, (math.nan, float(us[0])),
                               "trend of max_x |f|/|u| as u -> 0")

    # (f3) F >= 0 and F/u^2 -> infinity on the support
    worst, where = 0.0, (math.nan, math.nan)
    for x in np.concatenate([inside, outside]):
        vals = nl.F(np.full_like(u, x), u)
        i = int(np.argmin(vals))
        if -vals[i] > worst:
            worst, where = float(-vals[i]), (float(x), float(u[i]))
    nonneg_ok = worst <= 1e-12
    u_top = np.abs(unz).max()
    u_mid = u_top / 100.0
    grow_ok = len(inside) > 0
    grow_where = (math.nan, math.nan)
    for x in inside:
        top = nl.F(x, u_top) / u_top ** 2
        midv = nl.F(x, u_mid) / u_mid ** 2
        if not (top > 0 and top >= 10.0 * midv):
            grow_ok = False
            grow_where = (float(x), float(u_top))
            break
    checks["f3"] = CheckResult("f3", bool(nonneg_ok and grow_ok), worst,
                               grow_where if nonneg_ok else where,
                               "nonnegativity and superquadratic growth")

    # (f4) sign at +-s0 and monotonicity of f/|u| beyond s0
    sgn_worst, sgn_where = 0.0, (math.nan, math.nan)
    for x in inside:
        bad = max(-nl.f(x, nl.s0), nl.f(x, -nl.s0))
        if bad > sgn_worst:
            sgn_worst, sgn_where = float(bad), (float(x), nl.s0)
    tail = np.unique(np.abs(unz[np.abs(unz) > nl.s0]))
    mono_ok, mono_worst, mono_where = _monotone_ratio_check(nl, inside, tail)
    mono_ok_n, mono_worst_n, _ = _monotone_ratio_check(nl, inside, -tail[::-1])
    ok = sgn_worst <= 1e-12 and mono_ok and mono_ok_n
    checks["f4"] = CheckResult("f4", bool(ok), max(sgn_worst, mono_worst, mono_worst_n),
                               sgn_where if sgn_worst > 1e-12 else mono_where)

    # strengthened monotonicity on all of R \ {0} (minimax gate)
    pos = np.unique(np.abs(unz))
    ok_p, w_p, where_p = _monotone_ratio_check(nl, inside, pos)
    ok_n, w_n, _ = _monotone_ratio_check(nl, inside, -pos[::-1])
    checks["strong_monotone"] = CheckResult(
        "strong_monotone", bool(ok_p and ok_n), max(w_p, w_n), where_p,
        "u -> f(x,u)/|u| nondecreasing on R minus 0")

    return AssumptionReport(checks=checks)


def validate_g(nl: Nonlinearity, grid: ValidationGrid = None, seed: int = 0) -> AssumptionReport:
    """Sampled checks of the radial assumptions (g1)-(g4) on r >= 0."""
    if grid is None:
        grid = ValidationGrid.default(nl, seed=seed, radial=True)
    r = np.abs(grid.x)
    u = grid.u
    unz = u[u != 0]
    checks = {}

    # (g1) f(., 0) = 0 and a finite sampled Lipschitz quotient in u
    z_worst = max(abs(nl.f(rr, 0.0)) for rr in r)
    du = 1e-6
    quot = 0.0
    for rr in r:
        vals = np.abs(nl.f(np.full_like(unz, rr), unz + du) - nl.f(np.full_like(unz, rr), unz)) / du
        quot = max(quot, float(vals.max()))
    checks["g1"] = CheckResult("g1", bool(z_worst <= 1e-12 and math.isfinite(quot)),
                               z_worst, (math.nan, 0.0),
                               f"max sampled difference quotient {quot:.3g}")

    # (g2) 0 <= F <= f u / 2
    worst, where = 0.0, (math.nan, math.nan)
    for rr in r:
        Fv = nl.F(np.full_like(u, rr), u)
        fv = nl.f(np.full_like(u, rr), u)
        scale = np.maximum(1.0, np.abs(fv * u))
        bad = np.maximum(-Fv, Fv - 0.5 * fv * u) / scale
        i = int(np.argmax(bad))
        if bad[i] > worst:
            worst, where = float(bad[i]), (float(rr), float(u[i]))
    checks["g2"] = CheckResult("g2", worst <= 1e-12, worst, where)

    # (g3) dF/dr <= 0 by central differences
    worst, where = 0.0, (math.nan, math.nan)
    for rr in r[r > 0]:
        d = 1e-5 * max(1.0, rr)
        dF = (nl.F(np.full_like(u, rr + d), u) - nl.F(np.full_like(u, max(rr - d, 0.0)), u)) / (2 * d)
        scale = np.maximum(1.0, np.abs(nl.F(np.full_like(u, rr), u)))
        bad = dF / scale
        i = int(np.argmax(bad))
        if bad[i] > worst:
            worst, where = float(bad[i]), (float(rr), float(u[i]))
    checks["g3"] = CheckResult("g3", worst <= 1e-8, worst, where)

    # (g4) f = o(|u|) as u -> 0 uniformly in r
    small = np.abs(unz) <= 1e-4
    us = np.unique(np.abs(unz[small]))
    ms = np.array([max(abs(nl.f(rr, uu)) / uu for rr in r) for uu in us])
    if ms.max() == 0.0:
        ok, worst = True, 0.0
    else:
        nondec = np.all(np.diff(ms) >= -1e-12 * np.maximum(1.0, ms[:-1]))
        ok = bool(nondec and ms[0] <= 0.5 * ms[-1])
        worst = float(ms[0])
    checks["g4"] = CheckResult("g4", ok, worst, (math.nan, float(us[0])))

    return AssumptionReport(checks=checks)


# ---------------------------------------------------------------------------
# the structural inequality behind the energy estimates

@dataclass
class Ineq14Report:
    n_samples: int
    n_violations: int
    worst_margin: float
    worst_sample: tuple
    used_f: bool


def check_ineq14(nl: Nonlinearity, n_samples: int = 100_000, seed: int = 0,
                 use_f: bool = False) -> Ineq14Report:
    """Sample f1(x,u)[s(s/2+1)u + (1+s)v] + F1(x,u) - F1(x,(1+s)u+v) <= 0.

    With ``use_f`` the check runs with f, F in place of f1, F1, which is the
    valid form for nonlinearities passing the strengthened monotonicity.
    A sample counts as a violation above 1e-12 times its magnitude scale.
    """
    rng = np.random.default_rng(seed)
    sup = nl.q.support or (-2.0, 2.0)
    lo, hi = sup
    w = max(hi - lo, 1e-6)
    x = rng.uniform(lo - 0.25 * w, hi + 0.25 * w, size=n_samples)
    mag = 10.0 ** rng.uniform(-3, 3, size=(2, n_samples))
    u = rng.standard_normal(n_samples) * mag[0]
    v = rng.standard_normal(n_samples) * mag[1]
    s = -1.0 + np.abs(rng.standard_normal(n_samples)) * 10.0 ** rng.uniform(-2, 1, n_samples)

    fv = nl.f(x, u) if use_f else nl.f1(x, u)
    Fu = nl.F(x, u) if use_f else nl.F1(x, u)
    wv = (1.0 + s) * u + v
    Fw = nl.F(x, wv) if use_f else nl.F1(x, wv)
    expr = fv * (s * (0.5 * s + 1.0) * u + (1.0 + s) * v) + Fu - Fw
    scale = np.maximum.reduce([np.ones_like(expr), np.abs(Fu), np.abs(Fw),
                               np.abs(fv * u), np.abs(fv * v)])
    margin = expr / scale
    bad = margin > 1e-12
    i = int(np.argmax(margin))
    return Ineq14Report(
        n_samples=n_samples,
        n_violations=int(np.count_nonzero(bad)),
        worst_margin=float(margin[i]),
        worst_sample=(float(x[i]), float(u[i]), float(v[i]), float(s[i])),
        used_f=use_f,
    )


# ---------------------------------------------------------------------------
# model files

_WEIGHT_KEYS = {
    "indicator": {"type", "a", "b", "scale"},
    "bump": {"type", "center", "halfwidth", "scale"},
    "gaussian": {"type", "width", "scale"},
    "constant": {"type", "scale"},
}
_MODEL_KEYS = {"kind", "p", "s", "s0", "radial", "q", "table"}


def _weight_from_dict(d: dict) -> Weight:
    kind = d.get("type")
    if kind not in _WEIGHT_KEYS:
        raise ValueError(f"unknown weight type {kind!r}")
    extra = set(d) - _WEIGHT_KEYS[kind]
    if extra:
        raise ValueError(f"unknown weight keys {sorted(extra)}")
    args = {k: v for k, v in d.items() if k != "type"}
    return Weight(kind=kind, **args)


def model_from_dict(d: dict) -> Nonlinearity:
    extra = set(d) - _MODEL_KEYS
    if extra:
        raise ValueError(f"unknown model keys {sorted(extra)}")
    if "kind" not in d or "q" not in d:
        raise ValueError("model needs at least 'kind' and 'q'")
    kw = dict(kind=d["kind"], q=_weight_from_dict(d["q"]))
    for key in ("p", "s", "s0", "radial"):
        if key in d:
            kw[key] = d[key]
    if "table" in d:
        kw["table_u"] = tuple(d["table"]["u"])
        kw["table_f"] = tuple(d["table"]["f"])
    return Nonlinearity(**kw)


def model_to_dict(nl: Nonlinearity) -> dict:
    q = {"type": nl.q.kind, "scale": nl.q.scale}
    if nl.q.kind == "indicator":
        q.update(a=nl.q.a, b=nl.q.b)
    elif nl.q.kind == "bump":
        q.update(center=nl.q.center, halfwidth=nl.q.halfwidth)
    elif nl.q.kind == "gaussian":
        q.update(width=nl.q.width)
    d = {"kind": nl.kind, "s0": nl.s0, "radial": nl.radial, "q": q}
    if nl.kind == "power":
        d["p"] = nl.p
    elif nl.kind == "log":
        d["s"] = nl.s
    else:
        d["table"] = {"u": list(nl.table_u), "f": list(nl.table_f)}
    return d


def load_model(path) -> Nonlinearity:
    """Read a model JSON file (see README for the schema)."""
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def dump_model(nl: Nonlinearity, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(nl), fh, indent=2, sort_keys=True)
        fh.write("\n")
