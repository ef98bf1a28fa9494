"""Real-order Bessel functions J, Y with derivatives, and cylinder-function zeros.

Everything downstream (capacity coefficients, ball eigenvalues, degenerate
radii) is built from the values returned here, so this module carries an
explicit validated envelope and a per-call error estimate.

Values are computed with ``scipy.special.jv``/``yv``; derivatives use the
exact recurrence C'_mu(x) = C_{mu-1}(x) - (mu/x) C_mu(x), never finite
differences, so the Wronskian J*Y' - J'*Y = 2/(pi*x) is preserved close to
machine precision.  The error estimate is the measured Wronskian defect,
which is a genuine self-check because it mixes all four returned values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv, yv

__all__ = [
    "MU_MAX",
    "X_MIN",
    "X_MAX",
    "BesselValue",
    "bessel_jy",
    "bessel_jy_arrays",
    "hankel1_modsq",
    "cylinder",
    "zero_spacing_bound",
    "bessel_zero_scan",
]

# Validated envelope: inside it the Wronskian defect is tested to stay below
# max(1e-10, 1e-8 * magnitude).  Calls outside still return values but carry
# an infinite (unvalidated) error estimate.
MU_MAX = 60.0
X_MIN = 1e-3
X_MAX = 200.0


@dataclass(frozen=True)
class BesselValue:
    """J_mu(x), Y_mu(x) and their x-derivatives, with an error estimate.

    ``abs_err_est`` is the absolute Wronskian defect
    |J*Y' - J'*Y - 2/(pi x)| floored at machine roundoff of the products;
    it is ``inf`` outside the validated (mu, x) envelope.
    """

    j: float
    y: float
    jp: float
    yp: float
    abs_err_est: float


def _validate(mu: float, x) -> None:
    if not np.all(np.isfinite(mu)) or mu < 0:
        raise ValueError(f"order mu must be finite and >= 0, got {mu}")
    if np.any(~np.isfinite(np.asarray(x, dtype=float))) or np.any(np.asarray(x) <= 0):
        raise ValueError("argument x must be finite and > 0 (Y_mu is singular at 0)")


def in_envelope(mu: float, x) -> bool:
    """True when (mu, x) lies in the validated accuracy envelope."""
    x = np.asarray(x, dtype=float)
    return bool(mu <= MU_MAX and np.all(x >= X_MIN) and np.all(x <= X_MAX))


def bessel_jy_arrays(mu: float, x):
    """Vectorized J, Y, J', Y' at real order ``mu`` for an array ``x > 0``.

    Returns four arrays; raises OverflowError when Y overflows the double
    range (tiny x together with large mu).
    """
    _validate(mu, x)
    x = np.asarray(x, dtype=float)
    j = jv(mu, x)
    y = yv(mu, x)
    if np.any(~np.isfinite(y)) or np.any(~np.isfinite(j)):
        raise OverflowError(
            f"Y_mu overflows double range for mu={mu}, min x={x.min():g}"
        )
    # C'_mu = C_{mu-1} - (mu/x) C_mu
    jp = jv(mu - 1.0, x) - (mu / x) * j
    yp = yv(mu - 1.0, x) - (mu / x) * y
    return j, y, jp, yp


def bessel_jy(mu: float, x: float) -> BesselValue:
    """J_mu(x), Y_mu(x), J'_mu(x), Y'_mu(x) for scalar mu >= 0, x > 0."""
    j, y, jp, yp = bessel_jy_arrays(mu, np.asarray([x]))
    j, y, jp, yp = float(j[0]), float(y[0]), float(jp[0]), float(yp[0])
    if in_envelope(mu, x):
        defect = abs(j * yp - jp * y - 2.0 / (math.pi * x))
        err = max(defect, 1e-16 * (abs(j * yp) + abs(jp * y)))
    else:
        err = math.inf
    return BesselValue(j=j, y=y, jp=jp, yp=yp, abs_err_est=err)


def hankel1_modsq(mu: float, x):
    """|H^(1)_mu(x)|^2 = J_mu(x)^2 + Y_mu(x)^2, strictly positive.

    Strictly decreasing in x; x*|H|^2 is monotone toward the limit 2/pi
    (nonincreasing for mu >= 1/2, nondecreasing for mu <= 1/2).
    """
    _validate(mu, x)
    x = np.asarray(x, dtype=float)
    j = jv(mu, x)
    y = yv(mu, x)
    if np.any(~np.isfinite(y)):
        raise OverflowError(f"Y_mu overflows double range for mu={mu}")
    out = j * j + y * y
    return float(out[()]) if out.ndim == 0 else out


def cylinder(mu: float, cj: float, cy: float, x):
    """The real cylinder function cj*J_mu(x) + cy*Y_mu(x)."""
    _validate(mu, x)
    x = np.asarray(x, dtype=float)
    out = cj * jv(mu, x) + cy * yv(mu, x)
    return float(out[()]) if out.ndim == 0 else out


def zero_spacing_bound(mu: float, a: float) -> float:
    """Lower bound for the gap between consecutive zeros on (a, inf).

    Sturm comparison for v'' + (1 - (mu^2 - 1/4)/x^2) v = 0: any real
    cylinder function of order mu has consecutive zeros at least
    pi / sqrt(1 + max(0, 1/4 - mu^2)/a^2) apart on (a, inf).  Zeros are
    simple (J and Y cannot vanish together by the Wronskian), so a sign
    scan with step below this bound cannot skip a zero.
    """
    if a <= 0:
        raise ValueError("interval must satisfy 0 < a")
    excess = max(0.0, 0.25 - mu * mu)
    return math.pi / math.sqrt(1.0 + excess / (a * a))


def bessel_zero_scan(mu, which, a, b, step=None):
    """All zeros of J_mu, Y_mu or a fixed combination cj*J + cy*Y on [a, b].

    ``which`` is ``"j"``, ``"y"`` or a pair ``(cj, cy)``.  Sign changes on a
    uniform scan grid are refined with Brent's method to a location
    tolerance of ``1e-12 * max(1, b)``.  The default step is a quarter of
    the guaranteed zero spacing; a user-supplied coarser step that could
    skip adjacent zeros is rejected rather than silently accepted.

    Returns an ascending numpy array (possibly empty).
    """
    if not (0 < a < b):
        raise ValueError(f"need 0 < a < b, got [{a}, {b}]")
    if isinstance(which, str):
        key = which.lower()
        if key == "j":
            cj, cy = 1.0, 0.0
        elif key == "y":
            cj, cy = 0.0, 1.0
        else:
            raise ValueError(f"which must be 'j', 'y' or a (cj, cy) pair, got {which!r}")
    else:
        cj, cy = map(float, which)
        if cj == 0.0 and cy == 0.0:
            raise ValueError("combination coefficients cannot both vanish")

    bound = zero_spacing_bound(mu, a)
    if step is None:
        step = bound / 4.0
    elif step > 0.5 * bound:
        raise ValueError(
            f"scan step {step:g} too coarse: adjacent zeros can be as close as "
            f"{bound:g} on [{a:g}, {b:g}]; use step <= {0.5 * bound:g}"
        )

    n = int(math.ceil((b - a) / step)) + 1
    grid = np.linspace(a, b, max(n, 2))
    f = cylinder(mu, cj, cy, grid)

    func = lambda x: cylinder(mu, cj, cy, x)
    xtol = 1e-12 * max(1.0, b)
    roots = []
    for i in range(len(grid) - 1):
        fa, fb = f[i], f[i + 1]
        if fa == 0.0:
            roots.append(grid[i])
        elif fa * fb < 0.0:
            roots.append(brentq(func, grid[i], grid[i + 1], xtol=xtol, rtol=1e-15))
    if f[-1] == 0.0:
        roots.append(grid[-1])
    return np.array(sorted(set(roots)))
