"""Capacity (Dirichlet-to-Neumann) operator of the exterior Helmholtz problem.

The unique outgoing solution of Delta w + k^2 w = 0 outside the ball of
radius R with boundary data u on the sphere S_R is an explicit series over
spherical harmonics, with radial factors built from Hankel functions
H^(1)_mu = J_mu + i Y_mu of orders mu_ell = ell + (N-2)/2.  The capacity
operator multiplies the harmonic coefficient of degree ell by z_ell(kR)/R
where

    z_ell(r) = r H'(r)/H(r) - (N-2)/2,

and its real part (the operator used by the real variational problem) by
Re z_ell(kR)/R.  Everything here works at the level of coefficient vectors;
pointwise sphere values are available for N in {2, 3} where explicit real
harmonic bases exist.

The one-dimensional analogue (N = 1, where the capacity operator is
u(+-R) |-> i k u(+-R) and its real part vanishes) is handled by the interval
solver in :mod:`nlhelm.variational`, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import lpmv

from . import bessel

__all__ = [
    "harmonic_dim",
    "HarmonicDimTable",
    "HarmonicCoefficients",
    "CapacityCoefficient",
    "capacity_coeff",
    "capacity_coeffs",
    "dtn_apply",
    "ktr_apply",
    "ktr_quadratic_form",
    "surface_norm_sq",
    "sphere_harmonic",
    "exterior_coeffs_at_radius",
    "exterior_eval",
    "radiation_diagnostics",
    "RadiationReport",
]

# Relative cushion for the coefficient bound flags: for N=3, ell=0 both
# bounds are saturated exactly and roundoff crosses them at the 1e-14 level.
BOUND_RTOL = 1e-12


def harmonic_dim(N: int, ell: int) -> int:
    """Dimension of the space of degree-ell spherical harmonics in R^N."""
    if N < 2 or ell < 0:
        raise ValueError(f"need N >= 2 and ell >= 0, got N={N}, ell={ell}")
    if ell == 0:
        return 1
    return (N + 2 * ell - 2) * math.comb(N + ell - 2, ell) // (N + ell - 2)


@dataclass(frozen=True)
class HarmonicDimTable:
    """d_ell for ell = 0..lmax in dimension N."""

    N: int
    dims: tuple

    @classmethod
    def build(cls, N: int, lmax: int) -> "HarmonicDimTable":
        return cls(N=N, dims=tuple(harmonic_dim(N, ell) for ell in range(lmax + 1)))


@dataclass
class HarmonicCoefficients:
    """Coefficients u^ell_m of a function on the sphere S_R.

    ``coeffs[ell]`` is a length d^N_ell array (real or complex) in the
    orthonormal real harmonic basis of L^2(S_1); the surface measure of S_R
    enters quadratic forms through an explicit R^(N-1) factor.
    """

    N: int
    R: float
    coeffs: list = field(default_factory=list)

    def __post_init__(self):
        if self.N < 2 or self.R <= 0:
            raise ValueError("need N >= 2 and R > 0")
        self.coeffs = [np.atleast_1d(np.asarray(c)) for c in self.coeffs]
        for ell, c in enumerate(self.coeffs):
            d = harmonic_dim(self.N, ell)
            if c.shape != (d,):
                raise ValueError(
                    f"coefficient block ell={ell} has shape {c.shape}, expected ({d},)"
                )
            if not np.all(np.isfinite(c)):
                raise ValueError(f"non-finite coefficient in block ell={ell}")

    @property
    def lmax(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def single_mode(cls, N, R, ell, m=0, value=1.0, lmax=None):
        """Coefficients with a single nonzero entry u^ell_m = value."""
        lmax = ell if lmax is None else lmax
        blocks = [np.zeros(harmonic_dim(N, l), dtype=np.result_type(float, value))
                  for l in range(lmax + 1)]
        blocks[ell][m] = value
        return cls(N=N, R=R, coeffs=blocks)

    def is_real(self) -> bool:
        return all(not np.iscomplexobj(c) for c in self.coeffs)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.coeffs) if self.coeffs else np.zeros(0)


@dataclass(frozen=True)
class CapacityCoefficient:
    """z_ell(kR) together with its bound checks.

    For ell >= max(0, (3-N)/2) the bounds are
    (N-1)/2 <= -Re z <= ell + N - 2 and 0 < Im z <= kR; in the remaining
    case N=2, ell=0 they are 0 < -Re z <= 1/2 and Im z > 0.
    """

    ell: int
    z: complex
    re_bound_ok: bool
    im_bound_ok: bool


def _z_values(N: int, r, ells):
    """z_ell(r) for an array of r > 0 and a list of ell, stably scaled.

    Re z = (r/2) d/dr(J^2+Y^2)/(J^2+Y^2) - (N-2)/2 and
    Im z = 2 / (pi (J^2+Y^2)); both are computed after dividing J, Y, J', Y'
    by max(|J|, |Y|) so that the huge-Y regime (small r, large order) cannot
    overflow in the intermediate products.
    """
    r = np.asarray(r, dtype=float)
    out = np.empty((len(ells),) + r.shape, dtype=complex)
    for i, ell in enumerate(ells):
        mu = ell + (N - 2) / 2.0
        j, y, jp, yp = bessel.bessel_jy_arrays(mu, r)
        m = np.maximum(np.abs(j), np.abs(y))
        js, ys, jps, yps = j / m, y / m, jp / m, yp / m
        den = js * js + ys * ys
        re_g = r * (js * jps + ys * yps) / den
        im_g = 2.0 / (math.pi * m * m * den)
        out[i] = (re_g - (N - 2) / 2.0) + 1j * im_g
    return out


def _bounds_ok(N: int, ell: int, r: float, z: complex):
    re, im = -z.real, z.imag
    if N == 2 and ell == 0:
        re_ok = 0.0 < re <= 0.5 * (1.0 + BOUND_RTOL)
        im_ok = im > 0.0
    else:
        re_ok = (N - 1) / 2.0 * (1.0 - BOUND_RTOL) <= re <= (ell + N - 2) * (1.0 + BOUND_RTOL)
        im_ok = 0.0 < im <= r * (1.0 + BOUND_RTOL)
    return re_ok, im_ok


def capacity_coeff(N: int, k: float, R: float, ell: int) -> CapacityCoefficient:
    """The coefficient z_ell(kR) of the capacity operator, with bound flags."""
    if k <= 0 or R <= 0:
        raise ValueError("need k > 0 and R > 0")
    r = k * R
    z = complex(_z_values(N, np.asarray([r]), [ell])[0, 0])
    re_ok, im_ok = _bounds_ok(N, ell, r, z)
    return CapacityCoefficient(ell=ell, z=z, re_bound_ok=re_ok, im_bound_ok=im_ok)


def capacity_coeffs(N: int, k: float, R: float, lmax: int):
    """z_ell(kR) for ell = 0..lmax as a list of CapacityCoefficient."""
    return [capacity_coeff(N, k, R, ell) for ell in range(lmax + 1)]


def dtn_apply(k: float, u: HarmonicCoefficients) -> HarmonicCoefficients:
    """Capacity operator: multiply each degree-ell block by z_ell(kR)/R."""
    zs = _z_values(u.N, np.asarray([k * u.R]), range(u.lmax + 1))[:, 0]
    blocks = [np.asarray(c, dtype=complex) * (zs[ell] / u.R)
              for ell, c in enumerate(u.coeffs)]
    return HarmonicCoefficients(N=u.N, R=u.R, coeffs=blocks)


def ktr_apply(k: float, u: HarmonicCoefficients) -> HarmonicCoefficients:
    """Real part of the capacity operator on real boundary data.

    Diagonal with multipliers Re z_ell(kR)/R < 0, hence symmetric and
    negative definite on L^2(S_R).
    """
    if not u.is_real():
        raise ValueError("ktr_apply expects real coefficients")
    zs = _z_values(u.N, np.asarray([k * u.R]), range(u.lmax + 1))[:, 0]
    blocks = [c * (zs[ell].real / u.R) for ell, c in enumerate(u.coeffs)]
    return HarmonicCoefficients(N=u.N, R=u.R, coeffs=blocks)


def surface_norm_sq(u: HarmonicCoefficients) -> float:
    """The squared L^2(S_R) norm, R^(N-1) * sum |u^ell_m|^2."""
    return u.R ** (u.N - 1) * float(sum(np.sum(np.abs(c) ** 2) for c in u.coeffs))


def ktr_quadratic_form(k: float, u: HarmonicCoefficients) -> float:
    """The boundary quadratic form integral_{S_R} u * (K_R u) dsigma."""
    if not u.is_real():
        raise ValueError("quadratic form is defined for real coefficients")
    zs = _z_values(u.N, np.asarray([k * u.R]), range(u.lmax + 1))[:, 0]
    acc = sum(zs[ell].real / u.R * float(np.sum(c * c))
              for ell, c in enumerate(u.coeffs))
    return u.R ** (u.N - 1) * acc


# ---------------------------------------------------------------------------
# pointwise real harmonic bases for N in {2, 3}

def _real_sph3(ell: int, m_index: int, theta, phi):
    """Orthonormal real spherical harmonics on S^2, indexed m_index=0..2*ell.

    m_index 0 is the zonal harmonic; odd/even pairs carry cos/sin of
    m*phi for m = 1..ell.  Unit L^2(S_1) norm.
    """
    if m_index == 0:
        m = 0
    else:
        m = (m_index + 1) // 2
    norm = math.sqrt((2 * ell + 1) / (4 * math.pi)) * math.exp(
        0.5 * (math.lgamma(ell - m + 1) - math.lgamma(ell + m + 1))
    )
    p = lpmv(m, ell, np.cos(theta))
    if m == 0:
        return norm * p
    ang = np.cos(m * phi) if m_index % 2 == 1 else np.sin(m * phi)
    return math.sqrt(2.0) * norm * p * ang


def sphere_harmonic(N: int, ell: int, m_index: int, xi):
    """Real orthonormal harmonic basis value at unit vectors ``xi``.

    For N=2 the basis of degree ell >= 1 is {cos(ell t)/sqrt(pi),
    sin(ell t)/sqrt(pi)} (m_index 0, 1) with the constant 1/sqrt(2 pi) at
    ell = 0; for N=3 the standard real spherical harmonics.  Pointwise
    evaluation for N >= 4 is out of scope (coefficient level only).
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    if xi.shape[1] != N:
        raise ValueError(f"points have dimension {xi.shape[1]}, expected {N}")
    if not 0 <= m_index < harmonic_dim(N, ell):
        raise ValueError(f"m_index {m_index} out of range for (N={N}, ell={ell})")
    if N == 2:
        t = np.arctan2(xi[:, 1], xi[:, 0])
        if ell == 0:
            return np.full(len(xi), 1.0 / math.sqrt(2.0 * math.pi))
        ang = np.cos(ell * t) if m_index == 0 else np.sin(ell * t)
        return ang / math.sqrt(math.pi)
    if N == 3:
        theta = np.arccos(np.clip(xi[:, 2], -1.0, 1.0))
        phi = np.arctan2(xi[:, 1], xi[:, 0])
        return _real_sph3(ell, m_index, theta, phi)
    raise NotImplementedError("pointwise harmonics are implemented for N in {2, 3}")


# ---------------------------------------------------------------------------
# exterior field

def _radial_ratios(u: HarmonicCoefficients, k: float, r):
    """ratio_ell(r) = (r/R)^(-(N-2)/2) H_mu(kr)/H_mu(kR) and its r-derivative.

    The Hankel quotient is evaluated as a scaled complex division so that
    the huge-|Y| regime at large order cannot overflow.
    """
    N, R = u.N, u.R
    r = np.asarray(r, dtype=float)
    if np.any(r < R * (1.0 - 1e-12)):
        raise ValueError("exterior evaluation needs |x| >= R")
    ratios = np.empty((u.lmax + 1,) + r.shape, dtype=complex)
    dratios = np.empty_like(ratios)
    pref = (r / R) ** (-(N - 2) / 2.0)
    dpref = (-(N - 2) / 2.0) * pref / r
    for ell in range(u.lmax + 1):
        mu = ell + (N - 2) / 2.0
        jR, yR, _, _ = bessel.bessel_jy_arrays(mu, np.asarray([k * R]))
        scale = max(abs(jR[0]), abs(yR[0]))
        hR = complex(jR[0] / scale, yR[0] / scale)
        j, y, jp, yp = bessel.bessel_jy_arrays(mu, k * r)
        h = (j + 1j * y) / scale
        hp = (jp + 1j * yp) / scale
        quot = h / hR
        dquot = k * hp / hR
        ratios[ell] = pref * quot
        dratios[ell] = dpref * quot + pref * dquot
    return ratios, dratios


def exterior_coeffs_at_radius(u: HarmonicCoefficients, k: float, r: float):
    """Harmonic coefficients of the outgoing field restricted to S_r, r >= R.

    At r = R this returns the input coefficients exactly (each ratio is 1).
    """
    ratios, _ = _radial_ratios(u, k, np.asarray([r]))
    blocks = [np.asarray(c, dtype=complex) * ratios[ell, 0]
              for ell, c in enumerate(u.coeffs)]
    return HarmonicCoefficients(N=u.N, R=float(r), coeffs=blocks)


def exterior_eval(u: HarmonicCoefficients, k: float, points, lmax=None):
    """Outgoing exterior field w at points x with |x| >= R (N in {2, 3}).

    ``points`` has shape (P, N).  Retains modes up to ``lmax`` (defaults to
    all provided).  Returns (values, tail_bound) where tail_bound is a
    rigorous sup-norm bound for the dropped modes, using |ratio| <= 1 and
    the addition theorem sum_m Y^2 = d_ell / |S_1|.
    """
    if u.N not in (2, 3):
        raise NotImplementedError("pointwise exterior evaluation needs N in {2, 3}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(pts, axis=1)
    if np.any(r <= 0):
        raise ValueError("points must be nonzero")
    xi = pts / r[:, None]
    use = u.lmax if lmax is None else min(lmax, u.lmax)
    ratios, _ = _radial_ratios(u, k, r)
    w = np.zeros(len(pts), dtype=complex)
    for ell in range(use + 1):
        for m in range(harmonic_dim(u.N, ell)):
            c = u.coeffs[ell][m]
            if c != 0:
                w += c * ratios[ell] * sphere_harmonic(u.N, ell, m, xi)
    area = 2.0 * math.pi if u.N == 2 else 4.0 * math.pi
    tail = sum(
        math.sqrt(float(np.sum(np.abs(u.coeffs[ell]) ** 2)))
        * math.sqrt(harmonic_dim(u.N, ell) / area)
        for ell in range(use + 1, u.lmax + 1)
    )
    return w, float(tail)


@dataclass
class RadiationReport:
    """Far-field diagnostics of an outgoing field along sampled radii.

    ``amplitude`` is r^((N-1)/2) * ||w(r .)||_{L^2(S_1)} and ``sommerfeld``
    the same weight applied to ||dw/dr - i k w||_{L^2(S_1)}; both are
    computed at coefficient level and therefore valid for every N >= 2.
    """

    r: np.ndarray
    amplitude: np.ndarray
    sommerfeld: np.ndarray
    sup_amplitude: float
    decay_exponent: float
    sommerfeld_decays: bool


def radiation_diagnostics(u: HarmonicCoefficients, k: float, r_samples) -> RadiationReport:
    """Check the standing-wave asymptotics of the exterior series.

    For a radiating field, r^((N-1)/2)|w| stays bounded while the weighted
    Sommerfeld defect r^((N-1)/2)|dw/dr - i k w| decays; the report carries
    the sampled sequences and a fitted log-log decay exponent.
    """
    r = np.asarray(r_samples, dtype=float)
    if len(r) < 2 or np.any(np.diff(r) <= 0) or r[0] < u.R * (1 - 1e-12):
        raise ValueError("r_samples must be increasing and >= R")
    ratios, dratios = _radial_ratios(u, k, r)
    amp2 = np.zeros(len(r))
    som2 = np.zeros(len(r))
    for ell in range(u.lmax + 1):
        csq = float(np.sum(np.abs(u.coeffs[ell]) ** 2))
        amp2 += csq * np.abs(ratios[ell]) ** 2
        som2 += csq * np.abs(dratios[ell] - 1j * k * ratios[ell]) ** 2
    weight = r ** ((u.N - 1) / 2.0)
    amplitude = weight * np.sqrt(amp2)
    sommerfeld = weight * np.sqrt(som2)
    pos = sommerfeld > 0
    if np.count_nonzero(pos) >= 2:
        A = np.vstack([np.ones(np.count_nonzero(pos)), np.log(r[pos])]).T
        coef, *_ = np.linalg.lstsq(A, np.log(sommerfeld[pos]), rcond=None)
        exponent = float(coef[1])
    else:
        exponent = -math.inf
    return RadiationReport(
        r=r,
        amplitude=amplitude,
        sommerfeld=sommerfeld,
        sup_amplitude=float(amplitude.max()),
        decay_exponent=exponent,
        sommerfeld_decays=bool(exponent < 0 or np.all(sommerfeld == 0)),
    )
