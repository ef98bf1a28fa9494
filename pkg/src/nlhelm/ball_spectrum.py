"""The nonlocal eigenvalue problem on the ball and its degenerate radii.

The eigenproblem couples -Delta u = lambda u in B_R to the boundary
condition du/dn = K_R u on S_R, where K_R is the (negative definite) real
part of the capacity operator.  Separation into harmonic sectors reduces it
to a scalar root-finding problem per degree ell: with
g(r) = r^((2-N)/2) J_mu(sqrt(lambda) r) the eigenvalues in sector ell are
the roots of the boundary mismatch

    m(lambda) = g'(R) - (Re z_ell(kR) / R) g(R).

All eigenvalues are positive, each carries multiplicity d^N_ell, and the
splitting indices below/at/above k^2 drive the variational solvers.  Two
further scalar conditions define the excluded radius set: Y_mu(kR) = 0
(a zero crossing of k^2 through the spectrum) and the Neumann-degeneracy
d/dr(r^((2-N)/2) J_mu(kr))|_R = 0.  A cross-product condition in the same
spirit detects the radii R' > R at which an outgoing extension with an
active ell-mode can be re-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

from . import bessel
from .capacity import capacity_coeff, harmonic_dim

__all__ = [
    "EigenPair",
    "SpectralSplitting",
    "radial_bc_mismatch",
    "radial_profile",
    "sector_eigenvalues",
    "eigenvalues",
    "DegenerateRadius",
    "degenerate_radii",
    "shared_extension_radii",
]

# Declared band for lambda = k^2 coincidence (dim X^0 detection).
ZERO_BAND_REL = 1e-8


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue of the nonlocal problem: sector ell, j-th radial root."""

    lam: float
    ell: int
    multiplicity: int
    radial_index: int


@dataclass
class SpectralSplitting:
    """Sorted eigenvalues with the X^- / X^0 / X^+ splitting against k^2.

    ``pairs`` keeps one entry per (ell, radial_index); ``expanded`` repeats
    each lambda d^N_ell times.  Indices are 1-based over the expanded list:
    j_star_lower = max{j : lambda_j < k^2}, j_star_upper = min{j :
    lambda_j > k^2}.
    """

    k: float
    pairs: list
    expanded: np.ndarray
    j_star_lower: int
    j_star_upper: int
    dim_minus: int
    dim_zero: int
    warnings: list = field(default_factory=list)


def _mismatch_terms(N, k, R, ell, lam):
    """The two terms of the boundary mismatch, vectorized over lambda."""
    lam = np.asarray(lam, dtype=float)
    s = np.sqrt(lam)
    mu = ell + (N - 2) / 2.0
    j, _, jp, _ = bessel.bessel_jy_arrays(mu, s * R)
    g = R ** ((2 - N) / 2.0) * j
    gp = (2 - N) / 2.0 * R ** (-N / 2.0) * j + R ** ((2 - N) / 2.0) * s * jp
    re_z = capacity_coeff(N, k, R, ell).z.real
    return gp, (re_z / R) * g


def radial_bc_mismatch(N: int, k: float, R: float, ell: int, lam) -> float:
    """Signed boundary defect of the sector-ell separation ansatz at lambda.

    Zero exactly at the eigenvalues of the nonlocal problem in that sector;
    real-analytic in lambda.  sqrt(lambda)*R must stay inside the validated
    Bessel envelope.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ValueError("lambda must be positive (the eigenvalues all are)")
    gp, bc = _mismatch_terms(N, k, R, ell, lam_arr)
    out = gp - bc
    return float(out[()]) if out.ndim == 0 else out


def mismatch_scale(N, k, R, ell, lam):
    """Magnitude scale |g'(R)| + |Re z / R * g(R)| for residual checks."""
    gp, bc = _mismatch_terms(N, k, R, ell, np.asarray(lam, dtype=float))
    out = np.abs(gp) + np.abs(bc)
    return float(out[()]) if out.ndim == 0 else out


def radial_profile(N: int, ell: int, lam: float, r):
    """The sector-ell radial eigenprofile g(r) = r^((2-N)/2) J_mu(sqrt(lam) r)."""
    r = np.asarray(r, dtype=float)
    mu = ell + (N - 2) / 2.0
    return r ** ((2 - N) / 2.0) * jv(mu, math.sqrt(lam) * r)


def sector_eigenvalues(N, k, R, ell, lambda_max, warnings=None):
    """All mismatch roots with lambda <= lambda_max in one harmonic sector.

    Scans in s = sqrt(lambda), whose root spacing tracks the Bessel-zero
    spacing ~ pi/R, with an eightfold margin; sign changes are refined by
    Brent's method.
    """
    s_min = bessel.X_MIN / R
    s_max = math.sqrt(lambda_max)
    if s_max * R > bessel.X_MAX:
        raise ValueError(
            f"sqrt(lambda_max)*R = {s_max * R:g} exceeds the validated envelope "
            f"{bessel.X_MAX:g}"
        )
    if s_max <= s_min:
        return np.zeros(0)
    step = math.pi / (8.0 * R)
    n = max(int(math.ceil((s_max - s_min) / step)) + 1, 8)
    grid = np.linspace(s_min, s_max, n)
    vals = radial_bc_mismatch(N, k, R, ell, grid * grid)
    f = lambda s: radial_bc_mismatch(N, k, R, ell, s * s)
    roots = []
    for i in range(n - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-13 * max(1.0, s_max), rtol=1e-15))
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    roots = np.array(sorted(roots))
    if warnings is not None and len(roots) >= 2:
        gaps = np.diff(roots)
        if np.any(gaps < 2.0 * (grid[1] - grid[0])):
            warnings.append(
                f"sector ell={ell}: roots closer than twice the scan step; "
                "near-double roots may be under-resolved"
            )
    return roots * roots


def eigenvalues(N, k, R, lmax, lambda_max, zero_band=ZERO_BAND_REL) -> SpectralSplitting:
    """Eigenvalues up to lambda_max over sectors ell <= lmax, with splitting.

    Multiplicities d^N_ell are expanded before sorting; ties are broken by
    (lambda, ell, radial_index) so the result is deterministic.  An
    eigenvalue within |lambda - k^2| < zero_band * k^2 counts toward
    dim X^0.
    """
    warnings: list = []
    pairs = []
    for ell in range(lmax + 1):
        lams = sector_eigenvalues(N, k, R, ell, lambda_max, warnings)
        mult = harmonic_dim(N, ell)
        for idx, lam in enumerate(lams, start=1):
            pairs.append(EigenPair(lam=float(lam), ell=ell,
                                   multiplicity=mult, radial_index=idx))
    pairs.sort(key=lambda p: (p.lam, p.ell, p.radial_index))
    expanded = np.array([p.lam for p in pairs for _ in range(p.multiplicity)])
    k2 = k * k
    band = zero_band * k2
    dim_zero = int(np.count_nonzero(np.abs(expanded - k2) < band))
    dim_minus = int(np.count_nonzero(expanded < k2 - band))
    return SpectralSplitting(
        k=k,
        pairs=pairs,
        expanded=expanded,
        j_star_lower=dim_minus,
        j_star_upper=dim_minus + dim_zero + 1,
        dim_minus=dim_minus,
        dim_zero=dim_zero,
        warnings=warnings,
    )


@dataclass(frozen=True)
class DegenerateRadius:
    """A radius in the excluded set, tagged by sector and defining condition.

    ``condition`` is ``"y_zero"`` for Y_mu(kR) = 0 (an eigenvalue crosses
    k^2 there) or ``"neumann"`` for d/dr(r^((2-N)/2) J_mu(kr))|_R = 0.  The
    two conditions are reported separately and never merged.
    """

    R: float
    ell: int
    condition: str


def degenerate_radii(N, k, lmax, r_min, r_max, step=None):
    """All tagged degenerate radii in [r_min, r_max] for sectors ell <= lmax.

    Both defining conditions are scalar equations in x = kR: Y_mu(x) = 0 is
    a cylinder-function zero; the Neumann condition reads
    x J'_mu(x) - ((N-2)/2) J_mu(x) = 0, whose roots interlace the zeros of
    J_mu, so the cylinder spacing bound applies to the scan for both.
    """
    if not (0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    a, b = k * r_min, k * r_max
    if a < bessel.X_MIN or b > bessel.X_MAX:
        raise ValueError("k*R range leaves the validated envelope")
    found = []
    for ell in range(lmax + 1):
        mu = ell + (N - 2) / 2.0
        for x in bessel.bessel_zero_scan(mu, "y", a, b, step=step):
            found.append(DegenerateRadius(R=float(x / k), ell=ell, condition="y_zero"))
        c = (N - 2) / 2.0

        def dini(x, mu=mu, c=c):
            x = np.asarray(x, dtype=float)
            j, _, jp, _ = bessel.bessel_jy_arrays(mu, x)
            return x * jp - c * j

        scan = step if step is not None else bessel.zero_spacing_bound(mu, a) / 8.0
        n = max(int(math.ceil((b - a) / scan)) + 1, 8)
        grid = np.linspace(a, b, n)
        vals = dini(grid)
        for i in range(n - 1):
            if vals[i] == 0.0:
                found.append(DegenerateRadius(R=float(grid[i] / k), ell=ell, condition="neumann"))
            elif vals[i] * vals[i + 1] < 0.0:
                x0 = brentq(lambda x: float(dini(x)), grid[i], grid[i + 1],
                            xtol=1e-13 * max(1.0, b), rtol=1e-15)
                found.append(DegenerateRadius(R=float(x0 / k), ell=ell, condition="neumann"))
    found.sort(key=lambda d: (d.R, d.ell, d.condition))
    return found


def shared_extension_radii(N, k, R, ell, r_prime_max, step=None):
    """Radii R' in (R, r_prime_max] compatible with re-basing an ell-mode.

    Roots in R' of the cross product J_mu(kR') Y_mu(kR) - J_mu(kR) Y_mu(kR'),
    which is itself a cylinder function of kR'; R' = R is a simple root of
    the cross product and is excluded by construction (the scan starts a
    quarter spacing above it).
    """
    if r_prime_max <= R:
        raise ValueError("need r_prime_max > R")
    mu = ell + (N - 2) / 2.0
    x0, x1 = k * R, k * r_prime_max
    if x0 < bessel.X_MIN or x1 > bessel.X_MAX:
        raise ValueError("k*R' range leaves the validated envelope")
    jR, yR, _, _ = bessel.bessel_jy_arrays(mu, np.asarray([x0]))
    scale = max(abs(jR[0]), abs(yR[0]))
    bound = bessel.zero_spacing_bound(mu, x0)
    a = x0 + 0.25 * bound
    if a >= x1:
        return np.zeros(0)
    roots = bessel.bessel_zero_scan(
        mu, (float(yR[0] / scale), float(-jR[0] / scale)), a, x1, step=step
    )
    return roots / k
