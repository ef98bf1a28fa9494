import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlhelm import ball_spectrum as bs
from nlhelm.capacity import harmonic_dim


def test_mismatch_closed_form_n3_ell0():
    # with Re z_0 = -1 the mismatch reduces to sqrt(lam) cos(sqrt(lam) R):
    # roots at sqrt(lam) R = (2j-1) pi/2.  Scan-based oracle cross-check.
    R = 1.0
    for j in (1, 2, 5):
        lam = ((2 * j - 1) * math.pi / 2.0 / R) ** 2
        m = bs.radial_bc_mismatch(3, 2.0, R, 0, lam)
        assert abs(m) < 1e-10 * bs.mismatch_scale(3, 2.0, R, 0, lam)
    # sign structure matches s*cos(s R) between roots
    s = np.linspace(0.5, 7.0, 23)
    vals = bs.radial_bc_mismatch(3, 2.0, R, 0, s * s)
    assert np.all(np.sign(vals) == np.sign(np.cos(s)))


def test_mismatch_positive_near_zero():
    # no zero eigenvalue: the mismatch keeps one sign as lambda -> 0+
    for N, ell in [(2, 0), (3, 0), (3, 2), (4, 1)]:
        vals = bs.radial_bc_mismatch(N, 1.0, 1.0, ell, np.array([1e-4, 1e-3, 1e-2]))
        assert np.all(vals > 0.0), (N, ell)


def test_eigenvalue_oracle_n3():
    split = bs.eigenvalues(3, 2.0, 1.0, 0, ((2 * 10) * math.pi / 2) ** 2)
    lams = np.array([p.lam for p in split.pairs])
    expect = np.array([((2 * j - 1) * math.pi / 2) ** 2 for j in range(1, len(lams) + 1)])
    assert len(lams) >= 10
    assert_allclose(lams[:10], expect[:10], rtol=1e-9)


def test_eigenvalue_residuals():
    split = bs.eigenvalues(3, 1.7, 1.3, 3, 80.0)
    for p in split.pairs:
        resid = abs(bs.radial_bc_mismatch(3, 1.7, 1.3, p.ell, p.lam))
        assert resid < 1e-9 * bs.mismatch_scale(3, 1.7, 1.3, p.ell, p.lam)


def test_multiplicities_expanded():
    split = bs.eigenvalues(3, 1.0, 1.0, 2, 60.0)
    for p in split.pairs:
        assert p.multiplicity == harmonic_dim(3, p.ell)
        assert p.multiplicity == (2 * p.ell + 1)
    assert len(split.expanded) == sum(p.multiplicity for p in split.pairs)


def test_trivial_splitting_small_k():
    # k^2 below lambda_1: X^- trivial
    split = bs.eigenvalues(3, 0.5, 1.0, 2, 50.0)
    assert split.dim_minus == 0
    assert split.j_star_lower == 0
    assert split.j_star_upper == 1


def test_eigenprofile_orthogonality():
    # same-sector profiles with distinct eigenvalues are L^2(r^{N-1} dr)
    # orthogonal (self-adjointness); Gauss-Legendre quadrature oracle
    N, k, R, ell = 3, 2.0, 1.0, 1
    split = bs.eigenvalues(N, k, R, ell, 300.0)
    lams = [p.lam for p in split.pairs if p.ell == ell][:4]
    nodes, wts = np.polynomial.legendre.leggauss(200)
    r = 0.5 * R * (nodes + 1.0)
    w = 0.5 * R * wts
    profs = []
    for lam in lams:
        g = bs.radial_profile(N, ell, lam, r)
        g = g / math.sqrt(float(np.sum(w * g * g * r ** (N - 1))))
        profs.append(g)
    for i in range(len(profs)):
        for j in range(i + 1, len(profs)):
            val = float(np.sum(w * profs[i] * profs[j] * r ** (N - 1)))
            assert abs(val) < 1e-8


def test_counting_function_sqrt_growth():
    # roots below Lambda grow like c sqrt(Lambda) per sector
    split1 = bs.eigenvalues(3, 1.0, 1.0, 0, 400.0)
    split2 = bs.eigenvalues(3, 1.0, 1.0, 0, 1600.0)
    n1 = len([p for p in split1.pairs])
    n2 = len([p for p in split2.pairs])
    assert 1.7 <= n2 / n1 <= 2.3


def test_degenerate_radii_oracle():
    # N=3, ell=0, k=pi/2: Y-condition at R in {1, 3, 5}; Neumann condition
    # at the tan x = x points (frozen from an independent bisection oracle)
    dr = bs.degenerate_radii(3, math.pi / 2, 0, 0.5, 6.0)
    y_r = [d.R for d in dr if d.condition == "y_zero"]
    n_r = [d.R for d in dr if d.condition == "neumann"]
    assert_allclose(y_r, [1.0, 3.0, 5.0], atol=1e-9)
    tan_roots = np.array([4.493409457909064, 7.725251836937707]) / (math.pi / 2)
    assert_allclose(n_r, tan_roots, atol=1e-9)


def test_degenerate_radii_empty_interval():
    dr = bs.degenerate_radii(3, math.pi / 2, 0, 0.05, 0.5)
    assert dr == []


def test_dim_zero_flips_across_y_condition():
    # at a Y-condition radius k^2 is an eigenvalue; just off it, it is not
    k = math.pi / 2
    lam_max = 4.0 * k * k
    at = bs.eigenvalues(3, k, 1.0, 0, lam_max)
    assert at.dim_zero >= 1
    lo = bs.eigenvalues(3, k, 1.0 - 1e-3, 0, lam_max)
    hi = bs.eigenvalues(3, k, 1.0 + 1e-3, 0, lam_max)
    assert lo.dim_zero == 0 and hi.dim_zero == 0


def test_eigenvalue_crosses_k2_continuously():
    # track the sector eigenvalue nearest k^2 through the degenerate radius
    k = math.pi / 2
    Rs = np.linspace(0.9, 1.1, 21)
    nearest = []
    for R in Rs:
        split = bs.eigenvalues(3, k, R, 0, 30.0)
        lams = np.array([p.lam for p in split.pairs])
        nearest.append(lams[np.argmin(np.abs(lams - k * k))])
    nearest = np.array(nearest)
    assert np.all(np.abs(np.diff(nearest)) < 0.6)  # no jumps
    assert np.any(nearest - k * k > 0) and np.any(nearest - k * k < 0)


def test_neumann_tag_does_not_imply_dim_zero():
    # at a purely Neumann-degenerate radius k^2 is not an eigenvalue
    k = math.pi / 2
    R = 4.493409457909064 / k
    split = bs.eigenvalues(3, k, R, 0, 30.0)
    assert split.dim_zero == 0


def test_extension_radii_oracle():
    # N=3, ell=0: cross product ~ sin(k(R'-R)), roots R' = R + m pi / k
    k, R = 2.0, 1.0
    radii = bs.shared_extension_radii(3, k, R, 0, R + 10 * math.pi / k + 0.3)
    expect = R + np.arange(1, 11) * math.pi / k
    assert len(radii) >= 10
    assert_allclose(radii[:10], expect, rtol=1e-9)


def test_extension_radii_count_on_window():
    # exactly 10 roots on (R, R + 10 pi / k]
    k, R = 2.0, 1.0
    radii = bs.shared_extension_radii(3, k, R, 0, R + 10 * math.pi / k + 1e-9)
    assert len(radii) == 10


def test_extension_radii_excludes_base_radius():
    k, R = 2.0, 1.0
    radii = bs.shared_extension_radii(3, k, R, 0, R + 0.5 * math.pi / k)
    assert len(radii) == 0


def test_envelope_guard():
    with pytest.raises(ValueError):
        bs.eigenvalues(3, 1.0, 1.0, 0, (bs.bessel.X_MAX + 1.0) ** 2)
    with pytest.raises(ValueError):
        bs.degenerate_radii(3, 1.0, 0, 1.0, bs.bessel.X_MAX + 50.0)
