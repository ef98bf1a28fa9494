"""Critical points of the interval functional with Neumann far-field coupling.

On (-R, R) the real standing-wave problem reduces to the Euler-Lagrange
equation -u'' - k^2 u = f(x, u) with u'(+-R) = 0, the critical-point
equation of

    Phi(u) = 1/2 int (u'^2 - k^2 u^2) dx - int F(x, u) dx.

Discretization is "differentiate the discrete functional": Phi is evaluated
with piecewise-linear gradients and trapezoidal quadrature, and the gradient
returned is the exact derivative of that discrete value (equivalently, the
second-order Neumann ghost-node stencil weighted by the trapezoid weights).
Saddle searches therefore converge to genuine discrete critical points.

The linear part diagonalizes in the cosine Neumann basis with eigenvalues
lambda_j = ((j-1) pi / (2R))^2; counting them against k^2 yields the
splitting X^- / X^0 / X^+ that organizes both solvers here:

* a damped Newton iteration with multiplicative deflation of already-found
  solutions, seeded along X^+ directions and an X^- lattice, and
* the ground-state minimax inf over X^+ directions of the maximum of Phi on
  the half-space spanned by the direction and X^-, valid when f(x,u)/|u| is
  nondecreasing.

Degenerate pairs (k, R) with dim X^0 > 0 are rejected up front, mirroring
the excluded radius set of the ball problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import minimize

from .nonlinearity import Nonlinearity, validate_f

__all__ = [
    "Grid1D",
    "NeumannBasis",
    "Splitting1D",
    "DegenerateSplittingError",
    "neumann_lambdas",
    "neumann_basis",
    "splitting_1d",
    "phi_eval",
    "phi_grad",
    "bk_form",
    "interior_residual",
    "Grid1DSolution",
    "newton_deflated_solve",
    "MinimaxResult",
    "ground_state_minimax",
]

ZERO_BAND_REL = 1e-8
DISTINCT_TOL = 1e-4


class DegenerateSplittingError(ValueError):
    """Raised when k^2 coincides with a Neumann eigenvalue (dim X^0 > 0)."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform nodes on [-R, R] with trapezoid weights."""

    R: float
    n: int

    def __post_init__(self):
        if self.R <= 0 or self.n < 16:
            raise ValueError("need R > 0 and n >= 16")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.R, self.R, self.n)

    @property
    def h(self) -> float:
        return 2.0 * self.R / (self.n - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


def _stiffness_apply(grid: Grid1D, u: np.ndarray) -> np.ndarray:
    """A u, the exact gradient of 1/2 sum h ((u_{i+1}-u_i)/h)^2."""
    h = grid.h
    out = np.empty_like(u)
    out[1:-1] = (2.0 * u[1:-1] - u[:-2] - u[2:]) / h
    out[0] = (u[0] - u[1]) / h
    out[-1] = (u[-1] - u[-2]) / h
    return out


def phi_eval(grid: Grid1D, nl: Nonlinearity, k: float, u: np.ndarray) -> float:
    """The discrete functional Phi(u)."""
    u = np.asarray(u, dtype=float)
    du = np.diff(u) / grid.h
    w = grid.weights
    x = grid.x
    quad = 0.5 * grid.h * float(du @ du) - 0.5 * k * k * float(w @ (u * u))
    return quad - float(w @ np.asarray(nl.F(x, u)))


def phi_grad(grid: Grid1D, nl: Nonlinearity, k: float, u: np.ndarray) -> np.ndarray:
    """Exact derivative of the discrete Phi (weak-form residual vector)."""
    u = np.asarray(u, dtype=float)
    w = grid.weights
    return _stiffness_apply(grid, u) - k * k * (w * u) - w * np.asarray(nl.f(grid.x, u))


def _hessian_banded(grid: Grid1D, nl: Nonlinearity, k: float, u: np.ndarray) -> np.ndarray:
    """Tridiagonal Hessian of the discrete Phi, in solve_banded layout."""
    n, h = grid.n, grid.h
    w = grid.weights
    diag = np.full(n, 2.0 / h)
    diag[0] = diag[-1] = 1.0 / h
    diag -= k * k * w + w * np.asarray(nl.fu(grid.x, u))
    off = np.full(n - 1, -1.0 / h)
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1] = diag
    ab[2, :-1] = off
    return ab


def bk_form(grid: Grid1D, k: float, u: np.ndarray) -> float:
    """The discrete quadratic form int (u'^2 - k^2 u^2) dx."""
    u = np.asarray(u, dtype=float)
    du = np.diff(u) / grid.h
    return grid.h * float(du @ du) - k * k * float(grid.weights @ (u * u))


def interior_residual(grid: Grid1D, nl: Nonlinearity, k: float, u: np.ndarray,
                      stride: int = 1) -> np.ndarray:
    """Pointwise defect of -u'' - k^2 u - f(x, u) on interior nodes.

    With ``stride`` > 1 the three-point stencil runs at spacing stride*h,
    which measures the true equation residual of an already-converged
    discrete solution (whose own-stencil residual is zero by construction).
    """
    u = np.asarray(u, dtype=float)
    s = stride
    hh = s * grid.h
    upp = (u[2 * s:] - 2.0 * u[s:-s] + u[:-2 * s]) / (hh * hh)
    xi = grid.x[s:-s]
    return -upp - k * k * u[s:-s] - np.asarray(nl.f(xi, u[s:-s]))


# ---------------------------------------------------------------------------
# Neumann spectrum and splitting

def neumann_lambdas(R: float, m: int) -> np.ndarray:
    """lambda_j = ((j-1) pi / (2R))^2 for j = 1..m."""
    j = np.arange(m)
    return (j * math.pi / (2.0 * R)) ** 2


@dataclass
class NeumannBasis:
    """First m cosine Neumann modes evaluated on a grid.

    ``modes[:, j]`` is e_{j+1}; the columns are orthonormalized in the
    discrete (trapezoid-weighted) inner product, so projections are exact
    at grid level.  ``lambdas`` keeps the closed-form eigenvalues.
    """

    grid: Grid1D
    modes: np.ndarray
    lambdas: np.ndarray
    warnings: list = field(default_factory=list)

    def project(self, u: np.ndarray, cols) -> np.ndarray:
        """Discrete inner products <e_j, u> for the selected columns."""
        return self.modes[:, cols].T @ (self.grid.weights * u)


def neumann_basis(grid: Grid1D, m: int) -> NeumannBasis:
    """Evaluate and discretely orthonormalize the first m Neumann modes."""
    if m >= grid.n:
        raise ValueError(f"cannot resolve {m} modes on {grid.n} nodes")
    warnings = []
    if m > grid.n // 4:
        warnings.append(
            f"basis uses {m} modes on {grid.n} nodes; modes above n/4 are "
            "marginally resolved"
        )
    x, R = grid.x, grid.R
    E = np.empty((grid.n, m))
    E[:, 0] = 1.0 / math.sqrt(2.0 * R)
    for j in range(1, m):
        E[:, j] = np.cos(j * math.pi * (x + R) / (2.0 * R)) / math.sqrt(R)
    gram = E.T @ (grid.weights[:, None] * E)
    L = np.linalg.cholesky(gram)
    E = np.linalg.solve(L, E.T).T
    return NeumannBasis(grid=grid, modes=E, lambdas=neumann_lambdas(R, m),
                        warnings=warnings)


@dataclass(frozen=True)
class Splitting1D:
    """Counting of Neumann eigenvalues against k^2 (all 1-based indices)."""

    j_star_lower: int
    j_star_upper: int
    dim_minus: int
    dim_zero: int


def splitting_1d(R: float, k: float, m: int, zero_band: float = ZERO_BAND_REL) -> Splitting1D:
    """Classify the first m Neumann eigenvalues below / at / above k^2."""
    lams = neumann_lambdas(R, m)
    k2 = k * k
    band = zero_band * k2
    dim_zero = int(np.count_nonzero(np.abs(lams - k2) < band))
    dim_minus = int(np.count_nonzero(lams < k2 - band))
    return Splitting1D(
        j_star_lower=dim_minus,
        j_star_upper=dim_minus + dim_zero + 1,
        dim_minus=dim_minus,
        dim_zero=dim_zero,
    )


def _check_solvable(grid: Grid1D, nl: Nonlinearity, k: float, m_probe: int = None):
    m = m_probe if m_probe is not None else max(16, int(2 * k * grid.R / math.pi) + 8)
    split = splitting_1d(grid.R, k, m)
    if split.dim_zero > 0:
        raise DegenerateSplittingError(
            f"k^2 = {k * k:g} coincides with a Neumann eigenvalue for R = {grid.R:g}; "
            "perturb k or R"
        )
    sup = nl.q.support
    if sup is not None and (sup[0] <= -grid.R or sup[1] >= grid.R):
        raise ValueError("the weight support must lie strictly inside (-R, R)")
    return split


# ---------------------------------------------------------------------------
# deflated Newton

@dataclass
class Grid1DSolution:
    """A converged critical point with its energy and splitting data."""

    u: np.ndarray
    phi: float
    grad_residual: float
    dim_minus: int
    norm_minus: float
    norm_plus: float

    def __repr__(self):
        return (f"Grid1DSolution(phi={self.phi:.6g}, resid={self.grad_residual:.2e}, "
                f"|u-|={self.norm_minus:.3g}, |u+|={self.norm_plus:.3g})")


def _l2w(grid, u):
    return math.sqrt(float(grid.weights @ (u * u)))


def _deflation(grid, u, found):
    """Multiplicative factor prod (1 + 1/||u - u_i||^2) and its gradient."""
    m_val = 1.0
    dm = np.zeros_like(u)
    for v in found:
        diff = u - v
        d2 = float(grid.weights @ (diff * diff))
        eta = 1.0 + 1.0 / d2
        m_val *= eta
        dm += (-2.0 / (d2 * d2)) * (grid.weights * diff) / eta
    return m_val, m_val * dm


def _tridiag_solve(ab, b):
    return solve_banded((1, 1), ab, b)


def _newton_one(grid, nl, k, seed_u, found, tol, max_iter, rng):
    """Deflated damped Newton from one seed; returns (u, converged)."""
    u = np.asarray(seed_u, dtype=float).copy()
    perturbed = False
    for _ in range(max_iter):
        G = phi_grad(grid, nl, k, u)
        if np.abs(G).max() < tol:
            return u, True
        m_val, dm = _deflation(grid, u, found)
        ab = _hessian_banded(grid, nl, k, u)
        try:
            # Sherman-Morrison for (m J + G dm^T) step = -m G
            y = _tridiag_solve(ab, -G)
            z = _tridiag_solve(ab, G)
            denom = m_val + float(dm @ z)
            step = y - z * (float(dm @ y) / denom) if denom != 0 else y
        except np.linalg.LinAlgError:
            step = None
        bad = step is None or not np.all(np.isfinite(step))
        if not bad:
            nstep = np.abs(step).max()
            bad = nstep > 1e8 * max(1.0, np.abs(u).max())
        if bad:
            if perturbed:
                return u, False
            u = u + 1e-6 * max(1.0, np.abs(u).max()) * rng.standard_normal(len(u))
            perturbed = True
            continue
        # backtracking on the deflated residual
        base = np.linalg.norm(m_val * G)
        t = 1.0
        while t > 1e-8:
            u_new = u + t * step
            m_new, _ = _deflation(grid, u_new, found)
            if np.linalg.norm(m_new * phi_grad(grid, nl, k, u_new)) <= (1.0 - 1e-4 * t) * base:
                break
            t *= 0.5
        u = u + t * step
    G = phi_grad(grid, nl, k, u)
    return u, bool(np.abs(G).max() < tol)


def default_seeds(grid: Grid1D, k: float, amplitude_sweep=(0.5, 1.0, 2.0, 4.0, 7.0)):
    """Deterministic seed list: zero, X^+ directions, and an X^- lattice."""
    split = splitting_1d(grid.R, k, max(16, int(2 * k * grid.R / math.pi) + 8))
    jm = split.dim_minus
    m_basis = jm + 6
    basis = neumann_basis(grid, m_basis)
    E = basis.modes
    seeds = [np.zeros(grid.n)]
    for t in amplitude_sweep:
        for jj in range(jm, min(jm + 3, m_basis)):
            for sgn in (1.0, -1.0):
                seeds.append(sgn * t * E[:, jj])
    for t in amplitude_sweep[:3]:
        for vj in range(jm):
            for sv in (1.0, -1.0):
                seeds.append(t * E[:, jm] + sv * t * E[:, vj])
    return seeds


def newton_deflated_solve(grid: Grid1D, nl: Nonlinearity, k: float, seeds=None,
                          max_solutions: int = 12, tol: float = 1e-10,
                          max_iter: int = 80, seed: int = 0):
    """Collect distinct critical points of the discrete Phi.

    Newton steps are damped by backtracking on the deflated residual; the
    deflation factor prod_i (1 + 1/||u - u_i||^2) steers successive runs
    away from solutions already found.  Non-convergent seeds are skipped.
    Results are sorted by (Phi, nodal values) and include the trivial
    solution when f(x, 0) = 0.
    """
    split = _check_solvable(grid, nl, k)
    if seeds is None:
        seeds = default_seeds(grid, k)
    rng = np.random.default_rng(seed)
    found = []
    for s in seeds:
        if len(found) >= max_solutions:
            break
        u, ok = _newton_one(grid, nl, k, s, found, tol, max_iter, rng)
        if not ok:
            continue
        scale = max(1.0, _l2w(grid, u))
        if all(_l2w(grid, u - v) > DISTINCT_TOL * max(scale, 1.0, _l2w(grid, v))
               for v in found):
            found.append(u)
    # negation closure: for odd f the pair -u is a solution as well
    for u in list(found):
        if len(found) >= max_solutions:
            break
        cand, ok = _newton_one(grid, nl, k, -u, found, tol, max_iter, rng)
        if ok and all(_l2w(grid, cand - v) > DISTINCT_TOL * max(1.0, _l2w(grid, cand), _l2w(grid, v))
                      for v in found):
            found.append(cand)

    jm = split.dim_minus
    basis = neumann_basis(grid, jm + 1) if jm > 0 else None
    out = []
    for u in found:
        if jm > 0:
            c = basis.project(u, list(range(jm)))
            nm2 = float(np.sum((k * k - basis.lambdas[:jm]) * c * c))
        else:
            nm2 = 0.0
        bk = bk_form(grid, k, u)
        out.append(Grid1DSolution(
            u=u,
            phi=phi_eval(grid, nl, k, u),
            grad_residual=float(np.abs(phi_grad(grid, nl, k, u)).max()),
            dim_minus=jm,
            norm_minus=math.sqrt(max(nm2, 0.0)),
            norm_plus=math.sqrt(max(bk + nm2, 0.0)),
        ))
    out.sort(key=lambda s: (s.phi, tuple(np.round(s.u[:: max(1, grid.n // 16)], 12))))
    return out


# ---------------------------------------------------------------------------
# ground-state minimax

@dataclass
class MinimaxResult:
    """inf over X^+ directions of the half-space maximum of Phi.

    ``direction`` holds the minimizing unit vector's coefficients on the
    modes e_{j^*} .. e_{j^* + m_plus}; ``t`` and ``v_coeffs`` locate the
    inner maximizer t * u_dir + sum v_j e_j.
    """

    c: float
    direction: np.ndarray
    t: float
    v_coeffs: np.ndarray
    restart_values: list
    warnings: list


def ground_state_minimax(grid: Grid1D, nl: Nonlinearity, k: float, m_plus: int,
                         tol: float = 1e-6, restarts: int = 3, seed: int = 0) -> MinimaxResult:
    """Compute the ground-state level by the half-space minimax.

    Requires the strengthened monotonicity of f(x, u)/|u| (checked by
    sampling) and a nondegenerate splitting.  The inner maximization over
    t >= 0 and X^- is a smooth problem in dim X^- + 1 variables solved by
    a quasi-Newton ascent with warm starts; the outer minimization runs a
    quasi-Newton descent over unit directions in the span of m_plus + 1
    modes of X^+, restarted from seeded perturbations.
    """
    split = _check_solvable(grid, nl, k)
    report = validate_f(nl)
    if not report.passed("f3"):
        raise ValueError("nonlinearity fails superquadratic growth (f3); "
                         "the half-space maximum is unbounded or trivial")
    if not report.passed("strong_monotone"):
        raise ValueError("nonlinearity fails the strengthened monotonicity of "
                         "f(x,u)/|u|; the minimax characterization needs it")

    jm = split.dim_minus
    dim = m_plus + 1
    basis = neumann_basis(grid, jm + dim)
    E_minus = basis.modes[:, :jm]
    E_plus = basis.modes[:, jm:jm + dim]
    warnings = list(basis.warnings)

    bounds = [(0.0, None)] + [(None, None)] * jm
    cold_starts = [np.concatenate([[t0], np.zeros(jm)]) for t0 in (0.5, 1.5, 3.0)]

    def inner_sup(u_dir, warm_z, cold=False):
        # the half-space maximizer is unique under the strengthened
        # monotonicity, so warm tracking along the outer descent suffices;
        # cold multistarts run at restart boundaries and for verification
        def objective(z):
            uu = z[0] * u_dir + E_minus @ z[1:]
            g = phi_grad(grid, nl, k, uu)
            jac = np.concatenate([[float(g @ u_dir)], E_minus.T @ g])
            return -phi_eval(grid, nl, k, uu), -jac

        starts = [warm_z] + (cold_starts if cold else [])
        best = None
        for z0 in starts:
            res = minimize(objective, z0, jac=True, method="L-BFGS-B",
                           bounds=bounds, options=dict(ftol=1e-18, gtol=1e-12, maxiter=400))
            if best is None or res.fun < best.fun:
                best = res
        if -best.fun > 1e12:
            raise RuntimeError(
                "inner maximization diverged: the half-space supremum appears "
                "unbounded (check (f3)/monotonicity or enlarge the search box)"
            )
        return -best.fun, best.x

    state = {"z": np.concatenate([[1.5], np.zeros(jm)])}

    def outer_objective(d, cold=False):
        nd = np.linalg.norm(d)
        dn = d / nd
        u_dir = E_plus @ dn
        val, z = inner_sup(u_dir, state["z"], cold=cold)
        state["z"] = z
        g = phi_grad(grid, nl, k, z[0] * u_dir + E_minus @ z[1:])
        grad_d = z[0] * (E_plus.T @ g) / nd
        grad_d -= float(grad_d @ dn) * dn
        return val, grad_d

    rng = np.random.default_rng(seed)
    best_val, best_d, best_z = math.inf, None, None
    restart_values = []
    for r in range(max(restarts, 1)):
        d0 = np.zeros(dim)
        d0[0] = 1.0
        if r > 0:
            d0 = d0 + 0.2 * rng.standard_normal(dim)
        state["z"] = np.concatenate([[1.5], np.zeros(jm)])
        outer_objective(d0, cold=True)
        res = minimize(outer_objective, d0, jac=True, method="BFGS",
                       options=dict(gtol=min(1e-10, tol * 1e-3), maxiter=4000))
        # re-verify the inner maximum at the minimizer with cold starts
        val, _ = outer_objective(res.x, cold=True)
        if val > res.fun + 0.1 * tol:
            res = minimize(outer_objective, res.x, jac=True, method="BFGS",
                           options=dict(gtol=min(1e-10, tol * 1e-3), maxiter=4000))
            val = float(res.fun)
        restart_values.append(float(val))
        if val < best_val:
            best_val = float(val)
            best_d = res.x / np.linalg.norm(res.x)
            best_z = state["z"].copy()
    return MinimaxResult(
        c=best_val,
        direction=best_d,
        t=float(best_z[0]),
        v_coeffs=best_z[1:].copy(),
        restart_values=restart_values,
        warnings=warnings,
    )
