"""Scalar Dirichlet eigenvalue problems on an interval via the Prufer angle.

For lambda v = v_xx + q(x) v with v(a) = v(b) = 0, writing v = r sin(theta)
and v_x = r cos(theta) decouples the angle:

    theta_x = cos^2(theta) + (q(x) - lambda) sin^2(theta),   theta(a) = 0.

lambda is an eigenvalue exactly when theta(b; lambda) is a positive multiple
of pi.  theta(b; .) decreases strictly in lambda, and theta passes every
multiple of pi with slope one, so eigenvalue location, oscillation counts and
conjugate points all reduce to reading this one scalar trajectory.  The
radial amplitude r is never integrated.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import BoundaryResonanceError, BracketError, NotAnEigenvalueError

ANGLE_TOL = 1e-9
RESONANCE_TOL = 1e-7


@dataclass(frozen=True)
class ScalarProblem:
    """Coefficient q and interval (a, b) of a scalar Dirichlet problem."""

    q: callable
    interval: tuple

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got ({a}, {b})")

    @property
    def a(self):
        return self.interval[0]

    @property
    def b(self):
        return self.interval[1]


@dataclass(frozen=True)
class PruferTrajectory:
    lambda_: float
    samples: np.ndarray  # shape (m, 2) rows (x, theta)
    theta_end: float
    dense: object = field(repr=False, compare=False, default=None)

    def theta_at(self, x):
        return float(self.dense.sol(x)[0])


def continuity_metric(prob, samples=512):
    """Two-scale finite-difference heuristic for continuity of q.

    Returns (ok, detail).  For continuous q the largest step difference
    roughly halves when the grid is refined; a jump keeps it constant.
    """
    a, b = prob.interval
    vals = {}
    for m in (samples, 2 * samples):
        xs = np.linspace(a, b, m + 1)
        qs = np.array([prob.q(x) for x in xs], dtype=float)
        if not np.all(np.isfinite(qs)):
            return False, "q evaluates to a non-finite value"
        vals[m] = np.max(np.abs(np.diff(qs))) if len(qs) > 1 else 0.0
    scale = 1.0 + max(abs(vals[samples]), abs(vals[2 * samples]))
    if vals[2 * samples] <= 0.8 * vals[samples] + 1e-9 * scale:
        return True, "steps contract under refinement"
    return False, (
        f"largest sampled jump {vals[2 * samples]:.3e} does not contract "
        f"under grid refinement (coarse {vals[samples]:.3e})"
    )


def prufer_flow(prob, lambda_, rtol=1e-9, n_samples=257):
    """Integrate the decoupled angle equation with theta(a) = 0."""
    lam = float(lambda_)
    q = prob.q

    def rhs(x, y):
        s, c = math.sin(y[0]), math.cos(y[0])
        return (c * c + (float(q(x)) - lam) * s * s,)

    sol = solve_ivp(
        rhs,
        prob.interval,
        [0.0],
        method="DOP853",
        rtol=rtol,
        atol=max(rtol * 1e-2, 1e-14),
        dense_output=True,
    )
    if not sol.success:
        raise RuntimeError(
            f"angle integration failed near x = {sol.t[-1]:.6g}: {sol.message}"
        )
    xs = np.linspace(prob.a, prob.b, n_samples)
    thetas = sol.sol(xs)[0]
    samples = np.column_stack([xs, thetas])
    return PruferTrajectory(lam, samples, float(sol.y[0, -1]), dense=sol)


def _theta_end(prob, lam, rtol):
    return prufer_flow(prob, lam, rtol=rtol, n_samples=2).theta_end


def _check_resonance(theta_end, tol=RESONANCE_TOL):
    nearest = np.round(theta_end / np.pi) * np.pi
    if abs(theta_end - nearest) < tol:
        raise BoundaryResonanceError(
            f"theta(b) = {theta_end:.12g} is within {tol:.1e} of a multiple of pi; "
            "lambda_star sits on (or too near) an eigenvalue"
        )


def count_eigenvalues_above(prob, lambda_star, rtol=1e-10):
    """Number of Dirichlet eigenvalues strictly above lambda_star."""
    theta_end = _theta_end(prob, lambda_star, rtol)
    _check_resonance(theta_end)
    return int(np.floor(theta_end / np.pi))


def _q_supremum(prob, samples=1001):
    xs = np.linspace(prob.a, prob.b, samples)
    return max(prob.q(x) for x in xs)


def find_eigenvalues(prob, how_many, angle_tol=ANGLE_TOL, rtol=1e-11):
    """The top eigenvalues lambda_0 > lambda_1 > ... by angle bisection.

    Solves theta(b; lambda_j) = (j+1) pi; theta(b; .) is strictly decreasing
    in lambda so each root is bracketed and refined with brentq.

    On long intervals theta(b; .) drops through the target over a lambda
    window of width ~ e^{-2 mu (b-a)}, often below float resolution; the
    angle residual is then unattainable and a root is instead accepted when
    a bracket of a few ulps still straddles the target angle.
    """
    if how_many < 1:
        raise ValueError("how_many must be >= 1")
    q_sup = _q_supremum(prob)
    width = prob.b - prob.a
    out = []
    hi = q_sup + 1.0
    theta_hi = _theta_end(prob, hi, rtol)
    for j in range(how_many):
        target = (j + 1) * np.pi
        if theta_hi >= target:
            raise BracketError("upper bracket does not undershoot the target angle")
        lo = q_sup - ((j + 1) * np.pi / width) ** 2 - 1.0
        for _ in range(60):
            if _theta_end(prob, lo, rtol) > target:
                break
            lo = hi - 2.0 * (hi - lo)
        else:
            raise BracketError(
                f"could not bracket eigenvalue {j}: theta(b) never exceeds "
                f"{target:.6g} down to lambda = {lo:.6g}"
            )
        lam = brentq(
            lambda L: _theta_end(prob, L, rtol) - target,
            lo,
            hi,
            xtol=1e-13,
            rtol=8.9e-16,
        )
        residual = abs(_theta_end(prob, lam, rtol) - target)
        if residual >= angle_tol:
            scale = 1.0 + abs(lam)
            for delta in (1e-14, 1e-12, 1e-10, 1e-9):
                delta *= scale
                if (
                    _theta_end(prob, lam - delta, rtol) > target
                    and _theta_end(prob, lam + delta, rtol) < target
                ):
                    break
            else:
                raise BracketError(
                    f"eigenvalue {j} refined to residual {residual:.3e} >= "
                    f"{angle_tol:.1e} without a pinched bracket"
                )
        out.append(lam)
    return np.array(out)


def conjugate_points(prob, lambda_star, rtol=1e-10):
    """x-values in (a, b) where theta(x; lambda_star) crosses j pi, j >= 1.

    One conjugate point per eigenvalue above lambda_star; theta passes each
    multiple of pi with slope one, so every crossing is a first passage and
    is refined by root bracketing on the dense trajectory.
    """
    traj = prufer_flow(prob, lambda_star, rtol=rtol, n_samples=1025)
    _check_resonance(traj.theta_end)
    count = int(np.floor(traj.theta_end / np.pi))
    xs = traj.samples[:, 0]
    thetas = traj.samples[:, 1]
    points = []
    for j in range(1, count + 1):
        level = j * np.pi
        above = np.nonzero(thetas >= level)[0]
        if len(above) == 0:
            raise RuntimeError(f"lost crossing {j} on the sample grid")
        k = above[0]
        x_lo = xs[k - 1] if k > 0 else xs[0]
        root = brentq(lambda x: traj.theta_at(x) - level, x_lo, xs[k], xtol=1e-13)
        points.append(root)
    return np.array(points)


def eigenfunction_zero_count(prob, lambda_k, residual_tol=1e-6, rtol=1e-10):
    """Interior zero count of the eigenfunction at an eigenvalue lambda_k.

    On short intervals theta(b; lambda_k) lands on a multiple of pi within
    residual_tol.  On long intervals the terminal angle is a staircase in
    lambda too sharp for that; lambda_k is then accepted as an eigenvalue
    when the staircase drops through exactly one multiple of pi inside a
    tiny lambda window, and the zero count is the plateau level above.
    """
    theta_end = _theta_end(prob, lambda_k, rtol)
    nearest = np.round(theta_end / np.pi)
    if abs(theta_end - nearest * np.pi) <= residual_tol and nearest >= 1:
        return int(nearest) - 1
    scale = 1.0 + abs(lambda_k)
    for delta in (1e-13, 1e-11, 1e-9):
        delta *= scale
        above = int(np.floor(_theta_end(prob, lambda_k + delta, rtol) / np.pi))
        below = int(np.floor(_theta_end(prob, lambda_k - delta, rtol) / np.pi))
        if below == above + 1 and above >= 0:
            return above
    raise NotAnEigenvalueError(
        f"theta(b; {lambda_k!r}) = {theta_end:.12g} is not a positive "
        f"multiple of pi within {residual_tol:.1e} and no eigenvalue jump "
        "was found nearby"
    )
