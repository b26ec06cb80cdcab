"""Evolution of the unstable-solution Lagrangian plane and the Maslov square.

The eigenvalue problem lambda v = v_xx + Q(x) v becomes the first-order
Hamiltonian system u' = J B(x; lambda) u with

    J B = [[0, I], [lambda I - Q(x), 0]],

whose asymptotic matrices are hyperbolic whenever lambda sits above the
essential spectrum.  The plane of solutions decaying at -infinity is
initialized from the unstable eigenspace at x = -L and evolved across
[-L, L]; conjugate points are the x-values where it meets the Dirichlet
plane.  The boundary of the rectangle [lambda_*, lambda_inf] x [-L, L]
is a contractible loop, so its net Maslov index must vanish: conjugate
points on the left edge (+1 each) balance eigenvalue crossings on the top
edge (-1 each), and the right and bottom edges stay empty.

Frame stabilization: the evolved 2n x n frame is re-orthonormalized every
``renorm_every`` units of x by a QR factorization with positive diagonal,
which preserves the column span exactly and keeps the exponential growth
of individual columns from destroying the plane.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import symplectic
from .errors import (
    CountMismatchError,
    InconsistencyError,
    NonHyperbolicError,
    OptionsError,
)
from .models import check_essential_stability
from .symplectic import CrossingEvent, LagrangianFrame

TRUNCATION_ADEQUACY = 1e-8


@dataclass(frozen=True)
class FlowOptions:
    """Numerical knobs for the frame evolution."""

    truncation: float = None     # half-width L of the computational domain
    rtol: float = 1e-8
    renorm_every: float = 1.0    # x-distance between re-orthonormalizations
    crossing_tol: float = 1e-8
    sample_dx: float = 0.1       # spacing of recorded frames

    def resolve(self, model):
        """Fill in the truncation from the model decay rate and validate."""
        L = self.truncation
        if L is None:
            L = max(math.log(1.0 / TRUNCATION_ADEQUACY) * 1.12 / model.decay_rate, 10.0)
        if math.exp(-model.decay_rate * L) >= TRUNCATION_ADEQUACY:
            raise OptionsError(
                f"truncation L = {L} leaves tail weight "
                f"{math.exp(-model.decay_rate * L):.2e} >= {TRUNCATION_ADEQUACY:.0e}"
            )
        return FlowOptions(
            truncation=float(L),
            rtol=self.rtol,
            renorm_every=self.renorm_every,
            crossing_tol=self.crossing_tol,
            sample_dx=self.sample_dx,
        )

    def refined(self):
        return FlowOptions(
            truncation=self.truncation,
            rtol=self.rtol * 0.5,
            renorm_every=self.renorm_every * 0.5,
            crossing_tol=self.crossing_tol,
            sample_dx=self.sample_dx * 0.5,
        )


@dataclass(frozen=True)
class SquareReport:
    """Crossing ledger for the four edges of the Maslov square.

    Events are stored as computed along increasing x (left/right edges) or
    increasing lambda (top/bottom edges); the net index accounts for the
    loop traversal, which runs backward along the right and bottom edges.
    """

    left_events: tuple
    top_events: tuple
    right_events: tuple
    bottom_events: tuple
    net_index: int
    lambda_star: float
    lambda_inf: float

    @property
    def consistent(self):
        return self.net_index == 0 and not self.right_events and not self.bottom_events


@dataclass(frozen=True)
class SpectralReport:
    """Unstable-eigenvalue counts from the independent channels."""

    conjugate_count: int
    winding_count: int = None
    oracle_count: int = None
    epsilon_shift: float = 1e-3
    lambda_inf: float = None
    events: tuple = ()

    @property
    def agree(self):
        counts = {
            c for c in (self.conjugate_count, self.winding_count, self.oracle_count)
            if c is not None
        }
        return len(counts) == 1


def system_matrix(model, x, lambda_):
    """J B(x; lambda) = [[0, I], [lambda I - Q(x), 0]]."""
    n = model.n
    out = np.zeros((2 * n, 2 * n))
    out[:n, n:] = np.eye(n)
    out[n:, :n] = lambda_ * np.eye(n) - model.q(x)
    return out


def _normalized_eigenbasis(q_matrix):
    """Eigen-decomposition with a deterministic sign convention."""
    vals, vecs = np.linalg.eigh(q_matrix)
    for j in range(vecs.shape[1]):
        k = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vals, vecs


def asymptotic_splitting(model, lambda_, side="minus"):
    """Unstable/stable frames and decay rates of the asymptotic system.

    For each eigenpair (q_i, v_i) of the limiting potential, the columns
    (v_i; +mu_i v_i) and (v_i; -mu_i v_i) with mu_i = sqrt(lambda - q_i)
    span the unstable and stable subspaces; both are Lagrangian planes.
    """
    q_inf = model.q_minus if side == "minus" else model.q_plus
    vals, vecs = _normalized_eigenbasis(q_inf)
    gaps = lambda_ - vals
    if np.any(gaps <= 0.0):
        raise NonHyperbolicError(
            f"lambda = {lambda_!r} does not exceed the asymptotic potential "
            f"eigenvalue {vals.max():.6g} on side {side}; the essential "
            "spectrum is not cleared"
        )
    mus = np.sqrt(gaps)
    unstable = LagrangianFrame(vecs, vecs * mus)
    stable = LagrangianFrame(vecs, -vecs * mus)
    for frame in (unstable, stable):
        if not symplectic.check_lagrangian(frame).passed:
            raise NonHyperbolicError("asymptotic frame failed the Lagrangian check")
    return unstable, stable, mus


def _qr_positive(u):
    q, r = np.linalg.qr(u)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    if np.iscomplexobj(d):
        phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
        return q * phase.conj()[..., None, :]
    signs = np.where(d < 0, -1.0, 1.0)
    return q * signs[..., None, :]


class _FlowPath:
    """Adaptive segmented evolution of the unstable frame with dense output."""

    def __init__(self, model, lambda_, opts):
        self.model = model
        self.lambda_ = float(lambda_)
        self.opts = opts
        L = opts.truncation
        unstable, _, _ = asymptotic_splitting(model, lambda_, side="minus")
        u0 = _qr_positive(unstable.stacked())
        n = model.n
        q = model.q
        lam = self.lambda_

        def rhs(x, y):
            u = y.reshape(2 * n, n)
            out = np.empty_like(u)
            out[:n] = u[n:]
            out[n:] = lam * u[:n] - q(x) @ u[:n]
            return out.ravel()

        self.segments = []           # (x0, x1, dense solution)
        n_seg = max(1, int(math.ceil(2.0 * L / opts.renorm_every)))
        edges = np.linspace(-L, L, n_seg + 1)
        u = u0
        for x0, x1 in zip(edges[:-1], edges[1:]):
            sol = solve_ivp(
                rhs, (x0, x1), u.ravel(), method="DOP853",
                rtol=opts.rtol, atol=opts.rtol * 1e-2, dense_output=True,
            )
            if not sol.success:
                raise RuntimeError(
                    f"frame evolution failed near x = {sol.t[-1]:.6g}: {sol.message}"
                )
            self.segments.append((x0, x1, sol))
            u = _qr_positive(sol.y[:, -1].reshape(2 * n, n))
        self.n = n
        # W-eigenvalue phases move at up to ~2 max(1, |Q - lambda|) per unit
        # x; keep sample steps under ~0.45 * pi/2 of that so crossings are
        # never skipped regardless of the potential's strength
        bound = 1.0
        for x in np.linspace(-L, L, 201):
            row_sum = float(np.max(np.sum(np.abs(q(x)), axis=1)))
            bound = max(bound, row_sum + abs(lam))
        self.sample_step = min(opts.sample_dx, 0.7 / (2.0 * bound))

    def frame_matrix_at(self, x):
        """Raw (2n, n) frame at x; continuous within each segment."""
        for x0, x1, sol in self.segments:
            if x0 <= x <= x1:
                return sol.sol(x).reshape(2 * self.n, self.n)
        raise ValueError(f"x = {x} outside [{self.segments[0][0]}, {self.segments[-1][1]}]")

    def frame_at(self, x):
        m = self.frame_matrix_at(x)
        return LagrangianFrame(m[: self.n], m[self.n:])

    def sample_xs(self):
        xs = [self.segments[0][0]]
        for x0, x1, _ in self.segments:
            m = max(2, int(math.ceil((x1 - x0) / self.sample_step)) + 1)
            xs.extend(np.linspace(x0, x1, m)[1:])
        return np.array(xs)


def evolve_unstable_frame(model, lambda_, opts=None):
    """Sampled path of the plane of solutions decaying at -infinity.

    Returns a list of (x, LagrangianFrame) with orthonormalized frames.
    Raises if the Lagrangian residual drifts beyond ten times the frame
    tolerance anywhere along the path.
    """
    opts = (opts or FlowOptions()).resolve(model)
    path = _FlowPath(model, lambda_, opts)
    out = []
    worst = (0.0, None)
    for x in path.sample_xs():
        m = _qr_positive(path.frame_matrix_at(x))
        frame = LagrangianFrame(m[: model.n], m[model.n:])
        rep = symplectic.check_lagrangian(frame)
        if rep.asymmetry > worst[0]:
            worst = (rep.asymmetry, x)
        out.append((float(x), frame))
    if worst[0] > 10.0 * symplectic.LAGR_TOL:
        raise InconsistencyError(
            f"Lagrangian residual drifted to {worst[0]:.3e} at x = {worst[1]:.4g} "
            f"(limit {10.0 * symplectic.LAGR_TOL:.1e}); reduce rtol or renorm_every"
        )
    return out


def lagrangian_drift(model, lambda_, opts=None):
    """Largest Lagrangian residual along the evolved path."""
    opts = (opts or FlowOptions()).resolve(model)
    path = _FlowPath(model, lambda_, opts)
    worst = 0.0
    for x in path.sample_xs():
        m = _qr_positive(path.frame_matrix_at(x))
        rep = symplectic.check_lagrangian(LagrangianFrame(m[: model.n], m[model.n:]))
        worst = max(worst, rep.asymmetry)
    return worst


def _beta_nearest(path, x):
    """Signed phase of the W-eigenvalue nearest -1 at position x."""
    red = symplectic.unitary_reduction(path.frame_at(x))
    betas = symplectic.eigenphases_from_minus_one(red.w)
    return betas[np.argmin(np.abs(betas))]


def _refine_crossing(path, x_lo, x_hi, xtol):
    b_lo = _beta_nearest(path, x_lo)
    b_hi = _beta_nearest(path, x_hi)
    if b_lo == 0.0:
        return x_lo
    if b_hi == 0.0 or np.sign(b_lo) == np.sign(b_hi):
        return x_hi
    while x_hi - x_lo > xtol:
        mid = 0.5 * (x_lo + x_hi)
        b_mid = _beta_nearest(path, mid)
        if b_mid == 0.0:
            return mid
        if np.sign(b_mid) == np.sign(b_lo):
            x_lo = mid
        else:
            x_hi = mid
    return 0.5 * (x_lo + x_hi)


def _det_a_sign_changes(path, xs):
    dets = np.array([np.linalg.det(path.frame_matrix_at(x)[: path.n]) for x in xs])
    scale = np.max(np.abs(dets))
    if scale == 0.0:
        return 0
    signs = np.sign(dets)
    live = signs != 0
    s = signs[live]
    return int(np.sum(s[:-1] * s[1:] < 0))


def _detect_events(model, lambda_star, opts):
    path = _FlowPath(model, lambda_star, opts)
    xs = path.sample_xs()
    frames = [path.frame_at(x) for x in xs]
    result = symplectic.path_maslov_index(frames, xs, crossing_tol=opts.crossing_tol)
    span = xs[-1] - xs[0]
    xtol = max(1e-12 * span, 1e-13)
    refined = []
    for ev in result.events:
        k = int(np.searchsorted(xs, ev.param, side="right")) - 1
        k = min(max(k, 0), len(xs) - 2)
        x_star = _refine_crossing(path, xs[k], xs[k + 1], xtol)
        refined.append(CrossingEvent(float(x_star), ev.multiplicity, ev.direction))
    refined.sort(key=lambda e: e.param)
    merged = []
    for ev in refined:
        if merged and ev.direction == merged[-1].direction and (
            abs(ev.param - merged[-1].param) <= 1e-7 * max(span, 1.0)
        ):
            prev = merged[-1]
            merged[-1] = CrossingEvent(prev.param, prev.multiplicity + ev.multiplicity,
                                       prev.direction)
        else:
            merged.append(ev)
    det_changes = _det_a_sign_changes(path, xs)
    odd_events = sum(1 for e in merged if e.multiplicity % 2 == 1)
    return tuple(merged), det_changes, odd_events


def detect_conjugate_points(model, lambda_star, opts=None):
    """Conjugate points of the evolved plane, as crossing events in x.

    Crossings are found from W-eigenvalue phases and refined by bisection
    on the dense solution; the count must agree with the number of sign
    changes of det(a_block) along the path.  On disagreement the evolution
    is retried once at halved tolerances, then aborts.
    """
    opts = (opts or FlowOptions()).resolve(model)
    events, det_changes, odd_events = _detect_events(model, lambda_star, opts)
    if det_changes != odd_events:
        events, det_changes, odd_events = _detect_events(
            model, lambda_star, opts.refined()
        )
        if det_changes != odd_events:
            raise CountMismatchError(
                f"det(a) sign changes ({det_changes}) disagree with refined "
                f"w-eigenvalue crossings ({odd_events}) at lambda = {lambda_star!r}"
            )
    return events


def lambda_max_bound(model, truncation=None, n_samples=4001):
    """lambda_inf = 1 + sup_x max-eig Q(x): no spectrum above it."""
    L = truncation
    if L is None:
        L = FlowOptions().resolve(model).truncation
    xs = np.linspace(-L, L, n_samples)
    top = -np.inf
    for x in xs:
        q = model.q(x)
        val = q[0, 0] if model.n == 1 else np.linalg.eigvalsh(q)[-1]
        top = max(top, float(val))
    return 1.0 + top


# ---------------------------------------------------------------------------
# Batched fixed-step integration over many lambda values at once (used for
# the top edge of the square and by the Evans module).

def _asymptotic_frame_stack(model, lams, side, stable):
    """(K, 2n, n) initial frames over a vector of (possibly complex) lambdas."""
    q_inf = model.q_minus if side == "minus" else model.q_plus
    vals, vecs = _normalized_eigenbasis(q_inf)
    lams = np.asarray(lams)
    gaps = lams[:, None] - vals[None, :]
    mus = np.sqrt(gaps.astype(complex))
    if np.any(mus.real <= 0.0):
        raise NonHyperbolicError(
            f"non-hyperbolic asymptotic matrix on side {side}: some "
            "sqrt(lambda - q_i) has nonpositive real part"
        )
    sign = -1.0 if stable else 1.0
    k = len(lams)
    n = model.n
    frames = np.empty((k, 2 * n, n), dtype=complex)
    frames[:, :n, :] = vecs[None, :, :]
    frames[:, n:, :] = sign * vecs[None, :, :] * mus[:, None, :]
    if np.isrealobj(lams):
        frames = frames.real.astype(float)
    return frames


def _integrate_frame_stack(model, lams, frames, x0, x1, step, renorm_every):
    """March U' = JB(x; lambda_k) U for all k with fixed-step RK4 + QR."""
    n = model.n
    lams = np.asarray(lams)
    lam_col = lams[:, None, None]
    q = model.q

    def deriv(x, u):
        out = np.empty_like(u)
        out[:, :n, :] = u[:, n:, :]
        out[:, n:, :] = lam_col * u[:, :n, :] - np.matmul(q(x), u[:, :n, :])
        return out

    total = x1 - x0
    if total == 0.0:
        return frames
    n_seg = max(1, int(math.ceil(abs(total) / renorm_every)))
    edges = np.linspace(x0, x1, n_seg + 1)
    u = frames
    for s0, s1 in zip(edges[:-1], edges[1:]):
        m = max(1, int(math.ceil(abs(s1 - s0) / step)))
        h = (s1 - s0) / m
        x = s0
        for _ in range(m):
            k1 = deriv(x, u)
            k2 = deriv(x + 0.5 * h, u + 0.5 * h * k1)
            k3 = deriv(x + 0.5 * h, u + 0.5 * h * k2)
            k4 = deriv(x + h, u + h * k3)
            u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            x += h
        u = _qr_positive(u)
    return u


def _rk4_step_for(rtol):
    return min(0.02, max(0.01, 2.0 * rtol**0.25))


def _top_edge_frames(model, lams, opts):
    L = opts.truncation
    init = _asymptotic_frame_stack(model, lams, "minus", stable=False)
    step = _rk4_step_for(opts.rtol)
    return _integrate_frame_stack(model, lams, init, -L, L, step, opts.renorm_every)


def _real_evans_values(model, lams, frames_at_l):
    """det[ evolved unstable frame | asymptotic stable frame ] at x = +L."""
    stable = _asymptotic_frame_stack(model, lams, "plus", stable=True)
    stable = _qr_positive(stable)
    stacked = np.concatenate([frames_at_l, stable], axis=2)
    return np.linalg.det(stacked)


def _interpolated_evans_roots(model, lams, changes, opts, sub_points=33,
                              rounds=2):
    """Zeros of the real Evans determinant inside the flagged grid intervals.

    Each round evaluates all sub-grids in one batched run and shrinks every
    bracket to the sub-interval with the sign change; the final root comes
    from linear interpolation inside a bracket narrowed ~sub_points-fold
    per round.
    """
    brackets = [(lams[j], lams[j + 1]) for j in changes]
    roots = []
    for _ in range(rounds):
        if not brackets:
            break
        subs = [np.linspace(a, b, sub_points) for a, b in brackets]
        values = np.real(_real_evans_values(
            model, np.concatenate(subs),
            _top_edge_frames(model, np.concatenate(subs), opts),
        ))
        next_brackets = []
        roots = []
        for i, sub in enumerate(subs):
            vals = values[i * sub_points : (i + 1) * sub_points]
            signs = np.sign(vals)
            hits = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
            if len(hits) == 0:
                # tangential dip: keep the strongest minimum
                k = int(np.argmin(np.abs(vals)))
                next_brackets.append((sub[max(k - 1, 0)],
                                      sub[min(k + 1, sub_points - 1)]))
                roots.append(float(sub[k]))
                continue
            j = int(hits[0])
            a, b = sub[j], sub[j + 1]
            fa, fb = vals[j], vals[j + 1]
            next_brackets.append((a, b))
            roots.append(float(a - fa * (b - a) / (fb - fa)))
        brackets = next_brackets
    return roots


def _crossing_phase(frame_matrix, n):
    frame = LagrangianFrame(frame_matrix[:n], frame_matrix[n:])
    betas = symplectic.eigenphases_from_minus_one(symplectic.unitary_reduction(frame).w)
    return float(betas[np.argmin(np.abs(betas))])


def _top_edge(model, lambda_star, lambda_inf, opts):
    """Eigenvalue crossings on the top edge of the square.

    At x = +L the W-eigenvalue passes -1 inside a lambda-window of width
    ~ e^{-2 mu L}, far below float resolution, so phase sampling cannot see
    the passage; the real Evans determinant crosses zero transversally at
    the same lambda and is the computable surrogate.  Each sign change
    yields one event; its direction is the sign of the monotone phase
    drift of the eigenvalue nearest -1 across the bracketing interval
    (eigenvalue crossings come out -1, opposite to conjugate points).
    """
    k_grid = 129
    for round_ in range(3):
        lams = np.linspace(lambda_star, lambda_inf, k_grid)
        frames_l = _top_edge_frames(model, lams, opts)
        evans = np.real(_real_evans_values(model, lams, frames_l))
        scale = np.max(np.abs(evans))
        if scale == 0.0:
            raise CountMismatchError("Evans determinant vanished along the top edge")
        signs = np.sign(evans)
        changes = [j for j in range(len(lams) - 1) if signs[j] * signs[j + 1] < 0]
        dips = [
            j for j in range(1, len(lams) - 1)
            if abs(evans[j]) < 1e-4 * scale
            and abs(evans[j]) <= abs(evans[j - 1])
            and abs(evans[j]) <= abs(evans[j + 1])
            and j not in changes and j - 1 not in changes
        ]
        if dips and round_ < 2:
            k_grid = 2 * k_grid - 1
            continue
        roots = _interpolated_evans_roots(model, lams, changes, opts)
        events = []
        for j, root in zip(changes, roots):
            b_lo = _crossing_phase(frames_l[j], model.n)
            b_hi = _crossing_phase(frames_l[j + 1], model.n)
            drift = float(np.arctan2(np.sin(b_hi - b_lo), np.cos(b_hi - b_lo)))
            direction = -1 if drift < 0 else 1
            events.append(CrossingEvent(float(root), 1, direction))
        return tuple(sorted(events, key=lambda e: e.param))
    raise CountMismatchError("unresolved Evans dips remained on the top edge")


def _bottom_edge_empty(model, lambda_star, lambda_inf, n_samples=65):
    """The frame at x = -L is the asymptotic unstable frame: never Dirichlet."""
    lams = np.linspace(lambda_star, lambda_inf, n_samples)
    for lam in lams:
        unstable, _, _ = asymptotic_splitting(model, lam, side="minus")
        if symplectic.dirichlet_intersection_dim(unstable) != 0:
            return False
    return True


def maslov_square(model, lambda_star, opts=None):
    """Crossing ledger around the boundary of the Maslov square.

    Left edge: conjugate points at lambda_star (x increasing).  Top edge:
    eigenvalues in (lambda_star, lambda_inf) at x = +L (lambda increasing).
    Right and bottom edges are verified empty.  The net index around the
    loop must be zero; a nonzero value is reported, never corrected.
    """
    opts = (opts or FlowOptions()).resolve(model)
    # the Rayleigh bound can fall below lambda_star for strongly negative
    # potentials; any level above the spectrum works, so lift the top edge
    lambda_inf = max(
        lambda_max_bound(model, truncation=opts.truncation), lambda_star + 1.0
    )
    left = detect_conjugate_points(model, lambda_star, opts)
    top = _top_edge(model, lambda_star, lambda_inf, opts)
    right = detect_conjugate_points(model, lambda_inf, opts)
    bottom_ok = _bottom_edge_empty(model, lambda_star, lambda_inf)
    if not bottom_ok:
        raise InconsistencyError("asymptotic frame at x = -L met the Dirichlet plane")
    net = (
        sum(e.signed_count for e in left)
        + sum(e.signed_count for e in top)
        - sum(e.signed_count for e in right)
    )
    return SquareReport(
        left_events=left,
        top_events=top,
        right_events=right,
        bottom_events=(),
        net_index=int(net),
        lambda_star=float(lambda_star),
        lambda_inf=float(lambda_inf),
    )


def count_unstable_eigenvalues(model, opts=None, epsilon_shift=1e-3,
                               with_winding=False, with_oracle=False,
                               oracle_h=0.02):
    """Unstable-eigenvalue count from conjugate points at lambda = epsilon_shift.

    The shift steps off the translation eigenvalue at zero.  Optional
    cross-checks: the Evans winding number over a contour enclosing
    (epsilon_shift, lambda_inf], and the finite-difference oracle count.
    For pulse models a count of zero contradicts the instability theorem
    and raises.
    """
    stab = check_essential_stability(model)
    if not stab.stable:
        raise NonHyperbolicError(
            f"essential spectrum is unstable (max asymptotic eigenvalue "
            f"{stab.max_eig_qinf:.6g} >= 0)"
        )
    opts = (opts or FlowOptions()).resolve(model)
    events = detect_conjugate_points(model, epsilon_shift, opts)
    count = sum(e.multiplicity for e in events)
    if model.kind == "pulse" and count < 1:
        raise InconsistencyError(
            "pulse model produced zero conjugate points, contradicting the "
            "pulse instability theorem; treat as a numerical failure"
        )
    lambda_inf = max(
        lambda_max_bound(model, truncation=opts.truncation), epsilon_shift + 1.0
    )
    winding = None
    if with_winding:
        from . import evans

        winding = evans.winding_number(
            model, evans.Contour.enclosing(epsilon_shift, lambda_inf), opts
        )
    oracle_count = None
    if with_oracle:
        from . import oracle

        oracle_count = oracle.oracle_count_above(
            model, opts.truncation, oracle_h, epsilon_shift
        )
    return SpectralReport(
        conjugate_count=int(count),
        winding_count=winding,
        oracle_count=oracle_count,
        epsilon_shift=float(epsilon_shift),
        lambda_inf=lambda_inf,
        events=events,
    )
