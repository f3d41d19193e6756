"""Equilibrium location, linearized stability, coupling-gain thresholds,
invariant-set certificates, and Lyapunov diagnostics for oscillator
networks of any size.

Phase-locked states solve B^T omega - B^T B K sin(X) = 0 on the column
space of B^T. Linearizing the edge-space flow about (X*, 0) gives the
block matrix A = [[0, I], [0, G(X*)]]; its spectrum splits into e
structural zeros plus the spectrum of G(X*), and the dynamics proper live
on the 2(N-1)-dimensional column-space slice, so classification counts
zero eigenvalues and asks the remaining ones to sit strictly in the left
half plane.

The invariant set H is the open box |x_i| < pi/2 intersected with the
column space, with frequency differences slaved to the phases through the
consistency identity; membership additionally requires the per-edge gain
inequality that blocks exit through each box face.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import EdgeState, Trajectory, simulate_many
from .errors import (
    NoEquilibriumError,
    SamplingInfeasibleError,
    SingularJacobianError,
)
from .network import OscillatorNetwork

__all__ = [
    "SEMISTABLE_CANDIDATE",
    "UNSTABLE",
    "INDETERMINATE",
    "StabilityReport",
    "CouplingBounds",
    "SetHMembership",
    "AttractingSetReport",
    "InvarianceReport",
    "solve_equilibrium",
    "linearize",
    "classify_stability",
    "sufficient_gain_bounds",
    "uniform_critical_gain",
    "onset_lower_bounds",
    "coupling_bounds",
    "in_set_h",
    "invariance_certificate",
    "nontangency_rank_test",
    "lyapunov_v2_along",
    "attracting_set_check",
    "lyapunov_v3",
    "sync_frequency",
]

SEMISTABLE_CANDIDATE = "semistable-candidate"
UNSTABLE = "unstable"
INDETERMINATE = "indeterminate"

RANK_TOL = 1e-10  # relative singular-value cutoff for rank decisions


def _edge_frequency_mismatch(net: OscillatorNetwork) -> np.ndarray:
    """Per-edge |omega_i - omega_j| in edge order, i.e. |B^T omega|."""
    return np.abs(net._b.T @ net.natural_frequencies)


def sync_frequency(net: OscillatorNetwork) -> float:
    """Common limit frequency of a synchronized network: the mean of omega."""
    return float(np.mean(net.natural_frequencies))


def sufficient_gain_bounds(net: OscillatorNetwork) -> np.ndarray:
    """Per-edge gain thresholds (N/2) |omega_i - omega_j| that make the
    half-circle box positively invariant."""
    return 0.5 * net.n_oscillators * _edge_frequency_mismatch(net)


def uniform_critical_gain(net: OscillatorNetwork) -> float:
    """Uniform-gain threshold N max|omega_i - omega_j| / (2(N-1))."""
    n = net.n_oscillators
    return float(n * np.max(_edge_frequency_mismatch(net)) / (2.0 * (n - 1)))


def onset_lower_bounds(net: OscillatorNetwork) -> np.ndarray:
    """Minimum gain per edge, given the other gains, below which the
    frequency mismatch on that edge cannot be balanced anywhere in the box.

    Rearranges |omega_i - omega_j| < (2/N) Ktilde_i
    + (1/N) sum_{j != i} |(B^T B)_{ij}| Ktilde_j for Ktilde_i, clipped at 0.
    """
    n = net.n_oscillators
    off = np.abs(net.incidence.T @ net.incidence).astype(float)
    np.fill_diagonal(off, 0.0)
    neighbor = off @ net.coupling_gains
    return np.maximum(0.0, 0.5 * (n * _edge_frequency_mismatch(net) - neighbor))


@dataclass(frozen=True)
class StabilityReport:
    """Linearization summary at an equilibrium of the edge-space flow."""

    equilibrium_x: np.ndarray
    eigenvalues: np.ndarray  # spectrum of the 2e x 2e block matrix
    n_zero: int
    classification: str
    g_restricted_eigenvalues: np.ndarray  # spectrum of G on the column space
    zero_tolerance: float


@dataclass(frozen=True)
class CouplingBounds:
    """Collected gain thresholds and the attracting-set margin."""

    per_edge_sufficient: np.ndarray
    uniform_k0: float
    onset_lower: np.ndarray
    attracting_margin: float
    attracting_satisfied: bool


@dataclass(frozen=True)
class SetHMembership:
    """Outcome of a membership test for the invariant set."""

    in_set: bool
    slack: np.ndarray  # per-edge inequality margin, RHS - LHS
    in_box: bool
    in_colspace: bool
    v_consistent: bool


@dataclass(frozen=True)
class AttractingSetReport:
    """Gain condition under which the half-circle box attracts the
    surrounding phase region."""

    satisfied: bool
    margin: float  # LHS - RHS of the gain inequality
    side_condition_ok: bool
    lhs: float
    rhs: float


@dataclass(frozen=True)
class InvarianceReport:
    """Monte-Carlo certificate that sampled trajectories stay in the set."""

    passed: bool
    bounds_met: bool
    n_samples: int
    n_stayed: int
    fraction: float
    horizon: float
    dt: float
    margin: float
    seed: int | None
    trajectories: list[Trajectory] = field(default_factory=list, repr=False)


def solve_equilibrium(
    net: OscillatorNetwork,
    theta_guess=None,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> np.ndarray:
    """Newton-solve B^T omega - B^T B K sin(B^T theta) = 0 for the edge
    phase differences X* = B^T theta*.

    The last node phase is pinned to zero, which removes the common-rotation
    nullspace; the Newton step solves the consistent overdetermined edge
    system in the least-squares sense. Raises SingularJacobianError when the
    Jacobian drops rank (a cos(x_i) = 0 crossing) and NoEquilibriumError
    when the residual does not reach ``tol`` within ``max_iter`` iterations,
    which typically means the gains are below critical.
    """
    n = net.n_oscillators
    if theta_guess is None:
        theta = np.zeros(n)
    else:
        theta = np.array(theta_guess, dtype=float)
        if theta.shape != (n,):
            raise ValueError(f"theta_guess must have shape ({n},)")
        if not np.all(np.isfinite(theta)):
            raise ValueError("theta_guess must be finite")
        if np.ptp(theta) >= np.pi:
            raise ValueError("theta_guess must have phase spread below pi")
    theta = theta - theta[-1]  # pin the last phase to zero

    b = net._b
    btb = b.T @ b
    bw = b.T @ net.natural_frequencies
    cols = b.T[:, :-1]  # derivatives with respect to theta_1..theta_{N-1}

    for _ in range(max_iter):
        x = b.T @ theta
        g = bw - btb @ (net._k_diag * np.sin(x))
        if np.max(np.abs(g)) < tol:
            return x
        jac = -(btb * (net._k_diag * np.cos(x))[None, :]) @ cols
        sv = np.linalg.svd(jac, compute_uv=False)
        scale = max(1.0, float(np.max(net.coupling_gains)))
        if sv[0] < 1e-12 * scale or sv[-1] < RANK_TOL * sv[0]:
            raise SingularJacobianError(
                "Jacobian rank-deficient at iterate; equilibrium near a "
                "cos(x_i) = 0 crossing"
            )
        step, *_ = np.linalg.lstsq(jac, -g, rcond=None)
        theta[:-1] += step

    raise NoEquilibriumError(
        f"Newton did not reach |residual| < {tol:g} in {max_iter} iterations; "
        "coupling gains may be below critical"
    )


def linearize(net: OscillatorNetwork, x_star) -> np.ndarray:
    """Block matrix [[0, I], [0, G(X*)]] of the edge-space linearization."""
    x_star = np.asarray(x_star, dtype=float)
    e = net.n_edges
    if x_star.shape != (e,):
        raise ValueError(f"x_star must have shape ({e},)")
    btb = net._b.T @ net._b
    g = -btb * (net._k_diag * np.cos(x_star))[None, :]
    a = np.zeros((2 * e, 2 * e))
    a[:e, e:] = np.eye(e)
    a[e:, e:] = g
    return a


def _colspace_basis(net: OscillatorNetwork) -> np.ndarray:
    """Orthonormal basis of the column space of B^T, shape (e, N-1)."""
    q, _ = np.linalg.qr(net._b.T[:, :-1])
    return q


def classify_stability(
    net: OscillatorNetwork, x_star, tol_zero: float = 1e-9
) -> StabilityReport:
    """Classify the equilibrium from the linearization spectrum.

    semistable-candidate: X* inside the open half-circle box, every
    eigenvalue either negligible or with strictly negative real part, and
    exactly 2e - (N-1) negligible ones (the structural count for a
    connected network). unstable: some eigenvalue with positive real part.
    Anything else is indeterminate. ``tol_zero`` is relative to the matrix
    norm.
    """
    x_star = np.asarray(x_star, dtype=float)
    a = linearize(net, x_star)
    eigs = np.linalg.eigvals(a)
    eigs = eigs[np.lexsort((eigs.imag, eigs.real))]
    tol_abs = tol_zero * np.linalg.norm(a, 2)

    q = _colspace_basis(net)
    g = a[net.n_edges :, net.n_edges :]
    restricted = np.linalg.eigvals(q.T @ g @ q)
    restricted = restricted[np.lexsort((restricted.imag, restricted.real))]

    n_zero = int(np.sum(np.abs(eigs) < tol_abs))
    any_positive = bool(np.any(eigs.real > tol_abs))
    nonzero = eigs[np.abs(eigs) >= tol_abs]
    all_nonzero_negative = bool(np.all(nonzero.real < -tol_abs))
    in_box = bool(np.all(np.abs(x_star) < np.pi / 2))
    expected_zeros = 2 * net.n_edges - (net.n_oscillators - 1)

    if any_positive:
        classification = UNSTABLE
    elif in_box and all_nonzero_negative and n_zero == expected_zeros:
        classification = SEMISTABLE_CANDIDATE
    else:
        classification = INDETERMINATE

    return StabilityReport(
        equilibrium_x=x_star,
        eigenvalues=eigs,
        n_zero=n_zero,
        classification=classification,
        g_restricted_eigenvalues=restricted,
        zero_tolerance=float(tol_abs),
    )


def nontangency_rank_test(net: OscillatorNetwork, x) -> bool:
    """True iff G(X) v = 0 forces v = 0 on the column space of B^T.

    Computed as a numerical rank test of G(X) restricted to a column-space
    basis; equivalent to connectivity of the positive-gain graph whenever X
    stays inside the open half-circle box.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= np.pi / 2):
        raise ValueError("x must lie strictly inside the half-circle box")
    btb = net._b.T @ net._b
    g = -btb * (net._k_diag * np.cos(x))[None, :]
    m = g @ _colspace_basis(net)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return net.n_oscillators - 1 == 0
    rank = int(np.sum(sv > RANK_TOL * sv[0]))
    return rank == net.n_oscillators - 1


def _set_h_inequality(net: OscillatorNetwork, sin_abs_x: np.ndarray) -> np.ndarray:
    """Per-edge slack RHS - LHS of the face-blocking gain inequality.

    ``sin_abs_x`` is sin|X| with edge index last, so trajectories pass a
    (T, e) array and single states pass shape (e,).
    """
    n = net.n_oscillators
    off = np.abs(net.incidence.T @ net.incidence).astype(float)
    np.fill_diagonal(off, 0.0)
    lhs = _edge_frequency_mismatch(net)
    rhs = (2.0 / n) * net.coupling_gains + (net.coupling_gains * sin_abs_x) @ off.T / n
    return rhs - lhs


def in_set_h(
    state: EdgeState,
    net: OscillatorNetwork,
    colspace_tol: float = 1e-9,
    consistency_tol: float = 1e-9,
) -> SetHMembership:
    """Membership of an edge state in the invariant set.

    Requires every |x_i| < pi/2, X in the column space of B^T, V matching
    the consistency identity B^T omega - B^T B K sin(X), and the per-edge
    gain inequality evaluated at the current X. The slack vector reports
    the inequality margin edge by edge.
    """
    x, v = state.x, state.v
    e = net.n_edges
    if x.shape != (e,):
        raise ValueError(f"state has {x.shape[0]} edges, expected {e}")
    in_box = bool(np.all(np.abs(x) < np.pi / 2))
    # projector onto Col(B^T) is B^T B / N for the complete-graph incidence
    btb = net._b.T @ net._b
    residual = x - btb @ x / net.n_oscillators
    in_colspace = bool(np.linalg.norm(residual) <= colspace_tol)
    v_expected = net._b.T @ net.natural_frequencies - btb @ (
        net._k_diag * np.sin(x)
    )
    v_consistent = bool(np.max(np.abs(v - v_expected)) <= consistency_tol)
    slack = _set_h_inequality(net, np.sin(np.abs(x)))
    return SetHMembership(
        in_set=in_box and in_colspace and v_consistent and bool(np.all(slack >= 0.0)),
        slack=slack,
        in_box=in_box,
        in_colspace=in_colspace,
        v_consistent=v_consistent,
    )


def lyapunov_v2_along(traj: Trajectory, net: OscillatorNetwork):
    """Kinetic-style certificate V2 = |V|^2 / 2 and its flow derivative
    V^T G(X) V at every stored step of a trajectory."""
    x = traj.edge_x(net)
    v = traj.edge_v(net)
    v2 = 0.5 * np.sum(v * v, axis=1)
    btb = net._b.T @ net._b
    weighted = (net._k_diag * np.cos(x)) * v
    v2_dot = -np.sum(v * (weighted @ btb.T), axis=1)
    return v2, v2_dot


def lyapunov_v3(x, n_oscillators: int):
    """Nonsmooth potential sum_i |x_i| - (N-1) pi/2.

    Accepts a single edge vector or a (T, e) stack; returns a float or a
    (T,) array accordingly.
    """
    x = np.asarray(x, dtype=float)
    value = np.sum(np.abs(x), axis=-1) - (n_oscillators - 1) * np.pi / 2.0
    if value.ndim == 0:
        return float(value)
    return value


def attracting_set_check(net: OscillatorNetwork, delta: float) -> AttractingSetReport:
    """Gain condition making the half-circle box attract phases within
    delta of the full circle.

    The gain spread Delta_m is taken over the nonzero gains only; with
    structural zeros included the condition would be vacuous for any sparse
    topology. The side requirement that every nonzero gain exceeds
    (N-2) Delta_m / 2 is reported and folded into the verdict.
    """
    if not (np.isfinite(delta) and 0.0 < delta < np.pi):
        raise ValueError("delta must lie in (0, pi)")
    n = net.n_oscillators
    gains = net.coupling_gains
    active = gains > 0.0
    if np.any(active):
        delta_m = float(gains[active].max() - gains[active].min())
    else:
        delta_m = 0.0
    lhs = float(
        np.sum(2.0 * gains[active] - (n - 2) * delta_m) * np.sin(abs(delta)) / n
    )
    rhs = float(
        np.sum(_edge_frequency_mismatch(net))
        + np.count_nonzero(~active) * (n - 2) * delta_m / n
    )
    side_ok = bool(np.all(gains[active] >= (n - 2) * delta_m / 2.0))
    return AttractingSetReport(
        satisfied=bool(lhs > rhs) and side_ok,
        margin=lhs - rhs,
        side_condition_ok=side_ok,
        lhs=lhs,
        rhs=rhs,
    )


def coupling_bounds(net: OscillatorNetwork, delta: float = 0.5) -> CouplingBounds:
    """Bundle the gain thresholds with the attracting-set margin at delta."""
    attracting = attracting_set_check(net, delta)
    return CouplingBounds(
        per_edge_sufficient=sufficient_gain_bounds(net),
        uniform_k0=uniform_critical_gain(net),
        onset_lower=onset_lower_bounds(net),
        attracting_margin=attracting.margin,
        attracting_satisfied=attracting.satisfied,
    )


def _sample_box_states(
    net: OscillatorNetwork,
    n_samples: int,
    margin: float,
    rng: np.random.Generator,
    max_draws: int = 100_000,
) -> np.ndarray:
    """Rejection-sample node phases whose edge differences fill the shrunken
    box |x_i| < pi/2 - margin; returns shape (N, n_samples)."""
    half_width = np.pi / 2 - margin
    if half_width <= 0:
        raise ValueError("margin leaves no room inside the box")
    accepted = []
    drawn = 0
    n = net.n_oscillators
    while sum(a.shape[1] for a in accepted) < n_samples:
        if drawn >= max_draws:
            raise SamplingInfeasibleError(
                f"could not draw {n_samples} box states in {max_draws} samples"
            )
        chunk = min(20_000, max_draws - drawn)
        drawn += chunk
        theta = rng.uniform(-np.pi / 2, np.pi / 2, size=(n, chunk))
        ok = np.ptp(theta, axis=0) < half_width
        if np.any(ok):
            accepted.append(theta[:, ok])
    return np.concatenate(accepted, axis=1)[:, :n_samples]


def invariance_certificate(
    net: OscillatorNetwork,
    n_samples: int = 100,
    horizon: float = 50.0,
    dt: float = 0.01,
    margin: float = 0.1,
    seed: int | None = None,
    keep_trajectories: bool = False,
) -> InvarianceReport:
    """Monte-Carlo check that trajectories started in the invariant set
    stay there for the whole horizon.

    Initial phases are rejection-sampled so the edge differences fill the
    box shrunk by ``margin``. Gains below the per-edge sufficient
    thresholds are flagged (``bounds_met``) but the certificate still runs;
    escapes then show up as a fraction below one rather than an error.
    Along integrated trajectories the frequency differences satisfy the
    consistency identity by construction, and whenever the gain bounds are
    met the per-edge face inequality holds for every in-box state, so the
    per-step membership check reduces to confinement in the open box.
    """
    rng = np.random.default_rng(seed)
    bounds_met = bool(np.all(net.coupling_gains >= sufficient_gain_bounds(net) - 1e-12))
    theta0s = _sample_box_states(net, n_samples, margin, rng)
    trajectories = simulate_many(net, theta0s, horizon, dt)

    stayed = np.ones(n_samples, dtype=bool)
    for j, traj in enumerate(trajectories):
        # stored steps are dense enough that an escaping difference is seen
        # near the box face before the wrap could alias it back inside
        x = traj.edge_x(net)
        stayed[j] = bool(np.all(np.abs(x) < np.pi / 2))

    n_stayed = int(np.sum(stayed))
    fraction = n_stayed / n_samples
    return InvarianceReport(
        passed=fraction == 1.0,
        bounds_met=bounds_met,
        n_samples=n_samples,
        n_stayed=n_stayed,
        fraction=fraction,
        horizon=horizon,
        dt=dt,
        margin=margin,
        seed=seed,
        trajectories=list(trajectories) if keep_trajectories else [],
    )
