"""Input-coherence vs average-output-coherence trade-off curves.

Two curves over the same horizontal axis: the one traced by harmonic
power states, and the numerically optimized minimum of the average
output coherence at fixed input coherence.  The optimized curve can
never lie above the harmonic one, since harmonic states are feasible
points of the optimization.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .protocol import average_output_coherence
from .states import PureCoherentState, harmonic_power_state, l1_coherence, _readonly

#: default number of local-search restarts
RESTARTS = 32
#: largest exponent probed when matching a harmonic state to a target
#: input coherence; beyond this the state is numerically a basis state
_ALPHA_MAX = 64.0
#: accepted residual between achieved and requested input coherence
_RESIDUAL = 1e-6


@dataclass(frozen=True, eq=False)
class TradeoffPoint:
    """One point of a trade-off curve with the amplitudes achieving it."""

    c_in: float
    c_out: float
    amps: np.ndarray
    tag: str

    def __post_init__(self):
        if self.tag not in ("harmonic", "optimized"):
            raise ValueError("tag must be 'harmonic' or 'optimized'")
        if not (-1e-9 <= self.c_out <= self.c_in + 1e-9):
            raise ValueError("need 0 <= c_out <= c_in")
        object.__setattr__(self, "amps", _readonly(self.amps))


@dataclass(frozen=True, eq=False)
class SweepPair:
    """Matched harmonic and optimized points at one target input coherence."""

    c_target: float
    alpha: float
    harmonic: TradeoffPoint
    optimized: TradeoffPoint

    @property
    def gap(self) -> float:
        return self.harmonic.c_out - self.optimized.c_out


def _point(state: PureCoherentState, tag: str) -> TradeoffPoint:
    return TradeoffPoint(
        c_in=l1_coherence(state),
        c_out=average_output_coherence(state),
        amps=state.amps,
        tag=tag,
    )


def harmonic_curve(d: int, alphas) -> list[TradeoffPoint]:
    """Trade-off points of harmonic power states at the given exponents."""
    if d < 2:
        raise ValueError("need dimension >= 2")
    return [_point(harmonic_power_state(d, float(a)), "harmonic") for a in alphas]


def match_harmonic_alpha(d: int, c_target: float, tol: float = 1e-9) -> float:
    """Exponent whose harmonic power state has the requested input coherence.

    The input coherence is continuous and strictly decreasing in the
    exponent, so a bisection search suffices.  Targets below what the
    capped exponent reaches (numerically zero coherence) return the cap.
    """
    if not (0.0 <= c_target <= d - 1):
        raise ValueError("target coherence out of range")

    def c_in(alpha: float) -> float:
        return l1_coherence(harmonic_power_state(d, alpha))

    if c_target >= d - 1:
        return 0.0
    if c_in(_ALPHA_MAX) >= c_target:
        return _ALPHA_MAX
    alpha = brentq(
        lambda a: c_in(a) - c_target, 0.0, _ALPHA_MAX, xtol=1e-13, rtol=8.9e-16
    )
    if abs(c_in(alpha) - c_target) > tol:
        raise RuntimeError("bisection failed to match the target coherence")
    return float(alpha)


def _sorted_unit(x: np.ndarray) -> np.ndarray | None:
    x = np.sort(np.abs(x))[::-1]
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return None
    return x / norm


def min_output_coherence(
    d: int,
    c_target: float,
    seed: int = 0,
    restarts: int = RESTARTS,
) -> TradeoffPoint:
    """Minimize the average output coherence at fixed input coherence.

    Searches amplitude vectors on the unit sphere with the two equality
    constraints sum(psi) = sqrt(1 + c_target) and sum(psi**2) = 1, via
    SLSQP from ``restarts`` deterministic starting points (a harmonic
    state matched to the target is always one of them, so the optimized
    curve never exceeds the harmonic one).  The winner's achieved input
    coherence is within 1e-6 of the target.
    """
    if d < 2:
        raise ValueError("need dimension >= 2")
    if not (0.0 <= c_target <= d - 1):
        raise ValueError("target coherence out of range")
    if c_target <= 1e-12:
        basis = np.zeros(d)
        basis[0] = 1.0
        return _point(PureCoherentState(basis), "optimized")
    if c_target >= d - 1 - 1e-12:
        return _point(PureCoherentState(np.full(d, d ** -0.5)), "optimized")

    target_sum = np.sqrt(1.0 + c_target)
    weights = 2.0 * np.arange(d, dtype=float)

    def objective(x):
        y = np.sort(np.abs(x))[::-1]
        return float(np.sum(weights * y * y))

    def gradient(x):
        # weight seen by each coordinate under the descending sort
        ranks = np.empty(d, dtype=int)
        ranks[np.argsort(-np.abs(x), kind="stable")] = np.arange(d)
        return 2.0 * weights[ranks] * x

    constraints = (
        {"type": "eq", "fun": lambda x: np.sum(x) - target_sum, "jac": lambda x: np.ones(d)},
        {"type": "eq", "fun": lambda x: x @ x - 1.0, "jac": lambda x: 2.0 * x},
    )
    bounds = [(0.0, 1.0)] * d

    starts = []
    alpha = match_harmonic_alpha(d, c_target)
    harmonic_amps = harmonic_power_state(d, alpha).amps
    starts.append(harmonic_amps)
    # blunt interpolation between the basis state and the uniform state
    t = (target_sum - 1.0) / (np.sqrt(d) - 1.0)
    spike = np.zeros(d)
    spike[0] = 1.0
    mix = (1.0 - t) * spike + t * np.full(d, d ** -0.5)
    starts.append(mix / np.linalg.norm(mix))
    for r in range(max(restarts - len(starts), 0)):
        rng = np.random.Generator(np.random.Philox(key=((r + 1) << 64) | seed))
        starts.append(np.sqrt(np.sort(rng.dirichlet(np.ones(d)))[::-1]))

    best: tuple[float, np.ndarray] | None = None

    def consider(x):
        nonlocal best
        y = _sorted_unit(x)
        if y is None:
            return
        state = PureCoherentState(y)
        if abs(l1_coherence(state) - c_target) > _RESIDUAL:
            return
        value = average_output_coherence(state)
        if best is None or value < best[0]:
            best = (value, y)

    consider(harmonic_amps)
    for x0 in starts:
        result = minimize(
            objective,
            x0,
            jac=gradient,
            method="SLSQP",
            bounds=bounds,
            constraints=constraints,
            options={"maxiter": 300, "ftol": 1e-14},
        )
        consider(result.x)

    if best is None:
        raise RuntimeError("no restart satisfied the input-coherence constraint")
    return _point(PureCoherentState(best[1]), "optimized")


def figure2_sweep(
    d: int,
    n_points: int,
    seed: int = 0,
    restarts: int = RESTARTS,
) -> list[SweepPair]:
    """Both curves on a shared grid of target input coherences.

    The grid spans [0, d-1] inclusive, so the endpoints (0, 0) and
    (d-1, d-1) appear on both curves.  Each optimized point is checked
    to lie at or below its harmonic partner.
    """
    if d < 2:
        raise ValueError("need dimension >= 2")
    if n_points < 2:
        raise ValueError("need at least two grid points")
    pairs = []
    for c_target in np.linspace(0.0, d - 1.0, n_points):
        c_target = float(c_target)
        alpha = match_harmonic_alpha(d, c_target)
        hp = _point(harmonic_power_state(d, alpha), "harmonic")
        op = min_output_coherence(d, c_target, seed=seed, restarts=restarts)
        if op.c_out > hp.c_out + 1e-6:
            raise AssertionError("optimized point above the harmonic curve")
        pairs.append(SweepPair(c_target=c_target, alpha=alpha, harmonic=hp, optimized=op))
    return pairs


def write_sweep_csv(pairs, fileobj) -> None:
    """Write sweep rows as CSV: header curve,alpha,c_in,c_out,gap.

    Rows are ordered by ascending input coherence with the harmonic row
    before the optimized row of each pair.  Floats are written with
    ``repr`` so identical sweeps serialize to identical bytes.
    """
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["curve", "alpha", "c_in", "c_out", "gap"])
    for pair in sorted(pairs, key=lambda p: p.c_target):
        writer.writerow(
            ["harmonic", repr(pair.alpha), repr(pair.harmonic.c_in), repr(pair.harmonic.c_out), ""]
        )
        writer.writerow(
            ["optimized", "", repr(pair.optimized.c_in), repr(pair.optimized.c_out), repr(pair.gap)]
        )


def sweep_csv_bytes(pairs) -> bytes:
    """The CSV document for a sweep as bytes."""
    buf = io.StringIO()
    write_sweep_csv(pairs, buf)
    return buf.getvalue().encode("utf-8")
