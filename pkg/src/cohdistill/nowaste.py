"""Two-step distillation that never outputs an incoherent state.

When the top population psi_1**2 is below 1/2, the state can first be
taken deterministically to an intermediate state whose leading k
amplitudes are all equal to psi_1.  Running the measurement channel on
that intermediate makes every outcome below dimension k impossible, so
the protocol always delivers a state with nonzero coherence, while the
probability of the best (d-level) outcome stays at its optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .protocol import OutcomeEnsemble, outcome_probabilities
from .states import ATOL, PureCoherentState, majorizes


class Infeasible(ValueError):
    """The no-waste preprocessing does not exist for this input."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True, eq=False)
class IntermediatePlan:
    """A feasible flattening: target state chi with its parameters.

    chi's first k amplitudes equal the source's psi_1, entry k+1 holds
    the balancing amplitude psi_prime, and entries k+2..d are copied
    from the source.  ``feasible`` certifies that the deterministic step
    source -> chi passed the majorization check.
    """

    k: int
    psi_prime: float
    chi: PureCoherentState
    feasible: bool

    @property
    def psi_prime_sq(self) -> float:
        return self.psi_prime * self.psi_prime


def find_intermediate(s: PureCoherentState, atol: float = ATOL) -> IntermediatePlan:
    """Find the largest flattening level k with a valid intermediate state.

    Scans k from d-1 down to 2 and accepts the first k whose balancing
    population psi_prime**2 = 1 - k*psi_1**2 - sum_{i>k+1} psi_i**2 fits
    between psi_{k+2}**2 and psi_1**2.  A maximally coherent input is
    already waste-free and is returned as the trivial plan with k = d.

    Raises :class:`Infeasible` with reason "top weight too large" when
    psi_1**2 >= 1/2, or "no valid k" when the scan is exhausted.
    """
    d = s.dim
    if d < 2:
        raise ValueError("need dimension >= 2")
    sq = s.squared
    top = float(sq[0])

    # Uniform input: every outcome below d is already impossible.
    if abs(top - 1.0 / d) <= atol:
        return IntermediatePlan(
            k=d, psi_prime=float(s.amps[-1]), chi=s, feasible=True
        )

    if top >= 0.5:
        raise Infeasible("top weight too large")

    for k in range(d - 1, 1, -1):
        tail = float(np.sum(sq[k + 1:]))
        pp = 1.0 - k * top - tail
        lower = float(sq[k + 1]) if k + 1 < d else 0.0
        if not (lower - atol <= pp <= top + atol):
            continue
        # k = d-1 replaces the last amplitude; only allowed when it keeps
        # psi_d (and with it the optimal success probability) unchanged.
        if k == d - 1 and abs(pp - float(sq[-1])) > atol:
            continue
        pp = min(max(pp, lower), top)
        psi_prime = math.sqrt(pp)
        chi = PureCoherentState(
            np.concatenate([np.full(k, s.amps[0]), [psi_prime], s.amps[k + 1:]])
        )
        if not majorizes(chi, s, atol=atol):
            raise AssertionError("intermediate state is not reachable deterministically")
        return IntermediatePlan(k=k, psi_prime=psi_prime, chi=chi, feasible=True)

    raise Infeasible("no valid k")


def two_step_distill(s: PureCoherentState) -> tuple[IntermediatePlan, OutcomeEnsemble]:
    """Flatten to the intermediate state, then run the measurement on it.

    The returned ensemble has p_q = 0 exactly for every q below the
    flattening level and the same top-outcome probability d * psi_d**2
    as the single-step protocol on the source.
    """
    plan = find_intermediate(s)
    ensemble = outcome_probabilities(plan.chi)
    probs = ensemble.probs
    if plan.k > 1 and np.any(probs[: plan.k - 1] != 0.0):
        raise AssertionError("outcomes below the flattening level must vanish")
    p_top = float(probs[-1])
    if abs(p_top - s.dim * float(s.squared[-1])) > ATOL:
        raise AssertionError("top-outcome probability changed by the flattening step")
    return plan, ensemble
