"""Entanglement analog of the distillation protocol.

Bipartite pure states enter and leave as Schmidt coefficient vectors;
every formula of the coherence protocol applies verbatim to those
coefficients.  The no-waste preprocessing is fixed at flattening level
k = 2: the two leading coefficients are equalized so the separable
outcome becomes impossible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nowaste import Infeasible
from .protocol import OutcomeEnsemble, outcome_probabilities
from .states import ATOL, PureCoherentState, majorizes, _readonly


@dataclass(frozen=True, eq=False)
class SchmidtState:
    """Nonincreasing Schmidt coefficients of a bipartite pure state."""

    coeffs: np.ndarray

    def __post_init__(self):
        # Same canonical-form rules as coherent amplitudes.
        state = PureCoherentState(np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "coeffs", _readonly(state.amps))

    @property
    def dim(self) -> int:
        return int(self.coeffs.size)

    @property
    def spectrum(self) -> np.ndarray:
        """Squared coefficients lambda_1 >= lambda_2 >= ... (sum 1)."""
        return self.coeffs * self.coeffs

    def as_coherent(self) -> PureCoherentState:
        """The same coefficient vector read as a coherent-state amplitude vector."""
        return PureCoherentState(self.coeffs)

    def isclose(self, other: "SchmidtState", atol: float = ATOL) -> bool:
        return self.as_coherent().isclose(other.as_coherent(), atol=atol)


def ent_intermediate(s: SchmidtState, atol: float = ATOL) -> SchmidtState:
    """Equalize the two leading Schmidt coefficients.

    Feasible when phi_1**2 <= 1/2 (non-strict, unlike the coherence
    side) and lambda_3 - lambda_4 >= lambda_1 - lambda_2 with
    lambda_{d+1} = 0.  The balancing coefficient phi_3' absorbs the
    weight moved onto position 2, leaving positions 4..d untouched.
    """
    d = s.dim
    if d < 3:
        raise Infeasible("dimension too small (d < 3)")
    lam = s.spectrum
    lam4 = float(lam[3]) if d >= 4 else 0.0
    if float(lam[0]) > 0.5 + atol:
        raise Infeasible("phi_1^2 > 1/2")
    if float(lam[2]) - lam4 < float(lam[0]) - float(lam[1]) - atol:
        raise Infeasible("phi_3^2 - phi_4^2 < phi_1^2 - phi_2^2")
    pp = 1.0 - 2.0 * float(lam[0]) - float(np.sum(lam[3:]))
    pp = min(max(pp, lam4), float(lam[0]))
    out = SchmidtState(
        np.concatenate([[s.coeffs[0], s.coeffs[0], math.sqrt(pp)], s.coeffs[3:]])
    )
    if not majorizes(out.as_coherent(), s.as_coherent(), atol=atol):
        raise AssertionError("intermediate state is not reachable deterministically")
    return out


def ent_distill(s: SchmidtState) -> OutcomeEnsemble:
    """No-waste ensemble of maximally entangled outcomes.

    Runs the measurement formulas on the intermediate state; the
    separable outcome has probability exactly zero, and outcome
    probabilities for dimensions 4..d match the single-step protocol on
    the source.
    """
    interm = ent_intermediate(s)
    ensemble = outcome_probabilities(interm.as_coherent())
    if ensemble.probs[0] != 0.0:
        raise AssertionError("separable outcome must have probability zero")
    source_probs = outcome_probabilities(s.as_coherent()).probs
    if s.dim >= 4 and np.any(
        np.abs(ensemble.probs[3:] - source_probs[3:]) > ATOL
    ):
        raise AssertionError("outcomes beyond dimension 3 must be unchanged")
    return ensemble


def max_distilled_entanglement(s: SchmidtState) -> float:
    """Largest expected entanglement yield, in nats.

    sum_j (lambda_j - lambda_{j+1}) * j * ln j with lambda_{d+1} = 0;
    equivalently the expected ln q over the outcome ensemble.  Uniform
    coefficients over d give ln d.
    """
    lam = s.spectrum
    nxt = np.concatenate([lam[1:], [0.0]])
    j = np.arange(1, s.dim + 1, dtype=float)
    return float(np.sum((lam - nxt) * j * np.log(j)))
