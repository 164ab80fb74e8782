"""The strictly incoherent measurement channel behind one-shot distillation.

A canonical d-level pure state is sent through a d-outcome measurement
whose operators are diagonal in the incoherent basis.  Outcome q occurs
with probability

    p_d = d * psi_d**2,
    p_q = q * (psi_q**2 - psi_{q+1}**2)     for q < d,

and leaves the system in the q-level maximally coherent state.  The
success probability of the full-dimension outcome saturates the optimal
conversion bound, which is what makes this channel worth building.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import ATOL, PureCoherentState, l1_coherence, _readonly

#: floating-point cancellation slack below which a negative probability
#: from nearly-equal amplitudes is clamped to zero
CLAMP_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class KrausOperator:
    """One diagonal measurement operator.

    ``level`` is the outcome dimension q; only the first q diagonal
    entries may be nonzero.  Diagonality in the incoherent basis makes
    the operator strictly incoherent by construction.
    """

    dim: int
    level: int
    diag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        if not (1 <= self.level <= self.dim):
            raise ValueError("level must lie in 1..dim")
        if diag.shape != (self.dim,):
            raise ValueError("diagonal length must equal dim")
        if not np.all(np.isfinite(diag)):
            raise ValueError("diagonal entries must be finite")
        if np.any(diag[self.level:] != 0.0):
            raise ValueError("entries beyond the outcome level must be zero")
        object.__setattr__(self, "diag", _readonly(diag))

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.diag == 0.0))

    def as_matrix(self) -> np.ndarray:
        """Dense matrix form; only needed for explicit channel verification."""
        return np.diag(self.diag)


@dataclass(frozen=True, eq=False)
class OutcomeEnsemble:
    """Outcome dimensions q with their probabilities.

    Probabilities are clamped nonnegative by the producer and must sum
    to 1 within ``ATOL``.
    """

    qs: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        qs = np.asarray(self.qs, dtype=int)
        probs = np.asarray(self.probs, dtype=float)
        if qs.shape != probs.shape or qs.ndim != 1 or qs.size < 1:
            raise ValueError("qs and probs must be equal-length 1-d arrays")
        if np.any(probs < 0.0):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(np.sum(probs)) - 1.0) > ATOL:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "qs", _readonly(qs).astype(int))
        object.__setattr__(self, "probs", _readonly(probs))

    @property
    def entries(self) -> tuple[tuple[int, float], ...]:
        return tuple((int(q), float(p)) for q, p in zip(self.qs, self.probs))

    def prob_of(self, q: int) -> float:
        idx = np.nonzero(self.qs == q)[0]
        if idx.size == 0:
            raise KeyError(f"no outcome with dimension {q}")
        return float(self.probs[idx[0]])


@dataclass(frozen=True, eq=False)
class DistillationChannel:
    """Ordered family K_1..K_d of diagonal measurement operators.

    Operators are stored as the rows of a (d, d) diagonal stack; the
    :attr:`kraus` view materializes them as :class:`KrausOperator`
    values on first use.  On the support of the source state the
    operators resolve the identity: sum_q K_q^dag K_q restricted to the
    first r basis states (r = support size) equals the identity within
    ``ATOL``.  For a full-support source this is the usual completeness
    relation.
    """

    dim: int
    diags: np.ndarray
    source: PureCoherentState

    def __post_init__(self):
        diags = np.asarray(self.diags, dtype=float)
        if diags.shape != (self.dim, self.dim):
            raise ValueError("need exactly one diagonal per outcome dimension")
        if np.any(np.triu(diags, 1) != 0.0):
            raise ValueError("operators must vanish beyond their outcome level")
        support = int(np.count_nonzero(self.source.amps > 0.0))
        cols = np.sum(diags * diags, axis=0)
        if np.any(np.abs(cols[:support] - 1.0) > ATOL):
            raise ValueError("channel is not complete on the source support")
        if np.any(cols[support:] != 0.0):
            raise ValueError("channel acts outside the source support")
        object.__setattr__(self, "diags", _readonly(diags))

    @property
    def kraus(self) -> tuple[KrausOperator, ...]:
        """The operators K_1..K_d, ordered by outcome level."""
        cached = self.__dict__.get("_kraus")
        if cached is None:
            cached = tuple(
                KrausOperator(dim=self.dim, level=q, diag=self.diags[q - 1])
                for q in range(1, self.dim + 1)
            )
            self.__dict__["_kraus"] = cached
        return cached

    def diag_stack(self) -> np.ndarray:
        """(d, d) array whose row q-1 is the diagonal of K_q."""
        return self.diags


@dataclass(frozen=True)
class ChannelReport:
    """Result of explicit channel verification."""

    completeness_deviation: float
    sio_ok: bool
    sio_offdiagonal: float

    def as_dict(self) -> dict:
        return {
            "completeness_deviation": self.completeness_deviation,
            "sio_ok": self.sio_ok,
            "sio_offdiagonal": self.sio_offdiagonal,
        }


def outcome_probabilities(s: PureCoherentState) -> OutcomeEnsemble:
    """Probability of each outcome dimension q = 1..d for the given state."""
    sq = s.squared
    d = s.dim
    p = np.empty(d)
    if d > 1:
        p[: d - 1] = np.arange(1, d) * (sq[: d - 1] - sq[1:])
    p[d - 1] = d * sq[d - 1]
    neg = p < 0.0
    if np.any(p[neg] < -CLAMP_TOL):
        raise ValueError("outcome probability below the clamping tolerance")
    p[neg] = 0.0
    return OutcomeEnsemble(np.arange(1, d + 1), p)


def build_channel(s: PureCoherentState) -> DistillationChannel:
    """Construct the measurement channel tailored to the given state.

    K_q has diagonal entries sqrt(p_q / q) / psi_i for i <= q.  When
    p_q = 0 the operator is the zero operator; the division by a zero
    amplitude is never evaluated.
    """
    d = s.dim
    amps = s.amps
    p = outcome_probabilities(s).probs
    scale = np.sqrt(p / np.arange(1, d + 1, dtype=float))
    inv = np.divide(1.0, amps, out=np.full(d, np.inf), where=amps > 0.0)
    with np.errstate(invalid="ignore"):  # 0 * inf rows are zeroed just below
        stack = scale[:, None] * inv[None, :]
    stack[np.triu_indices(d, 1)] = 0.0
    stack[p == 0.0, :] = 0.0
    if not np.all(np.isfinite(stack)):
        raise ValueError("state support too small")
    return DistillationChannel(dim=d, diags=stack, source=s)


def apply_kraus(k: KrausOperator, s: PureCoherentState):
    """Apply one measurement operator to a state.

    Returns ``(prob, post)`` where prob is the squared norm of the
    unnormalized image and post is the normalized image in canonical
    form.  A zero image has no outcome: returns ``(0.0, None)``.
    """
    if k.dim != s.dim:
        raise ValueError("operator and state dimensions differ")
    image = k.diag * s.amps
    prob = float(image @ image)
    if prob == 0.0:
        return 0.0, None
    post = PureCoherentState(np.sort(image, kind="stable")[::-1])
    return prob, post


def verify_sio(channel, atol: float = ATOL) -> ChannelReport:
    """Explicitly check completeness and strict incoherence.

    Accepts a :class:`DistillationChannel` or a bare sequence of
    :class:`KrausOperator` (useful for fault injection).  Dense matrices
    are materialized here and nowhere else.  The strict-incoherence
    check verifies that K |i><i| K^dag and K^dag |i><i| K are diagonal
    for every operator K and every basis index i.
    """
    if isinstance(channel, DistillationChannel):
        d = channel.dim
        mats = np.zeros((d, d, d))
        idx = np.arange(d)
        mats[:, idx, idx] = channel.diag_stack()
    else:
        ops = tuple(channel)
        d = ops[0].dim
        mats = np.stack([np.asarray(k.as_matrix(), dtype=float) for k in ops])
    gram = np.einsum("qji,qjk->ik", mats, mats)
    deviation = float(np.max(np.abs(gram - np.eye(d))))
    # K |i><i| K^dag = (col_i)(col_i)^T and K^dag |i><i| K = (row_i)(row_i)^T;
    # their largest off-diagonal entry is the product of the two largest
    # magnitudes of the column (resp. row)
    if d > 1:
        a = np.abs(mats)
        top_cols = np.partition(a, d - 2, axis=1)[:, d - 2:, :]
        top_rows = np.partition(a, d - 2, axis=2)[:, :, d - 2:]
        offdiag = max(
            float(np.max(top_cols[:, 0, :] * top_cols[:, 1, :])),
            float(np.max(top_rows[:, :, 0] * top_rows[:, :, 1])),
        )
    else:
        offdiag = 0.0
    return ChannelReport(
        completeness_deviation=deviation,
        sio_ok=offdiag <= atol,
        sio_offdiagonal=offdiag,
    )


def max_success_probability(s: PureCoherentState) -> float:
    """Optimal probability of reaching the d-level maximally coherent state.

    Computed as the explicit minimum over k of
    d * sum_{i>=k} psi_i**2 / (d - k + 1); for canonical input this
    minimum equals the closed form d * psi_d**2, which is asserted.
    """
    sq = s.squared
    d = s.dim
    tails = np.cumsum(sq[::-1])[::-1]
    vals = d * tails / (d - np.arange(1, d + 1) + 1.0)
    m = float(np.min(vals))
    closed = d * float(sq[-1])
    if abs(m - closed) > ATOL:
        raise AssertionError("min-over-k formula disagrees with d*psi_d^2")
    return m


def average_output_coherence(s: PureCoherentState) -> float:
    """Expected l1 coherence of the measurement output ensemble.

    Evaluated both as sum_q p_q (q - 1) and as the closed form
    2 * sum_i (i - 1) psi_i**2; the two must agree within ``ATOL``.
    """
    probs = outcome_probabilities(s).probs
    d = s.dim
    ensemble_side = float(np.sum(probs * np.arange(0, d)))
    closed = 2.0 * float(np.sum(np.arange(0, d) * s.squared))
    if abs(ensemble_side - closed) > ATOL:
        raise AssertionError("ensemble average disagrees with its closed form")
    return closed


def coherence_loss(s: PureCoherentState) -> float:
    """Average coherence lost by the measurement, always >= 0.

    Difference of input coherence and average output coherence; checked
    against the closed form (sum_i psi_i)^2 - 2 sum_i i psi_i**2 + 1.
    Vanishes exactly when the state is uniform over its support.
    """
    direct = l1_coherence(s) - average_output_coherence(s)
    closed = (
        float(np.sum(s.amps)) ** 2
        - 2.0 * float(np.sum(np.arange(1, s.dim + 1) * s.squared))
        + 1.0
    )
    if abs(direct - closed) > ATOL:
        raise AssertionError("loss closed form disagrees with the direct difference")
    if direct < -ATOL:
        raise AssertionError("coherence loss must be nonnegative")
    return max(closed, 0.0)
