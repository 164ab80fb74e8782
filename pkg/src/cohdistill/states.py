"""Pure coherent states in canonical form, plus the majorization calculus.

Everything downstream (channel construction, the no-waste preprocessing,
the entanglement adapter) consumes states in canonical form: real,
nonnegative amplitudes sorted in nonincreasing order with unit 2-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: absolute tolerance on internal numerical identities
ATOL = 1e-12
#: tolerance accepted on human-entered data before renormalization
INPUT_ATOL = 1e-9

_TWO_PI = 2.0 * math.pi


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RawPureState:
    """A pure state as entered: per-entry magnitude and phase.

    Phases are removable by free diagonal unitaries, so they survive only
    until :func:`canonicalize` drops them.  Any real phase is accepted and
    folded into [0, 2*pi).
    """

    magnitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        mags = np.asarray(self.magnitudes, dtype=float)
        phases = np.asarray(self.phases, dtype=float)
        if mags.ndim != 1 or mags.size < 1:
            raise ValueError("need at least one entry")
        if phases.shape != mags.shape:
            raise ValueError("magnitudes and phases must have equal length")
        if not np.all(np.isfinite(mags)) or not np.all(np.isfinite(phases)):
            raise ValueError("entries must be finite")
        if np.any(mags < 0.0):
            raise ValueError("magnitudes must be nonnegative")
        total = float(np.sum(mags * mags))
        if total == 0.0:
            raise ValueError("null state")
        if abs(total - 1.0) > INPUT_ATOL:
            raise ValueError(
                f"squared magnitudes sum to {total!r}, not 1 within {INPUT_ATOL}"
            )
        object.__setattr__(self, "magnitudes", _readonly(mags))
        object.__setattr__(self, "phases", _readonly(np.mod(phases, _TWO_PI)))

    @classmethod
    def from_pairs(cls, pairs) -> "RawPureState":
        """Build from an iterable of (magnitude, phase) pairs."""
        pairs = list(pairs)
        if not pairs:
            raise ValueError("need at least one entry")
        mags = [p[0] for p in pairs]
        phases = [p[1] for p in pairs]
        return cls(np.asarray(mags, dtype=float), np.asarray(phases, dtype=float))

    @property
    def dim(self) -> int:
        return int(self.magnitudes.size)


@dataclass(frozen=True, eq=False)
class PureCoherentState:
    """Canonical pure state: amplitudes psi_1 >= psi_2 >= ... >= 0, unit norm.

    Construction renormalizes the given amplitudes and then asserts unit
    norm to within ``ATOL``.  Zero amplitudes are retained; the dimension
    is explicit, never inferred from the support.
    """

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=float)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("need at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if np.any(amps < 0.0):
            raise ValueError("amplitudes must be nonnegative")
        if np.any(np.diff(amps) > 0.0):
            raise ValueError("amplitudes must be nonincreasing")
        norm = math.sqrt(float(amps @ amps))
        if norm == 0.0:
            raise ValueError("null state")
        if abs(norm - 1.0) > 1e-15:  # keep construction idempotent on unit vectors
            amps = amps / norm
        if abs(float(amps @ amps) - 1.0) > ATOL:
            raise ValueError("renormalization failed to reach unit norm")
        object.__setattr__(self, "amps", _readonly(amps))

    @property
    def dim(self) -> int:
        return int(self.amps.size)

    @property
    def squared(self) -> np.ndarray:
        """Squared amplitudes (the incoherent-basis populations)."""
        return self.amps * self.amps

    def padded(self, dim: int) -> "PureCoherentState":
        """Same state embedded in a larger space with trailing zeros."""
        if dim < self.dim:
            raise ValueError("cannot pad to a smaller dimension")
        if dim == self.dim:
            return self
        return PureCoherentState(np.concatenate([self.amps, np.zeros(dim - self.dim)]))

    def isclose(self, other: "PureCoherentState", atol: float = ATOL) -> bool:
        """Entrywise amplitude comparison after padding to a common dimension."""
        d = max(self.dim, other.dim)
        a = self.padded(d).amps
        b = other.padded(d).amps
        return bool(np.all(np.abs(a - b) <= atol))


def canonicalize(raw: RawPureState) -> PureCoherentState:
    """Drop phases, sort magnitudes nonincreasing, renormalize.

    Sorting is stable: equal magnitudes keep their input order.  The
    multiset of magnitudes is preserved up to the global renormalization.
    """
    mags = raw.magnitudes
    if not np.any(mags > 0.0):
        raise ValueError("null state")
    order = np.argsort(-mags, kind="stable")
    return PureCoherentState(mags[order])


def max_coherent(d: int) -> PureCoherentState:
    """The d-level maximally coherent state: every amplitude 1/sqrt(d)."""
    if d < 1:
        raise ValueError("dimension must be a positive integer")
    return PureCoherentState(np.full(d, d ** -0.5))


def l1_coherence(s: PureCoherentState) -> float:
    """l1 norm of coherence of a canonical pure state: (sum_i psi_i)^2 - 1.

    Ranges over [0, d-1]; equals d-1 exactly for the maximally coherent
    state and 0 for a basis state.
    """
    value = float(np.sum(s.amps)) ** 2 - 1.0
    return max(value, 0.0)


def harmonic_power_state(d: int, alpha: float) -> PureCoherentState:
    """State with amplitudes proportional to i**(-alpha), i = 1..d.

    The normalization constant is the generalized harmonic number
    H_d of order 2*alpha, so psi_i = i**(-alpha) / sqrt(H_d).
    alpha = 0 gives the maximally coherent state; large alpha
    concentrates all weight on the first basis state.
    """
    if d < 1:
        raise ValueError("dimension must be a positive integer")
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise ValueError("alpha must be finite and nonnegative")
    i = np.arange(1, d + 1, dtype=float)
    return PureCoherentState(i ** (-alpha))


def majorizes(x: PureCoherentState, y: PureCoherentState, atol: float = ATOL) -> bool:
    """True iff x's squared-amplitude vector majorizes y's.

    Vectors of unequal dimension are padded with zero amplitudes.  The
    deterministic transformation y -> x by incoherent operations is
    feasible exactly when this holds.
    """
    d = max(x.dim, y.dim)
    cx = np.cumsum(x.padded(d).squared)
    cy = np.cumsum(y.padded(d).squared)
    return bool(np.all(cx >= cy - atol))
