"""Seeded Monte Carlo sampling of measurement outcomes.

Draws use a counter-based generator (Philox) advanced to fixed chunk
offsets, so the counts for a given (state, n, seed) are identical no
matter how the work is split across workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .protocol import outcome_probabilities
from .states import PureCoherentState

#: draws per chunk; must stay a multiple of 4 because the Philox counter
#: advances in blocks of four 64-bit outputs
_CHUNK = 1 << 16

_MAX_SEED = 1 << 64


def _chunk_counts(cdf: np.ndarray, seed: int, start: int, size: int, d: int) -> np.ndarray:
    bit = np.random.Philox(key=seed)
    bit.advance(start >> 2)
    u = np.random.Generator(bit).random(size)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=d)


def sample_outcomes(s: PureCoherentState, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """Draw n outcomes; returns counts indexed by q - 1.

    Identical (state, n, seed) give identical counts, for any positive
    ``workers``.  Zero-probability outcomes are never drawn.
    """
    if n < 1:
        raise ValueError("need at least one draw")
    if not (0 <= seed < _MAX_SEED):
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    if workers < 1:
        raise ValueError("workers must be positive")
    d = s.dim
    cdf = np.cumsum(outcome_probabilities(s).probs)
    cdf[-1] = 1.0  # guard the top edge against accumulated rounding
    starts = range(0, n, _CHUNK)
    jobs = [(start, min(_CHUNK, n - start)) for start in starts]
    if workers == 1 or len(jobs) == 1:
        parts = [_chunk_counts(cdf, seed, start, size, d) for start, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda job: _chunk_counts(cdf, seed, job[0], job[1], d), jobs)
            )
    return np.sum(parts, axis=0, dtype=np.int64)


def z_scores(counts: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Per-outcome z-scores of observed counts against expected probabilities.

    Entries with degenerate expectation (p = 0 or p = 1) have no finite
    standard error and are reported as NaN; callers should check those
    counts for an exact match instead.
    """
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    n = float(np.sum(counts))
    z = np.full(probs.shape, np.nan)
    ok = (probs > 0.0) & (probs < 1.0)
    sigma = np.sqrt(probs[ok] * (1.0 - probs[ok]) / n)
    z[ok] = (counts[ok] / n - probs[ok]) / sigma
    return z
