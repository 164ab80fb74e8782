"""Independent computation routes used to check the library.

Everything here re-derives its result from first principles (direct
summation, dense matrix accumulation, exhaustive grid search, stationary
conditions solved by 1-d root finding) and never calls back into the
code paths under test.
"""

import math

import numpy as np
from scipy.optimize import brentq


def l1_direct(squares) -> float:
    """Input coherence evaluated by direct summation of amplitudes."""
    return math.fsum(math.sqrt(x) for x in squares) ** 2 - 1.0


def probabilities_direct(squares) -> list:
    """Outcome probabilities by literal evaluation, one q at a time."""
    d = len(squares)
    out = []
    for q in range(1, d):
        out.append(q * (squares[q - 1] - squares[q]))
    out.append(d * squares[d - 1])
    return out


def avg_output_coherence_both_sides(squares) -> tuple:
    """(ensemble sum, closed form) of the average output coherence."""
    probs = probabilities_direct(squares)
    ensemble = math.fsum(p * (q - 1) for q, p in enumerate(probs, start=1))
    closed = 2.0 * math.fsum((i - 1) * x for i, x in enumerate(squares, start=1))
    return ensemble, closed


def loss_both_sides(squares) -> tuple:
    """(difference form, closed form) of the average coherence loss."""
    ens, _ = avg_output_coherence_both_sides(squares)
    difference = l1_direct(squares) - ens
    closed = (
        math.fsum(math.sqrt(x) for x in squares) ** 2
        - 2.0 * math.fsum(i * x for i, x in enumerate(squares, start=1))
        + 1.0
    )
    return difference, closed


def dense_channel_deviation(amps) -> float:
    """Completeness deviation by dense matrix accumulation.

    Rebuilds every measurement operator from scratch (probability
    formula included) and accumulates sum_q K_q^T K_q as dense matrices.
    """
    amps = list(map(float, amps))
    d = len(amps)
    sq = [a * a for a in amps]
    acc = np.zeros((d, d))
    for q in range(1, d + 1):
        p = d * sq[-1] if q == d else q * (sq[q - 1] - sq[q])
        K = np.zeros((d, d))
        if p > 0.0:
            for i in range(q):
                K[i, i] = math.sqrt(p / q) / amps[i]
        acc += K.T @ K
    return float(np.max(np.abs(acc - np.eye(d))))


def kraus_action_direct(amps, q) -> tuple:
    """(prob, normalized image) of operator q acting on its own source,
    via dense matrix-vector arithmetic."""
    amps = np.asarray(amps, dtype=float)
    d = amps.size
    sq = amps * amps
    p = d * sq[-1] if q == d else q * (sq[q - 1] - sq[q])
    K = np.zeros((d, d))
    if p > 0.0:
        for i in range(q):
            K[i, i] = math.sqrt(p / q) / amps[i]
    image = K @ amps
    prob = float(image @ image)
    if prob == 0.0:
        return 0.0, None
    return prob, image / math.sqrt(prob)


def max_entanglement_direct(spectrum) -> float:
    """Expected distilled entanglement as the outcome-weighted ln q."""
    probs = probabilities_direct(list(spectrum))
    return math.fsum(p * math.log(q) for q, p in enumerate(probs, start=1))


def grid_min_avg_coherence_d3(c_target, step=1e-3, band=2e-3) -> float:
    """Exhaustive search on the ordered 2-simplex of squared amplitudes.

    Enumerates all (i, j, k)/n with i >= j >= k >= 0, i + j + k = n,
    keeps points whose input coherence lies within ``band`` of the
    target, and returns the smallest average output coherence found.
    """
    n = round(1.0 / step)
    i = np.arange(math.ceil(n / 3), n + 1)
    j = np.arange(0, n + 1)
    ii, jj = np.meshgrid(i, j, indexing="ij")
    kk = n - ii - jj
    ok = (jj <= ii) & (kk >= 0) & (kk <= jj)
    x = np.stack([ii[ok], jj[ok], kk[ok]], axis=1) / float(n)
    psi = np.sqrt(x)
    c_in = psi.sum(axis=1) ** 2 - 1.0
    c_out = 2.0 * x[:, 1] + 4.0 * x[:, 2]
    in_band = np.abs(c_in - c_target) <= band
    if not np.any(in_band):
        raise RuntimeError("no grid point inside the constraint band")
    return float(np.min(c_out[in_band]))


def stationary_min_avg_coherence(d, c_target) -> float:
    """Minimum average output coherence from first-order conditions.

    For each support size r, the interior stationary point of
    minimizing sum_i 2(i-1) psi_i^2 subject to sum(psi) = s and
    sum(psi^2) = 1 has psi_i = t / (w_i - mu) with w_i = 2(i-1); mu is
    found by root finding and the best support wins.
    """
    s = math.sqrt(1.0 + c_target)
    best = math.inf
    for r in range(2, d + 1):
        if c_target >= r - 1:
            continue
        w = 2.0 * np.arange(r)

        def gap(mu):
            inv = 1.0 / (w - mu)
            t = 1.0 / math.sqrt(float(np.sum(inv * inv)))
            return t * float(np.sum(inv)) - s

        mu = brentq(gap, -1e12, -1e-12, xtol=1e-15, rtol=8.9e-16)
        inv = 1.0 / (w - mu)
        t = 1.0 / math.sqrt(float(np.sum(inv * inv)))
        psi = t * inv
        best = min(best, float(np.sum(w * psi * psi)))
    if not math.isfinite(best):
        raise RuntimeError("no stationary point for this target")
    return best
