"""Derivative-free search for phase settings with a high noise threshold.

The landscape is smooth and periodic in 12 phases, but adding a constant to
any observable's phase triple is a gauge transformation that leaves all
probabilities unchanged, so only 8 coordinates matter. The search pins the
first phase of each triple at 0 and runs coordinate-wise ascent (coarse
periodic scan, then golden-section refinement) from random restarts, each
with its own deterministic random stream.

Two objectives are available. "lp" scores a setting by the true local-model
noise threshold. "analytic" scores the closed-form threshold of the signed
functional, maximized over all 6^4 outcome relabelings so that, like the LP,
it does not depend on how outcomes are labeled; the maximizing relabeling is
baked into the returned settings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .engine import (
    IDENTITY_RELABELING,
    PERMUTATIONS,
    PhaseSettings,
    experiment_probabilities,
)
from .inequality import JOINT_TERMS, analytic_threshold
from .lhv import min_noise_lp
from .simplex import SimplexFailure

GRID_POINTS = 12
COORDINATE_TOL = 1e-4
SWEEP_TOL = 1e-7
FREE_INDICES = (1, 2, 4, 5, 7, 8, 10, 11)

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizationResult:
    """Best settings found, their score, and the search's bookkeeping."""

    best_settings: PhaseSettings
    best_threshold: float
    evaluations: int
    seed: int


def threshold_objective(settings: PhaseSettings, method: str = "lp") -> float:
    """Noise threshold of one setting at zero noise, by either scorer.

    The settings are used exactly as given, relabeling included. The
    analytic score depends on that relabeling; the lp score does not.
    """
    exp0 = experiment_probabilities(settings)
    if method == "lp":
        return min_noise_lp(exp0).f_min
    if method == "analytic":
        return analytic_threshold(exp0).value
    raise ValueError(f"unknown method {method!r}")


def _inverse(perm: tuple[int, int, int]) -> tuple[int, int, int]:
    inv = [0, 0, 0]
    for position, image in enumerate(perm):
        inv[image - 1] = position + 1
    return tuple(inv)


_SIGNS = np.array([sign for (_, _, _, _, sign) in JOINT_TERMS] + [-1.0] * 4)
_GATHER_CACHE: tuple[list, np.ndarray] | None = None


def _relabel_gather() -> tuple[list, np.ndarray]:
    """Index table mapping each relabeling to the 16 probabilities it reads.

    The probability vector is tables.ravel() ++ alice_singles.ravel() ++
    bob_singles.ravel() (length 48). A relabeled table reads the original
    at the inverse-permuted outcome, so each of the 1296 relabelings is a
    fixed gather of 16 entries; scoring all of them is then one fancy-index
    plus one matrix product.
    """
    global _GATHER_CACHE
    if _GATHER_CACHE is None:
        combos = list(itertools.product(PERMUTATIONS, repeat=4))
        idx = np.empty((len(combos), 16), dtype=np.intp)
        for c, (pa1, pa2, pb1, pb2) in enumerate(combos):
            inv_a = (_inverse(pa1), _inverse(pa2))
            inv_b = (_inverse(pb1), _inverse(pb2))
            for t, (k, l, a, b, _sign) in enumerate(JOINT_TERMS):
                idx[c, t] = (
                    ((k - 1) * 2 + (l - 1)) * 9
                    + (inv_a[k - 1][a - 1] - 1) * 3
                    + (inv_b[l - 1][b - 1] - 1)
                )
            idx[c, 12] = 36 + inv_a[0][0] - 1
            idx[c, 13] = 36 + inv_a[0][1] - 1
            idx[c, 14] = 45 + inv_b[1][0] - 1
            idx[c, 15] = 45 + inv_b[1][1] - 1
        _GATHER_CACHE = (combos, idx)
    return _GATHER_CACHE


def _relabel_maxed_scores(exp0) -> np.ndarray:
    """Analytic threshold of every outcome relabeling, as a length-1296 array."""
    vec = np.concatenate(
        [exp0.tables.ravel(), exp0.alice_singles.ravel(), exp0.bob_singles.ravel()]
    )
    _, idx = _relabel_gather()
    gathered = vec[idx]
    lhs0 = gathered @ _SIGNS
    lhs1 = 2.0 / 3.0 - gathered[:, 12:].sum(axis=1)
    denom = lhs0 - lhs1
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = lhs0 / denom
    return np.where(
        lhs0 <= 0.0,
        0.0,
        np.where(denom <= 0.0, 1.0, np.clip(ratio, 0.0, 1.0)),
    )


def _refine_coordinate(fn, x: np.ndarray, index: int, current: float) -> float:
    """Maximize fn along one coordinate in place; returns the new best value."""
    step = 2.0 * np.pi / GRID_POINTS
    best_val, best_pos = current, x[index]
    origin = x[index]

    def consider(position: float) -> None:
        nonlocal best_val, best_pos
        x[index] = position
        value = fn(x)
        if value > best_val:
            best_val, best_pos = value, position

    for k in range(1, GRID_POINTS):
        consider(origin + k * step)
    lo, hi = best_pos - step, best_pos + step
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    x[index] = c
    fc = fn(x)
    if fc > best_val:
        best_val, best_pos = fc, c
    x[index] = d
    fd = fn(x)
    if fd > best_val:
        best_val, best_pos = fd, d
    while hi - lo > COORDINATE_TOL:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            x[index] = c
            fc = fn(x)
            if fc > best_val:
                best_val, best_pos = fc, c
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            x[index] = d
            fd = fn(x)
            if fd > best_val:
                best_val, best_pos = fd, d
    x[index] = best_pos
    return best_val


def _coordinate_ascent(fn, x: np.ndarray) -> float:
    current = fn(x)
    while True:
        sweep_start = current
        for index in FREE_INDICES:
            current = _refine_coordinate(fn, x, index, current)
        if current - sweep_start < SWEEP_TOL:
            return current


def _pin_gauge(phases: np.ndarray) -> np.ndarray:
    triples = phases.reshape(4, 3).copy()
    triples -= triples[:, :1]
    return triples.ravel()


def optimize(
    restarts: int,
    seed: int,
    method: str = "lp",
    initial_phases: PhaseSettings | None = None,
) -> OptimizationResult:
    """Multi-restart coordinate ascent over the 8 gauge-free phases.

    Restart r draws its starting point from a stream keyed by (seed, r),
    so results are reproducible and independent of evaluation interleaving.
    ``initial_phases`` replaces the random start of restart 0 only (the
    relabeling field of the given settings is ignored; gauge is re-pinned).
    A restart whose solve fails is skipped. Ties keep the earliest restart.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if method not in ("lp", "analytic"):
        raise ValueError(f"unknown method {method!r}")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")

    evaluations = 0

    def score(x: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        settings = PhaseSettings(x[:6].reshape(2, 3), x[6:].reshape(2, 3))
        exp0 = experiment_probabilities(settings)
        if method == "lp":
            return min_noise_lp(exp0).f_min
        return float(_relabel_maxed_scores(exp0).max())

    best_val = -np.inf
    best_x: np.ndarray | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        draw = rng.uniform(0.0, 2.0 * np.pi, size=12)
        if r == 0 and initial_phases is not None:
            draw = np.concatenate(
                [initial_phases.alice.ravel(), initial_phases.bob.ravel()]
            )
        x = _pin_gauge(draw)
        try:
            value = _coordinate_ascent(score, x)
        except (SimplexFailure, RuntimeError):
            continue
        if value > best_val:
            best_val, best_x = value, x.copy()

    if best_x is None:
        raise RuntimeError("every restart failed")
    alice = best_x[:6].reshape(2, 3)
    bob = best_x[6:].reshape(2, 3)
    relabel = IDENTITY_RELABELING
    if method == "analytic":
        scores = _relabel_maxed_scores(
            experiment_probabilities(PhaseSettings(alice, bob))
        )
        combos, _ = _relabel_gather()
        relabel = combos[int(np.argmax(scores))]
        best_val = float(scores.max())
    settings = PhaseSettings(alice, bob, relabel)
    return OptimizationResult(settings, float(best_val), evaluations, seed)
