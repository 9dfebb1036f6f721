"""Exact outcome statistics for two entangled qutrits measured behind
tritters.

The source emits the maximally entangled state (|11> + |22> + |33>)/sqrt(3),
optionally mixed with a fraction F of white noise (the maximally mixed
two-qutrit state). Each observer selects a trichotomic observable by dialing
three phase shifts in front of a tritter, an unbiased three-input,
three-output beamsplitter, and records which output port fires. Everything
here is a pure function of its inputs; returned arrays are marked read-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

CUBE_ROOT_OF_UNITY = np.exp(2j * np.pi / 3)

# all outcome permutations as images of (1, 2, 3), in lexicographic order
PERMUTATIONS: tuple[tuple[int, int, int], ...] = tuple(
    itertools.permutations((1, 2, 3))
)
IDENTITY_RELABELING = ((1, 2, 3), (1, 2, 3), (1, 2, 3), (1, 2, 3))

UNITARITY_TOL = 1e-9
_CLAMP_TOL = 1e-12


def tritter_matrix() -> np.ndarray:
    """Transition matrix of the unbiased six-port beamsplitter.

    Entry (k, l) is alpha^(k-1)(l-1) / sqrt(3) with alpha the primitive cube
    root of unity, i.e. the 3x3 discrete Fourier matrix scaled to unitarity.
    """
    k, l = np.indices((3, 3))
    t = CUBE_ROOT_OF_UNITY ** (k * l) / np.sqrt(3.0)
    t.setflags(write=False)
    return t


def observable_unitary(phases: np.ndarray) -> np.ndarray:
    """Tritter preceded by one phase shifter per input port.

    Column l of the tritter picks up exp(i * phases[l]); the three phases are
    the observer's controllable setting for one trichotomic observable.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (3,):
        raise ValueError(f"expected 3 phases, got shape {phases.shape}")
    if not np.all(np.isfinite(phases)):
        raise ValueError("phases must be finite")
    u = tritter_matrix() * np.exp(1j * phases)[None, :]
    u.setflags(write=False)
    return u


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return bool(np.max(np.abs(m @ m.conj().T - np.eye(3))) <= tol)


def _require_unitary(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_unitary(m, tol=UNITARITY_TOL):
        raise ValueError(f"{name} is not unitary within {UNITARITY_TOL}")
    return m


def _check_noise(noise: float) -> float:
    noise = float(noise)
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise fraction must lie in [0, 1], got {noise}")
    return noise


def _clamp01(p: np.ndarray) -> np.ndarray:
    if p.min() < -_CLAMP_TOL or p.max() > 1.0 + _CLAMP_TOL:
        raise RuntimeError(
            f"probability outside [0, 1] beyond tolerance: range "
            f"[{p.min()}, {p.max()}]"
        )
    return np.clip(p, 0.0, 1.0)


def joint_table(ua: np.ndarray, ub: np.ndarray, noise: float = 0.0) -> np.ndarray:
    """Joint outcome probabilities for one pair of analyzers.

    The amplitude for coincidence (a, b) on the maximally entangled state is
    sum_m ua[a, m] * ub[b, m] / sqrt(3); white noise mixes the resulting table
    with the flat 1/9 background:

        p[a, b] = (1 - noise) * |amp|^2 + noise / 9
    """
    ua = _require_unitary(ua, "ua")
    ub = _require_unitary(ub, "ub")
    noise = _check_noise(noise)
    amp = ua @ ub.T / np.sqrt(3.0)
    p = (1.0 - noise) * np.abs(amp) ** 2 + noise / 9.0
    return _clamp01(p)


def singles(u: np.ndarray) -> np.ndarray:
    """Single-observer outcome probabilities behind one analyzer.

    The reduced state of either qutrit is maximally mixed, so the result is
    (1/3, 1/3, 1/3) for every unitary; computed as the actual Born-rule trace
    rather than returned as a constant so the invariance stays testable.
    """
    u = _require_unitary(u, "u")
    return _clamp01(np.sum(np.abs(u) ** 2, axis=1) / 3.0)


def _validate_relabeling(relabel) -> tuple[tuple[int, int, int], ...]:
    relabel = tuple(tuple(int(x) for x in perm) for perm in relabel)
    if len(relabel) != 4:
        raise ValueError("relabel must give one permutation per observable")
    for perm in relabel:
        if sorted(perm) != [1, 2, 3]:
            raise ValueError(f"relabel entry {perm} is not a permutation of (1, 2, 3)")
    return relabel


@dataclass(frozen=True)
class PhaseSettings:
    """Two phase triples per observer plus optional outcome relabelings.

    ``relabel`` lists one permutation (images of (1, 2, 3)) per observable in
    the order A1, A2, B1, B2; outcome a of observable A_k is reported as
    relabel[k-1][a-1].
    """

    alice: np.ndarray  # (2, 3) radians
    bob: np.ndarray  # (2, 3) radians
    relabel: tuple = IDENTITY_RELABELING

    def __post_init__(self):
        # copy so freezing never makes a caller's own array read-only
        alice = np.array(self.alice, dtype=float)
        bob = np.array(self.bob, dtype=float)
        if alice.shape != (2, 3) or bob.shape != (2, 3):
            raise ValueError("each observer needs exactly two triples of phases")
        if not (np.all(np.isfinite(alice)) and np.all(np.isfinite(bob))):
            raise ValueError("phases must be finite")
        alice.setflags(write=False)
        bob.setflags(write=False)
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)
        object.__setattr__(self, "relabel", _validate_relabeling(self.relabel))


@dataclass(frozen=True)
class ExperimentProbabilities:
    """All probabilities one run of the four-setting experiment predicts.

    ``tables[k-1, l-1]`` is the 3x3 joint distribution for settings (k, l);
    ``alice_singles[k-1]`` and ``bob_singles[l-1]`` are the corresponding
    one-observer distributions.
    """

    tables: np.ndarray  # (2, 2, 3, 3)
    alice_singles: np.ndarray  # (2, 3)
    bob_singles: np.ndarray  # (2, 3)

    def __post_init__(self):
        tables = np.asarray(self.tables, dtype=float)
        alice = np.asarray(self.alice_singles, dtype=float)
        bob = np.asarray(self.bob_singles, dtype=float)
        if tables.shape != (2, 2, 3, 3):
            raise ValueError(f"tables must have shape (2, 2, 3, 3), got {tables.shape}")
        if alice.shape != (2, 3) or bob.shape != (2, 3):
            raise ValueError("singles must have shape (2, 3) per observer")
        # tiny negatives from floating-point cancellation are clamped away
        tables = np.where((tables < 0) & (tables >= -_CLAMP_TOL), 0.0, tables)
        alice = np.where((alice < 0) & (alice >= -_CLAMP_TOL), 0.0, alice)
        bob = np.where((bob < 0) & (bob >= -_CLAMP_TOL), 0.0, bob)
        for arr, name in ((tables, "tables"), (alice, "alice_singles"), (bob, "bob_singles")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def validate(self, tol: float = 1e-10) -> None:
        """Raise ValueError unless normalization and no-signaling hold."""
        if self.tables.min() < 0:
            raise ValueError("negative joint probability")
        sums = self.tables.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > tol:
            raise ValueError("joint tables must each sum to 1")
        for s, name in ((self.alice_singles, "alice"), (self.bob_singles, "bob")):
            if np.max(np.abs(s.sum(axis=1) - 1.0)) > tol:
                raise ValueError(f"{name} singles must sum to 1")
        # marginals of every table must be setting-independent and match singles
        row = self.tables.sum(axis=3)  # (k, l, a)
        col = self.tables.sum(axis=2)  # (k, l, b)
        for k, l in itertools.product(range(2), range(2)):
            if np.max(np.abs(row[k, l] - self.alice_singles[k])) > tol:
                raise ValueError(f"no-signaling violated for table {k + 1}{l + 1} rows")
            if np.max(np.abs(col[k, l] - self.bob_singles[l])) > tol:
                raise ValueError(f"no-signaling violated for table {k + 1}{l + 1} columns")


def _permute_table(table: np.ndarray, row_perm, col_perm) -> np.ndarray:
    out = np.empty_like(table)
    rows = np.asarray(row_perm) - 1
    cols = np.asarray(col_perm) - 1
    out[np.ix_(rows, cols)] = table
    return out


def apply_relabeling(exp: ExperimentProbabilities, relabel) -> ExperimentProbabilities:
    """Rename outcomes of each observable consistently across all tables.

    With perms (pa1, pa2, pb1, pb2), entry (a, b) of table (k, l) moves to
    (pa_k[a], pb_l[b]), and singles entries move the same way.
    """
    pa1, pa2, pb1, pb2 = _validate_relabeling(relabel)
    pa = (pa1, pa2)
    pb = (pb1, pb2)
    tables = np.empty_like(exp.tables)
    alice = np.empty_like(exp.alice_singles)
    bob = np.empty_like(exp.bob_singles)
    for k, l in itertools.product(range(2), range(2)):
        tables[k, l] = _permute_table(exp.tables[k, l], pa[k], pb[l])
    for k in range(2):
        alice[k, np.asarray(pa[k]) - 1] = exp.alice_singles[k]
        bob[k, np.asarray(pb[k]) - 1] = exp.bob_singles[k]
    return ExperimentProbabilities(tables, alice, bob)


def mix_with_noise(exp: ExperimentProbabilities, noise: float) -> ExperimentProbabilities:
    """Admix a fraction ``noise`` of the flat background into every joint
    table; singles are unaffected because the noise state is unbiased."""
    noise = _check_noise(noise)
    tables = (1.0 - noise) * exp.tables + noise / 9.0
    return ExperimentProbabilities(tables, exp.alice_singles, exp.bob_singles)


def experiment_probabilities(
    settings: PhaseSettings, noise: float = 0.0
) -> ExperimentProbabilities:
    """Joint tables and singles for all four setting pairs, relabeled per
    ``settings.relabel``."""
    noise = _check_noise(noise)
    ua = [observable_unitary(settings.alice[k]) for k in range(2)]
    ub = [observable_unitary(settings.bob[l]) for l in range(2)]
    tables = np.empty((2, 2, 3, 3))
    for k, l in itertools.product(range(2), range(2)):
        tables[k, l] = joint_table(ua[k], ub[l], noise)
    alice = np.stack([singles(u) for u in ua])
    bob = np.stack([singles(u) for u in ub])
    exp = ExperimentProbabilities(tables, alice, bob)
    if settings.relabel == IDENTITY_RELABELING:
        return exp
    return apply_relabeling(exp, settings.relabel)


def find_matching_relabeling(
    computed: ExperimentProbabilities,
    target: ExperimentProbabilities,
    tol: float = 1e-9,
) -> tuple | None:
    """Search all 6^4 outcome relabelings for one mapping ``computed`` onto
    ``target``.

    Returns the first matching 4-tuple of permutations in lexicographic order
    (A1 most significant), or None when no relabeling reconciles the two sets
    of joint tables within ``tol``.
    """
    for tup in itertools.product(PERMUTATIONS, repeat=4):
        relabeled = apply_relabeling(computed, tup)
        if np.max(np.abs(relabeled.tables - target.tables)) <= tol:
            return tup
    return None
