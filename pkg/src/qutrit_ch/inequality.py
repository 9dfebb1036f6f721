"""The Clauser-Horne-type functional for two three-outcome measurements.

The functional is a signed combination of twelve joint probabilities and four
single-detector probabilities. Local realistic models obey LHS <= 0; suitable
quantum settings violate this. ``ch_coefficients`` expands the functional over
the 81 deterministic local strategies, and ``ch_decomposition`` splits it into
two manifestly non-positive pieces plus a remainder whose deterministic values
never exceed the slack of the other two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import ATOMS, N_ATOMS, atom_index
from .engine import ExperimentProbabilities

# (alice_setting, bob_setting, alice_outcome, bob_outcome, sign),
# settings and outcomes 1-based
JOINT_TERMS: tuple[tuple[int, int, int, int, float], ...] = (
    # first group: joints at outcomes (2; 1)
    (1, 1, 2, 1, +1.0),
    (1, 2, 2, 1, +1.0),
    (2, 1, 2, 1, -1.0),
    (2, 2, 2, 1, +1.0),
    # second group: joints at outcomes (1; 2)
    (1, 1, 1, 2, +1.0),
    (1, 2, 1, 2, +1.0),
    (2, 1, 1, 2, -1.0),
    (2, 2, 1, 2, +1.0),
    # third group: mixed outcomes
    (1, 1, 2, 2, +1.0),
    (1, 2, 1, 1, +1.0),
    (2, 1, 2, 2, -1.0),
    (2, 2, 2, 2, +1.0),
)

# (side, setting, outcome, sign); all four singles enter with -1
SINGLE_TERMS: tuple[tuple[str, int, int, float], ...] = (
    ("alice", 1, 1, -1.0),
    ("alice", 1, 2, -1.0),
    ("bob", 2, 1, -1.0),
    ("bob", 2, 2, -1.0),
)


def ch_lhs(exp: ExperimentProbabilities) -> float:
    """Value of the functional on a full set of experiment probabilities."""
    total = 0.0
    for k, l, a, b, sign in JOINT_TERMS:
        total += sign * exp.tables[k - 1, l - 1, a - 1, b - 1]
    for side, k, a, sign in SINGLE_TERMS:
        row = exp.alice_singles if side == "alice" else exp.bob_singles
        total += sign * row[k - 1, a - 1]
    return float(total)


def deterministic_value(atom: tuple[int, int, int, int]) -> int:
    """Functional value on one deterministic strategy (a1, a2, b1, b2)."""
    a1, a2, b1, b2 = atom
    alice = (a1, a2)
    bob = (b1, b2)
    value = 0
    for k, l, a, b, sign in JOINT_TERMS:
        if alice[k - 1] == a and bob[l - 1] == b:
            value += int(sign)
    for side, k, a, sign in SINGLE_TERMS:
        outcome = alice[k - 1] if side == "alice" else bob[k - 1]
        if outcome == a:
            value += int(sign)
    return value


def ch_coefficients() -> np.ndarray:
    """Expansion of the functional over all 81 deterministic strategies.

    Entry i is the functional's value on ``ATOMS[i]``. Every entry is 0, -1
    or -2, which is the discrete form of the local bound: any convex mixture
    of strategies lands at or below zero.
    """
    coeffs = np.zeros(N_ATOMS)
    for atom in ATOMS:
        coeffs[atom_index(atom)] = deterministic_value(atom)
    return coeffs


def ch_decomposition() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split the deterministic expansion into two CH-type pieces + remainder.

    Returns (first, second, remainder), each a length-81 coefficient vector,
    summing to ``ch_coefficients()``. The first piece collects the joint
    terms at outcomes (2; 1) together with the alice single at outcome 2 and
    the bob single at outcome 1; the second takes the (1; 2) group with the
    complementary pair of singles; the remainder is the mixed-outcome group
    alone. The first two are bona fide two-outcome CH functionals, hence
    non-positive atom by atom; the remainder can reach +1 on its own but
    never beats the others' slack.
    """
    first = np.zeros(N_ATOMS)
    second = np.zeros(N_ATOMS)
    remainder = np.zeros(N_ATOMS)

    for atom in ATOMS:
        a1, a2, b1, b2 = atom
        alice = (a1, a2)
        bob = (b1, b2)
        i = atom_index(atom)
        for k, l, a, b, sign in JOINT_TERMS[0:4]:
            if alice[k - 1] == a and bob[l - 1] == b:
                first[i] += sign
        if a1 == 2:
            first[i] -= 1.0
        if b2 == 1:
            first[i] -= 1.0
        for k, l, a, b, sign in JOINT_TERMS[4:8]:
            if alice[k - 1] == a and bob[l - 1] == b:
                second[i] += sign
        if a1 == 1:
            second[i] -= 1.0
        if b2 == 2:
            second[i] -= 1.0
        for k, l, a, b, sign in JOINT_TERMS[8:12]:
            if alice[k - 1] == a and bob[l - 1] == b:
                remainder[i] += sign
    return first, second, remainder


@dataclass(frozen=True)
class ThresholdResult:
    """Noise threshold plus whether the noise-free point violates at all."""

    value: float
    violated: bool


def analytic_threshold(exp0: ExperimentProbabilities) -> ThresholdResult:
    """Largest admixture of uniform noise that still violates the bound.

    Mixing the joint tables with uniform noise at fraction f moves the
    functional linearly from its noise-free value L0 to its value L1 at
    f = 1, so the crossing is at L0 / (L0 - L1). Singles are unaffected by
    the mixing, which is why L1 is a constant of the functional itself
    (each joint term contributes sign/9).
    """
    lhs0 = ch_lhs(exp0)
    if lhs0 <= 0.0:
        return ThresholdResult(0.0, False)
    joint_sign_sum = sum(term[4] for term in JOINT_TERMS)
    singles_part = 0.0
    for side, k, a, sign in SINGLE_TERMS:
        row = exp0.alice_singles if side == "alice" else exp0.bob_singles
        singles_part += sign * row[k - 1, a - 1]
    lhs1 = joint_sign_sum / 9.0 + singles_part
    if lhs0 - lhs1 <= 0.0:
        # the fully mixed point still violates; no crossing inside [0, 1]
        return ThresholdResult(1.0, True)
    value = float(np.clip(lhs0 / (lhs0 - lhs1), 0.0, 1.0))
    return ThresholdResult(value, True)
