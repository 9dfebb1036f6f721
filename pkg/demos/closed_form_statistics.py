# closed_form_statistics.py - exact joint statistics of the reference phase choice
#
# Two observers each pick one of two trichotomic observables, realized as a
# three-port interferometer (discrete Fourier mixer) behind per-port phase
# shifters, acting on a maximally entangled pair of three-level systems.
# For the reference phases every joint probability takes one of just three
# values: 1/27, (4-2*sqrt(3))/27 or (4+2*sqrt(3))/27, arranged by the residue
# (a+b) mod 3 of the two outcomes. This script computes the tables from the
# unitaries and checks them against the closed form.
#
# usage: python3 demos/closed_form_statistics.py

import numpy as np

from qutrit_ch import (
    experiment_probabilities,
    reference_joint_tables,
    reference_settings,
)

LOW = 1.0 / 27.0
MINUS = (4.0 - 2.0 * np.sqrt(3.0)) / 27.0
PLUS = (4.0 + 2.0 * np.sqrt(3.0)) / 27.0


def classify(value: float) -> str:
    for name, target in (("1/27", LOW), ("(4-2r3)/27", MINUS), ("(4+2r3)/27", PLUS)):
        if abs(value - target) < 1e-12:
            return name
    return "?!"


def main() -> None:
    settings = reference_settings()
    exp = experiment_probabilities(settings, noise=0.0)
    closed = reference_joint_tables()

    print("reference phases (radians)")
    print("  observer A:", np.array2string(settings.alice, precision=6))
    print("  observer B:", np.array2string(settings.bob, precision=6))
    print("  outcome relabeling:", settings.relabel)
    print()

    worst = 0.0
    for k in range(2):
        for l in range(2):
            print(f"joint table for settings ({k + 1}, {l + 1}):  P(a, b)")
            table = exp.tables[k, l]
            for a in range(3):
                cells = []
                for b in range(3):
                    cells.append(f"{table[a, b]:.9f} = {classify(table[a, b]):>11s}")
                print("   " + "   ".join(cells))
            worst = max(worst, float(np.abs(table - closed[k, l]).max()))
            print()

    print(f"largest deviation from the closed-form table: {worst:.3e}")
    print()

    singles_err = max(
        float(np.abs(exp.alice_singles - 1.0 / 3.0).max()),
        float(np.abs(exp.bob_singles - 1.0 / 3.0).max()),
    )
    print("single-detector probabilities (all should be exactly 1/3):")
    print("  observer A:", np.array2string(exp.alice_singles, precision=12))
    print("  observer B:", np.array2string(exp.bob_singles, precision=12))
    print(f"  largest deviation from 1/3: {singles_err:.3e}")
    print()

    # the residue structure: within one table, P(a, b) only depends on (a+b) mod 3
    print("residue structure, table (1, 1): value class by (a+b) mod 3")
    table = exp.tables[0, 0]
    for residue in range(3):
        values = [table[a, b] for a in range(3) for b in range(3) if (a + b) % 3 == residue]
        spread = max(values) - min(values)
        print(f"  (a+b) mod 3 = {residue}: {classify(values[0]):>11s}, spread {spread:.2e}")


if __name__ == "__main__":
    main()
