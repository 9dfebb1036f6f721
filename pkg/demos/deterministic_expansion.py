# deterministic_expansion.py - the inequality holds because 81 integers are never positive
#
# Every local realistic theory is a mixture of 81 deterministic strategies
# (a1, a2, b1, b2), each component in {1, 2, 3}. On a mixture the functional
# is linear, so its maximum over local models is the maximum over strategies.
# This script expands the functional over all 81 strategies, prints the value
# census, exhibits the worst offenders, and shows the three-part decomposition
# that makes non-positivity obvious by inspection.
#
# usage: python3 demos/deterministic_expansion.py

from collections import Counter

import numpy as np

from qutrit_ch import (
    ATOMS,
    atom_index,
    ch_coefficients,
    ch_decomposition,
    deterministic_value,
)


def main() -> None:
    coeffs = ch_coefficients()
    values = [int(v) for v in coeffs]

    print("value census over the 81 deterministic strategies")
    census = Counter(values)
    for value in sorted(census, reverse=True):
        print(f"  value {value:+d}: {census[value]:2d} strategies")
    print(f"  total sum: {sum(values)}")
    print(f"  maximum:   {max(values)}  (never positive: the local bound)")
    print()

    print("strategies attaining each value class (a1, a2, b1, b2)")
    for target in (0, -1, -2):
        atoms = [atom for atom in ATOMS if values[atom_index(atom)] == target]
        shown = ", ".join(str(a) for a in atoms[:6])
        more = "" if len(atoms) <= 6 else f", ... ({len(atoms)} total)"
        print(f"  value {target:+d}: {shown}{more}")
    print()

    first, second, remainder = ch_decomposition()
    print("decomposition into two two-outcome functionals plus a remainder")
    print(f"  part 1 maximum over strategies: {first.max():+.0f}  (a CH-type functional, <= 0)")
    print(f"  part 2 maximum over strategies: {second.max():+.0f}  (a CH-type functional, <= 0)")
    print(f"  remainder maximum:              {remainder.max():+.0f}  (can be positive alone)")
    identity_err = float(np.abs(first + second + remainder - coeffs).max())
    print(f"  recombination error:            {identity_err:.3e}")
    print()

    # where the remainder is positive, at least one CH part pays for it
    paying = [
        atom
        for atom in ATOMS
        if remainder[atom_index(atom)] > 0
        and first[atom_index(atom)] + second[atom_index(atom)] < 0
    ]
    positive = [atom for atom in ATOMS if remainder[atom_index(atom)] > 0]
    print(f"strategies where the remainder is +1: {len(positive)}")
    print(f"of those, covered by slack in parts 1 + 2: {len(paying)}")
    print()

    worst = [atom for atom in ATOMS if deterministic_value(atom) == -2]
    print("the three strategies deepest inside the local region:", worst)


if __name__ == "__main__":
    main()
