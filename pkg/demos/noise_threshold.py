# noise_threshold.py - how much white noise the violation survives
#
# Mixing the entangled state with the totally mixed state at fraction F moves
# the inequality value linearly from its noise-free maximum down through zero.
# But the functional crossing zero is not the whole story: a local model can
# exist before the value reaches zero. The honest boundary is where the linear
# program over the 81 deterministic strategies first becomes feasible. For the
# reference phases the two boundaries coincide and equal (11-6*sqrt(3))/2.
#
# usage: python3 demos/noise_threshold.py

import numpy as np

from qutrit_ch import (
    REFERENCE_NOISE_THRESHOLD,
    analytic_threshold,
    ch_lhs,
    experiment_probabilities,
    lhv_feasible,
    min_noise_bisection,
    min_noise_lp,
    mix_with_noise,
    reference_settings,
)


def main() -> None:
    exp0 = experiment_probabilities(reference_settings(), noise=0.0)

    print("sweep of the inequality value and local-model feasibility")
    print("   F      LHS        local model?")
    for f in np.linspace(0.0, 0.5, 11):
        noisy = mix_with_noise(exp0, float(f))
        value = ch_lhs(noisy)
        feasible = lhv_feasible(noisy)
        marker = "yes" if feasible else "no"
        print(f"  {f:4.2f}  {value:+.6f}   {marker}")
    print()

    analytic = analytic_threshold(exp0)
    print(f"analytic crossing of LHS = 0:      {analytic.value:.15f}")

    lp = min_noise_lp(exp0)
    print(f"direct LP minimum noise:           {lp.f_min:.15f}  ({lp.iterations} pivots)")

    bisect = min_noise_bisection(exp0)
    print(f"feasibility bisection:             {bisect.f_min:.15f}  ({bisect.iterations} pivots)")

    closed = REFERENCE_NOISE_THRESHOLD
    print(f"closed form (11 - 6*sqrt(3)) / 2:  {closed:.15f}")
    print()
    print(f"analytic vs closed form: {abs(analytic.value - closed):.3e}")
    print(f"LP vs closed form:       {abs(lp.f_min - closed):.3e}")
    print(f"bisection vs LP:         {abs(bisect.f_min - lp.f_min):.3e}")
    print()

    # the LP also returns a witness: an explicit mixture of deterministic
    # strategies that reproduces the noisy statistics at the boundary
    support = int(np.count_nonzero(lp.certificate > 1e-9))
    print(f"local model at the boundary mixes {support} of the 81 strategies")
    print("it reproduces all 36 joint probabilities at the threshold noise exactly")


if __name__ == "__main__":
    main()
