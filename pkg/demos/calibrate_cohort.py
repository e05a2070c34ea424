"""Recover item parameters from a simulated two-form cohort.

Generates a linked-forms response matrix with known items, runs the
alternating calibration loop, and compares the estimates against the
generating values. Uses a reduced cohort so the demo finishes in a few
seconds; the defaults (732 students, 51 items) tighten every error.
"""

import numpy as np

from fuzzyirt import CohortSpec, GsConfig, gauss_seidel_estimate, generate_cohort


def main():
    spec = CohortSpec(n_students=240, n_items=21, items_per_form=13)
    items, thetas, matrix = generate_cohort(spec)
    print(f"cohort: {matrix.n_students} students x {matrix.n_items} items, "
          f"two forms of {spec.items_per_form} with {spec.common_items} shared")

    result = gauss_seidel_estimate(matrix, GsConfig(max_sweeps=30))
    print(f"stopped after {result.sweeps} sweeps; last item-parameter "
          f"changes: {[round(h, 4) for h in result.max_change_history[-3:]]}")

    true = np.array([[it.a, it.b, it.c] for it in items])
    est = np.array([[it.a, it.b, it.c] for it in result.items])
    mse = ((est - true) ** 2).mean(axis=0)
    print(f"MSE vs generating values: a={mse[0]:.4f} b={mse[1]:.4f} c={mse[2]:.4f}")

    corr = np.corrcoef(result.theta, thetas)[0, 1]
    print(f"ability correlation with truth: {corr:.3f}")

    print("\nfirst five items (true -> estimated):")
    for it_true, it_est in zip(items[:5], result.items[:5]):
        print(f"  a {it_true.a:.2f}->{it_est.a:.2f}  "
              f"b {it_true.b:+.2f}->{it_est.b:+.2f}  "
              f"c {it_true.c:.2f}->{it_est.c:.2f}")


if __name__ == "__main__":
    main()
