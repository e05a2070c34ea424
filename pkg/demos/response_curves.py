"""Walk through the 3PL building blocks on the bundled item bank.

Prints response probabilities, information curves and the reporting
scale so you can see how a raw ability maps to a T-score band.
"""

import numpy as np

from fuzzyirt import (
    demo_item_bank,
    icc_probability,
    item_information,
    performance_level,
    t_score,
    test_information,
    test_standard_error,
)


def main():
    bank = demo_item_bank()
    print(f"bundled bank: {len(bank)} items")
    print(f"{'item':>4} {'a':>5} {'b':>5} {'c':>5} "
          f"{'P(-1.5)':>8} {'P(0)':>6} {'P(1.5)':>7}")
    for idx in (0, 9, 19):
        it = bank[idx]
        probs = [icc_probability(it, t) for t in (-1.5, 0.0, 1.5)]
        print(f"{idx + 1:>4} {it.a:>5.2f} {it.b:>5.2f} {it.c:>5.2f} "
              f"{probs[0]:>8.3f} {probs[1]:>6.3f} {probs[2]:>7.3f}")

    grid = np.linspace(-4.0, 4.0, 801)
    print("\nwhere each of those items is most informative:")
    for idx in (0, 9, 19):
        info = item_information(bank[idx], grid)
        peak = grid[int(np.argmax(info))]
        print(f"  item {idx + 1:2d}: peak {info.max():.3f} at theta {peak:+.2f}")

    tif = test_information(bank, grid)
    tse = test_standard_error(bank, grid)
    peak = int(np.argmax(tif))
    print(f"\nwhole bank: TIF peaks at theta {grid[peak]:+.2f} "
          f"(TIF {tif[peak]:.2f}, TSE {tse[peak]:.3f})")

    print("\nreporting scale (T = 10 * theta + 50):")
    for theta in (-1.5, -1.0, -0.7, -0.4, 0.5, 1.5):
        level = performance_level(theta)
        print(f"  theta {theta:+.2f} -> T {t_score(theta):5.1f} -> {level.label}")


if __name__ == "__main__":
    main()
