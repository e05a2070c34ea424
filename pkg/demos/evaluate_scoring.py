"""Cross-validate fuzzy scoring before and after membership tuning.

Splits a simulated cohort into folds; per fold, calibrates items on
the training students, tunes the knowledge base against the fitted
curves, and scores every held-out response cell three ways: the stock
rule base, the tuned rule base, and the fitted 3PL itself. Budgets are
trimmed for demo speed, so expect noisy fold-level AUCs; the shipped
acceptance gate runs the full-size version.
"""

from fuzzyirt import CohortSpec, evaluate_kfold, generate_cohort


def main():
    spec = CohortSpec(n_students=300, n_items=21, items_per_form=13,
                      c_low=0.2, c_high=0.5)
    _, _, matrix = generate_cohort(spec)
    print(f"cohort: {matrix.n_students} students x {matrix.n_items} items")

    outcomes = evaluate_kfold(matrix, k=2, rng_seed=0, method="pfml2",
                              train_rows=200, max_sweeps=10,
                              max_generations=30)
    print(f"\n{'fold':>4} {'test n':>6} {'stock':>7} {'tuned':>7} {'3PL':>7}")
    wins = 0
    for o in outcomes:
        before, after = o.auc_test["before"], o.auc_test["after"]
        wins += after >= before
        print(f"{o.fold:>4} {len(o.test_ids):>6} {before:>7.3f} "
              f"{after:>7.3f} {o.auc_test['threepl']:>7.3f}")
    print(f"\ntuned >= stock on {wins}/{len(outcomes)} held-out folds")


if __name__ == "__main__":
    main()
