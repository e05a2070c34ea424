"""Tune the knowledge base's membership functions against 3PL targets.

Samples a training set from a simulated cohort, then lets the particle
swarm reshape the 76 trapezoid coordinates until the rule-base output
tracks the 3PL curve; the genetic trainer runs on the same budget for
comparison.
"""

from fuzzyirt import (
    LearnConfig,
    PinningMethod,
    default_assessment_kb,
    fitness,
    generate_cohort,
    generate_training_set,
    gfml_train,
    pfml_train,
)


def main():
    items, thetas, _ = generate_cohort()
    data = generate_training_set(items, thetas, mode="sampled",
                                 n_rows=300, rng_seed=0)
    seed_mse = fitness(default_assessment_kb(), data)
    print(f"training set: {data.inputs.shape[0]} rows; "
          f"stock KB MSE {seed_mse:.5f}")

    cfg = LearnConfig(method=PinningMethod.PINNED_ENDPOINTS,
                      max_generations=15, fitness_target=0.5 * seed_mse,
                      rng_seed=0)
    swarm = pfml_train(data, cfg)
    print(f"\nswarm ({cfg.method.name.lower()}): "
          f"{swarm.metadata['generations']} generations, "
          f"MSE {swarm.history[-1]:.5f}")
    print(f"  best-so-far: {[round(float(h), 5) for h in swarm.history[:6]]} ...")

    genetic = gfml_train(data, cfg)
    print(f"genetic: {genetic.metadata['generations']} generations, "
          f"MSE {genetic.history[-1]:.5f}")

    tuned = swarm.system.variable("CorrectResponsePossibility")
    stock = default_assessment_kb().variable("CorrectResponsePossibility")
    print("\noutput terms before -> after (swarm):")
    for s_term, t_term in zip(stock.sets, tuned.sets):
        before = tuple(round(p, 2) for p in s_term.points)
        after = tuple(round(p, 2) for p in t_term.points)
        print(f"  {s_term.name:>9}: {before} -> {after}")


if __name__ == "__main__":
    main()
