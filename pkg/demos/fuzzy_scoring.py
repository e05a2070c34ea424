"""Score response chances with the fuzzy rule base instead of the 3PL.

Builds the stock knowledge base, generates its full rule grid, and
compares the inferred correct-response possibility against the 3PL
probability for a few item/student pairings. Also prints the head of
the XML form the knowledge base travels in.
"""

from fuzzyirt import (
    ItemParams,
    build_rule_base,
    default_assessment_kb,
    icc_probability,
    infer,
    serialize_fml,
)

SCENARIOS = [
    ("weak student, easy item", ItemParams(0.9, -1.5, 0.15), -1.8),
    ("weak student, hard item", ItemParams(1.3, 1.8, 0.20), -1.8),
    ("strong student, hard item", ItemParams(1.3, 1.8, 0.20), 2.0),
    ("average student, average item", ItemParams(1.0, 0.3, 0.22), 0.0),
]


def main():
    kb = default_assessment_kb()
    system = build_rule_base(kb)
    print(f"knowledge base: {[v.name for v in system.variables]}")
    print(f"rule base: {len(system.rules)} rules "
          f"(e.g. {system.rules[0].name}: "
          f"{' & '.join(t for _, t in system.rules[0].antecedent)} -> "
          f"{system.rules[0].consequent[1]})")

    print(f"\n{'scenario':>30} {'CRP':>6} {'3PL':>6}")
    for label, item, theta in SCENARIOS:
        crp = infer(system, {"Discrimination": item.a, "Difficulty": item.b,
                             "Guessing": item.c, "Ability": theta})
        p = icc_probability(item, theta)
        print(f"{label:>30} {crp.value:>6.3f} {p:>6.3f}")

    print("\nserialized knowledge base starts like this:")
    for line in serialize_fml(kb).splitlines()[:7]:
        print(f"  {line}")


if __name__ == "__main__":
    main()
