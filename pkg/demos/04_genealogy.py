"""
Genealogies: marriages, children, and generational stages
=========================================================

A genealogy model partitions a population into males and females, marries
some pairs through a bijection, and assigns mothers through a reproduction
map.  Children of the couple (x, m(x)) are the reproduction preimage of the
wife.  Iterating children-of-married-males builds a staged evolution whose
stage k holds generations k and k+1; on finite populations the line dies
out and the last nonempty stage pair fails the churn condition -- expected,
and reported rather than hidden.
"""

from setevo import (
    Couple,
    FoundersInvalid,
    ancestry_check,
    check_axioms,
    children_of,
    founders,
    generational_evolution,
    prime_model,
    toy_three_generation_model,
)

# the arithmetic population: odds marry their successors, the prime
# counting function assigns mothers
model = prime_model(100)
print("m(9) =", model.marriage[9])
print("rho(9) = 2*pi(9) =", model.reproduction[9])
print("children of (9, 10):", sorted(children_of(model, Couple(9, 10))))
print("children of (1, 2): ", sorted(children_of(model, Couple(1, 2))))
m_founders, f_founders = founders(model)
print("founders:", sorted(m_founders), "/", sorted(f_founders))

# no female founders means no valid seed generation
try:
    generational_evolution(model, m_founders, frozenset({2}), 4)
except FoundersInvalid as exc:
    print("seeding rejected:", str(exc)[:60], "...")

# a six-member chain runs for three generations and dies out
toy, m1, f1 = toy_three_generation_model()
trace, evolution = generational_evolution(toy, m1, f1, horizon=5)
print()
for k, stage in enumerate(trace.stages, start=1):
    print(f"stage {k}:", sorted(stage) or "(empty)")

report = check_axioms(evolution, 8)
print()
print("churn verdict:", report.verdicts[2], "-- the terminal generation brings no arrivals")
for violation in report.violations_for(2):
    print("  ", violation.render())

ancestry = ancestry_check(toy, trace.generations)
for line in ancestry.lines():
    print(line)
print("placement (children never precede their parents):",
      "PASS" if trace.placement_ok else "FAIL")
