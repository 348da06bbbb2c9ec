"""
Chronologies: reading lifespans off a prefix and rebuilding stages
==================================================================

Each element of an evolution has an appearance index and a disappearance
index (one past its last stage).  Reading them off a finite prefix only
works for elements whose occupancy closes before the horizon; rebuilding
stages from appearance/disappearance rules needs every lifespan to span at
least two stages, and every stage to see both a birth and a death.
"""

from setevo import (
    Chronology,
    ChronologyInfeasible,
    Ground,
    chronology_of,
    example_square,
    from_chronology,
    naturals,
)

# reading: element 9 of the square model lives in stages 2..9
reading = chronology_of(example_square(), horizon=12)
print("square model, element 9: appears", reading.appears[9], "vanishes", reading.vanishes[9])
print("square model, element 1: appears", reading.appears[1], "vanishes", reading.vanishes[1])
print("still open at the horizon:", sorted(reading.undetermined)[:5], "...")

# rebuilding: interleaved two- and three-stage lifespans on the naturals
chron = Chronology.from_rules(
    appearance=lambda x: x // 2,
    disappearance=lambda x: x // 2 + 2 + (x % 2),
    label="interleaved",
)
evo = from_chronology(chron, naturals(0))
print()
print("interleaved stages:")
for k in range(1, 6):
    print(f"  stage {k}: {sorted(evo.stage(k))}")

# the same reading/rebuilding loop closes on itself
recovered = chronology_of(evo, horizon=20)
x = 6
print()
print(f"element {x}: rule gives A={chron.appearance(x)}, D={chron.disappearance(x)};",
      f"reading gives A={recovered.appears[x]}, D={recovered.vanishes[x]}")

# lifespans shorter than two stages cannot produce churn
try:
    bad = from_chronology(
        Chronology.from_table({"a": 0}, {"a": 1}), Ground.finite(["a"])
    )
    bad.stage(1)
except ChronologyInfeasible as exc:
    print()
    print("rejected:", exc)
